#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sneakbench/gait.hpp"
#include "sneakbench/trace.hpp"

namespace sneakbench {

// Kinematic recipe for one gait class. touchdown_decel_target is the
// intended Figure-2-style peak the landing ramp produces; per-step jitter
// draws are clamped to 1.5 sigma so class bands stay disjoint.
struct GaitProfile {
    StepIntensity label = StepIntensity::SneakStep;
    double cadence = 1.0;                 // steps/s, both feet combined
    double step_length = 0.3;             // m advanced per swing
    double swing_peak_speed = 0.8;        // m/s
    double touchdown_decel_target = 3.0;  // m/s^2
    double stance_ratio = 0.65;           // fraction of the foot cycle on the ground
    double jitter = 0.0;                  // relative std-dev per step
    int ramp_frames = 3;                  // landing frames at constant decel

    GaitClass gait_label() const;

    static GaitProfile sneak();
    static GaitProfile walk();
    static GaitProfile stomp();
    static std::optional<GaitProfile> by_name(std::string_view name);
};

struct PathWaypoint {
    Vec2 pos{};
    double dwell = 0.0;  // seconds paused at this waypoint
};

struct PathSpec {
    std::vector<PathWaypoint> waypoints;

    void validate() const;  // >= 1 waypoint, consecutive waypoints distinct
    double length() const;
};

struct GroundTruthStep {
    double t = 0.0;
    DeviceId foot = DeviceId::LeftFoot;
    StepIntensity intensity = StepIntensity::SneakStep;
};

struct SynthResult {
    MotionTrace trace;
    std::vector<GroundTruthStep> truth;
};

// Alternating-feet trace along the path. Each swing advances one foot by
// step_length with a speed bump peaking near swing_peak_speed; the landing
// ramp decelerates to rest so the measured backward-difference decel peak
// equals touchdown_decel_target (exact on straight legs, before jitter).
// Throws RateTooLowError when rate < 20 x cadence.
SynthResult synth_feet(const GaitProfile& profile, const PathSpec& path, double rate,
                       std::uint64_t seed);

// HMD following the path at cadence x step_length with a small vertical bob
// and lateral sway.
MotionTrace synth_hmd(const GaitProfile& profile, const PathSpec& path, double rate,
                      std::uint64_t seed, double height = 1.7);

// Body-consistent multi-device trace: feet from synth_feet, an HMD that
// follows the smoothed feet midpoint, and a gamepad channel steering along
// the walked direction (sneak button held for sneak profiles).
SynthResult synth_full(const GaitProfile& profile, const PathSpec& path, double rate,
                       std::uint64_t seed, double height = 1.7);

// Inserts single-frame out-and-back position displacements on stationary
// stretches, each yielding one isolated decel spike of approximately the
// given magnitude. Placement stays >= 3 frames apart per device and clear
// of touchdowns (spikes only land where the foot is at rest). Throws
// TooCrowdedError when count spikes cannot be placed.
MotionTrace inject_spikes(const MotionTrace& trace, int count, double magnitude,
                          std::uint64_t seed);

}  // namespace sneakbench
