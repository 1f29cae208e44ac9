#pragma once

#include <deque>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "sneakbench/kinematics.hpp"
#include "sneakbench/trace.hpp"

namespace sneakbench {

enum class GaitClass { Sneaking, Walking, Running };
enum class StepIntensity { SneakStep, WalkStep, Stomp };

const char* to_string(GaitClass c);
const char* to_string(StepIntensity i);
std::optional<GaitClass> gait_class_from_string(std::string_view s);
std::optional<StepIntensity> intensity_from_string(std::string_view s);

// A detected foot touchdown.
struct StepEvent {
    double t = 0.0;
    DeviceId foot = DeviceId::LeftFoot;
    double peak_decel = 0.0;
    StepIntensity intensity = StepIntensity::SneakStep;
};

// Peak-deceleration bands separating the gait classes. Values are
// configuration, not ground truth; recalibrate for real tracking data.
struct DecelThresholds {
    double step_floor = 2.0;  // below: not a step at all
    double walk_min = 8.0;
    double stomp_min = 18.0;

    void validate() const;
    StepIntensity classify(double peak) const;
};

struct GaitStateSample {
    double t = 0.0;
    GaitClass state = GaitClass::Sneaking;
};

// A sound emission the guard can hear. pos is the emitting device's
// position projected to the ground plane.
struct NoiseEvent {
    double t = 0.0;
    Vec2 pos{};
    StepIntensity intensity = StepIntensity::SneakStep;
};

struct ClassifierOutput {
    std::vector<GaitStateSample> states;
    std::vector<NoiseEvent> noises;
};

struct TrackerConfig {
    DecelThresholds thresholds{};
    int window = 3;             // median filter, frames
    double refractory = 0.25;   // min seconds between steps of one foot
    double lookback = 1.0;      // horizon for deriving the gait state from steps
    double run_interval = 0.35; // alternating-feet interval that counts as running
    double max_gap = 0.2;       // seconds; larger gaps split the series
};

struct HmdConfig {
    double sneak_max_hspeed = 0.4;  // m/s
    double window = 0.5;            // trailing mean, seconds
    double hysteresis_margin = 0.1; // m/s
    double noise_cadence = 0.5;     // synthetic WalkStep noise while walking, seconds
    double max_gap = 0.2;
};

struct GamepadConfig {
    double walk_speed = 1.5;   // m/s at full deflection
    double sneak_speed = 0.5;  // m/s cap while the sneak mode is held
    double noise_cadence = 0.5;
    Vec2 start_pos{};
};

// Steps from one already-filtered foot series: a StepEvent at each local
// decel maximum >= step_floor, later maxima within the refractory interval
// suppressed. Throws InvalidThresholdsError.
std::vector<StepEvent> detect_steps(const KinematicSeries& filtered, const DecelThresholds& th,
                                    double refractory = 0.25);

// --- streaming pipelines ---------------------------------------------------
// Each classifier is a sequential state machine over one input stream;
// feeding samples one by one and draining outputs yields exactly the batch
// result. Outputs become final after a short lookahead (median window plus
// one frame), or on finish().

// One foot: raw samples -> kinematics -> median filter -> peak picking.
class StepDetector {
public:
    StepDetector(DeviceId foot, const TrackerConfig& cfg);

    void push(double t, const Vec3& pos);
    void finish();

    std::vector<StepEvent> drain_steps();
    std::vector<NoiseEvent> drain_noises();
    std::vector<double> drain_frame_times();
    // All steps up to this time are decided. +inf after finish().
    double peak_decided_until() const { return peak_frontier_; }

private:
    struct Raw {
        KinematicFrame kin;
        Vec2 ground;
    };
    struct Filtered {
        double t;
        double decel;
        Vec2 ground;
    };

    void advance();
    void emit_filtered(std::size_t j, bool segment_closed);
    void decide_peak(const Filtered& left, const Filtered& mid,
                     const std::optional<Filtered>& right);
    void close_segment();

    DeviceId foot_;
    TrackerConfig cfg_;
    std::optional<MotionSample> prev_sample_;
    std::optional<double> prev_speed_;
    std::vector<Raw> seg_;
    std::size_t emitted_ = 0;  // filtered frames emitted in this segment
    std::optional<Filtered> pending_prev_;
    std::optional<Filtered> pending_mid_;
    std::optional<double> last_step_t_;
    double peak_frontier_ = -std::numeric_limits<double>::infinity();
    bool finished_ = false;

    std::vector<StepEvent> steps_out_;
    std::vector<NoiseEvent> noises_out_;
    std::vector<double> frames_out_;
};

// Both feet plus the step->state assembly. Samples from other devices are
// ignored so a full multi-device trace can be streamed straight through.
class TrackerClassifier {
public:
    explicit TrackerClassifier(const TrackerConfig& cfg);

    void push(const MotionSample& s);
    void finish();

    std::vector<GaitStateSample> drain_states();
    std::vector<NoiseEvent> drain_noises();
    std::vector<StepEvent> drain_steps();

private:
    void assemble();
    GaitClass state_at(double t) const;

    TrackerConfig cfg_;
    StepDetector left_;
    StepDetector right_;
    std::deque<double> ltimes_;
    std::deque<double> rtimes_;
    std::deque<StepEvent> lsteps_;
    std::deque<StepEvent> rsteps_;
    std::deque<NoiseEvent> lnoises_;
    std::deque<NoiseEvent> rnoises_;
    std::deque<StepEvent> recent_steps_;  // working set for state_at, ordered by t
    double last_state_t_ = -std::numeric_limits<double>::infinity();

    std::vector<GaitStateSample> states_out_;
    std::vector<NoiseEvent> noises_out_;
    std::vector<StepEvent> steps_out_;
};

class HmdClassifier {
public:
    explicit HmdClassifier(const HmdConfig& cfg);

    void push(const MotionSample& s);
    void finish() {}

    std::vector<GaitStateSample> drain_states();
    std::vector<NoiseEvent> drain_noises();

private:
    HmdConfig cfg_;
    std::optional<MotionSample> prev_;
    std::deque<std::pair<double, double>> window_;  // (t, hspeed)
    double window_sum_ = 0.0;
    GaitClass state_ = GaitClass::Sneaking;
    std::optional<double> noise_due_;

    std::vector<GaitStateSample> states_out_;
    std::vector<NoiseEvent> noises_out_;
};

struct PathSample {
    double t = 0.0;
    Vec2 pos{};
};

class GamepadModel {
public:
    explicit GamepadModel(const GamepadConfig& cfg);

    void push(const MotionSample& s);  // throws MissingAxesError
    void finish() {}

    std::vector<PathSample> drain_positions();
    std::vector<GaitStateSample> drain_states();
    std::vector<NoiseEvent> drain_noises();

private:
    GamepadConfig cfg_;
    Vec2 pos_;
    std::optional<double> prev_t_;
    Vec2 prev_velocity_{};
    GaitClass state_ = GaitClass::Sneaking;
    std::optional<double> noise_due_;

    std::vector<PathSample> positions_out_;
    std::vector<GaitStateSample> states_out_;
    std::vector<NoiseEvent> noises_out_;
};

// --- batch wrappers ---------------------------------------------------------

struct TrackerResult {
    std::vector<GaitStateSample> states;
    std::vector<NoiseEvent> noises;
    std::vector<StepEvent> steps;
};

struct GamepadResult {
    std::vector<PathSample> positions;
    std::vector<GaitStateSample> states;
    std::vector<NoiseEvent> noises;
};

TrackerResult tracker_classifier(const MotionTrace& trace, const TrackerConfig& cfg);
ClassifierOutput hmd_classifier(const MotionTrace& trace, const HmdConfig& cfg);
GamepadResult gamepad_model(const MotionTrace& trace, const GamepadConfig& cfg);

// --- calibration ------------------------------------------------------------

struct LabeledTrace {
    MotionTrace trace;
    GaitClass label = GaitClass::Sneaking;  // Running labels the stomp/run class
};

// Linear-interpolation percentile of a sample (q in [0,1]).
double percentile(std::vector<double> values, double q);

// Midpoint thresholds between per-class peak percentile bands. Throws
// InsufficientDataError and ClassOverlapError.
DecelThresholds calibrate_thresholds(const std::vector<LabeledTrace>& labeled,
                                     const TrackerConfig& cfg = {});

// Hand-display readout in [0,1]: 0 when silent or sneaking, otherwise the
// most recent peak relative to stomp_min, decaying to 0 over decay seconds.
double noise_indicator(const std::vector<StepEvent>& steps, double stomp_min, double t,
                       double decay = 1.0);

}  // namespace sneakbench
