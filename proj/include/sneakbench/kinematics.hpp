#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sneakbench/trace.hpp"

namespace sneakbench {

// Backward-difference kinematics of one sample pair. decel stores the
// magnitude of the negative speed change per second and is 0 while the
// device accelerates or holds speed.
struct KinematicFrame {
    double t = 0.0;
    double speed = 0.0;   // |d pos| / dt, full 3-D
    double hspeed = 0.0;  // ground-plane projection only
    double decel = 0.0;   // max(0, (speed_prev - speed) / dt)
};

// Frames for one device. A gap larger than max_gap splits the series into
// segments; no frame is computed across a gap and filtering/peak picking
// never look across segment boundaries.
struct KinematicSeries {
    DeviceId device = DeviceId::Hmd;
    std::vector<KinematicFrame> frames;
    std::vector<std::size_t> segment_begin;  // first frame index of each segment

    void for_each_segment(const std::function<void(std::span<const KinematicFrame>)>& fn) const;
};

struct KinematicsOptions {
    double max_gap = 0.2;  // seconds
};

// Throws EmptyDeviceError (absent device or < 2 positional samples) and
// NonMonotonicTimeError.
KinematicSeries derive_kinematics(const MotionTrace& trace, DeviceId device,
                                  const KinematicsOptions& opts = {});

// Replaces each decel value by the median of the surrounding window
// (indices clamped at segment edges). window must be odd and >= 1;
// window 1 is the identity. Timestamps, speed and hspeed are unchanged.
KinematicSeries sliding_window_filter(const KinematicSeries& series, int window);

// Per device: uniform grid at rate_hz spanning [first, last] timestamp.
// Positions are linearly interpolated; gamepad axes and the sneak flag are
// held from the preceding record.
MotionTrace resample_trace(const MotionTrace& trace, double rate_hz);

}  // namespace sneakbench
