#include "sneakbench/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "sneakbench/errors.hpp"

namespace sneakbench {

void KinematicSeries::for_each_segment(
    const std::function<void(std::span<const KinematicFrame>)>& fn) const {
    for (std::size_t s = 0; s < segment_begin.size(); ++s) {
        const std::size_t begin = segment_begin[s];
        const std::size_t end = (s + 1 < segment_begin.size()) ? segment_begin[s + 1] : frames.size();
        fn(std::span<const KinematicFrame>(frames.data() + begin, end - begin));
    }
}

KinematicSeries derive_kinematics(const MotionTrace& trace, DeviceId device,
                                  const KinematicsOptions& opts) {
    if (!trace.has(device)) {
        throw EmptyDeviceError(std::string("missing device: ") + to_string(device));
    }
    const auto& ch = trace.channel(device);
    if (device == DeviceId::Gamepad) {
        throw EmptyDeviceError("gamepad records carry no positions");
    }
    if (ch.size() < 2) {
        throw EmptyDeviceError(std::string("need at least 2 samples for ") + to_string(device));
    }

    KinematicSeries out;
    out.device = device;
    bool open_segment = false;
    double prev_speed = 0.0;
    bool have_prev_speed = false;

    for (std::size_t i = 1; i < ch.size(); ++i) {
        const double dt = ch[i].t - ch[i - 1].t;
        if (dt <= 0.0) {
            throw NonMonotonicTimeError(std::string("timestamps must strictly increase (") +
                                        to_string(device) + ")");
        }
        if (dt > opts.max_gap) {
            // Differencing across a dropout would fabricate spurious peaks.
            open_segment = false;
            have_prev_speed = false;
            continue;
        }
        const Vec3 dp = ch[i].pos - ch[i - 1].pos;
        KinematicFrame f;
        f.t = ch[i].t;
        f.speed = dp.norm() / dt;
        f.hspeed = dp.ground().norm() / dt;
        f.decel = have_prev_speed ? std::max(0.0, (prev_speed - f.speed) / dt) : 0.0;
        if (!open_segment) {
            out.segment_begin.push_back(out.frames.size());
            open_segment = true;
        }
        out.frames.push_back(f);
        prev_speed = f.speed;
        have_prev_speed = true;
    }
    return out;
}

KinematicSeries sliding_window_filter(const KinematicSeries& series, int window) {
    if (window < 1 || window % 2 == 0) {
        throw InvalidWindowError("filter window must be odd and >= 1");
    }
    if (window == 1) return series;

    KinematicSeries out = series;
    const int half = window / 2;
    std::vector<double> buf(static_cast<std::size_t>(window));

    for (std::size_t s = 0; s < series.segment_begin.size(); ++s) {
        const std::size_t begin = series.segment_begin[s];
        const std::size_t end =
            (s + 1 < series.segment_begin.size()) ? series.segment_begin[s + 1] : series.frames.size();
        const long n = static_cast<long>(end - begin);
        for (long j = 0; j < n; ++j) {
            for (int k = -half; k <= half; ++k) {
                const long idx = std::clamp(j + k, 0L, n - 1);
                buf[static_cast<std::size_t>(k + half)] =
                    series.frames[begin + static_cast<std::size_t>(idx)].decel;
            }
            std::nth_element(buf.begin(), buf.begin() + half, buf.end());
            out.frames[begin + static_cast<std::size_t>(j)].decel = buf[static_cast<std::size_t>(half)];
        }
    }
    return out;
}

namespace {

MotionSample lerp_sample(const MotionSample& a, const MotionSample& b, double t) {
    const double u = (t - a.t) / (b.t - a.t);
    MotionSample s;
    s.t = t;
    s.device = a.device;
    s.pos = a.pos + (b.pos - a.pos) * u;
    s.pad = (u >= 1.0 && b.pad) ? b.pad : a.pad;  // zero-order hold for gamepad input
    return s;
}

}  // namespace

MotionTrace resample_trace(const MotionTrace& trace, double rate_hz) {
    if (rate_hz <= 0.0) {
        throw Error("resample rate must be > 0");
    }
    MotionTrace out;
    for (const auto& [device, ch] : trace.channels()) {
        if (ch.size() < 2) {
            throw EmptyDeviceError(std::string("need at least 2 samples for ") + to_string(device));
        }
        const double t0 = ch.front().t;
        const double t_end = ch.back().t;
        const auto count = static_cast<std::size_t>(
            std::floor((t_end - t0) * rate_hz + 1e-9));
        std::size_t src = 0;
        for (std::size_t k = 0; k <= count; ++k) {
            const double t = t0 + static_cast<double>(k) / rate_hz;
            while (src + 2 < ch.size() && ch[src + 1].t <= t) ++src;
            out.append(lerp_sample(ch[src], ch[src + 1], std::min(t, t_end)));
        }
    }
    return out;
}

}  // namespace sneakbench
