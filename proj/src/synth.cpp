#include "sneakbench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <random>

#include "sneakbench/errors.hpp"

namespace sneakbench {

namespace {

// mt19937_64 with explicit uniform/normal mappings so traces are
// byte-reproducible across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = std::max(uniform(), 1e-300);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // 1 + rel * z with z clamped to +-1.5 sigma.
    double jitter_factor(double rel) { return 1.0 + rel * std::clamp(normal(), -1.5, 1.5); }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Arc-length parametrized polyline.
class PathWalk {
public:
    explicit PathWalk(const PathSpec& spec) : spec_(spec) {
        spec.validate();
        cum_.push_back(0.0);
        for (std::size_t i = 1; i < spec.waypoints.size(); ++i) {
            cum_.push_back(cum_.back() +
                           spec.waypoints[i].pos.dist(spec.waypoints[i - 1].pos));
        }
    }

    double total() const { return cum_.back(); }
    std::size_t waypoint_count() const { return spec_.waypoints.size(); }
    double waypoint_arc(std::size_t i) const { return cum_[i]; }
    double dwell(std::size_t i) const { return spec_.waypoints[i].dwell; }

    Vec2 point(double s) const {
        s = std::clamp(s, 0.0, total());
        std::size_t i = leg_of(s);
        if (i + 1 >= spec_.waypoints.size()) return spec_.waypoints.back().pos;
        const double leg = cum_[i + 1] - cum_[i];
        const double u = leg > 0.0 ? (s - cum_[i]) / leg : 0.0;
        const Vec2 a = spec_.waypoints[i].pos;
        const Vec2 b = spec_.waypoints[i + 1].pos;
        return a + (b - a) * u;
    }

    Vec2 dir(double s) const {
        if (spec_.waypoints.size() < 2) return {1.0, 0.0};
        std::size_t i = leg_of(std::clamp(s, 0.0, total()));
        if (i + 1 >= spec_.waypoints.size()) i = spec_.waypoints.size() - 2;
        return (spec_.waypoints[i + 1].pos - spec_.waypoints[i].pos).normalized();
    }

private:
    std::size_t leg_of(double s) const {
        auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
        const auto idx = static_cast<std::size_t>(it - cum_.begin());
        return idx == 0 ? 0 : idx - 1;
    }

    PathSpec spec_;
    std::vector<double> cum_;
};

// Per-frame displacement speeds of one swing: rise, cruise, a fall whose
// per-frame decels rise monotonically (never a local maximum), and the
// final ramp_frames at constant decel target_d. plateau_begin indexes the
// first constant-decel frame.
struct SwingShape {
    std::vector<double> speeds;
    std::size_t plateau_begin = 0;
};

SwingShape build_swing(int n_frames, double length, double v_peak, double target_d,
                       int ramp_frames, double dt) {
    const int m = ramp_frames;
    const double step_drop = target_d * dt;  // per-frame speed loss on the ramp
    const double v_land = step_drop * m;
    const double cap = 0.9 * target_d;

    double vp = std::max(v_peak, v_land * 1.5);
    for (int attempt = 0; attempt < 60; ++attempt) {
        const double fall_delta = vp - v_land;
        // Smallest fall length whose sqrt-shaped decel ramp covers the drop.
        int F = 1;
        double sum_shape = 0.0;
        for (; F < 4000; ++F) {
            sum_shape = 0.0;
            for (int i = 1; i <= F; ++i) sum_shape += std::sqrt(static_cast<double>(i) / F);
            if (cap * dt * sum_shape >= fall_delta) break;
        }
        const int R = std::max(2, n_frames / 8);
        const int C = n_frames - R - F - m;
        if (C < 0) {
            vp *= 0.85;
            continue;
        }
        const double rho = fall_delta / (cap * dt * sum_shape);

        SwingShape shape;
        shape.speeds.reserve(static_cast<std::size_t>(n_frames));
        for (int i = 1; i <= R; ++i) shape.speeds.push_back(vp * i / R);
        for (int i = 0; i < C; ++i) shape.speeds.push_back(vp);
        double f = vp;
        for (int i = 1; i <= F; ++i) {
            f -= rho * cap * std::sqrt(static_cast<double>(i) / F) * dt;
            shape.speeds.push_back(i == F ? v_land : f);
        }
        shape.plateau_begin = shape.speeds.size();
        for (int i = 1; i <= m; ++i) {
            shape.speeds.push_back(i == m ? 0.0 : v_land - step_drop * i);
        }

        double base = 0.0;  // displacement of the untouchable fall + ramp
        for (std::size_t i = shape.plateau_begin - static_cast<std::size_t>(F);
             i < shape.speeds.size(); ++i) {
            base += shape.speeds[i] * dt;
        }
        double flex = 0.0;
        for (int i = 0; i < R + C; ++i) flex += shape.speeds[static_cast<std::size_t>(i)] * dt;
        const double sigma = (length - base) / flex;
        if (sigma > 1.0) {
            vp *= std::min(1.6, sigma * 1.05);
            continue;
        }
        if (sigma <= 0.05) {
            vp *= 0.8;
            continue;
        }
        for (int i = 0; i < R + C; ++i) shape.speeds[static_cast<std::size_t>(i)] *= sigma;
        return shape;
    }
    throw Error("cannot construct a swing profile for these parameters");
}

constexpr double kFootHeight = 0.05;
constexpr double kLateralOffset = 0.06;
constexpr double kLeadIn = 0.4;    // stance before the first swing, seconds
constexpr double kTailOut = 0.5;   // stance after the last swing, seconds

struct ScheduledSwing {
    std::size_t start_frame = 0;
    int foot = 0;  // 0 = left, 1 = right
    SwingShape shape;
};

}  // namespace

GaitClass GaitProfile::gait_label() const {
    switch (label) {
        case StepIntensity::SneakStep: return GaitClass::Sneaking;
        case StepIntensity::WalkStep: return GaitClass::Walking;
        case StepIntensity::Stomp: return GaitClass::Running;
    }
    return GaitClass::Sneaking;
}

GaitProfile GaitProfile::sneak() {
    return {StepIntensity::SneakStep, 1.0, 0.30, 0.8, 3.0, 0.65, 0.05, 3};
}

GaitProfile GaitProfile::walk() {
    return {StepIntensity::WalkStep, 1.7, 0.55, 2.0, 10.0, 0.58, 0.05, 3};
}

GaitProfile GaitProfile::stomp() {
    return {StepIntensity::Stomp, 2.5, 0.70, 3.2, 22.0, 0.50, 0.05, 3};
}

std::optional<GaitProfile> GaitProfile::by_name(std::string_view name) {
    if (name == "sneak") return sneak();
    if (name == "walk") return walk();
    if (name == "stomp") return stomp();
    return std::nullopt;
}

void PathSpec::validate() const {
    if (waypoints.empty()) throw Error("path needs at least one waypoint");
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        if (waypoints[i].pos.dist(waypoints[i - 1].pos) < 1e-12) {
            throw Error("consecutive path waypoints must be distinct");
        }
        if (waypoints[i].dwell < 0.0) throw Error("dwell must be >= 0");
    }
}

double PathSpec::length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        total += waypoints[i].pos.dist(waypoints[i - 1].pos);
    }
    return total;
}

namespace {

void check_profile(const GaitProfile& p, double rate) {
    if (p.cadence <= 0.0 || p.step_length <= 0.0 || p.touchdown_decel_target <= 0.0 ||
        p.stance_ratio <= 0.0 || p.stance_ratio >= 1.0 || p.ramp_frames < 1 || p.jitter < 0.0) {
        throw Error("bad gait profile");
    }
    if (rate < 20.0 * p.cadence) {
        throw RateTooLowError("sample rate must be at least 20 x cadence to resolve touchdowns");
    }
}

MotionTrace stationary_feet(const PathWalk& walk, double rate, double duration) {
    MotionTrace trace;
    const Vec2 p = walk.point(0.0);
    const auto frames = static_cast<std::size_t>(duration * rate);
    for (std::size_t i = 0; i <= frames; ++i) {
        const double t = static_cast<double>(i) / rate;
        for (DeviceId foot : {DeviceId::LeftFoot, DeviceId::RightFoot}) {
            const double lat = (foot == DeviceId::LeftFoot ? -kLateralOffset : kLateralOffset);
            trace.append({t, foot, {p.x + lat, kFootHeight, p.z}, std::nullopt});
        }
    }
    return trace;
}

}  // namespace

SynthResult synth_feet(const GaitProfile& profile, const PathSpec& path, double rate,
                       std::uint64_t seed) {
    check_profile(profile, rate);
    const PathWalk walk(path);
    const double dt = 1.0 / rate;
    Rng rng(seed);

    double total_dwell = 0.0;
    for (std::size_t i = 0; i < walk.waypoint_count(); ++i) total_dwell += walk.dwell(i);
    if (walk.total() < 1e-9) {
        return {stationary_feet(walk, rate, total_dwell + 1.0), {}};
    }

    const Vec2 first_dir = walk.dir(0.0);
    const Vec2 lateral{-first_dir.z, first_dir.x};  // fixed so corners do not jump

    const int m = profile.ramp_frames;
    const double min_advance = profile.touchdown_decel_target * m * dt * dt * (m + 1);
    const int n_sw =
        std::max(m + 4, static_cast<int>(std::lround((1.0 - profile.stance_ratio) * 2.0 * rate /
                                                     profile.cadence)));

    std::vector<ScheduledSwing> swings;
    std::vector<GroundTruthStep> truth;
    double arc[2] = {0.0, 0.0};
    std::size_t last_end[2] = {0, 0};
    double clock = kLeadIn + walk.dwell(0);
    std::size_t next_wp = 1;
    bool done[2] = {false, false};

    for (int k = 0; !(done[0] && done[1]) && k < 200000; ++k) {
        const int foot = k % 2;
        const double f_int = rng.jitter_factor(profile.jitter);
        const double f_len = rng.jitter_factor(profile.jitter);
        const double f_vp = rng.jitter_factor(profile.jitter);
        const double f_d = rng.jitter_factor(profile.jitter);
        if (done[foot]) continue;

        const double target = std::min(arc[foot] + profile.step_length * f_len, walk.total());
        const double advance = target - arc[foot];
        if (advance < min_advance) {
            done[foot] = true;
            continue;
        }
        while (next_wp < walk.waypoint_count() && walk.waypoint_arc(next_wp) <= target + 1e-12) {
            clock += walk.dwell(next_wp);
            ++next_wp;
        }

        ScheduledSwing sw;
        sw.foot = foot;
        sw.start_frame = std::max(static_cast<std::size_t>(std::ceil(clock * rate - 1e-9)),
                                  last_end[foot]);
        try {
            sw.shape = build_swing(n_sw, advance, profile.swing_peak_speed * f_vp,
                                   profile.touchdown_decel_target * f_d, m, dt);
        } catch (const Error&) {
            // Only the final partial step at the path end can be infeasible.
            done[foot] = true;
            continue;
        }
        last_end[foot] = sw.start_frame + sw.shape.speeds.size();

        const std::size_t gt_frame = sw.start_frame + sw.shape.plateau_begin +
                                     static_cast<std::size_t>((m - 1) / 2);
        truth.push_back({static_cast<double>(gt_frame) * dt,
                         foot == 0 ? DeviceId::LeftFoot : DeviceId::RightFoot, profile.label});

        swings.push_back(std::move(sw));
        arc[foot] = target;
        clock += f_int / profile.cadence;
    }

    std::size_t total_frames = static_cast<std::size_t>(kTailOut * rate);
    for (const auto& sw : swings) total_frames = std::max(total_frames, sw.start_frame + sw.shape.speeds.size());
    total_frames += static_cast<std::size_t>(kTailOut * rate);

    // Rasterize each foot over the shared grid.
    MotionTrace trace;
    for (int foot = 0; foot < 2; ++foot) {
        const DeviceId dev = foot == 0 ? DeviceId::LeftFoot : DeviceId::RightFoot;
        const double lat = foot == 0 ? -kLateralOffset : kLateralOffset;
        double a = 0.0;
        std::size_t swing_idx = 0;
        const ScheduledSwing* active = nullptr;
        std::size_t active_offset = 0;
        std::vector<const ScheduledSwing*> mine;
        for (const auto& sw : swings) {
            if (sw.foot == foot) mine.push_back(&sw);
        }
        for (std::size_t i = 0; i < total_frames; ++i) {
            if (!active && swing_idx < mine.size() && i >= mine[swing_idx]->start_frame) {
                active = mine[swing_idx];
                active_offset = 0;
            }
            if (active) {
                a += active->shape.speeds[active_offset] * dt;
                ++active_offset;
                if (active_offset >= active->shape.speeds.size()) {
                    active = nullptr;
                    ++swing_idx;
                }
            }
            const Vec2 p = walk.point(a) + lateral * lat;
            trace.append({static_cast<double>(i) * dt, dev, {p.x, kFootHeight, p.z}, std::nullopt});
        }
    }
    return {std::move(trace), std::move(truth)};
}

MotionTrace synth_hmd(const GaitProfile& profile, const PathSpec& path, double rate,
                      std::uint64_t seed, double height) {
    check_profile(profile, rate);
    const PathWalk walk(path);
    const double dt = 1.0 / rate;
    Rng rng(seed);
    const double phase = rng.uniform() * 2.0 * std::numbers::pi;

    const double v = profile.cadence * profile.step_length;
    double total_dwell = 0.0;
    for (std::size_t i = 0; i < walk.waypoint_count(); ++i) total_dwell += walk.dwell(i);
    const double duration = walk.total() / v + total_dwell + (walk.total() < 1e-9 ? 1.0 : 0.0);

    const Vec2 first_dir = walk.dir(0.0);
    const Vec2 lateral{-first_dir.z, first_dir.x};

    MotionTrace trace;
    const auto frames = static_cast<std::size_t>(std::floor(duration * rate)) + 1;
    double arc = 0.0;
    double dwell_left = walk.dwell(0);
    std::size_t next_wp = 1;
    for (std::size_t i = 0; i < frames; ++i) {
        const double t = static_cast<double>(i) * dt;
        if (i > 0) {
            if (dwell_left > 0.0) {
                dwell_left = std::max(0.0, dwell_left - dt);
            } else if (arc < walk.total()) {
                arc = std::min(arc + v * dt, walk.total());
                if (next_wp < walk.waypoint_count() && arc >= walk.waypoint_arc(next_wp) - 1e-12) {
                    dwell_left = walk.dwell(next_wp);
                    ++next_wp;
                }
            }
        }
        const double sway = 0.01 * std::sin(std::numbers::pi * profile.cadence * t + phase);
        const double bob = 0.02 * std::sin(2.0 * std::numbers::pi * profile.cadence * t + phase);
        const Vec2 p = walk.point(arc) + lateral * sway;
        trace.append({t, DeviceId::Hmd, {p.x, height + bob, p.z}, std::nullopt});
    }
    return trace;
}

SynthResult synth_full(const GaitProfile& profile, const PathSpec& path, double rate,
                       std::uint64_t seed, double height) {
    SynthResult feet = synth_feet(profile, path, rate, seed);
    Rng rng(seed ^ 0xABCDEF1234567890ULL);
    const double phase = rng.uniform() * 2.0 * std::numbers::pi;
    const double dt = 1.0 / rate;

    MotionTrace out = std::move(feet.trace);
    const auto& left = out.channel(DeviceId::LeftFoot);
    const auto& right = out.channel(DeviceId::RightFoot);
    const std::size_t n = std::min(left.size(), right.size());

    const Vec2 first_dir = path.waypoints.size() > 1
                               ? (path.waypoints[1].pos - path.waypoints[0].pos).normalized()
                               : Vec2{1.0, 0.0};
    const Vec2 lateral{-first_dir.z, first_dir.x};

    // Trailing mean over roughly one step cycle keeps the head from bobbing
    // forward step-wise.
    const auto window = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(rate * 1.2 / profile.cadence)));
    std::vector<Vec2> mid(n);
    for (std::size_t i = 0; i < n; ++i) {
        mid[i] = (left[i].pos.ground() + right[i].pos.ground()) * 0.5;
    }
    Vec2 prev_smoothed{};
    Vec2 running_sum{};
    std::size_t count = 0;
    const bool sneak_flag = profile.label == StepIntensity::SneakStep;
    for (std::size_t i = 0; i < n; ++i) {
        running_sum = running_sum + mid[i];
        ++count;
        if (count > window) {
            running_sum = running_sum - mid[i - window];
            --count;
        }
        const Vec2 smoothed = running_sum * (1.0 / static_cast<double>(count));
        const double t = left[i].t;
        const double sway = 0.01 * std::sin(std::numbers::pi * profile.cadence * t + phase);
        const double bob = 0.02 * std::sin(2.0 * std::numbers::pi * profile.cadence * t + phase);
        const Vec2 p = smoothed + lateral * sway;
        out.append({t, DeviceId::Hmd, {p.x, height + bob, p.z}, std::nullopt});

        GamepadInput pad;
        pad.sneak = sneak_flag;
        if (i > 0) {
            const Vec2 motion = smoothed - prev_smoothed;
            if (motion.norm() > 1e-6 * dt) {
                const Vec2 d = motion.normalized();
                pad.ax = d.x;
                pad.ay = d.z;
            }
        }
        MotionSample pad_sample;
        pad_sample.t = t;
        pad_sample.device = DeviceId::Gamepad;
        pad_sample.pad = pad;
        out.append(pad_sample);
        prev_smoothed = smoothed;
    }
    return {std::move(out), std::move(feet.truth)};
}

MotionTrace inject_spikes(const MotionTrace& trace, int count, double magnitude,
                          std::uint64_t seed) {
    if (count < 0) throw Error("spike count must be >= 0");
    if (count == 0) return trace;
    if (magnitude <= 0.0) throw Error("spike magnitude must be > 0");

    struct Slot {
        DeviceId device;
        std::size_t index;
    };
    std::vector<Slot> eligible;
    for (const auto& [device, ch] : trace.channels()) {
        if (device == DeviceId::Gamepad) continue;
        if (ch.size() < 5) continue;
        for (std::size_t j = 1; j + 2 < ch.size(); ++j) {
            // The displaced frame and both measurement neighbours must be at
            // rest so the spike lands as exactly one isolated decel frame.
            const Vec3 base = ch[j].pos;
            bool still = true;
            for (std::size_t q = j - 1; q <= j + 2 && still; ++q) {
                still = (ch[q].pos - base).norm() < 1e-12;
            }
            if (still) eligible.push_back({device, j});
        }
    }

    Rng rng(seed);
    // Fisher-Yates with the portable generator.
    for (std::size_t i = eligible.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.raw() % i);
        std::swap(eligible[i - 1], eligible[j]);
    }

    std::map<DeviceId, std::vector<std::size_t>> chosen;
    int placed = 0;
    for (const Slot& slot : eligible) {
        if (placed == count) break;
        auto& used = chosen[slot.device];
        bool ok = true;
        for (std::size_t u : used) {
            if (std::llabs(static_cast<long long>(u) - static_cast<long long>(slot.index)) < 3) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        used.push_back(slot.index);
        ++placed;
    }
    if (placed < count) {
        throw TooCrowdedError("cannot place " + std::to_string(count) +
                              " spikes with the required spacing");
    }

    MotionTrace out;
    for (const auto& [device, ch] : trace.channels()) {
        const auto it = chosen.find(device);
        for (std::size_t j = 0; j < ch.size(); ++j) {
            MotionSample s = ch[j];
            if (it != chosen.end() &&
                std::find(it->second.begin(), it->second.end(), j) != it->second.end()) {
                const double dt_up = ch[j + 1].t - ch[j].t;
                const double dt_dn = ch[j + 2].t - ch[j + 1].t;
                s.pos.y += magnitude * dt_up * dt_dn;  // teleport out; next frame snaps back
            }
            out.append(s);
        }
    }
    return out;
}

}  // namespace sneakbench
