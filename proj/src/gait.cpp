#include "sneakbench/gait.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sneakbench/errors.hpp"

namespace sneakbench {

const char* to_string(GaitClass c) {
    switch (c) {
        case GaitClass::Sneaking: return "sneaking";
        case GaitClass::Walking: return "walking";
        case GaitClass::Running: return "running";
    }
    return "?";
}

const char* to_string(StepIntensity i) {
    switch (i) {
        case StepIntensity::SneakStep: return "sneak_step";
        case StepIntensity::WalkStep: return "walk_step";
        case StepIntensity::Stomp: return "stomp";
    }
    return "?";
}

std::optional<GaitClass> gait_class_from_string(std::string_view s) {
    for (GaitClass c : {GaitClass::Sneaking, GaitClass::Walking, GaitClass::Running}) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

std::optional<StepIntensity> intensity_from_string(std::string_view s) {
    for (StepIntensity i : {StepIntensity::SneakStep, StepIntensity::WalkStep, StepIntensity::Stomp}) {
        if (s == to_string(i)) return i;
    }
    return std::nullopt;
}

void DecelThresholds::validate() const {
    if (!(step_floor > 0.0 && step_floor < walk_min && walk_min < stomp_min)) {
        throw InvalidThresholdsError("thresholds must satisfy 0 < step_floor < walk_min < stomp_min");
    }
}

StepIntensity DecelThresholds::classify(double peak) const {
    if (peak >= stomp_min) return StepIntensity::Stomp;
    if (peak >= walk_min) return StepIntensity::WalkStep;
    return StepIntensity::SneakStep;
}

namespace {

// Local decel maxima >= floor, at least refractory seconds apart. A frame
// with a missing neighbour (segment edge) qualifies against the neighbours
// it has. The refractory clock spans segment boundaries.
template <typename Emit>
void scan_peaks(const KinematicSeries& series, double floor, double refractory, Emit&& emit) {
    std::optional<double> last_t;
    series.for_each_segment([&](std::span<const KinematicFrame> seg) {
        for (std::size_t j = 0; j < seg.size(); ++j) {
            const double d = seg[j].decel;
            if (d < floor) continue;
            if (j > 0 && d < seg[j - 1].decel) continue;
            if (j + 1 < seg.size() && d < seg[j + 1].decel) continue;
            if (last_t && seg[j].t - *last_t < refractory) continue;
            emit(seg[j].t, d);
            last_t = seg[j].t;
        }
    });
}

}  // namespace

std::vector<StepEvent> detect_steps(const KinematicSeries& filtered, const DecelThresholds& th,
                                    double refractory) {
    th.validate();
    if (refractory <= 0.0) throw Error("refractory must be > 0");
    std::vector<StepEvent> steps;
    scan_peaks(filtered, th.step_floor, refractory, [&](double t, double peak) {
        steps.push_back({t, filtered.device, peak, th.classify(peak)});
    });
    return steps;
}

// --- StepDetector ------------------------------------------------------------

StepDetector::StepDetector(DeviceId foot, const TrackerConfig& cfg) : foot_(foot), cfg_(cfg) {
    cfg_.thresholds.validate();
    if (cfg_.window < 1 || cfg_.window % 2 == 0) {
        throw InvalidWindowError("filter window must be odd and >= 1");
    }
}

void StepDetector::push(double t, const Vec3& pos) {
    MotionSample s;
    s.t = t;
    s.device = foot_;
    s.pos = pos;
    if (prev_sample_) {
        const double dt = t - prev_sample_->t;
        if (dt <= 0.0) {
            throw NonMonotonicTimeError(std::string("timestamps must strictly increase (") +
                                        to_string(foot_) + ")");
        }
        if (dt > cfg_.max_gap) {
            close_segment();
            prev_speed_.reset();
        } else {
            const Vec3 dp = pos - prev_sample_->pos;
            Raw r;
            r.kin.t = t;
            r.kin.speed = dp.norm() / dt;
            r.kin.hspeed = dp.ground().norm() / dt;
            r.kin.decel = prev_speed_ ? std::max(0.0, (*prev_speed_ - r.kin.speed) / dt) : 0.0;
            r.ground = pos.ground();
            seg_.push_back(r);
            prev_speed_ = r.kin.speed;
            advance();
        }
    }
    prev_sample_ = s;
}

void StepDetector::advance() {
    const std::size_t half = static_cast<std::size_t>(cfg_.window / 2);
    while (emitted_ + half + 1 <= seg_.size()) {
        emit_filtered(emitted_, false);
        ++emitted_;
    }
}

void StepDetector::emit_filtered(std::size_t j, bool /*segment_closed*/) {
    const long n = static_cast<long>(seg_.size());
    const int half = cfg_.window / 2;
    std::vector<double> buf(static_cast<std::size_t>(cfg_.window));
    for (int k = -half; k <= half; ++k) {
        const long idx = std::clamp(static_cast<long>(j) + k, 0L, n - 1);
        buf[static_cast<std::size_t>(k + half)] = seg_[static_cast<std::size_t>(idx)].kin.decel;
    }
    std::nth_element(buf.begin(), buf.begin() + half, buf.end());
    Filtered f{seg_[j].kin.t, buf[static_cast<std::size_t>(half)], seg_[j].ground};

    frames_out_.push_back(f.t);
    if (pending_mid_) {
        decide_peak(pending_prev_ ? *pending_prev_ : Filtered{}, *pending_mid_, f);
        peak_frontier_ = pending_mid_->t;
    }
    pending_prev_ = pending_mid_;
    pending_mid_ = f;
}

void StepDetector::decide_peak(const Filtered& left, const Filtered& mid,
                               const std::optional<Filtered>& right) {
    const bool has_left = pending_prev_.has_value();
    if (has_left && mid.decel < left.decel) return;
    if (right && mid.decel < right->decel) return;
    if (mid.decel < cfg_.thresholds.step_floor) return;
    if (last_step_t_ && mid.t - *last_step_t_ < cfg_.refractory) return;
    const StepIntensity intensity = cfg_.thresholds.classify(mid.decel);
    steps_out_.push_back({mid.t, foot_, mid.decel, intensity});
    noises_out_.push_back({mid.t, mid.ground, intensity});
    last_step_t_ = mid.t;
}

void StepDetector::close_segment() {
    // Emit the tail frames whose windows were waiting for lookahead, then
    // settle the final peak decision (missing right neighbour qualifies).
    while (emitted_ < seg_.size()) {
        emit_filtered(emitted_, true);
        ++emitted_;
    }
    if (pending_mid_) {
        decide_peak(pending_prev_ ? *pending_prev_ : Filtered{}, *pending_mid_, std::nullopt);
        peak_frontier_ = pending_mid_->t;
    }
    pending_prev_.reset();
    pending_mid_.reset();
    seg_.clear();
    emitted_ = 0;
}

void StepDetector::finish() {
    if (finished_) return;
    close_segment();
    finished_ = true;
    peak_frontier_ = std::numeric_limits<double>::infinity();
}

std::vector<StepEvent> StepDetector::drain_steps() { return std::exchange(steps_out_, {}); }
std::vector<NoiseEvent> StepDetector::drain_noises() { return std::exchange(noises_out_, {}); }
std::vector<double> StepDetector::drain_frame_times() { return std::exchange(frames_out_, {}); }

// --- TrackerClassifier -------------------------------------------------------

TrackerClassifier::TrackerClassifier(const TrackerConfig& cfg)
    : cfg_(cfg), left_(DeviceId::LeftFoot, cfg), right_(DeviceId::RightFoot, cfg) {}

void TrackerClassifier::push(const MotionSample& s) {
    if (s.device == DeviceId::LeftFoot) {
        left_.push(s.t, s.pos);
    } else if (s.device == DeviceId::RightFoot) {
        right_.push(s.t, s.pos);
    } else {
        return;  // tracker mechanism only consumes the feet
    }
    assemble();
}

void TrackerClassifier::finish() {
    left_.finish();
    right_.finish();
    assemble();
}

namespace {

template <typename T>
void append_all(std::deque<T>& dst, std::vector<T>&& src) {
    for (auto& v : src) dst.push_back(std::move(v));
}

}  // namespace

void TrackerClassifier::assemble() {
    append_all(ltimes_, left_.drain_frame_times());
    append_all(rtimes_, right_.drain_frame_times());
    append_all(lsteps_, left_.drain_steps());
    append_all(rsteps_, right_.drain_steps());
    append_all(lnoises_, left_.drain_noises());
    append_all(rnoises_, right_.drain_noises());

    const double frontier = std::min(left_.peak_decided_until(), right_.peak_decided_until());

    // Steps first: the state at time t depends on every step with step.t <= t.
    while (true) {
        const bool lok = !lsteps_.empty() && lsteps_.front().t <= frontier;
        const bool rok = !rsteps_.empty() && rsteps_.front().t <= frontier;
        if (!lok && !rok) break;
        std::deque<StepEvent>& q =
            (lok && (!rok || lsteps_.front().t <= rsteps_.front().t)) ? lsteps_ : rsteps_;
        steps_out_.push_back(q.front());
        recent_steps_.push_back(q.front());
        q.pop_front();
    }
    while (true) {
        const bool lok = !lnoises_.empty() && lnoises_.front().t <= frontier;
        const bool rok = !rnoises_.empty() && rnoises_.front().t <= frontier;
        if (!lok && !rok) break;
        std::deque<NoiseEvent>& q =
            (lok && (!rok || lnoises_.front().t <= rnoises_.front().t)) ? lnoises_ : rnoises_;
        noises_out_.push_back(q.front());
        q.pop_front();
    }
    while (true) {
        const bool lok = !ltimes_.empty() && ltimes_.front() <= frontier;
        const bool rok = !rtimes_.empty() && rtimes_.front() <= frontier;
        if (!lok && !rok) break;
        std::deque<double>& q = (lok && (!rok || ltimes_.front() <= rtimes_.front())) ? ltimes_ : rtimes_;
        const double t = q.front();
        q.pop_front();
        if (t <= last_state_t_) continue;  // both feet on a shared grid emit duplicates
        last_state_t_ = t;
        const double horizon = t - cfg_.lookback - cfg_.run_interval - 1e-9;
        while (!recent_steps_.empty() && recent_steps_.front().t < horizon) recent_steps_.pop_front();
        states_out_.push_back({t, state_at(t)});
    }
}

GaitClass TrackerClassifier::state_at(double t) const {
    // Most recent step within the lookback horizon decides the state; a
    // quick alternating-feet pair of stomp-strength peaks means running.
    const StepEvent* latest = nullptr;
    const StepEvent* before = nullptr;
    for (auto it = recent_steps_.rbegin(); it != recent_steps_.rend(); ++it) {
        if (it->t <= t) {
            if (!latest) {
                latest = &*it;
            } else {
                before = &*it;
                break;
            }
        }
    }
    if (!latest || latest->t < t - cfg_.lookback) return GaitClass::Sneaking;
    if (before && before->foot != latest->foot && latest->t - before->t < cfg_.run_interval &&
        latest->peak_decel >= cfg_.thresholds.stomp_min &&
        before->peak_decel >= cfg_.thresholds.stomp_min) {
        return GaitClass::Running;
    }
    for (auto it = recent_steps_.rbegin(); it != recent_steps_.rend(); ++it) {
        if (it->t > t) continue;
        if (it->t < t - cfg_.lookback) break;
        if (it->intensity != StepIntensity::SneakStep) return GaitClass::Walking;
    }
    return GaitClass::Sneaking;
}

std::vector<GaitStateSample> TrackerClassifier::drain_states() { return std::exchange(states_out_, {}); }
std::vector<NoiseEvent> TrackerClassifier::drain_noises() { return std::exchange(noises_out_, {}); }
std::vector<StepEvent> TrackerClassifier::drain_steps() { return std::exchange(steps_out_, {}); }

// --- HmdClassifier -----------------------------------------------------------

HmdClassifier::HmdClassifier(const HmdConfig& cfg) : cfg_(cfg) {
    if (cfg_.sneak_max_hspeed <= 0.0 || cfg_.window <= 0.0 || cfg_.hysteresis_margin < 0.0) {
        throw Error("bad hmd config: need sneak_max_hspeed > 0, window > 0, margin >= 0");
    }
}

void HmdClassifier::push(const MotionSample& s) {
    if (s.device != DeviceId::Hmd) return;
    if (!prev_) {
        prev_ = s;
        return;
    }
    const double dt = s.t - prev_->t;
    if (dt <= 0.0) throw NonMonotonicTimeError("timestamps must strictly increase (hmd)");
    if (dt > cfg_.max_gap) {
        window_.clear();
        window_sum_ = 0.0;
        prev_ = s;
        return;
    }
    const double hspeed = (s.pos - prev_->pos).ground().norm() / dt;
    prev_ = s;

    window_.emplace_back(s.t, hspeed);
    window_sum_ += hspeed;
    while (!window_.empty() && window_.front().first <= s.t - cfg_.window) {
        window_sum_ -= window_.front().second;
        window_.pop_front();
    }
    const double smoothed = window_sum_ / static_cast<double>(window_.size());

    if (smoothed < cfg_.sneak_max_hspeed) {
        state_ = GaitClass::Sneaking;
    } else if (smoothed > cfg_.sneak_max_hspeed + cfg_.hysteresis_margin) {
        state_ = GaitClass::Walking;
    }  // inside the hysteresis band the previous state is retained

    states_out_.push_back({s.t, state_});

    if (state_ == GaitClass::Walking) {
        if (!noise_due_ || s.t >= *noise_due_) {
            noises_out_.push_back({s.t, s.pos.ground(), StepIntensity::WalkStep});
            noise_due_ = s.t + cfg_.noise_cadence;
        }
    } else {
        noise_due_.reset();
    }
}

std::vector<GaitStateSample> HmdClassifier::drain_states() { return std::exchange(states_out_, {}); }
std::vector<NoiseEvent> HmdClassifier::drain_noises() { return std::exchange(noises_out_, {}); }

// --- GamepadModel ------------------------------------------------------------

GamepadModel::GamepadModel(const GamepadConfig& cfg) : cfg_(cfg), pos_(cfg.start_pos) {
    if (!(cfg_.walk_speed > cfg_.sneak_speed && cfg_.sneak_speed > 0.0)) {
        throw Error("bad gamepad config: need walk_speed > sneak_speed > 0");
    }
}

void GamepadModel::push(const MotionSample& s) {
    if (s.device != DeviceId::Gamepad) return;
    if (!s.pad) throw MissingAxesError("gamepad record lacks stick deflection");
    if (prev_t_) {
        const double dt = s.t - *prev_t_;
        if (dt <= 0.0) throw NonMonotonicTimeError("timestamps must strictly increase (gamepad)");
        pos_ = pos_ + prev_velocity_ * dt;
    }
    const double scale = s.pad->sneak ? cfg_.sneak_speed : cfg_.walk_speed;
    const Vec2 velocity = Vec2{s.pad->ax, s.pad->ay} * scale;
    const double speed = velocity.norm();

    positions_out_.push_back({s.t, pos_});
    // The sneak mode is optional: slow enough stick movement sneaks too.
    const bool sneaking = s.pad->sneak || speed <= cfg_.sneak_speed + 1e-12;
    state_ = sneaking ? GaitClass::Sneaking : GaitClass::Walking;
    states_out_.push_back({s.t, state_});

    if (state_ == GaitClass::Walking) {
        if (!noise_due_ || s.t >= *noise_due_) {
            noises_out_.push_back({s.t, pos_, StepIntensity::WalkStep});
            noise_due_ = s.t + cfg_.noise_cadence;
        }
    } else {
        noise_due_.reset();
    }

    prev_velocity_ = velocity;
    prev_t_ = s.t;
}

std::vector<PathSample> GamepadModel::drain_positions() { return std::exchange(positions_out_, {}); }
std::vector<GaitStateSample> GamepadModel::drain_states() { return std::exchange(states_out_, {}); }
std::vector<NoiseEvent> GamepadModel::drain_noises() { return std::exchange(noises_out_, {}); }

// --- batch wrappers ----------------------------------------------------------

namespace {

std::vector<const MotionSample*> merged_samples(const MotionTrace& trace) {
    std::vector<const MotionSample*> all;
    all.reserve(trace.total_samples());
    for (DeviceId d : kAllDevices) {
        if (!trace.has(d)) continue;
        for (const auto& s : trace.channel(d)) all.push_back(&s);
    }
    std::stable_sort(all.begin(), all.end(), [](const MotionSample* a, const MotionSample* b) {
        if (a->t != b->t) return a->t < b->t;
        return static_cast<int>(a->device) < static_cast<int>(b->device);
    });
    return all;
}

void require_channel(const MotionTrace& trace, DeviceId d, std::size_t min_samples) {
    if (!trace.has(d)) throw EmptyDeviceError(std::string("missing device: ") + to_string(d));
    if (trace.channel(d).size() < min_samples) {
        throw EmptyDeviceError(std::string("need at least 2 samples for ") + to_string(d));
    }
}

}  // namespace

TrackerResult tracker_classifier(const MotionTrace& trace, const TrackerConfig& cfg) {
    require_channel(trace, DeviceId::LeftFoot, 2);
    require_channel(trace, DeviceId::RightFoot, 2);
    TrackerClassifier c(cfg);
    for (const MotionSample* s : merged_samples(trace)) c.push(*s);
    c.finish();
    return {c.drain_states(), c.drain_noises(), c.drain_steps()};
}

ClassifierOutput hmd_classifier(const MotionTrace& trace, const HmdConfig& cfg) {
    require_channel(trace, DeviceId::Hmd, 2);
    HmdClassifier c(cfg);
    for (const auto& s : trace.channel(DeviceId::Hmd)) c.push(s);
    c.finish();
    return {c.drain_states(), c.drain_noises()};
}

GamepadResult gamepad_model(const MotionTrace& trace, const GamepadConfig& cfg) {
    require_channel(trace, DeviceId::Gamepad, 1);
    GamepadModel m(cfg);
    for (const auto& s : trace.channel(DeviceId::Gamepad)) m.push(s);
    m.finish();
    return {m.drain_positions(), m.drain_states(), m.drain_noises()};
}

// --- calibration -------------------------------------------------------------

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw Error("percentile of empty sample");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + (values[lo + 1] - values[lo]) * frac;
}

DecelThresholds calibrate_thresholds(const std::vector<LabeledTrace>& labeled,
                                     const TrackerConfig& cfg) {
    std::vector<double> peaks[3];  // indexed by GaitClass
    for (const auto& lt : labeled) {
        auto& bucket = peaks[static_cast<int>(lt.label)];
        bool any_foot = false;
        for (DeviceId foot : {DeviceId::LeftFoot, DeviceId::RightFoot}) {
            if (!lt.trace.has(foot) || lt.trace.channel(foot).size() < 2) continue;
            any_foot = true;
            const auto series = sliding_window_filter(
                derive_kinematics(lt.trace, foot, {cfg.max_gap}), cfg.window);
            scan_peaks(series, 1e-9, cfg.refractory, [&](double, double peak) {
                bucket.push_back(peak);
            });
        }
        if (!any_foot) throw EmptyDeviceError("labeled trace has no foot data");
    }

    for (int c = 0; c < 3; ++c) {
        if (peaks[c].size() < 5) {
            throw InsufficientDataError(std::string("need at least 5 peaks per class, got ") +
                                        std::to_string(peaks[c].size()) + " for " +
                                        to_string(static_cast<GaitClass>(c)));
        }
    }

    const double sneak_hi = percentile(peaks[0], 0.95);
    const double walk_lo = percentile(peaks[1], 0.05);
    const double walk_hi = percentile(peaks[1], 0.95);
    const double stomp_lo = percentile(peaks[2], 0.05);
    if (sneak_hi >= walk_lo || walk_hi >= stomp_lo) {
        throw ClassOverlapError("class peak distributions overlap; classes are not separable");
    }

    DecelThresholds th;
    th.step_floor = percentile(peaks[0], 0.05) / 2.0;
    th.walk_min = (sneak_hi + walk_lo) / 2.0;
    th.stomp_min = (walk_hi + stomp_lo) / 2.0;
    th.validate();
    return th;
}

double noise_indicator(const std::vector<StepEvent>& steps, double stomp_min, double t,
                       double decay) {
    const StepEvent* latest = nullptr;
    for (const auto& s : steps) {
        if (s.t <= t) latest = &s;
    }
    if (!latest) return 0.0;
    if (latest->intensity == StepIntensity::SneakStep) return 0.0;  // sneaking reads silent
    const double age = t - latest->t;
    if (age >= decay) return 0.0;
    const double level = std::min(1.0, latest->peak_decel / stomp_min);
    return level * (1.0 - age / decay);
}

}  // namespace sneakbench
