#include "sneakbench/trace.hpp"

#include <cmath>

namespace sneakbench {

const char* to_string(DeviceId d) {
    switch (d) {
        case DeviceId::Hmd: return "hmd";
        case DeviceId::LeftFoot: return "left_foot";
        case DeviceId::RightFoot: return "right_foot";
        case DeviceId::Gamepad: return "gamepad";
    }
    return "?";
}

std::optional<DeviceId> device_from_string(std::string_view s) {
    for (DeviceId d : kAllDevices) {
        if (s == to_string(d)) return d;
    }
    return std::nullopt;
}

bool MotionSample::finite() const {
    if (!std::isfinite(t)) return false;
    if (pad) {
        return std::isfinite(pad->ax) && std::isfinite(pad->ay);
    }
    return std::isfinite(pos.x) && std::isfinite(pos.y) && std::isfinite(pos.z);
}

void MotionTrace::append(const MotionSample& s) {
    if (!s.finite()) {
        throw Error("non-finite value in motion sample");
    }
    auto& ch = channels_[s.device];
    if (!ch.empty() && s.t <= ch.back().t) {
        throw NonMonotonicTimeError(std::string("timestamps must strictly increase per device (") +
                                    to_string(s.device) + ")");
    }
    ch.push_back(s);
}

const std::vector<MotionSample>& MotionTrace::channel(DeviceId d) const {
    auto it = channels_.find(d);
    if (it == channels_.end()) {
        throw EmptyDeviceError(std::string("missing device: ") + to_string(d));
    }
    return it->second;
}

std::size_t MotionTrace::total_samples() const {
    std::size_t n = 0;
    for (const auto& [d, ch] : channels_) n += ch.size();
    return n;
}

bool MotionTrace::discontinuous(DeviceId d, double max_gap) const {
    const auto& ch = channel(d);
    for (std::size_t i = 1; i < ch.size(); ++i) {
        if (ch[i].t - ch[i - 1].t > max_gap) return true;
    }
    return false;
}

}  // namespace sneakbench
