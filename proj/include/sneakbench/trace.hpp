#pragma once

#include <array>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "sneakbench/errors.hpp"
#include "sneakbench/geometry.hpp"

namespace sneakbench {

enum class DeviceId { Hmd, LeftFoot, RightFoot, Gamepad };

constexpr std::array<DeviceId, 4> kAllDevices = {DeviceId::Hmd, DeviceId::LeftFoot,
                                                 DeviceId::RightFoot, DeviceId::Gamepad};

const char* to_string(DeviceId d);
std::optional<DeviceId> device_from_string(std::string_view s);

// Stick deflection in [-1,1]^2 plus the sneak-mode button.
struct GamepadInput {
    double ax = 0.0;
    double ay = 0.0;
    bool sneak = false;
};

// One timestamped record from one tracked device. Positional devices carry
// pos; gamepad records carry stick axes and the sneak flag instead.
struct MotionSample {
    double t = 0.0;
    DeviceId device = DeviceId::Hmd;
    Vec3 pos{};
    std::optional<GamepadInput> pad;

    bool finite() const;
};

// Samples grouped per device, strictly increasing in time within each device.
class MotionTrace {
public:
    // Throws NonMonotonicTimeError if t does not strictly increase for the
    // sample's device, Error if any coordinate is non-finite.
    void append(const MotionSample& s);

    bool has(DeviceId d) const { return channels_.count(d) > 0; }
    const std::vector<MotionSample>& channel(DeviceId d) const;
    const std::map<DeviceId, std::vector<MotionSample>>& channels() const { return channels_; }
    std::size_t total_samples() const;
    bool empty() const { return channels_.empty(); }

    // True when some inter-sample gap on this device exceeds max_gap seconds.
    bool discontinuous(DeviceId d, double max_gap = 0.2) const;

private:
    std::map<DeviceId, std::vector<MotionSample>> channels_;
};

}  // namespace sneakbench
