#pragma once

#include <iosfwd>
#include <string>

#include "sneakbench/trace.hpp"

namespace sneakbench {

// Trace files are JSON Lines, one sample per line:
//   {"t": <seconds>, "device": "hmd"|"left_foot"|"right_foot", "pos": [x,y,z]}
//   {"t": <seconds>, "device": "gamepad", "axes": [ax,ay], "sneak": true|false}
// Readers reject NaN/Inf and non-monotonic per-device timestamps.
MotionTrace read_trace(std::istream& in, const std::string& source_name = "<stream>");
MotionTrace read_trace_file(const std::string& path);

void write_trace(const MotionTrace& trace, std::ostream& out);
void write_trace_file(const MotionTrace& trace, const std::string& path);

}  // namespace sneakbench
