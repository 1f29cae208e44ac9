#include "sneakbench/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sneakbench/errors.hpp"

namespace sneakbench {

using nlohmann::json;

namespace {

double finite_number(const json& j, const char* field, const std::string& src, int line) {
    if (!j.is_number()) throw ParseError(src, line, std::string(field) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(src, line, std::string(field) + " must be finite");
    return v;
}

}  // namespace

MotionTrace read_trace(std::istream& in, const std::string& source_name) {
    std::vector<MotionSample> samples;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(source_name, lineno, e.what());
        }
        if (!j.is_object()) throw ParseError(source_name, lineno, "expected a JSON object");
        if (!j.contains("t") || !j.contains("device")) {
            throw ParseError(source_name, lineno, "record needs \"t\" and \"device\"");
        }
        MotionSample s;
        s.t = finite_number(j["t"], "t", source_name, lineno);
        const auto dev = device_from_string(j["device"].get<std::string>());
        if (!dev) {
            throw ParseError(source_name, lineno,
                             "unknown device \"" + j["device"].get<std::string>() + "\"");
        }
        s.device = *dev;
        if (j.contains("axes")) {
            const auto& ax = j["axes"];
            if (!ax.is_array() || ax.size() != 2) {
                throw ParseError(source_name, lineno, "axes must be [ax, ay]");
            }
            GamepadInput pad;
            pad.ax = finite_number(ax[0], "axes[0]", source_name, lineno);
            pad.ay = finite_number(ax[1], "axes[1]", source_name, lineno);
            pad.sneak = j.value("sneak", false);
            s.pad = pad;
        } else if (j.contains("pos")) {
            const auto& p = j["pos"];
            if (!p.is_array() || p.size() != 3) {
                throw ParseError(source_name, lineno, "pos must be [x, y, z]");
            }
            s.pos.x = finite_number(p[0], "pos[0]", source_name, lineno);
            s.pos.y = finite_number(p[1], "pos[1]", source_name, lineno);
            s.pos.z = finite_number(p[2], "pos[2]", source_name, lineno);
        } else {
            throw ParseError(source_name, lineno, "record needs \"pos\" or \"axes\"");
        }
        samples.push_back(s);
    }

    std::stable_sort(samples.begin(), samples.end(),
                     [](const MotionSample& a, const MotionSample& b) { return a.t < b.t; });
    MotionTrace trace;
    for (const auto& s : samples) trace.append(s);
    return trace;
}

MotionTrace read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trace file: " + path);
    return read_trace(in, path);
}

void write_trace(const MotionTrace& trace, std::ostream& out) {
    // Merge all channels sorted by time; device order breaks ties so the
    // output is byte-stable.
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
    for (const MotionSample* s : all) {
        nlohmann::ordered_json j;
        j["t"] = s->t;
        j["device"] = to_string(s->device);
        if (s->pad) {
            j["axes"] = {s->pad->ax, s->pad->ay};
            j["sneak"] = s->pad->sneak;
        } else {
            j["pos"] = {s->pos.x, s->pos.y, s->pos.z};
        }
        out << j.dump() << '\n';
    }
}

void write_trace_file(const MotionTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    write_trace(trace, out);
}

}  // namespace sneakbench
