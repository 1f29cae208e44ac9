#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sneakbench/errors.hpp"

namespace sneakbench {

// Flat key/value view of a TOML-style file. Tables and table arrays are
// flattened to dotted keys: `[guard]` + `fov_deg = 90` -> "guard.fov_deg",
// the n-th `[[obstacle]]` -> "obstacle.<n>.<key>". Supported values:
// numbers, booleans, quoted strings and arrays of numbers.
class Config {
public:
    using Value = std::variant<double, bool, std::string, std::vector<double>>;

    static Config parse(const std::string& text, const std::string& source_name = "<config>");
    static Config parse_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_array(const std::string& key) const;

    // Number of entries seen for a [[name]] table array.
    std::size_t table_array_size(const std::string& name) const;

    // Applies a "dotted.key=value" override; value is parsed like a TOML value.
    void set_override(const std::string& assignment);

    const std::map<std::string, Value>& values() const { return values_; }

    // Canonical "key=value" lines, sorted; used for config fingerprints.
    std::string canonical() const;

private:
    std::map<std::string, Value> values_;
    std::map<std::string, std::size_t> array_counts_;
};

std::uint64_t fnv1a64(const std::string& data);
std::string fingerprint_hex(const std::string& data);

}  // namespace sneakbench
