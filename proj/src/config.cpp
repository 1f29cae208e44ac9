#include "sneakbench/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace sneakbench {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

bool parse_number(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

Config::Value parse_value(const std::string& raw, const std::string& src, int line) {
    const std::string v = trim(raw);
    if (v.empty()) throw ParseError(src, line, "missing value");
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') throw ParseError(src, line, "unterminated string");
        return v.substr(1, v.size() - 2);
    }
    if (v.front() == '[') {
        if (v.back() != ']') throw ParseError(src, line, "unterminated array");
        std::vector<double> arr;
        std::string body = v.substr(1, v.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            double d = 0;
            if (!parse_number(item, d)) throw ParseError(src, line, "bad array element: " + item);
            arr.push_back(d);
        }
        return arr;
    }
    double d = 0;
    if (!parse_number(v, d)) throw ParseError(src, line, "bad value: " + v);
    return d;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
    }
    return true;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source_name) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::string prefix;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            const bool table_array = line.size() > 1 && line[1] == '[';
            const std::string closer = table_array ? "]]" : "]";
            if (line.substr(line.size() - closer.size()) != closer) {
                throw ParseError(source_name, lineno, "bad table header: " + line);
            }
            std::string name =
                trim(line.substr(table_array ? 2 : 1, line.size() - 2 * (table_array ? 2 : 1)));
            if (!valid_key(name)) throw ParseError(source_name, lineno, "bad table name: " + name);
            if (table_array) {
                const std::size_t idx = cfg.array_counts_[name]++;
                prefix = name + "." + std::to_string(idx) + ".";
            } else {
                prefix = name + ".";
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(source_name, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (!valid_key(key)) throw ParseError(source_name, lineno, "bad key: " + key);
        cfg.values_[prefix + key] = parse_value(line.substr(eq + 1), source_name, lineno);
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

double Config::get_double(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw Error("missing config key: " + key);
    if (const double* d = std::get_if<double>(&it->second)) return *d;
    throw Error("config key is not a number: " + key);
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (const bool* b = std::get_if<bool>(&it->second)) return *b;
    throw Error("config key is not a boolean: " + key);
}

std::string Config::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw Error("missing config key: " + key);
    if (const std::string* s = std::get_if<std::string>(&it->second)) return *s;
    throw Error("config key is not a string: " + key);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

std::vector<double> Config::get_array(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw Error("missing config key: " + key);
    if (const auto* a = std::get_if<std::vector<double>>(&it->second)) return *a;
    throw Error("config key is not an array: " + key);
}

std::size_t Config::table_array_size(const std::string& name) const {
    auto it = array_counts_.find(name);
    return it == array_counts_.end() ? 0 : it->second;
}

void Config::set_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw Error("override must be key=value: " + assignment);
    const std::string key = trim(assignment.substr(0, eq));
    if (!valid_key(key)) throw Error("bad override key: " + key);
    values_[key] = parse_value(assignment.substr(eq + 1), "<override>", 0);
}

std::string Config::canonical() const {
    std::ostringstream out;
    for (const auto& [k, v] : values_) {
        out << k << '=';
        if (const double* d = std::get_if<double>(&v)) {
            out << *d;
        } else if (const bool* b = std::get_if<bool>(&v)) {
            out << (*b ? "true" : "false");
        } else if (const std::string* s = std::get_if<std::string>(&v)) {
            out << '"' << *s << '"';
        } else {
            const auto& arr = std::get<std::vector<double>>(v);
            out << '[';
            for (std::size_t i = 0; i < arr.size(); ++i) out << (i ? "," : "") << arr[i];
            out << ']';
        }
        out << '\n';
    }
    return out.str();
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fingerprint_hex(const std::string& data) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace sneakbench
