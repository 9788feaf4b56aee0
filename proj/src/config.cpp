#include "spinphoton/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace spinphoton {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double_token(const std::string& tok, const std::string& context) {
    const std::string t = trim(tok);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(context + ": cannot parse '" + t + "' as a number");
    }
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text,
                                            const std::string& origin) {
    KeyValueConfig config;
    config.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (config.values_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        config.values_[key] = value;
        config.lines_[key] = lineno;
    }
    return config;
}

void KeyValueConfig::fail(const std::string& key, const std::string& what) const {
    const auto it = lines_.find(key);
    const std::string loc =
        it == lines_.end() ? origin_ : origin_ + ":" + std::to_string(it->second);
    throw ConfigError(loc + ": key '" + key + "' " + what);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return parse_double_token(it->second, key);
    } catch (const ConfigError&) {
        fail(key, "is not a number: '" + it->second + "'");
    }
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        const int v = std::stoi(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        fail(key, "is not an integer: '" + it->second + "'");
    }
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        fail(key, "is not an unsigned integer: '" + it->second + "'");
    }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(key, "is not a boolean: '" + it->second + "'");
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::vector<double> KeyValueConfig::get_double_list(
    const std::string& key, const std::vector<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::string token;
    std::istringstream stream(it->second);
    while (std::getline(stream, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        out.push_back(parse_double_token(token, key));
    }
    return out;
}

void KeyValueConfig::require_known_keys(const std::set<std::string>& known) const {
    std::string unknown;
    for (const auto& [key, value] : values_) {
        if (!known.count(key)) {
            const auto it = lines_.find(key);
            unknown += "\n  " + origin_ + ":" + std::to_string(it->second) +
                       ": unknown key '" + key + "'";
        }
    }
    if (!unknown.empty()) throw ConfigError("config validation failed:" + unknown);
}

std::string KeyValueConfig::canonical() const {
    std::string out;
    for (const auto& [key, value] : values_) out += key + " = " + value + "\n";
    return out;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    values_[key] = value;
}

}  // namespace spinphoton
