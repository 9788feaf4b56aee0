#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinphoton {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat key-value document with dotted section names
/// (physics., noise., mzi., readout., run., ...). Lines are `key = value`,
/// `#` starts a comment. Unknown keys are hard errors against the schema the
/// caller supplies, to catch silent typos.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_string(const std::string& text,
                                       const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

    /// Throws ConfigError naming every key not in `known`, with line numbers.
    void require_known_keys(const std::set<std::string>& known) const;

    /// Canonical reproducible rendering (sorted keys), used for manifests.
    std::string canonical() const;

    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
    std::string origin_;

    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
};

}  // namespace spinphoton
