#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wrcast {

/// Flat `key = value` configuration. Lines starting with `#` are comments.
class Config {
public:
    static Config load(const std::filesystem::path& path);
    static Config parse(std::istream& in);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool contains(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    /// Comma-separated list of numbers.
    std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;

    const std::map<std::string, std::string>& entries() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace wrcast
