#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace arr2::cli {

/// Bad user input: config, flags or data files. Maps to exit code 2.
class UserError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Resolved key=value settings for one command.
 *
 * Keys are flat; `[section]` lines in files are accepted and ignored.
 * Later sources override earlier ones (defaults, then file, then flags).
 */
class Config {
public:
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) > 0; }
    [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }

    [[nodiscard]] std::string str(const std::string& key) const;
    [[nodiscard]] int integer(const std::string& key) const;
    [[nodiscard]] std::uint64_t u64(const std::string& key) const;
    [[nodiscard]] double real(const std::string& key) const;
    [[nodiscard]] bool flag(const std::string& key) const;
    /// Comma-separated list.
    [[nodiscard]] std::vector<std::string> list(const std::string& key) const;
    [[nodiscard]] std::vector<int> int_list(const std::string& key) const;
    [[nodiscard]] std::vector<double> real_list(const std::string& key) const;

    /// Sorted "key = value" lines; parseable by parse_config_text.
    [[nodiscard]] std::string to_text() const;
    /// FNV-1a 64 of to_text().
    [[nodiscard]] std::uint64_t hash() const;
    [[nodiscard]] std::string hash_hex() const;

private:
    std::map<std::string, std::string> values_;
};

/// Parses key=value lines; `#` starts a comment. Errors name the source and line.
Config parse_config_text(const std::string& text, const std::string& source = "<config>");
Config parse_config_file(const std::string& path);

/// Copies every entry of `over` into `base`.
void merge(Config& base, const Config& over);

std::uint64_t fnv1a64(const std::string& s);

/// SplitMix64 finaliser; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t master, const std::string& label);

}  // namespace arr2::cli
