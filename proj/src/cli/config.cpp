#include "arr2/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace arr2::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    T out{};
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw UserError(fmt::format("config key '{}': cannot parse '{}' as a number", key, v));
    }
    return out;
}

}  // namespace

std::string Config::str(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw UserError(fmt::format("missing config key '{}'", key));
    return it->second;
}

int Config::integer(const std::string& key) const { return parse_number<int>(key, str(key)); }

std::uint64_t Config::u64(const std::string& key) const { return parse_number<std::uint64_t>(key, str(key)); }

double Config::real(const std::string& key) const {
    const std::string v = str(key);
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw UserError(fmt::format("config key '{}': cannot parse '{}' as a number", key, v));
    }
}

bool Config::flag(const std::string& key) const {
    const std::string v = str(key);
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off" || v.empty()) return false;
    throw UserError(fmt::format("config key '{}': expected true/false, got '{}'", key, v));
}

std::vector<std::string> Config::list(const std::string& key) const {
    std::vector<std::string> out;
    std::stringstream ss(str(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<int> Config::int_list(const std::string& key) const {
    std::vector<int> out;
    for (const auto& s : list(key)) out.push_back(parse_number<int>(key, s));
    return out;
}

std::vector<double> Config::real_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : list(key)) {
        Config tmp;
        tmp.set(key, s);
        out.push_back(tmp.real(key));
    }
    return out;
}

std::string Config::to_text() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

std::uint64_t Config::hash() const { return fnv1a64(to_text()); }

std::string Config::hash_hex() const { return fmt::format("{:016x}", hash()); }

Config parse_config_text(const std::string& text, const std::string& source) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UserError(fmt::format("{}:{}: expected 'key = value', got '{}'", source, lineno, line));
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw UserError(fmt::format("{}:{}: empty key", source, lineno));
        c.set(key, trim(line.substr(eq + 1)));
    }
    return c;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UserError(fmt::format("cannot open config file '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void merge(Config& base, const Config& over) {
    for (const auto& [k, v] : over.values()) base.set(k, v);
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t mix_seed(std::uint64_t master, const std::string& label) {
    std::uint64_t z = master ^ fnv1a64(label);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace arr2::cli
