#pragma once

#include <map>
#include <string>
#include <vector>

#include "rabicd/errors.hpp"

namespace rabicd::cli {

// Invalid key, value or file; maps to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class ValueType { Real, Integer, Boolean, Text, RealList, TextList };

struct KeySpec {
    std::string key;
    ValueType type;
    std::string fallback;
    std::string help;
    std::vector<std::string> choices;  // empty: any value of the type
};

const std::vector<KeySpec>& config_keys();
const KeySpec& key_spec(const std::string& key);

// Real lists accept comma or blank separated values and start:step:stop ranges.
std::vector<double> parse_real_list(const std::string& text);
std::vector<std::string> parse_text_list(const std::string& text);

class RunConfig {
public:
    RunConfig();

    // Applies "key = value" lines; '#' starts a comment. Errors carry origin:line.
    void parse_text(const std::string& text, const std::string& origin);
    void load_file(const std::string& path);
    void set(const std::string& key, const std::string& value, const std::string& origin);
    // "key=value" as given on the command line.
    void set_assignment(const std::string& assignment, const std::string& origin);

    const std::string& raw(const std::string& key) const;
    const std::string& origin(const std::string& key) const;
    double real(const std::string& key) const;
    int integer(const std::string& key) const;
    bool boolean(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;
    std::vector<std::string> texts(const std::string& key) const;

    // Resolved worker count: 0 selects hardware concurrency.
    int workers() const;

    const std::map<std::string, std::string>& values() const { return values_; }
    // Sorted "key = value" lines.
    std::string canonical() const;
    // FNV-1a 64-bit digest of canonical(), as 16 hex digits.
    std::string digest() const;

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> origins_;
};

// Reads RABICD_WORKERS into the config when set.
void apply_environment(RunConfig& cfg);

}  // namespace rabicd::cli
