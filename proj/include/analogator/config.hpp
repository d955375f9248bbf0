#pragma once

// Script-style settings: `set <name> <value>` lines with `/* */` comments.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "analogator/experiments.hpp"

namespace analogator {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct Config {
    std::string session = "e01";
    bool winnerTakeAll = false;
    double stoperr = 0.99;
    double momentum = 0.9;
    double epsilon = 0.1;
    double bepsilon = 0.1;
    int maxepoch = 1000;
    int reportrate = 1;  // display only
    double maxrand = 0.003;
    bool roundOff = true;  // display only
    int subcycle = 2;
    std::uint64_t seed = 1;
    bool shuffle = true;
    bool batch = false;

    std::optional<std::string> experiment;
    std::optional<std::size_t> seeds;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> testCount;
    std::optional<std::size_t> letters;
    std::optional<bool> hints;
    std::optional<std::size_t> maxtrials;

    /// Raw text of every key that was set, in key order.
    std::map<std::string, std::string> given;

    bool has(const std::string& key) const { return given.count(key) != 0; }
};

/// Throws ConfigError (1-based line) on an unknown key, a bad value, an
/// unterminated comment or any directive other than `set`.
Config parse_config(const std::string& text);

/// Apply one `name value` setting; `line` is used for error reports.
void set_config_value(Config& config, const std::string& name, const std::string& value, std::size_t line = 0);

/// Overlay the explicitly given keys onto an experiment definition.
ExperimentSpec apply_config(ExperimentSpec spec, const Config& config);

}  // namespace analogator
