#include "analogator/config.hpp"

#include <sstream>

#include "analogator/util.hpp"

namespace analogator {

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

double real_value(const std::string& name, const std::string& v, std::size_t line) {
    try {
        return parse_real(v);
    } catch (const std::exception&) {
        throw ConfigError(line, "'" + name + "' expects a number, got '" + v + "'");
    }
}

long long int_value(const std::string& name, const std::string& v, std::size_t line, long long lo) {
    long long x = 0;
    try {
        x = parse_integer(v);
    } catch (const std::exception&) {
        throw ConfigError(line, "'" + name + "' expects an integer, got '" + v + "'");
    }
    if (x < lo) throw ConfigError(line, "'" + name + "' must be at least " + std::to_string(lo));
    return x;
}

bool bool_value(const std::string& name, const std::string& v, std::size_t line) {
    if (v == "0") return false;
    if (v == "1") return true;
    throw ConfigError(line, "'" + name + "' expects 0 or 1, got '" + v + "'");
}

double unit_value(const std::string& name, const std::string& v, std::size_t line) {
    const double x = real_value(name, v, line);
    if (x < 0.0 || x > 1.0) throw ConfigError(line, "'" + name + "' must lie in [0, 1]");
    return x;
}

std::string strip_comments(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t line = 1, openedAt = 0;
    bool inComment = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (!inComment && c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            inComment = true;
            openedAt = line;
            ++i;
            continue;
        }
        if (inComment && c == '*' && i + 1 < text.size() && text[i + 1] == '/') {
            inComment = false;
            ++i;
            continue;
        }
        if (c == '\n') {
            ++line;
            out += '\n';
            continue;
        }
        if (!inComment) out += c;
    }
    if (inComment) throw ConfigError(openedAt, "unterminated comment");
    return out;
}

}  // namespace

void set_config_value(Config& c, const std::string& name, const std::string& v, std::size_t line) {
    if (name == "session") {
        c.session = v;
    } else if (name == "winner_take_all") {
        c.winnerTakeAll = bool_value(name, v, line);
    } else if (name == "stoperr") {
        c.stoperr = unit_value(name, v, line);
    } else if (name == "momentum") {
        c.momentum = unit_value(name, v, line);
    } else if (name == "epsilon") {
        c.epsilon = real_value(name, v, line);
        if (c.epsilon <= 0.0) throw ConfigError(line, "'epsilon' must be positive");
    } else if (name == "bepsilon") {
        c.bepsilon = real_value(name, v, line);
        if (c.bepsilon < 0.0) throw ConfigError(line, "'bepsilon' must not be negative");
    } else if (name == "maxepoch") {
        c.maxepoch = static_cast<int>(int_value(name, v, line, 0));
    } else if (name == "reportrate") {
        c.reportrate = static_cast<int>(int_value(name, v, line, 1));
    } else if (name == "maxrand") {
        c.maxrand = real_value(name, v, line);
        if (c.maxrand < 0.0) throw ConfigError(line, "'maxrand' must not be negative");
    } else if (name == "round_off") {
        c.roundOff = bool_value(name, v, line);
    } else if (name == "subcycle") {
        c.subcycle = static_cast<int>(int_value(name, v, line, 1));
        if (c.subcycle != 2) throw ConfigError(line, "only the two-step cycle is supported (subcycle 2)");
    } else if (name == "seed") {
        c.seed = static_cast<std::uint64_t>(int_value(name, v, line, 0));
    } else if (name == "shuffle") {
        c.shuffle = bool_value(name, v, line);
    } else if (name == "batch") {
        c.batch = bool_value(name, v, line);
    } else if (name == "experiment") {
        try {
            (void)experiment_spec(v);
        } catch (const std::invalid_argument&) {
            throw ConfigError(line, "unknown experiment '" + v + "'");
        }
        c.experiment = v;
    } else if (name == "seeds") {
        c.seeds = static_cast<std::size_t>(int_value(name, v, line, 1));
    } else if (name == "samples") {
        c.samples = static_cast<std::size_t>(int_value(name, v, line, 1));
    } else if (name == "test_count") {
        c.testCount = static_cast<std::size_t>(int_value(name, v, line, 0));
    } else if (name == "letters") {
        c.letters = static_cast<std::size_t>(int_value(name, v, line, 10));
    } else if (name == "hints") {
        c.hints = bool_value(name, v, line);
    } else if (name == "maxtrials") {
        c.maxtrials = static_cast<std::size_t>(int_value(name, v, line, 0));
    } else {
        throw ConfigError(line, "unknown setting '" + name + "'");
    }
    c.given[name] = v;
}

Config parse_config(const std::string& text) {
    Config c;
    std::istringstream in(strip_comments(text));
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto tok = split_ws(raw);
        if (tok.empty()) continue;
        if (tok[0] != "set") {
            throw ConfigError(line, "unsupported directive '" + tok[0] + "' (network wiring is built in)");
        }
        if (tok.size() != 3) throw ConfigError(line, "expected 'set <name> <value>'");
        set_config_value(c, tok[1], tok[2], line);
    }
    return c;
}

ExperimentSpec apply_config(ExperimentSpec s, const Config& c) {
    if (c.has("winner_take_all")) s.scoring = c.winnerTakeAll ? ScoreMode::BankArgmax : ScoreMode::Rounded;
    if (c.has("stoperr")) s.stop.stoperr = c.stoperr;
    if (c.has("momentum")) s.hyper.momentum = c.momentum;
    if (c.has("epsilon")) s.hyper.epsilon = c.epsilon;
    if (c.has("bepsilon")) s.hyper.bepsilon = c.bepsilon;
    if (c.has("maxepoch")) s.stop.maxepoch = c.maxepoch;
    if (c.has("maxrand")) s.hyper.maxrand = c.maxrand;
    if (c.has("seed")) s.seed = c.seed;
    if (c.has("shuffle")) s.hyper.shuffle = c.shuffle;
    if (c.has("batch")) s.hyper.batch = c.batch;
    if (c.seeds) s.nSeeds = *c.seeds;
    if (c.samples) s.samples = *c.samples;
    if (c.testCount) s.testCount = *c.testCount;
    if (c.letters) s.letters = *c.letters;
    if (c.hints) s.hints = *c.hints;
    if (c.maxtrials) s.stop.maxtrials = *c.maxtrials;
    if (s.stop.minepoch > s.stop.maxepoch) s.stop.minepoch = s.stop.maxepoch;
    s.hyper.stoperr = s.stop.stoperr;
    s.hyper.maxepoch = s.stop.maxepoch;
    return s;
}

}  // namespace analogator
