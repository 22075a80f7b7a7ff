#include "optomech/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

// key -> section. Keys are unique across sections so flags can use bare names.
const std::map<std::string, std::string>& known_keys() {
    static const std::map<std::string, std::string> keys = {
        {"omega_c", "system"},   {"g0", "system"},        {"g_file", "system"},
        {"d1", "system"},        {"d1_file", "system"},   {"squeezing", "system"},
        {"d2", "system"},        {"omega0", "system"},    {"squeezing_file", "system"},
        {"mu_c", "system"},      {"mu_m", "system"},      {"tau_max", "time"},
        {"samples", "time"},     {"lab_frame", "time"},   {"axis1", "sweep"},
        {"axis2", "sweep"},      {"tau", "sweep"},        {"workers", "sweep"},
        {"abs_tol", "solver"},   {"rel_tol", "solver"},   {"resolution", "solver"},
        {"min_samples", "solver"}, {"n_c", "oracle"},     {"n_m", "oracle"},
        {"dt", "oracle"},        {"tolerance", "oracle"}, {"points", "oracle"},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError("key '" + key + "': expected a finite number, got '" + text + "'");
    return v;
}

long to_integer(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + text + "'");
}

cplx to_complex(const std::string& key, const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() == 1) return {to_double(key, parts[0]), 0.0};
    if (parts.size() == 2) return {to_double(key, parts[0]), to_double(key, parts[1])};
    throw ConfigError("key '" + key + "': expected re,im, got '" + text + "'");
}

TabulatedSeries read_table(const std::string& key, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("key '" + key + "': cannot open '" + path + "'");
    std::vector<double> tau, val;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 2) throw ConfigError("key '" + key + "': '" + path + "' rows need two columns");
        try {
            const double t = to_double(key, cols[0]);
            const double v = to_double(key, cols[1]);
            tau.push_back(t);
            val.push_back(v);
        } catch (const ConfigError&) {
            if (!first) throw;  // a header row is allowed once
        }
        first = false;
    }
    try {
        return TabulatedSeries(std::move(tau), std::move(val));
    } catch (const DomainError& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

}  // namespace

std::optional<Mode> parse_mode(const std::string& s) {
    if (s == "evolve") return Mode::evolve;
    if (s == "sweep") return Mode::sweep;
    if (s == "oracle-check") return Mode::oracle_check;
    if (s == "mathieu") return Mode::mathieu;
    return std::nullopt;
}

std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& origin) {
    std::map<std::string, std::string> out;
    std::string section, raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(where + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (!out.emplace(full, trim(line.substr(eq + 1))).second)
            throw ConfigError(where + ": duplicate key '" + full + "'");
    }
    return out;
}

AxisSpec parse_axis(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError("axis '" + text + "': expected name:...");
    AxisSpec axis;
    axis.name = trim(text.substr(0, colon));
    const std::string rest = trim(text.substr(colon + 1));
    const std::string key = "axis " + axis.name;
    if (!rest.empty() && rest.front() == '[') {
        if (rest.back() != ']') throw ConfigError(key + ": unterminated value list");
        for (const auto& v : split(rest.substr(1, rest.size() - 2), ',')) axis.values.push_back(to_double(key, v));
    } else {
        const auto parts = split(rest, ':');
        if (parts.size() != 3 && parts.size() != 4)
            throw ConfigError(key + ": expected start:stop:count[:linear|:log]");
        const double a = to_double(key, parts[0]), b = to_double(key, parts[1]);
        const long n = to_integer(key, parts[2]);
        const std::string spacing = parts.size() == 4 ? parts[3] : "linear";
        if (n < 2) throw ConfigError(key + ": count must be at least 2");
        if (spacing != "linear" && spacing != "log") throw ConfigError(key + ": spacing must be linear or log");
        if (spacing == "log" && !(a > 0.0 && b > 0.0)) throw ConfigError(key + ": log spacing needs positive bounds");
        for (long i = 0; i < n; ++i) {
            const double w = static_cast<double>(i) / static_cast<double>(n - 1);
            axis.values.push_back(spacing == "log" ? a * std::pow(b / a, w) : a + (b - a) * w);
        }
        axis.values.back() = b;
    }
    if (axis.values.size() < 2) throw ConfigError(key + ": at least two values required");
    static const std::vector<std::string> sweepable = {"g0", "d2", "tau", "mu_c", "mu_m", "omega0", "d1", "omega_c"};
    if (std::find(sweepable.begin(), sweepable.end(), axis.name) == sweepable.end())
        throw ConfigError(key + ": parameter cannot be swept");
    return axis;
}

RunConfig build_run_config(Mode mode, const std::map<std::string, std::string>& file_entries,
                           const std::map<std::string, std::string>& overrides) {
    std::map<std::string, std::string> kv;
    for (const auto& [full, value] : file_entries) {
        const auto dot = full.find('.');
        const std::string section = dot == std::string::npos ? "" : full.substr(0, dot);
        const std::string key = dot == std::string::npos ? full : full.substr(dot + 1);
        const auto it = known_keys().find(key);
        if (it == known_keys().end()) throw ConfigError("unknown key '" + full + "'");
        if (it->second != section)
            throw ConfigError("key '" + key + "' belongs in section [" + it->second + "]");
        kv[key] = value;
    }
    for (const auto& [key, value] : overrides) {
        if (!known_keys().count(key)) throw ConfigError("unknown key '" + key + "'");
        kv[key] = value;
    }
    auto has = [&](const char* k) { return kv.count(k) > 0; };
    auto num = [&](const char* k, double def) { return has(k) ? to_double(k, kv.at(k)) : def; };

    RunConfig cfg;
    cfg.mode = mode;
    auto& sys = cfg.system;
    sys.omega_c = num("omega_c", 1.0);
    if (has("g_file") && has("g0")) throw ConfigError("key 'g_file': conflicts with 'g0'");
    if (has("d1_file") && has("d1")) throw ConfigError("key 'd1_file': conflicts with 'd1'");
    sys.coupling.g.source = has("g_file") ? ScalarProfile{read_table("g_file", kv.at("g_file"))}.source
                                          : ScalarProfile{num("g0", 1.0)}.source;
    sys.coupling.d1.source = has("d1_file") ? ScalarProfile{read_table("d1_file", kv.at("d1_file"))}.source
                                            : ScalarProfile{num("d1", 0.0)}.source;

    const std::string kind = has("squeezing") ? trim(kv.at("squeezing")) : "constant";
    if (kind == "constant") {
        sys.squeezing = Constant{num("d2", 0.0)};
    } else if (kind == "modulated") {
        sys.squeezing = Modulated{num("d2", 0.0), num("omega0", 2.0)};
    } else if (kind == "tabulated") {
        if (!has("squeezing_file")) throw ConfigError("key 'squeezing_file': required for tabulated squeezing");
        sys.squeezing = Tabulated{read_table("squeezing_file", kv.at("squeezing_file"))};
    } else {
        throw ConfigError("key 'squeezing': expected constant, modulated or tabulated, got '" + kind + "'");
    }
    cfg.init.mu_c = has("mu_c") ? to_complex("mu_c", kv.at("mu_c")) : cplx{1.0, 0.0};
    cfg.init.mu_m = has("mu_m") ? to_complex("mu_m", kv.at("mu_m")) : cplx{0.0, 0.0};

    cfg.tau_max = num("tau_max", 0.0);
    if (has("samples")) {
        const long n = to_integer("samples", kv.at("samples"));
        if (n < 1) throw ConfigError("key 'samples': must be at least 1");
        cfg.samples = static_cast<std::size_t>(n);
    }
    cfg.lab_frame = has("lab_frame") && to_bool("lab_frame", kv.at("lab_frame"));

    for (const char* k : {"axis1", "axis2"})
        if (has(k) && !trim(kv.at(k)).empty()) {
            try {
                cfg.axes.push_back(parse_axis(kv.at(k)));
            } catch (const ConfigError& e) {
                throw ConfigError("key '" + std::string(k) + "': " + e.what());
            }
        }
    cfg.sweep_tau = num("tau", 0.0);
    if (has("workers")) {
        const long w = to_integer("workers", kv.at("workers"));
        if (w < 0) throw ConfigError("key 'workers': must be non-negative");
        cfg.workers = static_cast<unsigned>(w);
    }

    cfg.solver.abs_tol = num("abs_tol", cfg.solver.abs_tol);
    cfg.solver.rel_tol = num("rel_tol", cfg.solver.rel_tol);
    cfg.solver.resolution = num("resolution", cfg.solver.resolution);
    if (has("min_samples")) {
        const long n = to_integer("min_samples", kv.at("min_samples"));
        if (n < 4) throw ConfigError("key 'min_samples': must be at least 4");
        cfg.solver.min_samples = static_cast<std::size_t>(n);
    }
    if (!(cfg.solver.abs_tol > 0.0)) throw ConfigError("key 'abs_tol': must be positive");
    if (!(cfg.solver.rel_tol > 0.0)) throw ConfigError("key 'rel_tol': must be positive");
    if (!(cfg.solver.resolution > 0.0)) throw ConfigError("key 'resolution': must be positive");

    if (has("n_c") != has("n_m")) throw ConfigError(std::string("key '") + (has("n_c") ? "n_m" : "n_c") + "': n_c and n_m go together");
    if (has("n_c")) {
        const long nc = to_integer("n_c", kv.at("n_c")), nm = to_integer("n_m", kv.at("n_m"));
        if (nc < 2) throw ConfigError("key 'n_c': must be at least 2");
        if (nm < 2) throw ConfigError("key 'n_m': must be at least 2");
        cfg.cutoffs = Cutoffs{static_cast<int>(nc), static_cast<int>(nm)};
    }
    cfg.oracle_dt = num("dt", 0.0);
    if (cfg.oracle_dt < 0.0) throw ConfigError("key 'dt': must be non-negative");
    cfg.oracle_tol = num("tolerance", 1e-3);
    if (!(cfg.oracle_tol > 0.0)) throw ConfigError("key 'tolerance': must be positive");
    if (has("points")) {
        const long n = to_integer("points", kv.at("points"));
        if (n < 1) throw ConfigError("key 'points': must be at least 1");
        cfg.oracle_points = static_cast<std::size_t>(n);
    }

    if (mode == Mode::sweep) {
        if (cfg.axes.empty()) throw ConfigError("key 'axis1': sweep needs at least one axis");
        if (cfg.axes.size() == 2 && cfg.axes[0].name == cfg.axes[1].name)
            throw ConfigError("key 'axis2': duplicates axis1");
        const bool tau_axis = std::any_of(cfg.axes.begin(), cfg.axes.end(), [](const AxisSpec& a) { return a.name == "tau"; });
        if (!tau_axis && !(cfg.sweep_tau > 0.0)) throw ConfigError("key 'tau': sweep needs tau > 0 or a tau axis");
    } else if (!(cfg.tau_max > 0.0)) {
        throw ConfigError("key 'tau_max': must be positive");
    }
    return cfg;
}

RunConfig parse_command_line(const std::vector<std::string>& args) {
    if (args.empty()) throw ConfigError("usage: optomech <evolve|sweep|oracle-check|mathieu> --config FILE [--key value ...] --out FILE");
    const auto mode = parse_mode(args[0]);
    if (!mode) throw ConfigError("unknown mode '" + args[0] + "'");

    std::string config_path, out_path;
    std::map<std::string, std::string> overrides;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0 || a.size() == 2) throw ConfigError("unexpected argument '" + a + "'");
        if (i + 1 >= args.size()) throw ConfigError("flag '" + a + "' needs a value");
        const std::string key = a.substr(2), value = args[++i];
        if (key == "config")
            config_path = value;
        else if (key == "out")
            out_path = value;
        else if (!overrides.emplace(key, value).second)
            throw ConfigError("flag '--" + key + "' given twice");
    }
    if (config_path.empty()) throw ConfigError("missing --config FILE");
    if (out_path.empty()) throw ConfigError("missing --out FILE");

    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config '" + config_path + "'");
    auto cfg = build_run_config(*mode, parse_key_values(in, config_path), overrides);
    cfg.out_path = out_path;
    return cfg;
}

}  // namespace optomech
