#include "nlstrap/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nlstrap {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw ConfigError("config: " + key + " expects a number, got '" + std::string(s) + "'");
    return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& RunConfig::defaults() {
    static const std::vector<std::pair<std::string, std::string>> d = {
        {"out_dir", "."},
        {"jobs", "1"},
        {"seed", "1"},
        {"grid", "32,32,64"},
        {"box", "16,16,32"},
        {"p", "3"},
        {"r", "0.1"},
        {"chi", "4"},
        {"dt", "1"},
        {"dt_max", "1000"},
        {"tol", "1e-8"},
        {"max_iter", "20000"},
        {"init", "gaussian"},
        {"init_file", ""},
        {"r_list", "0.05,0.1,0.2,0.4"},
        {"modes", "0"},
        {"in", ""},
        {"out", ""},
        {"evolve_dt", "0.005"},
        {"t_final", "20"},
        {"cadence", "100"},
        {"perturb", "0"},
        {"trap", "true"},
        {"gn_count", "1000"},
        {"stability_t", "2"},
        {"stability_eps", "0.01"},
    };
    return d;
}

RunConfig::RunConfig() {
    for (const auto& [k, v] : defaults()) values_[k] = v;
}

void RunConfig::load_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    load_text(ss.str());
}

void RunConfig::load_text(std::string_view text) {
    int lineno = 0;
    for (const auto& raw : split(text, '\n')) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void RunConfig::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("config: unknown key '" + key + "'");
    it->second = value;
}

const std::string& RunConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("config: unknown key '" + key + "'");
    return it->second;
}

double RunConfig::number(const std::string& key) const { return parse_number(key, get(key)); }

int RunConfig::integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError("config: " + key + " expects an integer");
    return static_cast<int>(v);
}

bool RunConfig::flag(const std::string& key) const {
    const auto& v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: " + key + " expects true or false");
}

std::vector<double> RunConfig::list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : split(get(key), ',')) out.push_back(parse_number(key, s));
    return out;
}

std::string RunConfig::dump() const {
    std::string s;
    for (const auto& [k, v] : values_) s += k + " = " + v + "\n";
    return s;
}

Grid3 RunConfig::grid() const {
    const auto n = list("grid");
    const auto L = list("box");
    if (n.size() != 3 || L.size() != 3) throw ConfigError("config: grid and box need three comma-separated values");
    std::array<int, 3> ni{};
    for (int a = 0; a < 3; ++a) {
        if (n[a] != std::floor(n[a])) throw ConfigError("config: grid counts must be integers");
        ni[a] = static_cast<int>(n[a]);
    }
    try {
        return Grid3(ni, {L[0], L[1], L[2]});
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

SolveConfig RunConfig::solve_config() const {
    SolveConfig c;
    c.p = number("p");
    c.r = number("r");
    c.chi = number("chi");
    c.dt = number("dt");
    c.dt_max = number("dt_max");
    c.tol = number("tol");
    c.max_iter = integer("max_iter");
    try {
        c.init = parse_init_kind(get("init"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.init_file = get("init_file");
    c.seed = static_cast<std::uint64_t>(integer("seed"));
    return c;
}

EvolveConfig RunConfig::evolve_config() const {
    EvolveConfig c;
    c.p = number("p");
    c.dt = number("evolve_dt");
    c.t_final = number("t_final");
    c.cadence = integer("cadence");
    c.trap = flag("trap");
    return c;
}

std::filesystem::path RunConfig::output_path(const std::string& name) const {
    std::filesystem::path p(name);
    return p.is_absolute() ? p : out_dir() / p;
}

void RunConfig::validate(std::string_view command) const {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError("config: " + msg);
    };
    auto file_exists = [&](const std::string& key, bool required) {
        const auto& v = get(key);
        if (v.empty()) {
            need(!required, key + " is required for " + std::string(command));
            return;
        }
        need(std::filesystem::is_regular_file(v), key + " file not found: " + v);
    };

    need(jobs() >= 1, "jobs must be >= 1");
    need(integer("seed") >= 0, "seed must be >= 0");
    (void)grid();
    try {
        const SolveConfig sc = solve_config();
        if (command == "groundstate" || command == "sweep" || command == "verify") {
            sc.validate();
            if (sc.init == InitKind::file) file_exists("init_file", true);
        }
        if (command == "evolve") {
            const EvolveConfig ec = evolve_config();
            need(ec.dt > 0.0 && ec.t_final >= 0.0 && ec.cadence >= 1, "evolve_dt, t_final and cadence must be positive");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    need(integer("modes") >= 0, "modes must be >= 0");

    if (command == "sweep") {
        const auto rs = list("r_list");
        need(!rs.empty(), "r_list is empty");
        for (std::size_t i = 0; i < rs.size(); ++i) {
            need(rs[i] > 0.0, "r_list entries must be positive");
            need(i == 0 || rs[i] > rs[i - 1], "r_list must be strictly increasing");
        }
    }
    if (command == "evolve" || command == "rearrange") file_exists("in", true);
    if (command == "verify") {
        file_exists("in", false);
        need(integer("gn_count") >= 1, "gn_count must be >= 1");
        need(number("stability_t") > 0.0, "stability_t must be positive");
        need(number("stability_eps") >= 0.0, "stability_eps must be >= 0");
        need(number("evolve_dt") > 0.0, "evolve_dt must be positive");
    }
    if (command == "evolve") need(number("perturb") >= 0.0, "perturb must be >= 0");
}

}  // namespace nlstrap
