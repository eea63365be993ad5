#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlstrap/dynamics.hpp"
#include "nlstrap/groundstate.hpp"

namespace nlstrap {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Flat key=value run configuration. Every key has an embedded default;
 * a config file overrides defaults and explicit flags override the file
 * (callers apply them in that order). Unknown keys are errors.
 *
 * File syntax: one `key = value` per line, `#` starts a comment.
 */
class RunConfig {
public:
    RunConfig();

    static const std::vector<std::pair<std::string, std::string>>& defaults();

    void load_file(const std::filesystem::path& path);
    void load_text(std::string_view text);
    void set(const std::string& key, const std::string& value);
    const std::string& get(const std::string& key) const;

    double number(const std::string& key) const;
    int integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<double> list(const std::string& key) const;

    /// Sorted `key = value` lines.
    std::string dump() const;

    Grid3 grid() const;
    SolveConfig solve_config() const;
    EvolveConfig evolve_config() const;
    int jobs() const { return integer("jobs"); }
    std::filesystem::path out_dir() const { return get("out_dir"); }
    /// `name` resolved against out_dir unless absolute.
    std::filesystem::path output_path(const std::string& name) const;

    /// Range and file checks for one subcommand; throws ConfigError.
    void validate(std::string_view command) const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace nlstrap
