#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nlstrap/groundstate.hpp"

namespace nlstrap {

enum class Outcome { pass, fail, not_applicable };
std::string_view to_string(Outcome o);

struct ClaimRow {
    std::string id;
    std::string anchor;     ///< the statement being checked
    double value = 0.0;
    std::string threshold;  ///< relation and bound, e.g. "<= 1e-04"
    Outcome outcome = Outcome::fail;
};

struct VerifyReport {
    std::vector<ClaimRow> rows;
    /// No row failed (n/a rows are allowed).
    bool all_pass() const;
    const ClaimRow* find(const std::string& id) const;
};

struct VerifyOptions {
    SolveConfig solve;             ///< p, r, chi and solver settings
    std::optional<Field> field;    ///< verify this field instead of a fresh solve
    int gn_count = 1000;           ///< calibration corpus for the GN constant
    int corpus = 100;              ///< held-out corpus for GN and confinement checks
    double stability_t = 2.0;
    double stability_eps = 0.01;
    double evolve_dt = 0.005;
    int jobs = 1;
};

/**
 * Runs the claim battery on the field (or a fresh solve at solve.r) plus
 * companion solves at r/2 and 2r for the multiplier ordering and the
 * subadditivity pairs. Claims that need p > 1 + 4/3 are marked n/a outside
 * that range.
 */
VerifyReport verify_all(const Grid3& grid, const VerifyOptions& opt);

/// Columns: claim_id, anchor, value, threshold, pass.
void write_verify_csv(std::ostream& os, const VerifyReport& rep);

/// Cyclic roll of the heaviest x3 slice to index n3/2.
Field center_x3(const Field& u);

}  // namespace nlstrap
