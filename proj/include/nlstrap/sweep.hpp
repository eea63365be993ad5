#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nlstrap/groundstate.hpp"

namespace nlstrap {

struct SweepRow {
    double r = 0.0;
    double J = 0.0;
    double lambda = 0.0;
    double doth = 0.0;
    double residual = 0.0;
    SolveStatus status = SolveStatus::not_converged;
    double profile_err = 0.0;  ///< ||u - phi0 Psi0||_Hdot
    double mode_tail = 0.0;    ///< (||u||^2 - m_0) / r^2
    double pohozaev = 0.0;     ///< |P| / ||u||_Hdot^2
};

/// Least-squares slope of log y against log x.
struct ExponentFit {
    std::string name;
    double target = 0.0;
    double slope = 0.0;
    double stderr_slope = 0.0;  ///< zero with fewer than three points
    double rms_residual = 0.0;
    int points = 0;
    bool sufficient = false;    ///< at least two usable points
};

ExponentFit fit_loglog(std::string name, std::span<const double> x, std::span<const double> y, double target);

struct SweepTable {
    double p = 3.0;
    std::vector<SweepRow> rows;     ///< sorted by r
    std::vector<ExponentFit> fits;  ///< 2 - lambda, profile_err / r, mode_tail
};

struct SweepOutput {
    SweepTable table;
    std::vector<GroundStateResult> results;  ///< same order as the rows
};

/// One solve per r (concurrently on `jobs` workers), then the profile,
/// mode and Pohozaev diagnostics. Fits use status=interior rows only.
/// Throws std::invalid_argument unless r_list is nonempty, positive and
/// strictly increasing.
SweepOutput run_sweep(const Grid3& grid, const SolveConfig& base, std::span<const double> r_list, int jobs = 1);

SweepRow make_sweep_row(const GroundStateResult& res, double r, Exponent p, const OscillatorBasis& basis);
std::vector<ExponentFit> sweep_fits(std::span<const SweepRow> rows, double p);

void write_sweep_csv(std::ostream& os, const SweepTable& t);

}  // namespace nlstrap
