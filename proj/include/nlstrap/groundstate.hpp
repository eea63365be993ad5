#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlstrap/energy.hpp"
#include "nlstrap/grid.hpp"
#include "nlstrap/oscillator.hpp"

namespace nlstrap {

enum class InitKind { gaussian, gaussian_complex_phase, file, random_smooth };
std::string_view to_string(InitKind k);
InitKind parse_init_kind(std::string_view s);

enum class SolveStatus { interior, boundary_suspect, escaped, vanished, not_converged };
std::string_view to_string(SolveStatus s);

/// Bottom of the spectrum of -Laplacian + x1^2 + x2^2 on R^3.
inline constexpr double kSpectralBottom = 2.0;

struct SolveConfig {
    double p = 3.0;
    double r = 0.1;      ///< target L2 norm; the mass is r^2
    double chi = 4.0;    ///< radius of the Hdot ball that is monitored
    double dt = 1.0;     ///< initial flow step
    double dt_max = 1e3; ///< cap for step growth after accepted steps
    double tol = 1e-8;   ///< relative Euler-Lagrange residual
    int max_iter = 20000;
    InitKind init = InitKind::gaussian;
    std::string init_file;
    std::uint64_t seed = 1;
    bool recenter = true;

    /// Throws std::invalid_argument on out-of-range parameters.
    void validate() const;
};

struct GroundStateResult {
    Field u;
    double J = 0.0;
    double lambda = 0.0;
    double residual = 0.0;
    int iters = 0;
    double doth = 0.0;  ///< ||u||_Hdot (not squared)
    SolveStatus status = SolveStatus::not_converged;
    bool converged = false;
    int rejected_steps = 0;
    double boundary_mass = 0.0;
    bool boundary_flag = false;  ///< boundary_mass > 1e-8
    std::vector<double> energy_history{};  ///< energies of accepted iterates, in order
    std::vector<double> mass_history{};    ///< ||u||^2 of accepted iterates
};

/**
 * Normalized gradient flow for min E on the sphere ||u||^2 = r^2.
 *
 * Each step solves (I + dt (H - sigma)) w = u + dt |u|^{p-1} u exactly with
 * the diagonalized TrapHamiltonian, sigma being the current multiplier
 * (clamped so the operator stays positive), then rescales w to mass r^2.
 * Steps that raise the energy are halved and retried. The Hdot ball is
 * monitored, not enforced: leaving it ends the run as `escaped`.
 *
 * `start` overrides the configured initializer when given (InitKind::file).
 */
GroundStateResult solve(const Grid3& grid, const SolveConfig& cfg, const Field* start = nullptr);

/// The configured initial field, already scaled to mass r^2.
Field initial_field(const Grid3& grid, const SolveConfig& cfg);

/// -Lap u + (x1^2+x2^2) u - |u|^{p-1} u - lambda u.
Field el_residual_field(const Field& u, Exponent p, double lambda);
/// ||el_residual_field|| / ||u||. Throws for the zero field.
double el_residual(const Field& u, Exponent p, double lambda);

struct GeometryGap {
    double lhs = 0.0;  ///< g_r(chi r / 2) = chi^2 r^2 / 8
    double rhs = 0.0;  ///< inf over (chi r, chi) of s^2/2 - C r^eps s^{2+delta}
    bool holds = false;
};

/// Local-minimum geometry test with C = c_hat / (p+1), c_hat a calibrated
/// Gagliardo-Nirenberg constant (corpus maximum of gn_ratio).
GeometryGap geometry_gap(double r, double chi, double c_hat, Exponent p);
/// Largest r (by bisection on [r_lo, r_hi]) for which geometry_gap holds.
double geometry_threshold(double chi, double c_hat, Exponent p, double r_lo = 1e-6, double r_hi = 10.0);

struct SubadditivityRow {
    double r = 0.0, s = 0.0;
    double r2_Js = 0.0;  ///< r^2 J_s
    double s2_Jr = 0.0;  ///< s^2 J_r
    bool holds = false;  ///< strict r^2 J_s < s^2 J_r
};

/// Every pair r < s of interior results. Throws if a result is not interior.
std::vector<SubadditivityRow> subadditivity_check(const std::map<double, GroundStateResult>& results);

struct ProfileError {
    double err = 0.0;          ///< ||u - phi0 Psi0||_Hdot
    double err_over_r = 0.0;
    double mode_sum_err = 0.0; ///< same quantity from the retained transverse modes
};
ProfileError profile_error(const Field& u, double r, const OscillatorBasis& basis);

/// Defects of |u|, all relative to ||u||.
struct SymmetryReport {
    double angular = 0.0;            ///< spread on rings of equal x1^2 + x2^2
    double radial_monotonicity = 0.0;
    double evenness_raw = 0.0;       ///< x3-evenness about the box center
    double evenness = 0.0;           ///< x3-evenness about the heaviest slice
    double x3_monotonicity = 0.0;
    int center_index = 0;            ///< heaviest x3 slice
    double max_defect() const;
};
SymmetryReport symmetry_check(const Field& u);

struct Certificate {
    double pohozaev_ratio = 0.0;   ///< |P| / ||u||_Hdot^2
    double identity_bound = 0.0;   ///< (3p-7)/(6(p-1)) ||u||_Hdot^2
    double energy = 0.0;
    double level = 0.0;            ///< r^2 * 2 / 2
    bool holds = false;
};
/// Throws std::invalid_argument unless p > 1 + 4/3 strictly.
Certificate ground_state_certificate(const Field& u, Exponent p, double chi, double r);

struct PhaseReport {
    double theta = 0.0;        ///< mean phase
    double phase_std = 0.0;    ///< standard deviation of arg(u e^{-i theta}) on the support
    double max_deviation = 0.0;
    std::size_t support = 0;   ///< nodes with |u| > threshold * max|u|
};
PhaseReport phase_analysis(const Field& u, double threshold = 1e-6);
/// e^{-i theta} u with theta from phase_analysis.
Field remove_phase(const Field& u);

/// Bisection between an interior radius and an escaped one; each probe is a
/// full solve. Returns the midpoint of the final bracket.
double estimate_r0(const Grid3& grid, SolveConfig cfg, double r_interior, double r_escaped, int steps);

}  // namespace nlstrap
