#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nlstrap/grid.hpp"

namespace nlstrap {

/**
 * Nonlinearity exponent p of |u|^{p-1} u.
 *
 * The standard range 1 + 4/3 <= p < 5 is where the existence theory lives;
 * the extended range 1 < p < 5 is accepted for diagnostics that only need
 * a subcritical Sobolev exponent.
 */
class Exponent {
public:
    static constexpr double kMassCritical = 1.0 + 4.0 / 3.0;

    static Exponent standard(double p);
    static Exponent extended(double p);

    double value() const { return p_; }
    bool in_standard_range() const;
    /// Strictly above the mass-critical exponent 7/3.
    bool supercritical() const { return p_ > kMassCritical + 1e-12; }

private:
    explicit Exponent(double p) : p_(p) {}
    double p_;
};

/// Every scalar functional of a field. lambda is empty for the zero field.
struct EnergyReport {
    double p = 3.0;
    double l2_sq = 0.0;    ///< integral |u|^2
    double kinetic = 0.0;  ///< integral |grad u|^2
    double trap = 0.0;     ///< integral (x1^2 + x2^2) |u|^2
    double doth_sq = 0.0;  ///< kinetic + trap
    double lp1 = 0.0;      ///< integral |u|^{p+1}
    double energy = 0.0;   ///< doth_sq / 2 - lp1 / (p + 1)
    std::optional<double> lambda;  ///< (doth_sq - lp1) / l2_sq
    double pohozaev = 0.0;         ///< kinetic - trap - 3(p-1)/(2(p+1)) lp1

    /// Algebraic identities between the fields hold (to relative 1e-12).
    bool self_consistent() const;
};

EnergyReport report(const Field& u, Exponent p);

/// E(u) only; cheaper than a full report when only the energy is needed.
double energy(const Field& u, Exponent p);
double trap_moment(const Field& u);
/// integral |u|^q.
double lq_integral(const Field& u, double q);

/// Euler-Lagrange gradient H u - |u|^{p-1} u, with H = -Laplacian + x1^2 + x2^2.
/// The directional derivative of E along v is Re <gradient, v>.
Field energy_gradient(const Field& u, Exponent p);

/// lp1 / (l2_sq^{(5-p)/4} doth_sq^{(3p-3)/4}). Throws for the zero field.
double gn_ratio(const Field& u, Exponent p);

struct GnCalibration {
    double c_hat = 0.0;          ///< corpus maximum of gn_ratio
    std::vector<double> ratios;  ///< one per corpus field, in generation order
};

/// Maximum gn_ratio over `count` random smooth fields drawn with `seed`.
GnCalibration calibrate_gn_constant(const Grid3& grid, Exponent p, int count, std::uint64_t seed);

/// 2 ||u||^2 <= ||u||_Hdot^2 (1 + 1e-8).
bool confinement_lower_bound_check(const Field& u);

struct ScalingRow {
    double scale = 1.0;
    double energy_resampled = 0.0;  ///< E of the resampled psi_lambda
    double energy_analytic = 0.0;   ///< scaling identity evaluated from report(psi)
    double spectral_tail = 0.0;
    bool flagged = false;           ///< resampled field not resolved on the grid
};

/// psi_lambda(x) = lambda^{3/2} psi(lambda x) by trigonometric interpolation
/// (points that land outside the box read zero). Requires lambda >= 1.
Field rescale(const Field& psi, double lambda);

/// Rows (lambda, E(psi_lambda)) resampled and from the exact identity
/// E = lambda^2 kin/2 - lambda^{3(p-1)/2} lp1/(p+1) + lambda^{-2} trap/2.
/// Rows whose resampled spectral tail exceeds 1e-6 are flagged.
std::vector<ScalingRow> scaling_sweep(const Field& psi, Exponent p, std::span<const double> lambdas);

}  // namespace nlstrap
