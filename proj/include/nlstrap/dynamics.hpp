#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlstrap/energy.hpp"
#include "nlstrap/grid.hpp"

namespace nlstrap {

struct EvolveConfig {
    double p = 3.0;
    double dt = 0.005;      ///< negative values run the flow backward
    double t_final = 20.0;
    int cadence = 20;       ///< steps between observable samples
    bool trap = true;       ///< false: diagnostic untrapped mode, V = 0
    double collapse_amplitude = 1e6;  ///< max|u| growth factor flagged as collapse
    double collapse_tail = 1e-4;      ///< spectral tail flagged as loss of resolution

    /// Throws std::invalid_argument on dt = 0, t_final < 0, cadence < 1, or
    /// max|k|^2 |dt| >= 2 pi on the grid.
    void validate(const Grid3& grid) const;
    int steps() const;
};

/// max |k|^2 |dt| over the grid wavenumbers.
double cfl_number(const Grid3& grid, double dt);

/// One Strang step: kinetic half step, exact potential + nonlinear phase, kinetic half step.
Field strang_step(const Field& u, const EvolveConfig& cfg);

struct TrajectorySummary {
    std::vector<double> t, mass, energy, distance, max_amp;
    double mass_drift = 0.0;      ///< max |M(t) - M(0)| / M(0)
    double energy_drift = 0.0;    ///< max |E(t) - E(0)| / |E(0)|
    double initial_distance = 0.0;
    double max_distance = 0.0;
    bool collapse = false;
    std::string collapse_reason;
    std::optional<Field> final_state;
};

/// Runs cfg.steps() Strang steps from u0 and samples mass, energy, max|u| and,
/// when a reference is given, the orbital distance to it. Stops early on collapse.
TrajectorySummary evolve(const Field& u0, const EvolveConfig& cfg, const Field* reference = nullptr);

/// ||v||_H^2 = ||grad v||^2 + integral (x1^2 + x2^2)|v|^2 + ||v||^2.
double h_norm_sq(const Field& v);
cplx h_inner(const Field& a, const Field& b);

/// inf over phases theta and x3 shifts k of ||u - e^{i theta} shift_x3(uref, k)||_H.
double orbital_distance(const Field& u, const Field& uref);

struct OrbitFit {
    double theta = 0.0;
    double shift = 0.0;
    double distance = 0.0;
};
OrbitFit orbital_fit(const Field& u, const Field& uref);

/// u + eps ||u||_H v / ||v||_H with v a seeded random smooth field.
Field perturb(const Field& u, double eps, std::uint64_t seed);

}  // namespace nlstrap
