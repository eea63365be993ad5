#pragma once

#include <span>
#include <vector>

#include "nlstrap/grid.hpp"

namespace nlstrap {

/// Transverse Hermite index pair: Psi_j(x1, x2) = h_m(x1) h_n(x2).
struct ModeIndex {
    int m = 0;
    int n = 0;
    int degree() const { return m + n; }
};

/**
 * Eigenmodes of the 2D oscillator -d^2/dx1^2 - d^2/dx2^2 + x1^2 + x2^2 sampled on
 * the (x1, x2) plane of a grid. Mode j has eigenvalue 2(m + n + 1); modes are
 * ordered by total degree, then by ascending m. The sampled 1D Hermite
 * functions are orthonormalized under the grid quadrature, so the discrete
 * modes are orthonormal to rounding.
 */
class OscillatorBasis {
public:
    OscillatorBasis(Grid3 grid, std::vector<ModeIndex> indices, std::vector<double> modes);

    const Grid3& grid() const { return grid_; }
    int size() const { return static_cast<int>(indices_.size()); }
    double eigenvalue(int j) const { return 2.0 * (indices_[j].degree() + 1); }
    ModeIndex index(int j) const { return indices_[j]; }
    /// Samples of Psi_j on the n1 x n2 plane (x2 fastest).
    std::span<const double> mode(int j) const;

private:
    Grid3 grid_;
    std::vector<ModeIndex> indices_;
    std::vector<double> modes_;
};

/// Number of modes in the complete degree shells 0..9 (eigenvalues up to 20)
/// that the grid resolves; stops at the first unresolved shell.
int default_mode_cutoff(const Grid3& grid);

/// Normalized Hermite functions h_0..h_max_degree at the points x, via the
/// three-term recurrence. Result is row-major (degree, point).
std::vector<double> hermite_functions(int max_degree, std::span<const double> x);

/// Throws std::invalid_argument for J < 1 or when a mode is not resolved by the
/// grid (quadrature norm off by more than 1e-6 before renormalization).
OscillatorBasis build_basis(const Grid3& grid, int J);

/// phi_j(x3) = sum over (x1, x2) of Psi_j u dx1 dx2.
std::vector<cplx> project_mode(const Field& u, const OscillatorBasis& basis, int j);
std::vector<cplx> project_phi0(const Field& u, const OscillatorBasis& basis);

struct ModeMasses {
    std::vector<double> masses;  ///< m_j = integral |phi_j|^2 dx3
    double remainder = 0.0;      ///< mass not captured by the retained modes
    double total = 0.0;          ///< ||u||^2
};
ModeMasses mode_masses(const Field& u, const OscillatorBasis& basis);

/// Psi_j(x1, x2) h(x3).
Field tensor_field(const OscillatorBasis& basis, int j, std::span<const cplx> h);

/// ||u||_Hdot^2 / ||u||^2. Throws std::invalid_argument for the zero field.
double rayleigh_quotient(const Field& u);

/**
 * The discrete operator H = -Laplacian + x1^2 + x2^2 on a grid, exactly
 * diagonalized: the transverse 1D pieces -D^2 + x^2 (D^2 the spectral second
 * derivative matrix) by a symmetric eigensolver, the x3 piece by FFT. This is
 * the same operator the spectral Laplacian plus trap produce, to rounding.
 */
class TrapHamiltonian {
public:
    explicit TrapHamiltonian(const Grid3& grid);

    const Grid3& grid() const { return grid_; }
    /// Smallest eigenvalue of the discrete H (approximately 2 on resolved boxes).
    double lowest_eigenvalue() const;
    std::span<const double> axis_eigenvalues(int axis) const { return evals_[axis]; }

    /// data <- H data, through the spectral Laplacian.
    void apply(std::vector<cplx>& data) const;
    /// data <- (a I + b H)^{-1} data. Requires a + b*lowest_eigenvalue() > 0 when b >= 0.
    void solve_shifted(std::vector<cplx>& data, double a, double b) const;

private:
    void transform_axis(std::vector<cplx>& data, int axis, bool to_modes) const;

    Grid3 grid_;
    std::array<std::vector<double>, 2> evecs_;  // row-major n x n, columns are eigenvectors
    std::array<std::vector<double>, 2> evals_;
    std::vector<double> trap_;  // x1^2 + x2^2 on the plane
};

/// The 1D spectral second-derivative matrix (row-major), consistent with the
/// periodic FFT Laplacian including the Nyquist mode.
std::vector<double> spectral_second_derivative(int n, double L);

}  // namespace nlstrap
