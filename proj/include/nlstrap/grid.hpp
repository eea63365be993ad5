#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace nlstrap {

using cplx = std::complex<double>;

namespace detail {
struct FftPlans;
}

/**
 * Uniform periodic box [-L1/2, L1/2) x [-L2/2, L2/2) x [-L3/2, L3/2).
 *
 * Node i on axis a sits at x = -L_a/2 + i*h_a, so for even n_a the node
 * n_a/2 is the origin. Data is stored with x1 slowest and x3 fastest.
 * Wavenumbers follow the usual FFT ordering 0, 1, ..., n/2-1, -n/2, ..., -1
 * (times 2*pi/L).
 *
 * A Grid3 is a cheap value type; FFT plans are shared and read-only.
 */
class Grid3 {
public:
    /// Throws std::invalid_argument unless every n >= 8 and every L > 0.
    Grid3(std::array<int, 3> n, std::array<double, 3> L);

    int n(int axis) const { return n_[axis]; }
    double length(int axis) const { return L_[axis]; }
    double spacing(int axis) const { return L_[axis] / n_[axis]; }
    std::array<int, 3> counts() const { return n_; }
    std::array<double, 3> lengths() const { return L_; }

    std::size_t size() const {
        return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
    }
    std::size_t slice_size() const { return static_cast<std::size_t>(n_[0]) * n_[1]; }
    double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
    double volume() const { return L_[0] * L_[1] * L_[2]; }

    const std::vector<double>& coords(int axis) const { return x_[axis]; }
    const std::vector<double>& wavenumbers(int axis) const { return k_[axis]; }

    std::size_t index(int i1, int i2, int i3) const {
        return (static_cast<std::size_t>(i1) * n_[1] + i2) * n_[2] + i3;
    }

    /// Same counts and lengths (plans are irrelevant).
    bool same_geometry(const Grid3& other) const { return n_ == other.n_ && L_ == other.L_; }

    // Unnormalized in-place transforms (FFTW sign convention: forward uses e^{-ikx}).
    void fft3(std::span<cplx> data, bool forward) const;
    /// Batched 1D transform along x3 for every (x1, x2) column.
    void fft_x3(std::span<cplx> data, bool forward) const;

private:
    std::array<int, 3> n_;
    std::array<double, 3> L_;
    std::array<std::vector<double>, 3> x_;
    std::array<std::vector<double>, 3> k_;
    std::shared_ptr<const detail::FftPlans> plans_;
};

Grid3 make_grid(int n1, int n2, int n3, double L1, double L2, double L3);

/// Periodic wavenumbers 2*pi/L * {0, 1, ..., n/2-1, -n/2, ..., -1}.
std::vector<double> periodic_wavenumbers(int n, double L);

/**
 * Complex scalar field on a Grid3. Immutable: every operation returns a new
 * Field. Construction rejects non-finite entries and size mismatches.
 */
class Field {
public:
    Field(Grid3 grid, std::vector<cplx> values);

    static Field zeros(const Grid3& grid);
    static Field sample(const Grid3& grid,
                        const std::function<cplx(double, double, double)>& f);

    const Grid3& grid() const { return grid_; }
    std::span<const cplx> values() const { return values_; }
    const std::vector<cplx>& data() const { return values_; }
    std::size_t size() const { return values_.size(); }

    cplx operator()(int i1, int i2, int i3) const { return values_[grid_.index(i1, i2, i3)]; }
    cplx operator[](std::size_t i) const { return values_[i]; }

    Field scaled(cplx c) const;
    Field plus(const Field& other) const;
    Field minus(const Field& other) const;
    Field conj() const;
    Field abs() const;
    double max_abs() const;

private:
    Grid3 grid_;
    std::vector<cplx> values_;
};

inline Field operator+(const Field& a, const Field& b) { return a.plus(b); }
inline Field operator-(const Field& a, const Field& b) { return a.minus(b); }
inline Field operator*(cplx c, const Field& a) { return a.scaled(c); }
inline Field operator*(double c, const Field& a) { return a.scaled(cplx(c, 0.0)); }

// Spectral calculus and quadrature.

Field laplacian(const Field& f);
/// <f, g> = sum conj(f) g dV. Throws std::invalid_argument on grid mismatch.
cplx inner(const Field& f, const Field& g);
double l2_norm_sq(const Field& f);
/// l2_norm_sq evaluated from Fourier coefficients (Parseval route).
double l2_norm_sq_spectral(const Field& f);
/// Periodic translation u(x3) -> u(x3 - k) by spectral phase multiplication.
Field shift_x3(const Field& f, double k);
/// Exact cyclic roll by whole cells along x3 (u(i3) -> u(i3 - cells)).
Field roll_x3(const Field& f, int cells);
/// |grad f|^2 integrated spectrally.
double kinetic_energy(const Field& f);
/// Fraction of the mass carried by Fourier modes with |k_a| > 3/4 of Nyquist
/// on any axis. Smooth, resolved fields give values far below 1e-6.
double spectral_tail(const Field& f);
/// Mass in the outermost cell layer on every face (box-truncation diagnostic).
double boundary_mass(const Field& f);

namespace detail {
// In-place spectral Laplacian on raw storage.
void laplacian_inplace(const Grid3& grid, std::vector<cplx>& data);
double l2_norm_sq_raw(const Grid3& grid, std::span<const cplx> data);
}  // namespace detail

}  // namespace nlstrap
