#include "nlstrap/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlstrap {

namespace detail {

// FFTW planning is not thread-safe; execution with the new-array interface is.
static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftPlans {
    fftw_plan fwd3 = nullptr;
    fftw_plan bwd3 = nullptr;
    fftw_plan fwd_x3 = nullptr;
    fftw_plan bwd_x3 = nullptr;

    explicit FftPlans(std::array<int, 3> n) {
        const std::size_t total = static_cast<std::size_t>(n[0]) * n[1] * n[2];
        std::vector<cplx> scratch(total);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        // ESTIMATE keeps plans (and therefore results) identical across runs.
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        std::lock_guard lock(planner_mutex());
        fwd3 = fftw_plan_dft_3d(n[0], n[1], n[2], buf, buf, FFTW_FORWARD, flags);
        bwd3 = fftw_plan_dft_3d(n[0], n[1], n[2], buf, buf, FFTW_BACKWARD, flags);
        const int len = n[2];
        const int howmany = n[0] * n[1];
        fwd_x3 = fftw_plan_many_dft(1, &len, howmany, buf, nullptr, 1, len, buf, nullptr, 1, len,
                                    FFTW_FORWARD, flags);
        bwd_x3 = fftw_plan_many_dft(1, &len, howmany, buf, nullptr, 1, len, buf, nullptr, 1, len,
                                    FFTW_BACKWARD, flags);
        if (!fwd3 || !bwd3 || !fwd_x3 || !bwd_x3) {
            throw std::runtime_error("FFTW planning failed");
        }
    }

    ~FftPlans() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd3);
        fftw_destroy_plan(bwd3);
        fftw_destroy_plan(fwd_x3);
        fftw_destroy_plan(bwd_x3);
    }

    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;
};

void laplacian_inplace(const Grid3& grid, std::vector<cplx>& data) {
    grid.fft3(data, true);
    const auto& k1 = grid.wavenumbers(0);
    const auto& k2 = grid.wavenumbers(1);
    const auto& k3 = grid.wavenumbers(2);
    const double norm = 1.0 / static_cast<double>(grid.size());
    std::size_t idx = 0;
    for (int a = 0; a < grid.n(0); ++a) {
        for (int b = 0; b < grid.n(1); ++b) {
            const double kk = k1[a] * k1[a] + k2[b] * k2[b];
            for (int c = 0; c < grid.n(2); ++c, ++idx) {
                data[idx] *= -(kk + k3[c] * k3[c]) * norm;
            }
        }
    }
    grid.fft3(data, false);
}

double l2_norm_sq_raw(const Grid3& grid, std::span<const cplx> data) {
    double s = 0.0;
    for (const auto& v : data) s += std::norm(v);
    return s * grid.cell_volume();
}

}  // namespace detail

std::vector<double> periodic_wavenumbers(int n, double L) {
    std::vector<double> k(n);
    const double base = 2.0 * std::numbers::pi / L;
    for (int i = 0; i < n; ++i) {
        const int m = (i < n / 2) ? i : i - n;
        k[i] = base * m;
    }
    return k;
}

Grid3::Grid3(std::array<int, 3> n, std::array<double, 3> L) : n_(n), L_(L) {
    for (int a = 0; a < 3; ++a) {
        if (n_[a] < 8) {
            throw std::invalid_argument("grid: n" + std::to_string(a + 1) + " = " +
                                        std::to_string(n_[a]) + " < 8");
        }
        if (!(L_[a] > 0.0) || !std::isfinite(L_[a])) {
            throw std::invalid_argument("grid: L" + std::to_string(a + 1) + " must be positive");
        }
        const double h = L_[a] / n_[a];
        x_[a].resize(n_[a]);
        for (int i = 0; i < n_[a]; ++i) x_[a][i] = -0.5 * L_[a] + i * h;
        k_[a] = periodic_wavenumbers(n_[a], L_[a]);
    }
    plans_ = std::make_shared<const detail::FftPlans>(n_);
}

Grid3 make_grid(int n1, int n2, int n3, double L1, double L2, double L3) {
    return Grid3({n1, n2, n3}, {L1, L2, L3});
}

void Grid3::fft3(std::span<cplx> data, bool forward) const {
    if (data.size() != size()) throw std::invalid_argument("fft3: size mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(forward ? plans_->fwd3 : plans_->bwd3, p, p);
}

void Grid3::fft_x3(std::span<cplx> data, bool forward) const {
    if (data.size() != size()) throw std::invalid_argument("fft_x3: size mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(forward ? plans_->fwd_x3 : plans_->bwd_x3, p, p);
}

// ---------------------------------------------------------------------------

Field::Field(Grid3 grid, std::vector<cplx> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("field: value count " + std::to_string(values_.size()) +
                                    " does not match grid size " + std::to_string(grid_.size()));
    }
    for (const auto& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("field: non-finite entry");
        }
    }
}

Field Field::zeros(const Grid3& grid) { return Field(grid, std::vector<cplx>(grid.size())); }

Field Field::sample(const Grid3& grid, const std::function<cplx(double, double, double)>& f) {
    std::vector<cplx> v(grid.size());
    const auto& x1 = grid.coords(0);
    const auto& x2 = grid.coords(1);
    const auto& x3 = grid.coords(2);
    std::size_t idx = 0;
    for (int a = 0; a < grid.n(0); ++a)
        for (int b = 0; b < grid.n(1); ++b)
            for (int c = 0; c < grid.n(2); ++c) v[idx++] = f(x1[a], x2[b], x3[c]);
    return Field(grid, std::move(v));
}

Field Field::scaled(cplx c) const {
    std::vector<cplx> v(values_);
    for (auto& z : v) z *= c;
    return Field(grid_, std::move(v));
}

static void require_same_grid(const Grid3& a, const Grid3& b, const char* what) {
    if (!a.same_geometry(b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

Field Field::plus(const Field& other) const {
    require_same_grid(grid_, other.grid_, "field +");
    std::vector<cplx> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
    return Field(grid_, std::move(v));
}

Field Field::minus(const Field& other) const {
    require_same_grid(grid_, other.grid_, "field -");
    std::vector<cplx> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= other.values_[i];
    return Field(grid_, std::move(v));
}

Field Field::conj() const {
    std::vector<cplx> v(values_);
    for (auto& z : v) z = std::conj(z);
    return Field(grid_, std::move(v));
}

Field Field::abs() const {
    std::vector<cplx> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(values_[i]);
    return Field(grid_, std::move(v));
}

double Field::max_abs() const {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z));
    return m;
}

// ---------------------------------------------------------------------------

Field laplacian(const Field& f) {
    std::vector<cplx> v(f.data());
    detail::laplacian_inplace(f.grid(), v);
    return Field(f.grid(), std::move(v));
}

cplx inner(const Field& f, const Field& g) {
    require_same_grid(f.grid(), g.grid(), "inner");
    cplx s = 0.0;
    const auto fv = f.values();
    const auto gv = g.values();
    for (std::size_t i = 0; i < fv.size(); ++i) s += std::conj(fv[i]) * gv[i];
    return s * f.grid().cell_volume();
}

double l2_norm_sq(const Field& f) { return detail::l2_norm_sq_raw(f.grid(), f.values()); }

double l2_norm_sq_spectral(const Field& f) {
    std::vector<cplx> v(f.data());
    f.grid().fft3(v, true);
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s * f.grid().cell_volume() / static_cast<double>(f.size());
}

Field shift_x3(const Field& f, double k) {
    const Grid3& g = f.grid();
    std::vector<cplx> v(f.data());
    g.fft_x3(v, true);
    const auto& k3 = g.wavenumbers(2);
    const int n3 = g.n(2);
    std::vector<cplx> phase(n3);
    for (int c = 0; c < n3; ++c) phase[c] = std::polar(1.0 / n3, -k3[c] * k);
    for (std::size_t col = 0; col < g.slice_size(); ++col) {
        cplx* row = v.data() + col * n3;
        for (int c = 0; c < n3; ++c) row[c] *= phase[c];
    }
    g.fft_x3(v, false);
    return Field(g, std::move(v));
}

Field roll_x3(const Field& f, int cells) {
    const Grid3& g = f.grid();
    const int n3 = g.n(2);
    const int s = ((cells % n3) + n3) % n3;
    std::vector<cplx> v(f.size());
    const auto src = f.values();
    for (std::size_t col = 0; col < g.slice_size(); ++col) {
        const std::size_t base = col * n3;
        for (int c = 0; c < n3; ++c) v[base + (c + s) % n3] = src[base + c];
    }
    return Field(g, std::move(v));
}

double kinetic_energy(const Field& f) {
    const Grid3& g = f.grid();
    std::vector<cplx> v(f.data());
    g.fft3(v, true);
    const auto& k1 = g.wavenumbers(0);
    const auto& k2 = g.wavenumbers(1);
    const auto& k3 = g.wavenumbers(2);
    double s = 0.0;
    std::size_t idx = 0;
    for (int a = 0; a < g.n(0); ++a)
        for (int b = 0; b < g.n(1); ++b) {
            const double kk = k1[a] * k1[a] + k2[b] * k2[b];
            for (int c = 0; c < g.n(2); ++c, ++idx) s += (kk + k3[c] * k3[c]) * std::norm(v[idx]);
        }
    return s * g.cell_volume() / static_cast<double>(g.size());
}

double spectral_tail(const Field& f) {
    const Grid3& g = f.grid();
    std::vector<cplx> v(f.data());
    g.fft3(v, true);
    std::array<double, 3> cut{};
    for (int a = 0; a < 3; ++a) cut[a] = 0.75 * std::numbers::pi / g.spacing(a);
    const auto& k1 = g.wavenumbers(0);
    const auto& k2 = g.wavenumbers(1);
    const auto& k3 = g.wavenumbers(2);
    double tail = 0.0, total = 0.0;
    std::size_t idx = 0;
    for (int a = 0; a < g.n(0); ++a)
        for (int b = 0; b < g.n(1); ++b)
            for (int c = 0; c < g.n(2); ++c, ++idx) {
                const double w = std::norm(v[idx]);
                total += w;
                if (std::abs(k1[a]) > cut[0] || std::abs(k2[b]) > cut[1] || std::abs(k3[c]) > cut[2])
                    tail += w;
            }
    return total > 0.0 ? tail / total : 0.0;
}

double boundary_mass(const Field& f) {
    const Grid3& g = f.grid();
    double s = 0.0;
    for (int a = 0; a < g.n(0); ++a)
        for (int b = 0; b < g.n(1); ++b)
            for (int c = 0; c < g.n(2); ++c) {
                const bool edge = a == 0 || a == g.n(0) - 1 || b == 0 || b == g.n(1) - 1 || c == 0 ||
                                  c == g.n(2) - 1;
                if (edge) s += std::norm(f(a, b, c));
            }
    return s * g.cell_volume();
}

}  // namespace nlstrap
