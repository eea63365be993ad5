#include "nlstrap/oscillator.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "axis_ops.hpp"
#include "nlstrap/energy.hpp"

namespace nlstrap {

std::vector<double> hermite_functions(int max_degree, std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> h(static_cast<std::size_t>(max_degree + 1) * n);
    const double c0 = std::pow(std::numbers::pi, -0.25);
    for (std::size_t i = 0; i < n; ++i) h[i] = c0 * std::exp(-0.5 * x[i] * x[i]);
    if (max_degree >= 1) {
        for (std::size_t i = 0; i < n; ++i) h[n + i] = std::sqrt(2.0) * x[i] * h[i];
    }
    for (int d = 1; d < max_degree; ++d) {
        const double a = std::sqrt(2.0 / (d + 1));
        const double b = std::sqrt(static_cast<double>(d) / (d + 1));
        const double* hm = &h[(d - 1) * n];
        const double* h0 = &h[d * n];
        double* hp = &h[(d + 1) * n];
        for (std::size_t i = 0; i < n; ++i) hp[i] = a * x[i] * h0[i] - b * hm[i];
    }
    return h;
}

OscillatorBasis::OscillatorBasis(Grid3 grid, std::vector<ModeIndex> indices, std::vector<double> modes)
    : grid_(std::move(grid)), indices_(std::move(indices)), modes_(std::move(modes)) {}

std::span<const double> OscillatorBasis::mode(int j) const {
    const std::size_t plane = grid_.slice_size();
    return {modes_.data() + static_cast<std::size_t>(j) * plane, plane};
}

namespace {

// Modified Gram-Schmidt (two passes) in degree order under the grid
// quadrature; h_0 is only rescaled, higher degrees lose their O(1e-7)
// aliasing overlap with the lower ones.
std::vector<double> orthonormalize(std::vector<double> h, int max_deg, int n, double dx) {
    for (int d = 0; d <= max_deg; ++d) {
        double* v = &h[d * n];
        for (int pass = 0; pass < 2; ++pass) {
            for (int e = 0; e < d; ++e) {
                const double* w = &h[e * n];
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += v[i] * w[i];
                dot *= dx;
                for (int i = 0; i < n; ++i) v[i] -= dot * w[i];
            }
        }
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += v[i] * v[i];
        const double inv = 1.0 / std::sqrt(s * dx);
        for (int i = 0; i < n; ++i) v[i] *= inv;
    }
    return h;
}

double quadrature_norm(std::span<const double> h, double dx) {
    double s = 0.0;
    for (double v : h) s += v * v;
    return s * dx;
}

}  // namespace

int default_mode_cutoff(const Grid3& grid) {
    constexpr int kMaxDegree = 9;
    const auto h1 = hermite_functions(kMaxDegree, grid.coords(0));
    const auto h2 = hermite_functions(kMaxDegree, grid.coords(1));
    const std::size_t n1 = grid.coords(0).size(), n2 = grid.coords(1).size();
    int modes = 0;
    for (int d = 0; d <= kMaxDegree; ++d) {
        for (int m = 0; m <= d; ++m) {
            const double q = quadrature_norm({&h1[m * n1], n1}, grid.spacing(0)) *
                             quadrature_norm({&h2[(d - m) * n2], n2}, grid.spacing(1));
            if (!(std::abs(q - 1.0) <= 1e-6)) return modes;
        }
        modes += d + 1;
    }
    return modes;
}

OscillatorBasis build_basis(const Grid3& grid, int J) {
    if (J < 1) throw std::invalid_argument("build_basis: cutoff J must be >= 1");
    std::vector<ModeIndex> idx;
    for (int d = 0; static_cast<int>(idx.size()) < J; ++d)
        for (int m = 0; m <= d && static_cast<int>(idx.size()) < J; ++m) idx.push_back({m, d - m});
    int max_deg = 0;
    for (const auto& mi : idx) max_deg = std::max(max_deg, mi.degree());

    const int n1 = grid.n(0), n2 = grid.n(1);
    const auto h1 = hermite_functions(max_deg, grid.coords(0));
    const auto h2 = hermite_functions(max_deg, grid.coords(1));
    auto norms = [](const std::vector<double>& h, int deg, int n, double dx) {
        std::vector<double> out(deg + 1);
        for (int d = 0; d <= deg; ++d) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += h[d * n + i] * h[d * n + i];
            out[d] = s * dx;
        }
        return out;
    };
    const auto nrm1 = norms(h1, max_deg, n1, grid.spacing(0));
    const auto nrm2 = norms(h2, max_deg, n2, grid.spacing(1));

    for (const auto& mi : idx) {
        const double q = nrm1[mi.m] * nrm2[mi.n];
        if (!(std::abs(q - 1.0) <= 1e-6)) {
            throw std::invalid_argument("build_basis: mode (" + std::to_string(mi.m) + "," +
                                        std::to_string(mi.n) + ") not resolved, quadrature norm " +
                                        std::to_string(q));
        }
    }
    const auto q1 = orthonormalize(h1, max_deg, n1, grid.spacing(0));
    const auto q2 = orthonormalize(h2, max_deg, n2, grid.spacing(1));

    const std::size_t plane = grid.slice_size();
    std::vector<double> modes(plane * idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
        const auto [m, n] = idx[j];
        double* out = &modes[j * plane];
        for (int a = 0; a < n1; ++a)
            for (int b = 0; b < n2; ++b) out[a * n2 + b] = q1[m * n1 + a] * q2[n * n2 + b];
    }
    return OscillatorBasis(grid, std::move(idx), std::move(modes));
}

std::vector<cplx> project_mode(const Field& u, const OscillatorBasis& basis, int j) {
    const Grid3& g = u.grid();
    if (!g.same_geometry(basis.grid())) throw std::invalid_argument("project_mode: grid mismatch");
    const auto psi = basis.mode(j);
    const int n3 = g.n(2);
    std::vector<cplx> phi(n3);
    const double dA = g.spacing(0) * g.spacing(1);
    const auto v = u.values();
    for (std::size_t col = 0; col < g.slice_size(); ++col) {
        const double w = psi[col] * dA;
        const cplx* row = v.data() + col * n3;
        for (int c = 0; c < n3; ++c) phi[c] += w * row[c];
    }
    return phi;
}

std::vector<cplx> project_phi0(const Field& u, const OscillatorBasis& basis) {
    return project_mode(u, basis, 0);
}

ModeMasses mode_masses(const Field& u, const OscillatorBasis& basis) {
    ModeMasses out;
    out.total = l2_norm_sq(u);
    const double dz = u.grid().spacing(2);
    double captured = 0.0;
    out.masses.reserve(basis.size());
    for (int j = 0; j < basis.size(); ++j) {
        const auto phi = project_mode(u, basis, j);
        double m = 0.0;
        for (const auto& z : phi) m += std::norm(z);
        m *= dz;
        out.masses.push_back(m);
        captured += m;
    }
    out.remainder = out.total - captured;
    return out;
}

Field tensor_field(const OscillatorBasis& basis, int j, std::span<const cplx> h) {
    const Grid3& g = basis.grid();
    const int n3 = g.n(2);
    if (static_cast<int>(h.size()) != n3) throw std::invalid_argument("tensor_field: profile length");
    const auto psi = basis.mode(j);
    std::vector<cplx> v(g.size());
    for (std::size_t col = 0; col < g.slice_size(); ++col)
        for (int c = 0; c < n3; ++c) v[col * n3 + c] = psi[col] * h[c];
    return Field(g, std::move(v));
}

double rayleigh_quotient(const Field& u) {
    const double l2 = l2_norm_sq(u);
    if (!(l2 > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero field");
    return (kinetic_energy(u) + trap_moment(u)) / l2;
}

// ---------------------------------------------------------------------------

std::vector<double> spectral_second_derivative(int n, double L) {
    const auto k = periodic_wavenumbers(n, L);
    const double h = L / n;
    std::vector<double> D(static_cast<std::size_t>(n) * n);
    // Entry depends only on (i - j); the Nyquist term is real on the nodes.
    std::vector<double> row(n);
    for (int d = 0; d < n; ++d) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s -= k[m] * k[m] * std::cos(k[m] * d * h);
        row[d] = s / n;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) D[i * n + j] = row[((i - j) % n + n) % n];
    return D;
}

TrapHamiltonian::TrapHamiltonian(const Grid3& grid) : grid_(grid) {
    for (int axis = 0; axis < 2; ++axis) {
        const int n = grid.n(axis);
        const auto D = spectral_second_derivative(n, grid.length(axis));
        const auto& x = grid.coords(axis);
        Eigen::MatrixXd T(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) T(i, j) = -D[i * n + j] + (i == j ? x[i] * x[i] : 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        if (es.info() != Eigen::Success) throw std::runtime_error("TrapHamiltonian: eigensolver failed");
        evals_[axis].assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
        evecs_[axis].resize(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) evecs_[axis][i * n + j] = es.eigenvectors()(i, j);
    }
    trap_.resize(grid.slice_size());
    for (int a = 0; a < grid.n(0); ++a)
        for (int b = 0; b < grid.n(1); ++b)
            trap_[a * grid.n(1) + b] = grid.coords(0)[a] * grid.coords(0)[a] + grid.coords(1)[b] * grid.coords(1)[b];
}

double TrapHamiltonian::lowest_eigenvalue() const { return evals_[0][0] + evals_[1][0]; }

void TrapHamiltonian::apply(std::vector<cplx>& data) const {
    std::vector<cplx> lap(data);
    detail::laplacian_inplace(grid_, lap);
    const int n3 = grid_.n(2);
    for (std::size_t col = 0; col < grid_.slice_size(); ++col) {
        const double v = trap_[col];
        for (int c = 0; c < n3; ++c) {
            const std::size_t i = col * n3 + c;
            data[i] = -lap[i] + v * data[i];
        }
    }
}

void TrapHamiltonian::transform_axis(std::vector<cplx>& data, int axis, bool to_modes) const {
    const int n = grid_.n(axis);
    Eigen::Map<const detail::RowMatrix> Q(evecs_[axis].data(), n, n);
    if (to_modes) {
        detail::apply_axis_matrix(grid_, data, axis, Q.transpose());
    } else {
        detail::apply_axis_matrix(grid_, data, axis, Q);
    }
}

void TrapHamiltonian::solve_shifted(std::vector<cplx>& data, double a, double b) const {
    if (data.size() != grid_.size()) throw std::invalid_argument("solve_shifted: size mismatch");
    transform_axis(data, 0, true);
    transform_axis(data, 1, true);
    grid_.fft_x3(data, true);
    const auto& k3 = grid_.wavenumbers(2);
    const int n1 = grid_.n(0), n2 = grid_.n(1), n3 = grid_.n(2);
    const double inv_n3 = 1.0 / n3;
    std::size_t idx = 0;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const double e = evals_[0][i] + evals_[1][j];
            for (int c = 0; c < n3; ++c, ++idx) {
                const double denom = a + b * (e + k3[c] * k3[c]);
                data[idx] *= inv_n3 / denom;
            }
        }
    grid_.fft_x3(data, false);
    transform_axis(data, 1, false);
    transform_axis(data, 0, false);
}

}  // namespace nlstrap
