#include "nlstrap/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "nlstrap/energy.hpp"

namespace nlstrap {

namespace {

void check_values(const std::vector<double>& v, std::size_t expected, const char* what) {
    if (v.size() != expected) throw std::invalid_argument(std::string(what) + ": size mismatch");
    for (double x : v)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw std::invalid_argument(std::string(what) + ": values must be finite and nonnegative");
}

// Squared distance of each plane cell to the center node. With equal
// spacings the key is exact (integer offsets), so ties really tie.
std::vector<double> plane_distance(int n1, int n2, double h1, double h2) {
    std::vector<double> d(static_cast<std::size_t>(n1) * n2);
    const int c1 = n1 / 2, c2 = n2 / 2;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const long di = i - c1, dj = j - c2;
            d[i * n2 + j] = (h1 == h2) ? static_cast<double>(di * di + dj * dj) * h1 * h1
                                       : (di * h1) * (di * h1) + (dj * h2) * (dj * h2);
        }
    return d;
}

std::vector<std::size_t> plane_fill_order(const std::vector<double>& dist) {
    std::vector<std::size_t> order(dist.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return dist[a] < dist[b]; });
    return order;
}

std::vector<std::size_t> line_fill_order(int n) {
    std::vector<std::size_t> order;
    order.reserve(n);
    const int c = n / 2;
    order.push_back(c);
    for (int t = 1; static_cast<int>(order.size()) < n; ++t) {
        if (c - t >= 0) order.push_back(c - t);
        if (c + t < n && static_cast<int>(order.size()) < n) order.push_back(c + t);
    }
    return order;
}

std::vector<double> fill(const std::vector<double>& values, const std::vector<std::size_t>& order) {
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<double> out(values.size());
    for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = sorted[k];
    return out;
}

double plane_moment(const std::vector<double>& v, const Grid3& g) {
    const auto& x1 = g.coords(0);
    const auto& x2 = g.coords(1);
    double s = 0.0;
    for (int a = 0; a < g.n(0); ++a)
        for (int b = 0; b < g.n(1); ++b) s += (x1[a] * x1[a] + x2[b] * x2[b]) * v[a * g.n(1) + b] * v[a * g.n(1) + b];
    return s * g.cell_volume();
}

}  // namespace

void Slice2::validate() const {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("Slice2: empty");
    check_values(values, static_cast<std::size_t>(n1) * n2, "Slice2");
}

void Line1::validate() const {
    if (n < 1) throw std::invalid_argument("Line1: empty");
    check_values(values, static_cast<std::size_t>(n), "Line1");
}

Slice2 slice_of(const Field& u, int i3) {
    const Grid3& g = u.grid();
    Slice2 s{g.n(0), g.n(1), g.spacing(0), g.spacing(1), std::vector<double>(g.slice_size())};
    for (std::size_t col = 0; col < g.slice_size(); ++col) s.values[col] = std::abs(u[col * g.n(2) + i3]);
    return s;
}

Line1 line_of(const Field& u, int i1, int i2) {
    const Grid3& g = u.grid();
    Line1 l{g.n(2), g.spacing(2), std::vector<double>(g.n(2))};
    for (int c = 0; c < g.n(2); ++c) l.values[c] = std::abs(u(i1, i2, c));
    return l;
}

Slice2 schwarz2d(const Slice2& s) {
    s.validate();
    Slice2 out = s;
    out.values = fill(s.values, plane_fill_order(plane_distance(s.n1, s.n2, s.h1, s.h2)));
    return out;
}

Line1 symm_decr_1d(const Line1& l) {
    l.validate();
    Line1 out = l;
    out.values = fill(l.values, line_fill_order(l.n));
    return out;
}

Field rearrange_planes(const Field& u) {
    const Grid3& g = u.grid();
    const int n3 = g.n(2);
    const auto order = plane_fill_order(plane_distance(g.n(0), g.n(1), g.spacing(0), g.spacing(1)));
    std::vector<cplx> out(u.size());
    std::vector<double> plane(g.slice_size());
    for (int c = 0; c < n3; ++c) {
        for (std::size_t col = 0; col < g.slice_size(); ++col) plane[col] = std::abs(u[col * n3 + c]);
        const auto r = fill(plane, order);
        for (std::size_t col = 0; col < g.slice_size(); ++col) out[col * n3 + c] = r[col];
    }
    return Field(g, std::move(out));
}

Field rearrange_lines(const Field& u) {
    const Grid3& g = u.grid();
    const int n3 = g.n(2);
    const auto order = line_fill_order(n3);
    std::vector<cplx> out(u.size());
    std::vector<double> line(n3);
    for (std::size_t col = 0; col < g.slice_size(); ++col) {
        for (int c = 0; c < n3; ++c) line[c] = std::abs(u[col * n3 + c]);
        const auto r = fill(line, order);
        for (int c = 0; c < n3; ++c) out[col * n3 + c] = r[c];
    }
    return Field(g, std::move(out));
}

TrapMomentCheck trap_moment_check(const Field& u) {
    const Grid3& g = u.grid();
    const int n3 = g.n(2);
    const auto order = plane_fill_order(plane_distance(g.n(0), g.n(1), g.spacing(0), g.spacing(1)));
    TrapMomentCheck out;
    out.holds = true;
    std::vector<double> plane(g.slice_size());
    for (int c = 0; c < n3; ++c) {
        for (std::size_t col = 0; col < g.slice_size(); ++col) plane[col] = std::abs(u[col * n3 + c]);
        const double b = plane_moment(plane, g);
        const double a = plane_moment(fill(plane, order), g);
        out.slice_before.push_back(b);
        out.slice_after.push_back(a);
        out.before += b;
        out.after += a;
        if (a > b * (1.0 + 1e-12)) out.holds = false;
    }
    return out;
}

NormCheck norm_preservation_check(const Field& u, double q) {
    NormCheck out;
    out.l2_before = l2_norm_sq(u);
    out.lq_before = lq_integral(u, q);
    const Field planes = rearrange_planes(u);
    const Field lines = rearrange_lines(u);
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), 1e-300); };
    out.l2_after = l2_norm_sq(planes);
    out.lq_after = lq_integral(planes, q);
    out.holds = close(out.l2_before, out.l2_after) && close(out.lq_before, out.lq_after) &&
                close(out.l2_before, l2_norm_sq(lines)) && close(out.lq_before, lq_integral(lines, q));
    return out;
}

KineticCheck kinetic_check(const Field& u) {
    KineticCheck out;
    out.spectral_tail = spectral_tail(u);
    out.applicable = out.spectral_tail < 1e-6;
    out.before = kinetic_energy(u);
    out.after_planes = kinetic_energy(rearrange_planes(u));
    out.after_lines = kinetic_energy(rearrange_lines(u));
    if (out.applicable) {
        const double lim = out.before * (1.0 + 1e-3);
        out.holds = out.after_planes <= lim && out.after_lines <= lim;
    }
    return out;
}

HardyLittlewood hardy_littlewood_check(const Line1& f, const Line1& g) {
    f.validate();
    g.validate();
    if (f.n != g.n) throw std::invalid_argument("hardy_littlewood_check: length mismatch");
    const Line1 fs = symm_decr_1d(f);
    const Line1 gs = symm_decr_1d(g);
    HardyLittlewood out;
    for (int i = 0; i < f.n; ++i) {
        out.plain += f.values[i] * g.values[i];
        out.rearranged += fs.values[i] * gs.values[i];
    }
    out.plain *= f.h;
    out.rearranged *= f.h;
    out.holds = out.rearranged >= out.plain * (1.0 - 1e-14);
    return out;
}

RigidityReport equality_rigidity_probe(const Field& u) {
    const Grid3& g = u.grid();
    const int n3 = g.n(2);
    const auto dist = plane_distance(g.n(0), g.n(1), g.spacing(0), g.spacing(1));
    const auto order = plane_fill_order(dist);
    // Distance classes in fill order.
    std::vector<std::size_t> class_start{0};
    for (std::size_t k = 1; k < order.size(); ++k)
        if (dist[order[k]] != dist[order[k - 1]]) class_start.push_back(k);
    class_start.push_back(order.size());

    RigidityReport rep;
    bool first_strict = true;
    std::vector<double> plane(g.slice_size());
    for (int c = 0; c < n3; ++c) {
        ++rep.planes;
        for (std::size_t col = 0; col < g.slice_size(); ++col) plane[col] = std::abs(u[col * n3 + c]);
        const auto star = fill(plane, order);

        bool equivalent = true;
        for (std::size_t k = 0; k + 1 < class_start.size() && equivalent; ++k) {
            std::vector<double> a, b;
            for (std::size_t m = class_start[k]; m < class_start[k + 1]; ++m) {
                a.push_back(plane[order[m]]);
                b.push_back(star[order[m]]);
            }
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            equivalent = a == b;
        }
        if (equivalent) {
            ++rep.symmetric;
            continue;
        }
        std::vector<double> positive;
        for (double v : plane)
            if (v > 0.0) positive.push_back(v);
        std::sort(positive.begin(), positive.end());
        const bool tied = std::adjacent_find(positive.begin(), positive.end()) != positive.end();
        if (tied) ++rep.tied;
        const double margin = plane_moment(plane, g) - plane_moment(star, g);
        if (margin > 0.0) {
            ++rep.strict;
            rep.min_margin = first_strict ? margin : std::min(rep.min_margin, margin);
            first_strict = false;
        } else if (tied) {
            ++rep.tied_equal;
        } else {
            ++rep.violations;
        }
    }
    return rep;
}

}  // namespace nlstrap
