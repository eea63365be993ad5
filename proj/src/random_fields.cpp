#include "nlstrap/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace nlstrap {

namespace {

struct Bump {
    double c[3];
    double inv_w2[3];
    cplx amp;
};

}  // namespace

Field random_smooth_field(const Grid3& grid, std::mt19937_64& rng, const SmoothFieldOptions& opt) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> nb(1, opt.max_bumps);
    const int count = nb(rng);
    std::vector<Bump> bumps(count);
    for (auto& b : bumps) {
        for (int a = 0; a < 3; ++a) {
            const double span = opt.center_fraction * grid.length(a);
            b.c[a] = (2.0 * unit(rng) - 1.0) * span;
            const double w = opt.min_width + (opt.max_width - opt.min_width) * unit(rng);
            b.inv_w2[a] = 1.0 / (w * w);
        }
        const double mag = 0.2 + unit(rng);
        const double arg = 2.0 * std::numbers::pi * unit(rng);
        b.amp = std::polar(mag, arg);
    }
    // Slow phase: wavevector well below the resolution limit.
    double q[3];
    for (double& qa : q) qa = 0.5 * (2.0 * unit(rng) - 1.0);

    return Field::sample(grid, [&](double x1, double x2, double x3) {
        const double x[3] = {x1, x2, x3};
        cplx s = 0.0;
        for (const auto& b : bumps) {
            double e = 0.0;
            for (int a = 0; a < 3; ++a) {
                const double d = x[a] - b.c[a];
                e += 0.5 * d * d * b.inv_w2[a];
            }
            s += b.amp * std::exp(-e);
        }
        return s * std::polar(1.0, q[0] * x1 + q[1] * x2 + q[2] * x3);
    });
}

Field white_noise_field(const Grid3& grid, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cplx> v(grid.size());
    for (auto& z : v) {
        const double re = normal(rng);
        const double im = normal(rng);
        z = {re, im};
    }
    return Field(grid, std::move(v));
}

}  // namespace nlstrap
