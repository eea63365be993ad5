#pragma once

#include <cstdint>
#include <random>

#include "nlstrap/grid.hpp"

namespace nlstrap {

/**
 * Random smooth test field: one to three anisotropic Gaussian bumps with
 * random complex amplitudes, widths in [min_width, max_width] and centers
 * kept well inside the box, times a slowly varying random phase.
 */
struct SmoothFieldOptions {
    double min_width = 0.8;
    double max_width = 2.0;
    int max_bumps = 3;
    double center_fraction = 0.15;  ///< centers within +-fraction*L of the origin
};

Field random_smooth_field(const Grid3& grid, std::mt19937_64& rng, const SmoothFieldOptions& opt = {});

/// Independent complex normal samples at every node (rough on purpose).
Field white_noise_field(const Grid3& grid, std::mt19937_64& rng);

}  // namespace nlstrap
