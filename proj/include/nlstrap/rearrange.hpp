#pragma once

#include <vector>

#include "nlstrap/grid.hpp"

namespace nlstrap {

/// Nonnegative values on an (x1, x2) plane of a grid, x2 fastest.
struct Slice2 {
    int n1 = 0, n2 = 0;
    double h1 = 1.0, h2 = 1.0;
    std::vector<double> values;

    /// Throws std::invalid_argument on size mismatch, negative or non-finite values.
    void validate() const;
};

/// Nonnegative values on an x3 line.
struct Line1 {
    int n = 0;
    double h = 1.0;
    std::vector<double> values;

    void validate() const;
};

Slice2 slice_of(const Field& u, int i3);  ///< |u| on the plane x3 = x3[i3]
Line1 line_of(const Field& u, int i1, int i2);

/**
 * Discrete Schwarz rearrangement of a plane: values sorted in decreasing
 * order fill the cells by increasing distance to the center node (n1/2, n2/2);
 * equal distances are taken in lexicographic index order.
 */
Slice2 schwarz2d(const Slice2& s);

/// Symmetric decreasing rearrangement of a line: decreasing values are placed
/// at the center node n/2, then alternately left and right of it.
Line1 symm_decr_1d(const Line1& l);

/// |u| with every x3-plane replaced by its Schwarz rearrangement.
Field rearrange_planes(const Field& u);
/// |u| with every x3-line replaced by its symmetric decreasing rearrangement.
Field rearrange_lines(const Field& u);

struct TrapMomentCheck {
    double before = 0.0;  ///< integral (x1^2 + x2^2) |u|^2
    double after = 0.0;   ///< same for rearrange_planes(u)
    std::vector<double> slice_before, slice_after;
    bool holds = false;   ///< after <= before on every plane
};
TrapMomentCheck trap_moment_check(const Field& u);

struct NormCheck {
    double l2_before = 0.0, l2_after = 0.0;
    double lq_before = 0.0, lq_after = 0.0;
    bool holds = false;  ///< both preserved to relative 1e-12
};
/// L2 and Lq norms of u against rearrange_planes(u) and rearrange_lines(u).
NormCheck norm_preservation_check(const Field& u, double q = 4.0);

struct KineticCheck {
    bool applicable = false;  ///< false for rough fields (spectral tail >= 1e-6)
    double spectral_tail = 0.0;
    double before = 0.0;      ///< integral |grad u|^2
    double after_planes = 0.0;
    double after_lines = 0.0;
    bool holds = true;        ///< both within (1 + 1e-3) of before when applicable
};
KineticCheck kinetic_check(const Field& u);

struct HardyLittlewood {
    double plain = 0.0;       ///< sum f g h
    double rearranged = 0.0;  ///< sum f* g* h
    bool holds = false;
};
HardyLittlewood hardy_littlewood_check(const Line1& f, const Line1& g);

struct RigidityReport {
    int planes = 0;
    int symmetric = 0;   ///< already rearranged, up to permutations inside distance classes
    int strict = 0;      ///< non-symmetric planes whose trap moment strictly dropped
    int tied = 0;        ///< non-symmetric planes with repeated positive values (noted)
    int tied_equal = 0;  ///< tied planes without a strict drop; not asserted
    int violations = 0;  ///< untied non-symmetric planes without a strict drop
    double min_margin = 0.0;  ///< smallest drop among the strict planes
};
RigidityReport equality_rigidity_probe(const Field& u);

}  // namespace nlstrap
