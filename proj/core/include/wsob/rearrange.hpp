#pragma once

#include <cstdint>
#include <vector>

#include "wsob/params.hpp"

namespace wsob::rearrange {

/// Real-valued function sampled on a regular lattice over [-L, L]^{n+m},
/// odd point count per axis so the exact center exists. Axis order: the n
/// x-axes first, then the m z-axes; values are row-major with axis 0 slowest.
struct LatticeField {
    int n = 1;
    int m = 1;
    double extent = 1.0;  // half-width L per axis
    int res = 65;         // points per axis, odd
    std::vector<double> values;

    int dims_total() const { return n + m; }
    double spacing() const { return 2.0 * extent / (res - 1); }
    double coord(int i) const { return -extent + i * spacing(); }
    int center() const { return (res - 1) / 2; }

    size_t stride(int axis) const {
        size_t s = 1;
        for (int a = dims_total() - 1; a > axis; --a) s *= res;
        return s;
    }
    void unflatten(size_t flat, std::vector<int>& idx) const {
        for (int a = dims_total() - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(flat % res);
            flat /= res;
        }
    }

    static LatticeField zeros(int n, int m, double extent, int res);
};

enum class Block { X, Z };

/// Symmetric decreasing rearrangement of |values| within each block slice:
/// per slice, sorted values land on sites ranked by distance to the slice
/// center (ties broken lexicographically). Equimeasurable by construction.
LatticeField schwarz_block(const LatticeField& f, Block block);

/// (before, after) values of integral |z|^{2 tau} f over the lattice, where
/// "after" applies the z-block rearrangement. Requires f >= 0.
struct MomentPair {
    double before;
    double after;
};
MomentPair weighted_moment_check(const LatticeField& f, double tau);

struct RearrangeResult {
    LatticeField w;
    double imag_residue;   // max |Im| relative to max |w|
    bool hypothesis_ok;    // 2Q/(Q-2) integral within 1e-9
};

/// x-rearrangement, Fourier transform along the x-axes, z-rearrangement of
/// the modulus, inverse transform. Output is real up to rounding; the
/// imaginary residue is reported and dropped.
RearrangeResult fourier_rearrange(const LatticeField& u, const GrushinParams& gp);

/// s-th power integrals of |u*_x| (lhs) and |w| (rhs); the rearrangement
/// inequality chain gives lhs <= rhs up to discretization. s integer >= 2.
struct PowerPair {
    double lhs;
    double rhs;
};
PowerPair convolution_positivity_check(const LatticeField& u, int s,
                                       const GrushinParams& gp);

/// Sum of a few seeded random Gaussians; smooth, effectively compactly
/// supported within the box. Used by tests and the CLI demo.
LatticeField random_smooth_bump(int n, int m, double extent, int res, uint64_t seed,
                                int n_bumps = 4, bool signed_amplitudes = true);

}  // namespace wsob::rearrange
