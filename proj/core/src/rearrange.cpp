#include "wsob/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <stdexcept>

namespace wsob::rearrange {

LatticeField LatticeField::zeros(int n, int m, double extent, int res) {
    if (res % 2 == 0) throw std::invalid_argument("LatticeField: res must be odd");
    if (n < 0 || m < 1 || n + m < 1) throw std::invalid_argument("LatticeField: bad dims");
    LatticeField f;
    f.n = n;
    f.m = m;
    f.extent = extent;
    f.res = res;
    size_t total = 1;
    for (int a = 0; a < n + m; ++a) total *= res;
    f.values.assign(total, 0.0);
    return f;
}

namespace {

// Site ordering of a k-dimensional res^k block: by squared distance to the
// center index, ties lexicographic. Returned as flat offsets in block-local
// row-major order.
std::vector<size_t> ranked_sites(int k, int res) {
    const int c = (res - 1) / 2;
    size_t total = 1;
    for (int a = 0; a < k; ++a) total *= res;
    std::vector<size_t> order(total);
    std::iota(order.begin(), order.end(), size_t{0});
    std::vector<int64_t> dist2(total);
    for (size_t f = 0; f < total; ++f) {
        size_t rest = f;
        int64_t d2 = 0;
        for (int a = k - 1; a >= 0; --a) {
            const int64_t d = static_cast<int64_t>(rest % res) - c;
            d2 += d * d;
            rest /= res;
        }
        dist2[f] = d2;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return dist2[a] < dist2[b]; });
    return order;
}

struct BlockView {
    std::vector<size_t> block_offsets;  // flat offsets covering the block sub-lattice
    std::vector<size_t> slice_bases;    // flat base index per complementary slice
};

BlockView block_view(const LatticeField& f, Block block) {
    const int d = f.dims_total();
    const int b0 = block == Block::X ? 0 : f.n;
    const int b1 = block == Block::X ? f.n : d;
    BlockView bv;

    size_t nblock = 1, nslice = 1;
    for (int a = b0; a < b1; ++a) nblock *= f.res;
    for (int a = 0; a < d; ++a)
        if (a < b0 || a >= b1) nslice *= f.res;

    bv.block_offsets.resize(nblock);
    {
        std::vector<int> idx(d, 0);
        for (size_t k = 0; k < nblock; ++k) {
            size_t rest = k, off = 0;
            for (int a = b1 - 1; a >= b0; --a) {
                off += (rest % f.res) * f.stride(a);
                rest /= f.res;
            }
            bv.block_offsets[k] = off;
        }
    }
    bv.slice_bases.resize(nslice);
    {
        std::vector<int> comp_axes;
        for (int a = 0; a < d; ++a)
            if (a < b0 || a >= b1) comp_axes.push_back(a);
        for (size_t k = 0; k < nslice; ++k) {
            size_t rest = k, base = 0;
            for (int i = static_cast<int>(comp_axes.size()) - 1; i >= 0; --i) {
                base += (rest % f.res) * f.stride(comp_axes[i]);
                rest /= f.res;
            }
            bv.slice_bases[k] = base;
        }
    }
    return bv;
}

}  // namespace

LatticeField schwarz_block(const LatticeField& f, Block block) {
    const int kdim = block == Block::X ? f.n : f.m;
    if (kdim == 0) return f;
    BlockView bv = block_view(f, block);
    std::vector<size_t> rank = ranked_sites(kdim, f.res);

    LatticeField out = f;
    std::vector<double> slice(bv.block_offsets.size());
    for (size_t base : bv.slice_bases) {
        for (size_t k = 0; k < slice.size(); ++k)
            slice[k] = std::fabs(f.values[base + bv.block_offsets[k]]);
        std::sort(slice.begin(), slice.end(), std::greater<double>());
        for (size_t k = 0; k < slice.size(); ++k)
            out.values[base + bv.block_offsets[rank[k]]] = slice[k];
    }
    return out;
}

MomentPair weighted_moment_check(const LatticeField& f, double tau) {
    for (double v : f.values)
        if (v < 0.0) throw std::domain_error("weighted_moment_check: f must be nonnegative");
    LatticeField g = schwarz_block(f, Block::Z);
    const int d = f.dims_total();
    const double cell = std::pow(f.spacing(), d);
    std::vector<int> idx(d);
    double before = 0.0, after = 0.0;
    for (size_t k = 0; k < f.values.size(); ++k) {
        f.unflatten(k, idx);
        double z2 = 0.0;
        for (int a = f.n; a < d; ++a) {
            const double c = f.coord(idx[a]);
            z2 += c * c;
        }
        const double w = std::pow(z2, tau);
        before += w * f.values[k];
        after += w * g.values[k];
    }
    return {before * cell, after * cell};
}

namespace {

using cd = std::complex<double>;

// Centered DFT along one axis: out_k = sum_j in_j exp(-2 pi i (j-c)(k-c)/N).
// The centered phase keeps real-even slices exactly real-even.
void centered_dft_axis(std::vector<cd>& data, const LatticeField& shape, int axis,
                       bool inverse) {
    const int N = shape.res;
    const int c = shape.center();
    const double sgn = inverse ? 1.0 : -1.0;
    std::vector<cd> table(static_cast<size_t>(N) * N);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
            const double ph = sgn * 2.0 * M_PI * (j - c) * (k - c) / N;
            table[static_cast<size_t>(j) * N + k] = {std::cos(ph), std::sin(ph)};
        }
    const double norm = inverse ? 1.0 / N : 1.0;

    const size_t stride = shape.stride(axis);
    const size_t total = data.size();
    std::vector<cd> line(N), tr(N);
    // iterate over all lines along `axis`
    for (size_t start = 0; start < total; ++start) {
        const size_t along = (start / stride) % N;
        if (along != 0) continue;
        for (int j = 0; j < N; ++j) line[j] = data[start + j * stride];
        for (int k = 0; k < N; ++k) {
            cd acc = 0.0;
            for (int j = 0; j < N; ++j) acc += line[j] * table[static_cast<size_t>(j) * N + k];
            tr[k] = acc * norm;
        }
        for (int k = 0; k < N; ++k) data[start + k * stride] = tr[k];
    }
}

}  // namespace

RearrangeResult fourier_rearrange(const LatticeField& u, const GrushinParams& gp) {
    const double Q = gp.homogeneous_dim();
    const double s = 2.0 * Q / (Q - 2.0);
    const bool integer_s = std::fabs(s - std::round(s)) < 1e-9;

    LatticeField ux = schwarz_block(u, Block::X);

    std::vector<cd> data(ux.values.begin(), ux.values.end());
    for (int ax = 0; ax < u.n; ++ax) centered_dft_axis(data, u, ax, false);

    // modulus field, z-rearranged; phase of the transform is discarded
    LatticeField mod = u;
    for (size_t k = 0; k < data.size(); ++k) mod.values[k] = std::abs(data[k]);
    LatticeField modz = schwarz_block(mod, Block::Z);

    std::vector<cd> back(modz.values.begin(), modz.values.end());
    for (int ax = 0; ax < u.n; ++ax) centered_dft_axis(back, u, ax, true);

    RearrangeResult res;
    res.w = u;
    double max_im = 0.0, max_re = 0.0;
    for (size_t k = 0; k < back.size(); ++k) {
        res.w.values[k] = back[k].real();
        max_im = std::max(max_im, std::fabs(back[k].imag()));
        max_re = std::max(max_re, std::fabs(back[k].real()));
    }
    res.imag_residue = max_re > 0.0 ? max_im / max_re : 0.0;
    res.hypothesis_ok = integer_s;
    return res;
}

PowerPair convolution_positivity_check(const LatticeField& u, int s,
                                       const GrushinParams& gp) {
    if (s < 2) throw std::domain_error("convolution_positivity_check: s must be >= 2");
    LatticeField ux = schwarz_block(u, Block::X);
    RearrangeResult rr = fourier_rearrange(u, gp);
    const double cell = std::pow(u.spacing(), u.dims_total());
    double lhs = 0.0, rhs = 0.0;
    for (size_t k = 0; k < u.values.size(); ++k) {
        lhs += std::pow(std::fabs(ux.values[k]), s);
        rhs += std::pow(std::fabs(rr.w.values[k]), s);
    }
    return {lhs * cell, rhs * cell};
}

LatticeField random_smooth_bump(int n, int m, double extent, int res, uint64_t seed,
                                int n_bumps, bool signed_amplitudes) {
    LatticeField f = LatticeField::zeros(n, m, extent, res);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center(-0.3 * extent, 0.3 * extent);
    std::uniform_real_distribution<double> width(0.08 * extent, 0.25 * extent);
    std::uniform_real_distribution<double> amp(0.3, 1.0);
    std::bernoulli_distribution flip(0.5);

    const int d = n + m;
    std::vector<std::vector<double>> centers(n_bumps, std::vector<double>(d));
    std::vector<double> widths(n_bumps), amps(n_bumps);
    for (int b = 0; b < n_bumps; ++b) {
        for (int a = 0; a < d; ++a) centers[b][a] = center(rng);
        widths[b] = width(rng);
        amps[b] = amp(rng) * (signed_amplitudes && flip(rng) ? -1.0 : 1.0);
    }
    std::vector<int> idx(d);
    for (size_t k = 0; k < f.values.size(); ++k) {
        f.unflatten(k, idx);
        double v = 0.0;
        for (int b = 0; b < n_bumps; ++b) {
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) {
                const double dx = f.coord(idx[a]) - centers[b][a];
                r2 += dx * dx;
            }
            v += amps[b] * std::exp(-r2 / (2.0 * widths[b] * widths[b]));
        }
        f.values[k] = v;
    }
    return f;
}

}  // namespace wsob::rearrange
