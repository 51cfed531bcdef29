#pragma once

// Matrices over Z_{p^r} viewed as homomorphisms Z_{p^r}^n -> Z_{p^r}^k.
// A group code is the kernel of such a map; nesting two codes means stacking
// the rows of the finer map under the coarser one.  Kernels are enumerated
// through a Smith-style diagonalization: over the local ring Z_{p^r} every
// matrix is equivalent to diag(p^{v_1}, ..., p^{v_s}, 0, ...) with unit row
// and column operations, and the tracked column transform turns the diagonal
// kernel description back into coordinates of the original map.

#include <cstdint>
#include <vector>

#include "group.hpp"

namespace grouprd {

// k x n matrix over Z_{p^r}, row major.
struct HomMatrix {
    std::int64_t p = 2;
    int r = 1;
    int k = 0;  // rows (output dimension)
    int n = 0;  // cols (input dimension)
    std::vector<std::int64_t> a;  // k*n entries in [0, p^r)

    std::int64_t modulus() const { return PrimaryCyclic{p, r}.modulus(); }
    std::int64_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    std::int64_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    static HomMatrix zero(std::int64_t p, int r, int k, int n) {
        HomMatrix m{p, r, k, n, {}};
        m.a.assign(static_cast<std::size_t>(k) * n, 0);
        return m;
    }

    // y = A x over Z_{p^r}.
    std::vector<std::int64_t> apply(const std::vector<std::int64_t>& x) const {
        const std::int64_t m = modulus();
        std::vector<std::int64_t> y(static_cast<std::size_t>(k), 0);
        for (int i = 0; i < k; ++i) {
            std::int64_t s = 0;
            for (int j = 0; j < n; ++j) s = (s + at(i, j) * x[static_cast<std::size_t>(j)]) % m;
            y[static_cast<std::size_t>(i)] = s;
        }
        return y;
    }

    // Rows of `other` appended below this matrix; kernels nest accordingly.
    HomMatrix stacked(const HomMatrix& other) const {
        if (other.p != p || other.r != r || other.n != n)
            throw input_error("HomMatrix::stacked: incompatible shapes");
        HomMatrix out{p, r, k + other.k, n, a};
        out.a.insert(out.a.end(), other.a.begin(), other.a.end());
        return out;
    }
};

// Result of diagonalizing A over Z_{p^r}: U A T = D with U, T invertible and
// D zero except D[t][t] = p^{vals[t]} for t < vals.size().  Only T is kept;
// the kernel of A is { T y : y_t in p^{r - vals[t]} Z for pivot slots, y free
// elsewhere }.
struct SmithForm {
    std::int64_t p = 2;
    int r = 1;
    int n = 0;
    std::vector<int> vals;                 // pivot valuations, each in [0, r)
    std::vector<std::int64_t> t;           // n x n column transform, row major
    std::int64_t t_at(int i, int j) const { return t[static_cast<std::size_t>(i) * n + j]; }

    // |ker A| = p^{sum vals} * (p^r)^{n - #pivots}.
    std::int64_t kernel_size() const {
        std::int64_t sz = 1;
        for (int v : vals)
            for (int i = 0; i < v; ++i) sz *= p;
        const std::int64_t m = PrimaryCyclic{p, r}.modulus();
        for (std::size_t i = vals.size(); i < static_cast<std::size_t>(n); ++i) sz *= m;
        return sz;
    }
};

inline SmithForm smith_form(const HomMatrix& in) {
    const std::int64_t m = in.modulus();
    HomMatrix w = in;
    SmithForm sf{in.p, in.r, in.n, {}, {}};
    sf.t.assign(static_cast<std::size_t>(in.n) * in.n, 0);
    for (int i = 0; i < in.n; ++i) sf.t[static_cast<std::size_t>(i) * in.n + i] = 1;

    auto t_at = [&](int i, int j) -> std::int64_t& {
        return sf.t[static_cast<std::size_t>(i) * in.n + j];
    };

    int step = 0;
    while (step < w.k && step < w.n) {
        // Minimal-valuation pivot in the remaining block.
        int best_i = -1, best_j = -1, best_v = in.r;
        for (int i = step; i < w.k; ++i)
            for (int j = step; j < w.n; ++j) {
                if (w.at(i, j) == 0) continue;
                int v = valuation(in.p, in.r, w.at(i, j));
                if (v < best_v) {
                    best_v = v;
                    best_i = i;
                    best_j = j;
                }
            }
        if (best_i < 0) break;  // remaining block is zero

        // Move pivot to (step, step).
        if (best_i != step)
            for (int j = 0; j < w.n; ++j) std::swap(w.at(step, j), w.at(best_i, j));
        if (best_j != step)
            for (int i = 0; i < w.k; ++i) std::swap(w.at(i, step), w.at(i, best_j));
        if (best_j != step)
            for (int i = 0; i < w.n; ++i) std::swap(t_at(i, step), t_at(i, best_j));

        // Normalize pivot to p^v by stripping its unit part (column scaling).
        std::int64_t piv = w.at(step, step);
        std::int64_t pv = 1;
        for (int i = 0; i < best_v; ++i) pv *= in.p;
        const std::int64_t unit = piv / pv;  // unit mod p^{r - v}, lift to unit mod p^r
        const std::int64_t unit_inv = inverse_mod(unit % m, m);
        for (int i = 0; i < w.k; ++i) w.at(i, step) = w.at(i, step) * unit_inv % m;
        for (int i = 0; i < w.n; ++i) t_at(i, step) = t_at(i, step) * unit_inv % m;

        // Clear the pivot row and column; the pivot divides every remaining
        // entry, so single elimination passes suffice.
        for (int j = step + 1; j < w.n; ++j) {
            if (w.at(step, j) == 0) continue;
            const std::int64_t q = w.at(step, j) / pv;
            for (int i = 0; i < w.k; ++i)
                w.at(i, j) = ((w.at(i, j) - q * w.at(i, step)) % m + m) % m;
            for (int i = 0; i < w.n; ++i)
                t_at(i, j) = ((t_at(i, j) - q * t_at(i, step)) % m + m) % m;
        }
        for (int i = step + 1; i < w.k; ++i) {
            if (w.at(i, step) == 0) continue;
            const std::int64_t q = w.at(i, step) / pv;
            for (int j = 0; j < w.n; ++j)
                w.at(i, j) = ((w.at(i, j) - q * w.at(step, j)) % m + m) % m;
        }
        sf.vals.push_back(best_v);
        ++step;
    }
    return sf;
}

// Every x with A x == 0, enumerated through the Smith form.  Guarded: throws
// resource_error when the kernel has more than 2^22 elements.
inline std::vector<std::vector<std::int64_t>> kernel_enumerate(const HomMatrix& a) {
    const SmithForm sf = smith_form(a);
    const std::int64_t guard = std::int64_t{1} << 22;
    if (sf.kernel_size() > guard)
        throw resource_error("kernel_enumerate: kernel larger than 2^22 guard");
    const std::int64_t m = a.modulus();

    // Per slot t, the values y_t may take: multiples of p^{r - v_t} for pivot
    // slots, all of Z_{p^r} beyond the pivots.
    std::vector<std::vector<std::int64_t>> slot_vals(static_cast<std::size_t>(a.n));
    for (int t = 0; t < a.n; ++t) {
        std::int64_t stepv = 1;
        if (t < static_cast<int>(sf.vals.size())) {
            for (int i = 0; i < a.r - sf.vals[static_cast<std::size_t>(t)]; ++i) stepv *= a.p;
        }
        for (std::int64_t v = 0; v < m; v += stepv) slot_vals[static_cast<std::size_t>(t)].push_back(v);
    }

    std::vector<std::vector<std::int64_t>> out;
    out.reserve(static_cast<std::size_t>(sf.kernel_size()));
    std::vector<std::size_t> idx(static_cast<std::size_t>(a.n), 0);
    while (true) {
        std::vector<std::int64_t> x(static_cast<std::size_t>(a.n), 0);
        for (int i = 0; i < a.n; ++i) {
            std::int64_t s = 0;
            for (int t = 0; t < a.n; ++t)
                s = (s + sf.t_at(i, t) * slot_vals[static_cast<std::size_t>(t)][idx[static_cast<std::size_t>(t)]]) % m;
            x[static_cast<std::size_t>(i)] = s;
        }
        out.push_back(std::move(x));
        int t = a.n;
        while (t > 0) {
            --t;
            if (++idx[static_cast<std::size_t>(t)] < slot_vals[static_cast<std::size_t>(t)].size()) break;
            idx[static_cast<std::size_t>(t)] = 0;
            if (t == 0) t = -1;
        }
        if (a.n == 0 || t < 0) break;
    }
    return out;
}

}  // namespace grouprd
