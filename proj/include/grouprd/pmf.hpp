#pragma once

// Joint probability mass functions over products of finite alphabets, stored
// flat with the last coordinate varying fastest (same convention as the group
// element rank).  Derived random variables are added by appending a
// deterministic function of the existing coordinates, which is how digit
// views, sums in a group, and reconstruction labels are built.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "group.hpp"

namespace grouprd {

inline constexpr double kProbTol = 1e-9;

class JointPMF {
public:
    JointPMF() = default;

    // Validates: sizes positive, masses nonnegative, total within kProbTol of
    // one.  The stored masses are renormalized to sum exactly to one.
    static JointPMF from_flat(std::vector<int> sizes, std::vector<double> probs) {
        std::size_t total = 1;
        for (int s : sizes) {
            if (s < 1) throw input_error("JointPMF: alphabet sizes must be positive");
            total *= static_cast<std::size_t>(s);
        }
        if (probs.size() != total) throw input_error("JointPMF: mass count does not match alphabet");
        double sum = 0;
        for (double v : probs) {
            if (!(v >= 0)) throw input_error("JointPMF: negative or NaN mass");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kProbTol) throw input_error("JointPMF: masses do not sum to one");
        for (double& v : probs) v /= sum;
        JointPMF pmf;
        pmf.sizes_ = std::move(sizes);
        pmf.p_ = std::move(probs);
        pmf.init_strides();
        return pmf;
    }

    // Joint law of independent coordinates drawn from the given marginals.
    static JointPMF independent(const std::vector<std::vector<double>>& marginals) {
        std::vector<int> sizes;
        std::size_t total = 1;
        for (const auto& m : marginals) {
            sizes.push_back(static_cast<int>(m.size()));
            total *= m.size();
        }
        std::vector<double> probs(total, 1.0);
        std::size_t stride = total;
        for (std::size_t c = 0; c < marginals.size(); ++c) {
            stride /= marginals[c].size();
            for (std::size_t i = 0; i < total; ++i)
                probs[i] *= marginals[c][(i / stride) % marginals[c].size()];
        }
        return from_flat(std::move(sizes), std::move(probs));
    }

    int num_vars() const { return static_cast<int>(sizes_.size()); }
    int size(int coord) const { return sizes_[static_cast<std::size_t>(coord)]; }
    const std::vector<int>& sizes() const { return sizes_; }
    std::size_t cells() const { return p_.size(); }
    const std::vector<double>& flat() const { return p_; }

    double at(const std::vector<int>& idx) const { return p_[offset(idx)]; }

    std::vector<int> unrank(std::size_t cell) const {
        std::vector<int> idx(sizes_.size());
        for (std::size_t c = 0; c < sizes_.size(); ++c) {
            idx[c] = static_cast<int>(cell / strides_[c]);
            cell %= strides_[c];
        }
        return idx;
    }

    // Marginal over the kept coordinates, in the order given.
    JointPMF marginal(const std::vector<int>& keep) const {
        std::vector<int> out_sizes;
        for (int c : keep) out_sizes.push_back(sizes_[static_cast<std::size_t>(c)]);
        std::size_t out_total = 1;
        for (int s : out_sizes) out_total *= static_cast<std::size_t>(s);
        std::vector<double> out(out_total, 0.0);
        for (std::size_t cell = 0; cell < p_.size(); ++cell) {
            if (p_[cell] == 0) continue;
            std::size_t o = 0;
            for (int c : keep)
                o = o * static_cast<std::size_t>(sizes_[static_cast<std::size_t>(c)]) +
                    static_cast<std::size_t>(coord_of(cell, c));
            out[o] += p_[cell];
        }
        JointPMF pmf;
        pmf.sizes_ = std::move(out_sizes);
        pmf.p_ = std::move(out);
        pmf.init_strides();
        return pmf;
    }

    // New joint with one extra coordinate equal to f(existing indices).
    JointPMF append_function(int new_size, const std::function<int(const std::vector<int>&)>& f) const {
        if (new_size < 1) throw input_error("append_function: new alphabet must be positive");
        std::vector<int> out_sizes = sizes_;
        out_sizes.push_back(new_size);
        std::vector<double> out(p_.size() * static_cast<std::size_t>(new_size), 0.0);
        for (std::size_t cell = 0; cell < p_.size(); ++cell) {
            if (p_[cell] == 0) continue;
            const int v = f(unrank(cell));
            if (v < 0 || v >= new_size) throw input_error("append_function: value out of range");
            out[cell * static_cast<std::size_t>(new_size) + static_cast<std::size_t>(v)] += p_[cell];
        }
        JointPMF pmf;
        pmf.sizes_ = std::move(out_sizes);
        pmf.p_ = std::move(out);
        pmf.init_strides();
        return pmf;
    }

    int coord_of(std::size_t cell, int coord) const {
        return static_cast<int>(cell / strides_[static_cast<std::size_t>(coord)] %
                                static_cast<std::size_t>(sizes_[static_cast<std::size_t>(coord)]));
    }

private:
    void init_strides() {
        strides_.assign(sizes_.size(), 1);
        for (int c = static_cast<int>(sizes_.size()) - 2; c >= 0; --c)
            strides_[static_cast<std::size_t>(c)] =
                strides_[static_cast<std::size_t>(c) + 1] *
                static_cast<std::size_t>(sizes_[static_cast<std::size_t>(c) + 1]);
    }

    std::size_t offset(const std::vector<int>& idx) const {
        std::size_t o = 0;
        for (std::size_t c = 0; c < sizes_.size(); ++c)
            o += static_cast<std::size_t>(idx[c]) * strides_[c];
        return o;
    }

    std::vector<int> sizes_;
    std::vector<std::size_t> strides_;
    std::vector<double> p_;
};

// A variable on Z_{p^r} is non-redundant when it has positive mass outside
// p Z_{p^r}; otherwise every sample is divisible by p and the variable really
// lives on a smaller group.
inline bool is_nonredundant(const std::vector<double>& pmf, std::int64_t p, int r) {
    const std::int64_t m = PrimaryCyclic{p, r}.modulus();
    if (pmf.size() != static_cast<std::size_t>(m)) throw input_error("is_nonredundant: size mismatch");
    for (std::int64_t z = 0; z < m; ++z)
        if (z % p != 0 && pmf[static_cast<std::size_t>(z)] > 0) return true;
    return false;
}

// Minimum p-adic valuation over the support; r means the variable is the
// constant zero.
inline int support_min_valuation(const std::vector<double>& pmf, std::int64_t p, int r) {
    int i0 = r;
    for (std::size_t z = 0; z < pmf.size(); ++z)
        if (pmf[z] > 0) i0 = std::min(i0, valuation(p, r, static_cast<std::int64_t>(z)));
    return i0;
}

// Row-stochastic table P(to | from).  Each conditioning row either sums to one
// within kProbTol (and is renormalized exactly) or is identically zero, which
// marks that conditioning symbol as unused.
class ConditionalPMF {
public:
    ConditionalPMF() = default;

    static ConditionalPMF from_rows(int from_size, int to_size, std::vector<double> rows) {
        if (from_size < 1 || to_size < 1)
            throw input_error("ConditionalPMF: alphabet sizes must be positive");
        const std::size_t total =
            static_cast<std::size_t>(from_size) * static_cast<std::size_t>(to_size);
        if (rows.size() != total) throw input_error("ConditionalPMF: row count does not match alphabet");
        ConditionalPMF c;
        c.from_size_ = from_size;
        c.to_size_ = to_size;
        c.used_.assign(static_cast<std::size_t>(from_size), false);
        for (int f = 0; f < from_size; ++f) {
            double sum = 0;
            for (int t = 0; t < to_size; ++t) {
                const double v = rows[c.index(f, t)];
                if (!(v >= 0)) throw input_error("ConditionalPMF: negative or NaN entry");
                sum += v;
            }
            if (sum == 0) continue;  // unused conditioning symbol
            if (std::abs(sum - 1.0) > kProbTol)
                throw input_error("ConditionalPMF: row does not sum to one");
            for (int t = 0; t < to_size; ++t) rows[c.index(f, t)] /= sum;
            c.used_[static_cast<std::size_t>(f)] = true;
        }
        c.rows_ = std::move(rows);
        return c;
    }

    static ConditionalPMF identity(int size) {
        std::vector<double> rows(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0.0);
        for (int f = 0; f < size; ++f)
            rows[static_cast<std::size_t>(f) * static_cast<std::size_t>(size) +
                 static_cast<std::size_t>(f)] = 1.0;
        return from_rows(size, size, std::move(rows));
    }

    static ConditionalPMF binary_symmetric(double flip) {
        if (!(flip >= 0 && flip <= 1)) throw input_error("binary_symmetric: flip outside [0,1]");
        return from_rows(2, 2, {1 - flip, flip, flip, 1 - flip});
    }

    int from_size() const { return from_size_; }
    int to_size() const { return to_size_; }
    double operator()(int from, int to) const { return rows_[index(from, to)]; }
    bool row_used(int from) const { return used_[static_cast<std::size_t>(from)]; }
    const std::vector<double>& flat() const { return rows_; }

private:
    std::size_t index(int from, int to) const {
        return static_cast<std::size_t>(from) * static_cast<std::size_t>(to_size_) +
               static_cast<std::size_t>(to);
    }

    int from_size_ = 0;
    int to_size_ = 0;
    std::vector<double> rows_;
    std::vector<bool> used_;
};

// Replaces a Z_{p^r}-valued coordinate by its coset label modulo p^i Z_{p^r}
// (the first i digits, an alphabet of size p^i).  Other coordinates pass
// through unchanged; i=0 collapses the coordinate to a point, i=r relabels it
// identically.
inline JointPMF quotient_rv(const JointPMF& pmf, int axis, std::int64_t p, int r, int i) {
    if (axis < 0 || axis >= pmf.num_vars()) throw input_error("quotient_rv: axis out of range");
    const std::int64_t m = PrimaryCyclic{p, r}.modulus();
    if (pmf.size(axis) != m) throw input_error("quotient_rv: axis size is not p^r");
    if (i < 0 || i > r) throw input_error("quotient_rv: i out of [0,r]");
    std::int64_t pi = 1;
    for (int t = 0; t < i; ++t) pi *= p;
    std::vector<int> out_sizes = pmf.sizes();
    out_sizes[static_cast<std::size_t>(axis)] = static_cast<int>(pi);
    std::size_t out_total = 1;
    for (int s : out_sizes) out_total *= static_cast<std::size_t>(s);
    std::vector<double> out(out_total, 0.0);
    for (std::size_t cell = 0; cell < pmf.cells(); ++cell) {
        const double mass = pmf.flat()[cell];
        if (mass == 0) continue;
        std::vector<int> idx = pmf.unrank(cell);
        idx[static_cast<std::size_t>(axis)] = static_cast<int>(
            coset_label(p, r, i, idx[static_cast<std::size_t>(axis)]));
        std::size_t o = 0;
        for (std::size_t c = 0; c < idx.size(); ++c)
            o = o * static_cast<std::size_t>(out_sizes[c]) + static_cast<std::size_t>(idx[c]);
        out[o] += mass;
    }
    return JointPMF::from_flat(std::move(out_sizes), std::move(out));
}

// Appends the coordinate Z = U + V computed in the given group, where the two
// existing coordinates index group elements by rank.
inline JointPMF sum_rv(const JointPMF& pmf, int axis_u, int axis_v, const AbelianGroup& g) {
    if (axis_u < 0 || axis_u >= pmf.num_vars() || axis_v < 0 || axis_v >= pmf.num_vars())
        throw input_error("sum_rv: axis out of range");
    if (pmf.size(axis_u) != g.order() || pmf.size(axis_v) != g.order())
        throw input_error("sum_rv: axis sizes do not match the group order");
    return pmf.append_function(static_cast<int>(g.order()), [&](const std::vector<int>& idx) {
        const GroupElement u = g.unrank(idx[static_cast<std::size_t>(axis_u)]);
        const GroupElement v = g.unrank(idx[static_cast<std::size_t>(axis_v)]);
        return static_cast<int>(g.rank(g.add(u, v)));
    });
}

}  // namespace grouprd
