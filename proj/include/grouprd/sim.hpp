#pragma once

// Desk-scale verification of the random-homomorphism machinery: exhaustive
// kernel statistics at tiny sizes, Monte Carlo estimates when enumeration is
// out of reach, and the nested parity-matrix construction used by the staged
// codes.  Every operation is deterministic given its config's seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "grouprd/group.hpp"
#include "grouprd/pmf.hpp"
#include "grouprd/rng.hpp"

namespace grouprd {

// Exhaustive enumeration budgets: matrices (or vectors) up to 2^20,
// kernel members up to 2^22.  Exceeding either raises resource_error.
inline constexpr std::int64_t kMatrixEnumGuard = std::int64_t{1} << 20;
inline constexpr std::int64_t kKernelEnumGuard = std::int64_t{1} << 22;

enum class DecoderKind { kMaxLikelihood, kTypicality };

struct SimConfig {
    std::int64_t p = 2;
    int r = 1;
    int n = 2;
    int k = 1;                 // parity rows of the random homomorphism
    int k11 = 0;               // row counts of the nested construction
    int k12 = 0;
    int k2 = 0;
    long long trials = 20000;  // Monte Carlo sample count
    std::uint64_t seed = 1;
    double epsilon = 0.05;     // typicality half-width
    DecoderKind decoder = DecoderKind::kMaxLikelihood;
};

struct SimCheck {
    std::string label;
    double observed = 0;
    double predicted = 0;
    double deviation = 0;  // observed - predicted
    double sigma = 0;      // Monte Carlo standard error (0 when exact)
    bool exact = false;    // exhaustive count rather than Monte Carlo estimate
    bool informational = false;  // no theoretical prediction; never fails
    bool pass = false;     // exact: integer equality; Monte Carlo: within 4 sigma
    long long count = 0;   // numerator when exact
    long long total = 0;   // denominator when exact
};

struct SimReport {
    std::string check;
    SimConfig config;
    bool exhaustive = false;  // every non-informational entry was counted exactly
    long long samples = 0;
    std::vector<SimCheck> entries;
    std::vector<std::string> notes;

    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
    bool exact_failure() const {
        for (const auto& e : entries)
            if (e.exact && !e.pass) return true;
        return false;
    }
};

namespace detail {

// p^exp, saturating just above cap so callers can compare against a budget
// without overflow.
inline std::int64_t pow_capped(std::int64_t base, long long exp, std::int64_t cap) {
    std::int64_t v = 1;
    for (long long t = 0; t < exp; ++t) {
        if (v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

inline void validate_sim_shape(const SimConfig& cfg) {
    if (!is_prime(cfg.p)) throw input_error("SimConfig: p must be prime");
    if (cfg.r < 1) throw input_error("SimConfig: r must be at least 1");
    if (cfg.n < 1) throw input_error("SimConfig: n must be at least 1");
    if (cfg.k < 0) throw input_error("SimConfig: k must be non-negative");
    if (cfg.trials < 1) throw input_error("SimConfig: trials must be positive");
}

inline SimCheck exact_check(std::string label, long long count, long long total,
                            double predicted, bool match) {
    SimCheck c;
    c.label = std::move(label);
    c.count = count;
    c.total = total;
    c.observed = total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
    c.predicted = predicted;
    c.deviation = c.observed - c.predicted;
    c.exact = true;
    c.pass = match;
    return c;
}

inline SimCheck monte_carlo_check(std::string label, long long hits, long long trials,
                                  double predicted) {
    SimCheck c;
    c.label = std::move(label);
    c.count = hits;
    c.total = trials;
    c.observed = static_cast<double>(hits) / static_cast<double>(trials);
    c.predicted = predicted;
    c.deviation = c.observed - c.predicted;
    c.sigma = std::sqrt(std::max(predicted * (1.0 - predicted), 0.0) /
                        static_cast<double>(trials));
    c.pass = c.sigma > 0 ? std::abs(c.deviation) <= 4.0 * c.sigma
                         : c.deviation == 0.0;
    return c;
}

inline SimCheck informational_check(std::string label, double observed) {
    SimCheck c;
    c.label = std::move(label);
    c.observed = observed;
    c.informational = true;
    c.pass = true;
    return c;
}

}  // namespace detail

// A k x n matrix over Z_{p^r}, acting on column vectors by x -> Ax.  Zero
// rows (k == 0) make the kernel the whole space.
struct ParityMatrix {
    std::int64_t p = 2;
    int r = 1;
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> a;  // row-major, entries in [0, p^r)

    std::int64_t modulus() const { return PrimaryCyclic{p, r}.modulus(); }
    std::int64_t entry(int i, int j) const {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
                 static_cast<std::size_t>(j)];
    }
    std::vector<std::int64_t> apply(const std::vector<std::int64_t>& x) const {
        if (static_cast<int>(x.size()) != cols)
            throw input_error("ParityMatrix::apply: vector length mismatch");
        const std::int64_t m = modulus();
        std::vector<std::int64_t> s(static_cast<std::size_t>(rows), 0);
        for (int i = 0; i < rows; ++i) {
            std::int64_t acc = 0;
            for (int j = 0; j < cols; ++j)
                acc = (acc + entry(i, j) * (((x[static_cast<std::size_t>(j)] % m) + m) % m)) % m;
            s[static_cast<std::size_t>(i)] = acc;
        }
        return s;
    }
    bool in_kernel(const std::vector<std::int64_t>& x) const {
        const auto s = apply(x);
        return std::all_of(s.begin(), s.end(), [](std::int64_t v) { return v == 0; });
    }
};

// Uniform random homomorphism Z_{p^r}^n -> Z_{p^r}^k: entries iid uniform on
// [0, p^r).  Deterministic in (seed, stream).
inline ParityMatrix random_hom(std::int64_t p, int r, int k, int n,
                               std::uint64_t seed, std::uint64_t stream = 0) {
    SimConfig shape;
    shape.p = p;
    shape.r = r;
    shape.n = n;
    shape.k = k;
    detail::validate_sim_shape(shape);
    ParityMatrix mat;
    mat.p = p;
    mat.r = r;
    mat.rows = k;
    mat.cols = n;
    const std::uint64_t m = static_cast<std::uint64_t>(mat.modulus());
    mat.a.resize(static_cast<std::size_t>(k) * static_cast<std::size_t>(n));
    CounterRng rng(seed, stream);
    for (auto& e : mat.a) e = static_cast<std::int64_t>(rng.next_below(m));
    return mat;
}

namespace detail {

// Smallest shell index touched by the pairwise determinants
//   u1[a] * u2[l] - u2[a] * u1[l]   over coordinates a with u1[a] a unit.
// All determinants divisible by p^r collapse to i = r (u2 a multiple of u1).
inline int determinant_shell(const SimConfig& cfg,
                             const std::vector<std::int64_t>& u1,
                             const std::vector<std::int64_t>& u2) {
    const std::int64_t m = PrimaryCyclic{cfg.p, cfg.r}.modulus();
    bool has_unit = false;
    int i = cfg.r;
    for (int a = 0; a < cfg.n; ++a) {
        if (valuation(cfg.p, cfg.r, u1[static_cast<std::size_t>(a)]) != 0) continue;
        has_unit = true;
        for (int l = 0; l < cfg.n; ++l) {
            const std::int64_t det =
                ((u1[static_cast<std::size_t>(a)] * u2[static_cast<std::size_t>(l)] -
                  u2[static_cast<std::size_t>(a)] * u1[static_cast<std::size_t>(l)]) % m + m) % m;
            i = std::min(i, valuation(cfg.p, cfg.r, det));
        }
    }
    if (!has_unit)
        throw input_error("determinant_shell: u1 has no invertible coordinate");
    return i;
}

inline std::vector<std::int64_t> reduced_copy(const SimConfig& cfg,
                                              const std::vector<std::int64_t>& z,
                                              const char* who) {
    if (static_cast<int>(z.size()) != cfg.n)
        throw input_error(std::string(who) + ": vector length must equal n");
    const std::int64_t m = PrimaryCyclic{cfg.p, cfg.r}.modulus();
    std::vector<std::int64_t> out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) out[j] = ((z[j] % m) + m) % m;
    return out;
}

// Visit every k x n matrix over Z_m in odometer order.
template <typename Fn>
void for_each_matrix(std::int64_t m, int k, int n, Fn&& fn) {
    ParityMatrix mat;
    mat.rows = k;
    mat.cols = n;
    mat.a.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(n), 0);
    for (;;) {
        fn(mat);
        std::size_t pos = 0;
        while (pos < mat.a.size()) {
            if (++mat.a[pos] < m) break;
            mat.a[pos] = 0;
            ++pos;
        }
        if (pos == mat.a.size()) return;
    }
}

}  // namespace detail

// How often a random homomorphism annihilates the fixed vector z.  The
// prediction is p^{-(r-i)k} where i is the smallest coordinate valuation
// (z == 0 gives i = r and probability one).  Counted exhaustively over all
// p^{rkn} matrices when that fits the budget, estimated otherwise.
inline SimReport kernel_membership_check(const SimConfig& cfg,
                                         const std::vector<std::int64_t>& z_in) {
    detail::validate_sim_shape(cfg);
    const auto z = detail::reduced_copy(cfg, z_in, "kernel_membership_check");
    const std::int64_t m = PrimaryCyclic{cfg.p, cfg.r}.modulus();
    int i = cfg.r;
    for (std::int64_t v : z) i = std::min(i, valuation(cfg.p, cfg.r, v));
    const double predicted =
        std::pow(static_cast<double>(cfg.p), -static_cast<double>(cfg.r - i) * cfg.k);

    SimReport rep;
    rep.check = "lemma4";
    rep.config = cfg;
    rep.notes.push_back("coordinate shell index i = " + std::to_string(i));

    const std::int64_t matrices = detail::pow_capped(
        cfg.p, static_cast<long long>(cfg.r) * cfg.k * cfg.n, kMatrixEnumGuard);
    if (matrices <= kMatrixEnumGuard) {
        long long hits = 0;
        detail::for_each_matrix(m, cfg.k, cfg.n, [&](ParityMatrix& mat) {
            mat.p = cfg.p;
            mat.r = cfg.r;
            if (mat.in_kernel(z)) ++hits;
        });
        const std::int64_t factor = detail::pow_capped(
            cfg.p, static_cast<long long>(cfg.r - i) * cfg.k, matrices);
        const bool match = factor <= matrices && hits * factor == matrices;
        rep.exhaustive = true;
        rep.samples = matrices;
        rep.entries.push_back(
            detail::exact_check("P(phi(z) = 0)", hits, matrices, predicted, match));
    } else {
        long long hits = 0;
        for (long long t = 0; t < cfg.trials; ++t) {
            const ParityMatrix mat =
                random_hom(cfg.p, cfg.r, cfg.k, cfg.n, cfg.seed,
                           static_cast<std::uint64_t>(t));
            if (mat.in_kernel(z)) ++hits;
        }
        rep.samples = cfg.trials;
        rep.entries.push_back(
            detail::monte_carlo_check("P(phi(z) = 0)", hits, cfg.trials, predicted));
    }
    return rep;
}

// How often a random homomorphism annihilates two fixed vectors at once.
// The prediction is p^{-(2r-i)k} where i is the determinant shell index of
// the pair; u1 must have an invertible coordinate.
inline SimReport joint_kernel_check(const SimConfig& cfg,
                                    const std::vector<std::int64_t>& u1_in,
                                    const std::vector<std::int64_t>& u2_in) {
    detail::validate_sim_shape(cfg);
    const auto u1 = detail::reduced_copy(cfg, u1_in, "joint_kernel_check");
    const auto u2 = detail::reduced_copy(cfg, u2_in, "joint_kernel_check");
    const std::int64_t m = PrimaryCyclic{cfg.p, cfg.r}.modulus();
    const int i = detail::determinant_shell(cfg, u1, u2);
    const double predicted =
        std::pow(static_cast<double>(cfg.p),
                 -static_cast<double>(2 * cfg.r - i) * cfg.k);

    SimReport rep;
    rep.check = "lemma6";
    rep.config = cfg;
    rep.notes.push_back("determinant shell index i = " + std::to_string(i));

    const std::int64_t matrices = detail::pow_capped(
        cfg.p, static_cast<long long>(cfg.r) * cfg.k * cfg.n, kMatrixEnumGuard);
    if (matrices <= kMatrixEnumGuard) {
        long long hits = 0;
        detail::for_each_matrix(m, cfg.k, cfg.n, [&](ParityMatrix& mat) {
            mat.p = cfg.p;
            mat.r = cfg.r;
            if (mat.in_kernel(u1) && mat.in_kernel(u2)) ++hits;
        });
        const std::int64_t factor = detail::pow_capped(
            cfg.p, static_cast<long long>(2 * cfg.r - i) * cfg.k, matrices);
        const bool match = factor <= matrices && hits * factor == matrices;
        rep.exhaustive = true;
        rep.samples = matrices;
        rep.entries.push_back(detail::exact_check("P(phi(u1) = 0 and phi(u2) = 0)",
                                                  hits, matrices, predicted, match));
    } else {
        long long hits = 0;
        for (long long t = 0; t < cfg.trials; ++t) {
            const ParityMatrix mat =
                random_hom(cfg.p, cfg.r, cfg.k, cfg.n, cfg.seed,
                           static_cast<std::uint64_t>(t));
            if (mat.in_kernel(u1) && mat.in_kernel(u2)) ++hits;
        }
        rep.samples = cfg.trials;
        rep.entries.push_back(detail::monte_carlo_check(
            "P(phi(u1) = 0 and phi(u2) = 0)", hits, cfg.trials, predicted));
    }
    return rep;
}

// Partition of all u2 != u1 by determinant shell index, checked against the
// closed-form class sizes:
//   |D_i| = p^r (p^{(r-i)(n-1)} - p^{(r-i-1)(n-1)})   for 0 <= i < r
//   |D_r| = p^r - 1                                   (the multiples of u1)
// which sum to p^{rn} - 1.  Exhaustive over all p^{rn} vectors.
inline SimReport count_dependency_classes(const SimConfig& cfg,
                                          const std::vector<std::int64_t>& u1_in) {
    detail::validate_sim_shape(cfg);
    const auto u1 = detail::reduced_copy(cfg, u1_in, "count_dependency_classes");
    const std::int64_t m = PrimaryCyclic{cfg.p, cfg.r}.modulus();
    const std::int64_t vectors = detail::pow_capped(
        cfg.p, static_cast<long long>(cfg.r) * cfg.n, kMatrixEnumGuard);
    if (vectors > kMatrixEnumGuard)
        throw resource_error("count_dependency_classes: p^(rn) exceeds enumeration guard");
    bool has_unit = false;
    for (std::int64_t v : u1)
        if (valuation(cfg.p, cfg.r, v) == 0) has_unit = true;
    if (!has_unit)
        throw input_error("count_dependency_classes: u1 has no invertible coordinate");

    std::vector<long long> counts(static_cast<std::size_t>(cfg.r) + 1, 0);
    std::vector<std::int64_t> u2(static_cast<std::size_t>(cfg.n), 0);
    for (std::int64_t rank = 0; rank < vectors; ++rank) {
        if (u2 != u1)
            ++counts[static_cast<std::size_t>(detail::determinant_shell(cfg, u1, u2))];
        std::size_t pos = 0;
        while (pos < u2.size()) {
            if (++u2[pos] < m) break;
            u2[pos] = 0;
            ++pos;
        }
    }

    SimReport rep;
    rep.check = "lemma7";
    rep.config = cfg;
    rep.exhaustive = true;
    rep.samples = vectors;
    const std::int64_t big = std::int64_t{1} << 62;
    for (int i = 0; i <= cfg.r; ++i) {
        long long predicted;
        if (i < cfg.r) {
            const std::int64_t outer = detail::pow_capped(cfg.p, cfg.r, big);
            const std::int64_t hi = detail::pow_capped(
                cfg.p, static_cast<long long>(cfg.r - i) * (cfg.n - 1), big);
            const std::int64_t lo = detail::pow_capped(
                cfg.p, static_cast<long long>(cfg.r - i - 1) * (cfg.n - 1), big);
            predicted = outer * (hi - lo);
        } else {
            predicted = detail::pow_capped(cfg.p, cfg.r, big) - 1;
        }
        SimCheck c = detail::exact_check(
            "|D_" + std::to_string(i) + "|", counts[static_cast<std::size_t>(i)],
            vectors - 1, static_cast<double>(predicted) / static_cast<double>(vectors - 1),
            counts[static_cast<std::size_t>(i)] == predicted);
        rep.entries.push_back(c);
    }
    long long total = 0;
    for (long long c : counts) total += c;
    rep.entries.push_back(detail::exact_check("total classified", total, vectors - 1,
                                              1.0, total == vectors - 1));
    return rep;
}

// Full (a, b) table for the linear equation a x = b over Z_{p^r}: brute-force
// solution counts against the closed form (p^i solutions when p^i | b for a
// in the shell p^i Z \ p^{i+1} Z) and against the solver's output.
inline SimReport linear_solution_check(std::int64_t p, int r) {
    SimConfig cfg;
    cfg.p = p;
    cfg.r = r;
    cfg.n = 1;
    cfg.k = 0;
    detail::validate_sim_shape(cfg);
    const std::int64_t m = PrimaryCyclic{p, r}.modulus();
    long long pairs = 0;
    long long count_matches = 0;
    long long solver_matches = 0;
    for (std::int64_t a = 0; a < m; ++a) {
        for (std::int64_t b = 0; b < m; ++b) {
            ++pairs;
            long long brute = 0;
            for (std::int64_t x = 0; x < m; ++x)
                if (a * x % m == b) ++brute;
            long long predicted;
            if (a == 0) {
                predicted = b == 0 ? m : 0;
            } else {
                const int i = valuation(p, r, a);
                std::int64_t pi = 1;
                for (int t = 0; t < i; ++t) pi *= p;
                predicted = b % pi == 0 ? pi : 0;
            }
            if (brute == predicted) ++count_matches;
            const auto xs = solve_linear(p, r, a, b);
            bool ok = static_cast<long long>(xs.size()) == brute;
            for (std::int64_t x : xs)
                if (a * x % m != b) ok = false;
            if (ok) ++solver_matches;
        }
    }

    SimReport rep;
    rep.check = "lemma8";
    rep.config = cfg;
    rep.exhaustive = true;
    rep.samples = pairs;
    rep.entries.push_back(detail::exact_check("solution counts match closed form",
                                              count_matches, pairs, 1.0,
                                              count_matches == pairs));
    rep.entries.push_back(detail::exact_check("solver output exact and complete",
                                              solver_matches, pairs, 1.0,
                                              solver_matches == pairs));
    return rep;
}

// The nested parity stack: H11 is the first k11 rows, H12 the first k12, H2
// all k2 rows of one iid-uniform matrix, so the induced codes satisfy
// C2 <= C12 <= C11 by construction.
struct NestedParity {
    ParityMatrix h11;
    ParityMatrix h12;
    ParityMatrix h2;
};

inline NestedParity nested_parity_build(const SimConfig& cfg) {
    detail::validate_sim_shape(cfg);
    if (cfg.k11 < 0 || cfg.k11 > cfg.k12 || cfg.k12 > cfg.k2)
        throw input_error("nested_parity_build: need 0 <= k11 <= k12 <= k2");
    const ParityMatrix full = random_hom(cfg.p, cfg.r, cfg.k2, cfg.n, cfg.seed, 1);
    NestedParity nest;
    auto prefix = [&](int rows) {
        ParityMatrix mat = full;
        mat.rows = rows;
        mat.a.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cfg.n));
        return mat;
    };
    nest.h11 = prefix(cfg.k11);
    nest.h12 = prefix(cfg.k12);
    nest.h2 = prefix(cfg.k2);
    return nest;
}

// Behavioral check of the nesting: syndrome prefixes agree on random inputs,
// and (when the space is enumerable) the kernels are literally nested.
inline SimReport nested_containment_check(const SimConfig& cfg) {
    const NestedParity nest = nested_parity_build(cfg);
    const std::int64_t m = PrimaryCyclic{cfg.p, cfg.r}.modulus();

    SimReport rep;
    rep.check = "nested";
    rep.config = cfg;

    const long long samples = 1000;
    long long prefix_ok = 0;
    CounterRng rng(cfg.seed, 2);
    std::vector<std::int64_t> x(static_cast<std::size_t>(cfg.n));
    for (long long t = 0; t < samples; ++t) {
        for (auto& v : x)
            v = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(m)));
        const auto s11 = nest.h11.apply(x);
        const auto s12 = nest.h12.apply(x);
        const auto s2 = nest.h2.apply(x);
        const bool ok =
            std::equal(s11.begin(), s11.end(), s12.begin()) &&
            std::equal(s12.begin(), s12.end(), s2.begin());
        if (ok) ++prefix_ok;
    }
    rep.samples = samples;
    rep.entries.push_back(detail::exact_check("syndrome prefixes agree", prefix_ok,
                                              samples, 1.0, prefix_ok == samples));

    const std::int64_t vectors = detail::pow_capped(
        cfg.p, static_cast<long long>(cfg.r) * cfg.n, kMatrixEnumGuard);
    if (vectors <= kMatrixEnumGuard) {
        long long in2 = 0, in12 = 0, in11 = 0, violations = 0;
        std::vector<std::int64_t> v(static_cast<std::size_t>(cfg.n), 0);
        for (std::int64_t rank = 0; rank < vectors; ++rank) {
            const bool k2 = nest.h2.in_kernel(v);
            const bool k12 = nest.h12.in_kernel(v);
            const bool k11 = nest.h11.in_kernel(v);
            in2 += k2;
            in12 += k12;
            in11 += k11;
            if ((k2 && !k12) || (k12 && !k11)) ++violations;
            std::size_t pos = 0;
            while (pos < v.size()) {
                if (++v[pos] < m) break;
                v[pos] = 0;
                ++pos;
            }
        }
        rep.exhaustive = true;
        rep.entries.push_back(detail::exact_check("kernel nesting violations",
                                                  violations, vectors, 0.0,
                                                  violations == 0));
        rep.notes.push_back("kernel sizes |C2| = " + std::to_string(in2) +
                            ", |C12| = " + std::to_string(in12) +
                            ", |C11| = " + std::to_string(in11));
    } else {
        rep.notes.push_back("space too large for exhaustive kernel walk; "
                            "prefix check only");
    }
    return rep;
}

namespace detail {

// Kernel of the matrix as an explicit vector list.  Over a prime field this
// runs Gauss-Jordan and enumerates free-coordinate assignments; for r > 1 it
// falls back to walking the whole space.  Throws resource_error past the
// enumeration budget.
inline std::vector<std::vector<std::int64_t>> enumerate_kernel(const ParityMatrix& mat) {
    const std::int64_t m = mat.modulus();
    if (mat.r == 1) {
        // Row-reduce a working copy over F_p.
        std::vector<std::vector<std::int64_t>> rows;
        for (int i = 0; i < mat.rows; ++i) {
            std::vector<std::int64_t> row(static_cast<std::size_t>(mat.cols));
            for (int j = 0; j < mat.cols; ++j) row[static_cast<std::size_t>(j)] = mat.entry(i, j);
            rows.push_back(std::move(row));
        }
        std::vector<int> pivot_col;
        int lead = 0;
        for (int col = 0; col < mat.cols && lead < static_cast<int>(rows.size()); ++col) {
            int sel = -1;
            for (int i = lead; i < static_cast<int>(rows.size()); ++i)
                if (rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
                    sel = i;
                    break;
                }
            if (sel < 0) continue;
            std::swap(rows[static_cast<std::size_t>(sel)], rows[static_cast<std::size_t>(lead)]);
            const std::int64_t inv =
                inverse_mod(rows[static_cast<std::size_t>(lead)][static_cast<std::size_t>(col)], m);
            for (auto& v : rows[static_cast<std::size_t>(lead)]) v = v * inv % m;
            for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
                if (i == lead) continue;
                const std::int64_t f =
                    rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
                if (f == 0) continue;
                for (int j = 0; j < mat.cols; ++j)
                    rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                        ((rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                          f * rows[static_cast<std::size_t>(lead)][static_cast<std::size_t>(j)]) % m + m) % m;
            }
            pivot_col.push_back(col);
            ++lead;
        }
        const int rank = static_cast<int>(pivot_col.size());
        std::vector<int> free_col;
        for (int col = 0; col < mat.cols; ++col)
            if (std::find(pivot_col.begin(), pivot_col.end(), col) == pivot_col.end())
                free_col.push_back(col);
        const std::int64_t members =
            pow_capped(m, static_cast<long long>(free_col.size()), kKernelEnumGuard);
        if (members > kKernelEnumGuard)
            throw resource_error("enumerate_kernel: kernel exceeds enumeration guard");
        std::vector<std::vector<std::int64_t>> kernel;
        kernel.reserve(static_cast<std::size_t>(members));
        std::vector<std::int64_t> freev(free_col.size(), 0);
        for (std::int64_t t = 0; t < members; ++t) {
            std::vector<std::int64_t> x(static_cast<std::size_t>(mat.cols), 0);
            for (std::size_t f = 0; f < free_col.size(); ++f)
                x[static_cast<std::size_t>(free_col[f])] = freev[f];
            for (int i = 0; i < rank; ++i) {
                std::int64_t acc = 0;
                for (std::size_t f = 0; f < free_col.size(); ++f)
                    acc += rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(free_col[f])] * freev[f];
                x[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(i)])] =
                    ((-acc) % m + m) % m;
            }
            kernel.push_back(std::move(x));
            std::size_t pos = 0;
            while (pos < freev.size()) {
                if (++freev[pos] < m) break;
                freev[pos] = 0;
                ++pos;
            }
        }
        return kernel;
    }
    const std::int64_t vectors = pow_capped(
        mat.p, static_cast<long long>(mat.r) * mat.cols, kKernelEnumGuard);
    if (vectors > kKernelEnumGuard)
        throw resource_error("enumerate_kernel: space exceeds enumeration guard");
    std::vector<std::vector<std::int64_t>> kernel;
    std::vector<std::int64_t> v(static_cast<std::size_t>(mat.cols), 0);
    for (std::int64_t rank = 0; rank < vectors; ++rank) {
        if (mat.in_kernel(v)) kernel.push_back(v);
        std::size_t pos = 0;
        while (pos < v.size()) {
            if (++v[pos] < m) break;
            v[pos] = 0;
            ++pos;
        }
    }
    return kernel;
}

// L-infinity closeness of an empirical joint type to a target pmf.
inline bool joint_type_close(const std::vector<std::int64_t>& x,
                             const std::vector<std::int64_t>& u,
                             const JointPMF& xu, double epsilon) {
    const int nx = xu.size(0);
    const int nu = xu.size(1);
    std::vector<double> type(static_cast<std::size_t>(nx) * static_cast<std::size_t>(nu), 0.0);
    const double w = 1.0 / static_cast<double>(x.size());
    for (std::size_t t = 0; t < x.size(); ++t)
        type[static_cast<std::size_t>(x[t]) * static_cast<std::size_t>(nu) +
             static_cast<std::size_t>(u[t])] += w;
    std::size_t cell = 0;
    for (int a = 0; a < nx; ++a)
        for (int b = 0; b < nu; ++b, ++cell)
            if (std::abs(type[cell] - xu.at({a, b})) > epsilon) return false;
    return true;
}

}  // namespace detail

// Covering behaviour of random kernels: the fraction of typical source words
// that see at least one jointly typical codeword in the kernel of a random
// homomorphism.  The joint pmf's two coordinates are (source, codeword
// letter), both over Z_{p^r}.  No finite-n closed form is claimed; the k = 0
// kernel is the whole space and must cover essentially everything.
inline SimReport source_cover_check(const SimConfig& cfg, const JointPMF& xu) {
    detail::validate_sim_shape(cfg);
    const std::int64_t m = PrimaryCyclic{cfg.p, cfg.r}.modulus();
    if (xu.num_vars() != 2 || xu.size(0) != m || xu.size(1) != m)
        throw input_error("source_cover_check: joint pmf must be Z_m x Z_m");
    const JointPMF px = xu.marginal({0});

    SimReport rep;
    rep.check = "cover";
    rep.config = cfg;

    const int draws = 5;
    rep.notes.push_back("averaged over " + std::to_string(draws) + " matrix draws");
    long long kept = 0, covered = 0, attempts = 0, typical = 0;
    const long long per_draw = std::max<long long>(1, cfg.trials / draws);
    std::vector<std::int64_t> x(static_cast<std::size_t>(cfg.n));
    for (int d = 0; d < draws; ++d) {
        const ParityMatrix mat = random_hom(cfg.p, cfg.r, cfg.k, cfg.n, cfg.seed,
                                            static_cast<std::uint64_t>(10 + d));
        const auto kernel = detail::enumerate_kernel(mat);
        if (d == 0)
            rep.notes.push_back("kernel size " + std::to_string(kernel.size()));
        CounterRng rng(cfg.seed, static_cast<std::uint64_t>(100 + d));
        for (long long t = 0; t < per_draw; ++t) {
            // Rejection-sample a typical source word (bounded attempts).
            bool have = false;
            for (int att = 0; att < 1000 && !have; ++att) {
                ++attempts;
                for (auto& v : x) {
                    const double u = rng.next_double();
                    double acc = 0;
                    std::int64_t pick = m - 1;
                    for (std::int64_t s = 0; s < m; ++s) {
                        acc += px.at({static_cast<int>(s)});
                        if (u < acc) {
                            pick = s;
                            break;
                        }
                    }
                    v = pick;
                }
                std::vector<double> type(static_cast<std::size_t>(m), 0.0);
                for (std::int64_t v : x) type[static_cast<std::size_t>(v)] += 1.0 / cfg.n;
                bool ok = true;
                for (std::int64_t s = 0; s < m; ++s)
                    if (std::abs(type[static_cast<std::size_t>(s)] -
                                 px.at({static_cast<int>(s)})) > cfg.epsilon)
                        ok = false;
                if (ok) {
                    have = true;
                    ++typical;
                }
            }
            if (!have) continue;
            ++kept;
            for (const auto& c : kernel) {
                if (detail::joint_type_close(x, c, xu, cfg.epsilon)) {
                    ++covered;
                    break;
                }
            }
        }
    }
    rep.samples = kept;
    const double coverage = kept == 0 ? 0.0
                                      : static_cast<double>(covered) /
                                            static_cast<double>(kept);
    if (cfg.k == 0) {
        SimCheck c;
        c.label = "coverage with full kernel";
        c.observed = coverage;
        c.predicted = 1.0;
        c.deviation = coverage - 1.0;
        c.pass = coverage >= 0.9;
        rep.entries.push_back(c);
        rep.notes.push_back("pass threshold: coverage >= 0.9 at k = 0");
    } else {
        rep.entries.push_back(detail::informational_check("coverage", coverage));
    }
    rep.entries.push_back(detail::informational_check(
        "typical source fraction",
        attempts == 0 ? 0.0 : static_cast<double>(typical) / static_cast<double>(attempts)));
    return rep;
}

}  // namespace grouprd
