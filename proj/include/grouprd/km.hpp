#pragma once

// Monte Carlo run of the binary two-encoder parity codec: both terminals
// syndrome-encode with one shared random matrix, the decoder recovers the
// modulo-two difference from the syndrome difference.  Decoding is
// min-weight-within-coset (maximum likelihood for crossover below one half),
// implemented as a randomized information-set search; a typicality decoder is
// available for cosets small enough to enumerate.
//
// Work is split across threads by matrix seed; every seed's statistics are a
// pure function of (seed, seed index), so reports are bit-identical for any
// thread count.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "grouprd/group.hpp"
#include "grouprd/rng.hpp"
#include "grouprd/sim.hpp"

namespace grouprd {

struct KmConfig {
    int n = 200;                  // blocklength (at most 256)
    int k = 88;                   // syndrome length
    double crossover = 0.05;      // P(X != Y)
    int matrix_seeds = 20;        // independent matrix draws
    long long trials_per_seed = 100;
    std::uint64_t seed = 1;
    DecoderKind decoder = DecoderKind::kMaxLikelihood;
    double epsilon = 0.05;        // typicality half-width
    int isd_iterations = 60;      // information-set restarts per decode
    int threads = 0;              // 0: honour GROUPRD_THREADS, default 1
};

struct KmSeedStats {
    int seed_index = 0;
    bool full_rank = false;
    long long errors = 0;
    long long trials = 0;
};

struct KmResult {
    KmConfig config;
    std::vector<KmSeedStats> per_seed;
    long long total_errors = 0;
    long long total_trials = 0;
    double error_rate = 0;
    double full_rank_rate = 0;  // fraction of seeds whose matrix has rank min(k, n)
    int threads_used = 1;
};

namespace detail {

inline constexpr int kBitWords = 4;  // 256-bit rows

struct Bits256 {
    std::array<std::uint64_t, kBitWords> w{};

    bool test(int i) const { return (w[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1; }
    void set(int i) { w[static_cast<std::size_t>(i >> 6)] |= std::uint64_t{1} << (i & 63); }
    void operator^=(const Bits256& o) {
        for (int t = 0; t < kBitWords; ++t) w[static_cast<std::size_t>(t)] ^= o.w[static_cast<std::size_t>(t)];
    }
    bool operator==(const Bits256& o) const { return w == o.w; }
    int popcount() const {
        int c = 0;
        for (std::uint64_t v : w) c += std::popcount(v);
        return c;
    }
    std::uint64_t low_bits(int bits) const {
        return w[0] & ((std::uint64_t{1} << bits) - 1);
    }
};

inline Bits256 random_bits(CounterRng& rng, int n) {
    Bits256 b;
    for (int t = 0; t < kBitWords; ++t) b.w[static_cast<std::size_t>(t)] = rng.next_u64();
    // Mask the tail beyond n.
    for (int i = n; i < 256; ++i)
        b.w[static_cast<std::size_t>(i >> 6)] &= ~(std::uint64_t{1} << (i & 63));
    return b;
}

inline Bits256 bernoulli_bits(CounterRng& rng, int n, double prob) {
    Bits256 b;
    for (int i = 0; i < n; ++i)
        if (rng.bernoulli(prob)) b.set(i);
    return b;
}

// Parity of <row, x> over F_2.
inline int dot_parity(const Bits256& row, const Bits256& x) {
    std::uint64_t acc = 0;
    for (int t = 0; t < kBitWords; ++t)
        acc ^= row.w[static_cast<std::size_t>(t)] & x.w[static_cast<std::size_t>(t)];
    return std::popcount(acc) & 1;
}

// Row-reduced echelon form of [rows | syndrome bits], pivoting on columns in
// the given order.  After the call, row t has a leading one in pivot_col[t]
// and that column is clear elsewhere.
struct BinaryRref {
    std::vector<Bits256> rows;
    std::vector<int> sbit;       // augmented syndrome bit per row
    std::vector<int> pivot_col;  // size == rank

    int rank() const { return static_cast<int>(pivot_col.size()); }
};

inline void binary_rref_into(BinaryRref& g, const std::vector<Bits256>& h,
                             const std::vector<int>& syndrome,
                             const std::vector<int>& col_order) {
    g.rows = h;
    g.sbit = syndrome;
    g.pivot_col.clear();
    const int k = static_cast<int>(h.size());
    int lead = 0;
    for (int c : col_order) {
        if (lead == k) break;
        int sel = -1;
        for (int i = lead; i < k; ++i)
            if (g.rows[static_cast<std::size_t>(i)].test(c)) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(g.rows[static_cast<std::size_t>(sel)], g.rows[static_cast<std::size_t>(lead)]);
        std::swap(g.sbit[static_cast<std::size_t>(sel)], g.sbit[static_cast<std::size_t>(lead)]);
        for (int i = 0; i < k; ++i) {
            if (i == lead || !g.rows[static_cast<std::size_t>(i)].test(c)) continue;
            g.rows[static_cast<std::size_t>(i)] ^= g.rows[static_cast<std::size_t>(lead)];
            g.sbit[static_cast<std::size_t>(i)] ^= g.sbit[static_cast<std::size_t>(lead)];
        }
        g.pivot_col.push_back(c);
        ++lead;
    }
}

inline BinaryRref binary_rref(const std::vector<Bits256>& h, const std::vector<int>& syndrome,
                              const std::vector<int>& col_order) {
    BinaryRref g;
    binary_rref_into(g, h, syndrome, col_order);
    return g;
}

inline int binary_rank(const std::vector<Bits256>& h, int n) {
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) order[static_cast<std::size_t>(c)] = c;
    return binary_rref(h, std::vector<int>(h.size(), 0), order).rank();
}

// One combo of at most two free columns on one side of the split.
struct SternCombo {
    int a = -1;
    int b = -1;
    int weight = 0;
    Bits256 sum;           // residual contribution over pivot rows
    std::uint64_t key = 0;  // low window bits
};

// Min-weight member of { z : H z = s } found by randomized information-set
// restarts with a two-per-half meet-in-the-middle inner search.  Exact when
// the restarts hit an information set that isolates the leader; with the
// default iteration budget the miss probability is negligible at the sizes
// used here.
inline Bits256 isd_min_weight(const std::vector<Bits256>& h, const std::vector<int>& syndrome,
                              int n, int iterations, CounterRng& rng) {
    Bits256 best;
    int best_weight = n + 1;
    std::vector<int> col_order(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) col_order[static_cast<std::size_t>(c)] = c;

    // Scratch reused across restarts; allocations happen on the first
    // iteration only.
    BinaryRref g;
    std::vector<bool> is_pivot;
    std::vector<int> free_col;
    std::vector<Bits256> colvec;
    std::vector<SternCombo> left, right;
    std::vector<int> head;
    std::vector<std::uint32_t> stamp;
    std::vector<int> chain;

    for (int iter = 0; iter < iterations; ++iter) {
        // Random information set via a fresh pivot-column order.
        for (int c = n - 1; c > 0; --c) {
            const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(c + 1)));
            std::swap(col_order[static_cast<std::size_t>(c)], col_order[static_cast<std::size_t>(j)]);
        }
        binary_rref_into(g, h, syndrome, col_order);
        const int rank = g.rank();

        is_pivot.assign(static_cast<std::size_t>(n), false);
        for (int c : g.pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
        free_col.clear();
        for (int c = 0; c < n; ++c)
            if (!is_pivot[static_cast<std::size_t>(c)]) free_col.push_back(c);

        Bits256 s;
        for (int t = 0; t < rank; ++t)
            if (g.sbit[static_cast<std::size_t>(t)]) s.set(t);

        // Residual contribution of each free column across the pivot rows.
        colvec.assign(free_col.size(), Bits256{});
        for (std::size_t f = 0; f < free_col.size(); ++f)
            for (int t = 0; t < rank; ++t)
                if (g.rows[static_cast<std::size_t>(t)].test(free_col[f])) colvec[f].set(t);

        // v is the residual over the pivot rows for a free assignment of
        // total weight extra touching columns la, lb, ra, rb (indices into
        // free_col, -1 when unused); the full candidate weight follows.
        auto record = [&](const Bits256& v, int extra, int la, int lb, int ra, int rb) {
            const int weight = v.popcount() + extra;
            if (weight >= best_weight) return;
            Bits256 z;
            for (int t = 0; t < rank; ++t)
                if (v.test(t)) z.set(g.pivot_col[static_cast<std::size_t>(t)]);
            if (la >= 0) z.set(free_col[static_cast<std::size_t>(la)]);
            if (lb >= 0) z.set(free_col[static_cast<std::size_t>(lb)]);
            if (ra >= 0) z.set(free_col[static_cast<std::size_t>(ra)]);
            if (rb >= 0) z.set(free_col[static_cast<std::size_t>(rb)]);
            best = z;
            best_weight = weight;
        };

        // Always try the all-zero free assignment.
        record(s, 0, -1, -1, -1, -1);

        const int half = static_cast<int>(free_col.size()) / 2;
        const int window = std::min(12, rank);
        auto build = [&](std::vector<SternCombo>& out, int lo, int hi, const Bits256& base) {
            out.clear();
            SternCombo zero;
            zero.sum = base;
            zero.key = base.low_bits(window);
            out.push_back(zero);
            for (int a = lo; a < hi; ++a) {
                SternCombo one;
                one.a = a;
                one.weight = 1;
                one.sum = base;
                one.sum ^= colvec[static_cast<std::size_t>(a)];
                one.key = one.sum.low_bits(window);
                out.push_back(one);
                for (int b = a + 1; b < hi; ++b) {
                    SternCombo two = one;
                    two.b = b;
                    two.weight = 2;
                    two.sum ^= colvec[static_cast<std::size_t>(b)];
                    two.key = two.sum.low_bits(window);
                    out.push_back(two);
                }
            }
        };
        build(left, 0, half, s);  // left combos carry the syndrome
        Bits256 zero_base;
        build(right, half, static_cast<int>(free_col.size()), zero_base);

        // Bucket left combos by window key, probe with right combos.  Equal
        // keys mean the combined residual s + cols_L + cols_R vanishes on
        // the window, and that residual is exactly left.sum ^ right.sum.
        const std::size_t buckets = std::size_t{1} << window;
        if (head.size() != buckets) {
            head.assign(buckets, -1);
            stamp.assign(buckets, 0);
        }
        const std::uint32_t gen = static_cast<std::uint32_t>(iter + 1);
        chain.assign(left.size(), -1);
        for (std::size_t i = 0; i < left.size(); ++i) {
            const std::size_t b = static_cast<std::size_t>(left[i].key);
            if (stamp[b] != gen) {
                stamp[b] = gen;
                head[b] = -1;
            }
            chain[i] = head[b];
            head[b] = static_cast<int>(i);
        }
        for (const SternCombo& cr : right) {
            const std::size_t b = static_cast<std::size_t>(cr.key);
            if (stamp[b] != gen) continue;
            for (int i = head[b]; i >= 0; i = chain[static_cast<std::size_t>(i)]) {
                const SternCombo& cl = left[static_cast<std::size_t>(i)];
                Bits256 v = cl.sum;
                v ^= cr.sum;
                record(v, cl.weight + cr.weight, cl.a, cl.b, cr.a, cr.b);
            }
        }
    }
    return best;
}

// Unique-typical-member decode over an exhaustively enumerated coset.
// Returns false when no member (or more than one) sits in the typical shell.
inline bool typicality_decode(const std::vector<Bits256>& h, const std::vector<int>& syndrome,
                              int n, double crossover, double epsilon, Bits256& out) {
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) order[static_cast<std::size_t>(c)] = c;
    const BinaryRref g = binary_rref(h, syndrome, order);
    const int rank = g.rank();
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (int c : g.pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<int> free_col;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[static_cast<std::size_t>(c)]) free_col.push_back(c);
    const std::int64_t members = pow_capped(
        2, static_cast<long long>(free_col.size()), kKernelEnumGuard);
    if (members > kKernelEnumGuard)
        throw resource_error("typicality_decode: coset exceeds enumeration guard");

    int found = 0;
    for (std::int64_t m = 0; m < members; ++m) {
        Bits256 z;
        for (std::size_t f = 0; f < free_col.size(); ++f)
            if ((m >> f) & 1) z.set(free_col[f]);
        for (int t = 0; t < rank; ++t) {
            int bit = g.sbit[static_cast<std::size_t>(t)];
            for (std::size_t f = 0; f < free_col.size(); ++f)
                if (((m >> f) & 1) && g.rows[static_cast<std::size_t>(t)].test(free_col[f]))
                    bit ^= 1;
            if (bit) z.set(g.pivot_col[static_cast<std::size_t>(t)]);
        }
        const double type1 = static_cast<double>(z.popcount()) / n;
        if (std::abs(type1 - crossover) <= epsilon) {
            if (++found > 1) return false;
            out = z;
        }
    }
    return found == 1;
}

inline KmSeedStats km_run_one_seed(const KmConfig& cfg, int seed_index) {
    KmSeedStats stats;
    stats.seed_index = seed_index;
    stats.trials = cfg.trials_per_seed;

    CounterRng mat_rng(cfg.seed, static_cast<std::uint64_t>(3 * seed_index + 1));
    std::vector<Bits256> h(static_cast<std::size_t>(cfg.k));
    for (auto& row : h) row = random_bits(mat_rng, cfg.n);
    stats.full_rank = binary_rank(h, cfg.n) == std::min(cfg.k, cfg.n);

    CounterRng trial_rng(cfg.seed, static_cast<std::uint64_t>(3 * seed_index + 2));
    std::vector<int> syndrome(static_cast<std::size_t>(cfg.k));
    for (long long t = 0; t < cfg.trials_per_seed; ++t) {
        const Bits256 x = random_bits(trial_rng, cfg.n);
        const Bits256 z = bernoulli_bits(trial_rng, cfg.n, cfg.crossover);
        Bits256 y = x;
        y ^= z;
        for (int i = 0; i < cfg.k; ++i)
            syndrome[static_cast<std::size_t>(i)] =
                dot_parity(h[static_cast<std::size_t>(i)], x) ^
                dot_parity(h[static_cast<std::size_t>(i)], y);
        bool ok;
        if (cfg.decoder == DecoderKind::kMaxLikelihood) {
            const Bits256 zhat =
                isd_min_weight(h, syndrome, cfg.n, cfg.isd_iterations, trial_rng);
            ok = zhat == z;
        } else {
            Bits256 zhat;
            ok = typicality_decode(h, syndrome, cfg.n, cfg.crossover, cfg.epsilon, zhat) &&
                 zhat == z;
        }
        if (!ok) ++stats.errors;
    }
    return stats;
}

inline int km_thread_count(const KmConfig& cfg) {
    int threads = cfg.threads;
    if (threads <= 0) {
        threads = 1;
        if (const char* env = std::getenv("GROUPRD_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) threads = v;
        }
    }
    return std::max(1, std::min(threads, cfg.matrix_seeds));
}

}  // namespace detail

inline KmResult km_codec_run(const KmConfig& cfg) {
    if (cfg.n < 1 || cfg.n > 256)
        throw input_error("km_codec_run: n must be in [1, 256]");
    if (cfg.k < 0 || cfg.k > cfg.n)
        throw input_error("km_codec_run: k must be in [0, n]");
    if (!(cfg.crossover >= 0 && cfg.crossover < 1))
        throw input_error("km_codec_run: crossover must be in [0, 1)");
    if (cfg.matrix_seeds < 1 || cfg.trials_per_seed < 1)
        throw input_error("km_codec_run: need at least one seed and one trial");
    if (cfg.isd_iterations < 1)
        throw input_error("km_codec_run: need at least one decoder iteration");

    KmResult result;
    result.config = cfg;
    result.threads_used = detail::km_thread_count(cfg);
    result.per_seed.resize(static_cast<std::size_t>(cfg.matrix_seeds));

    // Static partition by seed index; each seed is self-contained, so the
    // aggregate below is identical for every thread count.
    auto worker = [&](int first, int last) {
        for (int s = first; s < last; ++s)
            result.per_seed[static_cast<std::size_t>(s)] = detail::km_run_one_seed(cfg, s);
    };
    if (result.threads_used == 1) {
        worker(0, cfg.matrix_seeds);
    } else {
        std::vector<std::thread> pool;
        const int per = (cfg.matrix_seeds + result.threads_used - 1) / result.threads_used;
        for (int t = 0; t < result.threads_used; ++t) {
            const int first = t * per;
            const int last = std::min(cfg.matrix_seeds, first + per);
            if (first < last) pool.emplace_back(worker, first, last);
        }
        for (auto& th : pool) th.join();
    }

    long long full_rank = 0;
    for (const auto& s : result.per_seed) {
        result.total_errors += s.errors;
        result.total_trials += s.trials;
        full_rank += s.full_rank ? 1 : 0;
    }
    result.error_rate = static_cast<double>(result.total_errors) /
                        static_cast<double>(result.total_trials);
    result.full_rank_rate = static_cast<double>(full_rank) /
                            static_cast<double>(cfg.matrix_seeds);
    return result;
}

}  // namespace grouprd
