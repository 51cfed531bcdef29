#pragma once

// Achievable rates for two-terminal coding of a function of correlated
// sources, built on nested group codes over primary cyclic groups.  The
// encoders quantize through auxiliary variables U, V; the target function of
// (U, V) is embedded in an abelian group and its digits are conveyed stage by
// stage, each stage paying a channel-coding rate (for the digit the decoder
// must recover, given digits already decoded) minus a covering discount (for
// the digit the encoder quantized).
//
// Digits that ride on a proper subgroup are re-rooted first: when every
// supported value of a digit is divisible by p^i0, the digit is relabeled
// z -> z / p^i0 onto Z_{p^(r-i0)}, which leaves entropies unchanged and makes
// the usual rate expressions applicable.  A constant digit costs nothing.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "embed.hpp"
#include "group.hpp"
#include "info.hpp"
#include "pmf.hpp"

namespace grouprd {

// d(x, y, zhat): distortion when the decoder outputs zhat.
using DistortionFn = std::function<double(int x, int y, std::int64_t zhat)>;

// Reconstruction comparisons treat costs within this slack as equal, so that
// closed-form case analysis and the generic pipeline resolve exact ties the
// same way under floating-point noise.
inline constexpr double kTieTol = 1e-12;

// ---------------------------------------------------------------------------
// Digit-level rate expressions.  Joints are flat vectors with the digit
// major: ws[w * s_size + s], w in [0, p^r).

namespace detail {

// Minimum p-adic valuation over the digit's support; r when it never leaves 0.
inline int min_support_valuation(const std::vector<double>& ws, std::int64_t p, int r,
                                 std::size_t s_size) {
    const std::int64_t m = PrimaryCyclic{p, r}.modulus();
    int i0 = r;
    for (std::int64_t w = 0; w < m; ++w) {
        double mass = 0;
        for (std::size_t s = 0; s < s_size; ++s) mass += ws[static_cast<std::size_t>(w) * s_size + s];
        if (mass > 0) i0 = std::min(i0, valuation(p, r, w));
    }
    return i0;
}

inline bool digit_is_constant(const std::vector<double>& ws, std::size_t s_size) {
    int supported = 0;
    for (std::size_t w = 0; w * s_size < ws.size(); ++w) {
        double mass = 0;
        for (std::size_t s = 0; s < s_size; ++s) mass += ws[w * s_size + s];
        if (mass > 0) ++supported;
    }
    return supported <= 1;
}

// H(W | S) from the flat joint.
inline double conditional_entropy_flat(const std::vector<double>& ws, std::size_t s_size) {
    std::vector<double> sm(s_size, 0.0);
    for (std::size_t idx = 0; idx < ws.size(); ++idx) sm[idx % s_size] += ws[idx];
    return entropy_of(ws) - entropy_of(sm);
}

}  // namespace detail

// Rate of a coset-decoding channel code conveying the digit W to a decoder
// that already knows S:
//     max over 0 <= i < r' of (r' / (r' - i)) (H(W|S) - H([W]_i | S))
// computed after re-rooting, where [W]_i is W mod p^i.  Zero for a constant
// digit.
inline double coset_channel_rate(const std::vector<double>& ws, std::int64_t p, int r,
                                 std::size_t s_size) {
    const std::int64_t m = PrimaryCyclic{p, r}.modulus();
    if (ws.size() != static_cast<std::size_t>(m) * s_size)
        throw input_error("coset_channel_rate: size mismatch");
    const int i0 = detail::min_support_valuation(ws, p, r, s_size);
    if (i0 == r) return 0.0;
    const int rr = r - i0;
    std::int64_t pi0 = 1;
    for (int t = 0; t < i0; ++t) pi0 *= p;

    const double h_ws = detail::conditional_entropy_flat(ws, s_size);
    double best = h_ws;  // i = 0 term: H([W]_0 | S) = 0
    std::int64_t pi = 1;
    for (int i = 1; i < rr; ++i) {
        pi *= p;
        // Aggregate by ((w / p^i0) mod p^i, s).
        std::vector<double> lab(static_cast<std::size_t>(pi) * s_size, 0.0);
        for (std::int64_t w = 0; w < m; ++w) {
            const std::int64_t l = (w / pi0) % pi;
            for (std::size_t s = 0; s < s_size; ++s)
                lab[static_cast<std::size_t>(l) * s_size + s] +=
                    ws[static_cast<std::size_t>(w) * s_size + s];
        }
        const double h_i = detail::conditional_entropy_flat(lab, s_size);
        best = std::max(best, static_cast<double>(rr) / (rr - i) * (h_ws - h_i));
    }
    return best;
}

// Covering rate of a group source code quantizing the digit W when the
// encoder sees C:  min( H(W|C), r' |H(W|C) - log2 p^(r'-1)|+ ) after
// re-rooting.  Zero for a constant digit.
inline double covering_source_rate(const std::vector<double>& wc, std::int64_t p, int r,
                                   std::size_t c_size) {
    const std::int64_t m = PrimaryCyclic{p, r}.modulus();
    if (wc.size() != static_cast<std::size_t>(m) * c_size)
        throw input_error("covering_source_rate: size mismatch");
    const int i0 = detail::min_support_valuation(wc, p, r, c_size);
    if (i0 == r) return 0.0;
    const int rr = r - i0;
    const double h = detail::conditional_entropy_flat(wc, c_size);
    const double excess = std::max(0.0, h - (rr - 1) * std::log2(static_cast<double>(p)));
    return std::min(h, rr * excess);
}

// ---------------------------------------------------------------------------
// Optimal reconstruction of the target given the auxiliary pair.

struct ReconstructionResult {
    FunctionTable table;        // best zhat per (u, v)
    std::vector<double> mass;   // P(u, v), row major; zero-mass cells are free
    double distortion = 0;      // E d(X, Y, table(U, V))
};

// table(u, v) = the zhat value minimizing E[d(X, Y, zhat) | u, v]; ties go to
// the earliest entry of zhat_values.  Cells with no mass get zhat_values[0].
inline ReconstructionResult optimal_reconstruction(const JointPMF& xyuv,
                                                   const std::vector<std::int64_t>& zhat_values,
                                                   const DistortionFn& dist) {
    if (xyuv.num_vars() != 4) throw input_error("optimal_reconstruction: expected (X,Y,U,V)");
    if (zhat_values.empty()) throw input_error("optimal_reconstruction: empty reconstruction alphabet");
    const int nu = xyuv.size(2), nv = xyuv.size(3);
    const std::size_t nz = zhat_values.size();
    std::vector<double> cost(static_cast<std::size_t>(nu) * nv * nz, 0.0);
    std::vector<double> mass(static_cast<std::size_t>(nu) * nv, 0.0);
    const auto& flat = xyuv.flat();
    for (std::size_t cell = 0; cell < flat.size(); ++cell) {
        if (flat[cell] == 0) continue;
        const int x = xyuv.coord_of(cell, 0), y = xyuv.coord_of(cell, 1);
        const int u = xyuv.coord_of(cell, 2), v = xyuv.coord_of(cell, 3);
        const std::size_t uv = static_cast<std::size_t>(u) * nv + v;
        mass[uv] += flat[cell];
        for (std::size_t zi = 0; zi < nz; ++zi)
            cost[uv * nz + zi] += flat[cell] * dist(x, y, zhat_values[zi]);
    }
    ReconstructionResult out;
    out.table.nu = nu;
    out.table.nv = nv;
    out.table.vals.assign(static_cast<std::size_t>(nu) * nv, zhat_values[0]);
    out.mass = std::move(mass);
    for (std::size_t uv = 0; uv < out.table.vals.size(); ++uv) {
        std::size_t best = 0;
        for (std::size_t zi = 1; zi < nz; ++zi)
            if (cost[uv * nz + zi] < cost[uv * nz + best] - kTieTol) best = zi;
        out.table.vals[uv] = zhat_values[best];
        out.distortion += cost[uv * nz + best];
    }
    return out;
}

// ---------------------------------------------------------------------------
// The staged rate point.

struct StagePolicy {
    // kMin takes the cheaper of the two encodings at every stage (recover the
    // sum digit, or recover the encoder's own digit).  kSumFirst always
    // conveys the sum digit, except that an encoder whose own digit is
    // constant stays silent; this mirrors the per-stage choices behind the
    // published four-group sum-rate table.
    enum Mode { kMin, kSumFirst };
    Mode mode = kMin;
};

struct RateDistortionPoint {
    double r1 = 0, r2 = 0, d = 0;
    double sum() const { return r1 + r2; }
};

struct StageBreakdown {
    int digit = 0;  // factor index encoded at this stage
    // Clamped rate for each of the two encodings available at a stage:
    // option 1 conveys enough to recover the sum digit, option 2 the
    // encoder's own digit.  r1/r2 are the contributions actually charged and
    // choice1/choice2 say which option they came from.
    double r1_option1 = 0, r1_option2 = 0;
    double r2_option1 = 0, r2_option2 = 0;
    double r1 = 0, r2 = 0;
    int choice1 = 1, choice2 = 1;
};

// Rates and distortion for one embedding and one stage order (a permutation
// of the group's factor indices).  Coordinates of xyuv are (X, Y, U, V).
inline RateDistortionPoint staged_rate_point(const JointPMF& xyuv, const Embedding& emb,
                                             const std::vector<int>& stage_order,
                                             StagePolicy policy, const DistortionFn& dist,
                                             std::vector<StageBreakdown>* stages = nullptr) {
    if (xyuv.num_vars() != 4) throw input_error("staged_rate_point: expected (X,Y,U,V)");
    const int nx = xyuv.size(0), ny = xyuv.size(1), nu = xyuv.size(2), nv = xyuv.size(3);
    (void)ny;
    if (emb.su.size() != static_cast<std::size_t>(nu) ||
        emb.sv.size() != static_cast<std::size_t>(nv))
        throw input_error("staged_rate_point: embedding does not fit the auxiliary alphabets");
    const auto& g = emb.group;
    const int k = g.num_factors();
    {
        std::vector<char> seen(static_cast<std::size_t>(k), 0);
        if (stage_order.size() != static_cast<std::size_t>(k))
            throw input_error("staged_rate_point: stage order must list every factor once");
        for (int j : stage_order) {
            if (j < 0 || j >= k || seen[static_cast<std::size_t>(j)])
                throw input_error("staged_rate_point: stage order must list every factor once");
            seen[static_cast<std::size_t>(j)] = 1;
        }
    }

    // Digit tables.
    std::vector<GroupElement> su_dig, sv_dig;
    su_dig.reserve(static_cast<std::size_t>(nu));
    sv_dig.reserve(static_cast<std::size_t>(nv));
    for (int u = 0; u < nu; ++u) su_dig.push_back(g.unrank(emb.su[static_cast<std::size_t>(u)]));
    for (int v = 0; v < nv; ++v) sv_dig.push_back(g.unrank(emb.sv[static_cast<std::size_t>(v)]));
    std::vector<std::int64_t> sum_rank(static_cast<std::size_t>(nu) * nv);
    std::vector<GroupElement> sum_dig(static_cast<std::size_t>(nu) * nv);
    for (int u = 0; u < nu; ++u)
        for (int v = 0; v < nv; ++v) {
            const std::int64_t s =
                g.add_ranks(emb.su[static_cast<std::size_t>(u)], emb.sv[static_cast<std::size_t>(v)]);
            sum_rank[static_cast<std::size_t>(u) * nv + v] = s;
            sum_dig[static_cast<std::size_t>(u) * nv + v] = g.unrank(s);
        }

    const auto& flat = xyuv.flat();

    // Distortion and the mass seen by each (u, v) cell.
    RateDistortionPoint out;
    std::vector<double> uv_mass(static_cast<std::size_t>(nu) * nv, 0.0);
    for (std::size_t cell = 0; cell < flat.size(); ++cell) {
        if (flat[cell] == 0) continue;
        const int x = xyuv.coord_of(cell, 0), y = xyuv.coord_of(cell, 1);
        const int u = xyuv.coord_of(cell, 2), v = xyuv.coord_of(cell, 3);
        const std::size_t uv = static_cast<std::size_t>(u) * nv + v;
        uv_mass[uv] += flat[cell];
        out.d += flat[cell] *
                 dist(x, y, emb.decode[static_cast<std::size_t>(sum_rank[uv])]);
    }

    // A reconstruction that is constant over the supported cells needs no
    // communication at all.
    {
        bool constant = true;
        std::int64_t seen_val = 0;
        bool seen_any = false;
        for (std::size_t uv = 0; uv < uv_mass.size(); ++uv) {
            if (uv_mass[uv] == 0) continue;
            const std::int64_t val = emb.decode[static_cast<std::size_t>(sum_rank[uv])];
            if (!seen_any) {
                seen_any = true;
                seen_val = val;
            } else if (val != seen_val) {
                constant = false;
                break;
            }
        }
        if (constant) {
            if (stages)
                for (int j : stage_order) {
                    StageBreakdown sb;
                    sb.digit = j;
                    stages->push_back(sb);
                }
            return out;
        }
    }

    std::vector<int> prev;  // factor indices of earlier stages
    for (std::size_t b = 0; b < stage_order.size(); ++b) {
        const int j = stage_order[b];
        const auto fac = g.factors()[static_cast<std::size_t>(j)];
        const std::int64_t m = fac.modulus();

        // Composite label sizes for the conditioning variables.
        std::int64_t z_side = 1, u_side = 1, v_side = 1;
        for (int l : prev) {
            const std::int64_t ml = g.factors()[static_cast<std::size_t>(l)].modulus();
            z_side *= ml;
            u_side *= ml;
            v_side *= ml;
        }
        const std::size_t zs = static_cast<std::size_t>(z_side);
        const std::size_t ucs = static_cast<std::size_t>(u_side) * nx;
        const std::size_t vcs = static_cast<std::size_t>(v_side) * ny;

        std::vector<double> zj_zprev(static_cast<std::size_t>(m) * zs, 0.0);
        std::vector<double> uj_zprev(static_cast<std::size_t>(m) * zs, 0.0);
        std::vector<double> vj_zprev(static_cast<std::size_t>(m) * zs, 0.0);
        std::vector<double> uj_xuprev(static_cast<std::size_t>(m) * ucs, 0.0);
        std::vector<double> vj_yvprev(static_cast<std::size_t>(m) * vcs, 0.0);

        auto label = [&](const GroupElement& e) {
            std::int64_t lab = 0;
            for (int l : prev)
                lab = lab * g.factors()[static_cast<std::size_t>(l)].modulus() +
                      e[static_cast<std::size_t>(l)];
            return lab;
        };

        for (std::size_t cell = 0; cell < flat.size(); ++cell) {
            if (flat[cell] == 0) continue;
            const int x = xyuv.coord_of(cell, 0), y = xyuv.coord_of(cell, 1);
            const int u = xyuv.coord_of(cell, 2), v = xyuv.coord_of(cell, 3);
            const std::size_t uv = static_cast<std::size_t>(u) * nv + v;
            const std::int64_t zlab = label(sum_dig[uv]);
            const std::int64_t zd = sum_dig[uv][static_cast<std::size_t>(j)];
            const std::int64_t ud = su_dig[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)];
            const std::int64_t vd = sv_dig[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)];
            zj_zprev[static_cast<std::size_t>(zd) * zs + static_cast<std::size_t>(zlab)] += flat[cell];
            uj_zprev[static_cast<std::size_t>(ud) * zs + static_cast<std::size_t>(zlab)] += flat[cell];
            vj_zprev[static_cast<std::size_t>(vd) * zs + static_cast<std::size_t>(zlab)] += flat[cell];
            const std::int64_t ulab = label(su_dig[static_cast<std::size_t>(u)]);
            const std::int64_t vlab = label(sv_dig[static_cast<std::size_t>(v)]);
            uj_xuprev[static_cast<std::size_t>(ud) * ucs +
                      static_cast<std::size_t>(x) * static_cast<std::size_t>(u_side) +
                      static_cast<std::size_t>(ulab)] += flat[cell];
            vj_yvprev[static_cast<std::size_t>(vd) * vcs +
                      static_cast<std::size_t>(y) * static_cast<std::size_t>(v_side) +
                      static_cast<std::size_t>(vlab)] += flat[cell];
        }

        const double chan_sum = coset_channel_rate(zj_zprev, fac.p, fac.r, zs);
        const double chan_u = coset_channel_rate(uj_zprev, fac.p, fac.r, zs);
        const double chan_v = coset_channel_rate(vj_zprev, fac.p, fac.r, zs);
        const double src_u = covering_source_rate(uj_xuprev, fac.p, fac.r, ucs);
        const double src_v = covering_source_rate(vj_yvprev, fac.p, fac.r, vcs);

        StageBreakdown sb;
        sb.digit = j;
        sb.r1_option1 = std::max(0.0, chan_sum - src_u);
        sb.r1_option2 = std::max(0.0, chan_u - src_u);
        sb.r2_option1 = std::max(0.0, chan_sum - src_v);
        sb.r2_option2 = std::max(0.0, chan_v - src_v);
        if (policy.mode == StagePolicy::kMin) {
            sb.choice1 = sb.r1_option2 < sb.r1_option1 - kTieTol ? 2 : 1;
            sb.choice2 = sb.r2_option2 < sb.r2_option1 - kTieTol ? 2 : 1;
        } else {
            // Forced sum-digit encoding; an encoder whose own digit is
            // constant already contributes nothing through option 2.
            sb.choice1 = detail::digit_is_constant(uj_zprev, zs) ? 2 : 1;
            sb.choice2 = detail::digit_is_constant(vj_zprev, zs) ? 2 : 1;
        }
        sb.r1 = sb.choice1 == 1 ? sb.r1_option1 : sb.r1_option2;
        sb.r2 = sb.choice2 == 1 ? sb.r2_option1 : sb.r2_option2;
        out.r1 += sb.r1;
        out.r2 += sb.r2;
        if (stages) stages->push_back(sb);
        prev.push_back(j);
    }
    return out;
}

// Smallest-sum-rate stage order; ties keep the earliest order visited.
// Guarded to groups of at most 6 factors.
inline RateDistortionPoint best_staged_rate_point(const JointPMF& xyuv, const Embedding& emb,
                                                  StagePolicy policy, const DistortionFn& dist,
                                                  std::vector<int>* best_order = nullptr) {
    const int k = emb.group.num_factors();
    if (k > 6) throw resource_error("best_staged_rate_point: more than 6 factors");
    std::vector<int> order(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) order[static_cast<std::size_t>(j)] = j;
    if (k == 0) {
        // Trivial group: nothing to convey.
        return staged_rate_point(xyuv, emb, order, policy, dist);
    }
    bool have = false;
    RateDistortionPoint best;
    do {
        const RateDistortionPoint pt = staged_rate_point(xyuv, emb, order, policy, dist);
        if (!have || pt.sum() < best.sum() - kTieTol) {
            have = true;
            best = pt;
            if (best_order) *best_order = order;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

// ---------------------------------------------------------------------------
// Lossless helpers.

// (X, Y) extended with deterministic copies U = X, V = Y.
inline JointPMF lossless_pair_joint(const JointPMF& xy) {
    if (xy.num_vars() != 2) throw input_error("lossless_pair_joint: expected (X,Y)");
    return xy.append_function(xy.size(0), [](const std::vector<int>& idx) { return idx[0]; })
        .append_function(xy.size(1), [](const std::vector<int>& idx) { return idx[1]; });
}

// 0/1 mismatch against a fixed bivariate function of the sources.
inline DistortionFn function_mismatch_distortion(FunctionTable f) {
    return [f = std::move(f)](int x, int y, std::int64_t zhat) {
        return zhat == f.at(x, y) ? 0.0 : 1.0;
    };
}

// Best lossless sum rate for computing f(X, Y): minimum over the given
// groups, their embeddings of f, and all stage orders.  Every embedding
// reconstructs f exactly, so the distortion is zero by construction.
inline double best_lossless_sum_rate(const JointPMF& xy, const FunctionTable& f,
                                     const std::vector<AbelianGroup>& groups,
                                     StagePolicy policy = {}) {
    const JointPMF xyuv = lossless_pair_joint(xy);
    const std::vector<double> cell_mass = xy.flat();
    const DistortionFn dist = function_mismatch_distortion(f);
    double best = -1;
    for (const auto& g : groups) {
        for (const auto& emb : find_embeddings(f, g, cell_mass)) {
            const RateDistortionPoint pt = best_staged_rate_point(xyuv, emb, policy, dist);
            if (best < 0 || pt.sum() < best) best = pt.sum();
        }
    }
    if (best < 0) throw input_error("best_lossless_sum_rate: no embedding in the given groups");
    return best;
}

struct LosslessGroupRate {
    double rate = 0;
    // True when the quotient entropies are large enough that the group scheme
    // attains H(X) itself: H([X]_i) >= (i/r) H(X) for all 0 < i < r.
    bool attains_entropy = true;
};

// Rate needed by a single kernel-coded encoder to convey X on Z_{p^r}
// losslessly: max over 0 <= i < r of (r/(r-i)) (H(X) - H([X]_i)).
inline LosslessGroupRate lossless_group_rate(const std::vector<double>& masses,
                                             std::int64_t p, int r) {
    if (!is_nonredundant(masses, p, r))
        throw input_error("lossless_group_rate: redundant source, relabel onto Z_{p^(r-i)}");
    LosslessGroupRate out;
    out.rate = coset_channel_rate(masses, p, r, 1);
    const double h = entropy_of(masses);
    for (int i = 1; i < r; ++i) {
        std::int64_t pi = 1;
        for (int t = 0; t < i; ++t) pi *= p;
        std::vector<double> folded(static_cast<std::size_t>(pi), 0.0);
        for (std::size_t z = 0; z < masses.size(); ++z)
            folded[static_cast<std::size_t>(coset_label(p, r, i, static_cast<std::int64_t>(z)))] +=
                masses[z];
        if (entropy_of(folded) < static_cast<double>(i) / r * h - 1e-12) {
            out.attains_entropy = false;
            break;
        }
    }
    return out;
}

// Smallest sum rate for losslessly computing the modulo-2 sum of a binary
// pair: min(2 H(X xor Y), H(X, Y)).
inline double korner_marton_sum_rate(const JointPMF& xy) {
    if (xy.num_vars() != 2 || xy.size(0) != 2 || xy.size(1) != 2)
        throw input_error("korner_marton_sum_rate: expected a binary pair");
    const double flip = xy.at({0, 1}) + xy.at({1, 0});
    return std::min(2 * binary_entropy(flip), entropy(xy));
}

// ---------------------------------------------------------------------------
// Closed form for lossy modulo-2 sum reconstruction of a symmetric binary
// pair through independent additive binary test channels.
//
// Sources: P(X=Y) = q, P(X != Y) = p = 1 - q, symmetric marginals.  Channels:
// U = X xor Q1, V = Y xor Q2 with P(Qi = 0) = qi.  The optimal reconstruction
// of X xor Y from (U, V) is one of four functions of W = U xor V, decided by
// comparing error masses; the sum-digit scheme over Z2 then prices W.

struct LossyXorPoint {
    double r1 = 0, r2 = 0, d = 0;
    enum Case { kZero, kSum, kComplement, kOne } reconstruction = kZero;
};

inline LossyXorPoint lossy_xor_closed_form(double p, double q1, double q2) {
    if (!(p >= 0 && p <= 1 && q1 >= 0 && q1 <= 1 && q2 >= 0 && q2 <= 1))
        throw input_error("lossy_xor_closed_form: parameters must lie in [0,1]");
    const double q = 1 - p;
    const double alpha = q1 * q2 + (1 - q1) * (1 - q2);
    const double beta = 1 - alpha;
    // G(w) = 0 unless outputting 1 is strictly better than the tie slack.
    const bool g0_is_zero = !(q * alpha < p * beta - kTieTol);
    const bool g1_is_zero = !(q * beta < p * alpha - kTieTol);
    LossyXorPoint out;
    if (g0_is_zero && g1_is_zero) {
        out.reconstruction = LossyXorPoint::kZero;
        out.d = p;
    } else if (!g0_is_zero && !g1_is_zero) {
        out.reconstruction = LossyXorPoint::kOne;
        out.d = q;
    } else if (g0_is_zero) {
        out.reconstruction = LossyXorPoint::kSum;
        out.d = beta;
        out.r1 = binary_entropy(q * alpha + p * beta) - binary_entropy(q1);
        out.r2 = binary_entropy(q * alpha + p * beta) - binary_entropy(q2);
    } else {
        out.reconstruction = LossyXorPoint::kComplement;
        out.d = alpha;
        out.r1 = binary_entropy(q * alpha + p * beta) - binary_entropy(q1);
        out.r2 = binary_entropy(q * alpha + p * beta) - binary_entropy(q2);
    }
    return out;
}

// ---------------------------------------------------------------------------
// The defining optimization behind the channel-coding bound: over all ways to
// add a noise digit W confined to the subgroup p^i Z_{p^r} while preserving
// the conditional law of the sum, the largest conditional entropy H(W | Z, S)
// equals H(Z|S) - H([Z]_i | S).

struct CosetEntropyResult {
    double value = 0;
    // P(z, w, s) at the maximizer, indexed (z * p^r + w) * s_size + s; w
    // ranges over all of Z_{p^r} but only multiples of p^i carry mass.
    std::vector<double> joint;
};

inline CosetEntropyResult max_coset_conditional_entropy(const std::vector<double>& zs,
                                                        std::int64_t p, int r, int i,
                                                        std::size_t s_size) {
    const std::int64_t m = PrimaryCyclic{p, r}.modulus();
    if (zs.size() != static_cast<std::size_t>(m) * s_size)
        throw input_error("max_coset_conditional_entropy: size mismatch");
    if (i < 0 || i > r) throw input_error("max_coset_conditional_entropy: i out of [0,r]");
    std::int64_t pi = 1;
    for (int t = 0; t < i; ++t) pi *= p;

    // Closed-form value.
    const double h_z = detail::conditional_entropy_flat(zs, s_size);
    std::vector<double> lab(static_cast<std::size_t>(pi) * s_size, 0.0);
    for (std::int64_t z = 0; z < m; ++z)
        for (std::size_t s = 0; s < s_size; ++s)
            lab[static_cast<std::size_t>(z % pi) * s_size + s] +=
                zs[static_cast<std::size_t>(z) * s_size + s];
    const double h_lab = detail::conditional_entropy_flat(lab, s_size);

    CosetEntropyResult out;
    out.value = h_z - h_lab;
    // Maximizer: inside each coset z + p^i Z (given s), the noise w moves z
    // to z + w with probability proportional to P(z + w | s).
    out.joint.assign(static_cast<std::size_t>(m) * m * s_size, 0.0);
    for (std::int64_t z = 0; z < m; ++z)
        for (std::size_t s = 0; s < s_size; ++s) {
            const double pz = zs[static_cast<std::size_t>(z) * s_size + s];
            if (pz == 0) continue;
            const double coset_mass = lab[static_cast<std::size_t>(z % pi) * s_size + s];
            for (std::int64_t w = 0; w < m; w += pi) {
                const std::int64_t z2 = (z + w) % m;
                out.joint[(static_cast<std::size_t>(z) * m + static_cast<std::size_t>(w)) * s_size + s] +=
                    pz * zs[static_cast<std::size_t>(z2) * s_size + s] / coset_mass;
            }
        }
    return out;
}

}  // namespace grouprd
