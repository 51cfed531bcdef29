#pragma once

// Rate-distortion region sweeps.  Three engines share the channel-grid
// machinery: the staged group-coding region (union over test channels,
// candidate groups, embeddings, stage orders, and per-stage options), the
// classical two-terminal inner region driven by mutual informations, and
// point-to-point searches for single-source rates over a group alphabet.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "embed.hpp"
#include "envelope.hpp"
#include "rates.hpp"

namespace grouprd {

inline constexpr std::size_t kGridGuard = std::size_t{1} << 22;

// All probability vectors of the given dimension whose entries are multiples
// of step.  step must divide 1 to within 1e-9.
inline std::vector<std::vector<double>> simplex_grid(int dims, double step) {
    if (dims < 1) throw input_error("simplex_grid: dimension must be positive");
    if (!(step > 0 && step <= 1)) throw input_error("simplex_grid: step outside (0,1]");
    const long long units = std::llround(1.0 / step);
    if (std::abs(units * step - 1.0) > 1e-9)
        throw input_error("simplex_grid: step must divide 1");
    std::vector<std::vector<double>> out;
    std::vector<long long> cur(static_cast<std::size_t>(dims), 0);
    const std::function<void(int, long long)> rec = [&](int pos, long long left) {
        if (pos == dims - 1) {
            cur[static_cast<std::size_t>(pos)] = left;
            std::vector<double> row(static_cast<std::size_t>(dims));
            for (int i = 0; i < dims; ++i)
                row[static_cast<std::size_t>(i)] =
                    static_cast<double>(cur[static_cast<std::size_t>(i)]) / static_cast<double>(units);
            out.push_back(std::move(row));
            return;
        }
        for (long long take = 0; take <= left; ++take) {
            cur[static_cast<std::size_t>(pos)] = take;
            rec(pos + 1, left - take);
        }
    };
    rec(0, units);
    return out;
}

// Probability vectors on the 1/fine_units grid within L-infinity distance
// radius of center.  Enumeration aborts (returning empty) once max_rows rows
// have been produced, which callers treat as "skip the refinement".
inline std::vector<std::vector<double>> simplex_grid_near(const std::vector<double>& center,
                                                          long long fine_units, double radius,
                                                          std::size_t max_rows) {
    const int dims = static_cast<int>(center.size());
    std::vector<long long> lo(center.size()), hi(center.size());
    for (std::size_t i = 0; i < center.size(); ++i) {
        const long long c = std::llround(center[i] * static_cast<double>(fine_units));
        const long long rad = std::llround(radius * static_cast<double>(fine_units));
        lo[i] = std::max<long long>(0, c - rad);
        hi[i] = std::min(fine_units, c + rad);
    }
    std::vector<std::vector<double>> out;
    std::vector<long long> cur(center.size(), 0);
    bool overflow = false;
    const std::function<void(int, long long)> rec = [&](int pos, long long left) {
        if (overflow) return;
        // Prune branches that cannot reach the required total.
        long long min_rest = 0, max_rest = 0;
        for (int i = pos; i < dims; ++i) {
            min_rest += lo[static_cast<std::size_t>(i)];
            max_rest += hi[static_cast<std::size_t>(i)];
        }
        if (left < min_rest || left > max_rest) return;
        if (pos == dims - 1) {
            cur[static_cast<std::size_t>(pos)] = left;
            if (out.size() >= max_rows) {
                overflow = true;
                return;
            }
            std::vector<double> row(center.size());
            for (std::size_t i = 0; i < center.size(); ++i)
                row[i] = static_cast<double>(cur[i]) / static_cast<double>(fine_units);
            out.push_back(std::move(row));
            return;
        }
        for (long long take = lo[static_cast<std::size_t>(pos)];
             take <= hi[static_cast<std::size_t>(pos)]; ++take) {
            cur[static_cast<std::size_t>(pos)] = take;
            rec(pos + 1, left - take);
        }
    };
    rec(0, fine_units);
    if (overflow) out.clear();
    return out;
}

namespace detail {

inline std::string format_prob(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string format_rows(const std::vector<const std::vector<double>*>& rows) {
    std::string s;
    for (const auto* row : rows) {
        s += '[';
        for (std::size_t i = 0; i < row->size(); ++i) {
            if (i) s += ' ';
            s += format_prob((*row)[i]);
        }
        s += ']';
    }
    return s;
}

// Cartesian product over per-symbol row choices; fn sees one pointer per
// conditioning symbol.  The total count is guarded up front.
inline void for_each_row_choice(
    const std::vector<std::vector<std::vector<double>>>& choices,
    const std::function<void(const std::vector<const std::vector<double>*>&)>& fn) {
    std::size_t total = 1;
    for (const auto& c : choices) {
        if (c.empty()) return;
        if (total > kGridGuard / c.size()) throw resource_error("channel grid exceeds guard");
        total *= c.size();
    }
    std::vector<std::size_t> odo(choices.size(), 0);
    std::vector<const std::vector<double>*> rows(choices.size());
    for (;;) {
        for (std::size_t i = 0; i < choices.size(); ++i) rows[i] = &choices[i][odo[i]];
        fn(rows);
        std::size_t i = choices.size();
        while (i > 0) {
            --i;
            if (++odo[i] < choices[i].size()) break;
            odo[i] = 0;
            if (i == 0) return;
        }
    }
}

inline ConditionalPMF rows_to_channel(int to_size,
                                      const std::vector<const std::vector<double>*>& rows) {
    std::vector<double> flat;
    flat.reserve(rows.size() * static_cast<std::size_t>(to_size));
    for (const auto* row : rows) flat.insert(flat.end(), row->begin(), row->end());
    return ConditionalPMF::from_rows(static_cast<int>(rows.size()), to_size, std::move(flat));
}

}  // namespace detail

struct ChannelPair {
    ConditionalPMF u_given_x;
    ConditionalPMF v_given_y;
    std::string id;
};

// All pairs of row-stochastic test channels with rows on the step grid, in a
// deterministic order; ids carry the exact row values.
inline std::vector<ChannelPair> channel_pair_grid(int nx, int ny, int nu, int nv, double step) {
    const auto rows_u = simplex_grid(nu, step);
    const auto rows_v = simplex_grid(nv, step);
    std::vector<std::vector<std::vector<double>>> u_choices(static_cast<std::size_t>(nx), rows_u);
    std::vector<std::vector<std::vector<double>>> v_choices(static_cast<std::size_t>(ny), rows_v);
    std::vector<ConditionalPMF> u_list;
    std::vector<std::string> u_ids;
    detail::for_each_row_choice(u_choices, [&](const std::vector<const std::vector<double>*>& r) {
        u_list.push_back(detail::rows_to_channel(nu, r));
        u_ids.push_back(detail::format_rows(r));
    });
    std::vector<ConditionalPMF> v_list;
    std::vector<std::string> v_ids;
    detail::for_each_row_choice(v_choices, [&](const std::vector<const std::vector<double>*>& r) {
        v_list.push_back(detail::rows_to_channel(nv, r));
        v_ids.push_back(detail::format_rows(r));
    });
    if (!u_list.empty() && v_list.size() > kGridGuard / u_list.size())
        throw resource_error("channel grid exceeds guard");
    std::vector<ChannelPair> out;
    out.reserve(u_list.size() * v_list.size());
    for (std::size_t vi = 0; vi < v_list.size(); ++vi)
        for (std::size_t ui = 0; ui < u_list.size(); ++ui)
            out.push_back({u_list[ui], v_list[vi], "u=" + u_ids[ui] + " v=" + v_ids[vi]});
    return out;
}

struct RatePointRecord {
    double d = 0, r1 = 0, r2 = 0, rsum = 0;
    std::string group;        // empty for mutual-information records
    std::string permutation;  // stage order digits, e.g. "10"
    std::string options;      // per-stage encoder choices, e.g. "11,21"
    std::string channel_id;
    std::vector<StageBreakdown> stages;  // empty for mutual-information records
};

struct RegionCurve {
    std::vector<RatePointRecord> points;
    std::vector<EnvelopePoint> envelope;

    void build_envelope() {
        if (points.empty()) return;
        std::vector<EnvelopePoint> cloud;
        cloud.reserve(points.size());
        for (const auto& p : points) cloud.push_back({p.d, p.rsum});
        envelope = lower_convex_envelope(std::move(cloud));
    }
};

struct RegionPolicy {
    std::vector<AbelianGroup> groups;  // empty: candidate groups per channel
    StagePolicy stage;
    int max_embeddings_per_group = 64;
    // kChosenOnly emits one record per stage order with the per-stage minimum
    // options; kAllOptionCombos emits every per-encoder option assignment.
    enum Emit { kChosenOnly, kAllOptionCombos };
    Emit emit = kChosenOnly;
};

namespace detail {

inline std::string permutation_string(const std::vector<int>& order) {
    std::string s;
    for (int j : order) s += static_cast<char>('0' + j);
    return s;
}

inline std::string options_string(const std::vector<StageBreakdown>& stages) {
    std::string s;
    for (std::size_t b = 0; b < stages.size(); ++b) {
        if (b) s += ',';
        s += static_cast<char>('0' + stages[b].choice1);
        s += static_cast<char>('0' + stages[b].choice2);
    }
    return s;
}

}  // namespace detail

// Union of staged-coding rate points across test channels, groups that embed
// the optimal reconstruction, embeddings, and stage orders.
inline RegionCurve theorem1_region(const JointPMF& xy, const std::vector<ChannelPair>& channels,
                                   const std::vector<std::int64_t>& zhat_values,
                                   const DistortionFn& dist, const RegionPolicy& policy = {}) {
    if (xy.num_vars() != 2) throw input_error("theorem1_region: source law must have two coordinates");
    RegionCurve out;
    // Embedding searches depend only on the reconstruction table and its
    // support mask, so cache them across channels.
    std::map<std::string, std::vector<Embedding>> cache;
    for (const auto& ch : channels) {
        const JointPMF xyuv = compose_markov(xy, ch.u_given_x, ch.v_given_y);
        const ReconstructionResult rec = optimal_reconstruction(xyuv, zhat_values, dist);

        const std::vector<AbelianGroup> groups =
            policy.groups.empty() ? candidate_groups(rec.table, rec.mass) : policy.groups;
        for (const auto& g : groups) {
            std::string key = g.name() + "|";
            for (std::size_t i = 0; i < rec.table.vals.size(); ++i) {
                key += rec.mass[i] > 0 ? std::to_string(rec.table.vals[i]) : std::string("_");
                key += ',';
            }
            auto it = cache.find(key);
            if (it == cache.end()) {
                EmbedOptions opt;
                opt.max_results = policy.max_embeddings_per_group;
                it = cache.emplace(key, find_embeddings(rec.table, g, rec.mass, opt)).first;
            }
            for (const auto& emb : it->second) {
                const int k = emb.group.num_factors();
                if (k > 6) throw resource_error("theorem1_region: more than 6 digit stages");
                std::vector<int> order(static_cast<std::size_t>(k));
                for (int j = 0; j < k; ++j) order[static_cast<std::size_t>(j)] = j;
                do {
                    std::vector<StageBreakdown> stages;
                    const RateDistortionPoint pt =
                        staged_rate_point(xyuv, emb, order, policy.stage, dist, &stages);
                    if (policy.emit == RegionPolicy::kChosenOnly) {
                        RatePointRecord rp;
                        rp.d = pt.d;
                        rp.r1 = pt.r1;
                        rp.r2 = pt.r2;
                        rp.rsum = pt.sum();
                        rp.group = g.name();
                        rp.permutation = detail::permutation_string(order);
                        rp.options = detail::options_string(stages);
                        rp.channel_id = ch.id;
                        rp.stages = std::move(stages);
                        out.points.push_back(std::move(rp));
                    } else {
                        // Every per-encoder option assignment across stages.
                        const std::size_t combos = std::size_t{1} << (2 * k);
                        for (std::size_t bits = 0; bits < combos; ++bits) {
                            RatePointRecord rp;
                            rp.d = pt.d;
                            std::string opts;
                            for (int b = 0; b < k; ++b) {
                                const bool one_opt2 = bits >> (2 * b) & 1;
                                const bool two_opt2 = bits >> (2 * b + 1) & 1;
                                const auto& sb = stages[static_cast<std::size_t>(b)];
                                rp.r1 += one_opt2 ? sb.r1_option2 : sb.r1_option1;
                                rp.r2 += two_opt2 ? sb.r2_option2 : sb.r2_option1;
                                if (b) opts += ',';
                                opts += one_opt2 ? '2' : '1';
                                opts += two_opt2 ? '2' : '1';
                            }
                            rp.rsum = rp.r1 + rp.r2;
                            rp.group = g.name();
                            rp.permutation = detail::permutation_string(order);
                            rp.options = opts;
                            rp.channel_id = ch.id;
                            rp.stages = stages;
                            out.points.push_back(std::move(rp));
                        }
                    }
                } while (std::next_permutation(order.begin(), order.end()));
            }
        }
    }
    out.build_envelope();
    return out;
}

// Classical inner region: per channel pair the corner constraints
// R1 >= I(X;U|V), R2 >= I(Y;V|U), R1+R2 >= I(XY;UV) with the distortion of
// the optimal reconstruction.
inline RegionCurve berger_tung_region(const JointPMF& xy,
                                      const std::vector<std::int64_t>& zhat_values,
                                      const DistortionFn& dist, int nu, int nv, double step) {
    if (xy.num_vars() != 2)
        throw input_error("berger_tung_region: source law must have two coordinates");
    if (nu < 1 || nv < 1) throw input_error("berger_tung_region: auxiliary sizes must be positive");
    if (!(step > 0 && step <= 0.5)) throw input_error("berger_tung_region: step outside (0,0.5]");
    RegionCurve out;
    for (const auto& ch : channel_pair_grid(xy.size(0), xy.size(1), nu, nv, step)) {
        const JointPMF xyuv = compose_markov(xy, ch.u_given_x, ch.v_given_y);
        const ReconstructionResult rec = optimal_reconstruction(xyuv, zhat_values, dist);
        RatePointRecord rp;
        rp.d = rec.distortion;
        rp.r1 = mutual_information(xyuv, {0}, {2}, {3});
        rp.r2 = mutual_information(xyuv, {1}, {3}, {2});
        rp.rsum = mutual_information(xyuv, {0, 1}, {2, 3});
        rp.channel_id = ch.id;
        out.points.push_back(std::move(rp));
    }
    out.build_envelope();
    return out;
}

// ---------------------------------------------------------------------------
// Point-to-point searches: a single source X quantized through a test channel
// onto a group alphabet, rate charged by the kernel-coding formulas.

struct PointRateResult {
    double rate = 0;
    bool feasible = false;
    double distortion = 0;  // achieved by the minimizing channel
    ConditionalPMF channel;
};

namespace detail {

// Minimizes objective(rows) over all channels whose rows sit on the coarse
// grid, then refines once on the 0.01 grid around the incumbent.  objective
// returns (value, distortion); channels with distortion above the target are
// skipped.
struct ChannelObjective {
    double value = 0;
    double distortion = 0;
};

inline PointRateResult minimize_over_channels(
    int nx, int to_size, double step, double d_target,
    const std::function<ChannelObjective(const std::vector<const std::vector<double>*>&)>& eval) {
    PointRateResult best;
    std::vector<std::vector<double>> incumbent_rows;
    auto consider = [&](const std::vector<const std::vector<double>*>& rows) {
        const ChannelObjective obj = eval(rows);
        if (obj.distortion > d_target + 1e-12) return;
        if (!best.feasible || obj.value < best.rate - kTieTol) {
            best.feasible = true;
            best.rate = obj.value;
            best.distortion = obj.distortion;
            incumbent_rows.clear();
            for (const auto* r : rows) incumbent_rows.push_back(*r);
        }
    };
    const auto coarse = simplex_grid(to_size, step);
    std::vector<std::vector<std::vector<double>>> choices(static_cast<std::size_t>(nx), coarse);
    detail::for_each_row_choice(choices, consider);
    if (best.feasible && step > 0.01 + 1e-12) {
        constexpr long long kFineUnits = 100;
        constexpr std::size_t kNearCap = 5000;
        std::vector<std::vector<std::vector<double>>> near(static_cast<std::size_t>(nx));
        bool refine = true;
        for (int x = 0; x < nx; ++x) {
            near[static_cast<std::size_t>(x)] = simplex_grid_near(
                incumbent_rows[static_cast<std::size_t>(x)], kFineUnits, step, kNearCap);
            if (near[static_cast<std::size_t>(x)].empty()) refine = false;
        }
        if (refine) detail::for_each_row_choice(near, consider);
    }
    if (best.feasible) {
        std::vector<double> flat;
        for (const auto& r : incumbent_rows) flat.insert(flat.end(), r.begin(), r.end());
        best.channel = ConditionalPMF::from_rows(nx, to_size, std::move(flat));
    }
    return best;
}

}  // namespace detail

// Best single-encoder rate for conveying X within distortion d_target using a
// kernel code over the group: for Z_{p^r} the per-digit formula
// log2 p^r - min(H(U|X), r |H(U|X) - log2 p^{r-1}|+), and for a product of
// distinct primes log2 |A| - H(U|X).  The auxiliary U ranges over the whole
// group; dist receives its rank.
inline PointRateResult lossy_group_rate(const std::vector<double>& px,
                                        const std::function<double(int, std::int64_t)>& dist,
                                        double d_target, const AbelianGroup& g, double step) {
    const int nx = static_cast<int>(px.size());
    if (nx < 1) throw input_error("lossy_group_rate: empty source");
    const int order = static_cast<int>(g.order());
    bool primary = g.num_factors() == 1;
    if (!primary) {
        for (std::size_t i = 0; i < g.factors().size(); ++i) {
            if (g.factors()[i].r != 1)
                throw input_error("lossy_group_rate: group must be primary cyclic or square-free");
            for (std::size_t j = i + 1; j < g.factors().size(); ++j)
                if (g.factors()[i].p == g.factors()[j].p)
                    throw input_error("lossy_group_rate: repeated prime in square-free group");
        }
    }
    const double log_order = std::log2(static_cast<double>(order));
    const double log_sub =
        primary ? std::log2(static_cast<double>(order) / static_cast<double>(g.factors()[0].p)) : 0;
    const int r = primary ? g.factors()[0].r : 1;

    return detail::minimize_over_channels(
        nx, order, step, d_target,
        [&](const std::vector<const std::vector<double>*>& rows) {
            detail::ChannelObjective obj;
            double cond = 0;
            for (int x = 0; x < nx; ++x) {
                const auto& row = *rows[static_cast<std::size_t>(x)];
                if (px[static_cast<std::size_t>(x)] == 0) continue;
                cond += px[static_cast<std::size_t>(x)] * entropy_of(row);
                for (int u = 0; u < order; ++u)
                    obj.distortion += px[static_cast<std::size_t>(x)] *
                                      row[static_cast<std::size_t>(u)] * dist(x, u);
            }
            const double covered =
                primary ? std::min(cond, r * std::max(0.0, cond - log_sub)) : cond;
            obj.value = log_order - covered;
            return obj;
        });
}

struct ShannonRDResult {
    double rate = 0;
    double cond_entropy_bits = 0;    // H(Xhat|X): syndrome share of a nested realization
    double output_entropy_bits = 0;  // H(Xhat): codebook share
    bool feasible = false;
    double distortion = 0;
    ConditionalPMF channel;
};

// Classical rate-distortion search min I(X; Xhat) subject to E d <= D over
// grid test channels, reporting the entropies a nested linear realization
// would allocate to its two layers.
inline ShannonRDResult shannon_rd(const std::vector<double>& px, int nxhat,
                                  const std::function<double(int, std::int64_t)>& dist,
                                  double d_target, double step) {
    const int nx = static_cast<int>(px.size());
    if (nx < 1) throw input_error("shannon_rd: empty source");
    if (nxhat < 1) throw input_error("shannon_rd: empty reconstruction alphabet");
    const PointRateResult inner = detail::minimize_over_channels(
        nx, nxhat, step, d_target,
        [&](const std::vector<const std::vector<double>*>& rows) {
            detail::ChannelObjective obj;
            double cond = 0;
            std::vector<double> marg(static_cast<std::size_t>(nxhat), 0.0);
            for (int x = 0; x < nx; ++x) {
                const auto& row = *rows[static_cast<std::size_t>(x)];
                if (px[static_cast<std::size_t>(x)] == 0) continue;
                cond += px[static_cast<std::size_t>(x)] * entropy_of(row);
                for (int u = 0; u < nxhat; ++u) {
                    marg[static_cast<std::size_t>(u)] +=
                        px[static_cast<std::size_t>(x)] * row[static_cast<std::size_t>(u)];
                    obj.distortion += px[static_cast<std::size_t>(x)] *
                                      row[static_cast<std::size_t>(u)] * dist(x, u);
                }
            }
            obj.value = entropy_of(marg) - cond;
            return obj;
        });
    ShannonRDResult out;
    out.feasible = inner.feasible;
    if (!inner.feasible) return out;
    out.rate = inner.rate;
    out.distortion = inner.distortion;
    out.channel = inner.channel;
    double cond = 0;
    std::vector<double> marg(static_cast<std::size_t>(nxhat), 0.0);
    for (int x = 0; x < nx; ++x) {
        std::vector<double> row(static_cast<std::size_t>(nxhat));
        for (int u = 0; u < nxhat; ++u) row[static_cast<std::size_t>(u)] = out.channel(x, u);
        cond += px[static_cast<std::size_t>(x)] * entropy_of(row);
        for (int u = 0; u < nxhat; ++u)
            marg[static_cast<std::size_t>(u)] += px[static_cast<std::size_t>(x)] * row[static_cast<std::size_t>(u)];
    }
    out.cond_entropy_bits = cond;
    out.output_entropy_bits = entropy_of(marg);
    return out;
}

}  // namespace grouprd
