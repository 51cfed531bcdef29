#pragma once

// Embedding a bivariate function into an abelian group: injective relabelings
// su, sv of the two argument alphabets such that the function factors as a
// fixed decoding map applied to the group sum,
//
//     decode(su(u) + sv(v)) == f(u, v)   for every cell that carries mass.
//
// The search is a backtracking assignment of su then sv with forward
// propagation of the induced decode-table constraints.  Results are
// deterministic: variables are ordered by decreasing marginal mass (ties by
// index), candidate group elements are tried in ascending rank, and the first
// argument of each side is pinned to 0, which quotients out translation
// equivalence.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "group.hpp"
#include "pmf.hpp"

namespace grouprd {

// Bivariate function table, row major over (u, v).
struct FunctionTable {
    int nu = 0;
    int nv = 0;
    std::vector<std::int64_t> vals;  // nu * nv entries

    std::int64_t at(int u, int v) const {
        return vals[static_cast<std::size_t>(u) * nv + v];
    }

    // Sorted distinct values over the cells selected by mask (all cells when
    // mask is empty).
    std::vector<std::int64_t> image(const std::vector<char>& mask = {}) const {
        std::vector<std::int64_t> img;
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (mask.empty() || mask[i]) img.push_back(vals[i]);
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        return img;
    }
};

// A function embedding: the group, the two injective relabelings (as element
// ranks), and the total decode table with one function value per element.
struct Embedding {
    AbelianGroup group;
    std::vector<std::int64_t> su;
    std::vector<std::int64_t> sv;
    std::vector<std::int64_t> decode;

    std::int64_t apply(int u, int v) const {
        return decode[static_cast<std::size_t>(
            group.add_ranks(su[static_cast<std::size_t>(u)], sv[static_cast<std::size_t>(v)]))];
    }
};

struct EmbedOptions {
    std::size_t max_results = static_cast<std::size_t>(-1);
    std::uint64_t max_nodes = std::uint64_t{1} << 26;  // search guard
    bool pin_translations = true;
};

namespace detail {

struct EmbedSearch {
    const FunctionTable& f;
    const AbelianGroup& g;
    const std::vector<char>& mask;
    const EmbedOptions& opt;
    std::int64_t order;

    std::vector<std::int64_t> su, sv;       // -1 while unassigned
    std::vector<char> su_used, sv_used;     // injectivity bitmaps
    std::vector<std::int64_t> decode;       // -1 while unconstrained
    std::vector<std::int64_t> trail;        // decode slots to undo
    std::vector<int> u_order, v_order;
    std::vector<Embedding> results;
    std::uint64_t nodes = 0;
    std::int64_t fill_value = 0;            // for unconstrained decode slots

    bool masked(int u, int v) const {
        return mask.empty() || mask[static_cast<std::size_t>(u) * f.nv + v];
    }

    // Install decode[su[u] + sv[v]] = f(u, v); false on clash.
    bool constrain(int u, int v) {
        const auto s = static_cast<std::size_t>(
            g.add_ranks(su[static_cast<std::size_t>(u)], sv[static_cast<std::size_t>(v)]));
        const std::int64_t want = f.at(u, v);
        if (decode[s] == want) return true;
        if (decode[s] != -1) return false;
        decode[s] = want;
        trail.push_back(static_cast<std::int64_t>(s));
        return true;
    }

    void undo(std::size_t trail_mark) {
        while (trail.size() > trail_mark) {
            decode[static_cast<std::size_t>(trail.back())] = -1;
            trail.pop_back();
        }
    }

    void emit() {
        Embedding e{g, su, sv, decode};
        for (auto& d : e.decode)
            if (d == -1) d = fill_value;
        results.push_back(std::move(e));
    }

    // Assign u-side variables in order, then v-side.  Constraints activate
    // once both endpoints of a masked cell are known.  Returns true when the
    // result quota is filled and the search should stop.
    bool assign_u(std::size_t next) {
        if (++nodes > opt.max_nodes)
            throw resource_error("find_embeddings: node guard exceeded");
        if (next == u_order.size()) return assign_v(0);
        const int u = u_order[next];
        const std::int64_t hi = (opt.pin_translations && next == 0) ? 1 : order;
        for (std::int64_t x = 0; x < hi; ++x) {
            if (su_used[static_cast<std::size_t>(x)]) continue;
            su[static_cast<std::size_t>(u)] = x;
            su_used[static_cast<std::size_t>(x)] = 1;
            const bool stop = assign_u(next + 1);
            su_used[static_cast<std::size_t>(x)] = 0;
            su[static_cast<std::size_t>(u)] = -1;
            if (stop) return true;
        }
        return false;
    }

    bool assign_v(std::size_t next) {
        if (++nodes > opt.max_nodes)
            throw resource_error("find_embeddings: node guard exceeded");
        if (next == v_order.size()) {
            emit();
            return results.size() >= opt.max_results;
        }
        const int v = v_order[next];
        const std::int64_t hi = (opt.pin_translations && next == 0) ? 1 : order;
        for (std::int64_t x = 0; x < hi; ++x) {
            if (sv_used[static_cast<std::size_t>(x)]) continue;
            sv[static_cast<std::size_t>(v)] = x;
            sv_used[static_cast<std::size_t>(x)] = 1;
            const std::size_t mark = trail.size();
            bool ok = true;
            for (int u : u_order)
                if (masked(u, v) && !constrain(u, v)) {
                    ok = false;
                    break;
                }
            const bool stop = ok && assign_v(next + 1);
            undo(mark);
            sv_used[static_cast<std::size_t>(x)] = 0;
            sv[static_cast<std::size_t>(v)] = -1;
            if (stop) return true;
        }
        return false;
    }
};

}  // namespace detail

// All embeddings of f into g, respecting the positive-mass mask derived from
// cell_mass (uniform when empty).  Deterministic order as described above.
inline std::vector<Embedding> find_embeddings(const FunctionTable& f, const AbelianGroup& g,
                                              const std::vector<double>& cell_mass = {},
                                              const EmbedOptions& opt = {}) {
    if (f.nu < 1 || f.nv < 1) throw input_error("find_embeddings: empty function domain");
    if (!cell_mass.empty() && cell_mass.size() != f.vals.size())
        throw input_error("find_embeddings: cell mass size mismatch");
    const std::int64_t order = g.order();
    if (order < std::max(f.nu, f.nv)) return {};  // injectivity impossible

    std::vector<char> mask;
    if (!cell_mass.empty()) {
        mask.resize(cell_mass.size());
        bool any = false;
        for (std::size_t i = 0; i < cell_mass.size(); ++i) {
            mask[i] = cell_mass[i] > 0;
            any = any || mask[i];
        }
        if (!any) throw input_error("find_embeddings: no cell carries mass");
    }

    // Marginal masses drive the variable order.
    std::vector<double> mu(static_cast<std::size_t>(f.nu), 0.0);
    std::vector<double> mv(static_cast<std::size_t>(f.nv), 0.0);
    for (int u = 0; u < f.nu; ++u)
        for (int v = 0; v < f.nv; ++v) {
            const double w =
                cell_mass.empty() ? 1.0 : cell_mass[static_cast<std::size_t>(u) * f.nv + v];
            mu[static_cast<std::size_t>(u)] += w;
            mv[static_cast<std::size_t>(v)] += w;
        }

    detail::EmbedSearch s{f, g, mask, opt, order};
    s.su.assign(static_cast<std::size_t>(f.nu), -1);
    s.sv.assign(static_cast<std::size_t>(f.nv), -1);
    s.su_used.assign(static_cast<std::size_t>(order), 0);
    s.sv_used.assign(static_cast<std::size_t>(order), 0);
    s.decode.assign(static_cast<std::size_t>(order), -1);
    s.u_order.resize(static_cast<std::size_t>(f.nu));
    s.v_order.resize(static_cast<std::size_t>(f.nv));
    for (int u = 0; u < f.nu; ++u) s.u_order[static_cast<std::size_t>(u)] = u;
    for (int v = 0; v < f.nv; ++v) s.v_order[static_cast<std::size_t>(v)] = v;
    std::stable_sort(s.u_order.begin(), s.u_order.end(),
                     [&](int a, int b) { return mu[static_cast<std::size_t>(a)] > mu[static_cast<std::size_t>(b)]; });
    std::stable_sort(s.v_order.begin(), s.v_order.end(),
                     [&](int a, int b) { return mv[static_cast<std::size_t>(a)] > mv[static_cast<std::size_t>(b)]; });
    const auto img = f.image(mask);
    if (img.empty()) throw input_error("find_embeddings: empty image");
    s.fill_value = img.front();
    s.assign_u(0);
    return std::move(s.results);
}

// Groups a function can possibly embed into: every isomorphism class with
// order between the image size and the product of the two domain sizes.
inline std::vector<AbelianGroup> candidate_groups(const FunctionTable& f,
                                                  const std::vector<double>& cell_mass = {}) {
    std::vector<char> mask;
    if (!cell_mass.empty()) {
        mask.resize(cell_mass.size());
        for (std::size_t i = 0; i < cell_mass.size(); ++i) mask[i] = cell_mass[i] > 0;
    }
    const auto img = f.image(mask);
    if (img.empty()) throw input_error("candidate_groups: empty image");
    const std::int64_t lo = static_cast<std::int64_t>(img.size());
    const std::int64_t hi = static_cast<std::int64_t>(f.nu) * f.nv;
    return enumerate_abelian_groups(lo, std::max(lo, hi));
}

// The always-available embedding into Z_nu + Z_nv in primary form: the first
// alphabet occupies the factors contributed by Z_nu, the second those from
// Z_nv, so the group sum is the pair (u, v) and the decode table reads off
// f(u, v) directly.
inline Embedding default_embedding(const FunctionTable& f) {
    struct Tagged {
        PrimaryCyclic fac;
        int origin;  // 0 = first alphabet, 1 = second
    };
    std::vector<Tagged> tagged;
    const AbelianGroup gu = decompose_cyclic(f.nu);
    const AbelianGroup gv = decompose_cyclic(f.nv);
    for (const auto& fac : gu.factors()) tagged.push_back({fac, 0});
    for (const auto& fac : gv.factors()) tagged.push_back({fac, 1});
    std::stable_sort(tagged.begin(), tagged.end(), [](const Tagged& a, const Tagged& b) {
        if (a.fac.p != b.fac.p) return a.fac.p < b.fac.p;
        return a.fac.r > b.fac.r;
    });
    std::vector<PrimaryCyclic> facs;
    for (const auto& t : tagged) facs.push_back(t.fac);
    AbelianGroup g = AbelianGroup::from_factors(facs);

    auto embed_side = [&](int value, int origin) {
        GroupElement e = g.zero();
        for (std::size_t i = 0; i < tagged.size(); ++i)
            if (tagged[i].origin == origin)
                e[i] = value % tagged[i].fac.modulus();
        return g.rank(e);
    };

    Embedding emb;
    emb.group = g;
    for (int u = 0; u < f.nu; ++u) emb.su.push_back(embed_side(u, 0));
    for (int v = 0; v < f.nv; ++v) emb.sv.push_back(embed_side(v, 1));
    const auto img = f.image();
    emb.decode.assign(static_cast<std::size_t>(g.order()), img.empty() ? 0 : img.front());
    for (int u = 0; u < f.nu; ++u)
        for (int v = 0; v < f.nv; ++v)
            emb.decode[static_cast<std::size_t>(g.add_ranks(emb.su[static_cast<std::size_t>(u)],
                                                            emb.sv[static_cast<std::size_t>(v)]))] =
                f.at(u, v);
    return emb;
}

// Joint law of the sources together with the per-factor digits of the
// embedded auxiliaries.  Coordinates: X, Y, then one digit of U-bar per group
// factor, then the V-bar digits, then the digits of Z-bar = U-bar + V-bar.
// The raw U, V coordinates are dropped; su/sv injectivity keeps them
// recoverable from the digit vectors.
struct DigitView {
    AbelianGroup group;
    JointPMF joint;

    int u_digit(int i) const { return 2 + i; }
    int v_digit(int i) const { return 2 + group.num_factors() + i; }
    int z_digit(int i) const { return 2 + 2 * group.num_factors() + i; }
};

inline DigitView digit_view(const Embedding& emb, const JointPMF& xyuv) {
    if (xyuv.num_vars() != 4) throw input_error("digit_view: expected (X,Y,U,V)");
    const int nu = xyuv.size(2), nv = xyuv.size(3);
    if (emb.su.size() != static_cast<std::size_t>(nu) ||
        emb.sv.size() != static_cast<std::size_t>(nv))
        throw input_error("digit_view: embedding does not fit the auxiliary alphabets");
    const auto& g = emb.group;
    const int k = g.num_factors();

    std::vector<GroupElement> su_dig, sv_dig, sz_dig;
    for (int u = 0; u < nu; ++u) su_dig.push_back(g.unrank(emb.su[static_cast<std::size_t>(u)]));
    for (int v = 0; v < nv; ++v) sv_dig.push_back(g.unrank(emb.sv[static_cast<std::size_t>(v)]));
    for (int u = 0; u < nu; ++u)
        for (int v = 0; v < nv; ++v)
            sz_dig.push_back(g.unrank(g.add_ranks(emb.su[static_cast<std::size_t>(u)],
                                                  emb.sv[static_cast<std::size_t>(v)])));

    JointPMF cur = xyuv;
    auto append_digit = [&](int factor, int side) {
        const int m = static_cast<int>(g.factors()[static_cast<std::size_t>(factor)].modulus());
        cur = cur.append_function(m, [&, factor, side](const std::vector<int>& idx) {
            const std::size_t u = static_cast<std::size_t>(idx[2]);
            const std::size_t v = static_cast<std::size_t>(idx[3]);
            const GroupElement& e = side == 0   ? su_dig[u]
                                    : side == 1 ? sv_dig[v]
                                                : sz_dig[u * static_cast<std::size_t>(nv) + v];
            return static_cast<int>(e[static_cast<std::size_t>(factor)]);
        });
    };
    for (int side = 0; side < 3; ++side)
        for (int i = 0; i < k; ++i) append_digit(i, side);

    DigitView view;
    view.group = g;
    std::vector<int> keep = {0, 1};
    for (int c = 0; c < 3 * k; ++c) keep.push_back(4 + c);
    view.joint = cur.marginal(keep);
    return view;
}

}  // namespace grouprd
