#pragma once

// Entropy and mutual information in bits.  Conventions: 0 log 0 = 0, and
// conditioning on a zero-probability outcome contributes nothing.

#include <cmath>
#include <vector>

#include "pmf.hpp"

namespace grouprd {

inline double entropy_of(const std::vector<double>& masses) {
    double h = 0;
    for (double v : masses)
        if (v > 0) h -= v * std::log2(v);
    return h;
}

inline double binary_entropy(double x) {
    double h = 0;
    if (x > 0) h -= x * std::log2(x);
    if (x < 1) h -= (1 - x) * std::log2(1 - x);
    return h;
}

// H(coords) for a subset of the joint's coordinates.
inline double entropy(const JointPMF& pmf, const std::vector<int>& coords) {
    return entropy_of(pmf.marginal(coords).flat());
}

inline double entropy(const JointPMF& pmf) {
    return entropy_of(pmf.flat());
}

// H(A | B) = H(A, B) - H(B).
inline double conditional_entropy(const JointPMF& pmf, std::vector<int> a,
                                  const std::vector<int>& b) {
    std::vector<int> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    return entropy(pmf, ab) - entropy(pmf, b);
}

// I(A ; B | C) = H(A|C) + H(B|C) - H(A,B|C); pass empty C for plain I(A;B).
inline double mutual_information(const JointPMF& pmf, const std::vector<int>& a,
                                 const std::vector<int>& b,
                                 const std::vector<int>& c = {}) {
    std::vector<int> ac = a, bc = b, abc = a;
    ac.insert(ac.end(), c.begin(), c.end());
    bc.insert(bc.end(), c.begin(), c.end());
    abc.insert(abc.end(), b.begin(), b.end());
    abc.insert(abc.end(), c.begin(), c.end());
    return entropy(pmf, ac) + entropy(pmf, bc) - entropy(pmf, abc) - entropy(pmf, c);
}

// Joint law of (X, Y, U, V) under the long Markov chain V - Y - X - U:
// P(x,y,u,v) = P(x,y) P(u|x) P(v|y).  The two conditional independences
// I(U; Y,V | X) = 0 and I(V; X,U | Y) = 0 are checked to 1e-10 after
// construction.
inline JointPMF compose_markov(const JointPMF& xy, const ConditionalPMF& u_given_x,
                               const ConditionalPMF& v_given_y) {
    if (xy.num_vars() != 2) throw input_error("compose_markov: source law must have two coordinates");
    if (u_given_x.from_size() != xy.size(0) || v_given_y.from_size() != xy.size(1))
        throw input_error("compose_markov: channel conditioning alphabet mismatch");
    const int nx = xy.size(0), ny = xy.size(1);
    const int nu = u_given_x.to_size(), nv = v_given_y.to_size();
    std::vector<double> cells(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
                                  static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv),
                              0.0);
    std::size_t o = 0;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            const double pxy = xy.at({x, y});
            for (int u = 0; u < nu; ++u)
                for (int v = 0; v < nv; ++v, ++o)
                    if (pxy > 0) cells[o] = pxy * u_given_x(x, u) * v_given_y(y, v);
        }
    JointPMF xyuv = JointPMF::from_flat({nx, ny, nu, nv}, std::move(cells));
    if (std::abs(mutual_information(xyuv, {2}, {1, 3}, {0})) > 1e-10 ||
        std::abs(mutual_information(xyuv, {3}, {0, 2}, {1})) > 1e-10)
        throw input_error("compose_markov: Markov chain identity violated");
    return xyuv;
}

}  // namespace grouprd
