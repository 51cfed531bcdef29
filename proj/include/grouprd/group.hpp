#pragma once

// Finite abelian groups in primary-cyclic form: every finite abelian group is
// a direct sum of cyclic groups of prime-power order, unique up to reordering.
// The canonical factor order used everywhere is non-decreasing prime, and
// within one prime non-increasing exponent.  Group elements are digit vectors
// in that factor order; a dense rank (mixed-radix, last factor fastest) is
// used wherever an element must index an array.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace grouprd {

// Thrown for malformed caller input (bad pmf, bad group spec, ...).
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when a request exceeds a documented enumeration guard.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Cyclic group of order p^r for a prime p and exponent r >= 1.
struct PrimaryCyclic {
    std::int64_t p = 2;
    int r = 1;

    std::int64_t modulus() const {
        std::int64_t m = 1;
        for (int i = 0; i < r; ++i) m *= p;
        return m;
    }
    bool operator==(const PrimaryCyclic&) const = default;
};

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// p-adic valuation of z in Z_{p^r}, capped at r (valuation(0) == r).
inline int valuation(std::int64_t p, int r, std::int64_t z) {
    if (z == 0) return r;
    int i = 0;
    while (i < r && z % p == 0) {
        z /= p;
        ++i;
    }
    return i;
}

// Label of the coset z + p^i Z_{p^r}, i.e. z mod p^i.  i=0 collapses
// everything to a single label, i=r is the identity relabeling.
inline std::int64_t coset_label(std::int64_t p, int r, int i, std::int64_t z) {
    if (i < 0 || i > r) throw input_error("coset_label: i out of [0,r]");
    std::int64_t m = 1;
    for (int t = 0; t < i; ++t) m *= p;
    return ((z % m) + m) % m;
}

// Multiplicative inverse of a unit modulo m (extended Euclid).
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r0 = m, r1 = ((a % m) + m) % m, s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1;
        std::int64_t s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw input_error("inverse_mod: not a unit");
    return ((s0 % m) + m) % m;
}

// All x in Z_{p^r} with a*x == b, sorted ascending.  For a in the shell
// p^i Z \ p^{i+1} Z the system is solvable iff p^i divides b, and then has
// exactly p^i solutions.  a == 0 degenerates to all of Z_{p^r} (b == 0) or
// nothing.
inline std::vector<std::int64_t> solve_linear(std::int64_t p, int r,
                                              std::int64_t a, std::int64_t b) {
    const std::int64_t m = PrimaryCyclic{p, r}.modulus();
    a = ((a % m) + m) % m;
    b = ((b % m) + m) % m;
    std::vector<std::int64_t> xs;
    if (a == 0) {
        if (b == 0) {
            xs.resize(static_cast<std::size_t>(m));
            std::iota(xs.begin(), xs.end(), 0);
        }
        return xs;
    }
    const int i = valuation(p, r, a);
    std::int64_t pi = 1;
    for (int t = 0; t < i; ++t) pi *= p;
    if (b % pi != 0) return xs;
    const std::int64_t m_red = m / pi;          // p^{r-i}
    const std::int64_t a_unit = a / pi;         // unit mod m_red
    const std::int64_t x0 = (b / pi) % m_red * inverse_mod(a_unit, m_red) % m_red;
    xs.reserve(static_cast<std::size_t>(pi));
    for (std::int64_t t = 0; t < pi; ++t) xs.push_back(x0 + t * m_red);
    std::sort(xs.begin(), xs.end());
    return xs;
}

class AbelianGroup;
using GroupElement = std::vector<std::int64_t>;  // one digit per factor

// Direct sum of primary cyclic factors in canonical order.
class AbelianGroup {
public:
    AbelianGroup() = default;  // trivial group, order 1

    static AbelianGroup from_factors(std::vector<PrimaryCyclic> fs) {
        for (const auto& f : fs) {
            if (!is_prime(f.p)) throw input_error("group factor base is not prime");
            if (f.r < 1) throw input_error("group factor exponent must be >= 1");
        }
        std::stable_sort(fs.begin(), fs.end(), [](const auto& a, const auto& b) {
            if (a.p != b.p) return a.p < b.p;
            return a.r > b.r;
        });
        AbelianGroup g;
        g.factors_ = std::move(fs);
        g.init_strides();
        return g;
    }

    const std::vector<PrimaryCyclic>& factors() const { return factors_; }
    int num_factors() const { return static_cast<int>(factors_.size()); }

    std::int64_t order() const {
        std::int64_t n = 1;
        for (const auto& f : factors_) n *= f.modulus();
        return n;
    }

    GroupElement zero() const { return GroupElement(factors_.size(), 0); }

    GroupElement add(const GroupElement& a, const GroupElement& b) const {
        GroupElement c(factors_.size());
        for (std::size_t i = 0; i < factors_.size(); ++i)
            c[i] = (a[i] + b[i]) % factors_[i].modulus();
        return c;
    }

    GroupElement negate(const GroupElement& a) const {
        GroupElement c(factors_.size());
        for (std::size_t i = 0; i < factors_.size(); ++i)
            c[i] = (factors_[i].modulus() - a[i]) % factors_[i].modulus();
        return c;
    }

    // Dense rank of an element, mixed radix with the last factor fastest.
    std::int64_t rank(const GroupElement& a) const {
        std::int64_t v = 0;
        for (std::size_t i = 0; i < factors_.size(); ++i) v += a[i] * strides_[i];
        return v;
    }

    GroupElement unrank(std::int64_t v) const {
        GroupElement a(factors_.size());
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            a[i] = v / strides_[i];
            v %= strides_[i];
        }
        return a;
    }

    std::int64_t add_ranks(std::int64_t a, std::int64_t b) const {
        return rank(add(unrank(a), unrank(b)));
    }

    // "Z4+Z2" style display name; the trivial group prints as "Z1".
    std::string name() const {
        if (factors_.empty()) return "Z1";
        std::string s;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (i) s += '+';
            s += 'Z';
            s += std::to_string(factors_[i].modulus());
        }
        return s;
    }

    bool operator==(const AbelianGroup& o) const { return factors_ == o.factors_; }

private:
    void init_strides() {
        strides_.assign(factors_.size(), 1);
        for (int i = static_cast<int>(factors_.size()) - 2; i >= 0; --i)
            strides_[static_cast<std::size_t>(i)] =
                strides_[static_cast<std::size_t>(i) + 1] * factors_[static_cast<std::size_t>(i) + 1].modulus();
    }

    std::vector<PrimaryCyclic> factors_;
    std::vector<std::int64_t> strides_;  // rank strides, parallel to factors_
};

// Canonical primary decomposition of the cyclic group Z_n.  n == 1 gives the
// trivial group.
inline AbelianGroup decompose_cyclic(std::int64_t n) {
    if (n < 1) throw input_error("decompose_cyclic: order must be >= 1");
    std::vector<PrimaryCyclic> fs;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int r = 0;
            while (n % p == 0) {
                n /= p;
                ++r;
            }
            fs.push_back({p, r});
        }
    }
    if (n > 1) fs.push_back({n, 1});
    return AbelianGroup::from_factors(std::move(fs));
}

namespace detail {
inline void partitions_desc(int n, int cap, std::vector<int>& cur,
                            std::vector<std::vector<int>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int k = std::min(n, cap); k >= 1; --k) {
        cur.push_back(k);
        partitions_desc(n - k, k, cur, out);
        cur.pop_back();
    }
}
}  // namespace detail

// Every isomorphism class of abelian groups with order in [min_order,
// max_order]: one class per choice of exponent partition at each prime.
// Ordered by order, then lexicographically by factor list.
inline std::vector<AbelianGroup> enumerate_abelian_groups(std::int64_t min_order,
                                                          std::int64_t max_order) {
    if (min_order < 1 || max_order < min_order)
        throw input_error("enumerate_abelian_groups: bad order range");
    if (max_order > (std::int64_t{1} << 20))
        throw resource_error("enumerate_abelian_groups: max_order above 2^20 guard");
    std::vector<AbelianGroup> out;
    for (std::int64_t n = min_order; n <= max_order; ++n) {
        std::vector<std::pair<std::int64_t, int>> primes;  // (p, exponent)
        std::int64_t m = n;
        for (std::int64_t p = 2; p * p <= m; ++p) {
            if (m % p == 0) {
                int e = 0;
                while (m % p == 0) {
                    m /= p;
                    ++e;
                }
                primes.emplace_back(p, e);
            }
        }
        if (m > 1) primes.emplace_back(m, 1);

        std::vector<std::vector<std::vector<int>>> per_prime;  // partition lists
        for (const auto& [p, e] : primes) {
            std::vector<std::vector<int>> parts;
            std::vector<int> cur;
            detail::partitions_desc(e, e, cur, parts);
            per_prime.push_back(std::move(parts));
        }
        // Cartesian product of the per-prime partition choices.
        std::vector<std::size_t> idx(per_prime.size(), 0);
        while (true) {
            std::vector<PrimaryCyclic> fs;
            for (std::size_t i = 0; i < per_prime.size(); ++i)
                for (int e : per_prime[i][idx[i]]) fs.push_back({primes[i].first, e});
            out.push_back(AbelianGroup::from_factors(std::move(fs)));
            std::size_t i = per_prime.size();
            while (i > 0) {
                --i;
                if (++idx[i] < per_prime[i].size()) break;
                idx[i] = 0;
                if (i == 0) {
                    i = std::size_t(-1);
                    break;
                }
            }
            if (per_prime.empty() || i == std::size_t(-1)) break;
        }
    }
    return out;
}

// Parses "Z4+Z2+Z3", "Z12", or "Z2^3" into a canonical group.
inline AbelianGroup parse_group(const std::string& text) {
    std::vector<PrimaryCyclic> fs;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] == '+') {
            ++pos;
            continue;
        }
        if (text[pos] != 'Z' && text[pos] != 'z')
            throw input_error("parse_group: expected 'Z<order>' at '" + text.substr(pos) + "'");
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) throw input_error("parse_group: missing order after 'Z'");
        std::int64_t n = std::stoll(text.substr(start, pos - start));
        int repeat = 1;
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            std::size_t rs = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (rs == pos) throw input_error("parse_group: missing exponent after '^'");
            repeat = std::stoi(text.substr(rs, pos - rs));
        }
        if (n < 1) throw input_error("parse_group: order must be >= 1");
        const AbelianGroup dec = decompose_cyclic(n);
        for (int t = 0; t < repeat; ++t)
            for (const auto& f : dec.factors()) fs.push_back(f);
    }
    return AbelianGroup::from_factors(std::move(fs));
}

}  // namespace grouprd
