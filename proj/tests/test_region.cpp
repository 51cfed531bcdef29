#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "grouprd/region.hpp"

using namespace grouprd;
using Catch::Matchers::WithinAbs;

namespace {

const DistortionFn kXorMismatch = [](int x, int y, std::int64_t zhat) {
    return zhat == ((x + y) % 2) ? 0.0 : 1.0;
};

JointPMF dsbs(double flip) {
    const double q = (1 - flip) / 2, p = flip / 2;
    return JointPMF::from_flat({2, 2}, {q, p, p, q});
}

}  // namespace

TEST_CASE("lower convex envelope of a rate cloud") {
    // Single point passes through.
    auto single = lower_convex_envelope({{0.3, 1.2}});
    REQUIRE(single.size() == 1);
    CHECK_THAT(single[0].d, WithinAbs(0.3, 1e-15));
    CHECK_THAT(envelope_value(single, 0.5), WithinAbs(1.2, 1e-15));
    CHECK(std::isinf(envelope_value(single, 0.2)));

    // Collinear points reduce to the endpoints.
    auto line = lower_convex_envelope({{0, 2}, {0.25, 1}, {0.5, 0}});
    REQUIRE(line.size() == 2);
    CHECK_THAT(line[0].rsum, WithinAbs(2.0, 1e-15));
    CHECK_THAT(line[1].d, WithinAbs(0.5, 1e-15));

    // A point above the chord is dropped and interpolated below.
    auto hull = lower_convex_envelope({{0, 2}, {0.5, 0}, {0.25, 1.5}});
    REQUIRE(hull.size() == 2);
    CHECK_THAT(envelope_value(hull, 0.25), WithinAbs(1.0, 1e-12));

    // Non-monotone cloud: the cheap early point floors everything after it.
    auto floor = lower_convex_envelope({{0.1, 0.4}, {0.2, 0.9}, {0.3, 0.6}});
    CHECK_THAT(envelope_value(floor, 0.3), WithinAbs(0.4, 1e-12));

    // Convexity and domination on a scattered cloud.
    std::vector<EnvelopePoint> cloud = {{0.0, 3.1}, {0.05, 2.2}, {0.1, 2.5}, {0.2, 1.1},
                                        {0.3, 1.4}, {0.35, 0.6}, {0.5, 0.0}, {0.45, 0.2}};
    auto env = lower_convex_envelope(cloud);
    for (std::size_t i = 1; i + 1 < env.size(); ++i) {
        const double s1 = (env[i].rsum - env[i - 1].rsum) / (env[i].d - env[i - 1].d);
        const double s2 = (env[i + 1].rsum - env[i].rsum) / (env[i + 1].d - env[i].d);
        CHECK(s2 >= s1 - 1e-12);
    }
    for (const auto& p : cloud) CHECK(envelope_value(env, p.d) <= p.rsum + 1e-12);

    CHECK_THROWS_AS(lower_convex_envelope({}), input_error);
}

TEST_CASE("simplex grid enumeration") {
    auto g2 = simplex_grid(2, 0.5);
    REQUIRE(g2.size() == 3);
    CHECK_THAT(g2[1][0], WithinAbs(0.5, 1e-15));
    auto g3 = simplex_grid(3, 0.5);
    REQUIRE(g3.size() == 6);
    for (const auto& row : g3) {
        double s = 0;
        for (double v : row) s += v;
        CHECK_THAT(s, WithinAbs(1.0, 1e-12));
    }
    CHECK(simplex_grid(2, 0.05).size() == 21);
    CHECK_THROWS_AS(simplex_grid(2, 0.3), input_error);

    // Near-grid: binary rows within one coarse step of (0.9, 0.1) at 0.01.
    auto near = simplex_grid_near({0.9, 0.1}, 100, 0.05, 5000);
    REQUIRE(near.size() == 11);
    CHECK_THAT(near.front()[0], WithinAbs(0.85, 1e-12));
    CHECK_THAT(near.back()[0], WithinAbs(0.95, 1e-12));
    // Cap exceeded reports empty.
    CHECK(simplex_grid_near({0.25, 0.25, 0.25, 0.25}, 100, 0.25, 3).empty());
}

TEST_CASE("channel pair grid is deterministic and guarded") {
    auto pairs = channel_pair_grid(2, 2, 2, 2, 0.5);
    REQUIRE(pairs.size() == 81);  // (3 rows)^2 per side, squared
    std::set<std::string> ids;
    for (const auto& c : pairs) ids.insert(c.id);
    CHECK(ids.size() == pairs.size());
    CHECK(pairs[0].id.find("u=") == 0);
    CHECK_THROWS_AS(channel_pair_grid(4, 4, 4, 4, 0.05), resource_error);
}

TEST_CASE("staged region on a lossless channel recovers the two-sided sum rate") {
    auto xy = dsbs(0.1);
    ChannelPair identity{ConditionalPMF::identity(2), ConditionalPMF::identity(2), "id"};

    RegionPolicy z2_only;
    z2_only.groups = {parse_group("Z2")};
    auto curve = theorem1_region(xy, {identity}, {0, 1}, kXorMismatch, z2_only);
    REQUIRE(curve.points.size() == 1);
    const auto& pt = curve.points[0];
    CHECK_THAT(pt.d, WithinAbs(0.0, 1e-12));
    CHECK_THAT(pt.rsum, WithinAbs(2 * binary_entropy(0.1), 1e-9));
    CHECK(pt.group == "Z2");
    CHECK(pt.permutation == "0");
    CHECK(pt.options == "11");
    CHECK(pt.channel_id == "id");

    // Exhaustive option emission: one record per encoder-option pair.
    RegionPolicy all = z2_only;
    all.emit = RegionPolicy::kAllOptionCombos;
    auto combos = theorem1_region(xy, {identity}, {0, 1}, kXorMismatch, all);
    REQUIRE(combos.points.size() == 4);
    const double hz = binary_entropy(0.1);
    std::multiset<double> r1s, r2s;
    for (const auto& p : combos.points) {
        r1s.insert(p.r1);
        r2s.insert(p.r2);
    }
    CHECK_THAT(*r1s.begin(), WithinAbs(hz, 1e-9));
    CHECK_THAT(*r1s.rbegin(), WithinAbs(1.0, 1e-9));
    CHECK_THAT(*r2s.begin(), WithinAbs(hz, 1e-9));
    CHECK_THAT(*r2s.rbegin(), WithinAbs(1.0, 1e-9));

    // Automatic group discovery sweeps Z2, Z3, Z4, Z2+Z2; the modulo-2 sum
    // scheme still sets the envelope at zero distortion.
    auto swept = theorem1_region(xy, {identity}, {0, 1}, kXorMismatch);
    std::set<std::string> groups;
    for (const auto& p : swept.points) groups.insert(p.group);
    CHECK(groups == std::set<std::string>{"Z2", "Z2+Z2", "Z3", "Z4"});
    CHECK_THAT(envelope_value(swept.envelope, 0.0), WithinAbs(2 * binary_entropy(0.1), 1e-9));
}

TEST_CASE("mutual-information region hits the joint-entropy point losslessly") {
    auto xy = dsbs(0.1);
    auto curve = berger_tung_region(xy, {0, 1}, kXorMismatch, 2, 2, 0.5);
    REQUIRE(curve.points.size() == 81);

    // The identity pair appears with zero distortion and full joint entropy.
    bool found_identity = false;
    double best_lossless = 1e9;
    for (const auto& p : curve.points) {
        if (p.d < 1e-12) {
            best_lossless = std::min(best_lossless, p.rsum);
            if (p.channel_id == "u=[1 0][0 1] v=[1 0][0 1]") found_identity = true;
        }
    }
    CHECK(found_identity);
    CHECK_THAT(best_lossless, WithinAbs(1 + binary_entropy(0.1), 1e-9));

    // Constant channels make the sum rate free at the blind distortion 0.1.
    CHECK_THAT(envelope_value(curve.envelope, 0.1), WithinAbs(0.0, 1e-9));

    CHECK_THROWS_AS(berger_tung_region(xy, {0, 1}, kXorMismatch, 2, 2, 0.7), input_error);
}

TEST_CASE("group quantization rate search on the binary Hamming source") {
    const auto hamming = [](int x, std::int64_t u) { return x == u ? 0.0 : 1.0; };
    const std::vector<double> uniform = {0.5, 0.5};

    // Zero distortion forces the identity channel: one full bit.
    auto exact = lossy_group_rate(uniform, hamming, 0.0, parse_group("Z2"), 0.05);
    REQUIRE(exact.feasible);
    CHECK_THAT(exact.rate, WithinAbs(1.0, 1e-12));

    // At D = 0.11 the refinement pass lands on the symmetric flip channel.
    auto mid = lossy_group_rate(uniform, hamming, 0.11, parse_group("Z2"), 0.05);
    REQUIRE(mid.feasible);
    CHECK_THAT(mid.rate, WithinAbs(1 - binary_entropy(0.11), 1e-9));
    CHECK(mid.distortion <= 0.11 + 1e-12);

    // Fully relaxed target: the uniform channel erases the rate.
    auto free = lossy_group_rate(uniform, hamming, 1.0, parse_group("Z2"), 0.05);
    CHECK_THAT(free.rate, WithinAbs(0.0, 1e-12));

    // Unachievable target reports infeasible.
    const auto never = [](int, std::int64_t) { return 1.0; };
    CHECK_FALSE(lossy_group_rate(uniform, never, 0.5, parse_group("Z2"), 0.5).feasible);

    // Square-free composite group: rate is log2 6 - H(U|X), zero for the
    // uniform channel once the grid contains it.
    auto z6 = lossy_group_rate(uniform, never, 1.5, parse_group("Z6"), 1.0 / 6);
    REQUIRE(z6.feasible);
    CHECK_THAT(z6.rate, WithinAbs(0.0, 1e-9));

    // Repeated primes and towers are rejected for the square-free formula.
    CHECK_THROWS_AS(lossy_group_rate(uniform, hamming, 0.2, parse_group("Z2^2"), 0.5),
                    input_error);

    // Primary cyclic branch: cross-check the formula on Z_4 against a direct
    // recomputation over the same coarse grid.
    const auto embed_double = [](int x, std::int64_t u) { return u == 2 * x ? 0.0 : 1.0; };
    const std::vector<double> px = {0.6, 0.4};
    const double step = 0.25;
    auto got = lossy_group_rate(px, embed_double, 0.25, parse_group("Z4"), step);
    REQUIRE(got.feasible);
    double best = 1e9;
    const auto rows = simplex_grid(4, step);
    for (const auto& r0 : rows)
        for (const auto& r1 : rows) {
            double d = 0, cond = 0;
            for (int u = 0; u < 4; ++u) {
                d += 0.6 * r0[static_cast<std::size_t>(u)] * embed_double(0, u) +
                     0.4 * r1[static_cast<std::size_t>(u)] * embed_double(1, u);
            }
            cond = 0.6 * entropy_of(r0) + 0.4 * entropy_of(r1);
            if (d > 0.25 + 1e-12) continue;
            best = std::min(best, 2 - std::min(cond, 2 * std::max(0.0, cond - 1.0)));
        }
    CHECK(got.rate <= best + 1e-9);  // refinement may only improve
}

TEST_CASE("classical rate-distortion search with realization entropies") {
    const auto hamming = [](int x, std::int64_t u) { return x == u ? 0.0 : 1.0; };
    const std::vector<double> uniform = {0.5, 0.5};

    auto zero = shannon_rd(uniform, 2, hamming, 0.0, 0.05);
    REQUIRE(zero.feasible);
    CHECK_THAT(zero.rate, WithinAbs(1.0, 1e-12));
    CHECK_THAT(zero.cond_entropy_bits, WithinAbs(0.0, 1e-12));
    CHECK_THAT(zero.output_entropy_bits, WithinAbs(1.0, 1e-12));

    auto mid = shannon_rd(uniform, 2, hamming, 0.11, 0.01);
    REQUIRE(mid.feasible);
    CHECK_THAT(mid.rate, WithinAbs(1 - binary_entropy(0.11), 1e-9));
    CHECK_THAT(mid.output_entropy_bits - mid.cond_entropy_bits, WithinAbs(mid.rate, 1e-12));

    auto relaxed = shannon_rd(uniform, 2, hamming, 0.5, 0.05);
    REQUIRE(relaxed.feasible);
    CHECK_THAT(relaxed.rate, WithinAbs(0.0, 1e-12));

    const auto never = [](int, std::int64_t) { return 1.0; };
    CHECK_FALSE(shannon_rd(uniform, 2, never, 0.25, 0.5).feasible);
}
