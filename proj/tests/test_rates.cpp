#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "grouprd/embed.hpp"
#include "grouprd/group.hpp"
#include "grouprd/info.hpp"
#include "grouprd/pmf.hpp"
#include "grouprd/rates.hpp"

using namespace grouprd;
using Catch::Matchers::WithinAbs;

namespace {

// (x - y) mod 4, the running example function on mod-4 pairs.
const FunctionTable kDiffMod4{4, 4, {0, 3, 2, 1, 1, 0, 3, 2, 2, 1, 0, 3, 3, 2, 1, 0}};

// Joint of (X, Y) with Y = X + Z mod 4, Z independent of X.
JointPMF mod4_pair(const std::vector<double>& px, const std::vector<double>& pz) {
    std::vector<double> cells(16);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            cells[static_cast<std::size_t>(x) * 4 + y] = px[static_cast<std::size_t>(x)] *
                                                         pz[static_cast<std::size_t>((y - x + 4) % 4)];
    return JointPMF::from_flat({4, 4}, cells);
}

Embedding z4_diff_embedding() {
    return {parse_group("Z4"), {0, 1, 2, 3}, {0, 3, 2, 1}, {0, 1, 2, 3}};
}

Embedding z7_diff_embedding() {
    return {parse_group("Z7"), {0, 1, 2, 3}, {0, 6, 5, 4}, {0, 1, 2, 3, 1, 2, 3}};
}

Embedding z2_cubed_diff_embedding() {
    // su(u) = (bit1(u), 0, bit0(u)), sv(v) = (bit1(v), bit0(v), 0); the sum
    // digits determine x - y mod 4 through the pinned decode table.
    return {parse_group("Z2^3"), {0, 1, 4, 5}, {0, 2, 4, 6}, {0, 1, 3, 0, 2, 3, 1, 2}};
}

Embedding z4_z4_pair_embedding() {
    // su(x) = (x, 0), sv(y) = (0, y): the sum is the source pair itself.
    Embedding e;
    e.group = parse_group("Z4+Z4");
    e.su = {0, 4, 8, 12};
    e.sv = {0, 1, 2, 3};
    e.decode.resize(16);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            e.decode[static_cast<std::size_t>(a) * 4 + b] = (a - b + 4) % 4;
    return e;
}

}  // namespace

TEST_CASE("coset channel rate matches hand-computed digit costs") {
    // Binary digit, no side information.
    CHECK_THAT(coset_channel_rate({0.7, 0.3}, 2, 1, 1), WithinAbs(binary_entropy(0.3), 1e-12));
    // Side information: W is S through a crossover-0.1 channel.
    CHECK_THAT(coset_channel_rate({0.45, 0.05, 0.05, 0.45}, 2, 1, 2),
               WithinAbs(binary_entropy(0.1), 1e-12));
    // Z4 digit concentrated on odd values: the mod-2 label is cheap, so the
    // two-step expression dominates plain entropy.
    {
        const std::vector<double> ws{0.0, 0.15, 0.05, 0.8};
        const double h = entropy_of(ws);
        const double expect = 2 * (h - binary_entropy(0.05));
        REQUIRE(expect > h);
        CHECK_THAT(coset_channel_rate(ws, 2, 2, 1), WithinAbs(expect, 1e-12));
    }
    // Support inside 2Z4 re-roots onto Z2 first; without the re-rooting the
    // constant mod-2 label would inflate the rate to twice the entropy.
    CHECK_THAT(coset_channel_rate({0.6, 0.0, 0.4, 0.0}, 2, 2, 1),
               WithinAbs(binary_entropy(0.4), 1e-12));
    // Constant digits cost nothing, zero or not.
    CHECK_THAT(coset_channel_rate({1.0, 0.0, 0.0, 0.0}, 2, 2, 1), WithinAbs(0.0, 1e-15));
    CHECK_THAT(coset_channel_rate({0.0, 1.0, 0.0, 0.0}, 2, 2, 1), WithinAbs(0.0, 1e-15));
    CHECK_THROWS_AS(coset_channel_rate({0.5, 0.5}, 2, 2, 1), input_error);
}

TEST_CASE("covering source rate applies the excess-over-subgroup discount") {
    // Prime cyclic: the discount never bites, the rate is the entropy.
    CHECK_THAT(covering_source_rate({0.2, 0.3, 0.5}, 3, 1, 1),
               WithinAbs(entropy_of({0.2, 0.3, 0.5}), 1e-12));
    // Z4 digit with entropy below log2(2): fully absorbed by the subgroup.
    CHECK_THAT(covering_source_rate({0.5, 0.5, 0.0, 0.0}, 2, 2, 1), WithinAbs(0.0, 1e-15));
    // Entropy above log2(2): pay twice the excess.
    {
        const std::vector<double> wc{0.4, 0.4, 0.2, 0.0};
        const double h = entropy_of(wc);
        CHECK_THAT(covering_source_rate(wc, 2, 2, 1), WithinAbs(2 * (h - 1), 1e-12));
    }
    // Re-rooting turns a 2Z4-supported digit into a plain binary one.
    CHECK_THAT(covering_source_rate({0.6, 0.0, 0.4, 0.0}, 2, 2, 1),
               WithinAbs(binary_entropy(0.4), 1e-12));
    // Conditioning: W = C with certainty costs nothing.
    CHECK_THAT(covering_source_rate({0.5, 0.0, 0.0, 0.5}, 2, 1, 2), WithinAbs(0.0, 1e-15));
}

TEST_CASE("optimal reconstruction minimizes expected distortion cellwise") {
    const auto xy = JointPMF::from_flat({2, 2}, {0.4, 0.1, 0.1, 0.4});
    const auto xyuv = lossless_pair_joint(xy);
    const FunctionTable kXor{2, 2, {0, 1, 1, 0}};
    const auto rec = optimal_reconstruction(xyuv, {0, 1}, function_mismatch_distortion(kXor));
    CHECK(rec.table.vals == kXor.vals);
    CHECK_THAT(rec.distortion, WithinAbs(0.0, 1e-15));
    CHECK_THAT(rec.mass[0], WithinAbs(0.4, 1e-12));

    // Degenerate auxiliaries: the decoder sees nothing and guesses; exact
    // ties go to the earliest reconstruction value.
    const auto blind = JointPMF::from_flat({2, 2, 1, 1}, {0.25, 0.25, 0.25, 0.25});
    const DistortionFn dist = [](int x, int y, std::int64_t zhat) {
        return zhat == ((x + y) % 2) ? 0.0 : 1.0;
    };
    const auto first = optimal_reconstruction(blind, {0, 1}, dist);
    CHECK(first.table.vals == std::vector<std::int64_t>{0});
    CHECK_THAT(first.distortion, WithinAbs(0.5, 1e-12));
    const auto flipped = optimal_reconstruction(blind, {1, 0}, dist);
    CHECK(flipped.table.vals == std::vector<std::int64_t>{1});

    CHECK_THROWS_AS(optimal_reconstruction(xyuv, {}, dist), input_error);
}

TEST_CASE("staged rate point reproduces the pinned four-group sum rates") {
    struct Row {
        std::vector<double> px, pz;
        double z4, z7, z2cubed, z4z4;
    };
    const std::vector<Row> rows{
        {{0.25, 0.25, 0.25, 0.25},
         {0.5, 0.0, 0.25, 0.25},
         3.000000000000, 3.905639062230, 3.188721875541, 3.500000000000},
        {{0.3, 0.6, 0.1, 0.0},
         {0.0, 0.8, 0.05, 0.15},
         2.391147050653, 2.079654268687, 2.452921076897, 2.179645564018},
        {{1.0 / 3, 0.1, 0.5, 1.0 / 15},
         {3.0 / 7, 1.0 / 7, 1.0 / 7, 2.0 / 7},
         3.684741986354, 4.592481637069, 3.349536271968, 3.463344009280},
        {{0.9, 1.0 / 30, 1.0 / 30, 1.0 / 30},
         {0.15, 0.75, 0.05, 0.05},
         2.308031546146, 2.706530489484, 1.939462786280, 1.781507616734},
    };
    const StagePolicy sum_first{StagePolicy::kSumFirst};
    const DistortionFn dist = function_mismatch_distortion(kDiffMod4);
    for (const auto& row : rows) {
        const auto xyuv = lossless_pair_joint(mod4_pair(row.px, row.pz));
        const auto p4 = staged_rate_point(xyuv, z4_diff_embedding(), {0}, sum_first, dist);
        CHECK_THAT(p4.sum(), WithinAbs(row.z4, 1e-9));
        CHECK_THAT(p4.d, WithinAbs(0.0, 1e-12));
        const auto p7 = staged_rate_point(xyuv, z7_diff_embedding(), {0}, sum_first, dist);
        CHECK_THAT(p7.sum(), WithinAbs(row.z7, 1e-9));
        CHECK_THAT(p7.d, WithinAbs(0.0, 1e-12));
        const auto p8 = staged_rate_point(xyuv, z2_cubed_diff_embedding(), {1, 2, 0}, sum_first, dist);
        CHECK_THAT(p8.sum(), WithinAbs(row.z2cubed, 1e-9));
        CHECK_THAT(p8.d, WithinAbs(0.0, 1e-12));
        // The pair embedding recovers (X, Y) outright, so its pinned rate is
        // the joint entropy H(X) + H(Z).
        const auto xy = mod4_pair(row.px, row.pz);
        const double pair_rate = entropy(xy, {0}) + conditional_entropy(xy, {1}, {0});
        CHECK_THAT(pair_rate, WithinAbs(row.z4z4, 1e-9));
    }

    // On the uniform-X row the staged pipeline itself meets the pair rate.
    const auto xyuv = lossless_pair_joint(mod4_pair(rows[0].px, rows[0].pz));
    const auto pp = staged_rate_point(xyuv, z4_z4_pair_embedding(), {0, 1}, sum_first, dist);
    CHECK_THAT(pp.sum(), WithinAbs(3.5, 1e-9));
    CHECK_THAT(pp.d, WithinAbs(0.0, 1e-12));
}

TEST_CASE("staged rate point splits the three binary stages as published") {
    const auto xyuv = lossless_pair_joint(
        mod4_pair({0.25, 0.25, 0.25, 0.25}, {0.5, 0.0, 0.25, 0.25}));
    std::vector<StageBreakdown> stages;
    const auto pt = staged_rate_point(xyuv, z2_cubed_diff_embedding(), {1, 2, 0},
                                      {StagePolicy::kSumFirst},
                                      function_mismatch_distortion(kDiffMod4), &stages);
    REQUIRE(stages.size() == 3);
    // Encoder 1 is silent on the digit its map keeps at zero, likewise
    // encoder 2; both pay for the last digit.
    CHECK(stages[0].digit == 1);
    CHECK_THAT(stages[0].r1, WithinAbs(0.0, 1e-12));
    CHECK_THAT(stages[0].r2, WithinAbs(1.0, 1e-9));
    CHECK(stages[1].digit == 2);
    CHECK_THAT(stages[1].r1, WithinAbs(0.811278124459, 1e-9));
    CHECK_THAT(stages[1].r2, WithinAbs(0.0, 1e-12));
    CHECK(stages[2].digit == 0);
    CHECK_THAT(stages[2].r1, WithinAbs(0.688721875541, 1e-9));
    CHECK_THAT(stages[2].r2, WithinAbs(0.688721875541, 1e-9));
    CHECK_THAT(pt.sum(), WithinAbs(3.188721875541, 1e-9));
}

TEST_CASE("staged rate point validates its stage order") {
    const auto xyuv = lossless_pair_joint(JointPMF::from_flat({2, 2}, {0.4, 0.1, 0.1, 0.4}));
    const Embedding emb{parse_group("Z2+Z2"), {0, 2}, {0, 1}, {0, 1, 2, 3}};
    const DistortionFn dist = [](int, int, std::int64_t) { return 0.0; };
    CHECK_THROWS_AS(staged_rate_point(xyuv, emb, {0}, {}, dist), input_error);
    CHECK_THROWS_AS(staged_rate_point(xyuv, emb, {0, 0}, {}, dist), input_error);
    CHECK_THROWS_AS(staged_rate_point(xyuv, emb, {0, 2}, {}, dist), input_error);
}

TEST_CASE("pair embedding with noisy auxiliaries lands on the corner rates") {
    // P(X,Y) = [[0.35, 0.15], [0.1, 0.4]]; U, V observe X, Y through
    // symmetric channels with accuracies 0.9 and 0.8.
    const std::vector<std::vector<double>> pxy{{0.35, 0.15}, {0.1, 0.4}};
    std::vector<double> cells(16);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v)
                    cells[static_cast<std::size_t>(((x * 2 + y) * 2 + u) * 2 + v)] =
                        pxy[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] *
                        (u == x ? 0.9 : 0.1) * (v == y ? 0.8 : 0.2);
    const auto xyuv = JointPMF::from_flat({2, 2, 2, 2}, cells);

    const FunctionTable pair{2, 2, {0, 1, 2, 3}};
    const Embedding emb = default_embedding(pair);
    REQUIRE(emb.group.name() == "Z2+Z2");
    REQUIRE(emb.su == std::vector<std::int64_t>{0, 2});
    REQUIRE(emb.sv == std::vector<std::int64_t>{0, 1});
    const DistortionFn dist = function_mismatch_distortion(pair);

    const auto u_first = staged_rate_point(xyuv, emb, {0, 1}, {StagePolicy::kMin}, dist);
    CHECK_THAT(u_first.r1, WithinAbs(0.531004406411, 1e-9));
    CHECK_THAT(u_first.r2, WithinAbs(0.233356167179, 1e-9));
    CHECK_THAT(u_first.r1, WithinAbs(mutual_information(xyuv, {0}, {2}), 1e-12));
    CHECK_THAT(u_first.r2, WithinAbs(mutual_information(xyuv, {1}, {3}, {2}), 1e-12));
    CHECK_THAT(u_first.d, WithinAbs(1 - 0.9 * 0.8, 1e-12));

    const auto v_first = staged_rate_point(xyuv, emb, {1, 0}, {StagePolicy::kMin}, dist);
    CHECK_THAT(v_first.r1, WithinAbs(0.488887079910, 1e-9));
    CHECK_THAT(v_first.r2, WithinAbs(0.275473493680, 1e-9));
    CHECK_THAT(v_first.r1, WithinAbs(mutual_information(xyuv, {0}, {2}, {3}), 1e-12));
    CHECK_THAT(v_first.r2, WithinAbs(mutual_information(xyuv, {1}, {3}), 1e-12));
}

TEST_CASE("best stage order picks the cheaper corner") {
    const auto xy = JointPMF::from_flat({2, 2}, {0.35, 0.15, 0.1, 0.4});
    const auto xyuv = lossless_pair_joint(xy);
    const FunctionTable pair{2, 2, {0, 1, 2, 3}};
    const Embedding emb = default_embedding(pair);
    std::vector<int> order;
    const auto best = best_staged_rate_point(xyuv, emb, {StagePolicy::kMin},
                                             function_mismatch_distortion(pair), &order);
    // Both corners of the lossless pair region share the sum rate H(X, Y).
    CHECK_THAT(best.sum(), WithinAbs(entropy(xy), 1e-9));
    REQUIRE(order.size() == 2);
}

TEST_CASE("lossless modulo-2 sum picks the better of sum and pair coding") {
    const std::vector<AbelianGroup> groups{parse_group("Z2"), parse_group("Z2+Z2")};
    const FunctionTable kXor{2, 2, {0, 1, 1, 0}};

    // Symmetric sources: conveying the sum digit twice beats pair coding.
    const auto sym = JointPMF::from_flat({2, 2}, {0.4, 0.1, 0.1, 0.4});
    CHECK_THAT(best_lossless_sum_rate(sym, kXor, groups),
               WithinAbs(2 * binary_entropy(0.2), 1e-9));

    // Skewed X with an independent uniform Y: the sum is uniform, so pair
    // coding at the joint entropy wins.
    const auto skew = JointPMF::from_flat({2, 2}, {0.475, 0.475, 0.025, 0.025});
    CHECK_THAT(best_lossless_sum_rate(skew, kXor, groups),
               WithinAbs(binary_entropy(0.05) + 1.0, 1e-9));
}

TEST_CASE("constant reconstructions cost no rate") {
    const auto xyuv = lossless_pair_joint(JointPMF::from_flat({2, 2}, {0.4, 0.1, 0.1, 0.4}));
    const Embedding emb{parse_group("Z2"), {0, 1}, {0, 1}, {0, 0}};
    const DistortionFn dist = [](int x, int y, std::int64_t zhat) {
        return zhat == ((x + y) % 2) ? 0.0 : 1.0;
    };
    const auto pt = staged_rate_point(xyuv, emb, {0}, {StagePolicy::kMin}, dist);
    CHECK_THAT(pt.r1, WithinAbs(0.0, 1e-15));
    CHECK_THAT(pt.r2, WithinAbs(0.0, 1e-15));
    CHECK_THAT(pt.d, WithinAbs(0.2, 1e-12));
}

TEST_CASE("lossy xor closed form covers all four reconstruction cases") {
    // Correlated pair p = 0.2 with clean channels: lossless sum coding.
    {
        const auto pt = lossy_xor_closed_form(0.2, 1.0, 1.0);
        CHECK(pt.reconstruction == LossyXorPoint::kSum);
        CHECK_THAT(pt.d, WithinAbs(0.0, 1e-15));
        CHECK_THAT(pt.r1, WithinAbs(binary_entropy(0.2), 1e-12));
        CHECK_THAT(pt.r2, WithinAbs(binary_entropy(0.2), 1e-12));
    }
    // Pure-noise channels: stay silent and guess the likelier sum value.
    {
        const auto pt = lossy_xor_closed_form(0.2, 0.5, 0.5);
        CHECK(pt.reconstruction == LossyXorPoint::kZero);
        CHECK_THAT(pt.r1, WithinAbs(0.0, 1e-15));
        CHECK_THAT(pt.r2, WithinAbs(0.0, 1e-15));
        CHECK_THAT(pt.d, WithinAbs(0.2, 1e-15));
    }
    // One channel inverted: the complement of the sum is exact.
    {
        const auto pt = lossy_xor_closed_form(0.2, 0.0, 1.0);
        CHECK(pt.reconstruction == LossyXorPoint::kComplement);
        CHECK_THAT(pt.d, WithinAbs(0.0, 1e-15));
        CHECK_THAT(pt.r1, WithinAbs(binary_entropy(0.2), 1e-12));
        CHECK_THAT(pt.r2, WithinAbs(binary_entropy(0.2), 1e-12));
    }
    // Anti-correlated pair with uninformative channels: guess one.
    {
        const auto pt = lossy_xor_closed_form(0.8, 0.5, 0.5);
        CHECK(pt.reconstruction == LossyXorPoint::kOne);
        CHECK_THAT(pt.d, WithinAbs(0.2, 1e-15));
    }
    // Exact tie between silence and sum coding resolves to silence.
    {
        const auto pt = lossy_xor_closed_form(0.2, 1.0, 0.2);
        CHECK(pt.reconstruction == LossyXorPoint::kZero);
        CHECK_THAT(pt.d, WithinAbs(0.2, 1e-15));
    }
    // Noisy but informative channels.
    {
        const auto pt = lossy_xor_closed_form(0.2, 1.0, 0.9);
        CHECK(pt.reconstruction == LossyXorPoint::kSum);
        CHECK_THAT(pt.d, WithinAbs(0.1, 1e-12));
        CHECK_THAT(pt.r1, WithinAbs(binary_entropy(0.74), 1e-12));
        CHECK_THAT(pt.r2, WithinAbs(binary_entropy(0.74) - binary_entropy(0.9), 1e-12));
    }
    CHECK_THROWS_AS(lossy_xor_closed_form(1.2, 0.5, 0.5), input_error);
}

namespace {

// (X, Y, U, V) for the symmetric binary pair with additive test channels.
JointPMF dsbs_with_channels(double p, double q1, double q2) {
    std::vector<double> cells(16);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v) {
                    const double pxy = (x == y ? (1 - p) / 2 : p / 2);
                    const double pu = (u == x ? q1 : 1 - q1);
                    const double pv = (v == y ? q2 : 1 - q2);
                    cells[static_cast<std::size_t>(((x * 2 + y) * 2 + u) * 2 + v)] = pxy * pu * pv;
                }
    return JointPMF::from_flat({2, 2, 2, 2}, cells);
}

// Closed form versus the generic pipeline at one channel pair.
void check_xor_pipeline_agreement(double p, double q1, double q2) {
    INFO("p=" << p << " q1=" << q1 << " q2=" << q2);
    const auto closed = lossy_xor_closed_form(p, q1, q2);
    const auto xyuv = dsbs_with_channels(p, q1, q2);
    const DistortionFn dist = [](int x, int y, std::int64_t zhat) {
        return zhat == ((x + y) % 2) ? 0.0 : 1.0;
    };
    const auto rec = optimal_reconstruction(xyuv, {0, 1}, dist);
    // The reconstruction is a function of the mod-2 sum of (U, V); embed it.
    Embedding emb;
    emb.group = parse_group("Z2");
    emb.su = {0, 1};
    emb.sv = {0, 1};
    emb.decode = {rec.table.at(0, 0), rec.table.at(0, 1)};
    REQUIRE(rec.table.at(0, 0) == rec.table.at(1, 1));
    REQUIRE(rec.table.at(0, 1) == rec.table.at(1, 0));
    const auto pt = staged_rate_point(xyuv, emb, {0}, {StagePolicy::kMin}, dist);
    CHECK_THAT(pt.r1, WithinAbs(closed.r1, 1e-9));
    CHECK_THAT(pt.r2, WithinAbs(closed.r2, 1e-9));
    CHECK_THAT(pt.d, WithinAbs(closed.d, 1e-9));
}

}  // namespace

TEST_CASE("lossy xor closed form agrees with the staged pipeline") {
    check_xor_pipeline_agreement(0.2, 1.0, 0.9);   // sum coding
    check_xor_pipeline_agreement(0.2, 0.3, 0.6);   // silence
    check_xor_pipeline_agreement(0.2, 0.0, 0.9);   // complement
    check_xor_pipeline_agreement(0.2, 1.0, 0.2);   // exact tie at alpha = p
    check_xor_pipeline_agreement(0.2, 0.2, 0.0);   // exact tie at alpha = q
    check_xor_pipeline_agreement(0.8, 0.5, 0.5);   // constant one
    check_xor_pipeline_agreement(0.2, 0.9, 0.8);   // interior silence cell
}

TEST_CASE("coset conditional entropy maximizer is tight and feasible") {
    // Z4, subgroup 2Z4, no side information.
    {
        const std::vector<double> zs{0.5, 0.0, 0.25, 0.25};
        const auto res = max_coset_conditional_entropy(zs, 2, 2, 1, 1);
        CHECK_THAT(res.value, WithinAbs(1.5 - binary_entropy(0.25), 1e-12));
        CHECK_THAT(res.value, WithinAbs(0.688721875541, 1e-9));
        // Mass only on subgroup noise values.
        for (int z = 0; z < 4; ++z)
            for (int w : {1, 3})
                CHECK(res.joint[static_cast<std::size_t>(z * 4 + w)] == 0.0);
    }
    // With side information, check every defining property numerically.
    {
        const std::vector<double> zs{0.10, 0.05, 0.20, 0.10, 0.06, 0.14, 0.15, 0.20};
        const std::int64_t m = 4;
        const std::size_t s_size = 2;
        const auto res = max_coset_conditional_entropy(zs, 2, 2, 1, s_size);

        // Value equals H(Z|S) - H(Z mod 2 | S).
        std::vector<double> sm(s_size, 0.0), labs(2 * s_size, 0.0);
        for (std::int64_t z = 0; z < m; ++z)
            for (std::size_t s = 0; s < s_size; ++s) {
                sm[s] += zs[static_cast<std::size_t>(z) * s_size + s];
                labs[static_cast<std::size_t>(z % 2) * s_size + s] +=
                    zs[static_cast<std::size_t>(z) * s_size + s];
            }
        const double want = (entropy_of(zs) - entropy_of(sm)) - (entropy_of(labs) - entropy_of(sm));
        CHECK_THAT(res.value, WithinAbs(want, 1e-12));

        // Marginal over the noise returns the source joint.
        for (std::int64_t z = 0; z < m; ++z)
            for (std::size_t s = 0; s < s_size; ++s) {
                double mass = 0;
                for (std::int64_t w = 0; w < m; ++w)
                    mass += res.joint[(static_cast<std::size_t>(z) * m + static_cast<std::size_t>(w)) * s_size + s];
                CHECK_THAT(mass, WithinAbs(zs[static_cast<std::size_t>(z) * s_size + s], 1e-12));
            }
        // Adding the noise preserves the conditional law of the sum.
        for (std::int64_t t = 0; t < m; ++t)
            for (std::size_t s = 0; s < s_size; ++s) {
                double mass = 0;
                for (std::int64_t z = 0; z < m; ++z) {
                    const std::int64_t w = (t - z + m) % m;
                    mass += res.joint[(static_cast<std::size_t>(z) * m + static_cast<std::size_t>(w)) * s_size + s];
                }
                CHECK_THAT(mass, WithinAbs(zs[static_cast<std::size_t>(t) * s_size + s], 1e-12));
            }
        // The maximizer attains the value: H(W | Z, S) from the joint.
        const double h_w_given_zs = entropy_of(res.joint) - entropy_of(zs);
        CHECK_THAT(h_w_given_zs, WithinAbs(res.value, 1e-12));
    }
    // Degenerate subgroup indices.
    {
        const std::vector<double> zs{0.4, 0.3, 0.2, 0.1};
        const auto whole = max_coset_conditional_entropy(zs, 2, 2, 0, 1);
        CHECK_THAT(whole.value, WithinAbs(entropy_of(zs), 1e-12));
        CHECK_THAT(entropy_of(whole.joint) - entropy_of(zs), WithinAbs(whole.value, 1e-12));
        const auto trivial = max_coset_conditional_entropy(zs, 2, 2, 2, 1);
        CHECK_THAT(trivial.value, WithinAbs(0.0, 1e-15));
        CHECK_THAT(entropy_of(trivial.joint), WithinAbs(entropy_of(zs), 1e-12));
    }
}

TEST_CASE("single-encoder lossless group rate and entropy-bound flag") {
    // Uniform on Z_4: every maximand equals 2 and the bound is attained.
    auto uniform = lossless_group_rate({0.25, 0.25, 0.25, 0.25}, 2, 2);
    CHECK_THAT(uniform.rate, WithinAbs(2.0, 1e-12));
    CHECK(uniform.attains_entropy);

    // Mass concentrated on the even coset drives the i=1 maximand above H(X).
    const double h = entropy_of({0.45, 0.05, 0.45, 0.05});
    auto skew = lossless_group_rate({0.45, 0.05, 0.45, 0.05}, 2, 2);
    CHECK_THAT(skew.rate, WithinAbs(2 * (h - binary_entropy(0.1)), 1e-12));
    CHECK(skew.rate > h);
    CHECK_FALSE(skew.attains_entropy);

    // r = 1 always attains H(X).
    auto bin = lossless_group_rate({0.3, 0.7}, 2, 1);
    CHECK_THAT(bin.rate, WithinAbs(binary_entropy(0.3), 1e-12));
    CHECK(bin.attains_entropy);

    CHECK_THROWS_AS(lossless_group_rate({0.5, 0, 0.5, 0}, 2, 2), input_error);
}

TEST_CASE("binary modulo-2 sum rate shortcut") {
    // Symmetric pair with flip probability 0.1: the doubled sum-entropy wins.
    auto dsbs = JointPMF::from_flat({2, 2}, {0.45, 0.05, 0.05, 0.45});
    CHECK_THAT(korner_marton_sum_rate(dsbs), WithinAbs(2 * binary_entropy(0.1), 1e-12));

    // Independent uniform bits: both arguments equal 2.
    auto indep = JointPMF::independent({{0.5, 0.5}, {0.5, 0.5}});
    CHECK_THAT(korner_marton_sum_rate(indep), WithinAbs(2.0, 1e-12));

    // Identical sources: the sum is constant.
    auto equal = JointPMF::from_flat({2, 2}, {0.6, 0, 0, 0.4});
    CHECK_THAT(korner_marton_sum_rate(equal), WithinAbs(0.0, 1e-12));

    CHECK_THROWS_AS(korner_marton_sum_rate(JointPMF::from_flat({3, 2}, {0.2, 0.2, 0.2, 0.2, 0.1, 0.1})),
                    input_error);

    // Agreement with the staged pipeline over Z2 and Z2+Z2.
    FunctionTable xor2{2, 2, {0, 1, 1, 0}};
    std::vector<AbelianGroup> groups = {parse_group("Z2"), parse_group("Z2^2")};
    for (const auto& xy : {dsbs, indep}) {
        CHECK_THAT(best_lossless_sum_rate(xy, xor2, groups),
                   WithinAbs(korner_marton_sum_rate(xy), 1e-9));
    }
}

TEST_CASE("stage records expose both option rates and the chosen one") {
    // Uniform independent pair on Z_4 computing the difference: at the first
    // stage both encoders keep the sum option; records must carry all four
    // option values and consistent choices.
    auto xy = JointPMF::independent({{0.25, 0.25, 0.25, 0.25}, {0.7, 0.1, 0.1, 0.1}});
    auto xyuv = lossless_pair_joint(xy);
    auto emb = z4_diff_embedding();
    std::vector<StageBreakdown> stages;
    auto pt = staged_rate_point(xyuv, emb, {0}, {}, function_mismatch_distortion(kDiffMod4),
                                &stages);
    REQUIRE(stages.size() == 1);
    const auto& sb = stages[0];
    CHECK(sb.digit == 0);
    CHECK_THAT(sb.r1, WithinAbs(pt.r1, 1e-12));
    CHECK_THAT(sb.r2, WithinAbs(pt.r2, 1e-12));
    CHECK(sb.r1 == (sb.choice1 == 1 ? sb.r1_option1 : sb.r1_option2));
    CHECK(sb.r2 == (sb.choice2 == 1 ? sb.r2_option1 : sb.r2_option2));
    CHECK_THAT(sb.r1, WithinAbs(std::min(sb.r1_option1, sb.r1_option2), 1e-12));
    CHECK_THAT(sb.r2, WithinAbs(std::min(sb.r2_option1, sb.r2_option2), 1e-12));
    CHECK(sb.r1_option1 >= 0);
    CHECK(sb.r2_option1 >= 0);

    // Forced sum-digit mode marks silent encoders as option 2.
    std::vector<StageBreakdown> forced;
    StagePolicy sum_first;
    sum_first.mode = StagePolicy::kSumFirst;
    staged_rate_point(xyuv, emb, {0}, sum_first, function_mismatch_distortion(kDiffMod4),
                      &forced);
    REQUIRE(forced.size() == 1);
    CHECK(forced[0].choice1 == 1);
    CHECK_THAT(forced[0].r1, WithinAbs(forced[0].r1_option1, 1e-12));
}
