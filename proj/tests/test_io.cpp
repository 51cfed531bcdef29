#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "grouprd/io.hpp"

using grouprd::ProblemSpec;

namespace {

ProblemSpec xor_demo_spec() {
    ProblemSpec s;
    s.name = "xor-demo";
    s.nx = s.ny = 2;
    s.sources.push_back({"main", {0.4, 0.1, 0.1, 0.4}});
    s.function_values = {0, 1, 1, 0};
    s.distortion.preset = "hamming-on-function";
    s.nu = s.nv = 2;
    s.groups.policy = "explicit";
    s.groups.list = {"Z2"};
    s.groups.rule = "min";
    s.sweep.step = 0.25;
    return s;
}

}  // namespace

TEST_CASE("input digest matches reference values") {
    REQUIRE(grouprd::fnv1a_digest("") == "fnv1a:cbf29ce484222325");
    REQUIRE(grouprd::fnv1a_digest("abc") == "fnv1a:e71fa2190541574b");
    REQUIRE(grouprd::fnv1a_digest("{}") == "fnv1a:08f44b07b5901a25");
}

TEST_CASE("problem spec serialization round-trips canonically") {
    const ProblemSpec s = xor_demo_spec();
    const std::string once = grouprd::dump_spec(s);
    const ProblemSpec back = grouprd::parse_spec(once);
    REQUIRE(grouprd::dump_spec(back) == once);
    REQUIRE(back.name == "xor-demo");
    REQUIRE(back.sources.size() == 1);
    REQUIRE(back.sources[0].pmf == s.sources[0].pmf);
    REQUIRE(back.function_values == s.function_values);
    REQUIRE(back.groups.list == s.groups.list);
    REQUIRE_FALSE(back.sim.has_value());
}

TEST_CASE("parsing fills defaults and validates") {
    const char* text = R"({
      "alphabet": {"nx": 2, "ny": 2},
      "function": {"values": [0, 1, 1, 0]},
      "sources": [{"name": "s", "pmf": [0.25, 0.25, 0.25, 0.25]}]
    })";
    const ProblemSpec s = grouprd::parse_spec(text);
    REQUIRE(s.groups.policy == "auto");
    REQUIRE(s.groups.rule == "min");
    REQUIRE(s.sweep.max_embeddings == 64);
    REQUIRE(s.distortion.preset == "hamming-on-function");

    REQUIRE_THROWS_AS(grouprd::parse_spec("not json"), grouprd::input_error);
    REQUIRE_THROWS_AS(grouprd::parse_spec(R"({"alphabet": {"nx": 0, "ny": 2}})"),
                      grouprd::input_error);
    REQUIRE_THROWS_AS(
        grouprd::parse_spec(
            R"({"sources": [{"name": "s", "pmf": [0.9, 0.2]}], "alphabet": {"nx": 1, "ny": 2}})"),
        grouprd::input_error);
    REQUIRE_THROWS_AS(
        grouprd::parse_spec(R"({"groups": {"policy": "explicit", "list": ["Q8"]}})"),
        grouprd::input_error);
}

TEST_CASE("sim section parses into both engine configurations") {
    const char* text = R"({
      "sim": {"check": "km", "block_length": 40, "syndrome_rows": 22, "crossover": 0.03,
              "matrix_seeds": 3, "trials_per_seed": 7, "isd_iterations": 12,
              "seed": 9, "p": 3, "r": 2, "n": 4, "k": 2}
    })";
    const ProblemSpec s = grouprd::parse_spec(text);
    REQUIRE(s.sim.has_value());
    REQUIRE(s.sim->check == "km");
    REQUIRE(s.sim->km.n == 40);
    REQUIRE(s.sim->km.k == 22);
    REQUIRE(s.sim->km.crossover == 0.03);
    REQUIRE(s.sim->km.trials_per_seed == 7);
    REQUIRE(s.sim->km.seed == 9);
    REQUIRE(s.sim->config.p == 3);
    REQUIRE(s.sim->config.r == 2);
    REQUIRE(s.sim->config.seed == 9);
    const std::string once = grouprd::dump_spec(s);
    REQUIRE(grouprd::dump_spec(grouprd::parse_spec(once)) == once);
}

TEST_CASE("spec adapters expose the engine inputs") {
    ProblemSpec s = xor_demo_spec();
    const grouprd::FunctionTable f = grouprd::spec_function(s);
    REQUIRE(f.at(1, 0) == 1);
    const grouprd::JointPMF xy = grouprd::spec_joint(s, s.sources[0]);
    REQUIRE(xy.num_vars() == 2);
    REQUIRE(grouprd::spec_zhat_values(s) == std::vector<std::int64_t>{0, 1});
    const grouprd::DistortionFn dist = grouprd::spec_distortion(s);
    REQUIRE(dist(0, 1, 1) == 0.0);
    REQUIRE(dist(0, 1, 0) == 1.0);
    const auto groups = grouprd::spec_groups(s);
    REQUIRE(groups.size() == 1);
    REQUIRE(groups[0].name() == "Z2");

    s.distortion.preset = "table";
    s.distortion.zhat_values = {7, 9};
    s.distortion.table = {0, 1, 2, 3, 4, 5, 6, 7};
    const grouprd::DistortionFn custom = grouprd::spec_distortion(s);
    REQUIRE(custom(0, 1, 9) == 3.0);
    REQUIRE(custom(1, 1, 7) == 6.0);
    REQUIRE_THROWS_AS(custom(0, 0, 8), grouprd::input_error);
}

TEST_CASE("permutation cap guards the stage-order sweep") {
    ProblemSpec s = xor_demo_spec();
    s.sweep.permutation_cap = 100;
    const grouprd::AbelianGroup big = grouprd::parse_group("Z2+Z2+Z2+Z2+Z2");
    REQUIRE_THROWS_AS(grouprd::check_permutation_cap(s, {big}), grouprd::resource_error);
    grouprd::check_permutation_cap(s, {grouprd::parse_group("Z2+Z2+Z2")});
}

TEST_CASE("identity channels reproduce the sources") {
    const auto chans = grouprd::identity_channels(2, 3);
    REQUIRE(chans.size() == 1);
    REQUIRE(chans[0].id == "identity");
    const grouprd::JointPMF xy =
        grouprd::JointPMF::from_flat({2, 3}, {0.1, 0.2, 0.3, 0.15, 0.05, 0.2});
    const grouprd::JointPMF xyuv =
        grouprd::compose_markov(xy, chans[0].u_given_x, chans[0].v_given_y);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 3; ++y) {
            REQUIRE(xyuv.at({x, y, x, y}) == Catch::Approx(xy.at({x, y})));
        }
}

TEST_CASE("region CSV rows carry recomputable precision") {
    grouprd::ResultBundle b;
    b.mode = "theorem1";
    b.input_digest = grouprd::fnv1a_digest("x");
    grouprd::SourceResult sr;
    sr.source = "main";
    grouprd::RegionCurve curve;
    grouprd::RatePointRecord p;
    p.d = 1.0 / 3.0;
    p.r1 = 0.123456789012345;
    p.r2 = 2.0 / 7.0;
    p.rsum = p.r1 + p.r2;
    p.group = "Z2";
    p.permutation = "0";
    p.options = "11";
    p.channel_id = "u=[1 0][0 1] v=[1 0][0 1]";
    curve.points.push_back(p);
    curve.build_envelope();
    sr.theorem1 = curve;
    b.results.push_back(sr);

    const std::string csv = grouprd::region_csv(b);
    REQUIRE(csv.substr(0, std::string(grouprd::kRegionCsvHeader).size()) ==
            grouprd::kRegionCsvHeader);
    const auto lines_end = csv.find('\n');
    const std::string row = csv.substr(lines_end + 1, csv.find('\n', lines_end + 1) - lines_end - 1);
    const double d_back = std::stod(row.substr(0, row.find(',')));
    REQUIRE(std::abs(d_back - p.d) <= 1e-12);
    REQUIRE(row.find("theorem1,main") != std::string::npos);

    const nlohmann::json j = b;
    REQUIRE(j["tool"] == "grouprd");
    REQUIRE(j["version"] == "0.1.0");
    REQUIRE(j["results"][0]["theorem1"]["points"][0]["group"] == "Z2");
}

TEST_CASE("envelope input accepts region CSV and bare columns") {
    const std::string csv =
        "D,R1,R2,Rsum,group,permutation,options,channel_id\n"
        "0.5,1,1,2,Z2,0,11,\"u=[0.5 0.5],v\"\n"
        "0,1.5,1.5,3,Z2,0,11,id\n";
    auto pts = grouprd::parse_envelope_input(csv);
    REQUIRE(pts.size() == 2);
    REQUIRE(pts[0].d == 0.5);
    REQUIRE(pts[0].rsum == 2.0);
    REQUIRE(pts[1].rsum == 3.0);

    auto bare = grouprd::parse_envelope_input("# comment\n0.1 2.5\n0.2  2.0\n");
    REQUIRE(bare.size() == 2);
    REQUIRE(bare[1].d == 0.2);

    auto commas = grouprd::parse_envelope_input("0.1,2.5\n0.2,2.0\n");
    REQUIRE(commas.size() == 2);

    REQUIRE_THROWS_AS(grouprd::parse_envelope_input("D,Rsum\n"), grouprd::input_error);
    REQUIRE_THROWS_AS(grouprd::parse_envelope_input("0.1,abc\n"), grouprd::input_error);
    REQUIRE_THROWS_AS(grouprd::parse_envelope_input("0.1\n"), grouprd::input_error);
}

TEST_CASE("envelope text output is plot-ready") {
    const std::string text = grouprd::envelope_text({{0.0, 3.0}, {0.5, 1.0}});
    REQUIRE(text == "# D Rsum\n0 3\n0.5 1\n");
    const auto back = grouprd::parse_envelope_input(text);
    REQUIRE(back.size() == 2);
    REQUIRE(back[1].rsum == 1.0);
}
