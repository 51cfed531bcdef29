// Command-line surface: group decomposition, embedding search, rate-region
// sweeps, lemma/codec simulation, and envelope post-processing.
//
// Exit codes: 0 success, 1 verification failure (an exhaustive check deviated
// from its prediction), 2 input error, 3 resource guard.

#include <cstdio>
#include <iostream>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grouprd/group.hpp"
#include "grouprd/io.hpp"
#include "grouprd/km.hpp"
#include "grouprd/region.hpp"
#include "grouprd/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

std::string summary_number(double v) { return grouprd::format_sig(v, 6); }

// ---------------------------------------------------------------------------
// decompose

struct DecomposeArgs {
    std::string target;
    std::int64_t order = 0;
    bool json = false;
};

int run_decompose(const DecomposeArgs& args) {
    std::int64_t order = args.order;
    std::string group_name;
    if (!args.target.empty()) {
        bool digits = true;
        for (char c : args.target)
            if (!std::isdigit(static_cast<unsigned char>(c))) digits = false;
        if (digits)
            order = std::stoll(args.target);
        else
            group_name = args.target;
    }
    nlohmann::json out;
    if (!group_name.empty()) {
        const grouprd::AbelianGroup g = grouprd::parse_group(group_name);
        out["name"] = g.name();
        out["order"] = g.order();
        auto& factors = out["factors"] = nlohmann::json::array();
        for (const auto& f : g.factors()) factors.push_back({{"p", f.p}, {"r", f.r}});
        if (args.json) {
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "name " << g.name() << "\norder " << g.order() << "\nfactors";
            for (const auto& f : g.factors()) std::cout << " " << f.p << "^" << f.r;
            std::cout << "\n";
        }
        return kExitOk;
    }
    if (order < 2) throw grouprd::input_error("decompose: order must be at least 2");
    const grouprd::AbelianGroup cyclic = grouprd::decompose_cyclic(order);
    const std::vector<grouprd::AbelianGroup> classes =
        grouprd::enumerate_abelian_groups(order, order);
    if (args.json) {
        out["order"] = order;
        out["cyclic"] = cyclic.name();
        auto& arr = out["classes"] = nlohmann::json::array();
        for (const auto& g : classes) arr.push_back(g.name());
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "order " << order << "\ncyclic " << cyclic.name() << "\nclasses "
                  << classes.size() << "\n";
        for (const auto& g : classes) std::cout << "  " << g.name() << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// embed

struct EmbedArgs {
    std::string spec_path;
    std::string group;  // empty: spec policy; "auto": candidate sweep
    bool all = false;
};

int run_embed(const EmbedArgs& args) {
    const std::string bytes = grouprd::read_file(args.spec_path);
    const grouprd::ProblemSpec spec = grouprd::parse_spec(bytes);
    const grouprd::FunctionTable f = grouprd::spec_function(spec);

    std::vector<grouprd::AbelianGroup> groups;
    if (!args.group.empty() && args.group != "auto") {
        groups.push_back(grouprd::parse_group(args.group));
    } else if (args.group == "auto" || spec.groups.policy == "auto") {
        groups = grouprd::candidate_groups(f);
    } else {
        groups = grouprd::spec_groups(spec);
    }

    grouprd::EmbedOptions opt;
    if (!args.all)
        opt.max_results = static_cast<std::size_t>(spec.sweep.max_embeddings);

    nlohmann::json out;
    out["tool"] = grouprd::kToolName;
    out["version"] = grouprd::kToolVersion;
    out["input_digest"] = grouprd::fnv1a_digest(bytes);
    out["function"] = spec.function_values;
    auto& results = out["results"] = nlohmann::json::array();
    for (const auto& g : groups) {
        nlohmann::json entry;
        entry["group"] = g.name();
        auto& embs = entry["embeddings"] = nlohmann::json::array();
        for (const auto& emb : grouprd::find_embeddings(f, g, {}, opt)) {
            embs.push_back({{"su", emb.su}, {"sv", emb.sv}, {"decode", emb.decode}});
        }
        results.push_back(std::move(entry));
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// region

struct RegionArgs {
    std::string spec_path;
    std::string mode = "theorem1";
    std::string out_path;
};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int run_region(const RegionArgs& args) {
    if (args.mode != "theorem1" && args.mode != "berger-tung" && args.mode != "both")
        throw grouprd::input_error("region: mode must be theorem1, berger-tung, or both");
    const std::string bytes = grouprd::read_file(args.spec_path);
    const grouprd::ProblemSpec spec = grouprd::parse_spec(bytes);
    if (spec.sources.empty()) throw grouprd::input_error("region: spec has no sources");
    const grouprd::FunctionTable f = grouprd::spec_function(spec);
    const std::vector<std::int64_t> zhat = grouprd::spec_zhat_values(spec);
    const grouprd::DistortionFn dist = grouprd::spec_distortion(spec);
    const grouprd::RegionPolicy policy = grouprd::spec_region_policy(spec);
    const bool lossless = spec.distortion.preset == "lossless";
    const bool want_t1 = args.mode != "berger-tung";
    const bool want_bt = args.mode != "theorem1";
    if (lossless && want_bt)
        throw grouprd::input_error(
            "region: the lossless preset fixes identity channels; use --mode theorem1");

    // The stage-order sweep visits every group the policy can reach.
    {
        std::vector<grouprd::AbelianGroup> reachable = policy.groups;
        if (reachable.empty())
            reachable = grouprd::enumerate_abelian_groups(
                2, std::max<std::int64_t>(2, static_cast<std::int64_t>(spec.nu) * spec.nv));
        grouprd::check_permutation_cap(spec, reachable);
    }

    grouprd::ResultBundle bundle;
    bundle.mode = args.mode;
    bundle.input_digest = grouprd::fnv1a_digest(bytes);
    std::vector<grouprd::ChannelPair> channels;
    if (want_t1) {
        channels = lossless ? grouprd::identity_channels(spec.nx, spec.ny)
                            : grouprd::channel_pair_grid(spec.nx, spec.ny, spec.nu, spec.nv,
                                                         spec.sweep.step);
    }
    for (const auto& src : spec.sources) {
        const grouprd::JointPMF xy = grouprd::spec_joint(spec, src);
        grouprd::SourceResult sr;
        sr.source = src.name;
        if (want_t1) sr.theorem1 = grouprd::theorem1_region(xy, channels, zhat, dist, policy);
        if (want_bt)
            sr.berger_tung =
                grouprd::berger_tung_region(xy, zhat, dist, spec.nu, spec.nv, spec.sweep.step);
        bundle.results.push_back(std::move(sr));
    }

    const bool json_out = ends_with(args.out_path, ".json");
    std::string serialized =
        json_out ? nlohmann::json(bundle).dump(2) + "\n" : grouprd::region_csv(bundle);
    if (args.out_path.empty()) {
        std::cout << serialized;
        return kExitOk;
    }
    grouprd::write_file(args.out_path, serialized);

    // Short human-readable summary: per source, the best sum rate per group
    // (lossless) or the envelope span (lossy sweeps).
    for (const auto& sr : bundle.results) {
        auto summarize = [&](const grouprd::RegionCurve& curve, const char* mode) {
            std::cout << "source " << sr.source << " [" << mode << "]";
            if (lossless) {
                std::vector<std::pair<std::string, double>> best;
                for (const auto& p : curve.points) {
                    auto it = std::find_if(best.begin(), best.end(),
                                           [&](const auto& kv) { return kv.first == p.group; });
                    if (it == best.end())
                        best.emplace_back(p.group, p.rsum);
                    else if (p.rsum < it->second)
                        it->second = p.rsum;
                }
                for (const auto& [gname, rsum] : best)
                    std::cout << " " << gname << " " << summary_number(rsum);
            } else if (!curve.envelope.empty()) {
                std::cout << " points " << curve.points.size() << ", envelope "
                          << curve.envelope.size() << " vertices, D in ["
                          << summary_number(curve.envelope.front().d) << ", "
                          << summary_number(curve.envelope.back().d) << "], Rsum down to "
                          << summary_number(curve.envelope.back().rsum);
            }
            std::cout << "\n";
        };
        if (sr.theorem1) summarize(*sr.theorem1, "theorem1");
        if (sr.berger_tung) summarize(*sr.berger_tung, "berger-tung");
    }
    std::cout << "wrote " << args.out_path << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    std::string spec_path;
    std::string check;
    std::uint64_t seed = 0;
    std::optional<long long> trials;
    std::optional<std::int64_t> p;
    std::optional<int> r, n, k, k11, k12, k2;
    std::optional<double> epsilon, flip;
    std::optional<std::string> decoder;
    std::optional<int> matrix_seeds, isd_iterations, threads;
    std::vector<std::int64_t> z, u1, u2;
};

std::vector<std::int64_t> unit_vector(int n, int position) {
    std::vector<std::int64_t> e(static_cast<std::size_t>(n), 0);
    if (position < n) e[static_cast<std::size_t>(position)] = 1;
    return e;
}

int finish_sim(const grouprd::SimReport& report) {
    std::cout << nlohmann::json(report).dump(2) << "\n";
    if (report.exact_failure()) return kExitVerification;
    if (!report.all_pass())
        std::cerr << "note: a Monte Carlo entry fell outside its 4-sigma band\n";
    return kExitOk;
}

int run_simulate(const SimulateArgs& args) {
    grouprd::SimSpec sim;
    std::optional<grouprd::ProblemSpec> spec;
    if (!args.spec_path.empty()) {
        spec = grouprd::parse_spec(grouprd::read_file(args.spec_path));
        if (spec->sim) sim = *spec->sim;
    }
    if (!args.check.empty()) sim.check = args.check;
    sim.config.seed = args.seed;
    sim.km.seed = args.seed;
    if (args.p) sim.config.p = *args.p;
    if (args.r) sim.config.r = *args.r;
    if (args.k11) sim.config.k11 = *args.k11;
    if (args.k12) sim.config.k12 = *args.k12;
    if (args.k2) sim.config.k2 = *args.k2;
    if (args.epsilon) {
        sim.config.epsilon = *args.epsilon;
        sim.km.epsilon = *args.epsilon;
    }
    if (args.decoder) {
        if (*args.decoder == "ml")
            sim.config.decoder = grouprd::DecoderKind::kMaxLikelihood;
        else if (*args.decoder == "typicality")
            sim.config.decoder = grouprd::DecoderKind::kTypicality;
        else
            throw grouprd::input_error("simulate: decoder must be 'ml' or 'typicality'");
        sim.km.decoder = sim.config.decoder;
    }
    if (!args.z.empty()) sim.z = args.z;
    if (!args.u1.empty()) sim.u1 = args.u1;
    if (!args.u2.empty()) sim.u2 = args.u2;

    if (sim.check == "km") {
        if (args.n) sim.km.n = *args.n;
        if (args.k) sim.km.k = *args.k;
        if (args.flip) sim.km.crossover = *args.flip;
        if (args.trials) sim.km.trials_per_seed = *args.trials;
        if (args.matrix_seeds) sim.km.matrix_seeds = *args.matrix_seeds;
        if (args.isd_iterations) sim.km.isd_iterations = *args.isd_iterations;
        if (args.threads) sim.km.threads = *args.threads;
        const grouprd::KmResult result = grouprd::km_codec_run(sim.km);
        std::cout << nlohmann::json(result).dump(2) << "\n";
        return kExitOk;
    }

    if (args.n) sim.config.n = *args.n;
    if (args.k) sim.config.k = *args.k;
    if (args.trials) sim.config.trials = *args.trials;
    const grouprd::SimConfig& cfg = sim.config;

    if (sim.check == "lemma4") {
        const auto z = sim.z.empty() ? unit_vector(cfg.n, 0) : sim.z;
        return finish_sim(grouprd::kernel_membership_check(cfg, z));
    }
    if (sim.check == "lemma6") {
        const auto u1 = sim.u1.empty() ? unit_vector(cfg.n, 0) : sim.u1;
        const auto u2 = sim.u2.empty() ? unit_vector(cfg.n, 1) : sim.u2;
        return finish_sim(grouprd::joint_kernel_check(cfg, u1, u2));
    }
    if (sim.check == "lemma7") {
        const auto u1 = sim.u1.empty() ? unit_vector(cfg.n, 0) : sim.u1;
        return finish_sim(grouprd::count_dependency_classes(cfg, u1));
    }
    if (sim.check == "lemma8") return finish_sim(grouprd::linear_solution_check(cfg.p, cfg.r));
    if (sim.check == "nested") return finish_sim(grouprd::nested_containment_check(cfg));
    if (sim.check == "cover") {
        if (!spec || spec->sources.empty())
            throw grouprd::input_error("simulate: the cover check needs --spec with a source law");
        const grouprd::JointPMF xu = grouprd::spec_joint(*spec, spec->sources.front());
        return finish_sim(grouprd::source_cover_check(cfg, xu));
    }
    throw grouprd::input_error("simulate: unknown check '" + sim.check + "'");
}

// ---------------------------------------------------------------------------
// envelope

struct EnvelopeArgs {
    std::string in_path;
    std::string out_path;
};

int run_envelope(const EnvelopeArgs& args) {
    const auto pts = grouprd::parse_envelope_input(grouprd::read_file(args.in_path));
    const auto hull = grouprd::lower_convex_envelope(pts);
    const std::string text = grouprd::envelope_text(hull);
    if (args.out_path.empty())
        std::cout << text;
    else
        grouprd::write_file(args.out_path, text);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rate regions, group embeddings, and code-construction checks "
                 "for two-terminal function computation"};
    app.require_subcommand(1);

    DecomposeArgs dec;
    auto* cmd_dec = app.add_subcommand("decompose",
                                       "List the primary decomposition and all abelian groups "
                                       "of an order, or describe a named group");
    cmd_dec->add_option("target", dec.target, "Order (integer) or group name such as Z4+Z3");
    cmd_dec->add_option("--order", dec.order, "Group order");
    cmd_dec->add_flag("--json", dec.json, "Emit JSON");

    EmbedArgs emb;
    auto* cmd_emb = app.add_subcommand("embed", "Search for embeddings of the spec's function");
    cmd_emb->add_option("--spec", emb.spec_path, "Problem spec (JSON)")->required();
    cmd_emb->add_option("--group", emb.group, "Group name, or 'auto' for the candidate sweep");
    cmd_emb->add_flag("--all", emb.all, "Do not cap the number of embeddings per group");

    RegionArgs reg;
    auto* cmd_reg = app.add_subcommand("region", "Sweep achievable rate-distortion points");
    cmd_reg->add_option("--spec", reg.spec_path, "Problem spec (JSON)")->required();
    cmd_reg->add_option("--mode", reg.mode, "theorem1 | berger-tung | both");
    cmd_reg->add_option("--out", reg.out_path, "Output path (.csv or .json)");

    SimulateArgs simargs;
    auto* cmd_sim = app.add_subcommand("simulate", "Run code-construction checks");
    cmd_sim->add_option("--spec", simargs.spec_path, "Problem spec with a sim section");
    cmd_sim->add_option("--check", simargs.check,
                        "lemma4 | lemma6 | lemma7 | lemma8 | nested | cover | km");
    cmd_sim->add_option("--seed", simargs.seed, "Random seed")->required();
    cmd_sim->add_option("--trials", simargs.trials, "Sample count (per matrix seed for km)");
    cmd_sim->add_option("--p", simargs.p, "Prime");
    cmd_sim->add_option("--r", simargs.r, "Prime-power exponent");
    cmd_sim->add_option("--n", simargs.n, "Block length");
    cmd_sim->add_option("--k", simargs.k, "Parity rows (km: syndrome length)");
    cmd_sim->add_option("--k11", simargs.k11, "Nested construction row count k11");
    cmd_sim->add_option("--k12", simargs.k12, "Nested construction row count k12");
    cmd_sim->add_option("--k2", simargs.k2, "Nested construction row count k2");
    cmd_sim->add_option("--epsilon", simargs.epsilon, "Typicality half-width");
    cmd_sim->add_option("--flip", simargs.flip, "Crossover probability for km");
    cmd_sim->add_option("--decoder", simargs.decoder, "ml | typicality");
    cmd_sim->add_option("--matrix-seeds", simargs.matrix_seeds, "Independent matrix draws for km");
    cmd_sim->add_option("--isd-iterations", simargs.isd_iterations,
                        "Information-set restarts per decode");
    cmd_sim->add_option("--threads", simargs.threads, "Worker threads for km");
    cmd_sim->add_option("--z", simargs.z, "Target element for lemma4 (comma separated)")
        ->delimiter(',');
    cmd_sim->add_option("--u1", simargs.u1, "First element for lemma6/lemma7")->delimiter(',');
    cmd_sim->add_option("--u2", simargs.u2, "Second element for lemma6")->delimiter(',');

    EnvelopeArgs env;
    auto* cmd_env = app.add_subcommand("envelope", "Lower convex envelope of (D, Rsum) points");
    cmd_env->add_option("--in", env.in_path, "Input CSV (region CSV or two columns)")->required();
    cmd_env->add_option("--out", env.out_path, "Output path (default: stdout)");

    try {
        app.parse(argc, argv);
        if (cmd_dec->parsed()) return run_decompose(dec);
        if (cmd_emb->parsed()) return run_embed(emb);
        if (cmd_reg->parsed()) return run_region(reg);
        if (cmd_sim->parsed()) return run_simulate(simargs);
        if (cmd_env->parsed()) return run_envelope(env);
        return kExitInput;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    } catch (const grouprd::resource_error& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return kExitResource;
    } catch (const grouprd::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::bad_alloc&) {
        std::cerr << "resource guard: out of memory\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    }
}
