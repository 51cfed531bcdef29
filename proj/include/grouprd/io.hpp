#pragma once
// Problem-specification files, result bundles, and their JSON/CSV forms.
//
// A ProblemSpec describes one two-terminal computation problem: named joint
// source laws on a common alphabet pair, the target bivariate function, a
// distortion rule, auxiliary alphabet sizes, the group search policy, sweep
// resolution, and an optional simulation section.  Specs serialize to
// canonical JSON (sorted keys, normalized defaults), so serialize-parse is
// the identity on the struct and byte-identical on the text.
//
// A ResultBundle carries region points with enough provenance (group, stage
// order, per-stage option choices, channel id) to recompute every point, plus
// lower convex envelopes, an input digest, and the tool version.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "grouprd/embed.hpp"
#include "grouprd/envelope.hpp"
#include "grouprd/group.hpp"
#include "grouprd/km.hpp"
#include "grouprd/pmf.hpp"
#include "grouprd/rates.hpp"
#include "grouprd/region.hpp"
#include "grouprd/sim.hpp"

namespace grouprd {

inline constexpr const char* kToolName = "grouprd";
inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Input digest: FNV-1a over the raw bytes, rendered as fnv1a:<16 hex digits>.

inline std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Problem specification.

struct SourceSpec {
    std::string name;
    std::vector<double> pmf;  // nx * ny entries, row major in x
};

struct DistortionSpec {
    // "hamming-on-function": 0/1 mismatch against the function value, lossy
    // sweep.  "lossless": same mismatch, but the sources pass through
    // identity channels and every embedding computes the function exactly.
    // "table": explicit per-reconstruction costs.
    std::string preset = "hamming-on-function";
    std::vector<std::int64_t> zhat_values;  // table preset only
    std::vector<double> table;              // nx * ny * zhat_values.size()
};

struct GroupsSpec {
    std::string policy = "auto";  // "auto" | "explicit"
    std::vector<std::string> list;
    std::string rule = "min";       // "min" | "sum-first"
    std::string emit = "chosen";    // "chosen" | "all-options"
};

struct SweepSpec {
    double step = 0.1;
    int max_embeddings = 64;
    std::int64_t permutation_cap = 5040;
};

struct SimSpec {
    std::string check = "km";  // lemma4|lemma6|lemma7|lemma8|nested|cover|km
    SimConfig config;
    KmConfig km;
    std::vector<std::int64_t> z;   // lemma4 target element
    std::vector<std::int64_t> u1;  // lemma6/lemma7 first element
    std::vector<std::int64_t> u2;  // lemma6 second element
};

struct ProblemSpec {
    std::string name;
    int nx = 2, ny = 2;
    std::vector<SourceSpec> sources;
    std::vector<std::int64_t> function_values;  // nx * ny, row major
    DistortionSpec distortion;
    int nu = 2, nv = 2;
    GroupsSpec groups;
    SweepSpec sweep;
    std::optional<SimSpec> sim;
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw input_error(std::string("spec: missing field '") + key + "'");
    return *it;
}

template <typename T>
inline T field_or(const nlohmann::json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    return it->get<T>();
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const SourceSpec& s) {
    j = nlohmann::json{{"name", s.name}, {"pmf", s.pmf}};
}

inline void from_json(const nlohmann::json& j, SourceSpec& s) {
    s.name = detail::require_field(j, "name").get<std::string>();
    s.pmf = detail::require_field(j, "pmf").get<std::vector<double>>();
}

inline void to_json(nlohmann::json& j, const DistortionSpec& d) {
    j = nlohmann::json{{"preset", d.preset}};
    if (d.preset == "table") {
        j["zhat_values"] = d.zhat_values;
        j["table"] = d.table;
    }
}

inline void from_json(const nlohmann::json& j, DistortionSpec& d) {
    d.preset = detail::field_or<std::string>(j, "preset", "hamming-on-function");
    if (d.preset == "table") {
        d.zhat_values = detail::require_field(j, "zhat_values").get<std::vector<std::int64_t>>();
        d.table = detail::require_field(j, "table").get<std::vector<double>>();
    } else if (d.preset != "hamming-on-function" && d.preset != "lossless") {
        throw input_error("spec: unknown distortion preset '" + d.preset + "'");
    }
}

inline void to_json(nlohmann::json& j, const GroupsSpec& g) {
    j = nlohmann::json{{"policy", g.policy}, {"rule", g.rule}, {"emit", g.emit}};
    if (g.policy == "explicit") j["list"] = g.list;
}

inline void from_json(const nlohmann::json& j, GroupsSpec& g) {
    g.policy = detail::field_or<std::string>(j, "policy", "auto");
    g.rule = detail::field_or<std::string>(j, "rule", "min");
    g.emit = detail::field_or<std::string>(j, "emit", "chosen");
    if (g.policy == "explicit")
        g.list = detail::require_field(j, "list").get<std::vector<std::string>>();
    else if (g.policy != "auto")
        throw input_error("spec: groups policy must be 'auto' or 'explicit'");
    if (g.rule != "min" && g.rule != "sum-first")
        throw input_error("spec: groups rule must be 'min' or 'sum-first'");
    if (g.emit != "chosen" && g.emit != "all-options")
        throw input_error("spec: groups emit must be 'chosen' or 'all-options'");
}

inline void to_json(nlohmann::json& j, const SweepSpec& s) {
    j = nlohmann::json{{"step", s.step},
                       {"max_embeddings", s.max_embeddings},
                       {"permutation_cap", s.permutation_cap}};
}

inline void from_json(const nlohmann::json& j, SweepSpec& s) {
    s.step = detail::field_or<double>(j, "step", 0.1);
    s.max_embeddings = detail::field_or<int>(j, "max_embeddings", 64);
    s.permutation_cap = detail::field_or<std::int64_t>(j, "permutation_cap", 5040);
}

inline void to_json(nlohmann::json& j, const SimSpec& s) {
    j = nlohmann::json{{"check", s.check}};
    j["p"] = s.config.p;
    j["r"] = s.config.r;
    j["n"] = s.config.n;
    j["k"] = s.config.k;
    j["k11"] = s.config.k11;
    j["k12"] = s.config.k12;
    j["k2"] = s.config.k2;
    j["trials"] = s.config.trials;
    j["seed"] = s.config.seed;
    j["epsilon"] = s.config.epsilon;
    j["decoder"] = s.config.decoder == DecoderKind::kTypicality ? "typicality" : "ml";
    j["crossover"] = s.km.crossover;
    j["block_length"] = s.km.n;
    j["syndrome_rows"] = s.km.k;
    j["matrix_seeds"] = s.km.matrix_seeds;
    j["trials_per_seed"] = s.km.trials_per_seed;
    j["isd_iterations"] = s.km.isd_iterations;
    j["threads"] = s.km.threads;
    if (!s.z.empty()) j["z"] = s.z;
    if (!s.u1.empty()) j["u1"] = s.u1;
    if (!s.u2.empty()) j["u2"] = s.u2;
}

inline void from_json(const nlohmann::json& j, SimSpec& s) {
    s.check = detail::field_or<std::string>(j, "check", "km");
    SimConfig base;
    s.config.p = detail::field_or<std::int64_t>(j, "p", base.p);
    s.config.r = detail::field_or<int>(j, "r", base.r);
    s.config.n = detail::field_or<int>(j, "n", base.n);
    s.config.k = detail::field_or<int>(j, "k", base.k);
    s.config.k11 = detail::field_or<int>(j, "k11", base.k11);
    s.config.k12 = detail::field_or<int>(j, "k12", base.k12);
    s.config.k2 = detail::field_or<int>(j, "k2", base.k2);
    s.config.trials = detail::field_or<std::int64_t>(j, "trials", base.trials);
    s.config.seed = detail::field_or<std::uint64_t>(j, "seed", base.seed);
    s.config.epsilon = detail::field_or<double>(j, "epsilon", base.epsilon);
    const std::string dec = detail::field_or<std::string>(j, "decoder", "ml");
    if (dec == "ml")
        s.config.decoder = DecoderKind::kMaxLikelihood;
    else if (dec == "typicality")
        s.config.decoder = DecoderKind::kTypicality;
    else
        throw input_error("spec: decoder must be 'ml' or 'typicality'");
    KmConfig kmbase;
    s.km.crossover = detail::field_or<double>(j, "crossover", kmbase.crossover);
    s.km.n = detail::field_or<int>(j, "block_length", kmbase.n);
    s.km.k = detail::field_or<int>(j, "syndrome_rows", kmbase.k);
    s.km.matrix_seeds = detail::field_or<int>(j, "matrix_seeds", kmbase.matrix_seeds);
    s.km.trials_per_seed = detail::field_or<std::int64_t>(j, "trials_per_seed",
                                                          kmbase.trials_per_seed);
    s.km.isd_iterations = detail::field_or<int>(j, "isd_iterations", kmbase.isd_iterations);
    s.km.threads = detail::field_or<int>(j, "threads", kmbase.threads);
    s.km.seed = s.config.seed;
    s.km.epsilon = s.config.epsilon;
    s.km.decoder = s.config.decoder;
    s.z = detail::field_or<std::vector<std::int64_t>>(j, "z", {});
    s.u1 = detail::field_or<std::vector<std::int64_t>>(j, "u1", {});
    s.u2 = detail::field_or<std::vector<std::int64_t>>(j, "u2", {});
}

inline void to_json(nlohmann::json& j, const ProblemSpec& s) {
    j = nlohmann::json{{"name", s.name},
                       {"alphabet", {{"nx", s.nx}, {"ny", s.ny}}},
                       {"sources", s.sources},
                       {"function", {{"values", s.function_values}}},
                       {"distortion", s.distortion},
                       {"aux", {{"nu", s.nu}, {"nv", s.nv}}},
                       {"groups", s.groups},
                       {"sweep", s.sweep}};
    if (s.sim) j["sim"] = *s.sim;
}

inline void from_json(const nlohmann::json& j, ProblemSpec& s) {
    s.name = detail::field_or<std::string>(j, "name", "");
    if (auto it = j.find("alphabet"); it != j.end()) {
        s.nx = detail::require_field(*it, "nx").get<int>();
        s.ny = detail::require_field(*it, "ny").get<int>();
    }
    s.sources = detail::field_or<std::vector<SourceSpec>>(j, "sources", {});
    if (auto it = j.find("function"); it != j.end())
        s.function_values =
            detail::require_field(*it, "values").get<std::vector<std::int64_t>>();
    s.distortion = detail::field_or<DistortionSpec>(j, "distortion", {});
    if (auto it = j.find("aux"); it != j.end()) {
        s.nu = detail::require_field(*it, "nu").get<int>();
        s.nv = detail::require_field(*it, "nv").get<int>();
    }
    s.groups = detail::field_or<GroupsSpec>(j, "groups", {});
    s.sweep = detail::field_or<SweepSpec>(j, "sweep", {});
    if (auto it = j.find("sim"); it != j.end()) s.sim = it->get<SimSpec>();
}

// Structural checks beyond what field parsing enforces.
inline void validate_spec(const ProblemSpec& s) {
    if (s.nx < 1 || s.ny < 1) throw input_error("spec: alphabet sizes must be positive");
    if (s.nu < 1 || s.nv < 1) throw input_error("spec: auxiliary sizes must be positive");
    const std::size_t cells = static_cast<std::size_t>(s.nx) * static_cast<std::size_t>(s.ny);
    for (const auto& src : s.sources) {
        if (src.pmf.size() != cells)
            throw input_error("spec: source '" + src.name + "' pmf must have nx*ny entries");
        double total = 0;
        for (double v : src.pmf) {
            if (v < 0) throw input_error("spec: source '" + src.name + "' has negative mass");
            total += v;
        }
        if (std::abs(total - 1.0) > kProbTol)
            throw input_error("spec: source '" + src.name + "' pmf does not normalize");
    }
    if (!s.function_values.empty() && s.function_values.size() != cells)
        throw input_error("spec: function table must have nx*ny entries");
    if (s.distortion.preset == "table") {
        if (s.distortion.zhat_values.empty())
            throw input_error("spec: explicit distortion needs reconstruction values");
        if (s.distortion.table.size() != cells * s.distortion.zhat_values.size())
            throw input_error("spec: distortion table must have nx*ny*|zhat| entries");
        for (double v : s.distortion.table)
            if (v < 0) throw input_error("spec: distortion entries must be non-negative");
    }
    if (!(s.sweep.step > 0 && s.sweep.step <= 0.5))
        throw input_error("spec: sweep step outside (0, 0.5]");
    if (s.sweep.max_embeddings < 1) throw input_error("spec: max_embeddings must be positive");
    if (s.sweep.permutation_cap < 1) throw input_error("spec: permutation_cap must be positive");
    if (s.groups.policy == "explicit") {
        if (s.groups.list.empty()) throw input_error("spec: explicit group policy with empty list");
        for (const auto& name : s.groups.list) parse_group(name);
    }
}

inline ProblemSpec parse_spec(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("spec: invalid JSON: ") + e.what());
    }
    ProblemSpec s;
    try {
        s = j.get<ProblemSpec>();
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("spec: bad field type: ") + e.what());
    }
    validate_spec(s);
    return s;
}

inline std::string dump_spec(const ProblemSpec& s) {
    return nlohmann::json(s).dump(2) + "\n";
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write '" + path + "'");
    out << content;
}

// ---------------------------------------------------------------------------
// Spec-to-engine adapters.

inline FunctionTable spec_function(const ProblemSpec& s) {
    if (s.function_values.empty()) throw input_error("spec: no function table");
    FunctionTable f;
    f.nu = s.nx;
    f.nv = s.ny;
    f.vals = s.function_values;
    return f;
}

inline JointPMF spec_joint(const ProblemSpec& s, const SourceSpec& src) {
    return JointPMF::from_flat({s.nx, s.ny}, src.pmf);
}

// Reconstruction alphabet: the function image for presets, the explicit list
// otherwise.
inline std::vector<std::int64_t> spec_zhat_values(const ProblemSpec& s) {
    if (s.distortion.preset == "table") return s.distortion.zhat_values;
    return spec_function(s).image();
}

inline DistortionFn spec_distortion(const ProblemSpec& s) {
    if (s.distortion.preset == "table") {
        const std::vector<std::int64_t> zhat = s.distortion.zhat_values;
        const std::vector<double> table = s.distortion.table;
        const int ny = s.ny;
        const std::size_t nz = zhat.size();
        return [zhat, table, ny, nz](int x, int y, std::int64_t z) {
            for (std::size_t i = 0; i < nz; ++i)
                if (zhat[i] == z)
                    return table[(static_cast<std::size_t>(x) * ny + y) * nz + i];
            throw input_error("distortion: reconstruction value outside table");
        };
    }
    return function_mismatch_distortion(spec_function(s));
}

inline std::vector<AbelianGroup> spec_groups(const ProblemSpec& s) {
    std::vector<AbelianGroup> out;
    if (s.groups.policy == "explicit") {
        for (const auto& name : s.groups.list) out.push_back(parse_group(name));
    }
    return out;  // empty means enumerate candidates per reconstruction
}

inline RegionPolicy spec_region_policy(const ProblemSpec& s) {
    RegionPolicy policy;
    policy.groups = spec_groups(s);
    policy.stage.mode = s.groups.rule == "sum-first" ? StagePolicy::kSumFirst : StagePolicy::kMin;
    policy.max_embeddings_per_group = s.sweep.max_embeddings;
    policy.emit = s.groups.emit == "all-options" ? RegionPolicy::kAllOptionCombos
                                                 : RegionPolicy::kChosenOnly;
    return policy;
}

// Largest factor count over the groups the sweep will visit; the stage-order
// sweep enumerates its factorial.
inline void check_permutation_cap(const ProblemSpec& s, const std::vector<AbelianGroup>& groups) {
    for (const auto& g : groups) {
        std::int64_t perms = 1;
        for (int i = 2; i <= g.num_factors(); ++i) perms *= i;
        if (perms > s.sweep.permutation_cap)
            throw resource_error("stage-order sweep for " + g.name() + " needs " +
                                 std::to_string(perms) + " permutations, cap is " +
                                 std::to_string(s.sweep.permutation_cap));
    }
}

// The identity channel pair: U = X, V = Y.
inline std::vector<ChannelPair> identity_channels(int nx, int ny) {
    std::vector<double> urows(static_cast<std::size_t>(nx) * nx, 0.0);
    for (int x = 0; x < nx; ++x) urows[static_cast<std::size_t>(x) * nx + x] = 1.0;
    std::vector<double> vrows(static_cast<std::size_t>(ny) * ny, 0.0);
    for (int y = 0; y < ny; ++y) vrows[static_cast<std::size_t>(y) * ny + y] = 1.0;
    ChannelPair ch;
    ch.u_given_x = ConditionalPMF::from_rows(nx, nx, std::move(urows));
    ch.v_given_y = ConditionalPMF::from_rows(ny, ny, std::move(vrows));
    ch.id = "identity";
    return {ch};
}

// ---------------------------------------------------------------------------
// Result bundle.

struct SourceResult {
    std::string source;
    std::optional<RegionCurve> theorem1;
    std::optional<RegionCurve> berger_tung;
};

struct ResultBundle {
    std::string mode;
    std::string input_digest;
    std::vector<SourceResult> results;
};

inline void to_json(nlohmann::json& j, const StageBreakdown& sb) {
    j = nlohmann::json{{"digit", sb.digit},
                       {"r1_option1", sb.r1_option1},
                       {"r1_option2", sb.r1_option2},
                       {"r2_option1", sb.r2_option1},
                       {"r2_option2", sb.r2_option2},
                       {"r1", sb.r1},
                       {"r2", sb.r2},
                       {"choice1", sb.choice1},
                       {"choice2", sb.choice2}};
}

inline void to_json(nlohmann::json& j, const RatePointRecord& p) {
    j = nlohmann::json{{"d", p.d},       {"r1", p.r1},
                       {"r2", p.r2},     {"rsum", p.rsum},
                       {"group", p.group}, {"permutation", p.permutation},
                       {"options", p.options}, {"channel_id", p.channel_id}};
    if (!p.stages.empty()) j["stages"] = p.stages;
}

inline void to_json(nlohmann::json& j, const RegionCurve& c) {
    j = nlohmann::json{{"points", c.points}};
    auto& env = j["envelope"] = nlohmann::json::array();
    for (const auto& e : c.envelope) env.push_back({e.d, e.rsum});
}

inline void to_json(nlohmann::json& j, const SourceResult& r) {
    j = nlohmann::json{{"source", r.source}};
    if (r.theorem1) j["theorem1"] = *r.theorem1;
    if (r.berger_tung) j["berger_tung"] = *r.berger_tung;
}

inline void to_json(nlohmann::json& j, const ResultBundle& b) {
    j = nlohmann::json{{"tool", kToolName},
                       {"version", kToolVersion},
                       {"input_digest", b.input_digest},
                       {"mode", b.mode},
                       {"results", b.results}};
}

// ---------------------------------------------------------------------------
// CSV forms.  Numeric cells carry 15 significant digits so a recomputation
// can be checked against a parsed row at 1e-12; human-facing summaries use
// the 6-digit form instead.

inline std::string format_sig(double v, int digits = 15) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    bool needs = s.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline constexpr const char* kRegionCsvHeader = "D,R1,R2,Rsum,group,permutation,options,channel_id";

inline std::string region_csv(const ResultBundle& b) {
    std::string out = std::string(kRegionCsvHeader) + ",mode,source\n";
    for (const auto& sr : b.results) {
        auto rows = [&](const RegionCurve& curve, const char* mode) {
            for (const auto& p : curve.points) {
                out += format_sig(p.d) + ',' + format_sig(p.r1) + ',' + format_sig(p.r2) + ',' +
                       format_sig(p.rsum) + ',' + csv_quote(p.group) + ',' +
                       csv_quote(p.permutation) + ',' + csv_quote(p.options) + ',' +
                       csv_quote(p.channel_id) + ',' + mode + ',' + csv_quote(sr.source) + '\n';
            }
        };
        if (sr.theorem1) rows(*sr.theorem1, "theorem1");
        if (sr.berger_tung) rows(*sr.berger_tung, "berger-tung");
    }
    return out;
}

// Envelope vertices, plot-ready: comment header, one "D Rsum" pair per line.
inline std::string envelope_text(const std::vector<EnvelopePoint>& env) {
    std::string out = "# D Rsum\n";
    for (const auto& e : env) out += format_sig(e.d) + ' ' + format_sig(e.rsum) + '\n';
    return out;
}

// Reads (D, Rsum) pairs from either a region CSV (header row with D and Rsum
// columns) or bare two-column lines (comma or space separated).  '#' lines
// are comments.
inline std::vector<EnvelopePoint> parse_envelope_input(const std::string& text) {
    std::vector<EnvelopePoint> pts;
    std::istringstream in(text);
    std::string line;
    int d_col = 0, r_col = 1;
    bool saw_header = false;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cur;
        bool quoted = false;
        for (char c : s) {
            if (quoted) {
                if (c == '"')
                    quoted = false;
                else
                    cur += c;
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',' || c == ' ' || c == '\t') {
                if (c != ',' && cur.empty()) continue;  // collapse runs of spaces
                cells.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        cells.push_back(cur);
        return cells;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto cells = split(line);
        if (!saw_header && !cells.empty()) {
            bool header = false;
            int dc = -1, rc = -1;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i] == "D") dc = static_cast<int>(i);
                if (cells[i] == "Rsum") rc = static_cast<int>(i);
            }
            if (dc >= 0 && rc >= 0) {
                d_col = dc;
                r_col = rc;
                header = true;
            }
            saw_header = true;
            if (header) continue;
        }
        if (cells.size() <= static_cast<std::size_t>(std::max(d_col, r_col)))
            throw input_error("envelope input: row with too few columns: " + line);
        try {
            std::size_t used = 0;
            double d = std::stod(cells[static_cast<std::size_t>(d_col)], &used);
            if (used != cells[static_cast<std::size_t>(d_col)].size()) throw std::invalid_argument("");
            double r = std::stod(cells[static_cast<std::size_t>(r_col)], &used);
            if (used != cells[static_cast<std::size_t>(r_col)].size()) throw std::invalid_argument("");
            pts.push_back({d, r});
        } catch (const std::exception&) {
            throw input_error("envelope input: non-numeric cell in row: " + line);
        }
    }
    if (pts.empty()) throw input_error("envelope input: no data rows");
    return pts;
}

// ---------------------------------------------------------------------------
// Simulation report serialization.

inline void to_json(nlohmann::json& j, const SimCheck& c) {
    j = nlohmann::json{{"label", c.label},
                       {"observed", c.observed},
                       {"predicted", c.predicted},
                       {"deviation", c.deviation},
                       {"exact", c.exact},
                       {"informational", c.informational},
                       {"pass", c.pass}};
    if (c.sigma > 0) j["sigma"] = c.sigma;
    if (c.total > 0) {
        j["count"] = c.count;
        j["total"] = c.total;
    }
}

inline void to_json(nlohmann::json& j, const SimReport& r) {
    j = nlohmann::json{{"tool", kToolName},
                       {"version", kToolVersion},
                       {"check", r.check},
                       {"exhaustive", r.exhaustive},
                       {"samples", r.samples},
                       {"entries", r.entries},
                       {"notes", r.notes},
                       {"all_pass", r.all_pass()}};
    j["config"] = {{"p", r.config.p},   {"r", r.config.r},     {"n", r.config.n},
                   {"k", r.config.k},   {"k11", r.config.k11}, {"k12", r.config.k12},
                   {"k2", r.config.k2}, {"trials", r.config.trials},
                   {"seed", r.config.seed}, {"epsilon", r.config.epsilon}};
}

inline void to_json(nlohmann::json& j, const KmSeedStats& s) {
    j = nlohmann::json{{"seed_index", s.seed_index},
                       {"full_rank", s.full_rank},
                       {"errors", s.errors},
                       {"trials", s.trials}};
}

inline void to_json(nlohmann::json& j, const KmResult& r) {
    j = nlohmann::json{{"tool", kToolName},
                       {"version", kToolVersion},
                       {"check", "km"},
                       {"block_length", r.config.n},
                       {"syndrome_rows", r.config.k},
                       {"crossover", r.config.crossover},
                       {"decoder", r.config.decoder == DecoderKind::kTypicality ? "typicality" : "ml"},
                       {"seed", r.config.seed},
                       {"isd_iterations", r.config.isd_iterations},
                       {"threads_used", r.threads_used},
                       {"total_errors", r.total_errors},
                       {"total_trials", r.total_trials},
                       {"error_rate", r.error_rate},
                       {"full_rank_rate", r.full_rank_rate},
                       {"per_seed", r.per_seed}};
}

}  // namespace grouprd
