// Command-line driver: density analysis of the boundary algebra generated by
// the coordinates and a conjugated polynomial, plus direct access to the
// factorization, hull-membership, and boundary-variety subroutines.
//
// Exit codes: 0 when the computation resolved (Dense/NotDense verdicts, or a
// subcommand that completed), 2 when the mathematics stayed inconclusive
// (Inconclusive/DegenerateDelta verdicts, undecided boundary checks, fixture
// mismatches), 1 on input or configuration errors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "polyhull/report.hpp"

namespace {

using namespace polyhull;

void add_config_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--torus-grid", cfg.torus_grid, "slicing grid for torus traces")
        ->capture_default_str();
    cmd->add_option("--inner-grid", cfg.inner_grid, "slicing grid for interior variety candidates")
        ->capture_default_str();
    cmd->add_option("--d-max", cfg.d_max, "hull-membership LP degree cap")->capture_default_str();
    cmd->add_option("--x-samples", cfg.x_samples, "per-factor sampling budget on parametrized curves")
        ->capture_default_str();
    cmd->add_option("--ext-order", cfg.ext_order, "cyclotomic order adjoined for factoring")
        ->capture_default_str();
    cmd->add_option("--tol-set", cfg.tol_set, "on-set acceptance band / cloud dedupe cell")
        ->capture_default_str();
    cmd->add_option("--tol-root", cfg.tol_root, "pre-polish screening band for slice roots")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "seed for random specialization points")
        ->capture_default_str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------- //

struct AnalyzeArgs {
    std::string polynomial;
    std::string map_text = "identity";
    std::string json_path, summary_path;
    RunConfig cfg;
};

int run_analyze(const AnalyzeArgs& a) {
    const BiPoly P = parse_bipoly(a.polynomial);
    const ProperMapDescriptor map = parse_map(a.map_text);
    const AnalysisReport rep = analyze(P, map, a.cfg);
    const std::string summary = render_summary(rep);
    if (!a.json_path.empty()) {
        if (a.json_path == "-") std::cout << render_json(rep);
        else write_file(a.json_path, render_json(rep));
    }
    if (!a.summary_path.empty()) write_file(a.summary_path, summary);
    if (a.json_path != "-") std::cout << summary;
    return verdict_exit_code(rep.verdict);
}

struct FactorArgs {
    std::string polynomial;
    unsigned ext_order = 1;
    std::uint64_t seed = RunConfig{}.seed;
};

int run_factor(const FactorArgs& a) {
    const BiPoly p = parse_bipoly(a.polynomial);
    if (p.is_zero()) throw PreconditionViolation("factoring needs a nonzero polynomial");
    const FactorList fl = factor(p, CycloExt{a.ext_order}, a.seed);
    std::cout << "unit: " << to_string(fl.unit) << "\n";
    for (std::size_t k = 0; k < fl.factors.size(); ++k) {
        const auto& f = fl.factors[k];
        std::cout << "[" << k << "] " << to_string(f.q) << "  multiplicity " << f.multiplicity
                  << (f.absolute ? "" : "  (may split over a larger cyclotomic order)") << "\n";
    }
    return 0;
}

struct HullArgs {
    std::string cloud_path, slice_poly, query_text, export_path;
    unsigned grid = 1024;
    unsigned d_max = 8;
    bool inner = false;
    bool show_certificate = false;
};

int run_hull(const HullArgs& a) {
    CurveCloud cloud;
    if (!a.cloud_path.empty()) {
        cloud = cloud_from_lines(read_file(a.cloud_path));
    } else if (!a.slice_poly.empty()) {
        const BiPoly q = parse_bipoly(a.slice_poly);
        cloud = a.inner ? inner_slice(to_ext(q), a.grid) : torus_slice(to_ext(q), a.grid);
    } else {
        throw std::invalid_argument("hull needs a cloud: pass --cloud FILE or --slice POLY");
    }
    if (!a.export_path.empty()) write_file(a.export_path, cloud_to_lines(cloud));
    if (a.query_text.empty()) {
        std::cout << "cloud: " << cloud.points.size() << " points\n";
        return 0;
    }

    const auto comma = a.query_text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("query must be two complex components, e.g. \"1,0\"");
    // Split at the top-level comma: each side must itself parse as a complex
    // literal, so try every comma until one split works.
    PointC2 query;
    bool ok = false;
    for (std::size_t k = a.query_text.find(','); k != std::string::npos;
         k = a.query_text.find(',', k + 1)) {
        try {
            query.z1 = parse_complex(a.query_text.substr(0, k));
            query.z2 = parse_complex(a.query_text.substr(k + 1));
            ok = true;
            break;
        } catch (const std::invalid_argument&) {
        }
    }
    if (!ok) throw std::invalid_argument("cannot parse query point: " + a.query_text);

    const HullVerdict v = membership(query, cloud, a.d_max);
    if (v.outcome == HullOutcome::InHullUpToDegree) {
        std::cout << "InHullUpToDegree(" << v.degree << ")\n";
    } else {
        std::cout << "Separated at degree " << v.degree << " with certified margin " << v.margin
                  << "\n";
        if (a.show_certificate && v.certificate)
            std::cout << "certificate: " << v.certificate->to_string() << "\n";
    }
    return 0;
}

struct DVArgs {
    std::string polynomial;
    unsigned grid = 4096;
};

int run_dv(const DVArgs& a) {
    const BiPoly p = parse_bipoly(a.polynomial);
    const DVReport rep = dv_check(p, a.grid);
    const char* name = rep.verdict == DVVerdict::Distinguished ? "Distinguished"
                       : rep.verdict == DVVerdict::NotDistinguished ? "NotDistinguished"
                                                                    : "Inconclusive";
    std::cout << name << "  (boundary samples " << rep.boundary_samples.points.size()
              << ", violations " << rep.violations.size() << ", worst depth " << rep.worst_depth
              << ")\n";
    return rep.verdict == DVVerdict::Inconclusive ? 2 : 0;
}

// ---------------------------------------------------------------------- //
// Golden fixtures: the four worked examples with their expected outcomes.

struct Fixture {
    const char* name;
    const char* polynomial;
    const char* map;
    unsigned ext_order;
    Verdict verdict;
    std::vector<std::string> J_texts;
    std::vector<std::string> piece_texts;
};

const std::vector<Fixture>& fixtures() {
    static const std::vector<Fixture> fx = {
        {"difference over the symmetrized bidisc", "z1 - z2", "symm", 1, Verdict::NotDense,
         {"z2 - 1", "z1 - 1"},
         {"{ (t + 1, t, 1) : |t| <= 1 }"}},
        {"skew difference over the symmetrized bidisc", "z1 - 2*z2", "symm", 1, Verdict::Dense,
         {},
         {}},
        {"difference under a degree-4 polynomial cover", "z1 - z2",
         "map (2*z1 + z2^2, z1 - z2^2)", 1, Verdict::Dense,
         {},
         {}},
        {"quadratic form under a triangular cover", "z1^2 + z2", "map (z1 + z2, z1^2 + z2^2)", 3,
         Verdict::NotDense,
         {"z1 - a*z2", "z1 + (1+a)*z2"},
         {"{ (-a*t, (1+a)*t^2, 0) : |t| <= 1 }"}},
    };
    return fx;
}

struct FixturesArgs {
    std::string out_dir;
    std::uint64_t seed = RunConfig{}.seed;
};

int run_fixtures(const FixturesArgs& a) {
    bool all_ok = true;
    for (std::size_t k = 0; k < fixtures().size(); ++k) {
        const Fixture& fx = fixtures()[k];
        RunConfig cfg;
        cfg.ext_order = fx.ext_order;
        cfg.seed = a.seed;
        const AnalysisReport rep = analyze(parse_bipoly(fx.polynomial), parse_map(fx.map), cfg);

        bool ok = rep.verdict == fx.verdict && rep.J.size() == fx.J_texts.size() &&
                  rep.hull.pieces.size() == fx.piece_texts.size();
        if (ok)
            for (std::size_t i = 0; i < rep.J.size(); ++i)
                ok = ok && to_string(rep.classes[rep.J[i]].q) == fx.J_texts[i];
        if (ok)
            for (std::size_t i = 0; i < rep.hull.pieces.size(); ++i)
                ok = ok && rep.hull.pieces[i].text == fx.piece_texts[i];
        all_ok = all_ok && ok;

        std::cout << "fixture " << (k + 1) << " (" << fx.name
                  << "): " << verdict_name(rep.verdict) << (ok ? "  [ok]" : "  [MISMATCH]")
                  << "\n";
        if (!a.out_dir.empty()) {
            const std::string stem = a.out_dir + "/fixture-" + std::to_string(k + 1);
            write_file(stem + ".json", render_json(rep));
            write_file(stem + ".txt", render_summary(rep));
        }
    }
    return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "decides whether the coordinates together with a conjugated polynomial generate every "
        "continuous function on the distinguished boundary, and describes the obstruction when "
        "they do not"};
    app.require_subcommand(1);

    AnalyzeArgs an;
    CLI::App* analyze_cmd = app.add_subcommand(
        "analyze", "run the full density analysis (exit 0 Dense/NotDense, 2 otherwise)");
    analyze_cmd->add_option("-P,--polynomial", an.polynomial, "polynomial in z1, z2")->required();
    analyze_cmd->add_option("--map", an.map_text,
                            "identity | symm | pow m n | map (p1, p2)")
        ->capture_default_str();
    analyze_cmd->add_option("--json", an.json_path, "write the report document here ('-' = stdout)");
    analyze_cmd->add_option("--summary", an.summary_path, "also write the text summary here");
    add_config_flags(analyze_cmd, an.cfg);

    FactorArgs fa;
    CLI::App* factor_cmd =
        app.add_subcommand("factor", "factor a polynomial over Q(i) plus a cyclotomic order");
    factor_cmd->add_option("polynomial", fa.polynomial, "polynomial in z1, z2")->required();
    factor_cmd->add_option("--ext-order", fa.ext_order, "cyclotomic order")->capture_default_str();
    factor_cmd->add_option("--seed", fa.seed, "seed for specialization points")
        ->capture_default_str();

    HullArgs ha;
    CLI::App* hull_cmd = app.add_subcommand(
        "hull", "truncated polynomial-hull membership for a sampled curve cloud");
    auto* cloud_opt =
        hull_cmd->add_option("--cloud", ha.cloud_path, "cloud file (re1,im1,re2,im2[,residual])");
    hull_cmd->add_option("--slice", ha.slice_poly, "build the cloud by slicing this polynomial")
        ->excludes(cloud_opt);
    hull_cmd->add_option("--grid", ha.grid, "slicing grid when --slice is used")
        ->capture_default_str();
    hull_cmd->add_flag("--inner", ha.inner, "slice the open bidisc instead of the torus");
    hull_cmd->add_option("--query", ha.query_text, "query point, e.g. \"1,0\" or \"0.5+0.1i,0\"");
    hull_cmd->add_option("--d-max", ha.d_max, "degree cap for the membership LP")
        ->capture_default_str();
    hull_cmd->add_option("--export", ha.export_path, "write the cloud used to this file");
    hull_cmd->add_flag("--certificate", ha.show_certificate,
                       "print the separating polynomial on Separated verdicts");

    DVArgs dv;
    CLI::App* dv_cmd = app.add_subcommand(
        "dv-check", "check whether a curve meets the bidisc boundary only in the torus");
    dv_cmd->alias("dv");
    dv_cmd->add_option("polynomial", dv.polynomial, "polynomial in z1, z2")->required();
    dv_cmd->add_option("--grid", dv.grid, "boundary sampling grid")->capture_default_str();

    FixturesArgs fxa;
    CLI::App* fixtures_cmd = app.add_subcommand(
        "fixtures", "run the four embedded worked examples and verify their outcomes");
    fixtures_cmd->add_option("--out-dir", fxa.out_dir, "write fixture-N.json/.txt here");
    fixtures_cmd->add_option("--seed", fxa.seed, "seed for all fixture runs")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // flag/usage problems are input errors
    }

    try {
        if (analyze_cmd->parsed()) return run_analyze(an);
        if (factor_cmd->parsed()) return run_factor(fa);
        if (hull_cmd->parsed()) return run_hull(ha);
        if (dv_cmd->parsed()) return run_dv(dv);
        if (fixtures_cmd->parsed()) return run_fixtures(fxa);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
