#include <catch2/catch_amalgamated.hpp>

#include <polyhull/jimbo_pipeline.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

using namespace polyhull;

namespace {

// Golden fixtures, computed once and shared across cases.
const AnalysisReport& golden_symm_diff() {
    static const AnalysisReport rep = analyze(parse_bipoly("z1 - z2"), symmetrization_map());
    return rep;
}

const AnalysisReport& golden_symm_scaled() {
    static const AnalysisReport rep = analyze(parse_bipoly("z1 - 2*z2"), symmetrization_map());
    return rep;
}

const AnalysisReport& golden_conjugated_power() {
    static const AnalysisReport rep =
        analyze(parse_bipoly("z1 - z2"), parse_map("map (2*z1 + z2^2, z1 - z2^2)"));
    return rep;
}

const AnalysisReport& golden_automorphism() {
    static const AnalysisReport rep = [] {
        RunConfig cfg;
        cfg.ext_order = 3;
        return analyze(parse_bipoly("z1^2 + z2"), parse_map("map (z1 + z2, z1^2 + z2^2)"), cfg);
    }();
    return rep;
}

const AnalysisReport& golden_identity_diff() {
    static const AnalysisReport rep = analyze(parse_bipoly("z1 - z2"), identity_map());
    return rep;
}

std::vector<const AnalysisReport*> all_goldens() {
    return {&golden_symm_diff(), &golden_symm_scaled(), &golden_conjugated_power(),
            &golden_automorphism(), &golden_identity_diff()};
}

std::size_t class_index(const AnalysisReport& rep, const std::string& qtext) {
    for (std::size_t k = 0; k < rep.classes.size(); ++k)
        if (to_string(rep.classes[k].q) == qtext) return k;
    FAIL("no factor " << qtext << " in the report");
    return 0;
}

std::vector<std::string> factor_texts(const AnalysisReport& rep) {
    std::vector<std::string> out;
    for (const auto& f : rep.factors.factors) out.push_back(to_string(f.q));
    return out;
}

bool near(const std::complex<double>& a, const std::complex<double>& b, double tol = 1e-9) {
    return std::abs(a - b) <= tol;
}

}  // namespace

TEST_CASE("symmetrized difference: composition, reflection, and boundary conjugate") {
    const auto& rep = golden_symm_diff();
    CHECK(rep.composed == parse_bipoly("z1 + z2 - z1*z2"));
    CHECK(rep.composed.declared_m() == 1);
    CHECK(rep.composed.declared_n() == 1);
    CHECK(rep.reflected == parse_bipoly("z1 + z2 - 1"));
    CHECK(rep.h.num == parse_bipoly("z1 + z2 - 1"));
    CHECK(rep.h.pole1 == 1);
    CHECK(rep.h.pole2 == 1);

    // h agrees with the conjugated polynomial on the torus.
    for (int k = 0; k < 8; ++k) {
        const std::complex<double> z1 = std::polar(1.0, 0.77 * k);
        const std::complex<double> z2 = std::polar(1.0, 1.31 * k + 0.4);
        CHECK(near(rep.h.eval(z1, z2), std::conj(rep.composed.eval(z1, z2)), 1e-12));
    }
    // Constant 1 along the z1 = 1 circle, nonconstant along the diagonal.
    CHECK(near(rep.h.eval(1.0, std::polar(1.0, 0.7)), 1.0, 1e-12));
    CHECK(near(rep.h.eval(1.0, std::polar(1.0, 2.9)), 1.0, 1e-12));
    const auto d1 = rep.h.eval(std::polar(1.0, 0.5), std::polar(1.0, 0.5));
    const auto d2 = rep.h.eval(std::polar(1.0, 1.3), std::polar(1.0, 1.3));
    CHECK(std::abs(d1 - d2) > 0.1);
}

TEST_CASE("symmetrized difference: the two line discs are certified into J") {
    const auto& rep = golden_symm_diff();
    REQUIRE(factor_texts(rep) == std::vector<std::string>{"z2 - 1", "z1 - 1", "z1 - z2"});
    CHECK(rep.factors.product() == to_ext(rep.delta_num));

    const auto& h2 = rep.classes[class_index(rep, "z2 - 1")];
    CHECK(h2.param_kind == ParamKind::HorizontalLine);
    CHECK_FALSE(h2.Q_empty);
    CHECK_FALSE(h2.Q_convex);
    CHECK(h2.hull_candidates_in_X);
    CHECK(h2.in_J);
    CHECK(h2.certified);
    CHECK(h2.exact_x);
    REQUIRE(h2.piece_value.has_value());
    CHECK(*h2.piece_value == CycloElt(1));
    REQUIRE(h2.exact_hull.has_value());
    CHECK(h2.exact_hull->full_disc);
    CHECK(h2.trace.points.size() >= 1000);

    const auto& v1 = rep.classes[class_index(rep, "z1 - 1")];
    CHECK(v1.param_kind == ParamKind::VerticalLine);
    CHECK(v1.in_J);
    CHECK(v1.certified);
    REQUIRE(v1.piece_value.has_value());
    CHECK(*v1.piece_value == CycloElt(1));

    const auto& dg = rep.classes[class_index(rep, "z1 - z2")];
    CHECK(dg.param_kind == ParamKind::Graph1);
    CHECK_FALSE(dg.Q_empty);
    CHECK_FALSE(dg.Q_convex);
    CHECK_FALSE(dg.hull_candidates_in_X);
    CHECK_FALSE(dg.in_J);
    CHECK(dg.certified);
    CHECK(dg.exact_x);
    CHECK(dg.worst_x_residual >= 0.1);
    CHECK_FALSE(dg.x_witnesses.empty());

    CHECK(rep.J == std::vector<std::size_t>{0, 1});
    CHECK(rep.verdict == Verdict::NotDense);
    CHECK(std::string(verdict_name(rep.verdict)) == "NotDense");
    CHECK(rep.notes.empty());
}

TEST_CASE("symmetrized difference: the two pushed line discs merge into one piece") {
    const auto& rep = golden_symm_diff();
    REQUIRE(rep.hull.pieces.size() == 1);
    const auto& g = rep.hull.pieces[0];
    CHECK(g.exact);
    CHECK(g.text == "{ (t + 1, t, 1) : |t| <= 1 }");
    CHECK(g.factor_indices == std::vector<unsigned>{0, 1});
    CHECK(g.w_poly);
    CHECK(g.x1 == to_ext(parse_bipoly("z1 + 1")));
    CHECK(g.x2 == ExtPoly::var1());
    CHECK(g.w_num == ExtPoly::constant(CycloElt(1)));
    REQUIRE(g.samples.size() == 256);
    for (const auto& s : g.samples) {
        CHECK(near(s[0], s[1] + 1.0, 1e-12));
        CHECK(near(s[2], 1.0, 1e-12));
        CHECK(std::abs(std::abs(s[1]) - 1.0) <= 1e-12);
    }
}

TEST_CASE("scaled symmetrized difference: dense verdict, convex quadric, failing diagonal") {
    const auto& rep = golden_symm_scaled();
    CHECK(rep.composed == parse_bipoly("z1 + z2 - 2*z1*z2"));
    REQUIRE(factor_texts(rep) ==
            std::vector<std::string>{"z1 - z2", "z1*z2 - 1/2*z1 - 1/2*z2 + 1"});

    const auto& quad = rep.classes[class_index(rep, "z1*z2 - 1/2*z1 - 1/2*z2 + 1")];
    CHECK(quad.param_kind == ParamKind::General);
    CHECK_FALSE(quad.Q_empty);
    CHECK(quad.trace.points.size() >= 1000);  // the full curve z2 = (z1-2)/(2*z1-1)
    CHECK(quad.Q_convex);
    CHECK(quad.convexity.witnesses.empty());
    CHECK(quad.x_tested == 0);  // no interior points exist near this variety
    CHECK(quad.hull_candidates_in_X);  // vacuous
    CHECK_FALSE(quad.in_J);
    CHECK(quad.certified);
    CHECK_FALSE(quad.scope_note);

    const auto& dg = rep.classes[class_index(rep, "z1 - z2")];
    CHECK(dg.param_kind == ParamKind::Graph1);
    CHECK(dg.exact_x);
    CHECK_FALSE(dg.Q_convex);
    CHECK_FALSE(dg.hull_candidates_in_X);
    CHECK_FALSE(dg.in_J);
    CHECK(dg.certified);
    CHECK(dg.worst_x_residual >= 0.1);

    // The pinned interior witness: |conj(p) - h| at (1/2, 1/2) is >= 0.1.
    CHECK(in_x_domain(PointC2{0.5, 0.5}, kXDomainTol));
    CHECK(x_residual(rep.composed, {0.5, 0.5}) >= 0.1);
    CHECK_FALSE(in_x(rep.composed, {0.5, 0.5}, 1e-3));

    CHECK(rep.J.empty());
    CHECK(rep.verdict == Verdict::Dense);
    CHECK(rep.hull.pieces.empty());
    CHECK(rep.notes.empty());
}

TEST_CASE("conjugated power-map example: both branches fail X and the verdict is dense") {
    const auto& rep = golden_conjugated_power();
    CHECK(rep.map.kind == MapKind::Conjugated);
    CHECK(rep.composed == parse_bipoly("z1 + 2*z2^2"));
    CHECK(rep.composed.declared_m() == 1);
    CHECK(rep.composed.declared_n() == 2);
    REQUIRE(factor_texts(rep) == std::vector<std::string>{"z1 - z2^2", "z1 + z2^2"});
    CHECK(rep.factors.product() == to_ext(rep.delta_num));

    for (const char* name : {"z1 - z2^2", "z1 + z2^2"}) {
        const auto& fc = rep.classes[class_index(rep, name)];
        INFO("factor " << name);
        CHECK(fc.param_kind == ParamKind::General);
        CHECK_FALSE(fc.Q_empty);
        CHECK(fc.trace.points.size() >= 1000);
        CHECK_FALSE(fc.hull_candidates_in_X);
        CHECK_FALSE(fc.in_J);
        CHECK(fc.certified);
        CHECK(fc.scope_note);
        CHECK(fc.worst_x_residual >= 0.1);
        CHECK_FALSE(fc.x_witnesses.empty());
        CHECK(fc.x_tested > 100);
    }

    // Spot-check the analytic witness family (-r^2, r): residual |r^2 - 1/r^2|.
    for (double r : {0.3, 0.5, 0.7}) {
        const PointC2 w{-r * r, r};
        CHECK(x_residual(rep.composed, w) ==
              Catch::Approx(std::abs(r * r - 1.0 / (r * r))).margin(1e-9));
    }

    CHECK(rep.J.empty());
    CHECK(rep.verdict == Verdict::Dense);
    CHECK(rep.hull.pieces.empty());
    CHECK(rep.notes.size() == 2);  // one scope note per factor
}

TEST_CASE("automorphism-composed symmetrization: the two extension lines form J") {
    const auto& rep = golden_automorphism();
    CHECK(rep.map.kind == MapKind::Extended);
    CHECK(rep.composed == parse_bipoly("2*z1^2 + 2*z1*z2 + 2*z2^2"));
    REQUIRE(factor_texts(rep) ==
            std::vector<std::string>{"z1 - z2", "z1 + z2", "z1 - a*z2", "z1 + (1+a)*z2"});
    CHECK(rep.factors.product() == to_ext(rep.delta_num));
    for (const auto& f : rep.factors.factors) CHECK(f.absolute);

    // The rational lines restrict to nonconstant polynomials: certified out.
    for (const char* name : {"z1 - z2", "z1 + z2"}) {
        const auto& fc = rep.classes[class_index(rep, name)];
        INFO("factor " << name);
        CHECK(fc.exact_x);
        CHECK_FALSE(fc.hull_candidates_in_X);
        CHECK_FALSE(fc.in_J);
        CHECK(fc.certified);
    }
    // The extension lines carry the constant graph value 0: certified in.
    for (const char* name : {"z1 - a*z2", "z1 + (1+a)*z2"}) {
        const auto& fc = rep.classes[class_index(rep, name)];
        INFO("factor " << name);
        CHECK(fc.param_kind == ParamKind::Graph1);
        CHECK(fc.exact_x);
        CHECK(fc.hull_candidates_in_X);
        CHECK(fc.in_J);
        CHECK(fc.certified);
        REQUIRE(fc.piece_value.has_value());
        CHECK(*fc.piece_value == CycloElt(0));
    }

    CHECK(rep.J == std::vector<std::size_t>{2, 3});
    CHECK(rep.verdict == Verdict::NotDense);

    // Both pushed discs describe the same curve (u, -u^2, 0) and merge.
    REQUIRE(rep.hull.pieces.size() == 1);
    const auto& g = rep.hull.pieces[0];
    CHECK(g.exact);
    CHECK(g.w_poly);
    CHECK(g.w_num.is_zero());
    CHECK(g.factor_indices == std::vector<unsigned>{2, 3});
    REQUIRE(g.samples.size() == 256);
    for (const auto& s : g.samples) {
        CHECK(std::abs(s[1] + s[0] * s[0]) <= 1e-9);
        CHECK(std::abs(s[2]) <= 1e-15);
        CHECK(std::abs(std::abs(s[0]) - 1.0) <= 1e-9);
    }
    CHECK(g.text.find(": |t| <= 1 }") != std::string::npos);
}

TEST_CASE("identity map: the diagonal disc carries the zero graph value") {
    const auto& rep = golden_identity_diff();
    CHECK(rep.composed == parse_bipoly("z1 - z2"));
    CHECK(rep.delta_num == parse_bipoly("z1^2 - z2^2"));
    REQUIRE(factor_texts(rep) == std::vector<std::string>{"z1 - z2", "z1 + z2"});

    const auto& dg = rep.classes[class_index(rep, "z1 - z2")];
    CHECK(dg.in_J);
    CHECK(dg.certified);
    REQUIRE(dg.piece_value.has_value());
    CHECK(*dg.piece_value == CycloElt(0));

    const auto& anti = rep.classes[class_index(rep, "z1 + z2")];
    CHECK_FALSE(anti.in_J);
    CHECK(anti.certified);
    CHECK(anti.exact_x);

    CHECK(rep.J == std::vector<std::size_t>{0});
    CHECK(rep.verdict == Verdict::NotDense);
    REQUIRE(rep.hull.pieces.size() == 1);
    CHECK(rep.hull.pieces[0].text == "{ (t, t, 0) : |t| <= 1 }");
}

TEST_CASE("degenerate determinant verdicts") {
    SECTION("single-variable polynomial") {
        const auto rep = analyze(parse_bipoly("z1"), identity_map());
        CHECK(rep.verdict == Verdict::DegenerateDelta);
        CHECK(rep.factors.factors.empty());
        CHECK(rep.J.empty());
        CHECK(rep.hull.pieces.empty());
        CHECK_FALSE(rep.notes.empty());
    }
    SECTION("constant composition") {
        const auto rep = analyze(parse_bipoly("3"), identity_map());
        CHECK(rep.verdict == Verdict::DegenerateDelta);
    }
    SECTION("zero input is rejected") {
        CHECK_THROWS_AS(analyze(BiPoly{}, identity_map()), PreconditionViolation);
    }
    SECTION("unsupported extension order is rejected") {
        RunConfig cfg;
        cfg.ext_order = 5;
        CHECK_THROWS_AS(analyze(parse_bipoly("z1 - z2"), symmetrization_map(), cfg),
                        ExtensionInsufficient);
    }
}

TEST_CASE("classification invariants hold across every golden report") {
    for (const AnalysisReport* rp : all_goldens()) {
        const auto& rep = *rp;
        INFO("input " << to_string(rep.P) << " through " << rep.map.text);
        for (const auto& fc : rep.classes) {
            INFO("factor " << to_string(fc.q));
            CHECK(fc.in_J == (!fc.Q_empty && !fc.Q_convex && fc.hull_candidates_in_X));
        }
        // J collects exactly the certified in_J classes.
        std::vector<std::size_t> expect;
        for (std::size_t k = 0; k < rep.classes.size(); ++k)
            if (rep.classes[k].in_J && rep.classes[k].certified) expect.push_back(k);
        CHECK(rep.J == expect);

        // The hull pieces decompose J exactly.
        std::vector<std::size_t> covered;
        for (const auto& g : rep.hull.pieces)
            for (unsigned ix : g.factor_indices) covered.push_back(ix);
        std::sort(covered.begin(), covered.end());
        CHECK(covered == rep.J);

        // Verdict consistency.
        if (rep.verdict == Verdict::Dense) CHECK(rep.J.empty());
        if (rep.verdict == Verdict::NotDense) CHECK_FALSE(rep.J.empty());
        if (rep.verdict == Verdict::Dense || rep.verdict == Verdict::NotDense)
            for (const auto& fc : rep.classes) CHECK(fc.certified);
    }
}

TEST_CASE("base-field run of the extension example downgrades to inconclusive") {
    const auto rep = analyze(parse_bipoly("z1^2 + z2"), parse_map("map (z1 + z2, z1^2 + z2^2)"));
    REQUIRE(factor_texts(rep) ==
            std::vector<std::string>{"z1 - z2", "z1 + z2", "z1^2 + z1*z2 + z2^2"});
    const auto& quad = rep.classes[class_index(rep, "z1^2 + z1*z2 + z2^2")];
    CHECK_FALSE(quad.absolute);
    CHECK_FALSE(quad.certified);
    CHECK_FALSE(quad.Q_convex);  // LP finds the extension-line discs
    // The conjugation identity genuinely holds on this variety, so no
    // certified failure can appear; the classification stays evidence-only.
    CHECK(quad.worst_x_residual < kXResidualFail);
    CHECK(rep.J.empty());
    CHECK(rep.verdict == Verdict::Inconclusive);
    CHECK(rep.hull.pieces.empty());
    CHECK_FALSE(rep.notes.empty());
}

TEST_CASE("ambient graph-space cross-check of the merged piece") {
    const auto& rep = golden_symm_diff();
    // Source-side boundary graph cloud at a coarse grid.
    const auto cloud = graph_over_torus(rep.composed, 48);
    REQUIRE(cloud.size() == 48u * 48u);
    // Every cloud point has unit-torus base coordinates.
    for (std::size_t k = 0; k < cloud.size(); k += 97) {
        CHECK(std::abs(std::abs(cloud[k].x1) - 1.0) <= 1e-12);
        CHECK(std::abs(std::abs(cloud[k].x2) - 1.0) <= 1e-12);
    }
    // The source piece {(1, t, 1)} meets the ambient truncated hull at t = 0.
    CHECK(in_truncated_hull3({1.0, 0.0, 1.0}, cloud, 3));
    // A point far above the graph's reach is rejected at low degree.
    CHECK_FALSE(in_truncated_hull3({0.0, 0.0, 9.0}, cloud, 3));
}

TEST_CASE("doubling the X-sampling budget changes no flag on the goldens") {
    struct Fix {
        const char* P;
        const char* map;
        unsigned ext;
        const AnalysisReport* base;
    };
    const std::vector<Fix> fixtures = {
        {"z1 - z2", "symm", 1, &golden_symm_diff()},
        {"z1 - 2*z2", "symm", 1, &golden_symm_scaled()},
        {"z1 - z2", "map (2*z1 + z2^2, z1 - z2^2)", 1, &golden_conjugated_power()},
        {"z1^2 + z2", "map (z1 + z2, z1^2 + z2^2)", 3, &golden_automorphism()},
    };
    for (const auto& fx : fixtures) {
        INFO("input " << fx.P << " through " << fx.map);
        RunConfig cfg;
        cfg.ext_order = fx.ext;
        cfg.x_samples = 512;
        const auto rep = analyze(parse_bipoly(fx.P), parse_map(fx.map), cfg);
        REQUIRE(rep.classes.size() == fx.base->classes.size());
        for (std::size_t k = 0; k < rep.classes.size(); ++k) {
            CHECK(rep.classes[k].in_J == fx.base->classes[k].in_J);
            CHECK(rep.classes[k].certified == fx.base->classes[k].certified);
        }
        CHECK(rep.verdict == fx.base->verdict);
        CHECK(rep.J == fx.base->J);
    }
}

TEST_CASE("repeated analysis is deterministic") {
    const auto a = analyze(parse_bipoly("z1 - z2"), symmetrization_map());
    const auto b = analyze(parse_bipoly("z1 - z2"), symmetrization_map());
    CHECK(a.delta_num == b.delta_num);
    CHECK(factor_texts(a) == factor_texts(b));
    CHECK(a.J == b.J);
    CHECK(a.verdict == b.verdict);
    REQUIRE(a.hull.pieces.size() == b.hull.pieces.size());
    for (std::size_t k = 0; k < a.hull.pieces.size(); ++k)
        CHECK(a.hull.pieces[k].text == b.hull.pieces[k].text);
    REQUIRE(a.classes.size() == b.classes.size());
    for (std::size_t k = 0; k < a.classes.size(); ++k) {
        CHECK(a.classes[k].note == b.classes[k].note);
        CHECK(a.classes[k].worst_x_residual == b.classes[k].worst_x_residual);
        CHECK(a.classes[k].x_tested == b.classes[k].x_tested);
        CHECK(a.classes[k].trace.points.size() == b.classes[k].trace.points.size());
    }
    CHECK(a.notes == b.notes);
}

TEST_CASE("pipeline input validation") {
    CHECK_THROWS_AS(classify_factor(ExtPoly::constant(CycloElt(2)), parse_bipoly("z1 + z2"),
                                    parse_bipoly("z1 + z2"), RunConfig{}),
                    PreconditionViolation);
    CHECK_THROWS_AS(graph_over_torus(parse_bipoly("z1 - z2"), 4), PreconditionViolation);
    CHECK_THROWS_AS(in_truncated_hull3({0.0, 0.0, 0.0}, {}, 3), PreconditionViolation);
    CHECK_THROWS_AS(in_truncated_hull3({0.0, 0.0, 0.0}, {{1.0, 1.0, 1.0}}, 0),
                    PreconditionViolation);
}
