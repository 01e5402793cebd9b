#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bipoly.hpp"
#include "cyclo.hpp"
#include "errors.hpp"
#include "factorizer.hpp"
#include "hull_oracle.hpp"
#include "laurent.hpp"
#include "point.hpp"
#include "proper_map.hpp"
#include "torus_algebra.hpp"
#include "variety_tools.hpp"

namespace polyhull {

// Pinned pipeline tolerances and budgets.
inline constexpr double kXResidualFail = 1e-3;  // conjugation residual certifying a point off X
inline constexpr double kXResidualPass = 1e-8;  // residual band consistent with lying on X
inline constexpr double kXDomainTol = 1e-6;     // domain band for X-membership sampling
inline constexpr std::size_t kMaxConvexityProbes = 64;  // hull-LP candidate budget per factor
inline constexpr std::size_t kMaxStoredWitnesses = 16;
inline constexpr unsigned kPieceSamples = 256;  // boundary samples per emitted hull piece
inline constexpr unsigned kXSampleAngles = 16;  // angular resolution of the parametrized X sweep

struct RunConfig {
    unsigned torus_grid = 1024;  // slicing grid for torus traces
    unsigned inner_grid = 256;   // slicing grid for interior variety candidates
    unsigned d_max = 8;          // hull-membership LP degree cap
    unsigned x_samples = 256;    // per-factor X sampling budget on parametrized curves
    unsigned ext_order = 1;      // cyclotomic order adjoined for factoring
    double tol_set = 1e-9;       // on-set acceptance band and dedupe cell for clouds
    double tol_root = 1e-7;      // pre-polish screening band for slice roots
    std::uint64_t seed = 20240817ULL;
};

// Grids and sampling budgets must be >= 64; tolerances must sit in (0, 1e-3).
inline void validate(const RunConfig& cfg) {
    if (cfg.torus_grid < 64 || cfg.inner_grid < 64 || cfg.x_samples < 64)
        throw PreconditionViolation("run config needs every grid/sample count >= 64");
    if (cfg.d_max < 1) throw PreconditionViolation("run config needs d_max >= 1");
    const auto tol_ok = [](double t) { return t > 0.0 && t < 1e-3; };
    if (!tol_ok(cfg.tol_set) || !tol_ok(cfg.tol_root))
        throw PreconditionViolation("run config needs tolerances in (0, 1e-3)");
}

enum class Verdict { Dense, NotDense, DegenerateDelta, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Dense: return "Dense";
        case Verdict::NotDense: return "NotDense";
        case Verdict::DegenerateDelta: return "DegenerateDelta";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

// Classification of one irreducible factor q of the determinant numerator.
// The invariant in_J == (!Q_empty && !Q_convex && hull_candidates_in_X) holds
// by construction; `certified` records whether that value is backed by exact
// certificates (emptiness margins, parametrized-hull constancy) rather than
// LP evidence alone.
struct FactorClassification {
    ExtPoly q;
    unsigned multiplicity = 1;
    bool absolute = true;  // irreducible over every cyclotomic extension

    bool Q_empty = false;
    bool Q_convex = false;
    bool hull_candidates_in_X = false;
    bool in_J = false;
    bool certified = false;
    bool scope_note = false;  // X probed on variety-restricted samples only

    ParamKind param_kind = ParamKind::General;
    std::optional<ParamHull> exact_hull;
    std::optional<CycloElt> piece_value;  // constant graph value over the swept disc
    bool exact_x = false;                 // X decided by the exact constancy certificate
    ConvexityReport convexity;
    EmptinessReport emptiness;
    CurveCloud trace;
    std::vector<PointC2> x_witnesses;  // domain-valid variety samples off X
    double worst_x_residual = 0.0;
    std::size_t x_tested = 0;
    std::string note;
};

// The emitted description of the closure of the graph algebra's joint
// spectrum: the boundary graph itself plus the analytic pieces glued on.
struct HullDescription {
    std::string base = "the graph of the conjugated polynomial over the distinguished boundary";
    std::vector<GraphPiece> pieces;
};

struct AnalysisReport {
    BiPoly P;  // input polynomial in the target coordinates
    ProperMapDescriptor map;
    RunConfig config;
    BiPoly composed;   // P with the map components substituted in
    BiPoly reflected;  // torus reflection R of the composed polynomial
    LaurentRat h;      // R / (z1^m z2^n), the boundary conjugate
    BiPoly delta_num;  // determinant numerator N
    FactorList factors;
    std::vector<FactorClassification> classes;  // parallel to factors.factors
    std::vector<std::size_t> J;                 // indices with certified in_J
    HullDescription hull;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> notes;
};

namespace detail {

// The curve swept by a recognized parametrized form, as polynomials in the
// parameter (carried in the first variable slot).
inline std::pair<ExtPoly, ExtPoly> param_curve(const ParamForm& form) {
    const ExtPoly t = ExtPoly::var1();
    switch (form.kind) {
        case ParamKind::VerticalLine: return {ExtPoly::constant(form.c), t};
        case ParamKind::HorizontalLine: return {t, ExtPoly::constant(form.c)};
        case ParamKind::Graph1: return {t, form.c * t + ExtPoly::constant(form.d)};
        case ParamKind::Graph2: return {form.c * t + ExtPoly::constant(form.d), t};
        default: throw PreconditionViolation("parametrized curve needs a recognized form");
    }
}

struct ExactXCertificate {
    bool decided = false;
    bool in_x = false;
    CycloElt lambda;  // the common constant value of the boundary conjugate
};

// Exact X-inclusion along a parametrized curve.  Restricted to the curve,
// the conjugated polynomial is anti-holomorphic in the parameter while the
// boundary conjugate h is meromorphic, so the identity conj(p) = h can hold
// on the swept disc only when both restrictions are the same constant; that
// constancy is decidable by exact arithmetic either way.
inline ExactXCertificate exact_x_on_curve(const ParamForm& form, const BiPoly& p,
                                          const BiPoly& R) {
    const auto [x1, x2] = param_curve(form);
    const unsigned m = p.declared_m(), n = p.declared_n();
    const ExtPoly den = x1.pow(m) * x2.pow(n);
    ExactXCertificate cert;
    if (den.is_zero()) return cert;  // curve inside the axis set: undecided here
    const ExtPoly num = to_ext(R).substitute(x1, x2);
    const CycloElt lam =
        num.is_zero() ? CycloElt(0) : num.leading().second / den.leading().second;
    const bool h_const = num == ExtPoly::constant(lam) * den;
    const ExtPoly pz = to_ext(p).substitute(x1, x2);
    cert.decided = true;
    cert.lambda = lam;
    cert.in_x = h_const && pz.is_constant() && pz.coeff(0, 0).conj() == lam;
    return cert;
}

inline void consider_x_sample(FactorClassification& fc, const BiPoly& p, const PointC2& pt) {
    if (!in_x_domain(pt, kXDomainTol)) return;
    const double res = x_residual(p, pt);
    ++fc.x_tested;
    fc.worst_x_residual = std::max(fc.worst_x_residual, res);
    if (res >= kXResidualFail && fc.x_witnesses.size() < kMaxStoredWitnesses)
        fc.x_witnesses.push_back(pt);
}

// Sweep the open parameter disc on a polar grid (budget/kXSampleAngles radii
// by kXSampleAngles angles); torus and axis samples are excluded by the
// domain filter.
inline void sample_param_x(FactorClassification& fc, const ParamForm& form, const BiPoly& p,
                           unsigned budget) {
    const auto [x1, x2] = param_curve(form);
    const unsigned radii = std::max(1u, budget / kXSampleAngles);
    for (unsigned k = 1; k <= radii; ++k) {
        const double r = static_cast<double>(k) / static_cast<double>(radii);
        for (unsigned j = 0; j < kXSampleAngles; ++j) {
            const double a = 2.0 * M_PI * j / kXSampleAngles;
            const std::complex<double> t = std::polar(r, a);
            consider_x_sample(fc, p, {x1.eval(t, 0.0), x2.eval(t, 0.0)});
        }
    }
}

// Hull-LP convexity probe on a deterministic strided subset of the interior
// candidates.  One in-hull candidate already refutes convexity, so the sweep
// stops at the first such witness; certifying-by-sweep that every candidate
// separates costs only the cheap low-degree separation certificates.
inline void probe_convexity(FactorClassification& fc, const CurveCloud& candidates,
                            unsigned d_max) {
    const auto probes = thin_points(candidates.points, kMaxConvexityProbes);
    fc.convexity = ConvexityReport{};
    for (const auto& cand : probes) {
        const HullVerdict v = membership(cand, fc.trace, d_max);
        if (v.outcome == HullOutcome::InHullUpToDegree) {
            fc.convexity.witnesses.push_back(cand);
            break;
        }
    }
    fc.convexity.convex = fc.convexity.witnesses.empty();
    fc.Q_convex = fc.convexity.convex;
    if (candidates.points.size() > probes.size()) {
        if (!fc.note.empty()) fc.note += "; ";
        fc.note += "convexity probed on " + std::to_string(probes.size()) + " of " +
                   std::to_string(candidates.points.size()) + " candidates";
    }
}

}  // namespace detail

// Classify one factor q of the determinant numerator against the composed
// polynomial p and its torus reflection R.
inline FactorClassification classify_factor(const ExtPoly& q, const BiPoly& p, const BiPoly& R,
                                            const RunConfig& cfg) {
    if (q.is_constant())
        throw PreconditionViolation("factor classification needs a nonconstant factor");
    FactorClassification fc;
    fc.q = q;
    fc.trace = torus_slice(q, cfg.torus_grid, cfg.tol_set, cfg.tol_root);
    fc.emptiness = probe_torus_emptiness(q, cfg.torus_grid);

    if (fc.trace.points.empty()) {
        fc.Q_empty = true;
        fc.Q_convex = true;              // vacuous
        fc.hull_candidates_in_X = true;  // vacuous
        fc.in_J = false;
        fc.certified = fc.emptiness.verdict == SetProbe::Empty;
        fc.note = fc.certified
                      ? "torus trace is empty (every slice root stays a margin off the torus)"
                      : "no torus trace at this grid, but emptiness could not be certified";
        return fc;
    }
    fc.Q_empty = false;  // certified: residual-checked trace points exist

    const ParamForm form = recognize_param(q);
    fc.param_kind = form.kind;

    // Variety-restricted X probes strictly inside the bidisc.
    const CurveCloud candidates = inner_slice(q, cfg.inner_grid, cfg.tol_set);
    for (const auto& pt : candidates.points) detail::consider_x_sample(fc, p, pt);
    if (form.kind != ParamKind::General) detail::sample_param_x(fc, form, p, cfg.x_samples);
    fc.scope_note = form.kind == ParamKind::General && !candidates.points.empty();

    // Exact path for recognized parametrizations.
    if (form.kind != ParamKind::General) {
        bool ambiguous = false;
        ParamHull ph;
        try {
            ph = param_hull(form, fc.trace);
        } catch (const IncompleteCloud&) {
            ambiguous = true;
            fc.note = "parameter-circle coverage ambiguous at this grid; using the sampled oracle";
        }
        if (!ambiguous) {
            fc.exact_hull = ph;
            if (ph.full_disc) {
                fc.Q_convex = false;  // the disc sweep strictly exceeds the torus trace
                const auto cert = detail::exact_x_on_curve(form, p, R);
                if (cert.decided) {
                    fc.exact_x = true;
                    fc.hull_candidates_in_X = cert.in_x;
                    if (cert.in_x) fc.piece_value = cert.lambda;
                    fc.in_J = !fc.Q_empty && !fc.Q_convex && fc.hull_candidates_in_X;
                    fc.certified = true;
                    fc.note = cert.in_x
                                  ? "conjugation identity holds identically on the swept disc "
                                    "(graph value " +
                                        to_string(ExtPoly::constant(cert.lambda)) + ")"
                                  : "conjugation identity fails off the torus (non-constant "
                                    "restriction along the disc)";
                    return fc;
                }
            } else {
                // Proper arc: a closed sub-arc of a parameter circle is
                // polynomially convex, so the trace is its own hull.
                fc.Q_convex = true;
                fc.hull_candidates_in_X = true;  // vacuous: no off-torus hull points
                fc.in_J = false;
                fc.certified = true;
                fc.note = "parameter coverage is a proper arc; the trace equals its own hull";
                return fc;
            }
        }
    }

    // A certified identity failure at an interior variety sample settles
    // J-membership outright: the hull stays inside the zero set, so either it
    // adds no interior points at all, or it adds a positive-measure curve
    // chunk on which the failed identity cannot hold identically.
    if (fc.worst_x_residual >= kXResidualFail) {
        fc.hull_candidates_in_X = false;
        detail::probe_convexity(fc, candidates, cfg.d_max);  // report fidelity only
        fc.in_J = false;
        fc.certified = true;
        if (!fc.note.empty()) fc.note += "; ";
        fc.note += "conjugation identity fails at interior variety samples (worst residual " +
                   std::to_string(fc.worst_x_residual) + ")";
        return fc;
    }

    // No certified failure: the hull LP decides convexity.
    detail::probe_convexity(fc, candidates, cfg.d_max);
    if (fc.Q_convex) {
        fc.hull_candidates_in_X = true;  // vacuous
        fc.in_J = false;
        fc.certified = true;  // pinned convention: the candidate sweep found nothing in the hull
        if (!fc.note.empty()) fc.note += "; ";
        fc.note += candidates.points.empty()
                       ? "no interior candidates near the variety; the trace is its own hull"
                       : "every probed interior candidate separates from the trace hull";
        return fc;
    }
    // The LP claims interior hull points and sampling could not refute X.
    fc.hull_candidates_in_X = fc.x_tested > 0 && fc.worst_x_residual <= kXResidualPass;
    fc.in_J = !fc.Q_empty && !fc.Q_convex && fc.hull_candidates_in_X;
    fc.certified = false;
    if (!fc.note.empty()) fc.note += "; ";
    fc.note += "hull membership rests on LP evidence only; no exact certificate available";
    return fc;
}

namespace detail {

// Assemble the source-side hull piece for a certified J factor: the disc
// swept by the parametrization, carrying the constant graph value.
inline GraphPiece build_piece(const FactorClassification& fc, unsigned index) {
    if (!fc.exact_hull || !fc.piece_value)
        throw PreconditionViolation("hull pieces need a certified parametrized classification");
    GraphPiece g;
    g.exact = true;
    std::tie(g.x1, g.x2) = param_curve(fc.exact_hull->form);
    g.w_num = ExtPoly::constant(*fc.piece_value);
    g.w_den = ExtPoly::constant(CycloElt(1));
    g.w_poly = true;
    g.factor_indices = {index};
    const std::complex<double> w = fc.piece_value->value();
    g.samples.reserve(kPieceSamples);
    for (unsigned k = 0; k < kPieceSamples; ++k) {
        const double a = 2.0 * M_PI * k / kPieceSamples;
        const std::complex<double> t = std::polar(1.0, a);
        g.samples.push_back({g.x1.eval(t, 0.0), g.x2.eval(t, 0.0), w});
    }
    g.text = piece_text(g);
    return g;
}

}  // namespace detail

// Full analysis: compose the input polynomial with the proper map, build the
// torus reflection and determinant numerator, factor it, classify every
// factor (in parallel; joined in index order for determinism), collect the
// certified J set, and push the resulting hull pieces through the map.
inline AnalysisReport analyze(const BiPoly& P, const ProperMapDescriptor& map,
                              const RunConfig& cfg = {}) {
    if (P.is_zero()) throw PreconditionViolation("analysis needs a nonzero polynomial");
    validate(cfg);
    CycloElt::check_order(cfg.ext_order);
    AnalysisReport rep;
    rep.P = P;
    rep.map = map;
    rep.config = cfg;

    BiPoly p = compose(P, map);
    p.recompute_declared();
    rep.composed = p;
    if (p.is_constant()) {
        rep.verdict = Verdict::DegenerateDelta;
        rep.notes.push_back("composed polynomial is constant; the determinant criterion is vacuous");
        return rep;
    }
    rep.reflected = reflect_poly(p);
    rep.h = boundary_h(p);
    rep.delta_num = delta_numerator(p);
    if (rep.delta_num.is_zero()) {
        rep.verdict = Verdict::DegenerateDelta;
        rep.notes.push_back(
            "determinant numerator vanishes identically; the criterion gives no information");
        return rep;
    }

    rep.factors = factor(rep.delta_num, CycloExt{cfg.ext_order}, cfg.seed);

    std::vector<std::future<FactorClassification>> futs;
    futs.reserve(rep.factors.factors.size());
    for (const auto& f : rep.factors.factors) {
        futs.push_back(std::async(std::launch::async, [&rep, &cfg, q = f.q]() {
            return classify_factor(q, rep.composed, rep.reflected, cfg);
        }));
    }
    bool all_certified = true;
    for (std::size_t k = 0; k < futs.size(); ++k) {
        FactorClassification fc = futs[k].get();
        fc.multiplicity = rep.factors.factors[k].multiplicity;
        fc.absolute = rep.factors.factors[k].absolute;
        if (!fc.absolute && fc.certified) {
            fc.certified = false;
            if (!fc.note.empty()) fc.note += "; ";
            fc.note += "factor may split over a larger cyclotomic order; classification downgraded";
        }
        if (!fc.certified) all_certified = false;
        rep.classes.push_back(std::move(fc));
    }

    std::vector<GraphPiece> source_pieces;
    for (std::size_t k = 0; k < rep.classes.size(); ++k) {
        const auto& fc = rep.classes[k];
        if (fc.in_J && fc.certified) {
            rep.J.push_back(k);
            source_pieces.push_back(detail::build_piece(fc, static_cast<unsigned>(k)));
        }
    }
    rep.hull.pieces = pushforward_hull(source_pieces, map);

    for (const auto& fc : rep.classes)
        if (fc.scope_note)
            rep.notes.push_back("factor " + to_string(fc.q) +
                                ": X probed on variety-restricted samples only");
    if (!all_certified) {
        rep.verdict = Verdict::Inconclusive;
        rep.notes.push_back("at least one factor classification is uncertified");
        return rep;
    }
    rep.verdict = rep.J.empty() ? Verdict::Dense : Verdict::NotDense;
    return rep;
}

// The boundary-graph cloud over the distinguished torus: triples
// (z1, z2, conj(p(z1, z2))) over a uniform grid-by-grid sweep.
inline std::vector<PointC3> graph_over_torus(const BiPoly& p, unsigned grid) {
    if (grid < 8) throw PreconditionViolation("graph sampling needs grid >= 8");
    std::vector<PointC3> out;
    out.reserve(static_cast<std::size_t>(grid) * grid);
    for (unsigned a = 0; a < grid; ++a) {
        const std::complex<double> z1 = std::polar(1.0, 2.0 * M_PI * a / grid);
        for (unsigned b = 0; b < grid; ++b) {
            const std::complex<double> z2 = std::polar(1.0, 2.0 * M_PI * b / grid);
            out.push_back({z1, z2, std::conj(p.eval(z1, z2))});
        }
    }
    return out;
}

}  // namespace polyhull
