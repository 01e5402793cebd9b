#pragma once

#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "jimbo_pipeline.hpp"

namespace polyhull {

// Version of the machine-readable report layout. Bump on any key or
// structure change; consumers must check it before reading further.
inline constexpr int kReportVersion = 1;

inline const char* param_kind_name(ParamKind k) {
    switch (k) {
        case ParamKind::VerticalLine: return "vertical-line";
        case ParamKind::HorizontalLine: return "horizontal-line";
        case ParamKind::Graph1: return "graph-over-z1";
        case ParamKind::Graph2: return "graph-over-z2";
        case ParamKind::General: return "general";
    }
    return "?";
}

inline const char* set_probe_name(SetProbe s) {
    switch (s) {
        case SetProbe::Empty: return "empty";
        case SetProbe::NonEmpty: return "nonempty";
        case SetProbe::Undecided: return "undecided";
    }
    return "?";
}

// Exit-code contract: 0 when the criterion resolved (Dense or NotDense),
// 2 when it could not (Inconclusive or DegenerateDelta). Input errors are
// reported by the CLI as 1 before any verdict exists.
inline int verdict_exit_code(Verdict v) {
    return (v == Verdict::Dense || v == Verdict::NotDense) ? 0 : 2;
}

namespace detail {

inline nlohmann::ordered_json point_record(const PointC2& p) {
    return nlohmann::ordered_json::array(
        {p.z1.real(), p.z1.imag(), p.z2.real(), p.z2.imag()});
}

inline nlohmann::ordered_json config_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["torus_grid"] = cfg.torus_grid;
    j["inner_grid"] = cfg.inner_grid;
    j["d_max"] = cfg.d_max;
    j["x_samples"] = cfg.x_samples;
    j["ext_order"] = cfg.ext_order;
    j["tol_set"] = cfg.tol_set;
    j["tol_root"] = cfg.tol_root;
    j["seed"] = cfg.seed;
    return j;
}

inline nlohmann::ordered_json class_json(const FactorClassification& fc, std::size_t index) {
    nlohmann::ordered_json j;
    j["index"] = index;
    j["polynomial"] = to_string(fc.q);
    j["multiplicity"] = fc.multiplicity;
    j["absolutely_irreducible"] = fc.absolute;
    j["param_kind"] = param_kind_name(fc.param_kind);
    j["trace_points"] = fc.trace.points.size();
    j["emptiness"] = {{"verdict", set_probe_name(fc.emptiness.verdict)},
                      {"min_torus_distance", fc.emptiness.min_torus_distance},
                      {"grid", fc.emptiness.grid}};
    j["Q_empty"] = fc.Q_empty;
    j["Q_convex"] = fc.Q_convex;
    j["hull_candidates_in_X"] = fc.hull_candidates_in_X;
    j["in_J"] = fc.in_J;
    j["certified"] = fc.certified;
    j["exact_x"] = fc.exact_x;
    j["piece_value"] = fc.piece_value ? nlohmann::ordered_json(to_string(*fc.piece_value))
                                      : nlohmann::ordered_json(nullptr);
    j["worst_x_residual"] = fc.worst_x_residual;
    j["x_tested"] = fc.x_tested;
    auto wit = nlohmann::ordered_json::array();
    for (const auto& p : fc.x_witnesses) wit.push_back(point_record(p));
    j["x_witnesses"] = std::move(wit);
    j["variety_restricted_probes"] = fc.scope_note;
    j["note"] = fc.note;
    return j;
}

inline nlohmann::ordered_json piece_json(const GraphPiece& g) {
    nlohmann::ordered_json j;
    j["text"] = g.text;
    j["factor_indices"] = g.factor_indices;
    j["exact"] = g.exact;
    j["x1"] = to_string(g.x1);
    j["x2"] = to_string(g.x2);
    j["w_num"] = to_string(g.w_num);
    j["w_den"] = to_string(g.w_den);
    j["w_poly"] = g.w_poly;
    j["boundary_samples"] = g.samples.size();
    return j;
}

}  // namespace detail

// Machine-readable analysis report. Key order is fixed and the document
// contains no timestamps or machine identifiers, so identical runs produce
// identical bytes.
inline nlohmann::ordered_json report_json(const AnalysisReport& rep) {
    nlohmann::ordered_json j;
    j["report"] = "polyhull.analysis";
    j["version"] = kReportVersion;
    j["input"] = {{"polynomial", to_string(rep.P)},
                  {"map", rep.map.text},
                  {"map_components",
                   nlohmann::ordered_json::array({to_string(rep.map.p1), to_string(rep.map.p2)})},
                  {"map_degree", rep.map.topological_degree()},
                  {"config", detail::config_json(rep.config)}};
    j["composed"] = to_string(rep.composed);
    j["declared_bidegree"] =
        nlohmann::ordered_json::array({rep.composed.declared_m(), rep.composed.declared_n()});
    j["boundary_conjugate"] = {{"numerator", to_string(rep.h.num)},
                               {"pole1", rep.h.pole1},
                               {"pole2", rep.h.pole2}};
    j["delta_numerator"] = to_string(rep.delta_num);
    j["unit"] = to_string(rep.factors.unit);
    auto cls = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < rep.classes.size(); ++k)
        cls.push_back(detail::class_json(rep.classes[k], k));
    j["factors"] = std::move(cls);
    j["J"] = rep.J;
    j["verdict"] = verdict_name(rep.verdict);
    auto pieces = nlohmann::ordered_json::array();
    for (const auto& g : rep.hull.pieces) pieces.push_back(detail::piece_json(g));
    j["hull"] = {{"base", rep.hull.base}, {"pieces", std::move(pieces)}};
    j["notes"] = rep.notes;
    return j;
}

// The report as a JSON text blob (2-space indent, trailing newline). The
// rendering round-trips byte-identically through parse + re-render.
inline std::string render_json(const AnalysisReport& rep) { return report_json(rep).dump(2) + "\n"; }

// Human-readable summary in the presentation order: boundary conjugate,
// determinant numerator, factors, per-factor classification, J, verdict, hull.
inline std::string render_summary(const AnalysisReport& rep) {
    std::ostringstream out;
    out << "input P = " << to_string(rep.P) << "   map: " << rep.map.text << "\n";
    out << "composed polynomial p = " << to_string(rep.composed) << "\n";
    out << "boundary conjugate h = (" << to_string(rep.h.num) << ") / (z1^" << rep.h.pole1
        << " * z2^" << rep.h.pole2 << ")\n";
    out << "determinant numerator = " << to_string(rep.delta_num) << "\n";
    if (rep.classes.empty()) {
        out << "factors: (none)\n";
    } else {
        out << "factors (unit " << to_string(rep.factors.unit) << "):\n";
        for (std::size_t k = 0; k < rep.classes.size(); ++k) {
            const auto& fc = rep.classes[k];
            out << "  [" << k << "] " << to_string(fc.q) << "  multiplicity " << fc.multiplicity
                << (fc.absolute ? "" : "  (may split over a larger cyclotomic order)") << "\n";
        }
        out << "classification:\n";
        for (std::size_t k = 0; k < rep.classes.size(); ++k) {
            const auto& fc = rep.classes[k];
            out << "  [" << k << "] trace " << fc.trace.points.size() << " pts, Q "
                << (fc.Q_empty ? "empty" : "nonempty") << ", "
                << (fc.Q_convex ? "convex" : "not convex") << ", hull-in-X "
                << (fc.hull_candidates_in_X ? "yes" : "no") << " => in_J "
                << (fc.in_J ? "yes" : "no") << (fc.certified ? " [certified]" : " [uncertified]")
                << "\n";
            if (!fc.note.empty()) out << "        " << fc.note << "\n";
        }
    }
    out << "J = {";
    for (std::size_t i = 0; i < rep.J.size(); ++i)
        out << (i ? ", " : " ") << to_string(rep.classes[rep.J[i]].q);
    out << (rep.J.empty() ? "}" : " }") << "\n";
    out << "verdict: " << verdict_name(rep.verdict) << "\n";
    if (rep.verdict == Verdict::NotDense) {
        out << "hull: " << rep.hull.base;
        for (const auto& g : rep.hull.pieces) out << "\n  union " << g.text;
        out << "\n";
    } else {
        out << "hull: no description emitted (verdict " << verdict_name(rep.verdict) << ")\n";
    }
    for (const auto& n : rep.notes) out << "note: " << n << "\n";
    return out.str();
}

}  // namespace polyhull
