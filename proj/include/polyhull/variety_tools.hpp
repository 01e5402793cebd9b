#pragma once

#include <array>
#include <complex>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bipoly.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "point.hpp"

namespace polyhull {

// Pinned tolerances for curve sampling.
inline constexpr double kTorusBandLoose = 1e-7;   // eigenvalue roots, pre-polish
inline constexpr double kTorusBandTight = 1e-9;   // post-polish re-test
inline constexpr double kCloudResidual = 1e-8;    // |q| bound on every emitted point
inline constexpr double kInteriorMargin = 1e-3;   // strict-interior margin for disc samples
inline constexpr double kEmptyMargin = 1e-3;      // distance-to-torus needed to certify emptiness
inline constexpr double kDegenerateSliceTol = 1e-12;
inline constexpr double kCloudDedupe = 1e-9;

enum class Region { Torus, OpenBidisc, BidiscBoundary };

struct CurveCloud {
    std::vector<PointC2> points;
    std::vector<double> residuals;  // |source(point)|, parallel to points
    ExtPoly source;
    Region region = Region::Torus;
    // Slices where source vanished identically (full line inside the zero
    // set); they are reported here and covered by the complementary slicing
    // direction rather than solved.
    unsigned degenerate_slices = 0;
};

enum class SetProbe { Empty, NonEmpty, Undecided };

struct EmptinessReport {
    SetProbe verdict = SetProbe::Undecided;
    double min_torus_distance = 0.0;  // over all slice roots at the probe grid
    unsigned grid = 0;
};

namespace detail {

// Tolerant point dedupe on a 1e-9 grid with neighbor-cell lookups. Exact
// cell tuples are stored (hashing the tuple down to one word collides far
// too often on the highly structured cells this sees).
class PointDeduper {
public:
    explicit PointDeduper(double cell_size = kCloudDedupe) : cell_size_(cell_size) {}

    bool insert(const PointC2& p) {
        const Cell k{cell(p.z1.real()), cell(p.z1.imag()), cell(p.z2.real()), cell(p.z2.imag())};
        Cell probe;
        for (long long d0 = -1; d0 <= 1; ++d0)
            for (long long d1 = -1; d1 <= 1; ++d1)
                for (long long d2 = -1; d2 <= 1; ++d2)
                    for (long long d3 = -1; d3 <= 1; ++d3) {
                        probe = {k[0] + d0, k[1] + d1, k[2] + d2, k[3] + d3};
                        if (seen_.count(probe)) return false;
                    }
        seen_.insert(k);
        return true;
    }

private:
    using Cell = std::array<long long, 4>;
    long long cell(double x) const { return static_cast<long long>(std::floor(x / cell_size_)); }
    double cell_size_;
    std::set<Cell> seen_;
};

// One slicing direction: fix one variable at each value in slice_vals, solve
// for the other. keep() filters the solved coordinate; accept() the point.
// raw_band > 0 skips roots farther than that from the unit circle before any
// polishing (a screening knob for on-torus slicing; 0 polishes everything).
template <class KeepFn>
void slice_direction(const ExtPoly& q, bool solve_z2, const std::vector<std::complex<double>>& slice_vals,
                     double coeff_scale, KeepFn&& keep, CurveCloud& out, PointDeduper& dedupe,
                     double* min_torus_distance, double raw_band = 0.0) {
    const ExtPoly solver = solve_z2 ? q : q.swap_vars();
    if (solver.deg2() == 0) return;  // nothing to solve for in this direction
    for (const auto& v : slice_vals) {
        CVec cs = solver.z2_coeffs_at(v);
        double mag = 0.0;
        for (const auto& c : cs) mag = std::max(mag, std::abs(c));
        if (mag <= kDegenerateSliceTol * (1.0 + coeff_scale)) {
            ++out.degenerate_slices;
            continue;
        }
        CVec raw;
        try {
            raw = roots_of(cs);
        } catch (const Error&) {
            continue;
        }
        CVec roots;
        roots.reserve(raw.size());
        for (const auto& w0 : raw) {
            if (min_torus_distance)
                *min_torus_distance = std::min(*min_torus_distance, std::abs(std::abs(w0) - 1.0));
            if (raw_band > 0.0 && std::abs(std::abs(w0) - 1.0) > raw_band) continue;
            roots.push_back(newton_polish(cs, w0, 2));
        }
        sort_roots(roots);
        for (const auto& w : roots) {
            if (min_torus_distance)
                *min_torus_distance = std::min(*min_torus_distance, std::abs(std::abs(w) - 1.0));
            if (!keep(w)) continue;
            PointC2 p{solve_z2 ? v : w, solve_z2 ? w : v};
            const double res = std::abs(q.eval(p.z1, p.z2));
            if (res > kCloudResidual) continue;
            if (!dedupe.insert(p)) continue;
            out.points.push_back(p);
            out.residuals.push_back(res);
        }
    }
}

inline double coeff_scale_of(const ExtPoly& q) {
    double s = 0.0;
    for (const auto& [e, c] : q.terms()) s += std::abs(c.value());
    return s;
}

inline std::vector<std::complex<double>> circle_nodes(unsigned grid, double radius) {
    std::vector<std::complex<double>> out(grid);
    for (unsigned s = 0; s < grid; ++s) {
        const double th = 2.0 * M_PI * s / grid;
        out[s] = radius * std::complex<double>(std::cos(th), std::sin(th));
    }
    return out;
}

inline CurveCloud torus_slice_impl(const ExtPoly& q, unsigned grid, double* min_torus_distance,
                                   double tol_set = kTorusBandTight, double tol_root = kTorusBandLoose) {
    if (q.is_constant()) throw PreconditionViolation("torus slicing needs a nonconstant polynomial");
    if (grid < 64) throw PreconditionViolation("torus slicing needs grid >= 64");
    CurveCloud out;
    out.source = q;
    out.region = Region::Torus;
    const double scale = coeff_scale_of(q);
    const auto nodes = circle_nodes(grid, 1.0);
    PointDeduper dedupe{tol_set};
    const auto on_band = [&](const std::complex<double>& w) {
        return std::abs(std::abs(w) - 1.0) <= tol_set;
    };
    // Eigenvalue roots farther than tol_root from the circle are screened out
    // before polishing; survivors are polished in slice_direction and then
    // re-tested on the tight tol_set band by on_band.
    slice_direction(q, true, nodes, scale, on_band, out, dedupe, min_torus_distance, tol_root);
    slice_direction(q, false, nodes, scale, on_band, out, dedupe, min_torus_distance, tol_root);
    return out;
}

}  // namespace detail

// Points of Z(q) on the unit torus: both variables sliced over `grid` unit
// circle angles, the companion roots of the complementary variable kept when
// they also land on the unit circle. tol_set is the on-torus acceptance band
// (and dedupe cell size); tol_root screens raw eigenvalue roots pre-polish.
inline CurveCloud torus_slice(const ExtPoly& q, unsigned grid, double tol_set = kTorusBandTight,
                              double tol_root = kTorusBandLoose) {
    return detail::torus_slice_impl(q, grid, nullptr, tol_set, tol_root);
}
inline CurveCloud torus_slice(const BiPoly& q, unsigned grid, double tol_set = kTorusBandTight,
                              double tol_root = kTorusBandLoose) {
    return torus_slice(to_ext(q), grid, tol_set, tol_root);
}

// Points of Z(q) strictly inside the open bidisc (margin 1e-3), sampled over
// discs of radii 0.1..0.9 in each variable. tol_set sets the dedupe cell.
inline CurveCloud inner_slice(const ExtPoly& q, unsigned grid, double tol_set = kCloudDedupe) {
    if (q.is_constant()) throw PreconditionViolation("interior slicing needs a nonconstant polynomial");
    if (grid < 64) throw PreconditionViolation("interior slicing needs grid >= 64");
    CurveCloud out;
    out.source = q;
    out.region = Region::OpenBidisc;
    const double scale = detail::coeff_scale_of(q);
    detail::PointDeduper dedupe{tol_set};
    const auto interior = [](const std::complex<double>& w) { return std::abs(w) <= 1.0 - kInteriorMargin; };
    for (int r = 1; r <= 9; ++r) {
        const auto nodes = detail::circle_nodes(grid, 0.1 * r);
        detail::slice_direction(q, true, nodes, scale, interior, out, dedupe, nullptr);
        detail::slice_direction(q, false, nodes, scale, interior, out, dedupe, nullptr);
    }
    return out;
}
inline CurveCloud inner_slice(const BiPoly& q, unsigned grid, double tol_set = kCloudDedupe) {
    return inner_slice(to_ext(q), grid, tol_set);
}

// Two-sided emptiness probe for Z(q) ∩ torus at the pinned fine grid:
// Empty requires an empty cloud AND all slice roots staying a margin away
// from the torus; a near miss stays Undecided.
inline EmptinessReport probe_torus_emptiness(const ExtPoly& q, unsigned grid = 4096) {
    EmptinessReport rep;
    rep.grid = grid;
    double dmin = 1e300;
    const CurveCloud cloud = detail::torus_slice_impl(q, grid, &dmin);
    rep.min_torus_distance = dmin >= 1e300 ? 0.0 : dmin;
    if (!cloud.points.empty()) {
        rep.verdict = SetProbe::NonEmpty;
        rep.min_torus_distance = 0.0;
    } else if (dmin >= 1e300) {
        // no roots existed in either direction: nothing can meet the torus
        rep.verdict = SetProbe::Empty;
        rep.min_torus_distance = 1.0;
    } else if (dmin > kEmptyMargin) {
        rep.verdict = SetProbe::Empty;
    } else {
        rep.verdict = SetProbe::Undecided;
    }
    return rep;
}
inline EmptinessReport probe_torus_emptiness(const BiPoly& q, unsigned grid = 4096) {
    return probe_torus_emptiness(to_ext(q), grid);
}

// ---------------------------------------------------------------------------
// Rationally parametrized special forms (exact fast paths for linear factors).

enum class ParamKind { VerticalLine, HorizontalLine, Graph1, Graph2, General };

struct ParamForm {
    ParamKind kind = ParamKind::General;
    CycloElt c;  // VerticalLine: z1 = c; HorizontalLine: z2 = c;
    CycloElt d;  // Graph1: z2 = c*z1 + d; Graph2: z1 = c*z2 + d
    ExtPoly source;
};

inline ParamForm recognize_param(const ExtPoly& q) {
    if (q.is_constant()) throw PreconditionViolation("parametric recognition needs a nonconstant polynomial");
    ParamForm out;
    out.source = q;
    const unsigned d1 = q.deg1(), d2 = q.deg2();
    const auto certify = [&](const ExtPoly& x1, const ExtPoly& x2) {
        return q.substitute(x1, x2).is_zero();
    };
    if (d2 == 0 && d1 == 1) {
        const CycloElt c = CycloElt(0) - q.coeff(0, 0) / q.coeff(1, 0);
        if (certify(ExtPoly::constant(c), ExtPoly::var2())) {
            out.kind = ParamKind::VerticalLine;
            out.c = c;
        }
        return out;
    }
    if (d1 == 0 && d2 == 1) {
        const CycloElt c = CycloElt(0) - q.coeff(0, 0) / q.coeff(0, 1);
        if (certify(ExtPoly::var1(), ExtPoly::constant(c))) {
            out.kind = ParamKind::HorizontalLine;
            out.c = c;
        }
        return out;
    }
    if (d2 == 1) {
        const ExtPoly lead = q.coeff_of_z2(1), rest = q.coeff_of_z2(0);
        if (lead.is_constant() && rest.deg1() <= 1) {
            const CycloElt a = lead.coeff(0, 0);
            const CycloElt c = CycloElt(0) - rest.coeff(1, 0) / a;
            const CycloElt d = CycloElt(0) - rest.coeff(0, 0) / a;
            const ExtPoly sub = c * ExtPoly::var1() + ExtPoly::constant(d);
            if (certify(ExtPoly::var1(), sub)) {
                out.kind = ParamKind::Graph1;
                out.c = c;
                out.d = d;
                return out;
            }
        }
    }
    if (d1 == 1) {
        const ExtPoly lead = q.coeff_of_z1(1), rest = q.coeff_of_z1(0);
        if (lead.is_constant() && rest.deg2() <= 1) {
            const CycloElt a = lead.coeff(0, 0);
            const CycloElt c = CycloElt(0) - rest.coeff(0, 1) / a;
            const CycloElt d = CycloElt(0) - rest.coeff(0, 0) / a;
            const ExtPoly sub = c * ExtPoly::var2() + ExtPoly::constant(d);
            if (certify(sub, ExtPoly::var2())) {
                out.kind = ParamKind::Graph2;
                out.c = c;
                out.d = d;
                return out;
            }
        }
    }
    return out;
}
inline ParamForm recognize_param(const BiPoly& q) { return recognize_param(to_ext(q)); }

// ---------------------------------------------------------------------------
// Line-delimited export: re1,im1,re2,im2,residual per point.

inline std::string cloud_to_lines(const CurveCloud& cloud) {
    std::string out;
    char buf[192];
    for (std::size_t k = 0; k < cloud.points.size(); ++k) {
        const auto& p = cloud.points[k];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.z1.real(), p.z1.imag(),
                      p.z2.real(), p.z2.imag(), cloud.residuals[k]);
        out += buf;
    }
    return out;
}

// Inverse of cloud_to_lines. Fields may be separated by commas and/or
// whitespace; the residual field is optional (0 when absent); blank lines and
// lines starting with '#' are skipped. Region/source are not part of the
// format and stay at their defaults.
inline CurveCloud cloud_from_lines(const std::string& text) {
    CurveCloud out;
    std::istringstream lines(text);
    std::string line;
    unsigned lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        for (auto& c : line)
            if (c == ',' || c == '\t') c = ' ';
        const auto first = line.find_first_not_of(' ');
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::vector<double> v;
        double x = 0.0;
        while (fields >> x) v.push_back(x);
        if (!fields.eof()) throw ParseError("cloud line has a non-numeric field", lineno);
        if (v.size() != 4 && v.size() != 5)
            throw ParseError("cloud line needs 4 or 5 numeric fields", lineno);
        out.points.push_back(PointC2{{v[0], v[1]}, {v[2], v[3]}});
        out.residuals.push_back(v.size() == 5 ? v[4] : 0.0);
    }
    return out;
}

}  // namespace polyhull
