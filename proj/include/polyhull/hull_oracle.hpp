#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bipoly.hpp"
#include "errors.hpp"
#include "point.hpp"
#include "simplex.hpp"
#include "variety_tools.hpp"

namespace polyhull {

// Pinned hull-oracle tolerances.
inline constexpr double kHullFeasTol = 1e-9;      // LP feasibility tolerance
inline constexpr double kMomentBand = 1e-8;       // moment equality relaxation
inline constexpr double kHullMarginFloor = 1e-6;  // minimum certified separation margin
inline constexpr unsigned kHullDegreeDefault = 8;
inline constexpr std::size_t kHullMaxLPCloud = 8192;

// Polynomial with float coefficients (separation certificates).
struct FloatPoly {
    std::vector<std::pair<Exp, std::complex<double>>> terms;  // sorted: total degree, then z1-degree, descending

    std::complex<double> eval(const std::complex<double>& z1, const std::complex<double>& z2) const {
        std::complex<double> acc = 0.0;
        for (const auto& [e, c] : terms) {
            std::complex<double> m = c;
            for (unsigned k = 0; k < e.i; ++k) m *= z1;
            for (unsigned k = 0; k < e.j; ++k) m *= z2;
            acc += m;
        }
        return acc;
    }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms) d = std::max(d, e.i + e.j);
        return d;
    }

    void add(Exp e, std::complex<double> c) {
        for (auto& [ee, cc] : terms) {
            if (ee == e) {
                cc += c;
                return;
            }
        }
        terms.push_back({e, c});
    }

    void scale(double f) {
        for (auto& [e, c] : terms) c *= f;
    }

    void sort_terms() {
        std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
            const unsigned ta = a.first.i + a.first.j, tb = b.first.i + b.first.j;
            if (ta != tb) return ta > tb;
            return a.first.i > b.first.i;
        });
    }

    std::string to_string() const {
        double maxc = 0.0;
        for (const auto& [e, c] : terms) maxc = std::max(maxc, std::abs(c));
        std::string out;
        char buf[128];
        for (const auto& [e, c] : terms) {
            if (std::abs(c) <= 1e-14 * maxc) continue;
            if (!out.empty()) out += " + ";
            std::snprintf(buf, sizeof(buf), "(%.12g%+.12gi)", c.real(), c.imag());
            out += buf;
            if (e.i) out += e.i == 1 ? "*z1" : "*z1^" + std::to_string(e.i);
            if (e.j) out += e.j == 1 ? "*z2" : "*z2^" + std::to_string(e.j);
        }
        return out.empty() ? "(0)" : out;
    }
};

enum class HullOutcome { InHullUpToDegree, Separated };

struct HullVerdict {
    HullOutcome outcome = HullOutcome::InHullUpToDegree;
    unsigned degree = 0;  // d_max when in-hull; the separating degree otherwise
    std::optional<FloatPoly> certificate;
    double margin = 0.0;
};

// Dual formulation of truncated hull membership: nonnegative weights on the
// cloud whose moments up to the given degree match the query's.
struct MomentLP {
    unsigned degree = 0;
    PointC2 query;
    std::vector<Exp> monomials;  // all i+j <= degree, including (0,0)
    std::vector<std::vector<double>> G;  // relaxed-equality inequality rows
    std::vector<double> h;
    std::size_t variables = 0;

    // Underlying equality count: Re and Im per monomial plus the mass row.
    std::size_t constraint_count() const { return 2 * monomials.size() + 1; }
};

namespace detail {

inline std::vector<Exp> monomials_up_to(unsigned d) {
    std::vector<Exp> out;
    for (unsigned t = 0; t <= d; ++t)
        for (unsigned i = 0; i <= t; ++i) out.push_back({t - i, i});
    return out;
}

inline std::vector<std::complex<double>> moment_vector(const PointC2& p, const std::vector<Exp>& mus,
                                                       unsigned d) {
    std::vector<std::complex<double>> p1(d + 1, 1.0), p2(d + 1, 1.0);
    for (unsigned k = 1; k <= d; ++k) {
        p1[k] = p1[k - 1] * p.z1;
        p2[k] = p2[k - 1] * p.z2;
    }
    std::vector<std::complex<double>> out;
    out.reserve(mus.size());
    for (const Exp& e : mus) out.push_back(p1[e.i] * p2[e.j]);
    return out;
}

inline MomentLP build_moment_lp(const std::vector<PointC2>& pts, unsigned d, const PointC2& query) {
    MomentLP lp;
    lp.degree = d;
    lp.query = query;
    lp.monomials = monomials_up_to(d);
    lp.variables = pts.size();
    const std::size_t M = lp.monomials.size();
    const std::size_t rows = 4 * M + 2;
    lp.G.assign(rows, std::vector<double>(pts.size(), 0.0));
    lp.h.assign(rows, 0.0);

    const auto qm = moment_vector(query, lp.monomials, d);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const auto pm = moment_vector(pts[k], lp.monomials, d);
        for (std::size_t u = 0; u < M; ++u) {
            lp.G[4 * u + 0][k] = pm[u].real();
            lp.G[4 * u + 1][k] = -pm[u].real();
            lp.G[4 * u + 2][k] = pm[u].imag();
            lp.G[4 * u + 3][k] = -pm[u].imag();
        }
        lp.G[4 * M + 0][k] = 1.0;
        lp.G[4 * M + 1][k] = -1.0;
    }
    for (std::size_t u = 0; u < M; ++u) {
        lp.h[4 * u + 0] = qm[u].real() + kMomentBand;
        lp.h[4 * u + 1] = -qm[u].real() + kMomentBand;
        lp.h[4 * u + 2] = qm[u].imag() + kMomentBand;
        lp.h[4 * u + 3] = -qm[u].imag() + kMomentBand;
    }
    lp.h[4 * M + 0] = 1.0 + kMomentBand;
    lp.h[4 * M + 1] = -(1.0 - kMomentBand);
    return lp;
}

inline std::vector<PointC2> thin_points(const std::vector<PointC2>& pts, std::size_t cap) {
    if (pts.size() <= cap) return pts;
    std::vector<PointC2> out;
    out.reserve(cap);
    const double stride = static_cast<double>(pts.size()) / static_cast<double>(cap);
    for (std::size_t k = 0; k < cap; ++k) out.push_back(pts[static_cast<std::size_t>(k * stride)]);
    return out;
}

}  // namespace detail

// Degree-truncated hull membership.  For each degree 1..d_max, test whether
// some nonnegative measure on the cloud reproduces the query's moments; the
// first infeasible degree yields a Farkas functional that is assembled into a
// modulus-separating polynomial, polished and re-verified against the full
// cloud.  InHullUpToDegree is non-certified evidence; Separated is certified
// by the returned margin.
inline HullVerdict membership(const PointC2& query, const CurveCloud& cloud, unsigned d_max) {
    if (cloud.points.empty()) throw PreconditionViolation("hull membership needs a nonempty cloud");
    if (d_max < 1) throw PreconditionViolation("hull membership needs d_max >= 1");
    const auto lp_pts = detail::thin_points(cloud.points, kHullMaxLPCloud);

    bool uncertified_separation = false;
    for (unsigned d = 1; d <= d_max; ++d) {
        const MomentLP lp = detail::build_moment_lp(lp_pts, d, query);
        const LPResult res = lp_feasible(lp.G, lp.h, kHullFeasTol);
        if (res.feasible) continue;

        // Assemble the Farkas functional F(z) = Re p(z) + const with
        // F >= 0 on the cloud and F(query) < 0.
        const std::size_t M = lp.monomials.size();
        const auto& u = res.farkas;
        FloatPoly p;
        double constant = u[4 * M + 0] - u[4 * M + 1];
        for (std::size_t m = 0; m < M; ++m) {
            const double a = u[4 * m + 0] - u[4 * m + 1];
            const double b = u[4 * m + 2] - u[4 * m + 3];
            const Exp e = lp.monomials[m];
            if (e.i == 0 && e.j == 0) {
                constant += a;  // Im part of z^0 is zero
            } else {
                p.add(e, {a, -b});
            }
        }
        p.add({0, 0}, {constant, 0.0});

        // Polish against the FULL cloud: optimal real shift, imaginary
        // centering, then the half-plane-to-disc conversion g - B^2/delta.
        double min_re = 1e300, min_im = 1e300, max_im = -1e300;
        std::vector<std::complex<double>> vals;
        vals.reserve(cloud.points.size());
        for (const auto& pt : cloud.points) {
            const auto v = p.eval(pt.z1, pt.z2);
            vals.push_back(v);
            min_re = std::min(min_re, v.real());
            min_im = std::min(min_im, v.imag());
            max_im = std::max(max_im, v.imag());
        }
        const auto vq = p.eval(query.z1, query.z2);
        const double cstar = -min_re;
        const double delta = -(vq.real() + cstar);
        if (delta <= 1e-12) {
            uncertified_separation = true;
            continue;
        }
        const std::complex<double> shift{cstar, -(min_im + max_im) / 2.0};
        double B = 0.0;
        for (const auto& v : vals) B = std::max(B, std::abs(v + shift));
        const double R = B * B / delta;

        FloatPoly cert = p;
        cert.add({0, 0}, shift - R);
        double denom = 0.0;
        for (const auto& v : vals) denom = std::max(denom, std::abs(v + shift - R));
        denom = std::max(denom, 1e-250);
        const double at_query = std::abs(vq + shift - R);
        const double margin = at_query / denom - 1.0;
        if (margin < kHullMarginFloor) {
            uncertified_separation = true;
            continue;
        }
        cert.scale(1.0 / denom);
        cert.sort_terms();
        HullVerdict out;
        out.outcome = HullOutcome::Separated;
        out.degree = d;
        out.certificate = std::move(cert);
        out.margin = margin;
        return out;
    }
    if (uncertified_separation)
        throw LPNumericalFailure("separation detected but no certificate met the pinned margin");
    HullVerdict out;
    out.outcome = HullOutcome::InHullUpToDegree;
    out.degree = d_max;
    return out;
}

// ---------------------------------------------------------------------------
// Exact hulls of rationally parametrized curve pieces.

struct ParamHull {
    ParamForm form;
    bool empty = false;
    bool full_disc = false;          // hull = full closed-disc sweep of the parametrization
    std::vector<double> arc_angles;  // sorted parameter angles when not a full disc
    double arc_slack = 0.0;          // half the intra-arc angular step (containment tolerance)

    bool contains(const PointC2& p, double tol) const {
        if (empty) return false;
        const std::complex<double> c = form.c.value(), d = form.d.value();
        std::complex<double> w;
        switch (form.kind) {
            case ParamKind::VerticalLine:
                if (std::abs(p.z1 - c) > tol) return false;
                w = p.z2;
                break;
            case ParamKind::HorizontalLine:
                if (std::abs(p.z2 - c) > tol) return false;
                w = p.z1;
                break;
            case ParamKind::Graph1:
                if (std::abs(p.z2 - (c * p.z1 + d)) > tol) return false;
                w = p.z1;
                break;
            case ParamKind::Graph2:
                if (std::abs(p.z1 - (c * p.z2 + d)) > tol) return false;
                w = p.z2;
                break;
            default:
                return false;
        }
        if (full_disc) return std::abs(w) <= 1.0 + tol;
        double best = 1e300;
        for (double a : arc_angles)
            best = std::min(best, std::abs(w - std::complex<double>(std::cos(a), std::sin(a))));
        return best <= tol + arc_slack;
    }

    std::string describe() const {
        if (empty) return "{ } (empty)";
        const auto cs = to_string(ExtPoly::constant(form.c));
        std::string out;
        switch (form.kind) {
            case ParamKind::VerticalLine:
                out = "{ z1 = " + cs + ", ";
                out += full_disc ? "|z2| <= 1 }" : "z2 on a sampled arc (" + std::to_string(arc_angles.size()) + " points) }";
                return out;
            case ParamKind::HorizontalLine:
                out = "{ z2 = " + cs + ", ";
                out += full_disc ? "|z1| <= 1 }" : "z1 on a sampled arc (" + std::to_string(arc_angles.size()) + " points) }";
                return out;
            case ParamKind::Graph1:
                out = "{ z2 = " + to_string(form.c * ExtPoly::var1() + ExtPoly::constant(form.d)) + ", ";
                out += full_disc ? "|z1| <= 1 }" : "z1 on a sampled arc (" + std::to_string(arc_angles.size()) + " points) }";
                return out;
            case ParamKind::Graph2:
                out = "{ z1 = " + to_string(form.c * ExtPoly::var2() + ExtPoly::constant(form.d)) + ", ";
                out += full_disc ? "|z2| <= 1 }" : "z2 on a sampled arc (" + std::to_string(arc_angles.size()) + " points) }";
                return out;
            default:
                return "{ ? }";
        }
    }
};

// Exact hull of a parametrized curve piece.  A parameter circle covered with
// every angular gap < 0.1 rad hulls to the full disc sweep (for the
// constant-modulus parametrizations this module certifies exactly); a curve
// with a gap > 1 rad is a proper sub-arc, polynomially convex, hence its own
// hull.  Gaps between those bounds are ambiguous at this sampling density.
inline ParamHull param_hull(const ParamForm& form, const CurveCloud& cloud) {
    if (form.kind == ParamKind::General)
        throw PreconditionViolation("param_hull needs a recognized parametrized form");
    if (!(form.source == cloud.source))
        throw PreconditionViolation("param_hull cloud must come from the form's source polynomial");
    ParamHull out;
    out.form = form;
    if (cloud.points.empty()) {
        out.empty = true;
        return out;
    }
    std::vector<double> angles;
    angles.reserve(cloud.points.size());
    for (const auto& p : cloud.points) {
        const std::complex<double> w =
            (form.kind == ParamKind::VerticalLine || form.kind == ParamKind::Graph2) ? p.z2 : p.z1;
        angles.push_back(std::atan2(w.imag(), w.real()));
    }
    std::sort(angles.begin(), angles.end());
    double max_gap = 0.0, intra = 0.0;
    for (std::size_t k = 0; k < angles.size(); ++k) {
        const double next = k + 1 < angles.size() ? angles[k + 1] : angles[0] + 2.0 * M_PI;
        const double gap = next - angles[k];
        max_gap = std::max(max_gap, gap);
        if (gap <= 0.1) intra = std::max(intra, gap);
    }
    if (max_gap < 0.1) {
        // Full angular coverage; the sweep is a disc exactly when the
        // parametrized curve has constant modulus 1 over the parameter circle.
        const CycloElt one(1);
        const bool unit_c = form.c * form.c.conj() == one;
        const bool disc = (form.kind == ParamKind::VerticalLine || form.kind == ParamKind::HorizontalLine)
                              ? unit_c
                              : (form.d == CycloElt(0) && unit_c);
        if (disc) {
            out.full_disc = true;
            return out;
        }
        out.arc_angles = std::move(angles);
        out.arc_slack = intra / 2.0;
        return out;
    }
    if (max_gap <= 1.0)
        throw IncompleteCloud("parameter-circle coverage is ambiguous at this sampling density");
    out.arc_angles = std::move(angles);
    out.arc_slack = intra / 2.0;
    return out;
}

// ---------------------------------------------------------------------------
// Polynomial convexity of a torus cloud against interior hull candidates.

struct ConvexityReport {
    bool convex = true;
    bool empty_q = false;  // vacuous: the torus cloud itself is empty
    std::vector<PointC2> witnesses;
};

// False iff some candidate lies in the degree-d_max hull of the cloud; the
// witnesses are those candidates.  An empty cloud is vacuously convex.
inline ConvexityReport is_convex_cloud(const CurveCloud& cloud, const CurveCloud& candidates,
                                       unsigned d_max) {
    ConvexityReport rep;
    if (cloud.points.empty()) {
        rep.empty_q = true;
        return rep;
    }
    for (const auto& cand : candidates.points) {
        const HullVerdict v = membership(cand, cloud, d_max);
        if (v.outcome == HullOutcome::InHullUpToDegree) rep.witnesses.push_back(cand);
    }
    rep.convex = rep.witnesses.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// Three-variable truncated hull membership (feasibility only, no certificate).
// Used to cross-check graph-space hull claims against an ambient point cloud.

namespace detail {

inline std::vector<std::array<unsigned, 3>> monomials3_up_to(unsigned d) {
    std::vector<std::array<unsigned, 3>> out;
    for (unsigned t = 0; t <= d; ++t)
        for (unsigned i = 0; i <= t; ++i)
            for (unsigned j = 0; i + j <= t; ++j) out.push_back({i, j, t - i - j});
    return out;
}

inline std::vector<std::complex<double>> moment_vector3(const PointC3& p,
                                                        const std::vector<std::array<unsigned, 3>>& mus,
                                                        unsigned d) {
    std::vector<std::complex<double>> p1(d + 1, 1.0), p2(d + 1, 1.0), p3(d + 1, 1.0);
    for (unsigned k = 1; k <= d; ++k) {
        p1[k] = p1[k - 1] * p.x1;
        p2[k] = p2[k - 1] * p.x2;
        p3[k] = p3[k - 1] * p.x3;
    }
    std::vector<std::complex<double>> out;
    out.reserve(mus.size());
    for (const auto& e : mus) out.push_back(p1[e[0]] * p2[e[1]] * p3[e[2]]);
    return out;
}

inline std::vector<PointC3> thin_points3(const std::vector<PointC3>& pts, std::size_t cap) {
    if (pts.size() <= cap) return pts;
    std::vector<PointC3> out;
    out.reserve(cap);
    const double stride = static_cast<double>(pts.size()) / static_cast<double>(cap);
    for (std::size_t k = 0; k < cap; ++k) out.push_back(pts[static_cast<std::size_t>(k * stride)]);
    return out;
}

}  // namespace detail

// True iff for every degree 1..d_max some nonnegative measure on the cloud
// reproduces the query's three-variable moments (within the pinned band).
// Feasibility evidence only; a false answer means some degree was infeasible.
inline bool in_truncated_hull3(const PointC3& query, const std::vector<PointC3>& cloud,
                               unsigned d_max) {
    if (cloud.empty()) throw PreconditionViolation("hull membership needs a nonempty cloud");
    if (d_max < 1) throw PreconditionViolation("hull membership needs d_max >= 1");
    const auto pts = detail::thin_points3(cloud, kHullMaxLPCloud);
    for (unsigned d = 1; d <= d_max; ++d) {
        const auto mus = detail::monomials3_up_to(d);
        const std::size_t M = mus.size();
        const std::size_t rows = 4 * M + 2;
        std::vector<std::vector<double>> G(rows, std::vector<double>(pts.size(), 0.0));
        std::vector<double> h(rows, 0.0);
        const auto qm = detail::moment_vector3(query, mus, d);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const auto pm = detail::moment_vector3(pts[k], mus, d);
            for (std::size_t u = 0; u < M; ++u) {
                G[4 * u + 0][k] = pm[u].real();
                G[4 * u + 1][k] = -pm[u].real();
                G[4 * u + 2][k] = pm[u].imag();
                G[4 * u + 3][k] = -pm[u].imag();
            }
            G[4 * M + 0][k] = 1.0;
            G[4 * M + 1][k] = -1.0;
        }
        for (std::size_t u = 0; u < M; ++u) {
            h[4 * u + 0] = qm[u].real() + kMomentBand;
            h[4 * u + 1] = -qm[u].real() + kMomentBand;
            h[4 * u + 2] = qm[u].imag() + kMomentBand;
            h[4 * u + 3] = -qm[u].imag() + kMomentBand;
        }
        h[4 * M + 0] = 1.0 + kMomentBand;
        h[4 * M + 1] = -(1.0 - kMomentBand);
        if (!lp_feasible(G, h, kHullFeasTol).feasible) return false;
    }
    return true;
}

}  // namespace polyhull
