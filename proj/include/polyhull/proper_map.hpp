#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bipoly.hpp"
#include "errors.hpp"
#include "point.hpp"
#include "rational.hpp"
#include "variety_tools.hpp"

namespace polyhull {

// Pinned proper-map tolerances.
inline constexpr double kFiberMatchTol = 1e-10;   // |map(w) - map(z)| on deck orbits
inline constexpr double kOrbitDedupeTol = 1e-8;   // repeated fiber points (critical locus)
inline constexpr double kSaturationTol = 1e-6;    // orbit-point-to-cloud distance
inline constexpr double kDVViolation = 1e-3;      // depth certifying a non-torus boundary point
inline constexpr double kDVTorusBand = 1e-4;      // depth still consistent with the torus
inline constexpr unsigned kHypothesisSamples = 512;

// Exact affine automorphism z -> M z + t of C^2.
struct AffineAuto {
    GaussRat a{1}, b{0}, c{0}, d{1};  // M = [[a, b], [c, d]]
    GaussRat t1{0}, t2{0};

    GaussRat det() const { return a * d - b * c; }
    bool is_identity() const {
        return a == GaussRat(1) && b == GaussRat(0) && c == GaussRat(0) && d == GaussRat(1) &&
               t1 == GaussRat(0) && t2 == GaussRat(0);
    }
    AffineAuto inverse() const {
        const GaussRat dt = det();
        if (dt == GaussRat(0)) throw PreconditionViolation("affine map is singular");
        AffineAuto inv;
        inv.a = d / dt;
        inv.b = GaussRat(0) - b / dt;
        inv.c = GaussRat(0) - c / dt;
        inv.d = a / dt;
        inv.t1 = GaussRat(0) - (inv.a * t1 + inv.b * t2);
        inv.t2 = GaussRat(0) - (inv.c * t1 + inv.d * t2);
        return inv;
    }
    PointC2 apply(const PointC2& z) const {
        return {a.value() * z.z1 + b.value() * z.z2 + t1.value(),
                c.value() * z.z1 + d.value() * z.z2 + t2.value()};
    }
    std::pair<BiPoly, BiPoly> apply_polys(const BiPoly& x1, const BiPoly& x2) const {
        return {BiPoly::constant(a) * x1 + BiPoly::constant(b) * x2 + BiPoly::constant(t1),
                BiPoly::constant(c) * x1 + BiPoly::constant(d) * x2 + BiPoly::constant(t2)};
    }
};

// Elementary shear automorphism: (z1, z2 + q(z1)) or (z1 + q(z2), z2);
// q is a univariate polynomial carried in var1 of a BiPoly.
struct ShearAuto {
    bool shear_second = true;
    BiPoly q;

    bool is_trivial() const { return q.is_zero(); }
    std::pair<BiPoly, BiPoly> apply_polys(const BiPoly& x1, const BiPoly& x2) const {
        if (shear_second) return {x1, x2 + q.substitute(x1, BiPoly())};
        return {x1 + q.substitute(x2, BiPoly()), x2};
    }
    PointC2 apply(const PointC2& z) const {
        const auto qv = [&](const std::complex<double>& w) { return q.eval(w, 0.0); };
        if (shear_second) return {z.z1, z.z2 + qv(z.z1)};
        return {z.z1 + qv(z.z2), z.z2};
    }
};

enum class MapKind { Identity, Symmetrization, PowerMap, Conjugated, Extended };

inline const char* map_kind_name(MapKind k) {
    switch (k) {
        case MapKind::Identity: return "identity";
        case MapKind::Symmetrization: return "symmetrization";
        case MapKind::PowerMap: return "power";
        case MapKind::Conjugated: return "affine-conjugated power";
        case MapKind::Extended: return "automorphism-composed symmetrization";
    }
    return "?";
}

// phi = f_affine o f_shear o core o g, where core is the symmetrization map
// (z1+z2, z1 z2) or the power map (z1^m, z2^n).  The deck transformations of
// phi are exactly those of the core conjugated by g, because the outer layers
// are injective.
struct ProperMapDescriptor {
    MapKind kind = MapKind::Identity;
    bool core_symm = false;
    unsigned pm = 1, pn = 1;  // power-map exponents when !core_symm
    AffineAuto f_affine;
    std::optional<ShearAuto> f_shear;
    AffineAuto g;
    BiPoly p1 = BiPoly::var1(), p2 = BiPoly::var2();  // expanded components
    std::string text = "identity";

    unsigned topological_degree() const { return core_symm ? 2u : pm * pn; }
    PointC2 apply(const PointC2& z) const { return {p1.eval(z.z1, z.z2), p2.eval(z.z1, z.z2)}; }
};

namespace detail {

inline std::pair<BiPoly, BiPoly> expand_components(bool core_symm, unsigned pm, unsigned pn,
                                                   const AffineAuto& f_affine,
                                                   const std::optional<ShearAuto>& f_shear,
                                                   const AffineAuto& g) {
    auto [x1, x2] = g.apply_polys(BiPoly::var1(), BiPoly::var2());
    if (core_symm) {
        const BiPoly s = x1 + x2, pr = x1 * x2;
        x1 = s;
        x2 = pr;
    } else {
        x1 = x1.pow(pm);
        x2 = x2.pow(pn);
    }
    if (f_shear) std::tie(x1, x2) = f_shear->apply_polys(x1, x2);
    return f_affine.apply_polys(x1, x2);
}

// Rewrite a swap-symmetric polynomial exactly in the elementary symmetric
// basis: F(z1, z2) = G(z1 + z2, z1 z2).
inline BiPoly symmetric_reduce(const BiPoly& F) {
    BiPoly rem = F, G;
    const BiPoly s = BiPoly::var1() + BiPoly::var2();
    const BiPoly pr = BiPoly::var1() * BiPoly::var2();
    while (!rem.is_zero()) {
        // lex-leading term; for a symmetric polynomial it has i >= j
        Exp lead{0, 0};
        GaussRat c;
        bool first = true;
        for (const auto& [e, v] : rem.terms()) {
            if (first || e.i > lead.i || (e.i == lead.i && e.j > lead.j)) {
                lead = e;
                c = v;
                first = false;
            }
        }
        if (lead.i < lead.j) throw PreconditionViolation("symmetric reduction on an asymmetric polynomial");
        G = G + BiPoly::monomial(lead.i - lead.j, lead.j, c);
        rem = rem - BiPoly::constant(c) * s.pow(lead.i - lead.j) * pr.pow(lead.j);
    }
    return G;
}

// Try to express (F1, F2) as A o E with A affine and E an elementary shear in
// the chosen variable.  Returns the pair when the peel succeeds exactly.
// With E = (u, v + q(u)) and q purely nonlinear, F_i = A_i1 u + A_i2 q(u)
// + A_i2 v + t_i, so the v-coefficient is the matrix column next to the shear
// and the nonlinear u-part recovers q.  The first-variable case is the same
// computation in swapped variables, with the matrix columns exchanged.
inline std::optional<std::pair<AffineAuto, ShearAuto>> peel_affine_shear(const BiPoly& F1,
                                                                         const BiPoly& F2,
                                                                         bool shear_second) {
    const BiPoly G1 = shear_second ? F1 : F1.swap_vars();
    const BiPoly G2 = shear_second ? F2 : F2.swap_vars();
    if (G1.deg2() > 1 || G2.deg2() > 1) return std::nullopt;
    const BiPoly B1p = G1.coeff_of_z2(1), B2p = G2.coeff_of_z2(1);
    if (!B1p.is_constant() || !B2p.is_constant()) return std::nullopt;
    const GaussRat beta = B1p.coeff(0, 0), delta = B2p.coeff(0, 0);
    const BiPoly C1 = G1.coeff_of_z2(0), C2 = G2.coeff_of_z2(0);
    const auto nonlinear = [](const BiPoly& C) {
        return C - BiPoly::constant(C.coeff(0, 0)) - BiPoly::monomial(1, 0, C.coeff(1, 0));
    };
    const BiPoly N1 = nonlinear(C1), N2 = nonlinear(C2);
    if (!(BiPoly::constant(delta) * N1 == BiPoly::constant(beta) * N2)) return std::nullopt;
    BiPoly q;
    if (!(beta == GaussRat(0)))
        q = N1 * BiPoly::constant(GaussRat(1) / beta);
    else if (!(delta == GaussRat(0)))
        q = N2 * BiPoly::constant(GaussRat(1) / delta);
    else if (!N1.is_zero() || !N2.is_zero())
        return std::nullopt;
    AffineAuto A;
    if (shear_second) {
        A.a = C1.coeff(1, 0);
        A.b = beta;
        A.c = C2.coeff(1, 0);
        A.d = delta;
    } else {
        A.a = beta;
        A.b = C1.coeff(1, 0);
        A.c = delta;
        A.d = C2.coeff(1, 0);
    }
    A.t1 = C1.coeff(0, 0);
    A.t2 = C2.coeff(0, 0);
    if (A.det() == GaussRat(0)) return std::nullopt;
    ShearAuto E;
    E.shear_second = shear_second;
    E.q = q;
    // exact recomposition check in the original frame
    auto [r1, r2] = E.apply_polys(BiPoly::var1(), BiPoly::var2());
    std::tie(r1, r2) = A.apply_polys(r1, r2);
    if (!(r1 == F1) || !(r2 == F2)) return std::nullopt;
    return std::make_pair(A, E);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Construction and detection.

inline ProperMapDescriptor identity_map() { return {}; }

inline ProperMapDescriptor symmetrization_map() {
    ProperMapDescriptor m;
    m.kind = MapKind::Symmetrization;
    m.core_symm = true;
    std::tie(m.p1, m.p2) = detail::expand_components(true, 1, 1, {}, std::nullopt, {});
    m.text = "symm";
    return m;
}

inline ProperMapDescriptor power_map(unsigned pm, unsigned pn) {
    if (pm < 1 || pn < 1) throw PreconditionViolation("power map needs exponents >= 1");
    ProperMapDescriptor m;
    m.pm = pm;
    m.pn = pn;
    m.kind = (pm == 1 && pn == 1) ? MapKind::Identity : MapKind::PowerMap;
    std::tie(m.p1, m.p2) = detail::expand_components(false, pm, pn, {}, std::nullopt, {});
    m.text = m.kind == MapKind::Identity ? "identity" : "pow " + std::to_string(pm) + " " + std::to_string(pn);
    return m;
}

inline ProperMapDescriptor conjugated_map(const AffineAuto& f, bool core_symm, unsigned pm, unsigned pn,
                                          const AffineAuto& g) {
    if (f.det() == GaussRat(0) || g.det() == GaussRat(0))
        throw PreconditionViolation("conjugating affine maps must be invertible");
    ProperMapDescriptor m;
    m.kind = MapKind::Conjugated;
    m.core_symm = core_symm;
    m.pm = pm;
    m.pn = pn;
    m.f_affine = f;
    m.g = g;
    std::tie(m.p1, m.p2) = detail::expand_components(core_symm, pm, pn, f, std::nullopt, g);
    m.text = "conj . " + std::string(core_symm ? "symm" : "pow " + std::to_string(pm) + " " + std::to_string(pn)) + " . conj";
    return m;
}

// Recognize an explicitly given component pair as one of the supported proper
// maps; reject anything else.  The match is exact (symbolic identity).
inline ProperMapDescriptor detect_map(const BiPoly& q1, const BiPoly& q2) {
    const BiPoly z1 = BiPoly::var1(), z2 = BiPoly::var2();
    // bare symmetrization
    if (q1 == z1 + z2 && q2 == z1 * z2) return symmetrization_map();
    // bare power map / identity
    {
        unsigned m = 0, n = 0;
        if (q1.deg2() == 0 && q2.deg1() == 0 && !q1.is_constant() && !q2.is_constant() &&
            q1 == BiPoly::monomial(q1.deg1(), 0, GaussRat(1)) &&
            q2 == BiPoly::monomial(0, q2.deg2(), GaussRat(1))) {
            m = q1.deg1();
            n = q2.deg2();
            return power_map(m, n);
        }
    }
    // affine over a power map: supports inside {(m,0), (0,n), (0,0)}
    {
        unsigned m = 0, n = 0;
        bool ok = true;
        for (const BiPoly* comp : {&q1, &q2}) {
            for (const auto& [e, c] : comp->terms()) {
                if (e.i == 0 && e.j == 0) continue;
                if (e.j == 0) {
                    if (m == 0 || m == e.i)
                        m = e.i;
                    else
                        ok = false;
                } else if (e.i == 0) {
                    if (n == 0 || n == e.j)
                        n = e.j;
                    else
                        ok = false;
                } else {
                    ok = false;
                }
            }
        }
        if (ok && m >= 1 && n >= 1 && !(m == 1 && n == 1)) {
            AffineAuto f;
            f.a = q1.coeff(m, 0);
            f.b = q1.coeff(0, n);
            f.c = q2.coeff(m, 0);
            f.d = q2.coeff(0, n);
            f.t1 = q1.coeff(0, 0);
            f.t2 = q2.coeff(0, 0);
            if (!(f.det() == GaussRat(0))) {
                auto desc = conjugated_map(f, false, m, n, {});
                if (desc.p1 == q1 && desc.p2 == q2) {
                    desc.text = "map (" + to_string(q1) + ", " + to_string(q2) + ")";
                    return desc;
                }
            }
        }
    }
    // automorphism over the symmetrization: both components swap-symmetric
    if (q1 == q1.swap_vars() && q2 == q2.swap_vars()) {
        const BiPoly G1 = detail::symmetric_reduce(q1), G2 = detail::symmetric_reduce(q2);
        for (bool shear_second : {true, false}) {
            const auto peel = detail::peel_affine_shear(G1, G2, shear_second);
            if (!peel) continue;
            ProperMapDescriptor m;
            m.core_symm = true;
            m.f_affine = peel->first;
            if (!peel->second.is_trivial()) m.f_shear = peel->second;
            m.kind = m.f_shear ? MapKind::Extended : MapKind::Conjugated;
            std::tie(m.p1, m.p2) =
                detail::expand_components(true, 1, 1, m.f_affine, m.f_shear, {});
            if (!(m.p1 == q1 && m.p2 == q2)) continue;
            m.text = "map (" + to_string(q1) + ", " + to_string(q2) + ")";
            return m;
        }
    }
    throw UnsupportedMapKind(
        "unsupported proper map: expected the symmetrization, a power map, an affine image of a "
        "power map, or an automorphism image of the symmetrization");
}

// ---------------------------------------------------------------------------
// Composition and fibers.

// Exact symbolic composition P(p1(z), p2(z)).
inline BiPoly compose(const BiPoly& P, const ProperMapDescriptor& map) {
    if (map.kind == MapKind::Identity) return P;
    return P.substitute(map.p1, map.p2);
}

// The full fiber of the map through z (the deck orbit of z over map(z)).
inline std::vector<PointC2> deck_orbit(const PointC2& z, const ProperMapDescriptor& map) {
    const PointC2 gz = map.g.apply(z);
    std::vector<PointC2> fiber;
    if (map.core_symm) {
        fiber = {gz, {gz.z2, gz.z1}};
    } else {
        fiber.reserve(map.pm * map.pn);
        for (unsigned k = 0; k < map.pm; ++k) {
            const double ak = 2.0 * M_PI * k / map.pm;
            const std::complex<double> lam{std::cos(ak), std::sin(ak)};
            for (unsigned l = 0; l < map.pn; ++l) {
                const double al = 2.0 * M_PI * l / map.pn;
                const std::complex<double> mu{std::cos(al), std::sin(al)};
                fiber.push_back({lam * gz.z1, mu * gz.z2});
            }
        }
    }
    const AffineAuto ginv = map.g.inverse();
    std::vector<PointC2> out;
    const PointC2 base = map.apply(z);
    for (const auto& fp : fiber) {
        const PointC2 w = ginv.apply(fp);
        bool dup = false;
        for (const auto& seen : out)
            if (std::abs(seen.z1 - w.z1) <= kOrbitDedupeTol && std::abs(seen.z2 - w.z2) <= kOrbitDedupeTol)
                dup = true;
        if (dup) continue;
        const PointC2 img = map.apply(w);
        if (std::abs(img.z1 - base.z1) > kFiberMatchTol || std::abs(img.z2 - base.z2) > kFiberMatchTol)
            throw NumericError("deck-orbit point failed the fiber identity");
        out.push_back(w);
    }
    return out;
}

// True iff the cloud is a union of full fibers (every deck-orbit point of
// every sample is within 1e-6 of the cloud).
inline bool saturation_check(const std::vector<PointC2>& S, const ProperMapDescriptor& map) {
    for (const auto& s : S) {
        for (const auto& w : deck_orbit(s, map)) {
            bool found = false;
            for (const auto& t : S) {
                if (std::abs(t.z1 - w.z1) <= kSaturationTol && std::abs(t.z2 - w.z2) <= kSaturationTol) {
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
    }
    return true;
}

// The standing hypotheses: fibers may not leave the bidisc, its boundary, or
// the torus.  Verified on 512 deterministic samples per set.
inline void verify_map_hypotheses(const ProperMapDescriptor& map) {
    DetRng rng(0x9b7d3f2ull);
    const auto torus_pt = [&]() -> PointC2 {
        const double a = 2.0 * M_PI * rng.unit_double(), b = 2.0 * M_PI * rng.unit_double();
        return {{std::cos(a), std::sin(a)}, {std::cos(b), std::sin(b)}};
    };
    const auto disc_pt = [&](double r) -> std::complex<double> {
        const double a = 2.0 * M_PI * rng.unit_double();
        const double rho = r * std::sqrt(rng.unit_double());
        return {rho * std::cos(a), rho * std::sin(a)};
    };
    for (unsigned k = 0; k < kHypothesisSamples; ++k) {
        // open bidisc
        const PointC2 z{disc_pt(0.999), disc_pt(0.999)};
        for (const auto& w : deck_orbit(z, map))
            if (std::abs(w.z1) > 1.0 + 1e-9 || std::abs(w.z2) > 1.0 + 1e-9)
                throw HypothesisViolation("a fiber leaves the closed bidisc");
        // distinguished boundary
        const PointC2 t = torus_pt();
        for (const auto& w : deck_orbit(t, map))
            if (std::abs(std::abs(w.z1) - 1.0) > 1e-9 || std::abs(std::abs(w.z2) - 1.0) > 1e-9)
                throw HypothesisViolation("a fiber leaves the torus");
        // topological boundary (one circle coordinate, one disc coordinate)
        PointC2 b = (k % 2) ? PointC2{torus_pt().z1, disc_pt(1.0)} : PointC2{disc_pt(1.0), torus_pt().z2};
        for (const auto& w : deck_orbit(b, map)) {
            const double m1 = std::abs(w.z1), m2 = std::abs(w.z2);
            if (m1 > 1.0 + 1e-9 || m2 > 1.0 + 1e-9 || std::max(m1, m2) < 1.0 - 1e-9)
                throw HypothesisViolation("a fiber leaves the bidisc boundary");
        }
    }
}

// ---------------------------------------------------------------------------
// Hull pieces and their pushforward.

// One component of a hull description: a graph over a curve piece, either as
// an exact disc parametrization t -> (x1(t), x2(t), w(t)) for |t| <= 1, or as
// a sampled point set in C^3.
struct GraphPiece {
    bool exact = false;
    ExtPoly x1, x2;    // components as polynomials in t (carried in var1)
    ExtPoly w_num, w_den;  // graph value w(t) = w_num/w_den
    bool w_poly = false;   // the division was exact; w_den is 1
    std::vector<std::array<std::complex<double>, 3>> samples;
    std::vector<unsigned> factor_indices;
    std::string text;
};

namespace detail {

inline std::string univar_text(const ExtPoly& p) {
    std::string s = to_string(p);
    std::size_t pos = 0;
    while ((pos = s.find("z1", pos)) != std::string::npos) s.replace(pos, 2, "t");
    return s;
}

inline std::string piece_text(const GraphPiece& g) {
    if (g.exact) {
        const std::string w = g.w_poly ? univar_text(g.w_num)
                                       : "(" + univar_text(g.w_num) + ")/(" + univar_text(g.w_den) + ")";
        return "{ (" + univar_text(g.x1) + ", " + univar_text(g.x2) + ", " + w + ") : |t| <= 1 }";
    }
    return "{ sampled graph piece, " + std::to_string(g.samples.size()) + " points }";
}

inline double piece_distance(const GraphPiece& a, const GraphPiece& b) {
    double worst = 0.0;
    for (const auto* from : {&a, &b}) {
        const auto* to = (from == &a) ? &b : &a;
        for (const auto& p : from->samples) {
            double best = 1e300;
            for (const auto& q : to->samples) {
                const double d = std::max({std::abs(p[0] - q[0]), std::abs(p[1] - q[1]),
                                           std::abs(p[2] - q[2])});
                best = std::min(best, d);
            }
            worst = std::max(worst, best);
        }
    }
    return worst;
}

// The unit rotation t -> lam*t carrying `from` onto `to`, if one is visible
// from the linear coefficients.  Rotations are the only polynomial disc
// automorphisms, so exact pieces describing the same set and sharing a base
// point differ by one.
inline std::optional<CycloElt> rotation_between(const ExtPoly& from, const ExtPoly& to) {
    try {
        const CycloElt cf = from.coeff(1, 0), ct = to.coeff(1, 0);
        if (cf == CycloElt(GaussRat(0)) || ct == CycloElt(GaussRat(0))) return std::nullopt;
        const CycloElt lam = ct / cf;
        if (!(lam * lam.conj() == CycloElt(GaussRat(1)))) return std::nullopt;
        return lam;
    } catch (const ExtensionInsufficient&) {
        return std::nullopt;
    }
}

inline bool pieces_identical(const GraphPiece& a, const GraphPiece& b) {
    if (a.exact && b.exact) {
        if (a.x1 == b.x1 && a.x2 == b.x2 && a.w_num * b.w_den == b.w_num * a.w_den) return true;
        // same disc, rotated parameter
        auto lam = rotation_between(a.x1, b.x1);
        if (!lam) lam = rotation_between(a.x2, b.x2);
        if (!lam) return false;
        try {
            const ExtPoly rt = ExtPoly::monomial(1, 0, *lam), zero;
            const auto rot = [&](const ExtPoly& p) { return p.substitute(rt, zero); };
            return rot(a.x1) == b.x1 && rot(a.x2) == b.x2 &&
                   rot(a.w_num) * b.w_den == b.w_num * rot(a.w_den);
        } catch (const ExtensionInsufficient&) {
            return false;
        }
    }
    if (a.samples.empty() || b.samples.empty()) return false;
    return piece_distance(a, b) <= 1e-6;
}

}  // namespace detail

// Map each graph piece through (z, w) -> (phi(z), w) and merge pieces with
// identical images (exactly for parametrized pieces, by sample Hausdorff
// distance otherwise).
inline std::vector<GraphPiece> pushforward_hull(const std::vector<GraphPiece>& pieces,
                                                const ProperMapDescriptor& map) {
    std::vector<GraphPiece> mapped;
    for (const auto& g : pieces) {
        GraphPiece out = g;
        if (map.kind != MapKind::Identity) {
            if (g.exact) {
                out.x1 = to_ext(map.p1).substitute(g.x1, g.x2);
                out.x2 = to_ext(map.p2).substitute(g.x1, g.x2);
            }
            for (auto& s : out.samples) {
                const PointC2 img = map.apply({s[0], s[1]});
                s[0] = img.z1;
                s[1] = img.z2;
            }
        }
        out.text = detail::piece_text(out);
        bool merged = false;
        for (auto& prev : mapped) {
            if (detail::pieces_identical(prev, out)) {
                prev.factor_indices.insert(prev.factor_indices.end(), out.factor_indices.begin(),
                                           out.factor_indices.end());
                merged = true;
                break;
            }
        }
        if (!merged) mapped.push_back(std::move(out));
    }
    return mapped;
}

// ---------------------------------------------------------------------------
// Distinguished-variety certification.

enum class DVVerdict { Distinguished, NotDistinguished, Inconclusive };

struct DVReport {
    ExtPoly p;
    CurveCloud boundary_samples;  // points of Z(p) on the bidisc boundary
    std::vector<PointC2> violations;
    DVVerdict verdict = DVVerdict::Inconclusive;
    double worst_depth = 0.0;  // max distance of a boundary sample inside the disc
};

// Samples Z(p) on the bidisc boundary (each variable pinned to the unit
// circle in turn) and classifies: a sample whose free coordinate sits at
// depth >= 1e-3 inside the disc certifies NotDistinguished; all depths
// <= 1e-4 certify Distinguished at this grid; between the bands the verdict
// stays Inconclusive.
inline DVReport dv_check(const ExtPoly& p, unsigned grid = 4096) {
    if (p.is_constant()) throw PreconditionViolation("dv_check needs a nonconstant polynomial");
    if (grid < 64) throw PreconditionViolation("dv_check needs grid >= 64");
    DVReport rep;
    rep.p = p;
    rep.boundary_samples.source = p;
    rep.boundary_samples.region = Region::BidiscBoundary;
    const double scale = detail::coeff_scale_of(p);
    const auto nodes = detail::circle_nodes(grid, 1.0);
    detail::PointDeduper dedupe;
    const auto keep = [](const std::complex<double>& w) { return std::abs(w) <= 1.0 + kTorusBandLoose; };
    detail::slice_direction(p, true, nodes, scale, keep, rep.boundary_samples, dedupe, nullptr);
    detail::slice_direction(p, false, nodes, scale, keep, rep.boundary_samples, dedupe, nullptr);
    for (const auto& pt : rep.boundary_samples.points) {
        const double depth = 1.0 - std::min(std::abs(pt.z1), std::abs(pt.z2));
        rep.worst_depth = std::max(rep.worst_depth, depth);
        if (depth >= kDVViolation) rep.violations.push_back(pt);
    }
    if (!rep.violations.empty())
        rep.verdict = DVVerdict::NotDistinguished;
    else if (rep.worst_depth <= kDVTorusBand)
        rep.verdict = DVVerdict::Distinguished;
    else
        rep.verdict = DVVerdict::Inconclusive;
    return rep;
}
inline DVReport dv_check(const BiPoly& p, unsigned grid = 4096) { return dv_check(to_ext(p), grid); }

// ---------------------------------------------------------------------------
// Descriptor text parsing: `identity`, `symm`, `pow m n`,
// `conj [a b; c d] + [e f] . pow m n . [a b; c d] + [e f]` (either affine may
// be `id`), or `map (p1, p2)` with automatic detection.

namespace detail {

inline GaussRat parse_scalar(const std::string& text) {
    const BiPoly p = parse_bipoly(text);
    if (!p.is_constant()) throw ParseError("expected a constant entry", 0);
    return p.coeff(0, 0);
}

inline AffineAuto parse_affine(std::string text) {
    // form: [a b; c d] + [e f]   (the translation is optional)
    AffineAuto out;
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    text = trim(text);
    if (text.empty() || text == "id") return out;
    const auto close = text.find(']');
    if (text.empty() || text[0] != '[' || close == std::string::npos)
        throw ParseError("expected [a b; c d] in the affine part", 0);
    const std::string mat = text.substr(1, close - 1);
    const auto semi = mat.find(';');
    if (semi == std::string::npos) throw ParseError("expected ';' in the matrix", 0);
    auto split2 = [&](const std::string& row) {
        const std::string r = trim(row);
        const auto sp = r.find_last_of(" \t");
        if (sp == std::string::npos) throw ParseError("expected two matrix entries per row", 0);
        return std::make_pair(trim(r.substr(0, sp)), trim(r.substr(sp + 1)));
    };
    const auto [a, b] = split2(mat.substr(0, semi));
    const auto [c, d] = split2(mat.substr(semi + 1));
    out.a = parse_scalar(a);
    out.b = parse_scalar(b);
    out.c = parse_scalar(c);
    out.d = parse_scalar(d);
    std::string rest = trim(text.substr(close + 1));
    if (!rest.empty()) {
        if (rest[0] != '+') throw ParseError("expected '+ [e f]' after the matrix", 0);
        rest = trim(rest.substr(1));
        const auto close2 = rest.find(']');
        if (rest.empty() || rest[0] != '[' || close2 == std::string::npos)
            throw ParseError("expected [e f] translation", 0);
        const auto [e, f] = split2(rest.substr(1, close2 - 1));
        out.t1 = parse_scalar(e);
        out.t2 = parse_scalar(f);
    }
    if (out.det() == GaussRat(0)) throw PreconditionViolation("affine map is singular");
    return out;
}

}  // namespace detail

inline ProperMapDescriptor parse_map(const std::string& input) {
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string text = trim(input);
    if (text.empty() || text == "identity" || text == "id") return identity_map();
    if (text == "symm") return symmetrization_map();
    if (text.rfind("pow", 0) == 0) {
        std::istringstream iss(text.substr(3));
        unsigned m = 0, n = 0;
        if (!(iss >> m >> n)) throw ParseError("expected: pow m n", 0);
        std::string tail;
        if (iss >> tail) throw ParseError("unexpected text after: pow m n", 0);
        return power_map(m, n);
    }
    if (text.rfind("map", 0) == 0) {
        std::string body = trim(text.substr(3));
        if (body.size() < 2 || body.front() != '(' || body.back() != ')')
            throw ParseError("expected: map (p1, p2)", 0);
        body = body.substr(1, body.size() - 2);
        int depth = 0;
        std::size_t split = std::string::npos;
        for (std::size_t k = 0; k < body.size(); ++k) {
            if (body[k] == '(') ++depth;
            if (body[k] == ')') --depth;
            if (body[k] == ',' && depth == 0) {
                split = k;
                break;
            }
        }
        if (split == std::string::npos) throw ParseError("expected two components: map (p1, p2)", 0);
        return detect_map(parse_bipoly(trim(body.substr(0, split))),
                          parse_bipoly(trim(body.substr(split + 1))));
    }
    if (text.rfind("conj", 0) == 0) {
        // conj <affine> . pow m n . <affine>   ('o' accepted for '.')
        std::string body = trim(text.substr(4));
        // split on top-level '.' or 'o' separators around the core token
        const auto core_pos = body.find("pow");
        const bool symm_core = core_pos == std::string::npos;
        const auto sc = symm_core ? body.find("symm") : core_pos;
        if (sc == std::string::npos) throw ParseError("expected a pow or symm core in conj", 0);
        std::string left = trim(body.substr(0, sc));
        std::string mid_right = body.substr(sc);
        // strip trailing separator from left
        while (!left.empty() && (left.back() == '.' || left.back() == 'o' || left.back() == ' '))
            left.pop_back();
        unsigned m = 1, n = 1;
        std::size_t after = 0;
        if (!symm_core) {
            std::istringstream iss(mid_right.substr(3));
            if (!(iss >> m >> n)) throw ParseError("expected: pow m n in conj", 0);
            const auto pos = iss.tellg();
            after = pos < 0 ? mid_right.size() : 3 + static_cast<std::size_t>(pos);
        } else {
            after = 4;  // "symm"
        }
        std::string right = trim(mid_right.substr(std::min(after, mid_right.size())));
        while (!right.empty() && (right.front() == '.' || right.front() == 'o' || right.front() == ' '))
            right.erase(right.begin());
        const AffineAuto f = detail::parse_affine(left);
        const AffineAuto g = detail::parse_affine(right);
        return conjugated_map(f, symm_core, m, n, g);
    }
    throw ParseError("unrecognized map descriptor (expected identity, symm, pow, conj, or map)", 0);
}

}  // namespace polyhull
