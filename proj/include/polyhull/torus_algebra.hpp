#pragma once

#include <complex>

#include "bipoly.hpp"
#include "laurent.hpp"
#include "point.hpp"

namespace polyhull {

// Torus reflection of p with declared bidegree (m, n):
//   reflect(p)(z1, z2) = sum conj(a_ij) z1^(m-i) z2^(n-j).
// On the unit torus, reflect(p) / (z1^m z2^n) equals conj(p(z)).
template <class K>
BasicBiPoly<K> reflect_poly(const BasicBiPoly<K>& p) {
    const unsigned m = p.declared_m(), n = p.declared_n();
    BasicBiPoly<K> out;
    for (const auto& [e, c] : p.terms()) out += BasicBiPoly<K>::monomial(m - e.i, n - e.j, c.conj());
    return out.with_declared(m, n);
}

// The boundary conjugate h = reflect(p) / (z1^m z2^n): a Laurent fraction
// that agrees with conj(p) on the unit torus and is holomorphic off the axes.
template <class K>
BasicLaurent<K> boundary_h(const BasicBiPoly<K>& p) {
    return BasicLaurent<K>(reflect_poly(p), p.declared_m(), p.declared_n());
}

// Numerator N of the Jacobian determinant
//   Delta = d1(p) * d2(h) - d2(p) * d1(h) = N / (z1^(m+1) z2^(n+1))
// written fraction-free in terms of R = reflect(p):
//   N = z1 * d1(p) * (z2 * d2(R) - n R) - z2 * d2(p) * (z1 * d1(R) - m R).
template <class K>
BasicBiPoly<K> delta_numerator(const BasicBiPoly<K>& p) {
    const unsigned m = p.declared_m(), n = p.declared_n();
    const auto R = reflect_poly(p);
    const auto z1 = BasicBiPoly<K>::var1();
    const auto z2 = BasicBiPoly<K>::var2();
    const auto inner2 = z2 * R.partial(2) - K(static_cast<long>(n)) * R;
    const auto inner1 = z1 * R.partial(1) - K(static_cast<long>(m)) * R;
    auto N = z1 * p.partial(1) * inner2 - z2 * p.partial(2) * inner1;
    N.recompute_declared();
    return N;
}

// Delta as a Laurent fraction (normalized; pole at most (m+1, n+1)).
template <class K>
BasicLaurent<K> delta(const BasicBiPoly<K>& p) {
    return BasicLaurent<K>(delta_numerator(p), p.declared_m() + 1, p.declared_n() + 1);
}

// True when Delta vanishes identically (the graph-closure machinery gives
// no information; the analysis must report the degenerate verdict).
template <class K>
bool delta_degenerate(const BasicBiPoly<K>& p) {
    return delta_numerator(p).is_zero();
}

// |conj(p(z)) - h(z)| at a point off the axes: the defect of the point from
// lying on the closure candidate set X.
template <class K>
double x_residual(const BasicBiPoly<K>& p, const PointC2& pt) {
    const auto h = boundary_h(p);
    const auto lhs = std::conj(p.eval(pt.z1, pt.z2));
    const auto rhs = h.eval(pt.z1, pt.z2);
    return std::abs(lhs - rhs);
}

// Membership in X: inside the closed bidisc, off the axis set, off the
// distinguished boundary, and with vanishing conjugation residual.
template <class K>
bool in_x(const BasicBiPoly<K>& p, const PointC2& pt, double tol) {
    if (!in_x_domain(pt, tol)) return false;
    return x_residual(p, pt) <= tol;
}

}  // namespace polyhull
