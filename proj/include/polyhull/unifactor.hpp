#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "bipoly.hpp"
#include "numeric.hpp"

namespace polyhull {

namespace detail {

// Visits index combinations {0..n-1} choose k in lexicographic order;
// fn returns true to stop early. Returns whether fn stopped the scan.
template <class Fn>
bool for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
    if (k > n) return false;
    if (k == 0) {
        std::vector<std::size_t> empty;
        return fn(empty);
    }
    std::vector<std::size_t> idx(k);
    for (std::size_t t = 0; t < k; ++t) idx[t] = t;
    while (true) {
        if (fn(idx)) return true;
        // advance
        std::size_t pos = k;
        while (pos > 0) {
            --pos;
            if (idx[pos] != pos + n - k) break;
            if (pos == 0) return false;
        }
        if (idx[pos] == pos + n - k) return false;
        ++idx[pos];
        for (std::size_t t = pos + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
}

}  // namespace detail

// Coefficient-wise Galois conjugation a -> t - a (fixes Q(i)).
inline ExtPoly alg_conj_poly(const ExtPoly& p) {
    ExtPoly out;
    for (const auto& [e, c] : p.terms()) out += ExtPoly::monomial(e.i, e.j, c.alg_conj());
    return out;
}

struct UniFactorization {
    CycloElt unit;
    std::vector<ExtPoly> factors;  // monic, univariate in z2, irreducible over Q(i, a)
};

namespace detail {

inline CVec dense_z2_coeffs(const BiPoly& u) {
    CVec c(u.deg2() + 1, {0.0, 0.0});
    for (const auto& [e, v] : u.terms()) c[e.j] = v.value();
    return c;
}

// Polished, deterministically ordered numeric roots of a univariate-in-z2
// polynomial (coefficients over either field).
template <class K>
CVec polished_roots_z2(const BasicBiPoly<K>& u) {
    CVec coeffs(u.deg2() + 1, {0.0, 0.0});
    for (const auto& [e, v] : u.terms()) coeffs[e.j] = v.value();
    CVec roots = roots_of(coeffs);
    for (auto& r : roots) r = newton_polish(coeffs, r, 4);
    sort_roots(roots);
    return roots;
}

// Try to write the Q(i)-irreducible f (monic, univar z2, even degree) as
// g * sigma(g) over the quadratic cyclotomic extension.
inline std::optional<std::pair<ExtPoly, ExtPoly>> pair_split(const BiPoly& f, unsigned order) {
    const unsigned d = f.deg2();
    if (d < 2 || d % 2 != 0) return std::nullopt;
    const unsigned half = d / 2;
    const CVec roots = polished_roots_z2(f);
    const double th = 2.0 * M_PI / order;
    const std::complex<double> A{std::cos(th), std::sin(th)};
    const std::complex<double> Ac = std::conj(A);
    const auto denomA = A - Ac;

    std::optional<std::pair<ExtPoly, ExtPoly>> result;
    // Subsets containing root 0: the complement plays sigma(g)'s role, so
    // scanning one of each subset/complement pair covers everything.
    detail::for_each_combination(d - 1, half - 1, [&](const std::vector<std::size_t>& idx) {
        std::vector<bool> in_s(d, false);
        in_s[0] = true;
        for (auto k : idx) in_s[k + 1] = true;
        CVec rs, rc;
        for (std::size_t k = 0; k < d; ++k) (in_s[k] ? rs : rc).push_back(roots[k]);
        const CVec ms = poly_from_roots(rs), mc = poly_from_roots(rc);
        ExtPoly g;
        for (unsigned j = 0; j <= half; ++j) {
            if (j == half) {
                g += ExtPoly::monomial(0, j, CycloElt(1));
                continue;
            }
            const auto c1n = (ms[j] - mc[j]) / denomA;
            const auto c0n = ms[j] - c1n * A;
            const auto c0 = reconstruct_gauss(c0n, 1000000, 1e-7);
            if (!c0) return false;
            const auto c1 = reconstruct_gauss(c1n, 1000000, 1e-7);
            if (!c1) return false;
            g += ExtPoly::monomial(0, j, CycloElt(*c0, *c1, order));
        }
        const ExtPoly gc = alg_conj_poly(g);
        if (g * gc == to_ext(f)) {
            result = std::make_pair(g, gc);
            return true;
        }
        return false;
    });
    return result;
}

}  // namespace detail

// Exact factorization of a squarefree univariate-in-z2 polynomial with
// Gaussian-rational coefficients over Q(i, e^(2*pi*i/order)).
//
// Method: numeric roots (companion matrix + Newton polish), then smallest-
// subset-first trial reconstruction of factor coefficients by continued
// fractions, certified by exact division; finally each Q(i)-irreducible
// factor of even degree is tested for a conjugate pair-split over the
// quadratic extension.
inline UniFactorization factor_univar_z2(const BiPoly& u_in, unsigned order) {
    CycloElt::check_order(order);
    if (u_in.is_zero()) throw ZeroPolynomial("univariate factorization of 0");
    if (u_in.deg1() != 0) throw PreconditionViolation("input is not univariate in z2");
    UniFactorization out;
    out.unit = CycloElt(u_in.leading().second);
    if (u_in.is_constant()) return out;
    BiPoly u = u_in.monic();
    if (!gcd_univar(u, u.partial(2), 2).is_constant())
        throw PreconditionViolation("univariate factorization requires squarefree input");

    CVec pool = detail::polished_roots_z2(u);

    std::vector<BiPoly> base;
    BiPoly rem = u;
    std::size_t size = 1;
    while (!pool.empty()) {
        if (size >= pool.size()) {
            base.push_back(rem);
            pool.clear();
            break;
        }
        bool found = false;
        detail::for_each_combination(pool.size(), size, [&](const std::vector<std::size_t>& idx) {
            CVec sel;
            for (auto k : idx) sel.push_back(pool[k]);
            const CVec coeffs = poly_from_roots(sel);
            BiPoly cand = BiPoly::monomial(0, static_cast<unsigned>(size), GaussRat(1));
            for (std::size_t j = 0; j < size; ++j) {
                const auto c = reconstruct_gauss(coeffs[j], 1000000, 1e-7);
                if (!c) return false;
                cand += BiPoly::monomial(0, static_cast<unsigned>(j), *c);
            }
            auto [q, r] = div_rem_univar(rem, cand, 2);
            if (!r.is_zero()) return false;
            base.push_back(cand);
            rem = q;
            for (std::size_t t = idx.size(); t-- > 0;) pool.erase(pool.begin() + static_cast<long>(idx[t]));
            found = true;
            return true;
        });
        if (!found) ++size;
    }

    for (const auto& f : base) {
        if (order == 3 || order == 6) {
            if (auto split = detail::pair_split(f, order)) {
                out.factors.push_back(split->first);
                out.factors.push_back(split->second);
                continue;
            }
        }
        out.factors.push_back(to_ext(f));
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const ExtPoly& a, const ExtPoly& b) { return deterministic_less(a, b); });
    return out;
}

// Same, for a polynomial univariate in z1 (via variable swap).
inline UniFactorization factor_univar_z1(const BiPoly& u_in, unsigned order) {
    auto res = factor_univar_z2(u_in.swap_vars(), order);
    for (auto& f : res.factors) {
        f = f.swap_vars();
        f.normalize_monic();  // re-normalize in lex order after the swap
    }
    std::sort(res.factors.begin(), res.factors.end(),
              [](const ExtPoly& a, const ExtPoly& b) { return deterministic_less(a, b); });
    return res;
}

}  // namespace polyhull
