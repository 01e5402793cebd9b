#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "gauss.hpp"
#include "rational.hpp"

namespace polyhull {

using CVec = std::vector<std::complex<double>>;

// Roots of sum coeffs[k] z^k via balanced companion-matrix eigenvalues.
// Exact zero leading/trailing coefficients are stripped (trailing zeros
// contribute roots at 0); a leading coefficient that is merely tiny
// relative to the largest is also dropped to keep the companion stable.
inline CVec roots_of(const CVec& coeffs, double lead_tol = 1e-13) {
    double maxmag = 0.0;
    for (const auto& c : coeffs) maxmag = std::max(maxmag, std::abs(c));
    if (maxmag == 0.0) throw ZeroPolynomial("root-finding on the zero polynomial");
    std::size_t hi = coeffs.size() - 1;
    while (hi > 0 && std::abs(coeffs[hi]) <= lead_tol * maxmag) --hi;
    std::size_t lo = 0;
    while (lo < hi && coeffs[lo] == std::complex<double>(0.0, 0.0)) ++lo;
    CVec roots(lo, {0.0, 0.0});
    const std::size_t n = hi - lo;
    if (n == 0) return roots;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k + 1 < n; ++k) M(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = 1.0;
    for (std::size_t k = 0; k < n; ++k)
        M(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n - 1)) = -coeffs[lo + k] / coeffs[hi];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(M, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NumericError("companion eigenvalue solve failed");
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) roots.push_back(solver.eigenvalues()(k));
    return roots;
}

inline std::complex<double> eval_dense(const CVec& coeffs, const std::complex<double>& z) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
    return acc;
}

// A few Newton steps against the given coefficient vector.
inline std::complex<double> newton_polish(const CVec& coeffs, std::complex<double> z, int iters = 3) {
    CVec deriv;
    for (std::size_t k = 1; k < coeffs.size(); ++k) deriv.push_back(static_cast<double>(k) * coeffs[k]);
    for (int t = 0; t < iters; ++t) {
        const auto d = eval_dense(deriv, z);
        if (std::abs(d) < 1e-14) break;
        const auto step = eval_dense(coeffs, z) / d;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        z -= step;
    }
    return z;
}

// Deterministic root order: by real part, then imaginary part.
inline void sort_roots(CVec& roots) {
    std::sort(roots.begin(), roots.end(), [](const std::complex<double>& a, const std::complex<double>& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

// Monic coefficient vector with the given roots.
inline CVec poly_from_roots(const CVec& roots) {
    CVec c{{1.0, 0.0}};
    for (const auto& r : roots) {
        CVec next(c.size() + 1, {0.0, 0.0});
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    return c;
}

// Best continued-fraction approximation with denominator <= den_bound.
inline Rat cf_rat(double x, std::uint64_t den_bound) {
    if (!std::isfinite(x)) throw NumericError("rational reconstruction of a non-finite value");
    const bool neg = x < 0;
    double v = std::abs(x);
    mpz_class p_prev = 1, q_prev = 0;
    mpz_class p = static_cast<long>(std::floor(v)), q = 1;
    double frac = v - std::floor(v);
    for (int iter = 0; iter < 64 && frac > 1e-15; ++iter) {
        v = 1.0 / frac;
        const double fl = std::floor(v);
        if (fl > 9.0e15) break;
        const mpz_class a = static_cast<long>(fl);
        mpz_class p_next = a * p + p_prev;
        mpz_class q_next = a * q + q_prev;
        if (q_next > mpz_class(static_cast<unsigned long>(den_bound))) break;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        frac = v - fl;
    }
    Rat r(p, q);
    r.canonicalize();
    return neg ? Rat(-r) : r;
}

// Reconstruction is accepted only when the rational reproduces the float.
inline std::optional<Rat> reconstruct_rat(double x, std::uint64_t den_bound, double tol) {
    const Rat r = cf_rat(x, den_bound);
    if (std::abs(to_double(r) - x) <= tol * (1.0 + std::abs(x))) return r;
    return std::nullopt;
}

inline std::optional<GaussRat> reconstruct_gauss(const std::complex<double>& v, std::uint64_t den_bound, double tol) {
    const auto re = reconstruct_rat(v.real(), den_bound, tol);
    if (!re) return std::nullopt;
    const auto im = reconstruct_rat(v.imag(), den_bound, tol);
    if (!im) return std::nullopt;
    return GaussRat(*re, *im);
}

// Greedy globally-nearest bijection prev -> next. Returns perm with
// next[perm[k]] matched to prev[k]; refuses the match when a pairing
// exceeds max_jump or the sizes differ.
inline std::optional<std::vector<std::size_t>> match_roots(const CVec& prev, const CVec& next, double max_jump) {
    if (prev.size() != next.size()) return std::nullopt;
    const std::size_t n = prev.size();
    std::vector<std::size_t> perm(n, n);
    std::vector<bool> used_prev(n, false), used_next(n, false);
    for (std::size_t round = 0; round < n; ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = n, bj = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (used_prev[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (used_next[j]) continue;
                const double d = std::abs(prev[i] - next[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best > max_jump) return std::nullopt;
        perm[bi] = bj;
        used_prev[bi] = true;
        used_next[bj] = true;
    }
    return perm;
}

// Continues the root vector of a parametric univariate family along the
// polyline through `waypoints` (starting at the parameter of start_roots'
// computation = waypoints.front()). CoeffFn maps a complex parameter to the
// dense coefficient vector. Steps are uniform per segment; the match is
// rejected (nullopt) when roots can no longer be followed unambiguously.
template <class CoeffFn>
std::optional<CVec> track_along(CoeffFn&& coeffs_at, CVec current, const CVec& waypoints, int steps_per_seg = 24) {
    for (std::size_t seg = 0; seg + 1 < waypoints.size(); ++seg) {
        const auto a = waypoints[seg], b = waypoints[seg + 1];
        for (int s = 1; s <= steps_per_seg; ++s) {
            const double tau = static_cast<double>(s) / steps_per_seg;
            const auto z = a + tau * (b - a);
            CVec roots = roots_of(coeffs_at(z));
            if (roots.size() != current.size()) return std::nullopt;
            // reject assignments that jump more than half the separation
            double min_sep = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < roots.size(); ++i)
                for (std::size_t j = i + 1; j < roots.size(); ++j)
                    min_sep = std::min(min_sep, std::abs(roots[i] - roots[j]));
            const double jump = roots.size() > 1 ? 0.5 * min_sep + 1e-9 : std::numeric_limits<double>::infinity();
            const auto perm = match_roots(current, roots, jump);
            if (!perm) return std::nullopt;
            CVec next(current.size());
            for (std::size_t k = 0; k < current.size(); ++k) next[k] = roots[(*perm)[k]];
            current = std::move(next);
        }
    }
    return current;
}

}  // namespace polyhull
