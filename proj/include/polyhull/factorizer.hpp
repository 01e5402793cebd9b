#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <vector>

#include "bipoly.hpp"
#include "numeric.hpp"
#include "unifactor.hpp"

namespace polyhull {

// The coefficient field extension: Q(i, a) with a = exp(2*pi*i/order).
struct CycloExt {
    unsigned order = 1;
};

struct Factor {
    ExtPoly q;                 // monic-lex, primitive, irreducible over Q(i, a)
    unsigned multiplicity = 1;
    // True unless a numeric probe indicates the factor splits further over C
    // (into pieces outside the working field). Never silently accepted: the
    // flag travels into downstream verdicts.
    bool absolute = true;
};

struct FactorList {
    CycloElt unit;
    std::vector<Factor> factors;

    ExtPoly product() const {
        ExtPoly p = ExtPoly::constant(unit);
        for (const auto& f : factors) p = p * f.q.pow(f.multiplicity);
        return p;
    }
};

namespace detail {

inline BiPoly specialize_z1(const BiPoly& p, const GaussRat& x) {
    BiPoly out;
    for (unsigned j = 0; j <= p.deg2(); ++j)
        out += BiPoly::monomial(0, j, p.coeff_of_z2(j).eval_exact(x, GaussRat(0)));
    return out;
}

template <class K>
BasicBiPoly<K> content_z1(const BasicBiPoly<K>& p) {
    return content_z2(p.swap_vars()).swap_vars();
}

// Exact Lagrange interpolation through (nodes[t], values[t]), result a
// polynomial in z1 of degree < nodes.size().
inline ExtPoly lagrange_z1(const std::vector<GaussRat>& nodes, const std::vector<CycloElt>& values) {
    const std::size_t T = nodes.size();
    ExtPoly acc;
    for (std::size_t t = 0; t < T; ++t) {
        if (values[t].is_zero()) continue;
        ExtPoly numer = ExtPoly::constant(CycloElt(1));
        GaussRat denom(1);
        for (std::size_t r = 0; r < T; ++r) {
            if (r == t) continue;
            numer = numer * (ExtPoly::var1() - ExtPoly::constant(CycloElt(nodes[r])));
            denom *= nodes[t] - nodes[r];
        }
        acc += (values[t] / CycloElt(denom)) * numer;
    }
    return acc;
}

// Numeric z1-locations where the z2-fiber of F degenerates (discriminant
// zeros), found by sampling the Sylvester determinant of (F, dF/dz2) on a
// circle and interpolating the resultant's coefficients.
inline CVec branch_points(const ExtPoly& F) {
    const unsigned d1 = F.deg1(), d2 = F.deg2();
    const ExtPoly dF = F.partial(2);
    const std::size_t D = 2 * static_cast<std::size_t>(d1) * d2 + 1;
    const std::size_t rows = 2 * static_cast<std::size_t>(d2) - 1;
    Eigen::MatrixXcd V(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    Eigen::VectorXcd r(static_cast<Eigen::Index>(D));
    for (std::size_t s = 0; s < D; ++s) {
        // Unit-circle nodes keep the Vandermonde solve perfectly conditioned
        // (it is a scaled DFT matrix).
        const double th = 2.0 * M_PI * static_cast<double>(s) / static_cast<double>(D);
        const std::complex<double> z{std::cos(th), std::sin(th)};
        const CVec a = F.z2_coeffs_at(z), b = dF.z2_coeffs_at(z);
        Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
        for (std::size_t i = 0; i + 1 < d2; ++i)         // d2-1 shifted copies of a
            for (std::size_t k = 0; k < a.size(); ++k) S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + k)) = a[d2 - k];
        for (std::size_t i = 0; i < d2; ++i)             // d2 shifted copies of b
            for (std::size_t k = 0; k < b.size(); ++k)
                S(static_cast<Eigen::Index>(d2 - 1 + i), static_cast<Eigen::Index>(i + k)) = b[d2 - 1 - k];
        r(static_cast<Eigen::Index>(s)) = S.determinant();
        std::complex<double> pw{1.0, 0.0};
        for (std::size_t k = 0; k < D; ++k) {
            V(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k)) = pw;
            pw *= z;
        }
    }
    Eigen::VectorXcd c = V.colPivHouseholderQr().solve(r);
    CVec coeffs(D);
    double maxmag = 0.0;
    for (std::size_t k = 0; k < D; ++k) {
        coeffs[k] = c(static_cast<Eigen::Index>(k));
        maxmag = std::max(maxmag, std::abs(coeffs[k]));
    }
    if (maxmag == 0.0) return {};
    for (auto& v : coeffs)
        if (std::abs(v) <= 1e-9 * maxmag) v = {0.0, 0.0};
    while (coeffs.size() > 1 && coeffs.back() == std::complex<double>(0.0, 0.0)) coeffs.pop_back();
    if (coeffs.size() <= 1) return {};
    CVec raw = roots_of(coeffs);
    // dedupe clustered roots
    sort_roots(raw);
    CVec out;
    for (const auto& z : raw) {
        if (out.empty() || std::abs(out.back() - z) > 1e-6) out.push_back(z);
    }
    return out;
}

struct UnionFind {
    std::vector<std::size_t> up;
    explicit UnionFind(std::size_t n) : up(n) {
        for (std::size_t k = 0; k < n; ++k) up[k] = k;
    }
    std::size_t find(std::size_t k) { return up[k] == k ? k : up[k] = find(up[k]); }
    void unite(std::size_t a, std::size_t b) { up[find(a)] = find(b); }
};

// Numeric monodromy probe: returns true when continuation of the z2-roots
// around every fiber-degeneration point leaves the root set split into
// more than one orbit, i.e. the (field-irreducible) factor visibly splits
// over C. Inconclusive numerics return false (no flag).
inline bool numeric_c_reducible(const ExtPoly& F) {
    if (F.deg1() < 2 || F.deg2() < 2) return false;
    CVec bps;
    try {
        bps = branch_points(F);
    } catch (const Error&) {
        return false;
    }
    const std::size_t n = F.deg2();
    auto coeffs_at = [&](const std::complex<double>& z) { return F.z2_coeffs_at(z); };
    // base point to the right of every degeneration point
    double max_re = 0.0, max_im = 0.0;
    for (const auto& b : bps) {
        max_re = std::max(max_re, std::abs(b.real()));
        max_im = std::max(max_im, std::abs(b.imag()));
    }
    const std::complex<double> base{max_re + 1.3, 0.0};
    CVec start;
    try {
        start = roots_of(coeffs_at(base));
    } catch (const Error&) {
        return false;
    }
    if (start.size() != n) return false;
    sort_roots(start);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(start[i] - start[j]) < 1e-8) return false;
    if (bps.empty()) return true;  // unramified over C: sheets never meet, so the curve splits

    UnionFind uf(n);
    for (const auto& b : bps) {
        double rho = std::abs(base - b);
        for (const auto& other : bps)
            if (std::abs(other - b) > 1e-9) rho = std::min(rho, 0.5 * std::abs(other - b));
        rho = std::max(1e-4, 0.45 * rho);
        bool looped = false;
        int steps = 24;
        for (int retry = 0; retry < 3 && !looped; ++retry, rho *= 0.55, steps *= 2) {
            const auto dir = (base - b) / std::abs(base - b);
            const std::complex<double> entry = b + rho * dir;
            CVec waypoints{base, entry};
            const double th0 = std::arg(entry - b);
            for (int arc = 1; arc <= 12; ++arc) {
                const double th = th0 + 2.0 * M_PI * arc / 12.0;
                waypoints.push_back(b + rho * std::complex<double>(std::cos(th), std::sin(th)));
            }
            waypoints.push_back(base);
            const auto end = track_along(coeffs_at, start, waypoints, steps);
            if (!end) continue;
            const auto perm = match_roots(start, *end, 1e-4);
            if (!perm) continue;
            for (std::size_t k = 0; k < n; ++k) uf.unite(k, (*perm)[k]);
            looped = true;
        }
        if (!looped) return false;  // could not follow this loop: stay unflagged
    }
    std::size_t orbits = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (uf.find(k) == k) ++orbits;
    return orbits > 1;
}

// Factorization of the genuinely bivariate core: h monic-lex, squarefree,
// primitive in both directions, with both partial degrees >= 2.
// clean is set false when the procedure had to give up and return h whole
// without an irreducibility certificate.
inline std::vector<ExtPoly> bivariate_core(const BiPoly& h, unsigned order, DetRng& rng, bool& clean) {
    clean = true;
    const unsigned d1 = h.deg1(), d2 = h.deg2();
    const BiPoly L = h.coeff_of_z2(d2);
    const std::size_t T = 2 * static_cast<std::size_t>(d1) + 1;

    for (int attempt = 0; attempt < 6; ++attempt) {
        // --- interpolation nodes with nonvanishing leading coefficient and
        // squarefree specialization
        std::vector<GaussRat> nodes;
        for (std::size_t t = 0; t < T; ++t) {
            bool placed = false;
            for (int draw = 0; draw < 80 && !placed; ++draw) {
                const GaussRat x(rng.small_rat(9));
                bool dup = false;
                for (const auto& prev : nodes) dup = dup || prev == x;
                if (dup) continue;
                if (L.eval_exact(x, GaussRat(0)).is_zero()) continue;
                const BiPoly u = specialize_z1(h, x);
                if (!gcd_univar(u, u.partial(2), 2).is_constant()) continue;
                nodes.push_back(x);
                placed = true;
            }
            if (!placed) break;
        }
        if (nodes.size() != T) continue;

        // --- exact univariate factorizations at every node
        std::vector<UniFactorization> fl(T);
        bool spec_ok = true;
        for (std::size_t t = 0; t < T && spec_ok; ++t) {
            try {
                fl[t] = factor_univar_z2(specialize_z1(h, nodes[t]), order);
            } catch (const Error&) {
                spec_ok = false;
            }
        }
        if (!spec_ok) continue;

        // --- numeric roots of node-0 factors, concatenated with ownership
        CVec all0;
        std::vector<std::size_t> owner0;
        for (std::size_t fi = 0; fi < fl[0].factors.size(); ++fi) {
            const CVec rs = polished_roots_z2(fl[0].factors[fi]);
            for (const auto& rt : rs) {
                all0.push_back(rt);
                owner0.push_back(fi);
            }
        }
        if (all0.size() != d2) continue;

        // --- continuation tracks from node 0 to every other node
        auto coeffs_at = [&](const std::complex<double>& z) { return h.z2_coeffs_at(z); };
        const double x0 = to_double(nodes[0].re);
        std::vector<std::vector<std::size_t>> owner(T);  // owner[t][track] = factor idx in fl[t]
        owner[0] = owner0;
        bool tracks_ok = true;
        for (std::size_t t = 1; t < T && tracks_ok; ++t) {
            const double xt = to_double(nodes[t].re);
            std::optional<CVec> tracked;
            for (int variant = 0; variant < 3 && !tracked; ++variant) {
                const double eta = 0.61 + 0.17 * attempt + 0.23 * variant;
                const CVec way{{x0, 0.0}, {x0, eta}, {xt, eta}, {xt, 0.0}};
                tracked = track_along(coeffs_at, all0, way, 24 * (1 + attempt) * (1 + variant));
            }
            if (!tracked) {
                tracks_ok = false;
                break;
            }
            // map each tracked endpoint to the node-t factor owning it
            std::vector<std::pair<std::complex<double>, std::size_t>> node_roots;
            for (std::size_t fi = 0; fi < fl[t].factors.size(); ++fi)
                for (const auto& rt : polished_roots_z2(fl[t].factors[fi])) node_roots.emplace_back(rt, fi);
            owner[t].assign(d2, fl[t].factors.size());
            for (std::size_t k = 0; k < d2 && tracks_ok; ++k) {
                double best = 1e9;
                std::size_t who = fl[t].factors.size();
                for (const auto& [pos, fi] : node_roots) {
                    const double dd = std::abs(pos - (*tracked)[k]);
                    if (dd < best) {
                        best = dd;
                        who = fi;
                    }
                }
                if (best > 1e-5) tracks_ok = false;
                owner[t][k] = who;
            }
            if (tracks_ok) {
                // every node-t factor must receive exactly degree-many tracks
                std::vector<std::size_t> cnt(fl[t].factors.size(), 0);
                for (std::size_t k = 0; k < d2; ++k) ++cnt[owner[t][k]];
                for (std::size_t fi = 0; fi < fl[t].factors.size(); ++fi)
                    if (cnt[fi] != fl[t].factors[fi].deg2()) tracks_ok = false;
            }
        }
        if (!tracks_ok) continue;

        // --- smallest-first subset enumeration with exact certificates
        std::vector<std::size_t> remaining(fl[0].factors.size());
        for (std::size_t k = 0; k < remaining.size(); ++k) remaining[k] = k;
        std::vector<ExtPoly> found;
        ExtPoly quotient = to_ext(h);
        std::size_t size = 1;
        bool stuck = false;
        while (!remaining.empty() && !stuck) {
            if (size >= remaining.size()) {
                ExtPoly last = quotient;
                last.normalize_monic();
                found.push_back(last);
                remaining.clear();
                break;
            }
            bool got = false;
            detail::for_each_combination(remaining.size(), size, [&](const std::vector<std::size_t>& idx) {
                std::vector<bool> chosen(fl[0].factors.size(), false);
                unsigned k_deg = 0;
                for (auto pos : idx) {
                    chosen[remaining[pos]] = true;
                    k_deg += fl[0].factors[remaining[pos]].deg2();
                }
                // which node-t factors do the chosen tracks land in?
                std::vector<std::vector<std::size_t>> hit(T);
                for (std::size_t t = 0; t < T; ++t) {
                    std::vector<std::size_t> cnt(fl[t].factors.size(), 0);
                    for (std::size_t k = 0; k < d2; ++k)
                        if (chosen[owner0[k]]) ++cnt[owner[t][k]];
                    for (std::size_t fi = 0; fi < cnt.size(); ++fi) {
                        if (cnt[fi] == 0) continue;
                        if (cnt[fi] != fl[t].factors[fi].deg2()) return false;  // crosses a factor boundary
                        hit[t].push_back(fi);
                    }
                }
                // exact products at each node, then exact interpolation of
                // lc * candidate coefficient-wise
                std::vector<ExtPoly> m(T);
                for (std::size_t t = 0; t < T; ++t) {
                    ExtPoly prod = ExtPoly::constant(CycloElt(1));
                    for (auto fi : hit[t]) prod = prod * fl[t].factors[fi];
                    if (prod.deg2() != k_deg) return false;
                    m[t] = prod;
                }
                ExtPoly G;
                for (unsigned j = 0; j <= k_deg; ++j) {
                    std::vector<CycloElt> vals(T);
                    for (std::size_t t = 0; t < T; ++t)
                        vals[t] = CycloElt(L.eval_exact(nodes[t], GaussRat(0))) * m[t].coeff(0, j);
                    G += lagrange_z1(nodes, vals) * ExtPoly::monomial(0, j, CycloElt(1));
                }
                if (G.is_zero()) return false;
                ExtPoly F = primitive_z2(G);
                F.normalize_monic();
                if (F.is_constant() || F.deg2() != k_deg) return false;
                auto next = quotient.try_divide(F);
                if (!next) return false;
                found.push_back(F);
                quotient = *next;
                std::vector<std::size_t> keep;
                for (auto id : remaining)
                    if (!chosen[id]) keep.push_back(id);
                remaining = std::move(keep);
                got = true;
                return true;
            });
            if (!got) {
                ++size;
                if (size > d2) stuck = true;
            }
        }
        if (stuck || !(quotient.is_constant() || remaining.empty())) continue;
        return found;
    }

    // Give up: emit the core whole, explicitly unclean (never silently).
    clean = false;
    ExtPoly whole = to_ext(h);
    whole.normalize_monic();
    return {whole};
}

inline bool factor_order_less(const Factor& a, const Factor& b) {
    const unsigned ta = a.q.total_degree(), tb = b.q.total_degree();
    if (ta != tb) return ta < tb;
    if (a.q.deg1() != b.q.deg1()) return a.q.deg1() < b.q.deg1();
    return deterministic_less(a.q, b.q);
}

}  // namespace detail

// Irreducible factorization of p over Q(i, e^(2*pi*i/ext.order)) with exact
// product certification. Degrees above 16 are refused (desk scale).
inline FactorList factor(const BiPoly& p, CycloExt ext = {}, std::uint64_t seed = 20240817ULL) {
    CycloElt::check_order(ext.order);
    if (p.is_zero()) throw ZeroPolynomial("factorization of 0");
    if (p.total_degree() > 16) throw DegreeTooLarge("total degree above the supported 16");
    FactorList out;
    out.unit = CycloElt(p.leading().second);
    if (p.is_constant()) return out;

    DetRng rng(seed);
    const auto sf = squarefree_decompose(p);

    std::vector<Factor> fs;
    auto push = [&fs](ExtPoly q, unsigned mult, bool absolute) {
        q.normalize_monic();
        for (auto& existing : fs) {
            if (existing.q == q) {
                existing.multiplicity += mult;
                existing.absolute = existing.absolute && absolute;
                return;
            }
        }
        fs.push_back(Factor{std::move(q), mult, absolute});
    };

    for (const auto& part : sf.parts) {
        BiPoly g = part.factor;
        const unsigned e = part.multiplicity;
        if (const unsigned k = g.min_deg1(); k > 0) {
            push(ExtPoly::var1(), e * k, true);
            g = g.divexact(BiPoly::monomial(k, 0, GaussRat(1)));
        }
        if (const unsigned k = g.min_deg2(); k > 0) {
            push(ExtPoly::var2(), e * k, true);
            g = g.divexact(BiPoly::monomial(0, k, GaussRat(1)));
        }
        if (g.is_constant()) continue;

        // z1-only factors (the z2-direction content)
        const BiPoly c1 = content_z2(g);
        if (!c1.is_constant()) {
            for (const auto& f : factor_univar_z1(c1, ext.order).factors) push(f, e, f.deg1() == 1);
            g = g.divexact(c1);
        }
        // z2-only factors
        const BiPoly c2 = detail::content_z1(g);
        if (!c2.is_constant()) {
            for (const auto& f : factor_univar_z2(c2, ext.order).factors) push(f, e, f.deg2() == 1);
            g = g.divexact(c2);
        }
        if (g.is_constant()) continue;

        if (g.deg1() == 0) {
            for (const auto& f : factor_univar_z2(g, ext.order).factors) push(f, e, f.deg2() == 1);
            continue;
        }
        if (g.deg2() == 0) {
            for (const auto& f : factor_univar_z1(g, ext.order).factors) push(f, e, f.deg1() == 1);
            continue;
        }
        if (g.deg1() == 1 || g.deg2() == 1) {
            // primitive in both directions with an affine variable: irreducible over C
            push(to_ext(g), e, true);
            continue;
        }

        bool clean = true;
        const auto cores = detail::bivariate_core(g, ext.order, rng, clean);
        for (const auto& q : cores) {
            const bool flagged = (!clean && cores.size() == 1) || detail::numeric_c_reducible(q);
            push(q, e, !flagged);
        }
    }

    // The product identity is always re-certified exactly.
    ExtPoly prod = ExtPoly::constant(out.unit);
    for (const auto& f : fs) prod = prod * f.q.pow(f.multiplicity);
    if (prod != to_ext(p)) throw Error("internal: factorization product certificate failed");

    std::sort(fs.begin(), fs.end(), detail::factor_order_less);
    out.factors = std::move(fs);
    return out;
}

// Extension-coefficient inputs: reduce to the Gaussian-coefficient algorithm,
// either directly (when the monic normalization lands in Q(i)) or through the
// Galois norm p * sigma(p), whose factors are then sieved back by exact
// division. Keeps every certificate exact.
inline FactorList factor(const ExtPoly& p, CycloExt ext, std::uint64_t seed = 20240817ULL) {
    CycloElt::check_order(ext.order);
    if (p.is_zero()) throw ZeroPolynomial("factorization of 0");
    if (p.total_degree() > 16) throw DegreeTooLarge("total degree above the supported 16");
    const CycloElt lead = p.leading().second;
    ExtPoly g = p;
    g.normalize_monic();
    if (all_coeffs_gauss(g)) {
        FactorList fl = factor(to_gauss(g), ext, seed);
        fl.unit = lead * fl.unit;
        return fl;
    }
    if (p.total_degree() > 8)
        throw DegreeTooLarge("extension-coefficient factorization supports total degree <= 8");
    const ExtPoly M = g * alg_conj_poly(g);
    if (!all_coeffs_gauss(M)) throw Error("internal: Galois norm left the base field");
    const FactorList base = factor(to_gauss(M), ext, seed);
    FactorList out;
    out.unit = lead;
    ExtPoly rem = g;
    for (const auto& f : base.factors) {
        unsigned e = 0;
        while (true) {
            auto q = rem.try_divide(f.q);
            if (!q) break;
            rem = *q;
            ++e;
        }
        if (e > 0) out.factors.push_back(Factor{f.q, e, f.absolute});
    }
    if (!rem.is_constant()) throw Error("internal: norm-based factorization incomplete");
    ExtPoly prod = ExtPoly::constant(out.unit);
    for (const auto& f : out.factors) prod = prod * f.q.pow(f.multiplicity);
    if (prod != p) throw Error("internal: factorization product certificate failed");
    std::sort(out.factors.begin(), out.factors.end(), detail::factor_order_less);
    return out;
}

inline bool is_irreducible(const BiPoly& q, CycloExt ext = {}, std::uint64_t seed = 20240817ULL) {
    if (q.is_constant()) throw PreconditionViolation("irreducibility query on a constant");
    const auto fl = factor(q, ext, seed);
    return fl.factors.size() == 1 && fl.factors[0].multiplicity == 1;
}

inline bool is_irreducible(const ExtPoly& q, CycloExt ext, std::uint64_t seed = 20240817ULL) {
    if (q.is_constant()) throw PreconditionViolation("irreducibility query on a constant");
    const auto fl = factor(q, ext, seed);
    return fl.factors.size() == 1 && fl.factors[0].multiplicity == 1;
}

}  // namespace polyhull
