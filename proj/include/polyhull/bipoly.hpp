#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclo.hpp"
#include "errors.hpp"
#include "gauss.hpp"

namespace polyhull {

// Monomial exponent pair; ordering is lexicographic with z1 ahead of z2,
// so the greatest key of a term map is the lex-leading monomial.
struct Exp {
    unsigned i = 0;
    unsigned j = 0;
    friend bool operator==(const Exp& a, const Exp& b) { return a.i == b.i && a.j == b.j; }
    friend bool operator<(const Exp& a, const Exp& b) {
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    }
};

// Sparse bivariate polynomial over an exact coefficient field K.
//
// Every instance carries a declared bidegree (m, n) >= the actual bidegree;
// arithmetic combines declared bidegrees (max for +/-, sum for *) so a chain
// of operations never under-declares. The declared bidegree is what the
// torus reflection uses; parsing and explicit construction default it to the
// actual bidegree.
template <class K>
class BasicBiPoly {
public:
    using Terms = std::map<Exp, K>;

    BasicBiPoly() = default;

    static BasicBiPoly constant(const K& c) { return monomial(0, 0, c); }

    static BasicBiPoly monomial(unsigned i, unsigned j, const K& c) {
        BasicBiPoly p;
        if (!c.is_zero()) p.terms_[Exp{i, j}] = c;
        p.recompute_declared();
        return p;
    }

    static BasicBiPoly var1() { return monomial(1, 0, K(1)); }
    static BasicBiPoly var2() { return monomial(0, 1, K(1)); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exp{0, 0}); }

    K coeff(unsigned i, unsigned j) const {
        auto it = terms_.find(Exp{i, j});
        return it == terms_.end() ? K(0) : it->second;
    }

    unsigned deg1() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e.i);
        return d;
    }
    unsigned deg2() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e.j);
        return d;
    }
    unsigned min_deg1() const {
        if (terms_.empty()) return 0;
        unsigned d = terms_.begin()->first.i;
        for (const auto& [e, c] : terms_) d = std::min(d, e.i);
        return d;
    }
    unsigned min_deg2() const {
        if (terms_.empty()) return 0;
        unsigned d = terms_.begin()->first.j;
        for (const auto& [e, c] : terms_) d = std::min(d, e.j);
        return d;
    }
    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e.i + e.j);
        return d;
    }

    unsigned declared_m() const { return m_; }
    unsigned declared_n() const { return n_; }

    BasicBiPoly with_declared(unsigned m, unsigned n) const {
        if (m < deg1() || n < deg2())
            throw PreconditionViolation("declared bidegree below actual bidegree");
        BasicBiPoly p = *this;
        p.m_ = m;
        p.n_ = n;
        return p;
    }

    // Lex-leading term (z1-major); polynomial must be nonzero.
    std::pair<Exp, K> leading() const {
        if (terms_.empty()) throw ZeroPolynomial("leading term of zero polynomial");
        auto it = terms_.rbegin();
        return {it->first, it->second};
    }

    // Divides through by the lex-leading coefficient; returns that unit.
    // The zero polynomial is left unchanged with unit 1.
    K normalize_monic() {
        if (terms_.empty()) return K(1);
        K unit = terms_.rbegin()->second;
        for (auto& [e, c] : terms_) c = c / unit;
        return unit;
    }

    BasicBiPoly monic() const {
        BasicBiPoly p = *this;
        p.normalize_monic();
        return p;
    }

    BasicBiPoly operator-() const {
        BasicBiPoly p = *this;
        for (auto& [e, c] : p.terms_) c = -c;
        return p;
    }

    BasicBiPoly& operator+=(const BasicBiPoly& o) {
        for (const auto& [e, c] : o.terms_) {
            auto it = terms_.find(e);
            if (it == terms_.end()) {
                terms_[e] = c;
            } else {
                it->second += c;
                if (it->second.is_zero()) terms_.erase(it);
            }
        }
        m_ = std::max(m_, o.m_);
        n_ = std::max(n_, o.n_);
        return *this;
    }
    BasicBiPoly& operator-=(const BasicBiPoly& o) { return *this += -o; }

    BasicBiPoly& operator*=(const BasicBiPoly& o) { return *this = *this * o; }

    friend BasicBiPoly operator+(BasicBiPoly a, const BasicBiPoly& b) { return a += b; }
    friend BasicBiPoly operator-(BasicBiPoly a, const BasicBiPoly& b) { return a -= b; }

    friend BasicBiPoly operator*(const BasicBiPoly& a, const BasicBiPoly& b) {
        BasicBiPoly p;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                Exp e{ea.i + eb.i, ea.j + eb.j};
                auto it = p.terms_.find(e);
                if (it == p.terms_.end()) {
                    K v = ca * cb;
                    if (!v.is_zero()) p.terms_[e] = std::move(v);
                } else {
                    it->second += ca * cb;
                    if (it->second.is_zero()) p.terms_.erase(it);
                }
            }
        }
        if (a.is_zero() || b.is_zero()) {
            p.m_ = 0;
            p.n_ = 0;
        } else {
            p.m_ = a.m_ + b.m_;
            p.n_ = a.n_ + b.n_;
        }
        return p;
    }

    friend BasicBiPoly operator*(const K& s, const BasicBiPoly& p) {
        BasicBiPoly q;
        if (s.is_zero()) return q;
        q = p;
        for (auto& [e, c] : q.terms_) c = s * c;
        return q;
    }
    friend BasicBiPoly operator*(const BasicBiPoly& p, const K& s) { return s * p; }

    BasicBiPoly pow(unsigned k) const {
        BasicBiPoly r = constant(K(1));
        for (unsigned t = 0; t < k; ++t) r = r * (*this);
        return r;
    }

    friend bool operator==(const BasicBiPoly& a, const BasicBiPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const BasicBiPoly& a, const BasicBiPoly& b) { return !(a == b); }

    // Partial derivative; var is 1 or 2.
    BasicBiPoly partial(int var) const {
        BasicBiPoly p;
        for (const auto& [e, c] : terms_) {
            if (var == 1) {
                if (e.i == 0) continue;
                K v = c * K(static_cast<long>(e.i));
                if (!v.is_zero()) p.terms_[Exp{e.i - 1, e.j}] = std::move(v);
            } else {
                if (e.j == 0) continue;
                K v = c * K(static_cast<long>(e.j));
                if (!v.is_zero()) p.terms_[Exp{e.i, e.j - 1}] = std::move(v);
            }
        }
        p.m_ = var == 1 ? (m_ > 0 ? m_ - 1 : 0) : m_;
        p.n_ = var == 2 ? (n_ > 0 ? n_ - 1 : 0) : n_;
        return p;
    }

    // Dense two-stage Horner evaluation; throws NumericError on overflow.
    std::complex<double> eval(const std::complex<double>& z1, const std::complex<double>& z2) const {
        if (terms_.empty()) return {0.0, 0.0};
        const unsigned d1 = deg1(), d2 = deg2();
        std::vector<std::vector<std::complex<double>>> rows(d1 + 1,
                                                            std::vector<std::complex<double>>(d2 + 1, {0.0, 0.0}));
        for (const auto& [e, c] : terms_) rows[e.i][e.j] = num_value(c);
        std::complex<double> acc{0.0, 0.0};
        for (unsigned i = d1 + 1; i-- > 0;) {
            std::complex<double> row{0.0, 0.0};
            for (unsigned j = d2 + 1; j-- > 0;) row = row * z2 + rows[i][j];
            acc = acc * z1 + row;
        }
        if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag()))
            throw NumericError("polynomial evaluation overflowed");
        return acc;
    }

    // Exact evaluation over K (same Horner structure, no rounding).
    K eval_exact(const K& z1, const K& z2) const {
        if (terms_.empty()) return K(0);
        const unsigned d1 = deg1(), d2 = deg2();
        std::vector<std::vector<K>> rows(d1 + 1, std::vector<K>(d2 + 1, K(0)));
        for (const auto& [e, c] : terms_) rows[e.i][e.j] = c;
        K acc(0);
        for (unsigned i = d1 + 1; i-- > 0;) {
            K row(0);
            for (unsigned j = d2 + 1; j-- > 0;) row = row * z2 + rows[i][j];
            acc = acc * z1 + row;
        }
        return acc;
    }

    // Polynomial composition p(x1(z1,z2), x2(z1,z2)).
    BasicBiPoly substitute(const BasicBiPoly& x1, const BasicBiPoly& x2) const {
        const unsigned d1 = deg1(), d2 = deg2();
        std::vector<BasicBiPoly> p1(d1 + 1), p2(d2 + 1);
        p1[0] = constant(K(1));
        for (unsigned i = 1; i <= d1; ++i) p1[i] = p1[i - 1] * x1;
        p2[0] = constant(K(1));
        for (unsigned j = 1; j <= d2; ++j) p2[j] = p2[j - 1] * x2;
        BasicBiPoly out;
        for (const auto& [e, c] : terms_) out += c * (p1[e.i] * p2[e.j]);
        out.recompute_declared();
        return out;
    }

    BasicBiPoly swap_vars() const {
        BasicBiPoly p;
        for (const auto& [e, c] : terms_) p.terms_[Exp{e.j, e.i}] = c;
        p.m_ = n_;
        p.n_ = m_;
        return p;
    }

    // Coefficient-wise complex conjugation (z1, z2 untouched).
    BasicBiPoly conj_coeffs() const {
        BasicBiPoly p = *this;
        for (auto& [e, c] : p.terms_) c = c.conj();
        return p;
    }

    // The z1-polynomial sitting in front of z2^j.
    BasicBiPoly coeff_of_z2(unsigned j) const {
        BasicBiPoly p;
        for (const auto& [e, c] : terms_)
            if (e.j == j) p.terms_[Exp{e.i, 0}] = c;
        p.recompute_declared();
        return p;
    }
    BasicBiPoly coeff_of_z1(unsigned i) const {
        BasicBiPoly p;
        for (const auto& [e, c] : terms_)
            if (e.i == i) p.terms_[Exp{0, e.j}] = c;
        p.recompute_declared();
        return p;
    }

    // Dense coefficient vector of p(z1fix, z2) as a polynomial in z2.
    std::vector<std::complex<double>> z2_coeffs_at(const std::complex<double>& z1fix) const {
        std::vector<std::complex<double>> out(deg2() + 1, {0.0, 0.0});
        for (unsigned j = 0; j <= deg2(); ++j) out[j] = coeff_of_z2(j).eval(z1fix, {0.0, 0.0});
        return out;
    }
    std::vector<std::complex<double>> z1_coeffs_at(const std::complex<double>& z2fix) const {
        std::vector<std::complex<double>> out(deg1() + 1, {0.0, 0.0});
        for (unsigned i = 0; i <= deg1(); ++i) out[i] = coeff_of_z1(i).eval({0.0, 0.0}, z2fix);
        return out;
    }

    // Exact single-divisor division in lex order; nullopt when not divisible.
    std::optional<BasicBiPoly> try_divide(const BasicBiPoly& d) const {
        if (d.is_zero()) throw ZeroPolynomial("division by zero polynomial");
        BasicBiPoly r = *this;
        BasicBiPoly q;
        const auto [de, dc] = d.leading();
        while (!r.is_zero()) {
            const auto [re, rc] = r.leading();
            if (re.i < de.i || re.j < de.j) return std::nullopt;
            BasicBiPoly t = monomial(re.i - de.i, re.j - de.j, rc / dc);
            q += t;
            r -= t * d;
        }
        q.recompute_declared();
        return q;
    }

    // Exact division that must succeed; internal-logic guard otherwise.
    BasicBiPoly divexact(const BasicBiPoly& d) const {
        auto q = try_divide(d);
        if (!q) throw Error("internal: inexact polynomial division");
        return *q;
    }

    void recompute_declared() {
        m_ = deg1();
        n_ = deg2();
    }

private:
    static std::complex<double> num_value(const K& c) { return c.value(); }

    Terms terms_;
    unsigned m_ = 0;
    unsigned n_ = 0;
};

using BiPoly = BasicBiPoly<GaussRat>;
using ExtPoly = BasicBiPoly<CycloElt>;

// ---------------------------------------------------------------------------
// Field embeddings between the Gaussian-rational and cyclotomic levels.

inline ExtPoly to_ext(const BiPoly& p) {
    ExtPoly out;
    for (const auto& [e, c] : p.terms()) out += ExtPoly::monomial(e.i, e.j, CycloElt(c));
    return out.with_declared(p.declared_m(), p.declared_n());
}

// Valid only when every coefficient already lies in Q(i).
inline BiPoly to_gauss(const ExtPoly& p) {
    BiPoly out;
    for (const auto& [e, c] : p.terms()) out += BiPoly::monomial(e.i, e.j, c.gauss_part());
    return out.with_declared(p.declared_m(), p.declared_n());
}

inline bool all_coeffs_gauss(const ExtPoly& p) {
    for (const auto& [e, c] : p.terms())
        if (!c.is_gauss()) return false;
    return true;
}

template <class K>
BasicBiPoly<K> partial(const BasicBiPoly<K>& p, int var) {
    return p.partial(var);
}

// Deterministic total order on polynomials (for sorting factor lists):
// compares term maps entry by entry using Exp order and K's total order.
template <class K>
bool deterministic_less(const BasicBiPoly<K>& a, const BasicBiPoly<K>& b) {
    auto ia = a.terms().begin(), ib = b.terms().begin();
    for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
        if (ia->first < ib->first) return true;
        if (ib->first < ia->first) return false;
        if (ia->second < ib->second) return true;
        if (ib->second < ia->second) return false;
    }
    return ia == a.terms().end() && ib != b.terms().end();
}

// ---------------------------------------------------------------------------
// Univariate helpers (polynomials using only one of the variables).

template <class K>
bool is_univar(const BasicBiPoly<K>& p, int var) {
    return var == 1 ? p.deg2() == 0 : p.deg1() == 0;
}

template <class K>
unsigned udeg(const BasicBiPoly<K>& p, int var) {
    return var == 1 ? p.deg1() : p.deg2();
}

// Long division a = q*b + r in K[var]; both inputs univariate in var.
template <class K>
std::pair<BasicBiPoly<K>, BasicBiPoly<K>> div_rem_univar(const BasicBiPoly<K>& a, const BasicBiPoly<K>& b, int var) {
    if (b.is_zero()) throw ZeroPolynomial("univariate division by zero");
    BasicBiPoly<K> q, r = a;
    const auto [be, bc] = b.leading();
    const unsigned db = udeg(b, var);
    while (!r.is_zero() && udeg(r, var) >= db) {
        const auto [re, rc] = r.leading();
        const unsigned shift = udeg(r, var) - db;
        auto t = var == 1 ? BasicBiPoly<K>::monomial(shift, 0, rc / bc) : BasicBiPoly<K>::monomial(0, shift, rc / bc);
        q += t;
        r -= t * b;
    }
    return {q, r};
}

// Monic gcd in K[var] by the Euclidean algorithm.
template <class K>
BasicBiPoly<K> gcd_univar(BasicBiPoly<K> a, BasicBiPoly<K> b, int var) {
    while (!b.is_zero()) {
        auto [q, r] = div_rem_univar(a, b, var);
        a = std::move(b);
        b = std::move(r);
        b.normalize_monic();
    }
    a.normalize_monic();
    return a;
}

// ---------------------------------------------------------------------------
// Content / primitive part with z2 as the main variable.

// Monic gcd (in K[z1]) of the z1-coefficient polynomials; zero input -> 0.
template <class K>
BasicBiPoly<K> content_z2(const BasicBiPoly<K>& p) {
    BasicBiPoly<K> c;
    for (unsigned j = 0; j <= p.deg2(); ++j) {
        auto row = p.coeff_of_z2(j);
        if (row.is_zero()) continue;
        c = c.is_zero() ? row.monic() : gcd_univar(c, row, 1);
        if (c.is_constant() && !c.is_zero()) break;
    }
    return c;
}

template <class K>
BasicBiPoly<K> primitive_z2(const BasicBiPoly<K>& p) {
    if (p.is_zero()) return p;
    return p.divexact(content_z2(p));
}

// Pseudo-remainder of A by B with z2 the main variable:
// lc2(B)^(deg2 A - deg2 B + 1) * A  mod  B, computed without fractions.
template <class K>
BasicBiPoly<K> prem_z2(const BasicBiPoly<K>& A, const BasicBiPoly<K>& B) {
    const unsigned db = B.deg2();
    const auto lcB = B.coeff_of_z2(db);
    const unsigned delta = A.deg2() >= db ? A.deg2() - db : 0;
    BasicBiPoly<K> R = A;
    unsigned steps = 0;
    while (!R.is_zero() && R.deg2() >= db) {
        const unsigned e = R.deg2() - db;
        const auto lcR = R.coeff_of_z2(R.deg2());
        R = lcB * R - lcR * BasicBiPoly<K>::monomial(0, e, K(1)) * B;
        ++steps;
    }
    for (unsigned t = steps; t < delta + 1; ++t) R = lcB * R;
    return R;
}

// ---------------------------------------------------------------------------
// Bivariate gcd: content/primitive split plus the subresultant PRS
// (fraction-free pseudo-remainder chain) on the primitive parts.
// Result is monic in lex order. gcd(p, 0) is the monic form of p;
// gcd(0, 0) is rejected.
template <class K>
BasicBiPoly<K> gcd(const BasicBiPoly<K>& p, const BasicBiPoly<K>& q) {
    if (p.is_zero() && q.is_zero()) throw ZeroPolynomial("gcd(0, 0)");
    if (p.is_zero()) return q.monic();
    if (q.is_zero()) return p.monic();

    const auto cp = content_z2(p);
    const auto cq = content_z2(q);
    auto cg = gcd_univar(cp, cq, 1);

    auto A = p.divexact(cp);
    auto B = q.divexact(cq);
    if (A.deg2() < B.deg2()) std::swap(A, B);
    if (B.deg2() == 0) {
        // Primitive with z2-degree 0 means a unit; the gcd is the content gcd.
        cg.normalize_monic();
        return cg;
    }

    BasicBiPoly<K> g = BasicBiPoly<K>::constant(K(1));
    BasicBiPoly<K> h = BasicBiPoly<K>::constant(K(1));
    while (true) {
        const unsigned delta = A.deg2() - B.deg2();
        BasicBiPoly<K> R = prem_z2(A, B);
        if (R.is_zero()) break;
        if (R.deg2() == 0) {
            // Coprime primitive parts.
            B = BasicBiPoly<K>::constant(K(1));
            break;
        }
        A = B;
        BasicBiPoly<K> denom = g;
        for (unsigned t = 0; t < delta; ++t) denom = denom * h;
        B = R.divexact(denom);
        g = A.coeff_of_z2(A.deg2());
        if (delta >= 1) {
            BasicBiPoly<K> gn = g;
            for (unsigned t = 1; t < delta; ++t) gn = gn * g;
            BasicBiPoly<K> hd = BasicBiPoly<K>::constant(K(1));
            for (unsigned t = 1; t < delta; ++t) hd = hd * h;
            h = gn.divexact(hd);
        }
    }
    auto result = cg * primitive_z2(B);
    result.normalize_monic();
    return result;
}

// ---------------------------------------------------------------------------
// Squarefree decomposition (Yun, characteristic 0): p = unit * prod g_i^e_i
// with the g_i monic (lex), squarefree and pairwise coprime.

template <class K>
struct SquarefreePart {
    BasicBiPoly<K> factor;
    unsigned multiplicity;
};

namespace detail {

// Yun's algorithm with respect to one variable; input must actually
// depend on that variable and (for var = 2) be primitive in z2.
template <class K>
void yun(const BasicBiPoly<K>& f, int var, std::vector<SquarefreePart<K>>& out) {
    const auto df = f.partial(var);
    if (df.is_zero()) return;
    auto c = gcd(f, df);
    auto w = f.divexact(c);
    auto y = df.divexact(c);
    unsigned mult = 1;
    while (!(w.is_constant())) {
        const auto z = y - w.partial(var);
        BasicBiPoly<K> ai = z.is_zero() ? w.monic() : gcd(w, z);
        if (!ai.is_constant()) out.push_back({ai.monic(), mult});
        w = w.divexact(ai);
        if (z.is_zero()) {
            break;
        }
        y = z.divexact(ai);
        ++mult;
    }
}

}  // namespace detail

template <class K>
struct SquarefreeDecomposition {
    K unit;
    std::vector<SquarefreePart<K>> parts;
};

template <class K>
SquarefreeDecomposition<K> squarefree_decompose(const BasicBiPoly<K>& p) {
    if (p.is_zero()) throw ZeroPolynomial("squarefree decomposition of 0");
    SquarefreeDecomposition<K> out;
    out.unit = p.leading().second;
    if (p.is_constant()) return out;

    const auto c = content_z2(p);           // z1-only part, monic
    const auto P = p.divexact(c);           // primitive in z2
    if (!c.is_constant()) detail::yun(c, 1, out.parts);
    if (!P.is_constant()) detail::yun(P, 2, out.parts);

    std::sort(out.parts.begin(), out.parts.end(), [](const SquarefreePart<K>& a, const SquarefreePart<K>& b) {
        if (a.multiplicity != b.multiplicity) return a.multiplicity < b.multiplicity;
        return deterministic_less(a.factor, b.factor);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Text form. Output: terms in descending lex order, explicit '*', powers as
// z1^k, coefficients in the scalar atom syntax ("3", "-1/2i", "(3/2+1/2i)").

template <class K>
std::string to_string(const BasicBiPoly<K>& p) {
    using polyhull::to_string;  // scalar overloads
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& e = it->first;
        const K& c = it->second;
        std::string cs = to_string(c);
        bool neg = false;
        if (!cs.empty() && cs[0] == '-' && cs.find('(') == std::string::npos) {
            neg = true;
            cs = cs.substr(1);
        }
        std::string mono;
        if (e.i > 0) {
            mono = "z1";
            if (e.i > 1) mono += "^" + std::to_string(e.i);
        }
        if (e.j > 0) {
            if (!mono.empty()) mono += "*";
            mono += "z2";
            if (e.j > 1) mono += "^" + std::to_string(e.j);
        }
        std::string body;
        if (mono.empty()) {
            body = cs;
        } else if (cs == "1") {
            body = mono;
        } else {
            body = cs + "*" + mono;
        }
        if (first) {
            out += (neg ? "-" : "") + body;
            first = false;
        } else {
            out += (neg ? " - " : " + ") + body;
        }
    }
    return out;
}

namespace detail {

// Coefficient atom scanned from text: value * i^{has_i} * a^{has_a}.
struct Atom {
    Rat value;
    bool has_i = false;
    bool has_a = false;
};

class PolyLexer {
public:
    explicit PolyLexer(const std::string& raw) {
        for (std::size_t k = 0; k < raw.size(); ++k) {
            if (!std::isspace(static_cast<unsigned char>(raw[k]))) {
                text_ += raw[k];
                cols_.push_back(k);
            }
        }
    }

    bool done() const { return pos_ >= text_.size(); }
    char peek() const { return done() ? '\0' : text_[pos_]; }
    char get() { return done() ? '\0' : text_[pos_++]; }
    std::size_t column() const { return done() ? (cols_.empty() ? 0 : cols_.back() + 1) : cols_[pos_]; }

    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // digits [ '/' digits | '.' digits ]
    Rat number() {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (pos_ == start) throw ParseError("expected a number", column());
        if (peek() == '.' || peek() == '/') {
            char sep = get();
            std::size_t fs = pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            if (pos_ == fs) throw ParseError("expected digits after separator", column());
            (void)sep;
        }
        try {
            return parse_rat(text_.substr(start, pos_ - start));
        } catch (const std::invalid_argument& ex) {
            throw ParseError(ex.what(), cols_[start]);
        }
    }

    // [number] ['i'|'a' in either order]; at least one part present.
    Atom atom() {
        Atom a;
        bool have_num = false;
        if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
            a.value = number();
            have_num = true;
        } else {
            a.value = Rat(1);
        }
        for (int k = 0; k < 2; ++k) {
            if (peek() == 'i' && !a.has_i) {
                get();
                a.has_i = true;
            } else if (peek() == 'a' && !a.has_a) {
                get();
                a.has_a = true;
            }
        }
        if (!have_num && !a.has_i && !a.has_a) throw ParseError("expected a coefficient atom", column());
        return a;
    }

private:
    std::string text_;
    std::vector<std::size_t> cols_;
    std::size_t pos_ = 0;
};

// Recursive-descent parser over the lexer. Grammar:
//   expr    := [sign] term (sign term)*
//   term    := factor (['*'] factor)*          (juxtaposition multiplies)
//   factor  := primary ['^' nonneg-integer]
//   primary := '(' expr ')' | 'z1' | 'z2' | coefficient atom
class PolyParser {
public:
    PolyParser(const std::string& text, unsigned order) : lx_(text), order_(order) {}

    ExtPoly run() {
        if (lx_.done()) throw ParseError("empty polynomial text", 0);
        ExtPoly out = expr();
        if (!lx_.done()) throw ParseError("expected '+' or '-' between terms", lx_.column());
        out.recompute_declared();
        return out;
    }

private:
    CycloElt atom_value(const Atom& a) {
        CycloElt v{GaussRat(a.value)};
        if (a.has_i) v *= CycloElt(GaussRat::i());
        if (a.has_a) {
            if (order_ == 1) throw ParseError("'a' used but no extension order given", lx_.column());
            v *= CycloElt::root_of_unity(order_);
        }
        return v;
    }

    static bool starts_primary(char c) {
        return c == '(' || c == 'z' || c == '.' || c == 'i' || c == 'a' ||
               std::isdigit(static_cast<unsigned char>(c));
    }

    ExtPoly primary() {
        const char c = lx_.peek();
        if (c == '(') {
            lx_.get();
            ExtPoly inner = expr();
            if (!lx_.eat(')')) throw ParseError("expected ')'", lx_.column());
            return inner;
        }
        if (c == 'z') {
            lx_.get();
            const char which = lx_.get();
            if (which != '1' && which != '2') throw ParseError("expected z1 or z2", lx_.column());
            return which == '1' ? ExtPoly::var1() : ExtPoly::var2();
        }
        if (starts_primary(c)) return ExtPoly::constant(atom_value(lx_.atom()));
        throw ParseError("expected a coefficient atom", lx_.column());
    }

    ExtPoly factor() {
        ExtPoly base = primary();
        if (lx_.eat('^')) {
            const Rat e = lx_.number();
            if (e.get_den() != 1 || sgn(e) < 0)
                throw ParseError("exponent must be a nonnegative integer", lx_.column());
            if (e.get_num() > 64) throw ParseError("exponent too large", lx_.column());
            base = base.pow(static_cast<unsigned>(e.get_num().get_si()));
        }
        return base;
    }

    ExtPoly term() {
        ExtPoly prod = factor();
        while (true) {
            if (lx_.eat('*')) {
                prod = prod * factor();
            } else if (starts_primary(lx_.peek())) {
                prod = prod * factor();
            } else {
                return prod;
            }
        }
    }

    ExtPoly expr() {
        ExtPoly sum;
        bool first = true;
        while (true) {
            int sign = 1;
            if (lx_.eat('-')) sign = -1;
            else if (lx_.eat('+')) sign = 1;
            else if (!first) return sum;
            const ExtPoly t = term();
            sum = sign < 0 ? sum - t : sum + t;
            first = false;
        }
    }

    PolyLexer lx_;
    unsigned order_;
};

}  // namespace detail

// Parses the polynomial grammar over the cyclotomic field of the given
// order ('a' in the text means exp(2*pi*i/order)). Full expression grammar:
// sums, differences, products (explicit '*' or juxtaposition), parenthesized
// subexpressions, and nonnegative integer powers, over atoms like 3/2, 0.25,
// i, or a.
inline ExtPoly parse_bipoly_ext(const std::string& text, unsigned order = 1) {
    CycloElt::check_order(order);
    return detail::PolyParser(text, order).run();
}

// Gaussian-rational parse: same grammar without the 'a' symbol.
inline BiPoly parse_bipoly(const std::string& text) {
    ExtPoly p = parse_bipoly_ext(text, 1);
    if (!all_coeffs_gauss(p)) throw ParseError("coefficient outside Q(i)", 0);
    return to_gauss(p);
}

}  // namespace polyhull
