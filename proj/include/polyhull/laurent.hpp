#pragma once

#include <complex>
#include <string>

#include "bipoly.hpp"
#include "errors.hpp"

namespace polyhull {

// Numeric guard band around the coordinate axes: evaluating a Laurent
// fraction with a pole in z_k at a point with |z_k| below this is refused.
inline constexpr double kPoleBand = 1e-12;

// Laurent fraction N(z1,z2) / (z1^a * z2^b), normalized so the numerator is
// not divisible by z1 when a > 0 (and likewise for z2/b).
template <class K>
struct BasicLaurent {
    BasicBiPoly<K> num;
    unsigned pole1 = 0;
    unsigned pole2 = 0;

    BasicLaurent() = default;
    BasicLaurent(BasicBiPoly<K> n, unsigned a, unsigned b) : num(std::move(n)), pole1(a), pole2(b) { normalize(); }

    static BasicLaurent from_poly(const BasicBiPoly<K>& p) { return BasicLaurent(p, 0, 0); }

    bool is_zero() const { return num.is_zero(); }

    void normalize() {
        if (num.is_zero()) {
            pole1 = 0;
            pole2 = 0;
            return;
        }
        const unsigned s1 = std::min(pole1, num.min_deg1());
        const unsigned s2 = std::min(pole2, num.min_deg2());
        if (s1 > 0 || s2 > 0) {
            num = num.divexact(BasicBiPoly<K>::monomial(s1, s2, K(1)));
            pole1 -= s1;
            pole2 -= s2;
        }
    }

    BasicLaurent operator-() const { return BasicLaurent(-num, pole1, pole2); }

    friend BasicLaurent operator+(const BasicLaurent& x, const BasicLaurent& y) {
        const unsigned a = std::max(x.pole1, y.pole1);
        const unsigned b = std::max(x.pole2, y.pole2);
        auto lift = [&](const BasicLaurent& t) {
            return t.num * BasicBiPoly<K>::monomial(a - t.pole1, b - t.pole2, K(1));
        };
        return BasicLaurent(lift(x) + lift(y), a, b);
    }
    friend BasicLaurent operator-(const BasicLaurent& x, const BasicLaurent& y) { return x + (-y); }
    friend BasicLaurent operator*(const BasicLaurent& x, const BasicLaurent& y) {
        return BasicLaurent(x.num * y.num, x.pole1 + y.pole1, x.pole2 + y.pole2);
    }
    friend BasicLaurent operator*(const K& s, const BasicLaurent& x) { return BasicLaurent(s * x.num, x.pole1, x.pole2); }

    // Exact equality as rational functions (cross-multiplied).
    friend bool operator==(const BasicLaurent& x, const BasicLaurent& y) {
        return x.num * BasicBiPoly<K>::monomial(y.pole1, y.pole2, K(1)) ==
               y.num * BasicBiPoly<K>::monomial(x.pole1, x.pole2, K(1));
    }
    friend bool operator!=(const BasicLaurent& x, const BasicLaurent& y) { return !(x == y); }

    // d/dz_var by the quotient rule against the monomial denominator.
    BasicLaurent partial(int var) const {
        if (var == 1) {
            const auto n = BasicBiPoly<K>::var1() * num.partial(1) - K(static_cast<long>(pole1)) * num;
            return BasicLaurent(n, pole1 + 1, pole2);
        }
        const auto n = BasicBiPoly<K>::var2() * num.partial(2) - K(static_cast<long>(pole2)) * num;
        return BasicLaurent(n, pole1, pole2 + 1);
    }

    std::complex<double> eval(const std::complex<double>& z1, const std::complex<double>& z2) const {
        if (pole1 > 0 && std::abs(z1) <= kPoleBand)
            throw PoleAtPoint("Laurent fraction has a z1 pole at this point");
        if (pole2 > 0 && std::abs(z2) <= kPoleBand)
            throw PoleAtPoint("Laurent fraction has a z2 pole at this point");
        std::complex<double> den{1.0, 0.0};
        for (unsigned t = 0; t < pole1; ++t) den *= z1;
        for (unsigned t = 0; t < pole2; ++t) den *= z2;
        const auto v = num.eval(z1, z2) / den;
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericError("Laurent evaluation overflowed");
        return v;
    }
};

using LaurentRat = BasicLaurent<GaussRat>;
using LaurentExt = BasicLaurent<CycloElt>;

template <class K>
std::string to_string(const BasicLaurent<K>& f) {
    if (f.pole1 == 0 && f.pole2 == 0) return to_string(f.num);
    std::string den;
    if (f.pole1 > 0) {
        den = "z1";
        if (f.pole1 > 1) den += "^" + std::to_string(f.pole1);
    }
    if (f.pole2 > 0) {
        if (!den.empty()) den += "*";
        den += "z2";
        if (f.pole2 > 1) den += "^" + std::to_string(f.pole2);
    }
    return "(" + to_string(f.num) + ")/(" + den + ")";
}

}  // namespace polyhull
