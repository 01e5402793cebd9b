#pragma once

#include <complex>
#include <string>

#include "polyhull/rational.hpp"

namespace polyhull {

/// Gaussian rational a + b*i with exact rational parts.
struct GaussRat {
    Rat re;
    Rat im;

    GaussRat() : re(0), im(0) {}
    GaussRat(Rat r) : re(std::move(r)), im(0) {}
    GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    GaussRat(long r) : re(r), im(0) {}

    static GaussRat i() { return GaussRat(Rat(0), Rat(1)); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_one() const { return re == 1 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    GaussRat conj() const { return GaussRat(re, Rat(-im)); }

    /// re^2 + im^2, exact.
    Rat norm() const { return Rat(re * re + im * im); }

    std::complex<double> value() const { return {to_double(re), to_double(im)}; }

    GaussRat operator-() const { return GaussRat(Rat(-re), Rat(-im)); }

    GaussRat& operator+=(const GaussRat& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussRat& operator-=(const GaussRat& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussRat& operator*=(const GaussRat& o) {
        Rat nre = re * o.re - im * o.im;
        Rat nim = re * o.im + im * o.re;
        re = std::move(nre);
        im = std::move(nim);
        return *this;
    }

    friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
    friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
    friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }

    friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
        if (b.is_zero()) throw std::domain_error("GaussRat: division by zero");
        const Rat n = b.norm();
        return GaussRat(Rat((a.re * b.re + a.im * b.im) / n),
                        Rat((a.im * b.re - a.re * b.im) / n));
    }
    GaussRat& operator/=(const GaussRat& o) { return *this = *this / o; }

    friend bool operator==(const GaussRat& a, const GaussRat& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

    /// Total order used only for deterministic normalization/sorting.
    friend bool operator<(const GaussRat& a, const GaussRat& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }
};

inline GaussRat conj(const GaussRat& g) { return g.conj(); }

/// Prints minimal exact text: "3", "-1/2", "i", "-2i", "(3/2+1/2i)".
inline std::string to_string(const GaussRat& g) {
    if (sgn(g.im) == 0) return to_string(g.re);
    std::string imag;
    if (g.im == 1)
        imag = "i";
    else if (g.im == -1)
        imag = "-i";
    else
        imag = to_string(g.im) + "i";
    if (sgn(g.re) == 0) return imag;
    std::string out = "(" + to_string(g.re);
    if (sgn(g.im) > 0) out += "+";
    out += imag + ")";
    return out;
}

}  // namespace polyhull
