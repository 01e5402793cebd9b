#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "errors.hpp"
#include "gauss.hpp"

namespace polyhull {

// Cyclotomic coefficient field Q(i, a) where a = exp(2*pi*i/order).
//
// Supported orders are 1, 2, 4 (where a already lies in Q(i) and elements
// collapse to plain Gaussian rationals) and 3, 6 (a true quadratic extension).
// Elements are stored as c0 + c1*a with c0, c1 Gaussian rationals; for
// collapsing orders c1 is always folded into c0 so representation is unique.
class CycloElt {
public:
    CycloElt() : c0_(), c1_(), ord_(1) {}
    CycloElt(long v) : c0_(v), c1_(), ord_(1) {}          // NOLINT(google-explicit-constructor)
    CycloElt(const Rat& v) : c0_(v), c1_(), ord_(1) {}    // NOLINT(google-explicit-constructor)
    CycloElt(const GaussRat& v) : c0_(v), c1_(), ord_(1) {}  // NOLINT(google-explicit-constructor)

    CycloElt(const GaussRat& c0, const GaussRat& c1, unsigned order) : c0_(c0), c1_(c1), ord_(order) {
        check_order(order);
        fold();
    }

    // The generator a = exp(2*pi*i/order).
    static CycloElt root_of_unity(unsigned order) {
        check_order(order);
        return CycloElt(GaussRat(0), GaussRat(1), order);
    }

    static void check_order(unsigned order) {
        if (order != 1 && order != 2 && order != 3 && order != 4 && order != 6) {
            throw ExtensionInsufficient("unsupported root-of-unity order " + std::to_string(order));
        }
    }

    const GaussRat& c0() const { return c0_; }
    const GaussRat& c1() const { return c1_; }
    unsigned order() const { return ord_; }

    bool is_zero() const { return c0_.is_zero() && c1_.is_zero(); }
    bool is_one() const { return c1_.is_zero() && c0_.is_one(); }
    // True when the element already lies in Q(i).
    bool is_gauss() const { return c1_.is_zero(); }

    // Valid only when is_gauss(); the exact Gaussian-rational value.
    GaussRat gauss_part() const {
        if (!is_gauss()) throw PreconditionViolation("cyclotomic element does not lie in Q(i)");
        return c0_;
    }

    CycloElt operator-() const { return raw(-c0_, -c1_, ord_); }

    CycloElt& operator+=(const CycloElt& o) {
        unsigned ord = merged_order(*this, o);
        c0_ += o.c0_;
        c1_ += o.c1_;
        ord_ = ord;
        fold();
        return *this;
    }
    CycloElt& operator-=(const CycloElt& o) { return *this += -o; }

    CycloElt& operator*=(const CycloElt& o) {
        unsigned ord = merged_order(*this, o);
        // a^2 = t*a + s for the quadratic orders.
        GaussRat t, s;
        quad_rule(ord, t, s);
        GaussRat d0 = c0_ * o.c0_ + s * (c1_ * o.c1_);
        GaussRat d1 = c0_ * o.c1_ + c1_ * o.c0_ + t * (c1_ * o.c1_);
        c0_ = d0;
        c1_ = d1;
        ord_ = ord;
        fold();
        return *this;
    }

    CycloElt inverse() const {
        if (is_zero()) throw std::domain_error("division by zero cyclotomic element");
        if (is_gauss()) return CycloElt(GaussRat(1) / c0_);
        // For a^2 = t*a + s the algebraic conjugate of c0 + c1*a is
        // c0 + c1*(t - a), and the field norm down to Q(i) is
        // c0^2 + t*c0*c1 - s*c1^2.
        GaussRat t, s;
        quad_rule(ord_, t, s);
        GaussRat norm = c0_ * c0_ + t * (c0_ * c1_) - s * (c1_ * c1_);
        return raw((c0_ + t * c1_) / norm, -c1_ / norm, ord_);
    }

    CycloElt& operator/=(const CycloElt& o) { return *this *= o.inverse(); }

    // The Galois conjugation over Q(i): a -> t - a, the other root of the
    // minimal polynomial x^2 - t x - s. Coefficients in Q(i) are fixed.
    CycloElt alg_conj() const {
        if (is_gauss()) return *this;
        GaussRat t, s;
        quad_rule(ord_, t, s);
        return raw(c0_ + t * c1_, -c1_, ord_);
    }

    // Complex conjugation: a bar = a^(-1).
    CycloElt conj() const {
        if (is_gauss()) return CycloElt(c0_.conj());
        GaussRat a0 = c0_.conj();
        GaussRat b = c1_.conj();
        if (ord_ == 3) {
            // a^(-1) = a^2 = -1 - a
            return raw(a0 - b, -b, ord_);
        }
        // ord_ == 6: a^(-1) = 1 - a
        return raw(a0 + b, -b, ord_);
    }

    std::complex<double> value() const {
        std::complex<double> v = c0_.value();
        if (!c1_.is_zero()) {
            double th = 2.0 * M_PI / static_cast<double>(ord_);
            v += c1_.value() * std::complex<double>(std::cos(th), std::sin(th));
        }
        return v;
    }

    bool operator==(const CycloElt& o) const {
        if (c0_ != o.c0_ || !(c1_ == o.c1_)) return false;
        // Distinct quadratic generators are genuinely different numbers.
        if (!c1_.is_zero() && ord_ != o.ord_) return false;
        return true;
    }
    bool operator!=(const CycloElt& o) const { return !(*this == o); }

    // Deterministic total order for sorting (not a numeric order).
    bool operator<(const CycloElt& o) const {
        unsigned lo = c1_.is_zero() ? 0 : ord_;
        unsigned ro = o.c1_.is_zero() ? 0 : o.ord_;
        if (lo != ro) return lo < ro;
        if (!(c0_ == o.c0_)) return c0_ < o.c0_;
        return c1_ < o.c1_;
    }

private:
    static CycloElt raw(const GaussRat& c0, const GaussRat& c1, unsigned ord) {
        CycloElt e;
        e.c0_ = c0;
        e.c1_ = c1;
        e.ord_ = ord;
        e.fold();
        return e;
    }

    static void quad_rule(unsigned ord, GaussRat& t, GaussRat& s) {
        if (ord == 3) {
            t = GaussRat(-1);
            s = GaussRat(-1);
        } else if (ord == 6) {
            t = GaussRat(1);
            s = GaussRat(-1);
        } else {
            // Collapsing orders never reach the quadratic rule (c1 is folded),
            // but define a*a consistently anyway: a is a Gaussian rational u,
            // so a^2 = u*a with s = 0.
            t = collapse_value(ord);
            s = GaussRat(0);
        }
    }

    static GaussRat collapse_value(unsigned ord) {
        switch (ord) {
            case 1: return GaussRat(1);
            case 2: return GaussRat(-1);
            case 4: return GaussRat::i();
            default: throw ExtensionInsufficient("order does not collapse into Q(i)");
        }
    }

    static unsigned merged_order(const CycloElt& a, const CycloElt& b) {
        unsigned la = a.c1_.is_zero() ? 0 : a.ord_;
        unsigned lb = b.c1_.is_zero() ? 0 : b.ord_;
        if (la == 0) return lb == 0 ? 1 : b.ord_;
        if (lb == 0 || la == lb) return a.ord_;
        throw ExtensionInsufficient("mixing roots of unity of different orders");
    }

    void fold() {
        if (!c1_.is_zero() && (ord_ == 1 || ord_ == 2 || ord_ == 4)) {
            c0_ += c1_ * collapse_value(ord_);
            c1_ = GaussRat(0);
        }
        if (c1_.is_zero()) ord_ = std::max(ord_, 1u);
    }

    GaussRat c0_, c1_;
    unsigned ord_;
};

inline CycloElt operator+(CycloElt a, const CycloElt& b) { return a += b; }
inline CycloElt operator-(CycloElt a, const CycloElt& b) { return a -= b; }
inline CycloElt operator*(CycloElt a, const CycloElt& b) { return a *= b; }
inline CycloElt operator/(CycloElt a, const CycloElt& b) { return a /= b; }
inline CycloElt conj(const CycloElt& a) { return a.conj(); }

// Prints in the same atom syntax the polynomial grammar accepts: the four
// rational coordinates over basis {1, i, a, ia}; a single nonzero coordinate
// prints bare, otherwise the sum is parenthesized.
inline std::string to_string(const CycloElt& e) {
    if (e.is_gauss()) return to_string(e.gauss_part());
    struct Coord {
        Rat v;
        const char* suffix;
    };
    Coord coords[4] = {{e.c0().re, ""}, {e.c0().im, "i"}, {e.c1().re, "a"}, {e.c1().im, "ia"}};
    int nonzero = 0;
    for (const auto& c : coords)
        if (!is_zero(c.v)) ++nonzero;
    std::string out;
    bool first = true;
    for (const auto& c : coords) {
        if (is_zero(c.v)) continue;
        std::string mag = to_string(abs(c.v));
        bool neg = c.v < 0;
        std::string atom;
        if (c.suffix[0] != '\0' && mag == "1") {
            atom = c.suffix;
        } else {
            atom = mag + c.suffix;
        }
        if (first) {
            out += (neg ? "-" : "") + atom;
            first = false;
        } else {
            out += (neg ? "-" : "+") + atom;
        }
    }
    if (nonzero <= 1) return out;
    return "(" + out + ")";
}

}  // namespace polyhull
