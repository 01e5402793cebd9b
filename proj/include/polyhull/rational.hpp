#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polyhull {

/// Exact rational scalar. All ring/field operations are exact; nothing here
/// ever rounds.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline double to_double(const Rat& r) { return r.get_d(); }

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

/// Parses "p", "p/q", or a decimal like "0.25" (exact: 25/100).
inline Rat parse_rat(const std::string& text) {
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        Rat r;
        if (r.set_str(text, 10) != 0)
            throw std::invalid_argument("parse_rat: bad rational '" + text + "'");
        if (r.get_den() == 0)
            throw std::invalid_argument("parse_rat: zero denominator in '" + text + "'");
        r.canonicalize();
        return r;
    }
    const std::string head = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.find_first_not_of("0123456789") != std::string::npos || frac.empty())
        throw std::invalid_argument("parse_rat: bad decimal '" + text + "'");
    mpz_class scale = 1;
    for (size_t k = 0; k < frac.size(); ++k) scale *= 10;
    const bool neg = !head.empty() && head[0] == '-';
    std::string ipart = neg ? head.substr(1) : (!head.empty() && head[0] == '+' ? head.substr(1) : head);
    if (ipart.empty()) ipart = "0";
    mpz_class ival;
    if (ival.set_str(ipart, 10) != 0)
        throw std::invalid_argument("parse_rat: bad decimal '" + text + "'");
    mpz_class fval;
    if (fval.set_str(frac, 10) != 0)
        throw std::invalid_argument("parse_rat: bad decimal '" + text + "'");
    Rat r(ival * scale + fval, scale);
    r.canonicalize();
    return neg ? Rat(-r) : r;
}

inline std::string to_string(const Rat& r) {
    return r.get_str();
}

/// Deterministic splitmix64 stream; used wherever "random" rationals or
/// angles are called for, so identical seeds give identical runs on any
/// platform (std::uniform_* distributions are not portable).
class DetRng {
  public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound) by rejection-free modulo; bound must be > 0.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    /// Small nonzero rational with numerator in [-range, range] and
    /// denominator in [1, range].
    Rat small_rat(long range = 12) {
        long num = static_cast<long>(below(static_cast<std::uint64_t>(2 * range))) - range;
        if (num == 0) num = 1;
        const long den = static_cast<long>(below(static_cast<std::uint64_t>(range))) + 1;
        return rat(num, den);
    }

    double unit_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

}  // namespace polyhull
