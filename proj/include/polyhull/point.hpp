#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace polyhull {

// A point of C^2 in double precision.
struct PointC2 {
    std::complex<double> z1;
    std::complex<double> z2;
};

// A point of C^3 (used for graphs over C^2 and their images).
struct PointC3 {
    std::complex<double> x1;
    std::complex<double> x2;
    std::complex<double> x3;
};

// L = ({z1 = 0} x closed disc) union (closed disc x {z2 = 0}): the union of
// the two coordinate axis discs inside the closed bidisc.
inline bool in_axis_set(const PointC2& p, double tol) {
    return std::abs(p.z1) <= tol || std::abs(p.z2) <= tol;
}

inline bool on_torus(const PointC2& p, double tol) {
    return std::abs(std::abs(p.z1) - 1.0) <= tol && std::abs(std::abs(p.z2) - 1.0) <= tol;
}

inline bool in_closed_bidisc(const PointC2& p, double tol) {
    return std::abs(p.z1) <= 1.0 + tol && std::abs(p.z2) <= 1.0 + tol;
}

// Membership in the domain where the graph-closure test runs: the closed
// bidisc with both the axis set and the distinguished boundary removed.
inline bool in_x_domain(const PointC2& p, double tol) {
    return in_closed_bidisc(p, tol) && !in_axis_set(p, tol) && !on_torus(p, tol);
}

inline std::string to_string(const std::complex<double>& z) {
    std::string s = std::to_string(z.real());
    s += z.imag() < 0 ? " - " : " + ";
    s += std::to_string(std::abs(z.imag())) + "i";
    return s;
}

inline std::string to_string(const PointC2& p) {
    return "(" + to_string(p.z1) + ", " + to_string(p.z2) + ")";
}

// Parses a complex literal: "1", "-0.5", "2i", "1+2i", "-1.5-0.25i", "i",
// "-i". Spaces are ignored. Throws std::invalid_argument on anything else.
inline std::complex<double> parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t') s += c;
    if (s.empty()) throw std::invalid_argument("empty complex literal");

    // Split at the sign that separates real and imaginary parts: the last
    // '+'/'-' that is not a leading sign and not part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const auto parse_part = [](std::string part, bool imag_unit_ok) -> double {
        if (imag_unit_ok) {
            if (part == "" || part == "+") part = "1";
            else if (part == "-") part = "-1";
        }
        std::size_t used = 0;
        const double v = std::stod(part, &used);
        if (used != part.size()) throw std::invalid_argument("bad complex literal");
        return v;
    };
    if (s.back() == 'i' || s.back() == 'I') {
        s.pop_back();
        if (split == std::string::npos)
            return {0.0, parse_part(s, true)};
        return {parse_part(s.substr(0, split), false), parse_part(s.substr(split), true)};
    }
    if (split != std::string::npos)
        throw std::invalid_argument("complex literal with two parts must end in i");
    return {parse_part(s, false), 0.0};
}

}  // namespace polyhull
