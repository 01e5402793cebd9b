#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "polyhull/factorizer.hpp"
#include "polyhull/numeric.hpp"
#include "polyhull/torus_algebra.hpp"

using namespace polyhull;

namespace {

std::vector<std::string> factor_texts(const FactorList& fl) {
    std::vector<std::string> out;
    for (const auto& f : fl.factors) out.push_back(to_string(f.q));
    return out;
}

std::map<std::string, unsigned> factor_mults(const FactorList& fl) {
    std::map<std::string, unsigned> out;
    for (const auto& f : fl.factors) out[to_string(f.q)] = f.multiplicity;
    return out;
}

// The spec-level evaluation invariant: 20+ numerically traced points of the
// factor's zero curve must also annihilate the input.
void check_curve_vanishing(const BiPoly& input, const ExtPoly& q) {
    double scale = 0.0;
    for (const auto& [e, c] : input.terms()) scale += std::abs(c.value());
    int hits = 0;
    const bool solve_z2 = q.deg2() > 0;
    const ExtPoly solver = solve_z2 ? q : q.swap_vars();
    for (int k = 0; k < 60 && hits < 20; ++k) {
        const double th = 0.37 * k + 0.19;
        const std::complex<double> x = 0.85 * std::complex<double>(std::cos(th), std::sin(th));
        CVec cs = solver.z2_coeffs_at(x);
        CVec rs;
        try {
            rs = roots_of(cs);
        } catch (const Error&) {
            continue;
        }
        for (auto w : rs) {
            w = newton_polish(cs, w, 6);
            const std::complex<double> z1 = solve_z2 ? x : w;
            const std::complex<double> z2 = solve_z2 ? w : x;
            REQUIRE(std::abs(q.eval(z1, z2)) < 1e-8);
            REQUIRE(std::abs(input.eval(z1, z2)) < 1e-8 * (1.0 + scale));
            if (++hits >= 20) break;
        }
    }
    REQUIRE(hits >= 20);
}

}  // namespace

TEST_CASE("univariate content factors split into exact linear factors") {
    const auto fl = factor(parse_bipoly("z2^4 - 1"));
    CHECK(to_string(fl.unit) == "1");
    CHECK(factor_texts(fl) == std::vector<std::string>{"z2 - 1", "z2 - i", "z2 + i", "z2 + 1"});
    for (const auto& f : fl.factors) {
        CHECK(f.multiplicity == 1);
        CHECK(f.absolute);
    }
    CHECK(fl.product() == to_ext(parse_bipoly("z2^4 - 1")));
}

TEST_CASE("boundary-determinant numerator of z1+z2-z1z2 factors into the three known lines") {
    const BiPoly N = delta_numerator(parse_bipoly("z1 + z2 - z1*z2"));
    const auto fl = factor(N);
    CHECK(to_string(fl.unit) == "1");
    CHECK(factor_texts(fl) == std::vector<std::string>{"z2 - 1", "z1 - 1", "z1 - z2"});
    for (const auto& f : fl.factors) {
        CHECK(f.multiplicity == 1);
        CHECK(f.absolute);
    }
    CHECK(fl.product() == to_ext(N));
    for (const auto& f : fl.factors) check_curve_vanishing(N, f.q);
}

TEST_CASE("numerator of z1+z2-2z1z2 gives one line and the irreducible quadric") {
    const BiPoly N = delta_numerator(parse_bipoly("z1 + z2 - 2*z1*z2"));
    const auto fl = factor(N);
    CHECK(to_string(fl.unit) == "2");
    CHECK(factor_texts(fl) ==
          std::vector<std::string>{"z1 - z2", "z1*z2 - 1/2*z1 - 1/2*z2 + 1"});
    for (const auto& f : fl.factors) {
        CHECK(f.multiplicity == 1);
        CHECK(f.absolute);
    }
    CHECK(fl.product() == to_ext(N));
}

TEST_CASE("numerator of z1+2z2^2 factors into the two parabolic branches") {
    const BiPoly N = delta_numerator(parse_bipoly("z1 + 2*z2^2"));
    const auto fl = factor(N);
    CHECK(to_string(fl.unit) == "-4");
    CHECK(factor_texts(fl) == std::vector<std::string>{"z1 - z2^2", "z1 + z2^2"});
    for (const auto& f : fl.factors) {
        CHECK(f.multiplicity == 1);
        CHECK(f.absolute);
    }
    CHECK(fl.product() == to_ext(N));
    for (const auto& f : fl.factors) check_curve_vanishing(N, f.q);
}

TEST_CASE("numerator of 2(z1^2+z1z2+z2^2) over the cube-root extension gives four lines") {
    const BiPoly N = delta_numerator(parse_bipoly("2*z1^2 + 2*z1*z2 + 2*z2^2"));

    SECTION("base field: the quadratic core stays whole but is flagged non-absolute") {
        const auto fl = factor(N);
        CHECK(to_string(fl.unit) == "-16");
        CHECK(factor_texts(fl) ==
              std::vector<std::string>{"z1 - z2", "z1 + z2", "z1^2 + z1*z2 + z2^2"});
        CHECK(fl.factors[0].absolute);
        CHECK(fl.factors[1].absolute);
        CHECK_FALSE(fl.factors[2].absolute);  // splits into two lines over C
        CHECK(fl.product() == to_ext(N));
    }

    SECTION("with a primitive cube root adjoined, all four lines appear") {
        const auto fl = factor(N, CycloExt{3});
        CHECK(to_string(fl.unit) == "-16");
        CHECK(factor_texts(fl) ==
              std::vector<std::string>{"z1 - z2", "z1 + z2", "z1 - a*z2", "z1 + (1+a)*z2"});
        for (const auto& f : fl.factors) {
            CHECK(f.multiplicity == 1);
            CHECK(f.absolute);
        }
        CHECK(fl.product() == to_ext(N));
        for (const auto& f : fl.factors) check_curve_vanishing(N, f.q);
    }
}

TEST_CASE("multiplicities survive through square-free decomposition") {
    const BiPoly p = parse_bipoly("z1 - 1").pow(2) * parse_bipoly("z1*z2 + 1");
    const auto fl = factor(p);
    CHECK(to_string(fl.unit) == "1");
    CHECK(factor_mults(fl) ==
          std::map<std::string, unsigned>{{"z1 - 1", 2}, {"z1*z2 + 1", 1}});
    CHECK(fl.product() == to_ext(p));
}

TEST_CASE("monomial factors are extracted with their exponents") {
    const BiPoly p = parse_bipoly("z1^2*z2^2 - z1^2*z2");
    const auto fl = factor(p);
    CHECK(to_string(fl.unit) == "1");
    CHECK(factor_mults(fl) ==
          std::map<std::string, unsigned>{{"z1", 2}, {"z2", 1}, {"z2 - 1", 1}});
    CHECK(fl.product() == to_ext(p));
}

TEST_CASE("units and scalar content end up in the unit slot") {
    const auto fl = factor(parse_bipoly("3*z1*z2 + 3"));
    CHECK(to_string(fl.unit) == "3");
    CHECK(factor_texts(fl) == std::vector<std::string>{"z1*z2 + 1"});

    const auto fli = factor(parse_bipoly("(2+i)*z2 - (2+i)"));
    CHECK(to_string(fli.unit) == "(2+i)");
    CHECK(factor_texts(fli) == std::vector<std::string>{"z2 - 1"});
}

TEST_CASE("irreducibility decisions match the known cases") {
    CHECK(is_irreducible(parse_bipoly("z1 + z2 - 2 - 2*z1*z2")));
    CHECK_FALSE(is_irreducible(parse_bipoly("z1^2 - z2^2")));
    CHECK(is_irreducible(parse_bipoly_ext("z1 - a*z2", 3), CycloExt{3}));
    CHECK_THROWS_AS(is_irreducible(parse_bipoly("7")), PreconditionViolation);
}

TEST_CASE("absolute-irreducibility probe flags splits hidden from the working field") {
    SECTION("z1^2 - 2 z2^2 is irreducible over the field but splits over C") {
        const auto fl = factor(parse_bipoly("z1^2 - 2*z2^2"));
        REQUIRE(fl.factors.size() == 1);
        CHECK(to_string(fl.factors[0].q) == "z1^2 - 2*z2^2");
        CHECK_FALSE(fl.factors[0].absolute);
    }
    SECTION("z2^2 - z1 is absolutely irreducible") {
        const auto fl = factor(parse_bipoly("z2^2 - z1"));
        REQUIRE(fl.factors.size() == 1);
        CHECK(to_string(fl.factors[0].q) == "z1 - z2^2");
        CHECK(fl.factors[0].absolute);
    }
}

TEST_CASE("extension-coefficient inputs factor through the Galois norm") {
    const ExtPoly p = parse_bipoly_ext("z1^2 - a*z2^2", 3);
    const auto fl = factor(p, CycloExt{3});
    CHECK(to_string(fl.unit) == "1");
    REQUIRE(fl.factors.size() == 2);
    // z1^2 - a z2^2 = (z1 - (-a^2) z2)(z1 + (-a^2) z2) since (-a^2)^2 = a;
    // in reduced coordinates -a^2 = 1 + a.
    CHECK(factor_texts(fl) == std::vector<std::string>{"z1 + (-1-a)*z2", "z1 + (1+a)*z2"});
    CHECK(fl.product() == p);

    // sixth root of unity: z1^2 - z1 z2 + z2^2 = (z1 - a z2)(z1 - (1-a) z2)
    const auto fl6 = factor(to_ext(parse_bipoly("z1^2 - z1*z2 + z2^2")), CycloExt{6});
    CHECK(factor_texts(fl6) == std::vector<std::string>{"z1 + (-1+a)*z2", "z1 - a*z2"});
    CHECK(fl6.product() == to_ext(parse_bipoly("z1^2 - z1*z2 + z2^2")));
}

TEST_CASE("factor lists of constructed products return exactly the constituents") {
    struct Round {
        BiPoly input;
        std::map<std::string, unsigned> expect;
        std::string unit;
    };
    const BiPoly a = parse_bipoly("z1 - 1"), b = parse_bipoly("z2 - 1");
    const BiPoly c = parse_bipoly("z1 + z2"), d = parse_bipoly("z1*z2 + 1");
    const std::vector<Round> rounds = {
        {b * c * c, {{"z2 - 1", 1}, {"z1 + z2", 2}}, "1"},
        {a * b * d, {{"z1 - 1", 1}, {"z2 - 1", 1}, {"z1*z2 + 1", 1}}, "1"},
        {GaussRat(3) * (c * d * d), {{"z1 + z2", 1}, {"z1*z2 + 1", 2}}, "3"},
        {GaussRat::i() * (a * b * c * d),
         {{"z1 - 1", 1}, {"z2 - 1", 1}, {"z1 + z2", 1}, {"z1*z2 + 1", 1}},
         "i"},
    };
    for (const auto& r : rounds) {
        const auto fl = factor(r.input);
        CHECK(to_string(fl.unit) == r.unit);
        CHECK(factor_mults(fl) == r.expect);
        CHECK(fl.product() == to_ext(r.input));
    }
}

TEST_CASE("factorization output is independent of the seed") {
    const BiPoly N = delta_numerator(parse_bipoly("2*z1^2 + 2*z1*z2 + 2*z2^2"));
    const auto serialize = [](const FactorList& fl) {
        std::string s = to_string(fl.unit);
        for (const auto& f : fl.factors) {
            s += "|" + to_string(f.q) + "^" + std::to_string(f.multiplicity) +
                 (f.absolute ? "!" : "?");
        }
        return s;
    };
    const std::string base = serialize(factor(N, CycloExt{3}));
    CHECK(serialize(factor(N, CycloExt{3}, 1ULL)) == base);
    CHECK(serialize(factor(N, CycloExt{3}, 999ULL)) == base);
    const std::string irr = serialize(factor(parse_bipoly("z1^2 - 2*z2^2")));
    CHECK(serialize(factor(parse_bipoly("z1^2 - 2*z2^2"), CycloExt{}, 7ULL)) == irr);
}

TEST_CASE("degenerate and oversized inputs are refused") {
    CHECK_THROWS_AS(factor(BiPoly{}), ZeroPolynomial);
    CHECK_THROWS_AS(factor(BiPoly::var1().pow(17)), DegreeTooLarge);
    CHECK_THROWS_AS(factor(parse_bipoly("z1 - 2"), CycloExt{5}), ExtensionInsufficient);
    const auto fl = factor(parse_bipoly("5"));
    CHECK(to_string(fl.unit) == "5");
    CHECK(fl.factors.empty());
}
