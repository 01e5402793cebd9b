#include <catch2/catch_amalgamated.hpp>
#include <complex>

#include "polyhull/bipoly.hpp"
#include "polyhull/laurent.hpp"
#include "polyhull/torus_algebra.hpp"

using namespace polyhull;

namespace {

// Small random polynomial over Q(i) with the given degree cap.
BiPoly random_poly(DetRng& rng, unsigned dmax) {
    BiPoly p;
    const unsigned nterms = 2 + static_cast<unsigned>(rng.below(4));
    for (unsigned t = 0; t < nterms; ++t) {
        const unsigned i = static_cast<unsigned>(rng.below(dmax + 1));
        const unsigned j = static_cast<unsigned>(rng.below(dmax + 1));
        p += BiPoly::monomial(i, j, GaussRat(rng.small_rat(), rng.small_rat()));
    }
    return p;
}

GaussRat random_gauss(DetRng& rng) { return GaussRat(rng.small_rat(), rng.small_rat()); }

}  // namespace

TEST_CASE("rational parsing handles integers, fractions and decimals") {
    CHECK(parse_rat("3") == rat(3));
    CHECK(parse_rat("-7/2") == rat(-7, 2));
    CHECK(parse_rat("0.25") == rat(1, 4));
    CHECK(parse_rat("-1.5") == rat(-3, 2));
    CHECK_THROWS(parse_rat("1/0"));
    CHECK_THROWS(parse_rat("x"));
}

TEST_CASE("Gaussian rational field arithmetic is exact") {
    const GaussRat a(rat(3, 2), rat(1, 2));
    const GaussRat b(rat(-1), rat(2));
    CHECK(a + b == GaussRat(rat(1, 2), rat(5, 2)));
    CHECK(a * b == GaussRat(rat(-5, 2), rat(5, 2)));
    CHECK((a / b) * b == a);
    CHECK(a * a.conj() == GaussRat(a.norm()));
    CHECK(to_string(a) == "(3/2+1/2i)");
    CHECK(to_string(GaussRat(rat(0), rat(-2))) == "-2i");
    CHECK_THROWS_AS(a / GaussRat(0), std::domain_error);
}

TEST_CASE("cyclotomic field: order 3 and 6 minimal polynomials") {
    const CycloElt a3 = CycloElt::root_of_unity(3);
    CHECK((a3 * a3 + a3 + CycloElt(1)).is_zero());
    CHECK(a3 * a3 * a3 == CycloElt(1));
    CHECK(a3.conj() == a3 * a3);            // complex conjugate is a^2 = a^-1
    CHECK(a3 * a3.conj() == CycloElt(1));
    CHECK(a3.inverse() == a3.conj());

    const CycloElt a6 = CycloElt::root_of_unity(6);
    CHECK((a6 * a6 - a6 + CycloElt(1)).is_zero());
    CHECK(a6 * a6 * a6 == CycloElt(-1));
    CHECK(a6 * a6 * a6 * a6 * a6 * a6 == CycloElt(1));
    CHECK(a6 * a6.conj() == CycloElt(1));
}

TEST_CASE("cyclotomic field: collapsing orders fold into Q(i)") {
    CHECK(CycloElt::root_of_unity(1) == CycloElt(1));
    CHECK(CycloElt::root_of_unity(2) == CycloElt(-1));
    CHECK(CycloElt::root_of_unity(4) == CycloElt(GaussRat::i()));
    CHECK(CycloElt::root_of_unity(4).is_gauss());
    CHECK_THROWS_AS(CycloElt::root_of_unity(5), ExtensionInsufficient);
    // mixing genuinely different quadratic generators is refused
    CHECK_THROWS_AS(CycloElt::root_of_unity(3) + CycloElt::root_of_unity(6), ExtensionInsufficient);
}

TEST_CASE("cyclotomic numeric embedding matches exp(2*pi*i/order)") {
    for (unsigned ord : {1u, 2u, 3u, 4u, 6u}) {
        const auto v = CycloElt::root_of_unity(ord).value();
        const double th = 2.0 * M_PI / ord;
        CHECK(std::abs(v - std::complex<double>(std::cos(th), std::sin(th))) < 1e-15);
    }
}

TEST_CASE("polynomial text round-trips") {
    const std::string text = "(3/2+1/2i)*z1^2*z2";
    const BiPoly p = parse_bipoly(text);
    CHECK(p.coeff(2, 1) == GaussRat(rat(3, 2), rat(1, 2)));
    CHECK(to_string(p) == text);

    for (const std::string s : {"z1^2*z2 - z1^2 - z1*z2^2 + z1 + z2^2 - z2", "0", "-1/2", "i*z1 + 2", "z1*z2 - 1"}) {
        CHECK(to_string(parse_bipoly(s)) == s);
    }

    // lenient input forms normalize on output
    CHECK(to_string(parse_bipoly("2z1 + z1")) == "3*z1");
    CHECK(to_string(parse_bipoly("z2*z2*z2")) == "z2^3");
    CHECK(to_string(parse_bipoly("(1/2)*z1 + (1/2)*z1")) == "z1");
}

TEST_CASE("polynomial text with an adjoined root of unity") {
    const ExtPoly q = parse_bipoly_ext("z1 - a*z2", 3);
    CHECK(q.coeff(0, 1) == -CycloElt::root_of_unity(3));
    CHECK(to_string(q) == "z1 - a*z2");
    const ExtPoly r = parse_bipoly_ext("z1 + (1+a)*z2", 6);
    CHECK(to_string(r) == "z1 + (1+a)*z2");
}

TEST_CASE("parenthesized subexpressions, products, and powers parse exactly") {
    CHECK(parse_bipoly("(z1 - z2)*(z1 - 1)*(z2 - 1)") ==
          parse_bipoly("z1 - 1") * parse_bipoly("z2 - 1") * parse_bipoly("z1 - z2"));
    CHECK(parse_bipoly("(z1 + z2)^2") == parse_bipoly("z1^2 + 2*z1*z2 + z2^2"));
    CHECK(parse_bipoly("2(z1 + 1)z2") == parse_bipoly("2*z1*z2 + 2*z2"));
    CHECK(parse_bipoly("-(z1 - z2)") == parse_bipoly("z2 - z1"));
    CHECK(parse_bipoly("((z1))") == parse_bipoly("z1"));
    CHECK(parse_bipoly("(z1 + z2)*(z1 - z2) + z2^2") == parse_bipoly("z1^2"));
    CHECK(parse_bipoly_ext("(z1 - a*z2)*(z1 + (1+a)*z2)", 3) ==
          parse_bipoly_ext("z1 - a*z2", 3) * parse_bipoly_ext("z1 + (1+a)*z2", 3));
    CHECK_THROWS_AS(parse_bipoly("(z1"), ParseError);
    CHECK_THROWS_AS(parse_bipoly("(z1))"), ParseError);
    CHECK_THROWS_AS(parse_bipoly("z1*"), ParseError);
    CHECK_THROWS_AS(parse_bipoly("()"), ParseError);
}

TEST_CASE("complex literals parse for query points") {
    CHECK(parse_complex("1") == std::complex<double>(1.0, 0.0));
    CHECK(parse_complex("-0.5") == std::complex<double>(-0.5, 0.0));
    CHECK(parse_complex("2i") == std::complex<double>(0.0, 2.0));
    CHECK(parse_complex("i") == std::complex<double>(0.0, 1.0));
    CHECK(parse_complex("-i") == std::complex<double>(0.0, -1.0));
    CHECK(parse_complex("1+2i") == std::complex<double>(1.0, 2.0));
    CHECK(parse_complex("-1.5 - 0.25i") == std::complex<double>(-1.5, -0.25));
    CHECK(parse_complex("1e-2+2e-3i") == std::complex<double>(1e-2, 2e-3));
    CHECK_THROWS_AS(parse_complex(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_complex("1+2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_complex("xi"), std::invalid_argument);
}

TEST_CASE("parse errors carry a column position") {
    CHECK_THROWS_AS(parse_bipoly(""), ParseError);
    CHECK_THROWS_AS(parse_bipoly("z3"), ParseError);
    CHECK_THROWS_AS(parse_bipoly("z1 + "), ParseError);
    CHECK_THROWS_AS(parse_bipoly("z1^-1"), ParseError);
    CHECK_THROWS_AS(parse_bipoly("(1+j)"), ParseError);
    CHECK_THROWS_AS(parse_bipoly("a*z1"), ParseError);  // no extension order given
    try {
        parse_bipoly("z1 + $");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.column == 5);
    }
}

TEST_CASE("ring laws hold on random polynomials") {
    DetRng rng(20240817);
    for (int round = 0; round < 20; ++round) {
        const BiPoly p = random_poly(rng, 3), q = random_poly(rng, 3), r = random_poly(rng, 3);
        CHECK(p + q == q + p);
        CHECK((p + q) + r == p + (q + r));
        CHECK(p * q == q * p);
        CHECK((p * q) * r == p * (q * r));
        CHECK(p * (q + r) == p * q + p * r);
        CHECK(p - p == BiPoly());
        CHECK(p * BiPoly() == BiPoly());
    }
}

TEST_CASE("declared bidegree: max under addition, sum under product") {
    const BiPoly p = parse_bipoly("z1^2 + z2");   // declared (2,1)
    const BiPoly q = parse_bipoly("z1*z2^3");     // declared (1,3)
    const auto s = p + q;
    CHECK(s.declared_m() == 2);
    CHECK(s.declared_n() == 3);
    const auto t = p * q;
    CHECK(t.declared_m() == 3);
    CHECK(t.declared_n() == 4);
    // cancellation keeps the declared bound, never under-declares
    const auto c = parse_bipoly("z1^2") - parse_bipoly("z1^2 - z2");
    CHECK(c.deg1() == 0);
    CHECK(c.declared_m() == 2);
    CHECK_THROWS_AS(parse_bipoly("z1^2").with_declared(1, 0), PreconditionViolation);
    CHECK(parse_bipoly("z1").with_declared(3, 2).declared_n() == 2);
}

TEST_CASE("partial derivative satisfies the product rule") {
    DetRng rng(7);
    for (int round = 0; round < 10; ++round) {
        const BiPoly p = random_poly(rng, 3), q = random_poly(rng, 3);
        for (int var : {1, 2}) {
            CHECK((p * q).partial(var) == p.partial(var) * q + p * q.partial(var));
        }
    }
    CHECK(parse_bipoly("z1^3*z2").partial(1) == parse_bipoly("3*z1^2*z2"));
    CHECK(parse_bipoly("z1^3*z2").partial(2) == parse_bipoly("z1^3"));
}

TEST_CASE("exact evaluation agrees with the double-precision path") {
    DetRng rng(99);
    for (int round = 0; round < 8; ++round) {
        const BiPoly p = random_poly(rng, 4);
        for (int pt = 0; pt < 5; ++pt) {
            const GaussRat x = random_gauss(rng), y = random_gauss(rng);
            const auto exact = p.eval_exact(x, y).value();
            const auto fp = p.eval(x.value(), y.value());
            CHECK(std::abs(exact - fp) <= 1e-9 * (1.0 + std::abs(exact)));
        }
    }
}

TEST_CASE("substitution composes polynomials") {
    // p(u, v) = u^2 + v at (u, v) = (z1 + z2, z1*z2)
    const BiPoly p = parse_bipoly("z1^2 + z2");
    const auto composed = p.substitute(parse_bipoly("z1 + z2"), parse_bipoly("z1*z2"));
    CHECK(composed == parse_bipoly("z1^2 + 3*z1*z2 + z2^2"));
    const auto swapped = parse_bipoly("z1^2*z2 - z1").swap_vars();
    CHECK(swapped == parse_bipoly("z1*z2^2 - z2"));
}

TEST_CASE("exact single-divisor division") {
    const BiPoly p = parse_bipoly("z1*z2 - z1 - z2 + 1");   // (z1-1)(z2-1)
    const BiPoly d = parse_bipoly("z1 - 1");
    REQUIRE(p.try_divide(d).has_value());
    CHECK(*p.try_divide(d) == parse_bipoly("z2 - 1"));
    CHECK_FALSE(parse_bipoly("z1^2 + z2").try_divide(parse_bipoly("z1 + 1")).has_value());
    CHECK_THROWS_AS(p.try_divide(BiPoly()), ZeroPolynomial);
    DetRng rng(123);
    for (int round = 0; round < 10; ++round) {
        const BiPoly a = random_poly(rng, 3);
        BiPoly b = random_poly(rng, 2);
        if (b.is_zero()) b = parse_bipoly("z1 + 2");
        CHECK(*(a * b).try_divide(b) == a);
    }
}

TEST_CASE("gcd of polynomials with a shared univariate factor") {
    const BiPoly p = parse_bipoly("z1*z2 - z1 - z2 + 1");       // (z1-1)(z2-1)
    const BiPoly q = parse_bipoly("z1^2*z2 + z1 - z1*z2 - 1");  // (z1-1)(z1*z2+1)
    CHECK(gcd(p, q) == parse_bipoly("z1 - 1"));
}

TEST_CASE("gcd of polynomials with a shared bivariate factor") {
    const BiPoly f = parse_bipoly("z1*z2 + 1");
    const BiPoly p = f * parse_bipoly("z1 + z2");
    const BiPoly q = f * parse_bipoly("z1 - z2");
    CHECK(gcd(p, q) == f);
    CHECK(gcd(p, BiPoly()) == p.monic());
    CHECK_THROWS_AS(gcd(BiPoly(), BiPoly()), ZeroPolynomial);
}

TEST_CASE("gcd properties on random products") {
    DetRng rng(4242);
    for (int round = 0; round < 8; ++round) {
        BiPoly g = random_poly(rng, 2);
        if (g.is_zero() || g.is_constant()) g = parse_bipoly("z1*z2 + 3");
        BiPoly a = random_poly(rng, 2), b = random_poly(rng, 2);
        if (a.is_zero()) a = parse_bipoly("z1");
        if (b.is_zero()) b = parse_bipoly("z2");
        const auto d = gcd(a * g, b * g);
        // g divides the gcd, and the gcd divides both products
        CHECK(d.try_divide(g.monic()).has_value());
        CHECK((a * g).try_divide(d).has_value());
        CHECK((b * g).try_divide(d).has_value());
        // monic in lex order
        CHECK(d.leading().second == GaussRat(1));
    }
}

TEST_CASE("squarefree decomposition separates multiplicities") {
    const BiPoly g1 = parse_bipoly("z1*z2 + 1");
    const BiPoly g2 = parse_bipoly("z1 - 1");
    const auto sf = squarefree_decompose(g1 * g2 * g2);
    REQUIRE(sf.parts.size() == 2);
    CHECK(sf.unit == GaussRat(1));
    CHECK(sf.parts[0].factor == g1);
    CHECK(sf.parts[0].multiplicity == 1);
    CHECK(sf.parts[1].factor == g2);
    CHECK(sf.parts[1].multiplicity == 2);

    const auto sf2 = squarefree_decompose(GaussRat(3) * parse_bipoly("z2 - 1").pow(3));
    REQUIRE(sf2.parts.size() == 1);
    CHECK(sf2.unit == GaussRat(3));
    CHECK(sf2.parts[0].factor == parse_bipoly("z2 - 1"));
    CHECK(sf2.parts[0].multiplicity == 3);

    CHECK_THROWS_AS(squarefree_decompose(BiPoly()), ZeroPolynomial);
}

TEST_CASE("squarefree decomposition reconstructs its input") {
    DetRng rng(31337);
    for (int round = 0; round < 6; ++round) {
        BiPoly a = random_poly(rng, 2), b = random_poly(rng, 2);
        if (a.is_zero() || a.is_constant()) a = parse_bipoly("z1 + z2");
        if (b.is_zero() || b.is_constant()) b = parse_bipoly("z1*z2 - 2");
        const BiPoly p = a * a * b;
        const auto sf = squarefree_decompose(p);
        BiPoly rebuilt = BiPoly::constant(sf.unit);
        for (const auto& part : sf.parts) rebuilt = rebuilt * part.factor.pow(part.multiplicity);
        CHECK(rebuilt == p);
        for (const auto& part : sf.parts) {
            // each part is squarefree: coprime with the derivative in its
            // main variable (z2 when present, else z1)
            const int var = part.factor.deg2() > 0 ? 2 : 1;
            CHECK(gcd(part.factor, part.factor.partial(var)).is_constant());
        }
    }
}

TEST_CASE("Laurent fractions normalize and evaluate") {
    const LaurentRat f(parse_bipoly("z1^2*z2"), 1, 2);
    CHECK(f.num == parse_bipoly("z1"));
    CHECK(f.pole1 == 0);
    CHECK(f.pole2 == 1);

    const LaurentRat one_over_z1(parse_bipoly("1"), 1, 0);
    const LaurentRat one_over_z2(parse_bipoly("1"), 0, 1);
    const auto sum = one_over_z1 + one_over_z2;
    CHECK(sum.num == parse_bipoly("z1 + z2"));
    CHECK(sum.pole1 == 1);
    CHECK(sum.pole2 == 1);

    // equality is exact as rational functions
    CHECK(sum == LaurentRat(parse_bipoly("z1^2 + z1*z2"), 2, 1));

    // quotient-rule derivative: d/dz1 (1/z1) = -1/z1^2
    const auto d = one_over_z1.partial(1);
    CHECK(d == LaurentRat(parse_bipoly("-1"), 2, 0));

    CHECK_THROWS_AS(one_over_z1.eval({0.0, 0.0}, {1.0, 0.0}), PoleAtPoint);
    const auto v = sum.eval({0.5, 0.0}, {0.25, 0.0});
    CHECK(std::abs(v - std::complex<double>(6.0, 0.0)) < 1e-12);
}

TEST_CASE("torus reflection of a bidegree (1,1) polynomial") {
    const BiPoly p = parse_bipoly("z1 + z2 - z1*z2");
    REQUIRE(p.declared_m() == 1);
    REQUIRE(p.declared_n() == 1);
    CHECK(reflect_poly(p) == parse_bipoly("z1 + z2 - 1"));
    // declared bidegree matters: the same terms declared at (2,1) reflect differently
    const auto p21 = p.with_declared(2, 1);
    CHECK(reflect_poly(p21) == parse_bipoly("z1^2 + z1*z2 - z1"));
}

TEST_CASE("boundary conjugate h matches conj(p) on the unit torus") {
    DetRng rng(5150);
    for (int round = 0; round < 5; ++round) {
        BiPoly p = random_poly(rng, 3);
        if (p.is_zero()) p = parse_bipoly("z1");
        const auto h = boundary_h(p);
        for (int k = 0; k < 16; ++k) {
            const double s = 2.0 * M_PI * rng.unit_double();
            const double t = 2.0 * M_PI * rng.unit_double();
            const std::complex<double> z1{std::cos(s), std::sin(s)}, z2{std::cos(t), std::sin(t)};
            const auto lhs = std::conj(p.eval(z1, z2));
            const auto rhs = h.eval(z1, z2);
            CHECK(std::abs(lhs - rhs) <= 1e-11 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("determinant numerator for the symmetrized example") {
    const BiPoly p = parse_bipoly("z1 + z2 - z1*z2");
    const BiPoly expected =
        parse_bipoly("z1 - 1") * parse_bipoly("z2 - 1") * parse_bipoly("z1 - z2");
    CHECK(delta_numerator(p) == expected);
    CHECK_FALSE(delta_degenerate(p));
}

TEST_CASE("determinant numerator matches the Laurent determinant") {
    DetRng rng(808);
    for (int round = 0; round < 6; ++round) {
        BiPoly p = random_poly(rng, 3);
        if (p.is_zero()) p = parse_bipoly("z1 + 2*z2");
        const auto h = boundary_h(p);
        const auto direct = LaurentRat::from_poly(p.partial(1)) * h.partial(2) -
                            LaurentRat::from_poly(p.partial(2)) * h.partial(1);
        CHECK(delta(p) == direct);
    }
}

TEST_CASE("a unimodular monomial has identically vanishing determinant") {
    CHECK(delta_degenerate(parse_bipoly("z1*z2")));
    CHECK(delta_degenerate(parse_bipoly("i*z1^2*z2")));
    CHECK(delta_degenerate(parse_bipoly("3")));
}

TEST_CASE("conjugation residual and X membership") {
    const BiPoly p = parse_bipoly("z1 + z2 - z1*z2");
    // On the vertical line z1 = 1 the residual vanishes
    const PointC2 on{{1.0, 0.0}, {0.5, 0.0}};
    CHECK(x_residual(p, on) < 1e-12);
    CHECK(in_x(p, on, 1e-9));
    // At the bidisc center hull candidate fails: |conj p - h| = 3/4
    const PointC2 off{{0.5, 0.0}, {0.5, 0.0}};
    CHECK(std::abs(x_residual(p, off) - 0.75) < 1e-12);
    CHECK_FALSE(in_x(p, off, 1e-9));
    // torus points are excluded from the domain even with zero residual
    const PointC2 torus{{1.0, 0.0}, {1.0, 0.0}};
    CHECK_FALSE(in_x(p, torus, 1e-9));
    // axis points are excluded
    const PointC2 axis{{0.0, 0.0}, {0.5, 0.0}};
    CHECK_FALSE(in_x(p, axis, 1e-9));
}

TEST_CASE("deterministic RNG streams are reproducible") {
    DetRng a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int k = 0; k < 64; ++k) {
        const auto va = a.next(), vb = b.next(), vc = c.next();
        all_equal = all_equal && (va == vb);
        any_diff = any_diff || (va != vc);
    }
    CHECK(all_equal);
    CHECK(any_diff);
    DetRng d(7);
    for (int k = 0; k < 100; ++k) {
        const double u = d.unit_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK_FALSE(d.small_rat() == 0);
    }
}
