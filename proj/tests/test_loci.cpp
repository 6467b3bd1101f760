#include "conecontact/loci.hpp"

#include "conecontact/contact.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace conecontact;
using cctest::P;
using cctest::Rng;

TEST_CASE("parabolic locus examples") {
    Poly2 p1 = parabolic_locus(P("x*y"), P("x^2+y^4"));
    CHECK(p1 == P("96*y^2"));

    CHECK(parabolic_locus(P("x*y"), P("x^2")).is_zero());

    // pencil-discriminant identity: Eq-form equals Theta2^2 - 4 Theta1 Theta3
    Rng rng(401);
    for (int t = 0; t < 10; ++t) {
        Poly2 f = rng.poly(5, 7), g = rng.poly(5, 7);
        PencilInvariants inv = pencil_invariants(f, g);
        CHECK(parabolic_locus(f, g) ==
              inv.theta2 * inv.theta2 - 4 * inv.theta1 * inv.theta3);
    }
}

TEST_CASE("special locus reduction to g2222") {
    // with f11=f22=g12=g22=0 and f12*g11 != 0 the ten-term sum collapses
    Poly2 f = P("x*y");
    CHECK(special_locus(f, P("x^2+y^4")).eval({Rational(0), Rational(0)}) == -384);
    CHECK(special_locus(f, P("x^2+y^6")).eval({Rational(0), Rational(0)}) == 0);

    Rng rng(402);
    for (int t = 0; t < 20; ++t) {
        Rational f12 = rng.nonzero_rational(), g11 = rng.nonzero_rational();
        Rational g04 = (t % 2 == 0) ? rng.small_rational() : Rational(0);
        // odd terms and higher even terms must not disturb the collapse
        Poly2 fr = f12 * P("x*y") + rng.small_rational() * P("x^3") +
                   rng.small_rational() * P("y^3") + rng.small_rational() * P("x*y^3");
        Poly2 gr = g11 * P("x^2") * rational(1, 2) + g04 * P("y^4") +
                   rng.small_rational() * P("x^2*y") + rng.small_rational() * P("x^3*y");
        Rational g2222 = gr.partial(Var::y, 4).eval({Rational(0), Rational(0)});
        Rational expected = -2 * f12 * f12 * f12 * f12 * g11 * g11 * g11 * g2222;
        Rational got = special_locus(fr, gr).eval({Rational(0), Rational(0)});
        CHECK(got == expected);
        CHECK((got == 0) == (g2222 == 0));
    }
}

TEST_CASE("height pencil oracle") {
    Poly2 f = P("x*y"), g = P("x^2+y^4");
    CHECK(std::fabs(height_pencil_oracle(f, g, {1.0, 0.0})) < 1e-12);
    CHECK(std::fabs(height_pencil_oracle(f, g, {0.0, 1.0}) - 96.0) < 1e-9);

    // oracle agrees with the locus polynomial across random samples
    Rng rng(403);
    std::mt19937 eng(404);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    Poly2 fr = rng.poly(4, 6), gr = rng.poly(4, 6);
    Poly2 locus = parabolic_locus(fr, gr);
    CompiledPoly cl = compile(locus);
    for (int t = 0; t < 50; ++t) {
        Point2 s{coord(eng), coord(eng)};
        double via_locus = cl.eval(s.p, s.q);
        double via_height = height_pencil_oracle(fr, gr, s);
        CHECK(std::fabs(via_locus - via_height) <= 1e-9 * std::max(1.0, std::fabs(via_locus)));
    }
}

TEST_CASE("affine invariance of the zero sets") {
    // a target GL(2) recombination multiplies P and S by nonzero constants
    Rng rng(405);
    Poly2 f = P("x*y+y^3"), g = P("x^2+x^2*y^2+x*y^3-1/2*y^4+1/30*y^5-1/25*y^2");
    Poly2 P0 = parabolic_locus(f, g), S0 = special_locus(f, g);
    for (int t = 0; t < 5; ++t) {
        Mat2q m = rng.invertible_matrix();
        Poly2 f2 = m.a * f + m.b * g, g2 = m.c * f + m.d * g;
        Poly2 P2 = parabolic_locus(f2, g2), S2 = special_locus(f2, g2);
        Rational dp = m.det() * m.det();
        CHECK(P2 == dp * P0);  // P is built from 2x2 minors of the pencil
        REQUIRE(!S0.is_zero());
        auto lead = S0.terms().begin()->first;
        Rational ratio = S2.coeff(lead.i, lead.j) / S0.coeff(lead.i, lead.j);
        CHECK(ratio != 0);
        CHECK(S2 == ratio * S0);
    }
}
