#include "conecontact/parser.hpp"

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

using namespace conecontact;
using cctest::P;

TEST_CASE("expression grammar") {
    CHECK(parse_expression("x*y + y^3") == Poly2::monomial(1, 1, 1) + Poly2::monomial(0, 3, 1));
    Poly2 g = parse_expression("x^2+x^2*y^2+x*y^3-(1/2)*y^4+(1/30)*y^5+mu*y^2");
    CHECK(g.param_name().value() == "mu");
    CHECK(g.coeff(0, 4) == rational(-1, 2));
    CHECK(g.coeff(0, 5) == rational(1, 30));
    CHECK(g.coeff(0, 2, 1) == 1);

    CHECK(parse_expression("1/2*y^4") == parse_expression("(1/2)*y^4"));
    CHECK(parse_expression("-y^2") == -parse_expression("y^2"));
    CHECK(parse_expression("(x+y)^2") == parse_expression("x^2+2*x*y+y^2"));
    CHECK(parse_expression("2^3") == Poly2(8));
}

TEST_CASE("rejection cases") {
    CHECK_THROWS_AS(parse_expression("x^(1/2)"), ParseError);
    CHECK_THROWS_AS(parse_expression("x^-2"), ParseError);
    CHECK_THROWS_AS(parse_expression("x +"), ParseError);
    CHECK_THROWS_AS(parse_expression("z*w"), ParseError);  // two unknown symbols
    CHECK_THROWS_AS(parse_expression("x y"), ParseError);  // juxtaposition is not multiplication
    CHECK_THROWS_AS(parse_expression(""), ParseError);
    CHECK_THROWS_AS(parse_expression("x/y"), ParseError);
    try {
        parse_expression("x + @");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.col == 5);
    }
}

TEST_CASE("serialize-parse round trip") {
    cctest::Rng rng(201);
    for (int t = 0; t < 100; ++t) {
        Poly2 p = rng.poly(7, 10);
        CHECK(parse_expression(p.to_string()) == p);
    }
}

TEST_CASE("fuzzing never crashes") {
    std::mt19937 eng(202);
    const std::string alphabet = "xy01/2^*+-() mu.";
    std::uniform_int_distribution<int> len(1, 24);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    int parsed = 0, rejected = 0;
    for (int t = 0; t < 500; ++t) {
        std::string s;
        int n = len(eng);
        for (int k = 0; k < n; ++k) s.push_back(alphabet[pick(eng)]);
        try {
            parse_expression(s);
            ++parsed;
        } catch (const ParseError&) {
            ++rejected;
        } catch (const Error&) {
            ++rejected;
        }
    }
    CHECK(parsed + rejected == 500);
}

TEST_CASE("surface files") {
    std::istringstream ok(
        "# example 1\n"
        "f=x*y+y^3\n"
        "g=x^2+x^2*y^2+x*y^3-1/2*y^4+1/30*y^5+mu*y^2\n"
        "param=mu\n"
        "window=-0.4,0.4,-0.4,0.4\n"
        "grid=512\n");
    SurfaceSpec spec = parse_surface_lines(ok, "test");
    CHECK(spec.param.value() == "mu");
    CHECK(spec.window.grid_n == 512);
    CHECK(spec.f == P("x*y+y^3"));
    CHECK(spec.g.coeff(0, 2, 1) == 1);

    std::istringstream defaults("f=x*y\ng=x^2+y^4\n");
    SurfaceSpec d = parse_surface_lines(defaults, "test");
    CHECK(d.window.pmin == -0.4);
    CHECK(d.window.pmax == 0.4);
    CHECK(d.window.grid_n == 512);
    CHECK(d.jet_order == 6);

    std::istringstream missing("f=x*y\n");
    CHECK_THROWS_AS(parse_surface_lines(missing, "test"), Error);

    std::istringstream dup("f=x\nf=y\ng=x^2\n");
    CHECK_THROWS_AS(parse_surface_lines(dup, "test"), ParseError);

    std::istringstream empty_window("f=x*y\ng=x^2\nwindow=0,0,0,0\n");
    CHECK_THROWS_AS(parse_surface_lines(empty_window, "test"), Error);

    std::istringstream undeclared("f=x*y\ng=x^2+mu*y^2\n");
    CHECK_THROWS_AS(parse_surface_lines(undeclared, "test"), ParseError);
}
