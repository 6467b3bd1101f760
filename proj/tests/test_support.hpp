#pragma once

#include "conecontact/parser.hpp"
#include "conecontact/poly2.hpp"

#include <random>

namespace cctest {

using namespace conecontact;

// Deterministic generators for property-style tests.
struct Rng {
    std::mt19937 eng;
    explicit Rng(unsigned seed) : eng(seed) {}

    Rational small_rational(int max_num = 9, int max_den = 3) {
        std::uniform_int_distribution<int> num(-max_num, max_num);
        std::uniform_int_distribution<int> den(1, max_den);
        return rational(num(eng), den(eng));
    }

    Rational nonzero_rational(int max_num = 9, int max_den = 3) {
        for (;;) {
            Rational r = small_rational(max_num, max_den);
            if (r != 0) return r;
        }
    }

    Poly2 poly(int max_degree, int terms) {
        std::uniform_int_distribution<int> deg(0, max_degree);
        Poly2 p;
        for (int t = 0; t < terms; ++t) {
            int i = deg(eng), j = deg(eng);
            if (i + j > max_degree) continue;
            p += Poly2::monomial(i, j, small_rational());
        }
        return p;
    }

    RatPoint2 point(int max_num = 9, int max_den = 3) {
        return {small_rational(max_num, max_den), small_rational(max_num, max_den)};
    }

    Mat2q invertible_matrix() {
        for (;;) {
            Mat2q m{small_rational(3, 2), small_rational(3, 2), small_rational(3, 2),
                    small_rational(3, 2)};
            if (m.det() != 0) return m;
        }
    }
};

inline Poly2 P(std::string_view src) { return parse_expression(src); }

}  // namespace cctest
