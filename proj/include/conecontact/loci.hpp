#pragma once

#include "conecontact/poly2.hpp"

#include <array>

namespace conecontact {

// The Theta/Phi combinations of second derivatives that drive both loci,
// as polynomials over the parameter plane.
struct PencilInvariants {
    Poly2 theta1, theta2, theta3, phi1, phi2;
};

inline PencilInvariants pencil_invariants(const Poly2& f, const Poly2& g) {
    Poly2 f11 = f.partial(Var::x, 2);
    Poly2 f12 = f.partial(Var::x).partial(Var::y);
    Poly2 f22 = f.partial(Var::y, 2);
    Poly2 g11 = g.partial(Var::x, 2);
    Poly2 g12 = g.partial(Var::x).partial(Var::y);
    Poly2 g22 = g.partial(Var::y, 2);
    PencilInvariants inv;
    inv.theta1 = f12 * g22 - f22 * g12;
    inv.theta2 = f11 * g22 - f22 * g11;
    inv.theta3 = f11 * g12 - f12 * g11;
    inv.phi1 = f11 * g11 * g22 - 2 * f11 * g12 * g12 + 2 * f12 * g11 * g12 - f22 * g11 * g11;
    inv.phi2 = f11 * g11 * f22 - 2 * f12 * f12 * g11 + 2 * f11 * f12 * g12 - f11 * f11 * g22;
    return inv;
}

// Global equation of the parabolic set:
//   (f_xx g_yy - f_yy g_xx)^2 - 4 (f_xy g_yy - f_yy g_xy)(f_xx g_xy - f_xy g_xx)
// returned as LHS - RHS over the parameter plane.
inline Poly2 parabolic_locus(const Poly2& f, const Poly2& g) {
    Poly2 fxx = f.partial(Var::x, 2), fxy = f.partial(Var::x).partial(Var::y), fyy = f.partial(Var::y, 2);
    Poly2 gxx = g.partial(Var::x, 2), gxy = g.partial(Var::x).partial(Var::y), gyy = g.partial(Var::y, 2);
    Poly2 lhs = fxx * gyy - fyy * gxx;
    return lhs * lhs - 4 * (fxy * gyy - fyy * gxy) * (fxx * gxy - fxy * gxx);
}

// The additional locus through the special parabolic points: the ten-term
// Theta/Phi contraction against the fourth derivatives.
inline Poly2 special_locus(const Poly2& f, const Poly2& g) {
    PencilInvariants inv = pencil_invariants(f, g);
    auto d4 = [](const Poly2& p, int nx, int ny) { return p.partial(Var::x, nx).partial(Var::y, ny); };
    Poly2 f1111 = d4(f, 4, 0), f1112 = d4(f, 3, 1), f1122 = d4(f, 2, 2), f1222 = d4(f, 1, 3),
          f2222 = d4(f, 0, 4);
    Poly2 g1111 = d4(g, 4, 0), g1112 = d4(g, 3, 1), g1122 = d4(g, 2, 2), g1222 = d4(g, 1, 3),
          g2222 = d4(g, 0, 4);
    const Poly2 &t1 = inv.theta1, &t2 = inv.theta2, &t3 = inv.theta3;
    Poly2 s = t1 * t1 * inv.phi1 * f1111;
    s -= 2 * (t1 * t2 * inv.phi1 * f1112);
    s += 6 * (t1 * t3 * inv.phi1 * f1122);
    s -= 2 * (t2 * t3 * inv.phi1 * f1222);
    s += t3 * t3 * inv.phi1 * f2222;
    s += t1 * t1 * inv.phi2 * g1111;
    s -= 2 * (t1 * t2 * inv.phi2 * g1112);
    s += 6 * (t1 * t3 * inv.phi2 * g1122);
    s -= 2 * (t2 * t3 * inv.phi2 * g1222);
    s += t3 * t3 * inv.phi2 * g2222;
    return s;
}

// Height-function route to the parabolic condition: the pencil of Hessians
// H = lambda f + g has a unique non-Morse direction exactly when the
// discriminant of det(lambda Hess f + Hess g) in lambda vanishes.
inline double height_pencil_oracle(const Poly2& f, const Poly2& g, Point2 sample) {
    RatPoint2 at{rationalize(sample.p, 15), rationalize(sample.q, 15)};
    auto d2 = [&](const Poly2& p, int nx, int ny) {
        return to_double(p.partial(Var::x, nx).partial(Var::y, ny).eval(at));
    };
    double fxx = d2(f, 2, 0), fxy = d2(f, 1, 1), fyy = d2(f, 0, 2);
    double gxx = d2(g, 2, 0), gxy = d2(g, 1, 1), gyy = d2(g, 0, 2);
    double a = fxx * fyy - fxy * fxy;
    double b = fxx * gyy + fyy * gxx - 2 * fxy * gxy;
    double c = gxx * gyy - gxy * gxy;
    return b * b - 4 * a * c;
}

}  // namespace conecontact
