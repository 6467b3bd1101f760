#pragma once

#include "conecontact/poly2.hpp"

#include <optional>
#include <vector>

namespace conecontact {

// GL(2)xGL(2) orbit of the quadratic pair (f2, g2).
enum class PairType { Hyperbolic, Elliptic, Parabolic, InflexionReal, InflexionImaginary, Degenerate };

inline const char* to_string(PairType t) {
    switch (t) {
        case PairType::Hyperbolic: return "Hyperbolic";
        case PairType::Elliptic: return "Elliptic";
        case PairType::Parabolic: return "Parabolic";
        case PairType::InflexionReal: return "InflexionReal";
        case PairType::InflexionImaginary: return "InflexionImaginary";
        case PairType::Degenerate: return "Degenerate";
    }
    return "?";
}

inline Rational factorial(int n) {
    Rational r(1);
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Taylor data of the surface recentred at a base point. The Monge coefficient
// mf[i,j] is the x^i y^j coefficient; the derivative value Df[i,j] is
// i! j! mf[i,j]. Both notations appear in the conditions, so both are exposed.
struct SurfaceJet {
    Poly2 f, g;  // no constant or linear terms; truncated at `order`
    RatPoint2 base;
    int order = 6;
    bool reduced = false;

    Rational mf(int i, int j) const { return f.coeff(i, j); }
    Rational mg(int i, int j) const { return g.coeff(i, j); }
    Rational Df(int i, int j) const { return mf(i, j) * factorial(i) * factorial(j); }
    Rational Dg(int i, int j) const { return mg(i, j) * factorial(i) * factorial(j); }
};

inline SurfaceJet recenter(const Poly2& f, const Poly2& g, const RatPoint2& at, int order = 6) {
    if (order < 6) throw Error("recenter: jet order must be >= 6");
    if (f.has_param() || g.has_param())
        throw Error("recenter: substitute the family parameter first");
    SurfaceJet jet;
    jet.base = at;
    jet.order = order;
    auto shift_and_strip = [&](const Poly2& p) {
        Poly2 s = p.taylor_shift(at).jet(order);
        s.set_term({0, 0, 0}, Rational(0));
        s.set_term({1, 0, 0}, Rational(0));
        s.set_term({0, 1, 0}, Rational(0));
        return s;
    };
    jet.f = shift_and_strip(f);
    jet.g = shift_and_strip(g);
    return jet;
}

inline SurfaceJet recenter(const Poly2& f, const Poly2& g, Point2 at, int order = 6) {
    return recenter(f, g, rationalize(at), order);
}

namespace detail {

// Binary quadratic form q20 x^2 + q11 xy + q02 y^2.
struct QForm {
    Rational q20{0}, q11{0}, q02{0};
    Rational det() const { return q20 * q02 - q11 * q11 / 4; }
    Rational disc() const { return q11 * q11 - 4 * q20 * q02; }
    double scale() const {
        return std::max({std::fabs(to_double(q20)), std::fabs(to_double(q11)), std::fabs(to_double(q02))});
    }
    bool is_zero() const { return q20 == 0 && q11 == 0 && q02 == 0; }
};

inline QForm quadratic_part(const Poly2& p) {
    return {p.coeff(2, 0), p.coeff(1, 1), p.coeff(0, 2)};
}

// Discriminant of the pencil determinant det(s*Qf + t*Qg) as a binary
// quadratic in (s,t): two distinct real roots (>0) at hyperbolic points,
// complex pair (<0) at elliptic ones, a double root (=0) at parabolic ones.
struct Pencil {
    Rational det_f, det_g, cross, delta;
};

inline Pencil pencil_of(const QForm& F, const QForm& G) {
    Pencil p;
    p.det_f = F.det();
    p.det_g = G.det();
    p.cross = F.q20 * G.q02 + F.q02 * G.q20 - F.q11 * G.q11 / 2;
    p.delta = p.cross * p.cross - 4 * p.det_f * p.det_g;
    return p;
}

enum class TolSign { Zero, Borderline, Neg, Pos };

// Relative zero test with a borderline band. tol = 0 tests exactly.
inline TolSign tol_sign(const Rational& value, double scale, double tol, double band = 8.0) {
    if (tol <= 0.0) {
        int s = sign_of(value);
        return s == 0 ? TolSign::Zero : (s > 0 ? TolSign::Pos : TolSign::Neg);
    }
    double v = to_double(value);
    double cut = tol * std::max(scale, 1e-300);
    if (std::fabs(v) <= cut) return TolSign::Zero;
    if (std::fabs(v) <= band * cut) return TolSign::Borderline;
    return v > 0 ? TolSign::Pos : TolSign::Neg;
}

}  // namespace detail

struct PairAnalysis {
    PairType type = PairType::Degenerate;
    bool borderline = false;
    std::vector<PairType> alternatives;  // candidates when borderline
    Rational delta{0};                   // pencil discriminant
    double delta_scale = 0.0;
};

inline PairAnalysis analyze_quadratic_pair(const SurfaceJet& jet, double tol = 0.0) {
    using detail::TolSign;
    detail::QForm F = detail::quadratic_part(jet.f), G = detail::quadratic_part(jet.g);
    PairAnalysis out;
    if (F.is_zero() && G.is_zero()) {
        out.type = PairType::Degenerate;
        return out;
    }
    detail::Pencil pen = detail::pencil_of(F, G);
    out.delta = pen.delta;
    double sF = F.scale(), sG = G.scale();
    out.delta_scale = sF * sF * sG * sG;

    auto dependent_type = [&](const detail::QForm& Q) {
        switch (detail::tol_sign(Q.disc(), Q.scale() * Q.scale(), tol)) {
            case TolSign::Pos: return PairType::InflexionReal;
            case TolSign::Neg: return PairType::InflexionImaginary;
            default: return PairType::Degenerate;  // rank <= 1 common form
        }
    };
    auto independent_type = [&] {
        switch (detail::tol_sign(pen.delta, out.delta_scale, tol)) {
            case TolSign::Pos: return PairType::Hyperbolic;
            case TolSign::Neg: return PairType::Elliptic;
            case TolSign::Zero: return PairType::Parabolic;
            default: return PairType::Degenerate;  // borderline handled by caller
        }
    };

    if (F.is_zero() || G.is_zero()) {
        out.type = dependent_type(F.is_zero() ? G : F);
        return out;
    }
    // cross product of the coefficient vectors; all three vanish iff dependent
    Rational c1 = F.q11 * G.q02 - F.q02 * G.q11;
    Rational c2 = F.q02 * G.q20 - F.q20 * G.q02;
    Rational c3 = F.q20 * G.q11 - F.q11 * G.q20;
    Rational dep = std::max({abs_rat(c1), abs_rat(c2), abs_rat(c3)});
    TolSign dep_sign = detail::tol_sign(dep, sF * sG, tol);
    if (dep_sign == TolSign::Zero) {
        out.type = dependent_type(sF >= sG ? F : G);
        return out;
    }
    TolSign delta_sign = detail::tol_sign(pen.delta, out.delta_scale, tol);
    if (dep_sign == TolSign::Borderline) {
        out.borderline = true;
        out.alternatives = {dependent_type(sF >= sG ? F : G), independent_type()};
        out.type = out.alternatives[1];
        return out;
    }
    if (delta_sign == TolSign::Borderline) {
        out.borderline = true;
        double d = to_double(pen.delta);
        out.alternatives = {PairType::Parabolic, d > 0 ? PairType::Hyperbolic : PairType::Elliptic};
        out.type = out.alternatives[1];
        return out;
    }
    out.type = independent_type();
    return out;
}

inline PairType classify_quadratic_pair(const SurfaceJet& jet, double tol = 0.0) {
    return analyze_quadratic_pair(jet, tol).type;
}

namespace detail {

inline void snap_coeff(Poly2& p, int i, int j, double threshold, const char* what) {
    Rational c = p.coeff(i, j);
    if (c == 0) return;
    if (std::fabs(to_double(c)) > threshold)
        throw Error(std::string("reduction consistency: ") + what + " fails to vanish (" +
                    std::to_string(to_double(c)) + " vs threshold " + std::to_string(threshold) + ")");
    p.set_term({i, j, 0}, Rational(0));
}

}  // namespace detail

// Brings a parabolic jet to the standard 2-jet (f11*xy, g20*x^2) and then
// normalizes f11 = 1, g20 in {1,-1}. All terms up to `order` are transformed
// by the same target recombination and source substitution, so the higher
// coefficients g04, g13, g06, ... can be read off the result.
inline SurfaceJet reduce_parabolic(const SurfaceJet& jet, double tol = 0.0) {
    if (jet.reduced) return jet;
    PairAnalysis an = analyze_quadratic_pair(jet, tol);
    if (an.type != PairType::Parabolic)
        throw Error(std::string("reduce_parabolic: pair is ") + to_string(an.type));

    detail::QForm F = detail::quadratic_part(jet.f), G = detail::quadratic_part(jet.g);
    detail::Pencil pen = detail::pencil_of(F, G);

    // (1) double root of the pencil determinant = the unique degenerate member
    Rational s0, t0;
    if (abs_rat(pen.det_f) >= abs_rat(pen.det_g) && pen.det_f != 0) {
        s0 = -pen.cross;
        t0 = 2 * pen.det_f;
    } else if (pen.det_g != 0) {
        s0 = 2 * pen.det_g;
        t0 = -pen.cross;
    } else {
        throw Error("reduce_parabolic: pencil determinant vanishes identically");
    }

    // (2) target change: g <- degenerate member, f <- whichever of f,g stays
    // independent of it (larger component wins for conditioning)
    double wf = std::fabs(to_double(t0)) * std::max(G.scale(), 1e-300);
    double wg = std::fabs(to_double(s0)) * std::max(F.scale(), 1e-300);
    Poly2 nf = (wf >= wg && t0 != 0) ? jet.f : jet.g;
    Poly2 ng = s0 * jet.f + t0 * jet.g;

    // (3) source substitution sending the repeated linear factor of g2 to x
    detail::QForm N = detail::quadratic_part(ng);
    Rational la, lb;  // L = la*x + lb*y with N = L^2 / leading
    if (abs_rat(N.q20) >= abs_rat(N.q02) && N.q20 != 0) {
        la = N.q20;
        lb = N.q11 / 2;
    } else if (N.q02 != 0) {
        la = N.q11 / 2;
        lb = N.q02;
    } else {
        throw Error("reduce_parabolic: degenerate pencil member is not rank 1");
    }
    Mat2q M = abs_rat(la) >= abs_rat(lb) ? Mat2q{1, -lb / la, 0, 1} : Mat2q{0, 1, 1, -la / lb};
    nf = nf.linear_substitute(M).jet(jet.order);
    ng = ng.linear_substitute(M).jet(jet.order);

    double gs = std::max(detail::quadratic_part(ng).scale(), 1e-300);
    double snap = std::max(tol, 1e-18) * 10 * gs;
    detail::snap_coeff(ng, 1, 1, snap, "g11 after factor alignment");
    detail::snap_coeff(ng, 0, 2, snap, "g02 after factor alignment");
    Rational g20 = ng.coeff(2, 0);
    if (g20 == 0) throw Error("reduce_parabolic: g20 vanished");

    // (4) the double-root condition forces f's y^2 away; shear off f's x^2
    double fs = std::max(detail::quadratic_part(nf).scale(), 1e-300);
    detail::snap_coeff(nf, 0, 2, std::max(tol, 1e-18) * 10 * fs, "f02 under double-root condition");
    nf = (nf - (nf.coeff(2, 0) / g20) * ng).jet(jet.order);
    Rational f11 = nf.coeff(1, 1);
    if (f11 == 0) throw Error("reduce_parabolic: f11 vanished, pair is degenerate");

    SurfaceJet out = jet;
    out.f = nf * (1 / f11);
    out.g = ng * (1 / g20);  // target negation is allowed, so g20 = +1 always
    out.reduced = true;
    return out;
}

// Brings an inflexion jet to 2-jet (xy, 0) for the real type or (x^2+y^2, 0)
// for the imaginary type. The source change needs a square root in general;
// it is taken exactly when rational and to 24 digits otherwise, with the
// off-form residue snapped to zero.
inline SurfaceJet reduce_inflexion(const SurfaceJet& jet, double tol = 0.0) {
    if (jet.reduced) return jet;
    PairAnalysis an = analyze_quadratic_pair(jet, tol);
    if (an.type != PairType::InflexionReal && an.type != PairType::InflexionImaginary)
        throw Error(std::string("reduce_inflexion: pair is ") + to_string(an.type));
    bool real_type = an.type == PairType::InflexionReal;

    Poly2 nf = jet.f, ng = jet.g;
    detail::QForm F = detail::quadratic_part(nf), G = detail::quadratic_part(ng);
    if (F.scale() < G.scale()) {
        std::swap(nf, ng);
        std::swap(F, G);
    }
    if (!G.is_zero()) {
        // g2 is proportional to f2; kill it with a target shear
        Rational lam;
        if (abs_rat(F.q20) >= abs_rat(F.q11) && abs_rat(F.q20) >= abs_rat(F.q02))
            lam = G.q20 / F.q20;
        else if (abs_rat(F.q11) >= abs_rat(F.q02))
            lam = G.q11 / F.q11;
        else
            lam = G.q02 / F.q02;
        ng = (ng - lam * nf).jet(jet.order);
        double snap = std::max(tol, 1e-18) * 10 * std::max(F.scale(), 1e-300);
        detail::snap_coeff(ng, 2, 0, snap, "g20 after proportionality shear");
        detail::snap_coeff(ng, 1, 1, snap, "g11 after proportionality shear");
        detail::snap_coeff(ng, 0, 2, snap, "g02 after proportionality shear");
    }

    Rational A = F.q20, B = F.q11, C = F.q02;
    Mat2q M = Mat2q::identity();
    double radical_snap = std::max(tol, 1e-20);
    if (real_type) {
        if (A == 0 && C == 0) {
            // already B*xy
        } else {
            if (A == 0) {  // swap the axes so the square can be completed in x
                M = M.mul(Mat2q{0, 1, 1, 0});
                std::swap(A, C);
            }
            Mat2q S1{1, -B / (2 * A), 0, 1};
            Rational C1 = C - B * B / (4 * A);
            Rational r = rat_sqrt(-A / C1);
            Mat2q S2{1, 1, r, -r};
            M = M.mul(S1).mul(S2);
        }
        nf = nf.linear_substitute(M).jet(jet.order);
        ng = ng.linear_substitute(M).jet(jet.order);
        double fs = std::max(detail::quadratic_part(nf).scale(), 1e-300);
        detail::snap_coeff(nf, 2, 0, radical_snap * 10 * fs, "f20 after antidiagonalization");
        detail::snap_coeff(nf, 0, 2, radical_snap * 10 * fs, "f02 after antidiagonalization");
        Rational f11 = nf.coeff(1, 1);
        if (f11 == 0) throw Error("reduce_inflexion: f11 vanished");
        nf = nf * (1 / f11);
    } else {
        if (A < 0) {  // make the form positive definite
            nf = -nf;
            A = -A;
            B = -B;
            C = -C;
        }
        Mat2q S1{1, -B / (2 * A), 0, 1};
        Rational C1 = C - B * B / (4 * A);
        Rational r = rat_sqrt(C1 / A);
        Mat2q S2{1, 0, 0, 1 / r};
        M = S1.mul(S2);
        nf = nf.linear_substitute(M).jet(jet.order);
        ng = ng.linear_substitute(M).jet(jet.order);
        nf = nf * (1 / A);
        Rational dev = nf.coeff(0, 2) - 1;
        if (std::fabs(to_double(dev)) > radical_snap * 10)
            throw Error("reduce_inflexion: definite form fails to normalize");
        nf.set_term({0, 2, 0}, Rational(1));
        double fs = 1.0;
        detail::snap_coeff(nf, 1, 1, radical_snap * 10 * fs, "f11 after diagonalization");
    }

    SurfaceJet out = jet;
    out.f = nf;
    out.g = ng;
    out.reduced = true;
    return out;
}

}  // namespace conecontact
