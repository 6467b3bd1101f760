#pragma once

#include "conecontact/jet.hpp"
#include "conecontact/poly2.hpp"

#include <array>
#include <map>
#include <optional>

namespace conecontact {

struct DegenerateKernelError : Error {
    using Error::Error;
};

// Truncated univariate power series over the rationals.
struct Series {
    static constexpr int kOrder = 5;
    std::array<Rational, kOrder + 1> c{};

    static Series var() {
        Series s;
        s.c[1] = 1;
        return s;
    }
    friend Series operator+(const Series& a, const Series& b) {
        Series r;
        for (int i = 0; i <= kOrder; ++i) r.c[i] = a.c[i] + b.c[i];
        return r;
    }
    friend Series operator-(const Series& a, const Series& b) {
        Series r;
        for (int i = 0; i <= kOrder; ++i) r.c[i] = a.c[i] - b.c[i];
        return r;
    }
    friend Series operator*(const Series& a, const Series& b) {
        Series r;
        for (int i = 0; i <= kOrder; ++i)
            for (int j = 0; i + j <= kOrder; ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }
    friend Series operator*(const Series& a, const Rational& s) {
        Series r;
        for (int i = 0; i <= kOrder; ++i) r.c[i] = a.c[i] * s;
        return r;
    }
    Series abs() const {
        Series r;
        for (int i = 0; i <= kOrder; ++i) r.c[i] = abs_rat(c[i]);
        return r;
    }
    double eval(double t) const {
        double s = 0.0;
        for (int i = kOrder; i >= 0; --i) s = s * t + to_double(c[i]);
        return s;
    }
};

// Polynomial in the cone coordinates (u,v,w) = (x^2, xy, y^2).
class Poly3 {
public:
    using Key = std::array<int, 3>;
    struct KeyLess {  // total degree ascending, u-leading inside a degree
        bool operator()(const Key& a, const Key& b) const {
            int da = a[0] + a[1] + a[2], db = b[0] + b[1] + b[2];
            if (da != db) return da < db;
            return a > b;
        }
    };

    Poly3() = default;

    static Poly3 monomial(int i, int j, int k, const Rational& c) {
        Poly3 p;
        if (c != 0) p.terms_[{i, j, k}] = c;
        return p;
    }

    Rational coeff(int i, int j, int k) const {
        auto it = terms_.find({i, j, k});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, Rational, KeyLess>& terms() const { return terms_; }

    void add(int i, int j, int k, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(Key{i, j, k}, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend Poly3 operator+(const Poly3& a, const Poly3& b) {
        Poly3 r = a;
        for (auto& [m, c] : b.terms_) r.add(m[0], m[1], m[2], c);
        return r;
    }
    friend Poly3 operator*(const Poly3& a, const Rational& s) {
        Poly3 r;
        if (s != 0)
            for (auto& [m, c] : a.terms_) r.terms_[m] = c * s;
        return r;
    }

    double max_abs_coeff() const {
        double s = 0.0;
        for (auto& [m, c] : terms_) s = std::max(s, std::fabs(to_double(c)));
        return s;
    }

    Series eval_series(const Series& u, const Series& v, const Series& w) const {
        std::array<std::array<Series, 4>, 3> pw;
        const Series* vars[3] = {&u, &v, &w};
        for (int n = 0; n < 3; ++n) {
            pw[n][0].c[0] = 1;
            for (int e = 1; e <= 3; ++e) pw[n][e] = pw[n][e - 1] * *vars[n];
        }
        Series r;
        for (auto& [m, c] : terms_) r = r + pw[0][m[0]] * pw[1][m[1]] * pw[2][m[2]] * c;
        return r;
    }

    std::string to_string() const;

private:
    std::map<Key, Rational, KeyLess> terms_;
};

inline std::string Poly3::to_string() const {
    if (terms_.empty()) return "0";
    static const char* names[3] = {"u", "v", "w"};
    std::string out;
    bool first = true;
    for (auto& [m, c] : terms_) {
        Rational mag = abs_rat(c);
        if (first) {
            if (c < 0) out += "-";
            first = false;
        } else {
            out += (c < 0) ? " - " : " + ";
        }
        std::vector<std::string> parts;
        bool has_vars = m[0] + m[1] + m[2] > 0;
        if (mag != 1 || !has_vars) parts.push_back(conecontact::to_string(mag));
        for (int n = 0; n < 3; ++n) {
            if (m[n] == 0) continue;
            parts.push_back(m[n] == 1 ? names[n] : names[n] + ("^" + std::to_string(m[n])));
        }
        for (std::size_t n = 0; n < parts.size(); ++n) {
            if (n) out += "*";
            out += parts[n];
        }
    }
    return out;
}

// Twice the even part of (f,g) at the base point, written through total
// degree 3 in the cone coordinates.
struct UVWMap {
    Poly3 c1, c2;
};

// F_{(p,q)}(x,y) = (f(p+x,q+y)+f(p-x,q-y)-2f(p,q), same for g). Only
// even-total-degree terms survive.
inline std::pair<Poly2, Poly2> contact_family(const Poly2& f, const Poly2& g, const RatPoint2& at) {
    Mat2q neg{-1, 0, 0, -1};
    auto even_double = [&](const Poly2& p) {
        Poly2 h = p.taylor_shift(at);
        Poly2 r = h + h.linear_substitute(neg);
        r.set_term({0, 0, 0}, Rational(0));  // the -2f(p,q) recentring constant
        return r;
    };
    return {even_double(f), even_double(g)};
}

// C(u,v,w) for one component from the derivative values of the recentred jet.
// Quadratic uvw-terms carry the 1/12 even-series weights, cubic ones 1/360.
inline Poly3 uvw_component(const SurfaceJet& jet, bool g_component) {
    auto D = [&](int i, int j) { return g_component ? jet.Dg(i, j) : jet.Df(i, j); };
    Poly3 c;
    c.add(1, 0, 0, D(2, 0));
    c.add(0, 1, 0, 2 * D(1, 1));
    c.add(0, 0, 1, D(0, 2));
    Rational w4 = rational(1, 12);
    c.add(2, 0, 0, w4 * D(4, 0));
    c.add(1, 1, 0, w4 * 4 * D(3, 1));
    c.add(1, 0, 1, w4 * 6 * D(2, 2));
    c.add(0, 1, 1, w4 * 4 * D(1, 3));
    c.add(0, 0, 2, w4 * D(0, 4));
    Rational w6 = rational(1, 360);
    c.add(3, 0, 0, w6 * D(6, 0));
    c.add(2, 1, 0, w6 * 6 * D(5, 1));
    c.add(2, 0, 1, w6 * 15 * D(4, 2));
    c.add(1, 1, 1, w6 * 20 * D(3, 3));
    c.add(1, 0, 2, w6 * 15 * D(2, 4));
    c.add(0, 1, 2, w6 * 6 * D(1, 5));
    c.add(0, 0, 3, w6 * D(0, 6));
    return c;
}

inline UVWMap uvw_jet(const SurfaceJet& jet) {
    if (jet.order < 6) throw Error("uvw_jet: jet order must be >= 6");
    return {uvw_component(jet, false), uvw_component(jet, true)};
}

// Tangency of the solved curve with the cone away from the origin, at series
// parameter t; point coordinates are in (u,v,w).
struct OffOriginTangency {
    double t = 0.0;
    double u = 0.0, v = 0.0, w = 0.0;
    bool real_side = false;  // u >= 0 and w >= 0, i.e. real (x,y)
};

struct ContactData {
    int multiplicity = 2;        // 2, 3, 4; 5 means "5+"
    Rational c2, c3, c4;         // series coefficients of v^2-uw along the curve
    double c2_scale = 0, c3_scale = 0, c4_scale = 0;  // cancellation scales
    int solved[2] = {0, 1};      // eliminated variables (0=u,1=v,2=w)
    int param_var = 2;           // series parameter
    Rational minor_det;          // determinant of the chosen linear minor
    Rational tangency_disc;      // c3^2 - 4 c2 c4: vanishes at moved-off-origin tangency
    std::optional<OffOriginTangency> tangency;  // double root of c2+c3 t+c4 t^2, when c4 != 0
};

// Solves C1=C2=0 for two of (u,v,w) as truncated power series in the third
// and measures the vanishing order of v^2-uw along the solution. The solved
// pair comes from the largest 2x2 linear minor unless forced_param pins the
// series parameter.
inline ContactData cone_contact(const UVWMap& map, double tol = 0.0, int forced_param = -1) {
    // target scaling does not move the solved curve; normalize for tolerances
    Poly3 c1 = map.c1, c2 = map.c2;
    auto normalize = [](Poly3& p) {
        double m = p.max_abs_coeff();
        if (m <= 0.0) return;
        Rational best(0);
        for (auto& [mo, co] : p.terms())
            if (abs_rat(co) > best) best = abs_rat(co);
        p = p * (1 / best);
    };
    normalize(c1);
    normalize(c2);

    Rational L[2][3];
    const Poly3* rows[2] = {&c1, &c2};
    for (int r = 0; r < 2; ++r) {
        L[r][0] = rows[r]->coeff(1, 0, 0);
        L[r][1] = rows[r]->coeff(0, 1, 0);
        L[r][2] = rows[r]->coeff(0, 0, 1);
    }
    double lscale = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 3; ++c) lscale = std::max(lscale, std::fabs(to_double(L[r][c])));

    // minor determinant when the series parameter is t (columns != t solved)
    auto minor_det = [&](int t) {
        int a = t == 0 ? 1 : 0, b = t == 2 ? 1 : 2;
        return L[0][a] * L[1][b] - L[0][b] * L[1][a];
    };
    int param = forced_param;
    if (param < 0) {
        double best = -1.0;
        for (int t = 0; t < 3; ++t) {
            double d = std::fabs(to_double(minor_det(t)));
            if (d > best) {
                best = d;
                param = t;
            }
        }
    }
    Rational det = minor_det(param);
    double det_cut = (tol > 0 ? tol : 1e-12) * std::max(lscale * lscale, 1e-300);
    if (det == 0 || (tol > 0 && std::fabs(to_double(det)) <= det_cut))
        throw DegenerateKernelError("cone_contact: all linear minors are (near-)singular");

    ContactData out;
    out.param_var = param;
    out.solved[0] = param == 0 ? 1 : 0;
    out.solved[1] = param == 2 ? 1 : 2;
    out.minor_det = det;

    Rational A[2][2] = {{L[0][out.solved[0]], L[0][out.solved[1]]},
                        {L[1][out.solved[0]], L[1][out.solved[1]]}};

    // fixed-point series solve: s <- -A^-1 * R(s, t), gaining one order per
    // pass. The residual R is the map minus its linear-in-solved part.
    auto strip_solved_linear = [&](const Poly3& p, int row) {
        Poly3 q = p;
        for (int col : {out.solved[0], out.solved[1]}) {
            int e[3] = {0, 0, 0};
            e[col] = 1;
            q.add(e[0], e[1], e[2], -L[row][col]);
        }
        return q;
    };
    Poly3 n1p = strip_solved_linear(c1, 0), n2p = strip_solved_linear(c2, 1);

    auto solve = [&](const Poly3& N1, const Poly3& N2, const Rational inv[2][2]) {
        Series s1, s2, tser = Series::var();
        std::array<const Series*, 3> slots{};
        slots[out.solved[0]] = &s1;
        slots[out.solved[1]] = &s2;
        slots[param] = &tser;
        for (int pass = 0; pass < Series::kOrder; ++pass) {
            Series r1 = N1.eval_series(*slots[0], *slots[1], *slots[2]);
            Series r2 = N2.eval_series(*slots[0], *slots[1], *slots[2]);
            s1 = r1 * inv[0][0] + r2 * inv[0][1];
            s2 = r1 * inv[1][0] + r2 * inv[1][1];
        }
        Series u = *slots[0], v = *slots[1], w = *slots[2];
        return std::array<Series, 3>{u, v, w};
    };

    Rational inv[2][2] = {{-A[1][1] / det, A[0][1] / det}, {A[1][0] / det, -A[0][0] / det}};
    auto [su, sv, sw] = solve(n1p, n2p, inv);

    // magnitude-bound twin of the same computation: every sign made positive,
    // so cancellations anywhere in the elimination are measured against it
    auto abs_poly = [](const Poly3& p) {
        Poly3 q;
        for (auto& [m, c] : p.terms()) q.add(m[0], m[1], m[2], abs_rat(c));
        return q;
    };
    Rational adet = abs_rat(det);
    Rational ainv[2][2] = {{abs_rat(A[1][1]) / adet, abs_rat(A[0][1]) / adet},
                           {abs_rat(A[1][0]) / adet, abs_rat(A[0][0]) / adet}};
    auto [bu, bv, bw] = solve(abs_poly(n1p), abs_poly(n2p), ainv);

    Series residual = sv * sv - su * sw;
    if (residual.c[0] != 0 || residual.c[1] != 0)
        throw Error("cone_contact: internal series inconsistency");
    out.c2 = residual.c[2];
    out.c3 = residual.c[3];
    out.c4 = residual.c[4];
    Series bound = bv * bv + bu * bw;
    out.c2_scale = to_double(bound.c[2]);
    out.c3_scale = to_double(bound.c[3]);
    out.c4_scale = to_double(bound.c[4]);
    auto is_zero = [&](const Rational& c, double scale) {
        if (tol <= 0.0) return c == 0;
        return std::fabs(to_double(c)) <= tol * scale;
    };
    if (!is_zero(out.c2, out.c2_scale))
        out.multiplicity = 2;
    else if (!is_zero(out.c3, out.c3_scale))
        out.multiplicity = 3;
    else if (!is_zero(out.c4, out.c4_scale))
        out.multiplicity = 4;
    else
        out.multiplicity = 5;

    out.tangency_disc = out.c3 * out.c3 - 4 * out.c2 * out.c4;
    if (!is_zero(out.c4, out.c4_scale)) {
        OffOriginTangency tan;
        tan.t = -to_double(out.c3) / (2.0 * to_double(out.c4));
        tan.u = su.eval(tan.t);
        tan.v = sv.eval(tan.t);
        tan.w = sw.eval(tan.t);
        double eps = 1e-12 * std::max(1.0, std::fabs(tan.u) + std::fabs(tan.w));
        tan.real_side = tan.u >= -eps && tan.w >= -eps;
        out.tangency = tan;
    }
    return out;
}

}  // namespace conecontact
