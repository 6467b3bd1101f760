#pragma once

#include "conecontact/rational.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conecontact {

// Base-point parameters on the surface, double precision (tracer side).
struct Point2 {
    double p = 0.0;
    double q = 0.0;
};

// Exact base point for the symbolic side of the pipeline.
struct RatPoint2 {
    Rational p{0};
    Rational q{0};
};

inline RatPoint2 rationalize(Point2 pt, int sig = 12) {
    return {rationalize(pt.p, sig), rationalize(pt.q, sig)};
}

enum class Var { x, y };

// Monomial exponents: x^i y^j times param^k for the optional family parameter.
struct Mono {
    int i = 0;
    int j = 0;
    int k = 0;
    friend bool operator==(const Mono&, const Mono&) = default;
};

// Canonical term order: total xy-degree ascending, then x-exponent
// descending, then parameter power. Fixed so that serialized polynomials are
// byte-stable across runs.
struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const {
        int da = a.i + a.j, db = b.i + b.j;
        if (da != db) return da < db;
        if (a.i != b.i) return a.i > b.i;
        return a.k < b.k;
    }
};

struct Mat2q {
    Rational a{0}, b{0}, c{0}, d{0};  // rows (a b; c d)
    Rational det() const { return a * d - b * c; }
    Mat2q mul(const Mat2q& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    static Mat2q identity() { return {1, 0, 0, 1}; }
};

// Bivariate polynomial with exact rational coefficients. Coefficients may
// themselves be polynomials in one named family parameter; all geometry
// substitutes a rational parameter value first.
class Poly2 {
public:
    Poly2() = default;
    explicit Poly2(const Rational& c) {
        if (c != 0) terms_[{0, 0, 0}] = c;
    }
    Poly2(long long num, long long den = 1) : Poly2(rational(num, den)) {}

    static Poly2 x() { return monomial(1, 0, Rational(1)); }
    static Poly2 y() { return monomial(0, 1, Rational(1)); }
    static Poly2 monomial(int i, int j, const Rational& c) {
        Poly2 p;
        if (c != 0) p.terms_[{i, j, 0}] = c;
        return p;
    }
    static Poly2 param(const std::string& name) {
        Poly2 p;
        p.terms_[{0, 0, 1}] = 1;
        p.param_ = name;
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool has_param() const {
        return std::any_of(terms_.begin(), terms_.end(), [](auto& t) { return t.first.k > 0; });
    }
    const std::optional<std::string>& param_name() const { return param_; }

    int degree() const {
        int d = -1;
        for (auto& [m, c] : terms_) d = std::max(d, m.i + m.j);
        return d;  // -1 for the zero polynomial
    }

    Rational coeff(int i, int j, int k = 0) const {
        auto it = terms_.find({i, j, k});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    const std::map<Mono, Rational, MonoLess>& terms() const { return terms_; }

    Poly2 operator-() const {
        Poly2 r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    Poly2& operator+=(const Poly2& o) {
        merge_param(o);
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly2& operator-=(const Poly2& o) {
        merge_param(o);
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }

    friend Poly2 operator*(const Poly2& a, const Poly2& b) {
        Poly2 r;
        r.param_ = a.param_;
        r.merge_param(b);
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_)
                r.add_term({ma.i + mb.i, ma.j + mb.j, ma.k + mb.k}, ca * cb);
        return r;
    }
    friend Poly2 operator*(const Poly2& a, const Rational& s) {
        Poly2 r;
        r.param_ = a.param_;
        if (s != 0)
            for (auto& [m, c] : a.terms_) r.terms_[m] = c * s;
        return r;
    }
    friend Poly2 operator*(const Rational& s, const Poly2& a) { return a * s; }
    friend Poly2 operator*(const Poly2& a, long long s) { return a * Rational(s); }
    friend Poly2 operator*(long long s, const Poly2& a) { return a * Rational(s); }

    friend bool operator==(const Poly2& a, const Poly2& b) { return a.terms_ == b.terms_; }

    Poly2 pow(int e) const {
        if (e < 0) throw Error("Poly2::pow: negative exponent");
        Poly2 r(Rational(1));
        for (int i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    Poly2 partial(Var v, int order = 1) const {
        Poly2 r = *this;
        for (int n = 0; n < order; ++n) {
            Poly2 d;
            d.param_ = r.param_;
            for (auto& [m, c] : r.terms_) {
                if (v == Var::x && m.i > 0) d.add_term({m.i - 1, m.j, m.k}, c * m.i);
                if (v == Var::y && m.j > 0) d.add_term({m.i, m.j - 1, m.k}, c * m.j);
            }
            r = std::move(d);
        }
        return r;
    }

    // q(x,y) = p(x+a, y+b), exact binomial expansion; degree preserved.
    Poly2 taylor_shift(const RatPoint2& at) const {
        if (at.p == 0 && at.q == 0) return *this;
        int deg = std::max(degree(), 0);
        auto binom = binomial_table(deg);
        std::vector<Rational> pa = power_table(at.p, deg), pb = power_table(at.q, deg);
        Poly2 r;
        r.param_ = param_;
        for (auto& [m, c] : terms_)
            for (int s = 0; s <= m.i; ++s)
                for (int t = 0; t <= m.j; ++t)
                    r.add_term({s, t, m.k}, c * binom[m.i][s] * pa[m.i - s] * binom[m.j][t] * pb[m.j - t]);
        return r;
    }

    // q(x,y) = p(M*(x,y)); requires det M != 0.
    Poly2 linear_substitute(const Mat2q& m) const {
        if (m.det() == 0) throw Error("linear_substitute: singular matrix");
        int deg = std::max(degree(), 0);
        Poly2 lx = monomial(1, 0, m.a) + monomial(0, 1, m.b);
        Poly2 ly = monomial(1, 0, m.c) + monomial(0, 1, m.d);
        std::vector<Poly2> px(deg + 1), py(deg + 1);
        px[0] = Poly2(Rational(1));
        py[0] = Poly2(Rational(1));
        for (int n = 1; n <= deg; ++n) {
            px[n] = px[n - 1] * lx;
            py[n] = py[n - 1] * ly;
        }
        Poly2 r;
        r.param_ = param_;
        for (auto& [mo, c] : terms_) {
            Poly2 t = px[mo.i] * py[mo.j] * c;
            for (auto& [m2, c2] : t.terms_) r.add_term({m2.i, m2.j, mo.k}, c2);
        }
        return r;
    }

    Rational eval(const RatPoint2& at) const {
        if (has_param()) throw Error("eval: polynomial still carries a family parameter");
        int deg = std::max(degree(), 0);
        std::vector<Rational> pa = power_table(at.p, deg), pb = power_table(at.q, deg);
        Rational r(0);
        for (auto& [m, c] : terms_) r += c * pa[m.i] * pb[m.j];
        return r;
    }

    // Exact value together with the sum of term magnitudes: the natural
    // scale against which "vanishes up to cancellation" is decided.
    std::pair<Rational, double> eval_with_scale(const RatPoint2& at) const {
        if (has_param()) throw Error("eval: polynomial still carries a family parameter");
        int deg = std::max(degree(), 0);
        std::vector<Rational> pa = power_table(at.p, deg), pb = power_table(at.q, deg);
        Rational r(0);
        double scale = 0.0;
        for (auto& [m, c] : terms_) {
            Rational term = c * pa[m.i] * pb[m.j];
            r += term;
            scale += std::fabs(to_double(term));
        }
        return {r, scale};
    }

    double eval_double(double px, double py) const;

    // Truncation to total xy-degree <= order (the parameter degree is free).
    Poly2 jet(int order) const {
        Poly2 r;
        r.param_ = param_;
        for (auto& [m, c] : terms_)
            if (m.i + m.j <= order) r.terms_[m] = c;
        return r;
    }

    Poly2 substitute_param(const Rational& value) const {
        Poly2 r;
        std::vector<Rational> pw = power_table(value, max_param_degree());
        for (auto& [m, c] : terms_) r.add_term({m.i, m.j, 0}, c * pw[m.k]);
        return r;
    }

    int max_param_degree() const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.k);
        return d;
    }

    // Divides out the integer content (and clears denominators). The overall
    // sign is preserved: for the parabolic locus it separates the elliptic
    // from the hyperbolic side. Keeps tracer arithmetic well scaled after
    // Eq-squaring blowups.
    Poly2 remove_integer_content() const {
        if (terms_.empty()) return *this;
        BigInt den_lcm = 1, num_gcd = 0;
        for (auto& [m, c] : terms_) den_lcm = lcm(den_lcm, denominator(c));
        Poly2 r;
        r.param_ = param_;
        for (auto& [m, c] : terms_) {
            Rational scaled = c * den_lcm;
            r.terms_[m] = scaled;
            num_gcd = gcd(num_gcd, numerator(scaled));
        }
        if (num_gcd == 0) num_gcd = 1;
        for (auto& [m, c] : r.terms_) c /= Rational(num_gcd);
        return r;
    }

    double max_abs_coeff() const {
        double s = 0.0;
        for (auto& [m, c] : terms_) s = std::max(s, std::fabs(to_double(c)));
        return s;
    }

    std::string to_string(const std::string& xname = "x", const std::string& yname = "y") const;

    void set_term(const Mono& m, const Rational& c) {
        if (c == 0)
            terms_.erase(m);
        else
            terms_[m] = c;
    }

    static std::vector<std::vector<Rational>> binomial_table(int n) {
        std::vector<std::vector<Rational>> b(n + 1);
        for (int r = 0; r <= n; ++r) {
            b[r].assign(r + 1, Rational(1));
            for (int c = 1; c < r; ++c) b[r][c] = b[r - 1][c - 1] + b[r - 1][c];
        }
        return b;
    }

private:
    void add_term(const Mono& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    void merge_param(const Poly2& o) {
        if (!o.param_) return;
        if (!param_) {
            param_ = o.param_;
        } else if (*param_ != *o.param_) {
            throw Error("mixing distinct family parameters '" + *param_ + "' and '" + *o.param_ + "'");
        }
    }

    static std::vector<Rational> power_table(const Rational& v, int n) {
        std::vector<Rational> p(n + 1, Rational(1));
        for (int i = 1; i <= n; ++i) p[i] = p[i - 1] * v;
        return p;
    }

    std::map<Mono, Rational, MonoLess> terms_;
    std::optional<std::string> param_;
};

// Flattened double-precision copy for grid evaluation in the tracer.
struct CompiledPoly {
    struct Term {
        int i, j;
        double c;
    };
    std::vector<Term> terms;
    int max_i = 0, max_j = 0;

    double eval(double x, double y) const {
        double px[64], py[64];
        px[0] = py[0] = 1.0;
        for (int n = 1; n <= max_i; ++n) px[n] = px[n - 1] * x;
        for (int n = 1; n <= max_j; ++n) py[n] = py[n - 1] * y;
        double s = 0.0;
        for (const Term& t : terms) s += t.c * px[t.i] * py[t.j];
        return s;
    }
};

inline CompiledPoly compile(const Poly2& p) {
    if (p.has_param()) throw Error("compile: polynomial still carries a family parameter");
    CompiledPoly cp;
    for (auto& [m, c] : p.terms()) {
        if (m.i >= 64 || m.j >= 64) throw Error("compile: degree too large");
        cp.terms.push_back({m.i, m.j, to_double(c)});
        cp.max_i = std::max(cp.max_i, m.i);
        cp.max_j = std::max(cp.max_j, m.j);
    }
    return cp;
}

inline double Poly2::eval_double(double px, double py) const {
    double s = 0.0;
    for (auto& [m, c] : terms_) {
        if (m.k > 0) throw Error("eval_double: polynomial still carries a family parameter");
        s += to_double(c) * std::pow(px, m.i) * std::pow(py, m.j);
    }
    return s;
}

inline std::string Poly2::to_string(const std::string& xname, const std::string& yname) const {
    if (terms_.empty()) return "0";
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
        bool has_vars = m.i > 0 || m.j > 0 || m.k > 0;
        if (mag != 1 || !has_vars) parts.push_back(conecontact::to_string(mag));
        auto piece = [](const std::string& v, int e) { return e == 1 ? v : v + "^" + std::to_string(e); };
        if (m.k > 0) parts.push_back(piece(param_ ? *param_ : "t", m.k));
        if (m.i > 0) parts.push_back(piece(xname, m.i));
        if (m.j > 0) parts.push_back(piece(yname, m.j));
        for (std::size_t n = 0; n < parts.size(); ++n) {
            if (n) out += "*";
            out += parts[n];
        }
    }
    return out;
}

}  // namespace conecontact
