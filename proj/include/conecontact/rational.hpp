#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace conecontact {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational(long long num, long long den = 1) {
    if (den == 0) throw Error("rational: zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

inline BigInt pow10(int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= 10;
    return r;
}

// Exact decimal rounding of a double to `sig` significant digits.
// Newton-located base points pass through here before any exact arithmetic.
inline Rational rationalize(double v, int sig = 12) {
    if (v == 0.0) return Rational(0);
    if (!std::isfinite(v)) throw Error("rationalize: non-finite value");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*e", sig - 1, v);
    // buf looks like "-1.23456789012e-05"
    std::string s(buf);
    bool neg = false;
    std::size_t pos = 0;
    if (s[pos] == '-') { neg = true; ++pos; }
    std::string digits;
    digits.push_back(s[pos]);
    pos += 2;  // skip the '.'
    while (pos < s.size() && s[pos] != 'e' && s[pos] != 'E') digits.push_back(s[pos++]);
    int exp10 = std::stoi(s.substr(pos + 1));
    BigInt mant(digits);
    if (neg) mant = -mant;
    int shift = exp10 - static_cast<int>(digits.size()) + 1;
    if (shift >= 0) return Rational(mant * pow10(shift), 1);
    return Rational(mant, pow10(-shift));
}

// Parses "3", "-1/25", "0.4", "2.5e-3". Division only as a literal a/b.
inline Rational parse_rational(std::string_view s) {
    auto fail = [&] { throw Error("cannot parse rational literal '" + std::string(s) + "'"); };
    std::size_t slash = s.find('/');
    if (slash != std::string_view::npos) {
        std::string num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (num.empty() || den.empty()) fail();
        try {
            BigInt n(num), d(den);
            if (d == 0) fail();
            return Rational(n, d);
        } catch (const std::exception&) { fail(); }
    }
    std::string t(s);
    bool neg = false;
    std::size_t pos = 0;
    if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) neg = (t[pos++] == '-');
    std::string ip, fp;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ip.push_back(t[pos++]);
    if (pos < t.size() && t[pos] == '.') {
        ++pos;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) fp.push_back(t[pos++]);
    }
    int e10 = 0;
    if (pos < t.size() && (t[pos] == 'e' || t[pos] == 'E')) {
        ++pos;
        bool eneg = false;
        if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) eneg = (t[pos++] == '-');
        std::string ed;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ed.push_back(t[pos++]);
        if (ed.empty()) fail();
        e10 = std::stoi(ed);
        if (eneg) e10 = -e10;
    }
    if (pos != t.size() || (ip.empty() && fp.empty())) fail();
    BigInt mant(ip.empty() ? std::string("0") : ip);
    for (char c : fp) { mant *= 10; mant += (c - '0'); }
    int shift = e10 - static_cast<int>(fp.size());
    Rational r = shift >= 0 ? Rational(mant * pow10(shift), 1) : Rational(mant, pow10(-shift));
    return neg ? -r : r;
}

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline int sign_of(const Rational& r) {
    if (r > 0) return 1;
    if (r < 0) return -1;
    return 0;
}

inline Rational abs_rat(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline bool is_perfect_square(const BigInt& n, BigInt& root) {
    if (n < 0) return false;
    root = sqrt(n);
    return root * root == n;
}

// Square root of a nonnegative rational: exact when the value is a perfect
// square, otherwise correctly rounded to `digits` decimal digits.
inline Rational rat_sqrt(const Rational& r, int digits = 24) {
    if (r < 0) throw Error("rat_sqrt: negative argument");
    if (r == 0) return Rational(0);
    BigInt p = numerator(r), q = denominator(r);
    BigInt rp, rq;
    if (is_perfect_square(p, rp) && is_perfect_square(q, rq)) return Rational(rp, rq);
    BigInt scaled = p * q * pow10(2 * digits);
    BigInt s = sqrt(scaled);
    return Rational(s, q * pow10(digits));
}

}  // namespace conecontact
