#pragma once

#include "conecontact/poly2.hpp"
#include "conecontact/window.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace conecontact {

struct ParseError : Error {
    int line = 1;
    int col = 1;
    ParseError(const std::string& msg, int line_, int col_)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_),
          col(col_) {}
};

struct SurfaceSpec {
    Poly2 f, g;
    std::optional<std::string> param;
    Window window;
    int jet_order = 6;
};

namespace detail {

// Recursive-descent parser for the strict arithmetic subset:
//   expr   := term (('+'|'-') term)*
//   term   := unary ('*' unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' nonneg-integer)?
//   atom   := rational | 'x' | 'y' | ident | '(' expr ')'
// '/' only occurs inside rational literals ("1/2"). Unary minus binds looser
// than '^', so -y^2 means -(y^2).
class ExprParser {
public:
    ExprParser(std::string_view src, std::optional<std::string> allowed_param, bool adopt_param)
        : src_(src), allowed_(std::move(allowed_param)), adopt_(adopt_param) {}

    Poly2 parse() {
        skip_ws();
        if (eof()) fail("expected expression");
        Poly2 p = expr();
        skip_ws();
        if (!eof()) fail("unexpected trailing input, expected '+', '-', '*' or '^'");
        return p;
    }

private:
    Poly2 expr() {
        Poly2 acc = term();
        for (;;) {
            skip_ws();
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                return acc;
        }
    }

    Poly2 term() {
        Poly2 acc = unary();
        for (;;) {
            skip_ws();
            if (accept('*'))
                acc = acc * unary();
            else
                return acc;
        }
    }

    Poly2 unary() {
        skip_ws();
        if (accept('-')) return -unary();
        return power();
    }

    Poly2 power() {
        Poly2 base = atom();
        skip_ws();
        if (!accept('^')) return base;
        skip_ws();
        int at = col_;
        if (eof() || !std::isdigit(peek())) fail("expected nonnegative integer exponent after '^'", at);
        long long e = 0;
        while (!eof() && std::isdigit(peek())) {
            e = e * 10 + (next() - '0');
            if (e > 64) fail("exponent too large", at);
        }
        if (!eof() && (peek() == '.' || peek() == '/'))
            fail("non-integer exponent", at);
        return base.pow(static_cast<int>(e));
    }

    Poly2 atom() {
        skip_ws();
        if (eof()) fail("expected value, 'x', 'y' or '('");
        char c = peek();
        if (c == '(') {
            next();
            Poly2 p = expr();
            skip_ws();
            if (!accept(')')) fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected character '") + c + "', expected value, 'x', 'y' or '('");
        return {};
    }

    Poly2 number() {
        int at = col_;
        std::string tok;
        auto digits = [&] {
            while (!eof() && std::isdigit(peek())) tok.push_back(next());
        };
        digits();
        if (!eof() && peek() == '.') {
            tok.push_back(next());
            digits();
        }
        if (!eof() && peek() == '/') {
            // rational literal a/b
            std::size_t save = pos_;
            int savec = col_;
            tok.push_back(next());
            if (eof() || !std::isdigit(peek())) {  // '/' was not part of a literal
                pos_ = save;
                col_ = savec;
                tok.pop_back();
            } else {
                digits();
            }
        }
        try {
            return Poly2(parse_rational(tok));
        } catch (const Error&) {
            fail("malformed rational literal '" + tok + "'", at);
        }
        return {};
    }

    Poly2 identifier() {
        int at = col_;
        std::string name;
        while (!eof() && (std::isalnum(peek()) || peek() == '_')) name.push_back(next());
        if (name == "x") return Poly2::x();
        if (name == "y") return Poly2::y();
        if (allowed_ && name == *allowed_) return Poly2::param(name);
        if (!allowed_ && adopt_) {
            allowed_ = name;
            return Poly2::param(name);
        }
        fail("unknown symbol '" + name + "'" +
                 (allowed_ ? " (declared parameter is '" + *allowed_ + "')" : ""),
             at);
        return {};
    }

    [[noreturn]] void fail(const std::string& msg) const { fail(msg, col_); }
    [[noreturn]] void fail(const std::string& msg, int col) const { throw ParseError(msg, line_, col); }

    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }
    char next() {
        ++col_;
        return src_[pos_++];
    }
    bool accept(char c) {
        if (!eof() && peek() == c) {
            next();
            return true;
        }
        return false;
    }
    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) next();
    }

    std::string_view src_;
    std::optional<std::string> allowed_;
    bool adopt_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace detail

// Standalone form: x, y plus at most one other identifier, which becomes the
// family parameter.
inline Poly2 parse_expression(std::string_view src) {
    return detail::ExprParser(src, std::nullopt, true).parse();
}

inline Poly2 parse_expression(std::string_view src, const std::optional<std::string>& declared_param) {
    return detail::ExprParser(src, declared_param, false).parse();
}

// key=value surface files:
//   f=x*y + y^3
//   g=x^2 - 1/2*y^4 + mu*y^2
//   param=mu
//   window=-0.4,0.4,-0.4,0.4
//   grid=512
// Blank lines and '#' comments are ignored. f and g are required; duplicate
// keys are an error.
inline SurfaceSpec parse_surface_lines(std::istream& in, const std::string& origin) {
    std::map<std::string, std::pair<std::string, int>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = line;
        if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
        s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", lineno, 1);
        std::string key = s.substr(0, eq), value = s.substr(eq + 1);
        key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
        value.erase(value.begin(), std::find_if(value.begin(), value.end(), notspace));
        if (kv.count(key)) throw ParseError("duplicate key '" + key + "'", lineno, 1);
        kv[key] = {value, lineno};
    }

    static const std::set<std::string> known = {"f", "g", "param", "window", "grid", "jet_order"};
    for (auto& [k, v] : kv)
        if (!known.count(k)) throw ParseError("unknown key '" + k + "'", v.second, 1);
    if (!kv.count("f")) throw Error(origin + ": missing required key 'f'");
    if (!kv.count("g")) throw Error(origin + ": missing required key 'g'");

    SurfaceSpec spec;
    if (kv.count("param")) {
        spec.param = kv["param"].first;
        if (spec.param->empty() || *spec.param == "x" || *spec.param == "y")
            throw Error(origin + ": invalid parameter name '" + *spec.param + "'");
    }
    auto parse_field = [&](const char* key) {
        try {
            return parse_expression(kv[key].first, spec.param);
        } catch (const ParseError& e) {
            throw ParseError(std::string(key) + ": " + e.what(), kv[key].second, e.col);
        }
    };
    spec.f = parse_field("f");
    spec.g = parse_field("g");
    if (kv.count("window")) {
        std::istringstream ws(kv["window"].first);
        std::string part;
        std::vector<double> vals;
        while (std::getline(ws, part, ',')) vals.push_back(to_double(parse_rational(part)));
        if (vals.size() != 4) throw Error(origin + ": window needs pmin,pmax,qmin,qmax");
        spec.window.pmin = vals[0];
        spec.window.pmax = vals[1];
        spec.window.qmin = vals[2];
        spec.window.qmax = vals[3];
    }
    if (kv.count("grid")) spec.window.grid_n = std::stoi(kv["grid"].first);
    if (kv.count("jet_order")) spec.jet_order = std::stoi(kv["jet_order"].first);
    if (!spec.window.valid()) throw Error(origin + ": empty window");
    if (spec.jet_order < 6) throw Error(origin + ": jet_order must be >= 6");
    return spec;
}

inline SurfaceSpec parse_surface_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open surface file '" + path + "'");
    return parse_surface_lines(in, path);
}

}  // namespace conecontact
