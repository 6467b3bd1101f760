#pragma once

#include "conecontact/classify.hpp"
#include "conecontact/loci.hpp"
#include "conecontact/poly2.hpp"
#include "conecontact/window.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <thread>
#include <vector>

namespace conecontact {

inline double dist(Point2 a, Point2 b) { return std::hypot(a.p - b.p, a.q - b.q); }

inline int thread_count() {
    static int n = [] {
        if (const char* env = std::getenv("CONE_CONTACT_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1) return std::min(v, 64);
        }
        unsigned hw = std::thread::hardware_concurrency();
        return static_cast<int>(std::clamp(hw, 1u, 8u));
    }();
    return n;
}

template <typename F>
void parallel_rows(int rows, F&& body) {
    int nt = std::min(thread_count(), rows);
    if (nt <= 1) {
        for (int r = 0; r < rows; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            for (int r = t; r < rows; r += nt) body(r);
        });
    for (auto& th : pool) th.join();
}

struct GridField {
    Window win;
    std::vector<double> v;  // (grid_n+1)^2 node values, row-major in j
    double maxabs = 0.0;
    int n() const { return win.grid_n; }
    double at(int i, int j) const { return v[static_cast<std::size_t>(j) * (n() + 1) + i]; }
    double px(int i) const { return win.pmin + (win.pmax - win.pmin) * i / n(); }
    double qy(int j) const { return win.qmin + (win.qmax - win.qmin) * j / n(); }
};

inline GridField evaluate_grid(const CompiledPoly& cp, const Window& win) {
    GridField gf;
    gf.win = win;
    int n = win.grid_n;
    gf.v.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
    std::vector<double> rowmax(n + 1, 0.0);
    parallel_rows(n + 1, [&](int j) {
        double y = gf.qy(j);
        double m = 0.0;
        for (int i = 0; i <= n; ++i) {
            double val = cp.eval(gf.px(i), y);
            gf.v[static_cast<std::size_t>(j) * (n + 1) + i] = val;
            m = std::max(m, std::fabs(val));
        }
        rowmax[j] = m;
    });
    for (double m : rowmax) gf.maxabs = std::max(gf.maxabs, m);
    return gf;
}

struct ArcEndpoint {
    enum Kind { Boundary, ClosedLoop, SpecialPoint, Crossing } kind = Boundary;
    int id = -1;
};

struct TracedArc {
    std::vector<Point2> points;
    int sign = 0;  // +1, -1, 0 = unknown
    ArcEndpoint a, b;
    int loop_id = -1;  // index of the source polyline
    double length() const {
        double s = 0.0;
        for (std::size_t k = 1; k < points.size(); ++k) s += dist(points[k - 1], points[k]);
        return s;
    }
};

struct SpecialPointRecord {
    Point2 location;
    PointClass cls;
    double newton_residual = 0.0;
    double theta3 = 0.0;
    bool converged = false;
};

struct CrossingRecord {
    Point2 location;
    double value = 0.0;      // P at the critical point
    double grad_norm = 0.0;  // after polishing
    double hessian_det = 0.0;
    bool on_curve = false;
};

namespace detail {

inline int sgn_pos(double v) { return v < 0.0 ? -1 : 1; }  // exact zeros count as +

inline Point2 bisect_edge(const CompiledPoly& cp, Point2 a, double fa, Point2 b, double fb) {
    // endpoints straddle the zero set; shrink until double precision is spent
    for (int it = 0; it < 60; ++it) {
        Point2 m{(a.p + b.p) / 2, (a.q + b.q) / 2};
        if (m.p == a.p && m.q == a.q) break;
        if (m.p == b.p && m.q == b.q) break;
        double fm = cp.eval(m.p, m.q);
        if (sgn_pos(fm) == sgn_pos(fa)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    (void)fb;
    return {(a.p + b.p) / 2, (a.q + b.q) / 2};
}

struct EdgeKey {
    int axis;  // 0 = horizontal edge (i,j)-(i+1,j), 1 = vertical (i,j)-(i,j+1)
    int i, j;
    auto operator<=>(const EdgeKey&) const = default;
};

// Local minima of |P| along grid rows and columns; rescues loci where P does
// not change sign (even-multiplicity components such as perfect squares).
// Points within reach of already-traced lines are dropped.
inline std::vector<std::vector<Point2>> trace_even_multiplicity(
    const CompiledPoly& cp, const GridField& gf, const std::vector<std::vector<Point2>>& traced) {
    const int n = gf.n();
    double accept = 1e-8 * std::max(gf.maxabs, 1e-300);
    std::vector<Point2> pts;

    auto refine_line = [&](Point2 lo, Point2 hi) -> std::optional<Point2> {
        // golden-section on |P| along the segment lo..hi
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = 0.0, b = 1.0;
        auto at = [&](double t) {
            return Point2{lo.p + (hi.p - lo.p) * t, lo.q + (hi.q - lo.q) * t};
        };
        double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
        double f1 = std::fabs(cp.eval(at(x1).p, at(x1).q));
        double f2 = std::fabs(cp.eval(at(x2).p, at(x2).q));
        for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = std::fabs(cp.eval(at(x1).p, at(x1).q));
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = std::fabs(cp.eval(at(x2).p, at(x2).q));
            }
        }
        Point2 best = at((a + b) / 2);
        if (std::fabs(cp.eval(best.p, best.q)) <= accept) return best;
        return std::nullopt;
    };

    for (int i = 0; i <= n; ++i) {
        for (int j = 1; j < n; ++j) {
            double w = std::fabs(gf.at(i, j)), wl = std::fabs(gf.at(i, j - 1)),
                   wr = std::fabs(gf.at(i, j + 1));
            if (w <= wl && w <= wr && (w < wl || w < wr))
                if (auto pt = refine_line({gf.px(i), gf.qy(j - 1)}, {gf.px(i), gf.qy(j + 1)}))
                    pts.push_back(*pt);
        }
    }
    for (int j = 0; j <= n; ++j) {
        for (int i = 1; i < n; ++i) {
            double w = std::fabs(gf.at(i, j)), wl = std::fabs(gf.at(i - 1, j)),
                   wr = std::fabs(gf.at(i + 1, j));
            if (w <= wl && w <= wr && (w < wl || w < wr))
                if (auto pt = refine_line({gf.px(i - 1), gf.qy(j)}, {gf.px(i + 1), gf.qy(j)}))
                    pts.push_back(*pt);
        }
    }

    // dedupe within half a cell, and against the sign-change tracing
    double mind = 0.5 * gf.win.cell_diag();
    double clear = 1.5 * gf.win.cell_diag();
    std::vector<Point2> uniq;
    for (const Point2& p : pts) {
        bool dup = false;
        for (const Point2& u : uniq)
            if (dist(p, u) < mind) {
                dup = true;
                break;
            }
        for (const auto& line : traced) {
            if (dup) break;
            for (const Point2& u : line)
                if (dist(p, u) < clear) {
                    dup = true;
                    break;
                }
        }
        if (!dup) uniq.push_back(p);
    }

    // greedy nearest-neighbour chaining
    double reach = 2.0 * gf.win.cell_diag();
    std::vector<bool> used(uniq.size(), false);
    std::vector<std::vector<Point2>> lines;
    for (std::size_t s = 0; s < uniq.size(); ++s) {
        if (used[s]) continue;
        std::vector<Point2> chain{uniq[s]};
        used[s] = true;
        for (int dir = 0; dir < 2; ++dir) {
            for (;;) {
                const Point2& tip = dir == 0 ? chain.back() : chain.front();
                int best = -1;
                double bd = reach;
                for (std::size_t t = 0; t < uniq.size(); ++t) {
                    if (used[t]) continue;
                    double d = dist(tip, uniq[t]);
                    if (d < bd) {
                        bd = d;
                        best = static_cast<int>(t);
                    }
                }
                if (best < 0) break;
                used[best] = true;
                if (dir == 0)
                    chain.push_back(uniq[best]);
                else
                    chain.insert(chain.begin(), uniq[best]);
            }
        }
        if (chain.size() >= 2) lines.push_back(std::move(chain));
    }
    return lines;
}

}  // namespace detail

// Marching squares with per-edge bisection refinement; falls back to
// |P|-minima scanning when the polynomial never changes sign on the window.
inline std::vector<std::vector<Point2>> trace_implicit(const Poly2& poly, const Window& win) {
    if (poly.is_zero()) throw Error("trace_implicit: degenerate locus (identically zero)");
    if (!win.valid()) throw Error("trace_implicit: invalid window");
    CompiledPoly cp = compile(poly);
    GridField gf = evaluate_grid(cp, win);
    if (gf.maxabs == 0.0) throw Error("trace_implicit: degenerate locus (zero on the whole grid)");

    using detail::EdgeKey;
    const int n = win.grid_n;
    std::map<EdgeKey, Point2> nodes;
    auto edge_node = [&](int axis, int i, int j) -> bool {
        Point2 a{gf.px(i), gf.qy(j)};
        Point2 b = axis == 0 ? Point2{gf.px(i + 1), gf.qy(j)} : Point2{gf.px(i), gf.qy(j + 1)};
        double fa = gf.at(i, j), fb = axis == 0 ? gf.at(i + 1, j) : gf.at(i, j + 1);
        if (detail::sgn_pos(fa) == detail::sgn_pos(fb)) return false;
        nodes.try_emplace(EdgeKey{axis, i, j}, detail::bisect_edge(cp, a, fa, b, fb));
        return true;
    };

    std::map<EdgeKey, std::vector<EdgeKey>> adj;
    auto link = [&](EdgeKey a, EdgeKey b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            int mask = 0;
            if (gf.at(i, j) < 0) mask |= 1;
            if (gf.at(i + 1, j) < 0) mask |= 2;
            if (gf.at(i + 1, j + 1) < 0) mask |= 4;
            if (gf.at(i, j + 1) < 0) mask |= 8;
            if (mask == 0 || mask == 15) continue;
            EdgeKey B{0, i, j}, T{0, i, j + 1}, L{1, i, j}, R{1, i + 1, j};
            auto have = [&](EdgeKey e) {
                return edge_node(e.axis, e.i, e.j);
            };
            auto seg = [&](EdgeKey a, EdgeKey b) {
                if (have(a) && have(b)) link(a, b);
            };
            switch (mask) {
                case 1: case 14: seg(B, L); break;
                case 2: case 13: seg(B, R); break;
                case 4: case 11: seg(R, T); break;
                case 8: case 7: seg(T, L); break;
                case 3: case 12: seg(L, R); break;
                case 6: case 9: seg(B, T); break;
                case 5: {
                    double c = cp.eval((gf.px(i) + gf.px(i + 1)) / 2, (gf.qy(j) + gf.qy(j + 1)) / 2);
                    if (c < 0) { seg(B, R); seg(T, L); }
                    else { seg(B, L); seg(R, T); }
                    break;
                }
                case 10: {
                    double c = cp.eval((gf.px(i) + gf.px(i + 1)) / 2, (gf.qy(j) + gf.qy(j + 1)) / 2);
                    if (c < 0) { seg(B, L); seg(R, T); }
                    else { seg(B, R); seg(T, L); }
                    break;
                }
            }
        }
    }

    std::set<EdgeKey> visited;
    std::vector<std::vector<Point2>> lines;
    auto walk = [&](EdgeKey start) {
        std::vector<EdgeKey> chain{start};
        visited.insert(start);
        for (;;) {
            const EdgeKey& cur = chain.back();
            const EdgeKey* next = nullptr;
            for (const EdgeKey& nb : adj[cur])
                if (!visited.count(nb)) {
                    next = &nb;
                    break;
                }
            if (!next) break;
            visited.insert(*next);
            chain.push_back(*next);
        }
        return chain;
    };

    // open chains first (endpoints are degree-1 nodes), then closed loops
    for (auto& [key, nbs] : adj) {
        if (nbs.size() == 1 && !visited.count(key)) {
            auto chain = walk(key);
            std::vector<Point2> pts;
            for (const EdgeKey& e : chain) pts.push_back(nodes[e]);
            if (pts.size() >= 2) lines.push_back(std::move(pts));
        }
    }
    for (auto& [key, nbs] : adj) {
        if (!visited.count(key)) {
            auto chain = walk(key);
            std::vector<Point2> pts;
            for (const EdgeKey& e : chain) pts.push_back(nodes[e]);
            if (pts.size() >= 3) {
                pts.push_back(pts.front());  // close the loop explicitly
                lines.push_back(std::move(pts));
            }
        }
    }
    for (auto& extra : detail::trace_even_multiplicity(cp, gf, lines)) lines.push_back(std::move(extra));
    return lines;
}

inline bool is_closed(const std::vector<Point2>& line) {
    return line.size() >= 4 && line.front().p == line.back().p && line.front().q == line.back().q;
}

struct CriticalPoint {
    Point2 location;
    double value = 0.0;
    double grad_norm = 0.0;
    double hessian_det = 0.0;
};

// Critical points of P inside the window: Newton on grad P from cells where
// both partials change sign, plus seeds at traced points with small gradient.
inline std::vector<CriticalPoint> find_critical_points(
    const Poly2& P, const Window& win, const std::vector<std::vector<Point2>>* traced = nullptr) {
    Poly2 Pp = P.partial(Var::x), Pq = P.partial(Var::y);
    CompiledPoly cp = compile(P), cpp = compile(Pp), cpq = compile(Pq);
    CompiledPoly cxx = compile(P.partial(Var::x, 2)), cxy = compile(Pp.partial(Var::y)),
                 cyy = compile(P.partial(Var::y, 2));
    GridField gp = evaluate_grid(cpp, win), gq = evaluate_grid(cpq, win);

    std::vector<Point2> seeds;
    const int n = win.grid_n;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            auto changes = [&](const GridField& g) {
                int s = detail::sgn_pos(g.at(i, j));
                return detail::sgn_pos(g.at(i + 1, j)) != s || detail::sgn_pos(g.at(i, j + 1)) != s ||
                       detail::sgn_pos(g.at(i + 1, j + 1)) != s;
            };
            if (changes(gp) && changes(gq))
                seeds.push_back({(gp.px(i) + gp.px(i + 1)) / 2, (gp.qy(j) + gp.qy(j + 1)) / 2});
        }
    if (traced) {
        double gscale = 0.0;
        std::vector<std::pair<double, Point2>> on_curve;
        for (const auto& line : *traced)
            for (const Point2& pt : line) {
                double gn = std::hypot(cpp.eval(pt.p, pt.q), cpq.eval(pt.p, pt.q));
                gscale = std::max(gscale, gn);
                on_curve.emplace_back(gn, pt);
            }
        for (auto& [gn, pt] : on_curve)
            if (gn <= 1e-4 * std::max(gscale, 1e-300)) seeds.push_back(pt);
    }

    std::vector<CriticalPoint> out;
    double margin = 0.05 * win.diag();
    for (Point2 s : seeds) {
        Point2 x = s;
        bool ok = false;
        for (int it = 0; it < 50; ++it) {
            double fp = cpp.eval(x.p, x.q), fq = cpq.eval(x.p, x.q);
            double a = cxx.eval(x.p, x.q), b = cxy.eval(x.p, x.q), d = cyy.eval(x.p, x.q);
            double det = a * d - b * b;
            if (!std::isfinite(det) || std::fabs(det) < 1e-300) break;
            double dp = (fp * d - fq * b) / det, dq = (fq * a - fp * b) / det;
            x.p -= dp;
            x.q -= dq;
            if (x.p < win.pmin - margin || x.p > win.pmax + margin || x.q < win.qmin - margin ||
                x.q > win.qmax + margin)
                break;
            if (std::hypot(dp, dq) <= 1e-13 * win.diag()) {
                ok = true;
                break;
            }
        }
        if (!ok) continue;
        double eps = 1e-9 * win.diag();
        if (x.p < win.pmin - eps || x.p > win.pmax + eps || x.q < win.qmin - eps ||
            x.q > win.qmax + eps)
            continue;
        bool dup = false;
        for (const CriticalPoint& c : out)
            if (dist(c.location, x) < 1e-6 * win.diag()) {
                dup = true;
                break;
            }
        if (dup) continue;
        CriticalPoint c;
        c.location = x;
        c.value = cp.eval(x.p, x.q);
        c.grad_norm = std::hypot(cpp.eval(x.p, x.q), cpq.eval(x.p, x.q));
        double a = cxx.eval(x.p, x.q), b = cxy.eval(x.p, x.q), d = cyy.eval(x.p, x.q);
        c.hessian_det = a * d - b * b;
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        return a.location.p != b.location.p ? a.location.p < b.location.p : a.location.q < b.location.q;
    });
    return out;
}

// Seeds 2-D Newton on (P,S) from grid cells crossed by both traced curves.
inline std::vector<SpecialPointRecord> intersect_loci(
    const Poly2& P, const Poly2& S, const Window& win,
    const std::function<PointClass(Point2)>& classify_fn = {}) {
    std::vector<std::vector<Point2>> lp, ls;
    try {
        lp = trace_implicit(P, win);
        ls = trace_implicit(S, win);
    } catch (const Error&) {
        return {};  // a degenerate locus has no isolated intersections
    }

    const int n = win.grid_n;
    auto cell_of = [&](Point2 pt) {
        int i = std::clamp(static_cast<int>((pt.p - win.pmin) / win.cell_w()), 0, n - 1);
        int j = std::clamp(static_cast<int>((pt.q - win.qmin) / win.cell_h()), 0, n - 1);
        return j * n + i;
    };
    auto occupancy = [&](const std::vector<std::vector<Point2>>& lines) {
        std::set<int> cells;
        for (const auto& line : lines)
            for (const Point2& pt : line) {
                int c = cell_of(pt);
                int ci = c % n, cj = c / n;
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        int ii = ci + di, jj = cj + dj;
                        if (ii >= 0 && ii < n && jj >= 0 && jj < n) cells.insert(jj * n + ii);
                    }
            }
        return cells;
    };
    std::set<int> pc = occupancy(lp), sc = occupancy(ls), seeds_cells;
    std::set_intersection(pc.begin(), pc.end(), sc.begin(), sc.end(),
                          std::inserter(seeds_cells, seeds_cells.begin()));

    CompiledPoly cP = compile(P), cS = compile(S);
    CompiledPoly cPp = compile(P.partial(Var::x)), cPq = compile(P.partial(Var::y));
    CompiledPoly cSp = compile(S.partial(Var::x)), cSq = compile(S.partial(Var::y));
    double scaleP = std::max(evaluate_grid(cP, win).maxabs, 1e-300);
    double scaleS = std::max(evaluate_grid(cS, win).maxabs, 1e-300);

    std::vector<SpecialPointRecord> out;
    double margin = 0.05 * win.diag();
    for (int cell : seeds_cells) {
        int ci = cell % n, cj = cell / n;
        Point2 x{win.pmin + (ci + 0.5) * win.cell_w(), win.qmin + (cj + 0.5) * win.cell_h()};
        bool converged = false;
        bool alive = true;
        for (int it = 0; it < 50 && alive; ++it) {
            double fp = cP.eval(x.p, x.q), fs = cS.eval(x.p, x.q);
            double a = cPp.eval(x.p, x.q), b = cPq.eval(x.p, x.q);
            double c = cSp.eval(x.p, x.q), d = cSq.eval(x.p, x.q);
            double det = a * d - b * c;
            if (!std::isfinite(det) || std::fabs(det) < 1e-300) break;
            double dp = (fp * d - fs * b) / det, dq = (fs * a - fp * c) / det;
            x.p -= dp;
            x.q -= dq;
            if (!std::isfinite(x.p) || !std::isfinite(x.q) || x.p < win.pmin - margin ||
                x.p > win.pmax + margin || x.q < win.qmin - margin || x.q > win.qmax + margin) {
                alive = false;
                break;
            }
            if (std::hypot(dp, dq) <= 1e-14 * win.diag()) {
                converged = true;
                break;
            }
        }
        if (!alive) continue;  // left the window: seed cell held no intersection
        double eps = 1e-9 * win.diag();
        if (x.p < win.pmin - eps || x.p > win.pmax + eps || x.q < win.qmin - eps ||
            x.q > win.qmax + eps)
            continue;
        double res = std::max(std::fabs(cP.eval(x.p, x.q)) / scaleP,
                              std::fabs(cS.eval(x.p, x.q)) / scaleS);
        if (converged && res > 1e-7) converged = false;
        bool dup = false;
        for (SpecialPointRecord& r : out)
            if (dist(r.location, x) < 1e-6 * win.diag()) {
                if (converged && !r.converged) {
                    r = SpecialPointRecord{};  // upgrade the flagged candidate in place
                    r.location = x;
                    r.converged = true;
                    r.newton_residual = res;
                }
                dup = true;
                break;
            }
        if (dup) continue;
        SpecialPointRecord rec;
        rec.location = x;
        rec.converged = converged;
        rec.newton_residual = res;
        out.push_back(rec);
    }

    for (SpecialPointRecord& rec : out) {
        if (classify_fn) {
            rec.cls = classify_fn(rec.location);
            auto it = rec.cls.diagnostics.find("theta3");
            rec.theta3 = it != rec.cls.diagnostics.end() ? it->second : 0.0;
        } else {
            rec.cls.tag = PointTag::Degenerate;
            rec.cls.notes.push_back("no surface context attached");
            rec.theta3 = std::numeric_limits<double>::quiet_NaN();
        }
        if (!rec.converged) rec.cls.notes.push_back("newton did not converge within 50 iterations");
    }
    std::sort(out.begin(), out.end(), [](const SpecialPointRecord& a, const SpecialPointRecord& b) {
        return a.location.p != b.location.p ? a.location.p < b.location.p
                                            : a.location.q < b.location.q;
    });
    return out;
}

namespace detail {

// Pull a sample back onto the curve along the gradient.
inline Point2 polish_onto_curve(const CompiledPoly& cp, const CompiledPoly& cpx,
                                const CompiledPoly& cpy, Point2 x) {
    for (int it = 0; it < 12; ++it) {
        double f = cp.eval(x.p, x.q);
        double gx = cpx.eval(x.p, x.q), gy = cpy.eval(x.p, x.q);
        double g2 = gx * gx + gy * gy;
        if (g2 < 1e-300) break;
        x.p -= f * gx / g2;
        x.q -= f * gy / g2;
    }
    return x;
}

struct Marker {
    Point2 loc;
    ArcEndpoint::Kind kind;
    int id;
};

}  // namespace detail

struct ArcLabelResult {
    std::vector<TracedArc> arcs;
    std::vector<CrossingRecord> crossings;
    std::vector<std::vector<Point2>> polylines;
};

// Splits the traced parabolic set at special points and self-crossings and
// attaches the arc sign from one polished interior sample per arc.
inline ArcLabelResult label_arcs(const Poly2& P, const std::vector<SpecialPointRecord>& specials,
                                 const Window& win, const std::function<int(Point2)>& sign_fn) {
    ArcLabelResult out;
    out.polylines = trace_implicit(P, win);

    CompiledPoly cp = compile(P), cpx = compile(P.partial(Var::x)), cpy = compile(P.partial(Var::y));
    GridField gf = evaluate_grid(cp, win);

    std::vector<CriticalPoint> crit = find_critical_points(P, win, &out.polylines);
    for (const CriticalPoint& c : crit) {
        CrossingRecord cr;
        cr.location = c.location;
        cr.value = c.value;
        cr.grad_norm = c.grad_norm;
        cr.hessian_det = c.hessian_det;
        cr.on_curve = std::fabs(c.value) <= 1e-8 * std::max(gf.maxabs, 1e-300);
        out.crossings.push_back(cr);
    }

    std::vector<detail::Marker> markers;
    for (std::size_t k = 0; k < specials.size(); ++k)
        if (specials[k].converged)
            markers.push_back({specials[k].location, ArcEndpoint::SpecialPoint, static_cast<int>(k)});
    for (std::size_t k = 0; k < out.crossings.size(); ++k)
        if (out.crossings[k].on_curve)
            markers.push_back({out.crossings[k].location, ArcEndpoint::Crossing, static_cast<int>(k)});

    double snap = 2.0 * win.cell_diag();
    auto sample_sign = [&](const std::vector<Point2>& pts) {
        for (double frac : {0.5, 0.25, 0.75}) {
            std::size_t idx = static_cast<std::size_t>(frac * (pts.size() - 1));
            idx = std::clamp<std::size_t>(idx, 1, pts.size() >= 2 ? pts.size() - 2 : 0);
            Point2 s = detail::polish_onto_curve(cp, cpx, cpy, pts[idx]);
            int sg = sign_fn ? sign_fn(s) : 0;
            if (sg != 0) return sg;
        }
        return 0;
    };

    for (std::size_t li = 0; li < out.polylines.size(); ++li) {
        const std::vector<Point2>& line = out.polylines[li];
        bool closed = is_closed(line);
        std::vector<Point2> pts(line.begin(), closed ? line.end() - 1 : line.end());

        // position of each marker along this polyline, if it lies on it
        struct Hit {
            double pos;
            detail::Marker m;
        };
        std::vector<Hit> hits;
        for (const detail::Marker& m : markers) {
            double best = snap;
            double bestpos = -1.0;
            std::size_t segs = closed ? pts.size() : pts.size() - 1;
            for (std::size_t s = 0; s < segs; ++s) {
                const Point2& a = pts[s];
                const Point2& b = pts[(s + 1) % pts.size()];
                double vx = b.p - a.p, vy = b.q - a.q;
                double L2 = vx * vx + vy * vy;
                double t = L2 > 0 ? std::clamp(((m.loc.p - a.p) * vx + (m.loc.q - a.q) * vy) / L2, 0.0, 1.0)
                                  : 0.0;
                Point2 proj{a.p + t * vx, a.q + t * vy};
                double d = dist(proj, m.loc);
                if (d < best) {
                    best = d;
                    bestpos = static_cast<double>(s) + t;
                }
            }
            if (bestpos >= 0.0) hits.push_back({bestpos, m});
        }
        std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.pos < b.pos; });

        auto emit = [&](std::vector<Point2> apts, ArcEndpoint ea, ArcEndpoint eb) {
            if (apts.size() < 2) return;
            TracedArc arc;
            arc.points = std::move(apts);
            arc.a = ea;
            arc.b = eb;
            arc.loop_id = static_cast<int>(li);
            arc.sign = sample_sign(arc.points);
            out.arcs.push_back(std::move(arc));
        };

        if (hits.empty()) {
            ArcEndpoint e{closed ? ArcEndpoint::ClosedLoop : ArcEndpoint::Boundary, -1};
            emit(line, e, e);
            continue;
        }

        auto endpoint = [](const detail::Marker& m) { return ArcEndpoint{m.kind, m.id}; };
        if (!closed) {
            std::vector<Point2> cur;
            ArcEndpoint last{ArcEndpoint::Boundary, -1};
            std::size_t h = 0;
            auto cut_at = [&](const Hit& hit) {
                cur.push_back(hit.m.loc);
                emit(cur, last, endpoint(hit.m));
                last = endpoint(hit.m);
                cur = {hit.m.loc};
            };
            for (std::size_t s = 0; s < pts.size(); ++s) {
                while (h < hits.size() && hits[h].pos < static_cast<double>(s)) cut_at(hits[h++]);
                cur.push_back(pts[s]);
            }
            while (h < hits.size()) cut_at(hits[h++]);
            emit(cur, last, {ArcEndpoint::Boundary, -1});
        } else {
            std::size_t m = hits.size();
            std::size_t nseg = pts.size();
            for (std::size_t k = 0; k < m; ++k) {
                double from = hits[k].pos;
                double to = k + 1 < m ? hits[k + 1].pos : hits[0].pos + static_cast<double>(nseg);
                std::vector<Point2> cur{hits[k].m.loc};
                for (long s = static_cast<long>(std::floor(from)) + 1;
                     s < static_cast<long>(std::ceil(to)); ++s) {
                    double posv = static_cast<double>(s);
                    if (posv <= from || posv >= to) continue;
                    cur.push_back(pts[static_cast<std::size_t>(s) % nseg]);
                }
                cur.push_back(hits[(k + 1) % m].m.loc);
                emit(cur, endpoint(hits[k].m), endpoint(hits[(k + 1) % m].m));
            }
        }
    }
    return out;
}

}  // namespace conecontact
