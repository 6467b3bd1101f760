#pragma once

#include "conecontact/classify.hpp"
#include "conecontact/loci.hpp"
#include "conecontact/tracer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conecontact {

// One full pass over a (parameter-substituted) surface: loci, traced curves,
// located special points, signed arcs, crossings.
struct SurfaceAnalysis {
    Poly2 P, S;  // exact loci, integer content removed for tracing
    std::vector<std::vector<Point2>> p_polylines;
    std::vector<std::vector<Point2>> s_polylines;
    std::vector<SpecialPointRecord> specials;
    std::vector<TracedArc> arcs;
    std::vector<CrossingRecord> crossings;
    bool p_degenerate = false;  // parabolic locus identically zero
    bool s_degenerate = false;

    int special_count() const {
        int n = 0;
        for (const auto& r : specials)
            if (r.converged && r.cls.tag == PointTag::SP) ++n;
        return n;
    }
    int on_curve_crossing_count() const {
        int n = 0;
        for (const auto& c : crossings)
            if (c.on_curve) ++n;
        return n;
    }
};

inline SurfaceAnalysis analyze_surface(const Poly2& f, const Poly2& g, const Window& win,
                                       double zero_tol = 1e-8) {
    if (f.has_param() || g.has_param())
        throw Error("analyze_surface: substitute the family parameter first");
    SurfaceAnalysis out;
    out.P = parabolic_locus(f, g).remove_integer_content();
    out.S = special_locus(f, g).remove_integer_content();
    out.p_degenerate = out.P.is_zero();
    out.s_degenerate = out.S.is_zero();
    if (out.p_degenerate) return out;

    try {
        out.p_polylines = trace_implicit(out.P, win);
    } catch (const Error&) {
        out.p_degenerate = true;  // vanished everywhere on the grid
        return out;
    }
    if (!out.s_degenerate) {
        try {
            out.s_polylines = trace_implicit(out.S, win);
        } catch (const Error&) {
            out.s_degenerate = true;
        }
    }

    auto classify_at = [&, zero_tol](Point2 pt) { return classify_point(f, g, pt, zero_tol); };
    if (!out.s_degenerate)
        out.specials = intersect_loci(out.P, out.S, win, classify_at);

    auto sign_at = [&, zero_tol](Point2 pt) -> int {
        PointClass pc = classify_point(f, g, pt, zero_tol);
        if (pc.tag == PointTag::P && pc.sign) return *pc.sign;
        return 0;
    };
    ArcLabelResult lab = label_arcs(out.P, out.specials, win, sign_at);
    out.arcs = std::move(lab.arcs);
    out.crossings = std::move(lab.crossings);
    out.p_polylines = std::move(lab.polylines);
    return out;
}

enum class SweepEventKind { SpecialCountChange, CrossingTransition };

struct SweepEvent {
    SweepEventKind kind = SweepEventKind::SpecialCountChange;
    Rational bracket_lo, bracket_hi;  // refined to 1e-6 in the parameter
    double refined = 0.0;             // bracket midpoint
    int count_before = 0, count_after = 0;
    Point2 where;  // location driving the event (saddle for transitions)
    std::string description;
};

struct SweepStep {
    Rational param;
    SurfaceAnalysis analysis;
};

struct SweepResult {
    std::vector<SweepStep> steps;
    std::vector<SweepEvent> events;
};

namespace detail {

inline std::optional<CriticalPoint> match_saddle(const std::vector<CriticalPoint>& crit,
                                                 Point2 ref, double radius) {
    std::optional<CriticalPoint> best;
    double bd = radius;
    for (const CriticalPoint& c : crit) {
        if (c.hessian_det >= 0) continue;
        double d = dist(c.location, ref);
        if (d < bd) {
            bd = d;
            best = c;
        }
    }
    return best;
}

}  // namespace detail

// Steps the family parameter across [lo,hi], recording specials, arcs and
// crossings per value, and refines every detected transition by bisection.
inline SweepResult sweep_family(const Poly2& f, const Poly2& g, const Rational& lo,
                                const Rational& hi, int steps, const Window& win,
                                double zero_tol = 1e-8) {
    SweepResult out;
    auto analyze_at = [&](const Rational& mu) {
        return analyze_surface(f.substitute_param(mu), g.substitute_param(mu), win, zero_tol);
    };

    if (lo == hi || steps <= 0) {
        out.steps.push_back({lo, analyze_at(lo)});
        return out;
    }
    for (int k = 0; k <= steps; ++k) {
        Rational mu = lo + (hi - lo) * k / steps;
        out.steps.push_back({mu, analyze_at(mu)});
    }

    const double param_tol = 1e-6;
    for (std::size_t k = 0; k + 1 < out.steps.size(); ++k) {
        const SweepStep& a = out.steps[k];
        const SweepStep& b = out.steps[k + 1];

        int ca = a.analysis.special_count(), cb = b.analysis.special_count();
        if (ca != cb) {
            Rational blo = a.param, bhi = b.param;
            int clo = ca;
            while (to_double(abs_rat(bhi - blo)) > param_tol) {
                Rational mid = (blo + bhi) / 2;
                int cm = analyze_at(mid).special_count();
                if (cm == clo)
                    blo = mid;
                else
                    bhi = mid;
            }
            SweepEvent ev;
            ev.kind = SweepEventKind::SpecialCountChange;
            ev.bracket_lo = blo;
            ev.bracket_hi = bhi;
            ev.refined = to_double((blo + bhi) / 2);
            ev.count_before = ca;
            ev.count_after = cb;
            ev.description = "special point count " + std::to_string(ca) + " -> " + std::to_string(cb);
            out.events.push_back(ev);
        }

        // Morse transition of the locus: a saddle value of P changing sign
        double radius = 0.1 * win.diag();
        auto crit_of = [&](const SurfaceAnalysis& an) { return find_critical_points(an.P, win); };
        std::vector<CriticalPoint> crit_a = crit_of(a.analysis);
        for (const CriticalPoint& sa : crit_a) {
            if (sa.hessian_det >= 0) continue;
            std::vector<CriticalPoint> crit_b = crit_of(b.analysis);
            auto sb = detail::match_saddle(crit_b, sa.location, radius);
            if (!sb) continue;
            if ((sa.value < 0) == (sb->value < 0)) continue;
            bool sign_lo_neg = sa.value < 0;
            Rational blo = a.param, bhi = b.param;
            Point2 ref = sa.location;
            while (to_double(abs_rat(bhi - blo)) > param_tol) {
                Rational mid = (blo + bhi) / 2;
                Poly2 Pm = parabolic_locus(f.substitute_param(mid), g.substitute_param(mid))
                               .remove_integer_content();
                auto cm = detail::match_saddle(find_critical_points(Pm, win), ref, radius);
                if (!cm) break;
                ref = cm->location;
                if ((cm->value < 0) == sign_lo_neg)
                    blo = mid;
                else
                    bhi = mid;
            }
            SweepEvent ev;
            ev.kind = SweepEventKind::CrossingTransition;
            ev.bracket_lo = blo;
            ev.bracket_hi = bhi;
            ev.refined = to_double((blo + bhi) / 2);
            ev.count_before = ca;
            ev.count_after = cb;
            ev.where = ref;
            ev.description = "parabolic set self-crossing transition (saddle value changes sign)";
            out.events.push_back(ev);
        }
    }
    return out;
}

}  // namespace conecontact
