#pragma once

#include "conecontact/classify.hpp"
#include "conecontact/pipeline.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>

namespace conecontact {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline nlohmann::ordered_json point_class_json(const PointClass& pc) {
    nlohmann::ordered_json j;
    j["tag"] = to_string(pc.tag);
    if (pc.sign) j["sign"] = *pc.sign > 0 ? "+" : "-";
    if (pc.sp_type) j["sp_type"] = to_string(*pc.sp_type);
    if (pc.ir_case) j["ir_case"] = to_string(*pc.ir_case);
    j["versal"] = pc.versal;
    j["nondegenerate"] = pc.nondegenerate;
    nlohmann::ordered_json diag;
    for (auto& [k, v] : pc.diagnostics) diag[k] = v;
    j["diagnostics"] = diag;
    if (!pc.near_tags.empty()) {
        nlohmann::ordered_json near = nlohmann::ordered_json::array();
        for (PointTag t : pc.near_tags) near.push_back(to_string(t));
        j["near_tags"] = near;
    }
    if (!pc.notes.empty()) j["notes"] = pc.notes;
    return j;
}

inline const char* sign_str(int s) { return s > 0 ? "+" : (s < 0 ? "-" : "?"); }

inline const char* endpoint_str(ArcEndpoint::Kind k) {
    switch (k) {
        case ArcEndpoint::Boundary: return "boundary";
        case ArcEndpoint::ClosedLoop: return "closed";
        case ArcEndpoint::SpecialPoint: return "special";
        case ArcEndpoint::Crossing: return "crossing";
    }
    return "?";
}

// Two-table CSV: one row per traced arc vertex, then one row per located
// point (special points and on-curve crossings).
inline void write_csv(std::ostream& os, const SurfaceAnalysis& an) {
    os << "arc_id,sign,p,q\n";
    for (std::size_t a = 0; a < an.arcs.size(); ++a)
        for (const Point2& pt : an.arcs[a].points)
            os << a << "," << sign_str(an.arcs[a].sign) << "," << fmt_double(pt.p) << ","
               << fmt_double(pt.q) << "\n";
    os << "\n";
    os << "point_id,kind,p,q,tag,sp_type,versal,newton_residual,theta3\n";
    std::size_t id = 0;
    for (const SpecialPointRecord& r : an.specials) {
        os << id++ << ",special," << fmt_double(r.location.p) << "," << fmt_double(r.location.q)
           << "," << to_string(r.cls.tag) << ","
           << (r.cls.sp_type ? to_string(*r.cls.sp_type) : "") << ","
           << (r.cls.versal ? "true" : "false") << "," << fmt_double(r.newton_residual) << ","
           << fmt_double(r.theta3) << "\n";
    }
    for (const CrossingRecord& c : an.crossings) {
        if (!c.on_curve) continue;
        os << id++ << ",crossing," << fmt_double(c.location.p) << "," << fmt_double(c.location.q)
           << ",,,,," << "\n";
    }
}

// Self-contained SVG of the traced curves: parabolic arcs coloured by sign,
// the special locus dashed, special points and crossings marked.
inline void write_svg(std::ostream& os, const SurfaceAnalysis& an, const Window& win,
                      const std::vector<std::pair<Point2, PointTag>>* shading = nullptr) {
    const double W = 720.0, H = 720.0, pad = 30.0;
    auto sx = [&](double p) { return pad + (p - win.pmin) / (win.pmax - win.pmin) * (W - 2 * pad); };
    auto sy = [&](double q) { return H - pad - (q - win.qmin) / (win.qmax - win.qmin) * (H - 2 * pad); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    if (shading) {
        double cw = (W - 2 * pad) / win.grid_n * 16, ch = (H - 2 * pad) / win.grid_n * 16;
        for (auto& [pt, tag] : *shading) {
            const char* fill = tag == PointTag::H ? "#dbeafe" : (tag == PointTag::E ? "#fef9c3" : "");
            if (!*fill) continue;
            os << "<rect x=\"" << fmt_double(sx(pt.p) - cw / 2) << "\" y=\""
               << fmt_double(sy(pt.q) - ch / 2) << "\" width=\"" << fmt_double(cw) << "\" height=\""
               << fmt_double(ch) << "\" fill=\"" << fill << "\"/>\n";
        }
    }

    auto polyline = [&](const std::vector<Point2>& pts, const char* style) {
        os << "<polyline fill=\"none\" " << style << " points=\"";
        for (const Point2& pt : pts) os << fmt_double(sx(pt.p)) << "," << fmt_double(sy(pt.q)) << " ";
        os << "\"/>\n";
    };

    for (const auto& line : an.s_polylines)
        polyline(line, "stroke=\"#2ca02c\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"");
    for (const TracedArc& arc : an.arcs) {
        const char* color = arc.sign > 0 ? "#d62728" : (arc.sign < 0 ? "#1f77b4" : "#7f7f7f");
        std::string style = "stroke=\"" + std::string(color) + "\" stroke-width=\"2.5\"";
        polyline(arc.points, style.c_str());
        if (arc.points.size() >= 2 && arc.sign != 0) {
            Point2 mid = arc.points[arc.points.size() / 2];
            os << "<text x=\"" << fmt_double(sx(mid.p) + 6) << "\" y=\"" << fmt_double(sy(mid.q) - 6)
               << "\" font-size=\"18\" fill=\"" << color << "\">" << sign_str(arc.sign)
               << "</text>\n";
        }
    }
    for (const SpecialPointRecord& r : an.specials) {
        if (!r.converged) continue;
        bool elliptic = r.cls.sp_type && *r.cls.sp_type == SpType::Elliptic;
        os << "<circle cx=\"" << fmt_double(sx(r.location.p)) << "\" cy=\""
           << fmt_double(sy(r.location.q)) << "\" r=\"6\" fill=\""
           << (elliptic ? "#d62728" : "white") << "\" stroke=\"black\" stroke-width=\"1.5\">"
           << "<title>" << to_string(r.cls.tag)
           << (r.cls.sp_type ? std::string(" ") + to_string(*r.cls.sp_type) : "") << "</title></circle>\n";
    }
    for (const CrossingRecord& c : an.crossings) {
        if (!c.on_curve) continue;
        double x = sx(c.location.p), y = sy(c.location.q);
        os << "<path d=\"M " << fmt_double(x - 6) << " " << fmt_double(y - 6) << " L "
           << fmt_double(x + 6) << " " << fmt_double(y + 6) << " M " << fmt_double(x - 6) << " "
           << fmt_double(y + 6) << " L " << fmt_double(x + 6) << " " << fmt_double(y - 6)
           << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    os << "<text x=\"" << pad << "\" y=\"" << H - 8
       << "\" font-size=\"13\" fill=\"#333\">window [" << fmt_double(win.pmin) << ","
       << fmt_double(win.pmax) << "]x[" << fmt_double(win.qmin) << "," << fmt_double(win.qmax)
       << "]  red/+ blue/- parabolic arcs, dashed green special locus</text>\n";
    os << "</svg>\n";
}

inline nlohmann::ordered_json analysis_json(const SurfaceAnalysis& an) {
    nlohmann::ordered_json j;
    j["parabolic_locus"] = an.P.to_string("p", "q");
    j["special_locus"] = an.S.to_string("p", "q");
    j["degenerate_parabolic_locus"] = an.p_degenerate;
    nlohmann::ordered_json sp = nlohmann::ordered_json::array();
    for (const SpecialPointRecord& r : an.specials) {
        nlohmann::ordered_json e;
        e["p"] = r.location.p;
        e["q"] = r.location.q;
        e["converged"] = r.converged;
        e["newton_residual"] = r.newton_residual;
        e["theta3"] = r.theta3;
        e["class"] = point_class_json(r.cls);
        sp.push_back(e);
    }
    j["special_points"] = sp;
    nlohmann::ordered_json arcs = nlohmann::ordered_json::array();
    for (const TracedArc& a : an.arcs) {
        nlohmann::ordered_json e;
        e["sign"] = sign_str(a.sign);
        e["length"] = a.length();
        e["vertices"] = a.points.size();
        e["loop"] = a.loop_id;
        e["from"] = endpoint_str(a.a.kind);
        e["to"] = endpoint_str(a.b.kind);
        arcs.push_back(e);
    }
    j["arcs"] = arcs;
    nlohmann::ordered_json cr = nlohmann::ordered_json::array();
    for (const CrossingRecord& c : an.crossings) {
        if (!c.on_curve) continue;
        nlohmann::ordered_json e;
        e["p"] = c.location.p;
        e["q"] = c.location.q;
        e["grad_norm"] = c.grad_norm;
        cr.push_back(e);
    }
    j["crossings"] = cr;
    return j;
}

inline nlohmann::ordered_json sweep_json(const SweepResult& sweep) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const SweepStep& st : sweep.steps) {
        nlohmann::ordered_json e;
        e["param"] = to_string(st.param);
        e["param_value"] = to_double(st.param);
        e["special_count"] = st.analysis.special_count();
        nlohmann::ordered_json cls = nlohmann::ordered_json::array();
        for (const SpecialPointRecord& r : st.analysis.specials) {
            if (!r.converged) continue;
            nlohmann::ordered_json s;
            s["p"] = r.location.p;
            s["q"] = r.location.q;
            s["tag"] = to_string(r.cls.tag);
            if (r.cls.sp_type) s["sp_type"] = to_string(*r.cls.sp_type);
            s["versal"] = r.cls.versal;
            cls.push_back(s);
        }
        e["specials"] = cls;
        nlohmann::ordered_json arcs = nlohmann::ordered_json::array();
        for (const TracedArc& a : st.analysis.arcs) arcs.push_back(sign_str(a.sign));
        e["arc_signs"] = arcs;
        e["crossings_on_curve"] = st.analysis.on_curve_crossing_count();
        steps.push_back(e);
    }
    j["steps"] = steps;
    nlohmann::ordered_json events = nlohmann::ordered_json::array();
    for (const SweepEvent& ev : sweep.events) {
        nlohmann::ordered_json e;
        e["kind"] = ev.kind == SweepEventKind::SpecialCountChange ? "special_count_change"
                                                                  : "crossing_transition";
        e["bracket_lo"] = to_string(ev.bracket_lo);
        e["bracket_hi"] = to_string(ev.bracket_hi);
        e["refined_param"] = ev.refined;
        e["count_before"] = ev.count_before;
        e["count_after"] = ev.count_after;
        e["description"] = ev.description;
        events.push_back(e);
    }
    j["events"] = events;
    return j;
}

}  // namespace conecontact
