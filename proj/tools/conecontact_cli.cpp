// Command-line front end: classify points, print loci, trace the parameter
// plane, and sweep a one-parameter family of surfaces in Monge form.

#include "conecontact/parser.hpp"
#include "conecontact/pipeline.hpp"
#include "conecontact/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

using namespace conecontact;

namespace {

constexpr const char* kVersion = "0.1.0";

struct LoadedSurface {
    SurfaceSpec spec;
    Poly2 f, g;  // parameter substituted when provided
};

LoadedSurface load(const std::string& path, const std::string& param_value) {
    LoadedSurface s;
    s.spec = parse_surface_file(path);
    s.f = s.spec.f;
    s.g = s.spec.g;
    if (!param_value.empty()) {
        if (!s.spec.param)
            throw Error("surface file declares no parameter but --param was given");
        Rational v = parse_rational(param_value);
        s.f = s.f.substitute_param(v);
        s.g = s.g.substitute_param(v);
    } else if (s.f.has_param() || s.g.has_param()) {
        throw Error("surface uses parameter '" + *s.spec.param + "'; pass --param");
    }
    return s;
}

nlohmann::ordered_json surface_echo(const LoadedSurface& s, const std::string& param_value) {
    nlohmann::ordered_json j;
    j["f"] = s.spec.f.to_string();
    j["g"] = s.spec.g.to_string();
    if (s.spec.param) j["param"] = *s.spec.param;
    if (!param_value.empty()) j["param_value"] = param_value;
    nlohmann::ordered_json w;
    w["pmin"] = s.spec.window.pmin;
    w["pmax"] = s.spec.window.pmax;
    w["qmin"] = s.spec.window.qmin;
    w["qmax"] = s.spec.window.qmax;
    w["grid"] = s.spec.window.grid_n;
    j["window"] = w;
    return j;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open output file '" + path + "'");
    return os;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"affinely invariant point structure of surfaces in R^4 (Monge form)"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string file, param_value, at_str;
    double tol = 1e-8;
    bool exact = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", file, "surface definition file")->required();
        cmd->add_option("--param", param_value, "family parameter value (exact rational, e.g. -1/25)");
    };

    CLI::App* c_classify = app.add_subcommand("classify", "classify the point --at p,q");
    add_common(c_classify);
    c_classify->add_option("--at", at_str, "base point p,q (exact rationals)")->required();
    c_classify->add_option("--tol", tol, "relative zero tolerance for the diagnostics");
    c_classify->add_flag("--exact", exact, "demand exact vanishing (rational inputs only)");

    CLI::App* c_loci = app.add_subcommand("loci", "print the parabolic and special loci");
    add_common(c_loci);

    std::string out_csv, out_svg;
    bool shade = false;
    CLI::App* c_trace = app.add_subcommand("trace", "trace loci, specials and signed arcs");
    add_common(c_trace);
    c_trace->add_option("--out-csv", out_csv, "arc and point table output");
    c_trace->add_option("--out-svg", out_svg, "figure output");
    c_trace->add_flag("--shade-regions", shade, "shade elliptic/hyperbolic regions");

    std::string range_str, out_path;
    int steps = 20;
    bool timing = false;
    CLI::App* c_sweep = app.add_subcommand("sweep", "sweep the family parameter across a range");
    c_sweep->add_option("file", file, "surface definition file")->required();
    c_sweep->add_option("--range", range_str, "parameter range lo,hi (exact rationals)")->required();
    c_sweep->add_option("--steps", steps, "number of steps across the range");
    c_sweep->add_option("--out", out_path, "run report output path")->required();
    c_sweep->add_flag("--timing", timing, "include wall-clock timing in the report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_classify) {
            LoadedSurface s = load(file, param_value);
            auto comma = at_str.find(',');
            if (comma == std::string::npos) throw Error("--at expects p,q");
            RatPoint2 at{parse_rational(at_str.substr(0, comma)),
                         parse_rational(at_str.substr(comma + 1))};
            PointClass pc = classify_point(s.f, s.g, at, exact ? 0.0 : tol);
            nlohmann::ordered_json j;
            j["surface"] = surface_echo(s, param_value);
            j["at"] = {{"p", to_string(at.p)}, {"q", to_string(at.q)}};
            j["class"] = point_class_json(pc);
            std::cout << j.dump(2) << "\n";
            return pc.tag == PointTag::Degenerate ? 2 : 0;
        }
        if (*c_loci) {
            LoadedSurface s = load(file, param_value);
            std::cout << "P = " << parabolic_locus(s.f, s.g).to_string("p", "q") << "\n";
            std::cout << "S = " << special_locus(s.f, s.g).to_string("p", "q") << "\n";
            return 0;
        }
        if (*c_trace) {
            LoadedSurface s = load(file, param_value);
            SurfaceAnalysis an = analyze_surface(s.f, s.g, s.spec.window);
            if (an.p_degenerate) {
                std::cerr << "degenerate locus: the parabolic locus vanishes identically\n";
                return 2;
            }
            if (!out_csv.empty()) {
                auto os = open_out(out_csv);
                write_csv(os, an);
            }
            if (!out_svg.empty()) {
                auto os = open_out(out_svg);
                std::vector<std::pair<Point2, PointTag>> shading;
                if (shade) {
                    const Window& w = s.spec.window;
                    int n = std::max(w.grid_n / 16, 8);
                    for (int j = 0; j <= n; ++j)
                        for (int i = 0; i <= n; ++i) {
                            Point2 pt{w.pmin + (w.pmax - w.pmin) * i / n,
                                      w.qmin + (w.qmax - w.qmin) * j / n};
                            shading.emplace_back(pt, classify_point(s.f, s.g, pt).tag);
                        }
                }
                write_svg(os, an, s.spec.window, shade ? &shading : nullptr);
            }
            nlohmann::ordered_json j;
            j["surface"] = surface_echo(s, param_value);
            j["tool_version"] = kVersion;
            j["result"] = analysis_json(an);
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*c_sweep) {
            SurfaceSpec spec = parse_surface_file(file);
            if (!spec.param) {
                std::cerr << "sweep requires a surface file with a declared parameter\n";
                return 1;
            }
            auto comma = range_str.find(',');
            if (comma == std::string::npos) throw Error("--range expects lo,hi");
            Rational lo = parse_rational(range_str.substr(0, comma));
            Rational hi = parse_rational(range_str.substr(comma + 1));
            auto t0 = std::chrono::steady_clock::now();
            SweepResult sweep = sweep_family(spec.f, spec.g, lo, hi, steps, spec.window);
            auto t1 = std::chrono::steady_clock::now();
            nlohmann::ordered_json j;
            LoadedSurface echo{spec, spec.f, spec.g};
            j["surface"] = surface_echo(echo, "");
            j["tool_version"] = kVersion;
            j["range"] = {{"lo", to_string(lo)}, {"hi", to_string(hi)}, {"steps", steps}};
            j["sweep"] = sweep_json(sweep);
            if (timing)
                j["timing_ms"] =
                    std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
            auto os = open_out(out_path);
            os << j.dump(2) << "\n";
            std::cout << "sweep: " << sweep.steps.size() << " steps, " << sweep.events.size()
                      << " events -> " << out_path << "\n";
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
