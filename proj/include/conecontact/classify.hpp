#pragma once

#include "conecontact/contact.hpp"
#include "conecontact/jet.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace conecontact {

enum class PointTag { H, E, P, SP, IR, II, Borderline, Degenerate };
enum class SpType { Elliptic, Hyperbolic };
enum class IrCase { Plus, Minus };

inline const char* to_string(PointTag t) {
    switch (t) {
        case PointTag::H: return "H";
        case PointTag::E: return "E";
        case PointTag::P: return "P";
        case PointTag::SP: return "SP";
        case PointTag::IR: return "IR";
        case PointTag::II: return "II";
        case PointTag::Borderline: return "Borderline";
        case PointTag::Degenerate: return "Degenerate";
    }
    return "?";
}

inline const char* to_string(SpType t) { return t == SpType::Elliptic ? "elliptic" : "hyperbolic"; }
inline const char* to_string(IrCase t) { return t == IrCase::Plus ? "plus" : "minus"; }

struct PointClass {
    PointTag tag = PointTag::Degenerate;
    std::optional<int> sign;        // P only: sign of g20*g04
    std::optional<SpType> sp_type;  // SP only: side carrying the half-parabola
    std::optional<IrCase> ir_case;  // IR only: sign of 4*g40*g04 - g22^2
    bool versal = false;
    bool nondegenerate = false;
    std::map<std::string, double> diagnostics;
    std::vector<std::string> notes;
    std::vector<PointTag> near_tags;  // populated for Borderline

    int implied_multiplicity() const {
        switch (tag) {
            case PointTag::H:
            case PointTag::E: return 2;
            case PointTag::P: return 3;
            case PointTag::SP: return 4;
            default: return -1;
        }
    }
};

namespace detail {

inline PointTag tag_of(PairType t) {
    switch (t) {
        case PairType::Hyperbolic: return PointTag::H;
        case PairType::Elliptic: return PointTag::E;
        case PairType::Parabolic: return PointTag::P;
        case PairType::InflexionReal: return PointTag::IR;
        case PairType::InflexionImaginary: return PointTag::II;
        case PairType::Degenerate: return PointTag::Degenerate;
    }
    return PointTag::Degenerate;
}

// Sign of a combination X = sum of terms, measured against the sum of the
// term magnitudes so that cancellations are what counts.
inline TolSign combo_sign(const Rational& value, double terms_scale, double tol) {
    return tol_sign(value, terms_scale, tol);
}

}  // namespace detail

// End-to-end classification at an exact base point. zero_tol = 0 demands
// exact vanishing everywhere (appropriate for constructed rational inputs);
// Newton-located points should use the default relative tolerance.
inline PointClass classify_point(const Poly2& f, const Poly2& g, const RatPoint2& at,
                                 double zero_tol = 1e-8) {
    using detail::TolSign;
    PointClass out;
    SurfaceJet jet = recenter(f, g, at, 6);

    // Theta3 gates the series elimination used by the special locus
    Rational theta3 = jet.Df(2, 0) * jet.Dg(1, 1) - jet.Df(1, 1) * jet.Dg(2, 0);
    out.diagnostics["theta3"] = to_double(theta3);

    PairAnalysis an = analyze_quadratic_pair(jet, zero_tol);
    out.diagnostics["delta"] = to_double(an.delta);

    auto run_contact_diagnostics = [&](const SurfaceJet& j) {
        try {
            ContactData cd = cone_contact(uvw_jet(j), zero_tol);
            out.diagnostics["multiplicity"] = cd.multiplicity;
            out.diagnostics["c2"] = to_double(cd.c2);
            out.diagnostics["c3"] = to_double(cd.c3);
            out.diagnostics["c4"] = to_double(cd.c4);
        } catch (const DegenerateKernelError&) {
            out.notes.push_back("cone contact: degenerate kernel, no multiplicity");
        }
    };

    if (an.borderline) {
        out.tag = PointTag::Borderline;
        for (PairType t : an.alternatives) out.near_tags.push_back(detail::tag_of(t));
        run_contact_diagnostics(jet);
        return out;
    }

    switch (an.type) {
        case PairType::Hyperbolic:
        case PairType::Elliptic: {
            out.tag = an.type == PairType::Hyperbolic ? PointTag::H : PointTag::E;
            out.nondegenerate = true;
            run_contact_diagnostics(jet);
            return out;
        }
        case PairType::Degenerate: {
            out.tag = PointTag::Degenerate;
            out.notes.push_back("quadratic pair outside the classified strata");
            run_contact_diagnostics(jet);
            return out;
        }
        case PairType::Parabolic: {
            SurfaceJet red;
            try {
                red = reduce_parabolic(jet, zero_tol);
            } catch (const Error& e) {
                out.tag = PointTag::Degenerate;
                out.notes.push_back(e.what());
                return out;
            }
            double gscale = 1.0;
            for (auto& [m, c] : red.g.terms())
                gscale = std::max(gscale, std::fabs(to_double(c)));
            for (const char* k : {"f11", "g20", "g04", "g12", "g03", "g13", "g06", "g05", "g14"}) {
                int i = k[1] - '0', j = k[2] - '0';
                out.diagnostics[k] = to_double(k[0] == 'f' ? red.mf(i, j) : red.mg(i, j));
            }
            Rational g20 = red.mg(2, 0), g04 = red.mg(0, 4);
            TolSign s04 = detail::tol_sign(g04, gscale, zero_tol);
            if (s04 == TolSign::Borderline) {
                out.tag = PointTag::Borderline;
                out.near_tags = {PointTag::P, PointTag::SP};
                run_contact_diagnostics(red);
                return out;
            }
            if (s04 != TolSign::Zero) {
                out.tag = PointTag::P;
                out.sign = sign_of(g20 * g04);
                out.nondegenerate = true;
                Rational smooth = std::max(abs_rat(red.mg(1, 2)), abs_rat(red.mg(0, 3)));
                TolSign sm = detail::tol_sign(smooth, gscale, zero_tol);
                out.versal = sm == TolSign::Pos;  // parabolic set smooth at the point
                out.diagnostics["p_smooth"] = out.versal ? 1.0 : 0.0;
                if (sm == TolSign::Borderline) out.notes.push_back("smoothness condition borderline");
                run_contact_diagnostics(red);
                return out;
            }
            // g04 = 0: special parabolic candidate
            Rational g13 = red.mg(1, 3), g06 = red.mg(0, 6);
            Rational nondeg = g13 * g13 - 4 * g20 * g06;
            double nscale = std::fabs(to_double(g13 * g13)) + std::fabs(to_double(4 * g20 * g06));
            TolSign nd = detail::combo_sign(nondeg, std::max(nscale, 1.0), zero_tol);
            out.diagnostics["sp_nondeg"] = to_double(nondeg);
            if (nd == TolSign::Zero) {
                out.tag = PointTag::Degenerate;
                out.notes.push_back("g04 = 0 and g13^2 - 4 g20 g06 = 0: beyond the classified list");
                run_contact_diagnostics(red);
                return out;
            }
            if (nd == TolSign::Borderline) {
                out.tag = PointTag::Borderline;
                out.near_tags = {PointTag::SP, PointTag::Degenerate};
                run_contact_diagnostics(red);
                return out;
            }
            out.tag = PointTag::SP;
            out.nondegenerate = true;
            // 4 g20 g06 - g13^2 < 0 puts the half-parabola branch in the
            // elliptic region, > 0 in the hyperbolic one
            out.sp_type = nd == TolSign::Pos ? SpType::Elliptic : SpType::Hyperbolic;
            Rational vers = 5 * red.mg(1, 2) * red.mg(0, 5) - 3 * red.mg(0, 3) * red.mg(1, 4);
            double vscale = std::fabs(to_double(5 * red.mg(1, 2) * red.mg(0, 5))) +
                            std::fabs(to_double(3 * red.mg(0, 3) * red.mg(1, 4)));
            TolSign vs = detail::combo_sign(vers, std::max(vscale, 1.0), zero_tol);
            out.versal = vs == TolSign::Pos || vs == TolSign::Neg;
            out.diagnostics["sp_versal"] = to_double(vers);
            if (vs == TolSign::Borderline) out.notes.push_back("versality condition borderline");
            run_contact_diagnostics(red);
            // g20 f04^2 - f11 g13 f04 + f11^2 g06 can vanish even when the
            // coefficient test passes (it always does when f carries no even
            // terms past the 2-jet and g06 = 0); the solved curve then runs
            // inside the cone and the series multiplicity overshoots 4.
            auto mult = out.diagnostics.find("multiplicity");
            if (mult != out.diagnostics.end() && mult->second >= 5)
                out.notes.push_back("canonical-extension contact multiplicity exceeds 4");
            return out;
        }
        case PairType::InflexionReal:
        case PairType::InflexionImaginary: {
            SurfaceJet red;
            try {
                red = reduce_inflexion(jet, zero_tol);
            } catch (const Error& e) {
                out.tag = PointTag::Degenerate;
                out.notes.push_back(e.what());
                return out;
            }
            double gscale = 1.0;
            for (auto& [m, c] : red.g.terms())
                gscale = std::max(gscale, std::fabs(to_double(c)));
            for (const char* k : {"g40", "g31", "g22", "g13", "g04", "g30", "g21", "g12", "g03"}) {
                int i = k[1] - '0', j = k[2] - '0';
                out.diagnostics[k] = to_double(red.mg(i, j));
            }
            out.diagnostics["f20"] = to_double(red.mf(2, 0));
            out.diagnostics["f11"] = to_double(red.mf(1, 1));
            out.diagnostics["f02"] = to_double(red.mf(0, 2));
            if (an.type == PairType::InflexionReal) {
                Rational g22 = red.mg(2, 2), g40 = red.mg(4, 0), g04 = red.mg(0, 4);
                Rational nondeg = g22 * g22 - 4 * g40 * g04;
                double nscale = std::fabs(to_double(g22 * g22)) + std::fabs(to_double(4 * g40 * g04));
                TolSign nd = detail::combo_sign(nondeg, std::max(nscale, 1.0), zero_tol);
                out.diagnostics["ir_nondeg"] = to_double(nondeg);
                if (nd == TolSign::Zero) {
                    out.tag = PointTag::Degenerate;
                    out.notes.push_back("quartic part of g is a perfect square");
                    run_contact_diagnostics(red);
                    return out;
                }
                if (nd == TolSign::Borderline) {
                    out.tag = PointTag::Borderline;
                    out.near_tags = {PointTag::IR, PointTag::Degenerate};
                    run_contact_diagnostics(red);
                    return out;
                }
                out.tag = PointTag::IR;
                out.nondegenerate = true;
                out.ir_case = nd == TolSign::Neg ? IrCase::Plus : IrCase::Minus;
                Rational vers = 9 * red.mg(3, 0) * red.mg(0, 3) - red.mg(1, 2) * red.mg(2, 1);
                double vscale = std::fabs(to_double(9 * red.mg(3, 0) * red.mg(0, 3))) +
                                std::fabs(to_double(red.mg(1, 2) * red.mg(2, 1)));
                TolSign vs = detail::combo_sign(vers, std::max(vscale, 1.0), zero_tol);
                out.versal = vs == TolSign::Pos || vs == TolSign::Neg;
                out.diagnostics["ir_versal"] = to_double(vers);
                run_contact_diagnostics(red);
                return out;
            }
            Rational g40 = red.mg(4, 0), g31 = red.mg(3, 1), g22 = red.mg(2, 2);
            Rational nondeg = g31 * g31 - 4 * g40 * g22;
            double nscale = std::fabs(to_double(g31 * g31)) + std::fabs(to_double(4 * g40 * g22));
            TolSign nd = detail::combo_sign(nondeg, std::max(nscale, 1.0), zero_tol);
            out.diagnostics["ii_nondeg"] = to_double(nondeg);
            if (nd == TolSign::Zero) {
                out.tag = PointTag::Degenerate;
                out.notes.push_back("g31^2 - 4 g40 g22 = 0: beyond the classified list");
                run_contact_diagnostics(red);
                return out;
            }
            if (nd == TolSign::Borderline) {
                out.tag = PointTag::Borderline;
                out.near_tags = {PointTag::II, PointTag::Degenerate};
                run_contact_diagnostics(red);
                return out;
            }
            out.tag = PointTag::II;
            out.nondegenerate = true;
            // the two published variants of the "not both zero" condition are
            // evaluated side by side rather than choosing one
            Rational f20 = red.mf(2, 0), f02 = red.mf(0, 2);
            Rational nbz_a = std::max(abs_rat(g31), abs_rat(f20 * g22 - f02 * g40));
            Rational nbz_b = std::max(abs_rat(g22), abs_rat(g40 - g22));
            out.diagnostics["ii_nbz_text"] = to_double(nbz_a);
            out.diagnostics["ii_nbz_prop"] = to_double(nbz_b);
            if (detail::tol_sign(nbz_a, gscale, zero_tol) == TolSign::Zero)
                out.notes.push_back("g31 and f20*g22 - f02*g40 both vanish");
            if (detail::tol_sign(nbz_b, gscale, zero_tol) == TolSign::Zero)
                out.notes.push_back("g22 and g40 - g22 both vanish");
            Rational vers = red.mg(2, 1) * red.mg(2, 1) - 3 * red.mg(1, 2) * red.mg(3, 0);
            double vscale = std::fabs(to_double(red.mg(2, 1) * red.mg(2, 1))) +
                            std::fabs(to_double(3 * red.mg(1, 2) * red.mg(3, 0)));
            TolSign vs = detail::combo_sign(vers, std::max(vscale, 1.0), zero_tol);
            out.versal = vs == TolSign::Pos || vs == TolSign::Neg;
            out.diagnostics["ii_versal"] = to_double(vers);
            run_contact_diagnostics(red);
            return out;
        }
    }
    return out;
}

inline PointClass classify_point(const Poly2& f, const Poly2& g, Point2 at, double zero_tol = 1e-8) {
    return classify_point(f, g, rationalize(at), zero_tol);
}

inline int parabolic_sign(const Poly2& f, const Poly2& g, Point2 at, double zero_tol = 1e-8) {
    PointClass pc = classify_point(f, g, at, zero_tol);
    if (pc.tag != PointTag::P || !pc.sign)
        throw Error(std::string("parabolic_sign: point classifies as ") + to_string(pc.tag));
    return *pc.sign;
}

// Local model of the bifurcation set in the unfolding plane.
struct LocalModel {
    PointTag tag = PointTag::Degenerate;
    std::vector<std::string> strata;
    std::optional<SpType> side;  // SP only
};

inline LocalModel unfolding_strata(const PointClass& cls) {
    LocalModel m;
    m.tag = cls.tag;
    switch (cls.tag) {
        case PointTag::H:
        case PointTag::E: return m;  // stable, empty model
        case PointTag::P: m.strata = {"lambda=0"}; return m;
        case PointTag::SP:
            m.side = cls.sp_type;
            m.strata = {"lambda=0"};
            if (cls.sp_type == SpType::Elliptic)
                m.strata.push_back("mu^2+4*lambda=0, mu>=0");
            else
                m.strata.push_back("mu^2-4*lambda=0, mu<=0");
            return m;
        case PointTag::IR: m.strata = {"lambda=0", "mu=0"}; return m;
        case PointTag::II: m.strata = {"point"}; return m;
        default: throw Error("unfolding_strata: no local model for this class");
    }
}

}  // namespace conecontact
