#include "ksph/instance_io.hpp"
#include "ksph/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace ksph {

using nlohmann::json;
using namespace linalg;

std::string dec_string(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw input_error(path + ": " + msg);
}

const json& need(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "/" + key, "required field is missing");
    return *it;
}

Rat rat_at(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (!j.is_string()) fail(path, "expected a rational as a string like \"3/2\"");
    try {
        return rat_from_string(j.get<std::string>());
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

double real_at(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) fail(path, "expected a real as a decimal string");
    const std::string s = j.get<std::string>();
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') fail(path, "malformed decimal '" + s + "'");
    return v;
}

QVec qvec_at(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of rationals");
    QVec v;
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(rat_at(j[i], path + "/" + std::to_string(i)));
    return v;
}

QMat qmat_at(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of vectors");
    QMat m;
    for (std::size_t i = 0; i < j.size(); ++i)
        m.push_back(qvec_at(j[i], path + "/" + std::to_string(i)));
    return m;
}

json qvec_to_json(const QVec& v) {
    json a = json::array();
    for (const Rat& x : v) a.push_back(rat_to_string(x));
    return a;
}

json qmat_to_json(const QMat& m) {
    json a = json::array();
    for (const QVec& v : m) a.push_back(qvec_to_json(v));
    return a;
}

json dvec_to_json(const DVec& v) {
    json a = json::array();
    for (double x : v) a.push_back(dec_string(x));
    return a;
}

RootSystemData parse_root_system(const json& j) {
    const std::string path = "/root_system";
    if (!j.is_object()) fail(path, "expected an object");
    if (j.contains("type")) {
        const json& t = need(j, "type", path);
        if (!t.is_string() || t.get<std::string>().size() != 1)
            fail(path + "/type", "expected a single letter A..G");
        char letter = t.get<std::string>()[0];
        const json& r = need(j, "rank", path);
        if (!r.is_number_integer()) fail(path + "/rank", "expected an integer");
        int center = 0;
        if (j.contains("center")) {
            if (!j["center"].is_number_integer()) fail(path + "/center", "expected an integer");
            center = j["center"].get<int>();
        }
        try {
            return build_root_system(letter, r.get<int>(), center);
        } catch (const Error& e) {
            fail(path, e.what());
        }
    }
    QMat simple = qmat_at(need(j, "simple_roots", path), path + "/simple_roots");
    QMat positive = j.contains("positive_roots")
                        ? qmat_at(j["positive_roots"], path + "/positive_roots")
                        : simple;
    QMat form = qmat_at(need(j, "form", path), path + "/form");
    try {
        return make_root_system(std::move(simple), std::move(positive), std::move(form));
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

MomentPolytope parse_polytope(const json& j) {
    const std::string path = "/polytope";
    if (!j.is_object()) fail(path, "expected an object");
    try {
        if (j.contains("vertices"))
            return MomentPolytope::from_vertices(qmat_at(j["vertices"], path + "/vertices"));
        if (j.contains("halfspaces")) {
            std::vector<Halfspace> hs;
            const json& arr = j["halfspaces"];
            if (!arr.is_array()) fail(path + "/halfspaces", "expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                std::string hp = path + "/halfspaces/" + std::to_string(i);
                hs.push_back(Halfspace{qvec_at(need(arr[i], "normal", hp), hp + "/normal"),
                                       rat_at(need(arr[i], "offset", hp), hp + "/offset")});
            }
            return MomentPolytope::from_halfspaces(hs);
        }
    } catch (const Error& e) {
        if (std::string(e.what()).rfind("/", 0) == 0) throw;
        fail(path, e.what());
    }
    fail(path, "expected either \"vertices\" or \"halfspaces\"");
}

} // namespace

InstanceDocument parse_instance(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw input_error(std::string("JSON syntax error: ") + e.what());
    }
    if (!j.is_object()) throw input_error("/: instance document must be an object");

    RootSystemData rs = parse_root_system(need(j, "root_system", ""));
    MomentPolytope poly = parse_polytope(need(j, "polytope", ""));

    const json& val = need(j, "valuation", "");
    QMat rays = val.contains("rays") ? qmat_at(val["rays"], "/valuation/rays") : QMat{};
    if (!val.contains("lineality_basis"))
        fail("/valuation", "lineality_basis required (may be empty list)");
    QMat lin = qmat_at(val["lineality_basis"], "/valuation/lineality_basis");
    QMat mm = qmat_at(need(val, "m_minus_basis", "/valuation"), "/valuation/m_minus_basis");
    ValuationConeData cone;
    try {
        cone = ValuationConeData::make(std::move(rays), std::move(lin), std::move(mm));
    } catch (const Error& e) {
        fail("/valuation", e.what());
    }

    std::optional<QMat> phi_p;
    unsigned multiplicity = 1;
    if (j.contains("density")) {
        const json& dj = j["density"];
        if (!dj.is_object()) fail("/density", "expected an object");
        if (dj.contains("phi_p")) {
            const json& pj = dj["phi_p"];
            if (pj.is_string()) {
                if (pj.get<std::string>() != "auto")
                    fail("/density/phi_p", "expected \"auto\" or an explicit list");
            } else {
                phi_p = qmat_at(pj, "/density/phi_p");
            }
        }
        if (dj.contains("multiplicity")) {
            if (!dj["multiplicity"].is_number_integer() || dj["multiplicity"].get<int>() < 1)
                fail("/density/multiplicity", "expected a positive integer");
            multiplicity = dj["multiplicity"].get<unsigned>();
        }
    }

    std::optional<DVec> zeta;
    if (j.contains("zeta")) {
        const json& zj = j["zeta"];
        if (!zj.is_object()) fail("/zeta", "expected an object");
        const json& lift = need(zj, "lift", "/zeta");
        if (!lift.is_array()) fail("/zeta/lift", "expected an array of decimal strings");
        DVec z;
        for (std::size_t i = 0; i < lift.size(); ++i)
            z.push_back(real_at(lift[i], "/zeta/lift/" + std::to_string(i)));
        zeta = std::move(z);
    }

    InstanceDocument doc;
    if (j.contains("options")) {
        const json& oj = j["options"];
        if (!oj.is_object()) fail("/options", "expected an object");
        if (oj.contains("tol")) {
            doc.options.tol = real_at(oj["tol"], "/options/tol");
            if (doc.options.tol <= 0) fail("/options/tol", "tolerance must be positive");
        }
        if (oj.contains("level")) {
            if (!oj["level"].is_number_integer() || oj["level"].get<int>() < 1)
                fail("/options/level", "expected a positive integer");
            doc.options.level = oj["level"].get<unsigned>();
        }
    }

    try {
        doc.datum = SphericalDatum::make(std::move(rs), std::move(poly), std::move(cone),
                                         std::move(phi_p), multiplicity, std::move(zeta));
    } catch (const Error& e) {
        throw input_error(std::string("/: ") + e.what());
    }
    return doc;
}

std::string export_instance(const SphericalDatum& datum) {
    json j;
    j["root_system"]["simple_roots"] = qmat_to_json(datum.root_system.simple_roots);
    j["root_system"]["positive_roots"] = qmat_to_json(datum.root_system.positive_roots);
    j["root_system"]["form"] = qmat_to_json(datum.root_system.form);
    j["polytope"]["vertices"] = qmat_to_json(datum.delta_plus.vertices());
    if (datum.phi_p_derived)
        j["density"]["phi_p"] = "auto";
    else
        j["density"]["phi_p"] = qmat_to_json(datum.phi_p_base);
    j["density"]["multiplicity"] = datum.multiplicity;
    j["valuation"]["rays"] = qmat_to_json(datum.valuation.rays);
    j["valuation"]["lineality_basis"] = qmat_to_json(datum.valuation.lineality_basis);
    j["valuation"]["m_minus_basis"] = qmat_to_json(datum.valuation.m_minus_basis);
    if (datum.zeta_lift) {
        j["zeta"]["lift"] = dvec_to_json(*datum.zeta_lift);
        j["zeta"]["precision"] = 17;
    }
    return j.dump(2) + "\n";
}

namespace {

json margins_to_json(const std::vector<MarginEntry>& margins) {
    json arr = json::array();
    for (const MarginEntry& m : margins) {
        json e;
        e["generator"] = qvec_to_json(m.generator);
        e["kind"] = m.is_lineality ? "lineality" : "ray";
        if (m.exact)
            e["value"] = rat_to_string(m.value_q);
        else {
            e["value"] = dec_string(m.value_d);
            e["error"] = dec_string(m.error);
        }
        arr.push_back(std::move(e));
    }
    return arr;
}

json bar_to_json(const BarycenterResult& bar) {
    json b;
    b["exact"] = bar.exact;
    if (bar.exact)
        b["value"] = qvec_to_json(bar.value_q);
    else
        b["value"] = dvec_to_json(bar.value_d);
    b["error_bound"] = dec_string(bar.error_bound);
    return b;
}

json warnings_to_json(const SphericalDatum& datum) {
    json w = json::array();
    for (const std::string& s : datum.warnings) w.push_back(s);
    return w;
}

} // namespace

json verdict_report(const SphericalDatum& datum, const Verdict& verdict) {
    json r;
    r["report"] = "check";
    r["status"] = status_name(verdict.status);
    r["barycenter"] = bar_to_json(verdict.bar);
    r["two_rho_p"] = qvec_to_json(datum.two_rho_p);
    r["margins"] = margins_to_json(verdict.margins);
    if (verdict.destabilizer) {
        r["destabilizer"]["generator"] = qvec_to_json(verdict.destabilizer->generator);
        r["destabilizer"]["description"] = verdict.destabilizer->description;
    }
    if (verdict.soliton) {
        r["soliton"]["zeta_lift"] = dvec_to_json(verdict.soliton->zeta_lift);
        r["soliton"]["residual"] = dec_string(verdict.soliton->residual);
    }
    r["warnings"] = warnings_to_json(datum);
    return r;
}

json barycenter_report(const SphericalDatum& datum, double tol) {
    Moments m = moments_exponential(datum.delta_plus, datum.density(), tol);
    json r;
    r["report"] = "barycenter";
    BarycenterResult bar;
    bar.exact = m.exact;
    if (m.exact) {
        bar.value_q = m.barycenter_q();
        bar.value_d = to_double(bar.value_q);
        r["mass"] = rat_to_string(m.mass);
    } else {
        bar.value_d = m.barycenter_d();
        bar.error_bound = m.error_bound;
        r["mass"] = dec_string(m.mass_d);
    }
    r["barycenter"] = bar_to_json(bar);
    r["two_rho_p"] = qvec_to_json(datum.two_rho_p);
    // margin table relative to the valuation cone generators
    json margins = json::array();
    for (const QVec& l : datum.valuation.lineality_basis) {
        json e;
        e["generator"] = qvec_to_json(l);
        e["kind"] = "lineality";
        if (m.exact) {
            e["value"] = rat_to_string(dot(sub(bar.value_q, datum.two_rho_p), l));
        } else {
            double v = 0;
            for (std::size_t i = 0; i < l.size(); ++i)
                v += (bar.value_d[i] - datum.two_rho_p[i].get_d()) * l[i].get_d();
            e["value"] = dec_string(v);
        }
        margins.push_back(std::move(e));
    }
    for (const QVec& ray : datum.valuation.rays) {
        json e;
        e["generator"] = qvec_to_json(ray);
        e["kind"] = "ray";
        if (m.exact) {
            e["value"] = rat_to_string(dot(sub(bar.value_q, datum.two_rho_p), ray));
        } else {
            double v = 0;
            for (std::size_t i = 0; i < ray.size(); ++i)
                v += (bar.value_d[i] - datum.two_rho_p[i].get_d()) * ray[i].get_d();
            e["value"] = dec_string(v);
        }
        margins.push_back(std::move(e));
    }
    r["margins"] = margins;
    r["warnings"] = warnings_to_json(datum);
    return r;
}

json quantized_report(const SphericalDatum& datum, unsigned level, double tol) {
    QuantizedSample s = quantized_barycenter(datum, level);
    BarycenterResult bar = barycenter(datum.delta_plus, datum.density(), tol);
    json r;
    r["report"] = "quantized";
    r["level"] = level;
    r["point_count"] = s.point_count;
    if (s.exact) {
        r["q_barycenter"] = qvec_to_json(s.q_barycenter);
        r["weighted_mass"] = rat_to_string(s.weighted_mass);
    } else {
        r["q_barycenter"] = dvec_to_json(s.q_barycenter_d);
        r["weighted_mass"] = dec_string(s.weighted_mass_d);
    }
    if (bar.exact)
        r["barycenter"] = qvec_to_json(bar.value_q);
    else
        r["barycenter"] = dvec_to_json(bar.value_d);
    double gap = 0;
    DVec qb = s.exact ? to_double(s.q_barycenter) : s.q_barycenter_d;
    DVec cb = bar.exact ? to_double(bar.value_q) : bar.value_d;
    for (std::size_t i = 0; i < qb.size(); ++i)
        gap = std::max(gap, std::fabs(qb[i] - cb[i]));
    r["gap_to_continuum"] = dec_string(gap);
    // margin table of the quantized barycenter against the cone generators
    json margins = json::array();
    auto add_margin = [&](const QVec& g, bool lin) {
        json e;
        e["generator"] = qvec_to_json(g);
        e["kind"] = lin ? "lineality" : "ray";
        if (s.exact) {
            e["value"] = rat_to_string(dot(sub(s.q_barycenter, datum.two_rho_p), g));
        } else {
            double v = 0;
            for (std::size_t i = 0; i < g.size(); ++i)
                v += (s.q_barycenter_d[i] - datum.two_rho_p[i].get_d()) * g[i].get_d();
            e["value"] = dec_string(v);
        }
        margins.push_back(std::move(e));
    };
    for (const QVec& l : datum.valuation.lineality_basis) add_margin(l, true);
    for (const QVec& ray : datum.valuation.rays) add_margin(ray, false);
    r["margins"] = margins;
    r["warnings"] = warnings_to_json(datum);
    return r;
}

json soliton_report(const SphericalDatum& datum, const SolitonResult& sol,
                    const Verdict& verdict_at_zeta) {
    json r = verdict_report(datum, verdict_at_zeta);
    r["report"] = "soliton";
    r["soliton"]["zeta_lift"] = dvec_to_json(sol.zeta_lift);
    r["soliton"]["residual"] = dec_string(sol.residual);
    r["soliton"]["iterations"] = sol.iterations;
    return r;
}

std::string render_json(const json& report) { return report.dump(2) + "\n"; }

namespace {

std::string scalar_to_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string vec_to_text(const json& v) {
    if (!v.is_array()) return scalar_to_text(v);
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += scalar_to_text(v[i]);
    }
    return s + ")";
}

} // namespace

std::string render_text(const json& r) {
    std::string out;
    auto line = [&](const std::string& s) { out += s + "\n"; };
    std::string kind = r.value("report", "report");
    line("== " + kind + " ==");
    if (r.contains("name")) line("name: " + r["name"].get<std::string>());
    if (r.contains("expected_status"))
        line("expected status: " + r["expected_status"].get<std::string>());
    if (r.contains("expected_barycenter"))
        line("expected barycenter: " + vec_to_text(r["expected_barycenter"]));
    if (r.contains("vertices")) {
        std::string s = "vertices:";
        for (const json& v : r["vertices"]) s += " " + vec_to_text(v);
        line(s);
    }
    if (r.contains("source_note")) line("note: " + r["source_note"].get<std::string>());
    if (r.contains("status")) line("status: " + r["status"].get<std::string>());
    if (r.contains("level")) line("level: " + r["level"].dump());
    if (r.contains("point_count")) line("lattice points: " + r["point_count"].dump());
    if (r.contains("barycenter")) {
        const json& b = r["barycenter"];
        if (b.is_object()) {
            line(std::string("barycenter: ") + vec_to_text(b["value"]) +
                 (b.value("exact", false) ? "  [exact]" : "  [error_bound " +
                  b["error_bound"].get<std::string>() + "]"));
        } else {
            line("barycenter: " + vec_to_text(b));
        }
    }
    if (r.contains("q_barycenter")) line("q_barycenter: " + vec_to_text(r["q_barycenter"]));
    if (r.contains("gap_to_continuum"))
        line("gap to continuum: " + r["gap_to_continuum"].get<std::string>());
    if (r.contains("mass")) line("mass: " + scalar_to_text(r["mass"]));
    if (r.contains("weighted_mass")) line("weighted mass: " + scalar_to_text(r["weighted_mass"]));
    if (r.contains("two_rho_p")) line("2rho_P: " + vec_to_text(r["two_rho_p"]));
    if (r.contains("soliton")) {
        line("zeta: " + vec_to_text(r["soliton"]["zeta_lift"]));
        line("residual: " + r["soliton"]["residual"].get<std::string>());
        if (r["soliton"].contains("iterations"))
            line("iterations: " + r["soliton"]["iterations"].dump());
    }
    if (r.contains("margins")) {
        line("margins:");
        for (const json& m : r["margins"]) {
            std::string s = "  " + m["kind"].get<std::string>() + " " +
                            vec_to_text(m["generator"]) + " -> " + scalar_to_text(m["value"]);
            if (m.contains("error")) s += " +- " + m["error"].get<std::string>();
            line(s);
        }
    }
    if (r.contains("destabilizer"))
        line("destabilizer: " + vec_to_text(r["destabilizer"]["generator"]) + "  " +
             r["destabilizer"]["description"].get<std::string>());
    if (r.contains("warnings"))
        for (const json& w : r["warnings"]) line("warning: " + w.get<std::string>());
    return out;
}

} // namespace ksph
