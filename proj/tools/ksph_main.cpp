#include "ksph/catalog.hpp"
#include "ksph/instance_io.hpp"
#include "ksph/kstab.hpp"
#include "ksph/quantized.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace ksph;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open input file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit(const nlohmann::json& report, const std::string& format) {
    if (format == "json")
        std::cout << render_json(report);
    else
        std::cout << render_text(report);
}

int dispatch(int argc, char** argv) {
    CLI::App app{"modified K-stability of Q-Fano spherical varieties from moment polytopes"};
    app.require_subcommand(1);

    std::string input, format = "text", cat_action, cat_name;
    double tol = 1e-9;
    int max_iter = 100;
    unsigned level = 20;

    CLI::App* check = app.add_subcommand("check", "stability verdict for an instance file");
    check->add_option("--input", input, "instance JSON file")->required();
    check->add_option("--tol", tol, "integration tolerance");
    check->add_option("--format", format, "json|text")->check(CLI::IsMember({"json", "text"}));

    CLI::App* soliton = app.add_subcommand("soliton", "solve for the soliton vector field");
    soliton->add_option("--input", input, "instance JSON file")->required();
    soliton->add_option("--tol", tol, "gradient residual target");
    soliton->add_option("--max-iter", max_iter, "Newton iteration cap");
    soliton->add_option("--format", format, "json|text")->check(CLI::IsMember({"json", "text"}));

    CLI::App* bar = app.add_subcommand("barycenter", "barycenter, mass and margins");
    bar->add_option("--input", input, "instance JSON file")->required();
    bar->add_option("--tol", tol, "integration tolerance");
    bar->add_option("--format", format, "json|text")->check(CLI::IsMember({"json", "text"}));

    CLI::App* quant = app.add_subcommand("quantized", "lattice-sum barycenter at a level");
    quant->add_option("--input", input, "instance JSON file")->required();
    quant->add_option("--level", level, "quantization level k")->required();
    quant->add_option("--format", format, "json|text")->check(CLI::IsMember({"json", "text"}));

    CLI::App* cat = app.add_subcommand("catalog", "built-in instances");
    cat->add_option("action", cat_action, "list|show|check|export")->required();
    cat->add_option("name", cat_name, "entry name");
    cat->add_option("--tol", tol, "integration tolerance");
    cat->add_option("--format", format, "json|text")->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (check->parsed()) {
        InstanceDocument doc = parse_instance(slurp(input));
        if (!check->count("--tol")) tol = doc.options.tol;
        emit(verdict_report(doc.datum, check_kstability(doc.datum, tol)), format);
        return 0;
    }
    if (soliton->parsed()) {
        InstanceDocument doc = parse_instance(slurp(input));
        if (!soliton->count("--tol")) tol = doc.options.tol;
        SolitonResult sol = solve_soliton(doc.datum.without_zeta(), tol, max_iter);
        SphericalDatum at = doc.datum.with_zeta(sol.zeta_lift);
        Verdict v = check_kstability(at, std::min(tol * 1e-2, 1e-12), sol.residual);
        emit(soliton_report(at, sol, v), format);
        return 0;
    }
    if (bar->parsed()) {
        InstanceDocument doc = parse_instance(slurp(input));
        if (!bar->count("--tol")) tol = doc.options.tol;
        emit(barycenter_report(doc.datum, tol), format);
        return 0;
    }
    if (quant->parsed()) {
        InstanceDocument doc = parse_instance(slurp(input));
        emit(quantized_report(doc.datum, level, doc.options.tol), format);
        return 0;
    }
    if (cat->parsed()) {
        if (cat_action == "list") {
            for (const std::string& n : list_entries()) std::cout << n << "\n";
            return 0;
        }
        if (cat_name.empty()) throw input_error("catalog " + cat_action + " needs an entry name");
        CatalogEntry entry = get_entry(cat_name);
        if (cat_action == "show") {
            nlohmann::json r;
            r["report"] = "catalog-entry";
            r["name"] = entry.name;
            r["expected_status"] = expected_status_name(entry.expected_status);
            if (entry.expected_barycenter) {
                nlohmann::json b = nlohmann::json::array();
                for (const Rat& x : *entry.expected_barycenter) b.push_back(rat_to_string(x));
                r["expected_barycenter"] = b;
            }
            r["source_note"] = entry.source_note;
            r["vertices"] = nlohmann::json::parse(export_instance(entry.datum))["polytope"]["vertices"];
            emit(r, format);
            return 0;
        }
        if (cat_action == "check") {
            emit(verdict_report(entry.datum, check_kstability(entry.datum, tol)), format);
            return 0;
        }
        if (cat_action == "export") {
            std::cout << export_instance(entry.datum);
            return 0;
        }
        throw input_error("unknown catalog action '" + cat_action + "'");
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind) {
        case ErrorKind::input: return 2;
        case ErrorKind::numeric: return 3;
        case ErrorKind::internal: return 4;
        }
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
