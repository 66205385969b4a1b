#include <doctest.h>

#include "ksph/catalog.hpp"
#include "ksph/instance_io.hpp"
#include "test_util.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

using namespace ksph;
using ksph_test::q;
using ksph_test::vec;

namespace {

const char* p1xp1_doc = R"({
  "root_system": {"type": "A", "rank": 1},
  "polytope": {"vertices": [["0"], ["4"]]},
  "density": {"phi_p": "auto", "multiplicity": 1},
  "valuation": {"rays": [["1"]], "lineality_basis": [], "m_minus_basis": [["1"]]}
})";

} // namespace

TEST_CASE("parse the canonical P1 x P1 document") {
    InstanceDocument doc = parse_instance(p1xp1_doc);
    CHECK(doc.datum.root_system.ambient_dim == 1);
    CHECK(doc.datum.phi_p.size() == 1);
    CHECK(doc.datum.two_rho_p == QVec{q(2)});
    Verdict v = check_kstability(doc.datum, 1e-12);
    CHECK(v.status == Status::stable);
    CHECK(v.bar.value_q == QVec{q(8, 3)});
}

TEST_CASE("malformed rationals are rejected with a path") {
    std::string bad = p1xp1_doc;
    bad.replace(bad.find("\"4\""), 3, "\"1/0\"");
    try {
        parse_instance(bad);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("/polytope/vertices/1/0") != std::string::npos);
        CHECK(e.kind == ErrorKind::input);
    }
}

TEST_CASE("missing lineality basis is reported explicitly") {
    std::string bad = R"({
      "root_system": {"type": "A", "rank": 1},
      "polytope": {"vertices": [["0"], ["4"]]},
      "valuation": {"rays": [["1"]], "m_minus_basis": [["1"]]}
    })";
    try {
        parse_instance(bad);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("lineality_basis required (may be empty list)") !=
              std::string::npos);
    }
}

TEST_CASE("syntax errors surface as input errors") {
    CHECK_THROWS_AS(parse_instance("{ not json"), Error);
    CHECK_THROWS_AS(parse_instance("[1,2,3]"), Error);
}

TEST_CASE("dimension inconsistencies are caught") {
    std::string bad = R"({
      "root_system": {"type": "A", "rank": 1},
      "polytope": {"vertices": [["0", "1"], ["4", "1"]]},
      "valuation": {"rays": [["1"]], "lineality_basis": [], "m_minus_basis": [["1"]]}
    })";
    CHECK_THROWS_AS(parse_instance(bad), Error);
}

TEST_CASE("JSON reports round trip byte-identically") {
    InstanceDocument doc = parse_instance(p1xp1_doc);
    Verdict v = check_kstability(doc.datum, 1e-12);
    std::string once = render_json(verdict_report(doc.datum, v));
    std::string twice = nlohmann::json::parse(once).dump(2) + "\n";
    CHECK(once == twice);
}

TEST_CASE("export and re-parse reproduce the catalog verdict verbatim") {
    for (const char* name : {"gl2_cpt_3", "so4_cpt_2", "complete_conics"}) {
        CatalogEntry e = get_entry(name);
        std::string exported = export_instance(e.datum);
        InstanceDocument doc = parse_instance(exported);
        std::string direct =
            render_json(verdict_report(e.datum, check_kstability(e.datum, 1e-9)));
        std::string via_file =
            render_json(verdict_report(doc.datum, check_kstability(doc.datum, 1e-9)));
        CHECK(direct == via_file);
    }
}

TEST_CASE("zeta lifts parse from decimal strings") {
    std::string doc_text = R"({
      "root_system": {"simple_roots": [["1", "-1"]], "form": [["1", "0"], ["0", "1"]]},
      "polytope": {"vertices": [["2", "-1"], ["2", "-2"], ["1", "-2"], ["-1/2", "-1/2"], ["1/2", "1/2"]]},
      "density": {"phi_p": [["1", "-1"]], "multiplicity": 2},
      "valuation": {"rays": [["1", "-1"]], "lineality_basis": [["1", "1"]], "m_minus_basis": [["1", "0"], ["0", "1"]]},
      "zeta": {"lift": ["0.25", "0.25"], "precision": 17},
      "options": {"tol": "1e-10"}
    })";
    InstanceDocument doc = parse_instance(doc_text);
    REQUIRE(doc.datum.zeta_lift.has_value());
    CHECK((*doc.datum.zeta_lift)[0] == 0.25);
    CHECK(doc.options.tol == 1e-10);
    Verdict v = check_kstability(doc.datum, doc.options.tol);
    CHECK(!v.bar.exact);
    CHECK(v.bar.error_bound > 0);
}

#ifdef KSPH_CLI_PATH
TEST_CASE("CLI exit codes") {
    std::string cli = KSPH_CLI_PATH;
    {
        std::ofstream f("/tmp/ksph_empty.json");
        f << "";
    }
    int rc_bad = std::system((cli + " check --input /tmp/ksph_empty.json >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc_bad) == 2);
    int rc_ok = std::system((cli + " catalog check gl2_cpt_3 >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc_ok) == 0);
    int rc_missing = std::system((cli + " check --input /tmp/ksph_missing_file.json >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc_missing) == 2);
    // numerical non-convergence: soliton has no stationary point on [1,2]
    {
        std::ofstream f("/tmp/ksph_diverge.json");
        f << R"({
          "root_system": {"simple_roots": [], "positive_roots": [], "form": [["1"]]},
          "polytope": {"vertices": [["1"], ["2"]]},
          "density": {"phi_p": [], "multiplicity": 1},
          "valuation": {"rays": [], "lineality_basis": [["1"]], "m_minus_basis": [["1"]]}
        })";
    }
    int rc_div = std::system((cli + " soliton --input /tmp/ksph_diverge.json >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc_div) == 3);
    // CLI round trip: catalog export | check --input reproduces catalog check
    int rc_exp = std::system(
        (cli + " catalog export so4_cpt_2 > /tmp/ksph_so4_2.json 2>/dev/null").c_str());
    CHECK(WEXITSTATUS(rc_exp) == 0);
    int rc_diff = std::system(
        (cli + " catalog check so4_cpt_2 --format json > /tmp/ksph_a.json 2>/dev/null && " +
         cli + " check --input /tmp/ksph_so4_2.json --format json > /tmp/ksph_b.json 2>/dev/null && " +
         "cmp -s /tmp/ksph_a.json /tmp/ksph_b.json")
            .c_str());
    CHECK(WEXITSTATUS(rc_diff) == 0);
}
#endif
