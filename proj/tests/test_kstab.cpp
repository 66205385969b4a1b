#include <doctest.h>

#include "ksph/catalog.hpp"
#include "ksph/kstab.hpp"
#include "test_util.hpp"

#include <cmath>
#include <random>

using namespace ksph;
using namespace ksph::linalg;
using ksph_test::q;
using ksph_test::vec;

namespace {

// toric datum: no roots, prescribed lineality over a segment [a, b]
SphericalDatum toric_segment(Rat a, Rat b) {
    RootSystemData rs;
    rs.ambient_dim = 1;
    rs.form = {{q(1)}};
    rs.rho = vec({q(0)});
    MomentPolytope seg = MomentPolytope::from_vertices({QVec{a}, QVec{b}});
    ValuationConeData vc =
        ValuationConeData::make({}, {vec({q(1)})}, {vec({q(1)})});
    return SphericalDatum::make(rs, seg, vc, QMat{}, 1, std::nullopt);
}

} // namespace

TEST_CASE("futaki pairing on the rank-one examples") {
    CatalogEntry p1 = get_entry("p1xp1_sl2");
    FutakiValue f = futaki_pairing(p1.datum, vec({q(1)}), 1e-12);
    CHECK(f.exact);
    CHECK(f.value_q == q(2, 3));

    FutakiValue z = futaki_pairing(p1.datum, vec({q(0)}), 1e-12);
    CHECK(z.value_q == q(0));

    CatalogEntry g3 = get_entry("gl2_cpt_3");
    FutakiValue c = futaki_pairing(g3.datum, vec({q(1), q(1)}), 1e-12);
    CHECK(c.exact);
    CHECK(c.value_q == q(0));   // bar - 2rho is orthogonal to the center
}

TEST_CASE("verdicts on the SO4 family") {
    Verdict v1 = check_kstability(get_entry("so4_cpt_1").datum, 1e-12);
    CHECK(v1.status == Status::stable);

    Verdict v3 = check_kstability(get_entry("so4_cpt_3").datum, 1e-12);
    CHECK(v3.status == Status::unstable);
    REQUIRE(v3.destabilizer.has_value());
    CHECK(v3.destabilizer->generator == vec({q(1), q(-1)}));
    // the certificate margin is strictly negative
    for (const MarginEntry& m : v3.margins)
        if (m.generator == v3.destabilizer->generator) CHECK(m.value_q < 0);
}

TEST_CASE("exact margins on gl2_cpt_3") {
    Verdict v = check_kstability(get_entry("gl2_cpt_3").datum, 1e-12);
    CHECK(v.status == Status::stable);
    REQUIRE(v.margins.size() == 2);
    CHECK(v.margins[0].is_lineality);
    CHECK(v.margins[0].value_q == q(0));
    CHECK(v.margins[1].value_q == q(593, 875));
    CHECK(v.bar.exact);
    CHECK(v.bar.value_q == vec({q(2343, 1750), q(-2343, 1750)}));
}

TEST_CASE("semistable boundary case") {
    // symmetric segment puts the barycenter exactly on the ray boundary
    RootSystemData rs;
    rs.ambient_dim = 1;
    rs.form = {{q(1)}};
    rs.rho = vec({q(0)});
    MomentPolytope seg = MomentPolytope::from_vertices({vec({q(-1)}), vec({q(1)})});
    ValuationConeData vc = ValuationConeData::make({vec({q(1)})}, {}, {vec({q(1)})});
    SphericalDatum d = SphericalDatum::make(rs, seg, vc, QMat{}, 1, std::nullopt);
    Verdict v = check_kstability(d, 1e-12);
    CHECK(v.status == Status::semistable_not_stable);
}

TEST_CASE("sign coherence between the verdict and the pairing") {
    for (const char* name : {"so4_cpt_1", "gl2_cpt_2", "so4_cpt_2"}) {
        CatalogEntry e = get_entry(name);
        Verdict v = check_kstability(e.datum, 1e-12);
        bool all_pos = true;
        for (const QVec& ray : e.datum.valuation.rays) {
            FutakiValue f = futaki_pairing(e.datum, ray, 1e-12);
            all_pos = all_pos && f.value_q > 0;
        }
        for (const QVec& l : e.datum.valuation.lineality_basis) {
            FutakiValue f = futaki_pairing(e.datum, l, 1e-12);
            all_pos = all_pos && f.value_q == 0;
        }
        CHECK((v.status == Status::stable) == all_pos);
    }
}

TEST_CASE("soliton on a symmetric toric segment is trivial") {
    SphericalDatum d = toric_segment(q(-1), q(1));
    SolitonResult s = solve_soliton(d, 1e-12, 50);
    CHECK(s.converged);
    CHECK(s.residual <= 1e-12);
    CHECK(s.zeta_lift[0] == 0.0);
}

TEST_CASE("soliton on [-1,2] matches a scalar bisection oracle") {
    SphericalDatum d = toric_segment(q(-1), q(2));
    SolitonResult s = solve_soliton(d, 1e-12, 80);
    CHECK(s.converged);

    // oracle: solve int_{-1}^{2} p e^{-2 p t} dp = 0 by bisection with
    // high-order Gauss-Legendre on the interval (independent path)
    auto moment = [](double t) {
        static const double gx[] = {-0.9815606342467192, -0.9041172563704749,
                                    -0.7699026741943047, -0.5873179542866175,
                                    -0.3678314989981802, -0.1252334085114689,
                                    0.1252334085114689,  0.3678314989981802,
                                    0.5873179542866175,  0.7699026741943047,
                                    0.9041172563704749,  0.9815606342467192};
        static const double gw[] = {0.0471753363865118, 0.1069393259953184,
                                    0.1600783285433462, 0.2031674267230659,
                                    0.2334925365383548, 0.2491470458134028,
                                    0.2491470458134028, 0.2334925365383548,
                                    0.2031674267230659, 0.1600783285433462,
                                    0.1069393259953184, 0.0471753363865118};
        double s2 = 0;
        // split [-1,2] into 12 panels for safety
        for (int p = 0; p < 12; ++p) {
            double a = -1.0 + 3.0 * p / 12, b = -1.0 + 3.0 * (p + 1) / 12;
            for (int i = 0; i < 12; ++i) {
                double x = 0.5 * (a + b) + 0.5 * (b - a) * gx[i];
                s2 += 0.5 * (b - a) * gw[i] * x * std::exp(-2 * x * t);
            }
        }
        return s2;
    };
    double lo = -5, hi = 5;
    REQUIRE(moment(lo) > 0);
    REQUIRE(moment(hi) < 0);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (moment(mid) > 0 ? lo : hi) = mid;
    }
    double t_oracle = 0.5 * (lo + hi);
    CHECK(std::fabs(s.zeta_lift[0] - t_oracle) <= 1e-10);
}

TEST_CASE("soliton for gl2_cpt_4 and the verdict at the solved field") {
    CatalogEntry e = get_entry("gl2_cpt_4");
    Verdict at_zero = check_kstability(e.datum, 1e-12);
    CHECK(at_zero.status == Status::unstable);   // central margin is nonzero

    SolitonResult s = solve_soliton(e.datum, 1e-11, 60);
    CHECK(s.converged);
    CHECK(s.residual <= 1e-11);
    // zeta = t (1,1) with t near the prototype value
    CHECK(std::fabs(s.zeta_lift[0] - s.zeta_lift[1]) < 1e-12);
    CHECK(std::fabs(s.zeta_lift[0] - 0.272977) < 1e-4);

    Verdict at_z = check_kstability(e.datum.with_zeta(s.zeta_lift), 1e-13, s.residual);
    CHECK(at_z.status == Status::stable);
    // the modified ray margin stays comfortably positive
    for (const MarginEntry& m : at_z.margins)
        if (!m.is_lineality) CHECK(m.value_d > 0.5);
}

TEST_CASE("soliton optimality: pairing vanishes on the lineality") {
    CatalogEntry e = get_entry("gl2_cpt_5");
    SolitonResult s = solve_soliton(e.datum, 1e-11, 60);
    CHECK(s.converged);
    SphericalDatum at = e.datum.with_zeta(s.zeta_lift);
    for (const QVec& l : e.datum.valuation.lineality_basis) {
        FutakiValue f = futaki_pairing(at, l, 1e-13);
        CHECK(std::fabs(f.value_d) <= 1e-11);
    }
}

TEST_CASE("gradient matches central finite differences") {
    CatalogEntry e = get_entry("gl2_cpt_4");
    auto h_of = [&](double t) {
        DHDensity d = e.datum.density();
        d.set_zeta(e.datum.two_rho_p, {t, t});
        Moments m = moments_exponential(e.datum.delta_plus, d, 1e-13);
        return std::log(m.mass_d);
    };
    auto grad_of = [&](double t) {
        SphericalDatum at = e.datum.with_zeta({t, t});
        BarycenterResult b = barycenter(at.delta_plus, at.density(), 1e-13);
        double g = 0;
        for (int i = 0; i < 2; ++i)
            g += -2.0 * (b.value_d[i] - e.datum.two_rho_p[i].get_d());
        return g;
    };
    double t0 = 0.1;
    double g = grad_of(t0);
    double e1 = std::fabs((h_of(t0 + 1e-3) - h_of(t0 - 1e-3)) / 2e-3 - g);
    double e2 = std::fabs((h_of(t0 + 5e-4) - h_of(t0 - 5e-4)) / 1e-3 - g);
    double order = std::log(e1 / e2) / std::log(2.0);
    CHECK(order >= 1.9);
}

TEST_CASE("convexity of the log mass along segments") {
    CatalogEntry e = get_entry("gl2_cpt_4");
    auto h_of = [&](double t) {
        DHDensity d = e.datum.density();
        d.set_zeta(e.datum.two_rho_p, {t, t});
        Moments m = moments_exponential(e.datum.delta_plus, d, 1e-12);
        return std::log(m.mass_d);
    };
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        double a = u(rng), b = u(rng);
        CHECK(h_of(0.5 * (a + b)) <= 0.5 * (h_of(a) + h_of(b)) + 1e-9);
    }
}

TEST_CASE("Hessian is positive semidefinite (exact characteristic test)") {
    CatalogEntry e = get_entry("so4_cpt_1");
    Moments m = moments_polynomial_exact(e.datum.delta_plus,
                                         e.datum.density().linear_forms);
    QVec bar = m.barycenter_q();
    QMat cov(2, zeros(2));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            cov[i][j] = 4 * (m.second[i][j] / m.mass - bar[i] * bar[j]);
    QVec mins = char_poly_minor_sums(cov);
    for (const Rat& c : mins) CHECK(c >= 0);
    // full-dimensional polytope: strictly positive definite
    CHECK(is_positive_definite(cov));
}

TEST_CASE("degeneration classification") {
    CatalogEntry e = get_entry("gl2_cpt_3");
    CHECK(classify_degeneration(e.datum, vec({q(1), q(1)})) ==
          DegenerationType::product_type);
    CHECK(classify_degeneration(e.datum, vec({q(2), q(0)})) ==
          DegenerationType::horospherical_central_fiber);   // ray + lineality
    CHECK_THROWS_AS(classify_degeneration(e.datum, vec({q(-1), q(1)})), Error);

    CatalogEntry so4 = get_entry("so4_cpt_1");
    CHECK(classify_degeneration(so4.datum, vec({q(1), q(1)})) ==
          DegenerationType::proper_spherical);   // a single extreme ray
    CHECK(classify_degeneration(so4.datum, vec({q(2), q(0)})) ==
          DegenerationType::horospherical_central_fiber);
}

TEST_CASE("datum validation") {
    CatalogEntry e = get_entry("so4_cpt_1");
    // zeta requires a linear part
    CHECK_THROWS_AS(SphericalDatum::make(e.datum.root_system, e.datum.delta_plus,
                                         e.datum.valuation, e.datum.phi_p_base, 2,
                                         DVec{0.1, 0.0}),
                    Error);
    CatalogEntry g = get_entry("gl2_cpt_3");
    // zeta off the lineality span is rejected
    CHECK_THROWS_AS(SphericalDatum::make(g.datum.root_system, g.datum.delta_plus,
                                         g.datum.valuation, g.datum.phi_p_base, 2,
                                         DVec{0.1, -0.1}),
                    Error);
    // on the span it is accepted
    SphericalDatum ok = SphericalDatum::make(g.datum.root_system, g.datum.delta_plus,
                                             g.datum.valuation, g.datum.phi_p_base, 2,
                                             DVec{0.25, 0.25});
    CHECK(ok.zeta_lift.has_value());
}

TEST_CASE("soliton solve diverges when 2rho_P is outside the polytope") {
    // segment [1,2] with uniform density: the gradient -2 bar never vanishes
    SphericalDatum d = toric_segment(q(1), q(2));
    CHECK_THROWS_AS(solve_soliton(d, 1e-10, 200), Error);
    try {
        solve_soliton(d, 1e-10, 200);
    } catch (const Error& e) {
        CHECK(e.kind == ErrorKind::numeric);
    }
}

TEST_CASE("flag-manifold degeneration: point polytope at 2rho_P is stable") {
    RootSystemData a2 = build_root_system('A', 2);
    // a regular dominant weight keeps all positive roots in Phi_P
    MomentPolytope pt = MomentPolytope::from_vertices({scale(q(2), a2.rho)});
    QMat phi = derive_phi_p(a2, pt);
    CHECK(phi.size() == 3);
    SphericalDatum d = SphericalDatum::make(a2, pt, ValuationConeData::make({}, {}, {}),
                                            std::nullopt, 1, std::nullopt);
    CHECK(d.two_rho_p == scale(q(2), a2.rho));
    Verdict v = check_kstability(d, 1e-12);
    CHECK(v.status == Status::stable);
    CHECK(v.bar.value_q == scale(q(2), a2.rho));
}

TEST_CASE("positioning warning fires when vertices leave span(M_-)") {
    RootSystemData rs;
    rs.ambient_dim = 2;
    rs.form = identity(2);
    rs.rho = zeros(2);
    MomentPolytope tri = MomentPolytope::from_vertices(
        {vec({q(0), q(0)}), vec({q(2), q(0)}), vec({q(0), q(2)})});
    ValuationConeData vc = ValuationConeData::make({vec({q(1), q(0)})}, {},
                                                   {vec({q(1), q(0)})});
    SphericalDatum d = SphericalDatum::make(rs, tri, vc, QMat{}, 1, std::nullopt);
    CHECK(!d.warnings.empty());
}
