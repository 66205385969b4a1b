#include <doctest.h>

#include "ksph/catalog.hpp"
#include "ksph/quantized.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>

using namespace ksph;
using namespace ksph::linalg;
using ksph_test::q;
using ksph_test::vec;

TEST_CASE("Weyl dimension formula") {
    RootSystemData a1 = build_root_system('A', 1);
    CHECK(weyl_dimension(a1, vec({q(3)})) == q(4));
    CHECK(weyl_dimension(a1, vec({q(0)})) == q(1));

    RootSystemData a2 = build_root_system('A', 2);
    CHECK(weyl_dimension(a2, a2.rho) == q(8));   // adjoint representation
    CHECK(weyl_dimension(a2, zeros(2)) == q(1));
    CHECK(is_dominant(a2, a2.rho));
    CHECK(!is_dominant(a2, vec({q(-1), q(0)})));
}

TEST_CASE("quantized barycenter of P1 x P1 at level one") {
    CatalogEntry e = get_entry("p1xp1_sl2");
    QuantizedSample s = quantized_barycenter(e.datum, 1);
    CHECK(s.exact);
    CHECK(s.point_count == 5);
    CHECK(s.weighted_mass == q(15));   // 1+2+3+4+5
    CHECK(s.q_barycenter == QVec{q(8, 3)});

    // direct five-term oracle: weights dim V_lambda = lambda + 1
    Rat mass = 0, mom = 0;
    for (long l = 0; l <= 4; ++l) {
        Rat w = weyl_dimension(e.datum.root_system, vec({q(l)}));
        CHECK(w == q(l + 1));
        mass += w;
        mom += w * q(l);
    }
    CHECK(mom / mass == q(8, 3));
}

TEST_CASE("single lattice point polytope") {
    RootSystemData rs = build_root_system('A', 1);
    MomentPolytope pt = MomentPolytope::from_vertices({vec({q(2)})});
    ValuationConeData vc = ValuationConeData::make({vec({q(1)})}, {}, {vec({q(1)})});
    SphericalDatum d = SphericalDatum::make(rs, pt, vc, QMat{rs.positive_roots[0]}, 1,
                                            std::nullopt);
    for (unsigned k = 1; k <= 3; ++k) {
        QuantizedSample s = quantized_barycenter(d, k);
        CHECK(s.point_count == 1);
        CHECK(s.q_barycenter == QVec{q(2)});
    }
}

TEST_CASE("gl2_cpt_3 at level 50 approaches the continuum barycenter") {
    CatalogEntry e = get_entry("gl2_cpt_3");
    QuantizedSample s = quantized_barycenter(e.datum, 50);
    CHECK(s.exact);
    Rat target_x = q(2343, 1750);
    CHECK(Rat(abs(s.q_barycenter[0] - target_x)).get_d() < 2e-2);
    CHECK(Rat(abs(s.q_barycenter[1] + target_x)).get_d() < 2e-2);
}

TEST_CASE("quantized Futaki values") {
    CatalogEntry p1 = get_entry("p1xp1_sl2");
    CHECK(quantized_futaki(p1.datum, 1, vec({q(0)})).value_q == q(0));
    CHECK(quantized_futaki(p1.datum, 1, vec({q(1)})).value_q == q(2, 3));

    CatalogEntry so4 = get_entry("so4_cpt_3");
    FutakiValue qf = quantized_futaki(so4.datum, 40, vec({q(1), q(-1)}));
    FutakiValue cf = futaki_pairing(so4.datum, vec({q(1), q(-1)}), 1e-12);
    CHECK(qf.value_q < 0);
    CHECK(cf.value_q < 0);
}

TEST_CASE("exact sums are order independent") {
    CatalogEntry e = get_entry("so4_cpt_1");
    QuantizedSample s = quantized_barycenter(e.datum, 7);
    CHECK(s.exact);
    // independent oracle: re-sum with the list API in reversed order
    QMat pts = e.datum.delta_plus.lattice_points(7, e.datum.valuation.m_minus_basis,
                                                 e.datum.two_rho_p);
    std::reverse(pts.begin(), pts.end());
    CHECK(pts.size() == s.point_count);
    Rat mass = 0;
    QVec mom = zeros(2);
    const RootSystemData& rs = e.datum.root_system;
    for (const QVec& lam : pts) {
        Rat w = 1;
        QVec lam_k = scale(q(1, 7), lam);
        QVec shifted = add(lam, rs.rho);   // level-k weights carry the full rho shift
        for (const QVec& a : e.datum.phi_p)
            w *= rs.kappa(a, shifted) / rs.kappa(a, rs.rho);
        mass += w;
        mom = add(mom, scale(w, lam_k));
    }
    CHECK(mom[0] / mass == s.q_barycenter[0]);
    CHECK(mom[1] / mass == s.q_barycenter[1]);
}

TEST_CASE("quantized gap contracts with the level") {
    CatalogEntry e = get_entry("so4_cpt_1");
    BarycenterResult bar = barycenter(e.datum.delta_plus, e.datum.density(), 1e-12);
    auto gap_at = [&](unsigned k) {
        QuantizedSample s = quantized_barycenter(e.datum, k);
        double g = 0;
        for (int i = 0; i < 2; ++i)
            g = std::max(g, std::fabs(Rat(s.q_barycenter[i] - bar.value_q[i]).get_d()));
        return g;
    };
    double g20 = gap_at(20), g40 = gap_at(40), g80 = gap_at(80);
    CHECK(g40 <= g20 / 1.5 + 1e-12);
    CHECK(g80 <= g40 / 1.5 + 1e-12);
}

TEST_CASE("sign agreement with the continuum pairing at level 100") {
    for (const std::string& name : list_entries()) {
        CatalogEntry e = get_entry(name);
        QMat gens = e.datum.valuation.generators();
        for (const QVec& g : gens) {
            FutakiValue cont = futaki_pairing(e.datum, g, 1e-12);
            FutakiValue disc = quantized_futaki(e.datum, 100, g);
            double gap = std::fabs(disc.value_q.get_d() - cont.value_q.get_d());
            if (std::fabs(cont.value_q.get_d()) > 2 * gap) {
                CHECK_MESSAGE((cont.value_q > 0) == (disc.value_q > 0), name);
                CHECK_MESSAGE((cont.value_q < 0) == (disc.value_q < 0), name);
            }
        }
    }
}

TEST_CASE("errors on bad input") {
    CatalogEntry e = get_entry("p1xp1_sl2");
    CHECK_THROWS_AS(quantized_barycenter(e.datum, 0), Error);
    // a polytope shifted away from the lattice coset has no points
    RootSystemData rs = build_root_system('A', 1);
    MomentPolytope seg =
        MomentPolytope::from_vertices({vec({q(1, 3)}), vec({q(2, 3)})});
    ValuationConeData vc = ValuationConeData::make({vec({q(1)})}, {}, {vec({q(1)})});
    SphericalDatum d = SphericalDatum::make(rs, seg, vc, QMat{rs.positive_roots[0]}, 1,
                                            std::nullopt);
    CHECK_THROWS_AS(quantized_barycenter(d, 1), Error);
}
