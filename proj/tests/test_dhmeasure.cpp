#include <doctest.h>

#include "ksph/dhmeasure.hpp"
#include "test_util.hpp"

#include <cmath>
#include <random>

using namespace ksph;
using namespace ksph::linalg;
using ksph_test::q;
using ksph_test::vec;

namespace {

QMat gl2_pentagon() {
    return {vec({q(2), q(-1)}), vec({q(2), q(-2)}), vec({q(1), q(-2)}),
            vec({q(-1, 2), q(-1, 2)}), vec({q(1, 2), q(1, 2)})};
}

} // namespace

TEST_CASE("exact moments on the segment with linear density") {
    MomentPolytope seg = MomentPolytope::from_vertices({vec({q(0)}), vec({q(4)})});
    Moments m = moments_polynomial_exact(seg, {vec({q(1)})});
    CHECK(m.mass == q(8));
    CHECK(m.first == QVec{q(64, 3)});
    CHECK(m.barycenter_q() == QVec{q(8, 3)});
}

TEST_CASE("exact moments on the unit triangle with trivial density") {
    MomentPolytope tri = MomentPolytope::from_vertices(
        {vec({q(0), q(0)}), vec({q(1), q(0)}), vec({q(0), q(1)})});
    Moments m = moments_polynomial_exact(tri, {});
    CHECK(m.mass == q(1, 2));
    CHECK(m.first == vec({q(1, 6), q(1, 6)}));
    CHECK(m.barycenter_q() == vec({q(1, 3), q(1, 3)}));
}

TEST_CASE("exact barycenter of the GL2 pentagon") {
    MomentPolytope pent = MomentPolytope::from_vertices(gl2_pentagon());
    Moments m = moments_polynomial_exact(pent, {vec({q(1), q(-1)}), vec({q(1), q(-1)})});
    CHECK(m.barycenter_q() == vec({q(2343, 1750), q(-2343, 1750)}));
}

TEST_CASE("additivity over the triangulation") {
    MomentPolytope pent = MomentPolytope::from_vertices(gl2_pentagon());
    QMat forms = {vec({q(1), q(-1)}), vec({q(1), q(-1)})};
    Moments whole = moments_polynomial_exact(pent, forms);
    Rat mass = 0;
    QVec first = zeros(2);
    for (const Simplex& s : pent.triangulate()) {
        Moments part = moments_polynomial_exact(MomentPolytope::from_vertices(s.vertices),
                                                forms);
        mass += part.mass;
        first = add(first, part.first);
    }
    CHECK(mass == whole.mass);
    CHECK(first == whole.first);
}

TEST_CASE("homogeneous scaling of the polytope scales the barycenter") {
    MomentPolytope pent = MomentPolytope::from_vertices(gl2_pentagon());
    QMat forms = {vec({q(1), q(-1)}), vec({q(1), q(-1)})};
    QVec bar = moments_polynomial_exact(pent, forms).barycenter_q();
    QMat scaled;
    for (const QVec& v : pent.vertices()) scaled.push_back(scale(q(3, 2), v));
    QVec bar2 = moments_polynomial_exact(MomentPolytope::from_vertices(scaled), forms)
                    .barycenter_q();
    CHECK(bar2 == scale(q(3, 2), bar));
}

TEST_CASE("barycenter lies in the relative interior for positive densities") {
    MomentPolytope pent = MomentPolytope::from_vertices(gl2_pentagon());
    QVec bar = moments_polynomial_exact(pent, {vec({q(1), q(-1)}), vec({q(1), q(-1)})})
                   .barycenter_q();
    CHECK(pent.contains(bar, MomentPolytope::Mode::relative_interior));

    MomentPolytope seg = MomentPolytope::from_vertices({vec({q(0)}), vec({q(4)})});
    QVec bseg = moments_polynomial_exact(seg, {vec({q(1)})}).barycenter_q();
    CHECK(seg.contains(bseg, MomentPolytope::Mode::relative_interior));
}

TEST_CASE("P2 barycenter and the point polytope") {
    MomentPolytope seg = MomentPolytope::from_vertices({vec({q(0)}), vec({q(6)})});
    DHDensity d;
    d.linear_forms = {vec({q(1)})};
    BarycenterResult b = barycenter(seg, d, 1e-12);
    CHECK(b.exact);
    CHECK(b.value_q == QVec{q(4)});

    MomentPolytope pt = MomentPolytope::from_vertices({vec({q(3), q(1)})});
    DHDensity dp;
    dp.linear_forms = {vec({q(1), q(0)})};
    BarycenterResult bp = barycenter(pt, dp, 1e-12);
    CHECK(bp.value_q == vec({q(3), q(1)}));
}

TEST_CASE("zero mass is an error") {
    MomentPolytope pt = MomentPolytope::from_vertices({vec({q(0)})});
    DHDensity d;
    d.linear_forms = {vec({q(1)})};
    CHECK_THROWS_AS(barycenter(pt, d, 1e-12), Error);
}

TEST_CASE("exponential path reduces to the exact one at zeta = 0") {
    MomentPolytope pent = MomentPolytope::from_vertices(gl2_pentagon());
    DHDensity d;
    d.linear_forms = {vec({q(1), q(-1)}), vec({q(1), q(-1)})};
    Moments m = moments_exponential(pent, d, 1e-10);
    CHECK(m.exact);
    CHECK(m.error_bound == 0.0);
}

TEST_CASE("closed-form 1d exponential integral") {
    MomentPolytope seg = MomentPolytope::from_vertices({vec({q(0)}), vec({q(1)})});
    DHDensity d;
    d.exp_coeff = {-2.0};
    Moments m = moments_exponential(seg, d, 1e-12);
    double expect = (1.0 - std::exp(-2.0)) / 2.0;
    CHECK(std::fabs(m.mass_d - expect) < 1e-12);
    CHECK(m.error_bound <= 1e-12 * m.mass_d * 1.01);
}

TEST_CASE("quadrature reproduces exact moments under a negligible exponent") {
    MomentPolytope pent = MomentPolytope::from_vertices(gl2_pentagon());
    QMat forms = {vec({q(1), q(-1)}), vec({q(1), q(-1)})};
    Moments exact = moments_polynomial_exact(pent, forms);
    DHDensity d;
    d.linear_forms = forms;
    d.exp_coeff = {1e-30, 0.0};   // forces the quadrature path
    Moments num = moments_exponential(pent, d, 1e-13);
    CHECK(!num.exact);
    CHECK(std::fabs(num.mass_d - exact.mass.get_d()) < 1e-12 * exact.mass.get_d());
    for (int i = 0; i < 2; ++i)
        CHECK(std::fabs(num.first_d[i] - exact.first[i].get_d()) <=
              1e-12 * std::fabs(exact.mass.get_d()) * 4);
}

TEST_CASE("exponential moments agree with a Monte-Carlo oracle") {
    MomentPolytope pent = MomentPolytope::from_vertices(gl2_pentagon());
    DHDensity d;
    d.linear_forms = {vec({q(1), q(-1)}), vec({q(1), q(-1)})};
    d.exp_coeff = {-0.6, 0.8};   // a fixed "random" zeta direction
    d.exp_const = 0.4;
    Moments m = moments_exponential(pent, d, 1e-10);

    // rejection sampling over the bounding box
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> ux(-0.5, 2.0), uy(-2.0, 0.5);
    const std::size_t N = 10000000;
    double box_area = 2.5 * 2.5;
    auto inside = [&](double x, double y) {
        for (const Halfspace& h : pent.facets()) {
            double v = h.normal[0].get_d() * x + h.normal[1].get_d() * y;
            if (v > h.offset.get_d() + 1e-15) return false;
        }
        return true;
    };
    double s = 0, s2 = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < N; ++i) {
        double x = ux(rng), y = uy(rng);
        double f = 0;
        if (inside(x, y)) {
            double lin = (x - y) * (x - y);
            f = lin * std::exp(0.4 - 0.6 * x + 0.8 * y);
        }
        s += f;
        s2 += f * f;
        sx += f * x;
        sy += f * y;
    }
    double mass_mc = box_area * s / N;
    double se_mass = box_area * std::sqrt((s2 / N - (s / N) * (s / N)) / N);
    CHECK(std::fabs(m.mass_d - mass_mc) < 3 * se_mass);
    double bx_mc = sx / s, by_mc = sy / s;
    DVec bar = m.barycenter_d();
    // barycenter standard error is of the same scale as the mass one
    CHECK(std::fabs(bar[0] - bx_mc) < 5 * se_mass / mass_mc);
    CHECK(std::fabs(bar[1] - by_mc) < 5 * se_mass / mass_mc);
}

TEST_CASE("lift invariance along m_minus annihilators") {
    // segment 2rho + t (1,-1): every vertex offset lies in span(M_-)
    MomentPolytope seg = MomentPolytope::from_vertices(
        {vec({q(1, 2), q(-1, 2)}), vec({q(3), q(-3)})});
    QVec two_rho = vec({q(1), q(-1)});
    DHDensity d;
    d.linear_forms = {vec({q(1), q(-1)})};
    d.set_zeta(two_rho, {0.3, -0.1});
    Moments base = moments_exponential(seg, d, 1e-12);
    // delta = c (1,1) annihilates M_- = span{(1,-1)}
    DHDensity d2;
    d2.linear_forms = d.linear_forms;
    d2.set_zeta(two_rho, {0.3 + 0.7, -0.1 + 0.7});
    Moments shifted = moments_exponential(seg, d2, 1e-12);
    CHECK(std::fabs(base.mass_d - shifted.mass_d) <=
          (base.error_bound + shifted.error_bound) + 1e-11 * base.mass_d);
    DVec b1 = base.barycenter_d(), b2 = shifted.barycenter_d();
    CHECK(std::fabs(b1[0] - b2[0]) < 1e-10);
    CHECK(std::fabs(b1[1] - b2[1]) < 1e-10);
}

TEST_CASE("density validation helpers") {
    MomentPolytope pent = MomentPolytope::from_vertices(gl2_pentagon());
    DHDensity ok;
    ok.linear_forms = {vec({q(1), q(-1)})};
    CHECK(ok.nonnegative_on(pent));
    DHDensity bad;
    bad.linear_forms = {vec({q(-1), q(1)})};
    CHECK(!bad.nonnegative_on(pent));
    CHECK(ok.is_exact());
    DHDensity withz = ok;
    withz.set_zeta(vec({q(1), q(-1)}), {0.1, 0.0});
    CHECK(!withz.is_exact());
    withz.set_zeta(vec({q(1), q(-1)}), {0.0, 0.0});
    CHECK(withz.is_exact());
}
