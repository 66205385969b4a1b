#ifndef KSPH_DHMEASURE_HPP
#define KSPH_DHMEASURE_HPP

#include "ksph/polytope.hpp"
#include "ksph/rational.hpp"
#include "ksph/rootsys.hpp"

namespace ksph {

/// Density  p -> exp(c0 + c.p) * prod_L (L.p)  against Lebesgue measure on
/// the affine hull. The linear forms come from the roots via kappa; the
/// exponential part is zero for the pure Kaehler-Einstein check and all
/// computations are then exact.
struct DHDensity {
    QMat linear_forms;        // covectors L
    DVec exp_coeff;           // c, empty means zero
    double exp_const = 0.0;   // c0

    static DHDensity from_phi_p(const RootSystemData& rs, const QMat& phi_p);

    /// Installs the exponential factor exp(<4 rho_P - 2p, zeta>).
    void set_zeta(const QVec& two_rho_p, const DVec& zeta_lift);

    bool is_exact() const;

    /// True if every linear form is nonnegative at every vertex.
    bool nonnegative_on(const MomentPolytope& p) const;
};

/// Mass / first moment / second moment. The exact fields are valid only
/// when `exact` is set; the double fields are always filled.
struct Moments {
    bool exact = false;
    Rat mass;
    QVec first;
    QMat second;
    double mass_d = 0.0;
    DVec first_d;
    DMat second_d;
    double error_bound = 0.0;

    QVec barycenter_q() const;
    DVec barycenter_d() const;
};

/// Exact rational moments of prod_L (L.p) over the polytope: triangulate,
/// expand the product in barycentric coordinates, and integrate monomials
/// with  int_simplex lam^a dvol = |det| * prod a_i! / (d + |a|)!.
Moments moments_polynomial_exact(const MomentPolytope& p, const QMat& forms);

/// Moments of the full density. Falls back to the exact path when the
/// exponential part vanishes; otherwise Grundmann-Moller quadrature per
/// simplex, order-escalated (with simplex subdivision as a last resort)
/// until two consecutive orders agree within tol/4 of the mass. The final
/// escalation gap is reported as error_bound.
Moments moments_exponential(const MomentPolytope& p, const DHDensity& d, double tol);

struct BarycenterResult {
    bool exact = false;
    QVec value_q;
    DVec value_d;
    double error_bound = 0.0;
};

BarycenterResult barycenter(const MomentPolytope& p, const DHDensity& d, double tol);

} // namespace ksph

#endif
