#ifndef KSPH_QUANTIZED_HPP
#define KSPH_QUANTIZED_HPP

#include "ksph/kstab.hpp"
#include "ksph/rational.hpp"
#include "ksph/rootsys.hpp"

namespace ksph {

/// dim V_lambda by the Weyl dimension formula,
/// prod_{alpha > 0} kappa(lambda + rho, alpha) / kappa(rho, alpha).
Rat weyl_dimension(const RootSystemData& rs, const QVec& lambda);

/// kappa(lambda, alpha) >= 0 for every simple root.
bool is_dominant(const RootSystemData& rs, const QVec& lambda);

struct QuantizedSample {
    unsigned level = 0;
    bool exact = false;
    Rat weighted_mass;
    QVec weighted_moment;
    QVec q_barycenter;
    double weighted_mass_d = 0;
    DVec weighted_moment_d;
    DVec q_barycenter_d;
    std::size_t point_count = 0;
};

/// Discrete barycenter at level k: sum over lambda in (k 2rho_P + M_-)
/// intersected with k Delta+ of
///   w(lambda) = prod_{alpha in phi_p} kappa(alpha, lambda+rho)/kappa(alpha, rho)
///             * exp(<4 rho_P - 2 lambda/k, zeta>)
/// weighting the points lambda/k. Exact rational when zeta is absent. The
/// kappa product runs over the density multiset, so doubled densities get
/// squared Weyl dimensions.
QuantizedSample quantized_barycenter(const SphericalDatum& datum, unsigned k);

/// <q_barycenter(k) - 2 rho_P, xi>, the level-k Futaki pairing in the same
/// normalization as futaki_pairing (their gap vanishes as k grows).
FutakiValue quantized_futaki(const SphericalDatum& datum, unsigned k, const QVec& xi_lift);

} // namespace ksph

#endif
