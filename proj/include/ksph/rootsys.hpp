#ifndef KSPH_ROOTSYS_HPP
#define KSPH_ROOTSYS_HPP

#include "ksph/polytope.hpp"
#include "ksph/rational.hpp"

namespace ksph {

/// Root data in a fixed rational basis of the character space, together
/// with the Weyl-invariant scalar product transported to that side.
/// kappa(a, b) = a^T form b.
struct RootSystemData {
    std::size_t ambient_dim = 0;
    QMat simple_roots;
    QMat positive_roots;
    QMat form;
    QVec rho;

    Rat kappa(const QVec& a, const QVec& b) const;
    /// Covector row a^T form, the linear form kappa(a, .).
    QVec kappa_form(const QVec& a) const;
};

/// Simple type in the weight basis (simple-root coordinates = columns of
/// the Cartan matrix, rho = (1,...,1)), long roots normalized to squared
/// length 2, plus `central_dims` extra coordinates on which all roots
/// vanish and the form is the identity.
RootSystemData build_root_system(char type, int rank, int central_dims = 0);

/// Block direct sum of ambient spaces, roots and forms.
RootSystemData product_root_system(const std::vector<RootSystemData>& parts);

/// Direct construction from explicit data (validates the invariants:
/// symmetric positive-definite form, rho = half sum, positive roots
/// nonnegative integer combinations of simple ones, Cartan integers).
RootSystemData make_root_system(QMat simple_roots, QMat positive_roots, QMat form);

/// Positive roots whose linear form kappa(alpha, .) does not vanish
/// identically on the polytope (tested on vertices).
QMat derive_phi_p(const RootSystemData& rs, const MomentPolytope& delta_plus);

/// Exact sum of the given roots.
QVec two_rho_p(const QMat& phi_p);

struct RestrictedRootData {
    QMat psi_plus;                    // positive roots moved by sigma
    QVec two_rho_sigma;               // sum of psi_plus
    QMat restricted_positive_roots;   // {alpha - sigma(alpha)}, deduplicated
    QMat weyl_chamber_generators;     // generators of C_sigma^+ in the dual space
    QMat chamber_rays;                // ray part of the chamber
    QMat chamber_lineality;           // lineality part of the chamber
};

/// Restricted root data of a symmetric space from an involution sigma on
/// the character space. sigma must be an involution permuting the roots,
/// with each positive root fixed or sent to a negative root.
RestrictedRootData symmetric_space_data(const RootSystemData& rs, const QMat& sigma);

struct GroupCompactificationData {
    QMat density_forms;      // kappa(alpha, .) for alpha positive, each twice
    QVec two_rho;
    QMat ray_generators;     // dominant chamber rays in the dual space
    QMat lineality_basis;    // center directions
    QMat m_minus_basis;      // full character lattice basis
};

/// Data of the bi-equivariant compactification case projected to the first
/// coordinate: squared density, 2*rho, and the lifted valuation cone
/// (dominant chamber plus the center as lineality).
GroupCompactificationData group_compactification_data(const RootSystemData& rs_hat);

} // namespace ksph

#endif
