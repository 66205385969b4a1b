#ifndef KSPH_KSTAB_HPP
#define KSPH_KSTAB_HPP

#include "ksph/cones.hpp"
#include "ksph/dhmeasure.hpp"
#include "ksph/polytope.hpp"
#include "ksph/rational.hpp"
#include "ksph/rootsys.hpp"

#include <functional>
#include <optional>
#include <string>

namespace ksph {

/// Full problem instance: root data, moment polytope, lifted valuation
/// cone, density roots (with multiplicity), their base sum, and an
/// optional vector field lift.
struct SphericalDatum {
    RootSystemData root_system;
    MomentPolytope delta_plus;
    ValuationConeData valuation;
    QMat phi_p;        // density multiset (base list repeated `multiplicity` times)
    QMat phi_p_base;   // the base list
    unsigned multiplicity = 1;
    bool phi_p_derived = true;   // base list came from derive_phi_p
    QVec two_rho_p;    // sum of the base list, each root once
    std::optional<DVec> zeta_lift;
    std::vector<std::string> warnings;

    /// Assembles and validates a datum. When `phi_p_list` is absent the
    /// density roots are derived from the polytope. `multiplicity` repeats
    /// the list (2 for bi-equivariant group compactifications).
    static SphericalDatum make(RootSystemData rs, MomentPolytope delta_plus,
                               ValuationConeData valuation,
                               std::optional<QMat> phi_p_list, unsigned multiplicity,
                               std::optional<DVec> zeta_lift);

    /// Density with the zeta exponential installed (when present).
    DHDensity density() const;
    SphericalDatum with_zeta(DVec zeta) const;
    SphericalDatum without_zeta() const;
};

enum class Status { stable, semistable_not_stable, unstable, inconclusive };

std::string status_name(Status s);

struct MarginEntry {
    QVec generator;
    bool is_lineality = false;
    bool exact = false;
    Rat value_q;        // valid when exact
    double value_d = 0;
    double error = 0;   // certified bound on |value_d - true value|
};

struct Destabilizer {
    QVec generator;
    std::string description;
};

struct SolitonInfo {
    DVec zeta_lift;
    double residual = 0;
};

struct Verdict {
    Status status = Status::inconclusive;
    BarycenterResult bar;
    std::vector<MarginEntry> margins;
    std::optional<Destabilizer> destabilizer;
    std::optional<SolitonInfo> soliton;
};

struct FutakiValue {
    bool exact = false;
    Rat value_q;
    double value_d = 0;
    double error_bound = 0;
};

/// <bar(Delta+) - 2 rho_P, xi>, the Futaki pairing of the degeneration
/// along xi up to one fixed positive constant. Exact when zeta is absent.
FutakiValue futaki_pairing(const SphericalDatum& datum, const QVec& xi_lift, double tol);

/// Renders the stability verdict from the barycenter position relative to
/// the translated cone. `lineality_zero_tol` widens the zero test on
/// lineality margins (used when zeta came out of the solver with a known
/// residual); margins within certified error of a sign change give
/// `inconclusive`, never a silent verdict.
Verdict check_kstability(const SphericalDatum& datum, double tol,
                         double lineality_zero_tol = 0.0);

struct SolitonResult {
    DVec zeta_lift;
    double residual = 0;
    int iterations = 0;
    bool converged = false;
};

/// Called once per Newton iterate with the current lift and the Hessian of
/// log-mass restricted to the active lineality directions.
using SolitonObserver = std::function<void(const DVec& zeta, const DMat& hessian)>;

/// Damped Newton iteration on zeta -> log mass of the weighted density,
/// restricted to the lineality space of the valuation cone (directions on
/// which the density is constant are quotiented out and reported as zero
/// coordinates). The stationary point is the soliton candidate.
SolitonResult solve_soliton(const SphericalDatum& datum, double tol, int max_iter,
                            const SolitonObserver& observer = nullptr);

enum class DegenerationType { product_type, horospherical_central_fiber, proper_spherical };

std::string degeneration_description(DegenerationType t);

/// Classifies the central fiber of the degeneration along xi: isomorphic
/// to X when xi is in the lineality, horospherical when xi admits a
/// representation strictly positive on every ray (exact LP), and a proper
/// spherical degeneration otherwise. Throws if xi is not in the cone.
DegenerationType classify_degeneration(const SphericalDatum& datum, const QVec& xi_lift);

} // namespace ksph

#endif
