#ifndef KSPH_CONES_HPP
#define KSPH_CONES_HPP

#include "ksph/polyhedral.hpp"
#include "ksph/rational.hpp"

#include <optional>

namespace ksph {

/// Generators of the lifted valuation cone in the dual space, split into
/// ray generators and a basis of the lineality (maximal linear subspace),
/// plus a basis of the semi-invariant character lattice.
struct ValuationConeData {
    QMat rays;
    QMat lineality_basis;
    QMat m_minus_basis;

    /// Validates: nonzero deduplicated rays, no ray inside the lineality
    /// span, declared lineality actually maximal for the generated cone.
    static ValuationConeData make(QMat rays, QMat lineality_basis, QMat m_minus_basis);

    std::size_t dim() const;
    /// All generators: rays then +/- lineality basis vectors.
    QMat generators() const;
};

enum class ConeVerdict { inside_relint, on_boundary, outside };

struct ConeMargin {
    QVec generator;
    bool is_lineality = false;
    Rat value;
};

struct MembershipResult {
    ConeVerdict verdict;
    std::optional<QVec> violating_generator;
    std::vector<ConeMargin> margins;
};

/// Basis of the maximal linear subspace of cone(generators).
QMat lineality_space(const QMat& generators);

/// Irredundant generators of { chi : <chi, v> >= 0 for v in cone(generators) }.
ConeDescription dual_cone(const QMat& generators);

/// Sign test of `point` against the generators of the lifted valuation
/// cone: zero pairing required on lineality, nonnegative (strict when
/// `strict`) on rays. This decides membership of `point` in the dual cone
/// (its relative interior when strict) without constructing it.
MembershipResult membership(const QVec& point, const ValuationConeData& vc, bool strict);

} // namespace ksph

#endif
