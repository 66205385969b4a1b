#ifndef KSPH_POLYHEDRAL_HPP
#define KSPH_POLYHEDRAL_HPP

#include "ksph/rational.hpp"

#include <optional>

namespace ksph {

/// Generator description of a polyhedral cone: cone = cone(rays) + span(lineality).
/// Rays are primitive integer vectors, lex-sorted; lineality is in canonical
/// (RREF) form. Extreme rays only, no redundancy.
struct ConeDescription {
    QMat rays;
    QMat lineality;
};

/// Extreme rays and lineality of { x : a^T x >= 0 for every row a } by the
/// double description method with the exact rank-based adjacency test.
/// Intended for dimension <= 10.
ConeDescription polar_cone(const QMat& constraint_rows, std::size_t dim);

// ----- exact rational LP (dense simplex, Bland's rule) -----

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status;
    Rat objective;
    QVec x;
};

/// min c^T x  s.t.  A x = b, x >= 0.  Exact over the rationals.
LpResult lp_solve(const QMat& a, const QVec& b, const QVec& c);

/// Is x in cone(rays) + span(lineality)?  (exact LP feasibility)
bool cone_contains(const QMat& rays, const QMat& lineality, const QVec& x);

/// Largest t <= 1 such that x = sum lambda_i ray_i + (lineality part) with
/// every lambda_i >= t; negative infinity reported as nullopt (x not in the
/// cone at all). t > 0 means x admits a representation positive on every ray.
std::optional<Rat> cone_min_coefficient(const QMat& rays, const QMat& lineality,
                                        const QVec& x);

} // namespace ksph

#endif
