#ifndef KSPH_POLYTOPE_HPP
#define KSPH_POLYTOPE_HPP

#include "ksph/rational.hpp"

#include <functional>

namespace ksph {

struct Halfspace {
    QVec normal;
    Rat offset;    // { x : normal^T x <= offset }
};

/// d+1 affinely independent points spanning a d-dimensional cell.
struct Simplex {
    QMat vertices;
};

/// Exact rational convex polytope, possibly lower-dimensional in its
/// ambient space. Vertices are irredundant and lex-sorted; facet
/// inequalities are stated in ambient coordinates and are valid within the
/// affine hull; the hull itself is carried as a list of equalities.
class MomentPolytope {
public:
    static MomentPolytope from_vertices(const QMat& points);
    static MomentPolytope from_halfspaces(const std::vector<Halfspace>& ineqs);

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t hull_dim() const { return hull_dirs_.size(); }

    const QMat& vertices() const { return vertices_; }
    const std::vector<Halfspace>& facets() const { return facets_; }
    const std::vector<Halfspace>& hull_equalities() const { return equalities_; }

    /// Facets plus each hull equality as a <=/>= pair.
    std::vector<Halfspace> halfspaces() const;

    const QVec& hull_base() const { return hull_base_; }
    /// Rows form a basis of the direction space of the affine hull.
    const QMat& hull_directions() const { return hull_dirs_; }

    /// Coordinates of x - hull_base in the direction basis (x must lie in
    /// the affine hull for the result to be meaningful).
    QVec hull_coords(const QVec& x) const;

    enum class Mode { closed, relative_interior };
    bool contains(const QVec& x, Mode mode) const;

    /// Deterministic fan triangulation from the lex-smallest vertex.
    /// Simplices cover the polytope with disjoint interiors; a point gives
    /// one 0-simplex.
    std::vector<Simplex> triangulate() const;

    /// Volume in hull coordinates (sum of |det|/d! over the triangulation).
    Rat volume() const;

    /// Points of (k*base + Z-span(basis)) inside k*this, lattice coords and
    /// ambient point per hit. basis must be independent and span the hull
    /// direction space.
    void enumerate_lattice_points(
        unsigned k, const QMat& basis, const QVec& base,
        const std::function<void(const std::vector<long>&)>& visit) const;

    QMat lattice_points(unsigned k, const QMat& basis, const QVec& base) const;

private:
    std::size_t ambient_dim_ = 0;
    QMat vertices_;
    std::vector<Halfspace> facets_;
    std::vector<Halfspace> equalities_;
    QVec hull_base_;
    QMat hull_dirs_;
    QMat hull_gram_inv_;   // inverse Gram of hull_dirs_, cached for hull_coords
};

} // namespace ksph

#endif
