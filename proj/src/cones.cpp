#include "ksph/cones.hpp"
#include "ksph/linalg.hpp"

#include <algorithm>
#include <set>

namespace ksph {

using namespace linalg;

ValuationConeData ValuationConeData::make(QMat rays_in, QMat lineality_in, QMat m_minus) {
    ValuationConeData vc;
    // dedup rays up to positive scaling
    std::set<QVec> seen;
    for (const QVec& r : rays_in) {
        if (is_zero(r)) throw input_error("zero ray generator");
        QVec p = primitive(r);
        if (seen.insert(p).second) vc.rays.push_back(p);
    }
    QMat lin = lineality_in;
    if (rank(lin) != lin.size())
        throw input_error("lineality basis is linearly dependent");
    vc.lineality_basis = std::move(lin);
    for (const QVec& r : vc.rays)
        if (in_span(vc.lineality_basis, r))
            throw input_error("ray generator lies in the lineality span");

    // declared lineality must be the maximal linear subspace of the cone
    QMat gens = vc.rays;
    for (const QVec& l : vc.lineality_basis) {
        gens.push_back(l);
        gens.push_back(scale(-1, l));
    }
    QMat maximal = gens.empty() ? QMat{} : lineality_space(gens);
    if (maximal.size() != vc.lineality_basis.size())
        throw input_error("declared lineality is not the maximal linear subspace "
                          "of the generated cone (hidden lineality among rays)");

    vc.m_minus_basis = std::move(m_minus);
    if (rank(vc.m_minus_basis) != vc.m_minus_basis.size())
        throw input_error("m_minus basis is linearly dependent");
    return vc;
}

std::size_t ValuationConeData::dim() const {
    if (!rays.empty()) return rays[0].size();
    if (!lineality_basis.empty()) return lineality_basis[0].size();
    if (!m_minus_basis.empty()) return m_minus_basis[0].size();
    return 0;
}

QMat ValuationConeData::generators() const {
    QMat g = rays;
    for (const QVec& l : lineality_basis) {
        g.push_back(l);
        g.push_back(scale(-1, l));
    }
    return g;
}

QMat lineality_space(const QMat& generators) {
    if (generators.empty()) return {};
    std::size_t dim = generators[0].size();
    ConeDescription dual = polar_cone(generators, dim);
    // cone(G) = { x : r.x >= 0, l.x = 0 over the dual generators };
    // its lineality is the common kernel of all of them.
    QMat rows = dual.rays;
    for (const QVec& l : dual.lineality) rows.push_back(l);
    if (rows.empty()) rows.push_back(zeros(dim));
    return nullspace(rows);
}

ConeDescription dual_cone(const QMat& generators) {
    if (generators.empty()) throw input_error("dual cone of an empty generator set");
    if (generators[0].size() > 10)
        throw input_error("dual cone restricted to ambient dimension <= 10");
    return polar_cone(generators, generators[0].size());
}

MembershipResult membership(const QVec& point, const ValuationConeData& vc, bool strict) {
    // The verdict is three-valued and determined by the margins alone;
    // `strict` selects which verdicts count as success for the caller
    // (inside_relint only, vs. inside_relint or on_boundary) but does not
    // change the computed verdict.
    (void)strict;
    // a cone with no data at all (rank-zero case) dualizes to the whole
    // space, so every point is interior
    if (vc.dim() != 0 && point.size() != vc.dim())
        throw input_error("point dimension mismatch");
    MembershipResult res;
    res.verdict = ConeVerdict::inside_relint;
    bool boundary = false;
    for (const QVec& l : vc.lineality_basis) {
        Rat v = dot(point, l);
        res.margins.push_back(ConeMargin{l, true, v});
        if (v != 0 && res.verdict != ConeVerdict::outside) {
            res.verdict = ConeVerdict::outside;
            res.violating_generator = v < 0 ? l : scale(-1, l);
        }
    }
    for (const QVec& r : vc.rays) {
        Rat v = dot(point, r);
        res.margins.push_back(ConeMargin{r, false, v});
        if (res.verdict == ConeVerdict::outside) continue;
        if (v < 0) {
            res.verdict = ConeVerdict::outside;
            res.violating_generator = r;
        } else if (v == 0) {
            boundary = true;
        }
    }
    if (res.verdict != ConeVerdict::outside && boundary)
        res.verdict = ConeVerdict::on_boundary;
    return res;
}

} // namespace ksph
