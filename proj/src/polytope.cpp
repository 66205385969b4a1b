#include "ksph/polytope.hpp"
#include "ksph/linalg.hpp"
#include "ksph/polyhedral.hpp"

#include <algorithm>
#include <cmath>

namespace ksph {

using namespace linalg;

namespace {

bool lex_less(const QVec& a, const QVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

// Joint primitive scaling of (normal, offset) by a positive rational.
Halfspace canonical_halfspace(QVec normal, Rat offset) {
    QVec joined = normal;
    joined.push_back(offset);
    // primitive() preserves orientation
    QVec prim = primitive(joined);
    Rat off = prim.back();
    prim.pop_back();
    return Halfspace{std::move(prim), std::move(off)};
}

bool halfspace_less(const Halfspace& a, const Halfspace& b) {
    if (lex_less(a.normal, b.normal)) return true;
    if (lex_less(b.normal, a.normal)) return false;
    return a.offset < b.offset;
}

} // namespace

MomentPolytope MomentPolytope::from_vertices(const QMat& points) {
    if (points.empty()) throw input_error("polytope needs at least one point");
    std::size_t n = points[0].size();
    for (const QVec& p : points)
        if (p.size() != n) throw input_error("inconsistent point dimensions");

    MomentPolytope p;
    p.ambient_dim_ = n;

    QMat pts = points;
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    // affine hull
    p.hull_base_ = pts[0];
    QMat diffs;
    for (std::size_t i = 1; i < pts.size(); ++i)
        diffs.push_back(sub(pts[i], p.hull_base_));
    QMat dir = diffs;
    rref(dir);
    for (QVec& row : dir)
        if (!is_zero(row)) p.hull_dirs_.push_back(primitive(row));
    std::size_t d = p.hull_dirs_.size();

    // Gram inverse for hull coordinates
    if (d > 0) {
        QMat gram(d, QVec(d));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                gram[i][j] = dot(p.hull_dirs_[i], p.hull_dirs_[j]);
        p.hull_gram_inv_ = *inverse(gram);
    }

    // hull equalities: w^T x = w^T base for w spanning the orthogonal
    // complement of the direction space
    for (const QVec& w : nullspace(p.hull_dirs_.empty() ? QMat{zeros(n)} : p.hull_dirs_)) {
        QVec wp = primitive(w);
        p.equalities_.push_back(Halfspace{wp, dot(wp, p.hull_base_)});
    }
    std::sort(p.equalities_.begin(), p.equalities_.end(), halfspace_less);

    if (d == 0) {
        p.vertices_ = pts;   // single point, no facets
        return p;
    }

    // facets via the polar cone of the homogenized hull-coordinate points
    QMat homog;
    for (const QVec& v : pts) {
        QVec c = p.hull_coords(v);
        QVec row;
        row.reserve(d + 1);
        row.push_back(Rat(1));
        for (Rat& x : c) row.push_back(std::move(x));
        homog.push_back(std::move(row));
    }
    ConeDescription polar = polar_cone(homog, d + 1);
    if (!polar.lineality.empty())
        throw internal_error("homogenization cone not full-dimensional");

    for (const QVec& gen : polar.rays) {
        // gen = (a0, a): a0 + a . c >= 0 on the polytope
        QVec a(gen.begin() + 1, gen.end());
        if (is_zero(a)) continue;    // far face of the homogenization
        // pull back to ambient: a . c(x) = v . (x - base), v = dirs^T G^{-1} a
        QVec ga = mat_vec(p.hull_gram_inv_, a);
        QVec v = zeros(n);
        for (std::size_t i = 0; i < d; ++i) v = add(v, scale(ga[i], p.hull_dirs_[i]));
        // inequality v.(x-base) >= -a0  <=>  (-v).x <= a0 - v.base
        p.facets_.push_back(canonical_halfspace(scale(-1, v), gen[0] - dot(v, p.hull_base_)));
    }
    std::sort(p.facets_.begin(), p.facets_.end(), halfspace_less);

    // vertices = points whose active facets span the hull direction space
    for (const QVec& v : pts) {
        QMat active;
        for (const Halfspace& h : p.facets_)
            if (dot(h.normal, v) == h.offset) active.push_back(h.normal);
        for (const Halfspace& e : p.equalities_) active.push_back(e.normal);
        if (rank(active) == n) p.vertices_.push_back(v);
    }
    if (p.vertices_.empty()) throw internal_error("vertex reduction lost all points");
    return p;
}

MomentPolytope MomentPolytope::from_halfspaces(const std::vector<Halfspace>& ineqs) {
    if (ineqs.empty()) throw input_error("halfspace system is empty (unbounded)");
    std::size_t n = ineqs[0].normal.size();
    // homogenize: (t, x) with c t - normal.x >= 0 and t >= 0
    QMat rows;
    for (const Halfspace& h : ineqs) {
        if (h.normal.size() != n) throw input_error("inconsistent halfspace dimensions");
        QVec row;
        row.reserve(n + 1);
        row.push_back(h.offset);
        for (const Rat& c : h.normal) row.push_back(-c);
        rows.push_back(std::move(row));
    }
    QVec tpos = zeros(n + 1);
    tpos[0] = 1;
    rows.push_back(tpos);

    ConeDescription cone = polar_cone(rows, n + 1);
    for (const QVec& l : cone.lineality)
        if (!is_zero(l)) throw input_error("halfspace system is unbounded (contains a line)");
    QMat verts;
    for (const QVec& r : cone.rays) {
        if (r[0] == 0) {
            bool nz = false;
            for (std::size_t i = 1; i <= n; ++i) nz |= (r[i] != 0);
            if (nz) throw input_error("halfspace system is unbounded (recession ray)");
            continue;
        }
        QVec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = r[i + 1] / r[0];
        verts.push_back(std::move(v));
    }
    if (verts.empty()) throw input_error("halfspace system is infeasible");
    return from_vertices(verts);
}

std::vector<Halfspace> MomentPolytope::halfspaces() const {
    std::vector<Halfspace> out = facets_;
    for (const Halfspace& e : equalities_) {
        out.push_back(e);
        out.push_back(Halfspace{scale(-1, e.normal), -e.offset});
    }
    return out;
}

QVec MomentPolytope::hull_coords(const QVec& x) const {
    QVec rhs(hull_dirs_.size());
    QVec diff = sub(x, hull_base_);
    for (std::size_t i = 0; i < hull_dirs_.size(); ++i) rhs[i] = dot(hull_dirs_[i], diff);
    return hull_dirs_.empty() ? QVec{} : mat_vec(hull_gram_inv_, rhs);
}

bool MomentPolytope::contains(const QVec& x, Mode mode) const {
    if (x.size() != ambient_dim_) throw input_error("point dimension mismatch");
    for (const Halfspace& e : equalities_)
        if (dot(e.normal, x) != e.offset) return false;
    for (const Halfspace& h : facets_) {
        Rat v = dot(h.normal, x);
        if (mode == Mode::closed ? v > h.offset : v >= h.offset) return false;
    }
    return true;
}

std::vector<Simplex> MomentPolytope::triangulate() const {
    std::vector<Simplex> out;
    if (hull_dim() == 0) {
        out.push_back(Simplex{vertices_});
        return out;
    }
    const QVec& apex = vertices_.front();   // lex-smallest
    for (const Halfspace& f : facets_) {
        if (dot(f.normal, apex) == f.offset) continue;   // apex on this facet
        QMat face_pts;
        for (const QVec& v : vertices_)
            if (dot(f.normal, v) == f.offset) face_pts.push_back(v);
        MomentPolytope face = from_vertices(face_pts);
        for (Simplex s : face.triangulate()) {
            QMat verts;
            verts.push_back(apex);
            for (QVec& v : s.vertices) verts.push_back(std::move(v));
            out.push_back(Simplex{std::move(verts)});
        }
    }
    return out;
}

Rat MomentPolytope::volume() const {
    Rat total = 0;
    std::size_t d = hull_dim();
    if (d == 0) return Rat(1);
    mpz_class dfact = 1;
    for (std::size_t i = 2; i <= d; ++i) dfact *= static_cast<long>(i);
    for (const Simplex& s : triangulate()) {
        QMat m(d, QVec(d));
        QVec c0 = hull_coords(s.vertices[0]);
        for (std::size_t i = 0; i < d; ++i) {
            QVec ci = hull_coords(s.vertices[i + 1]);
            for (std::size_t j = 0; j < d; ++j) m[i][j] = ci[j] - c0[j];
        }
        Rat dv = det(m);
        total += abs(dv) / Rat(dfact);
    }
    return total;
}

void MomentPolytope::enumerate_lattice_points(
    unsigned k, const QMat& basis, const QVec& base,
    const std::function<void(const std::vector<long>&)>& visit) const {
    if (k == 0) throw input_error("lattice scale must be positive");
    std::size_t r = basis.size();
    if (r == 0) throw input_error("empty lattice basis");
    for (const QVec& b : basis)
        if (b.size() != ambient_dim_) throw input_error("lattice basis dimension mismatch");
    if (rank(basis) != r) throw input_error("lattice basis is not linearly independent");
    for (const QVec& dir : hull_dirs_)
        if (!in_span(basis, dir))
            throw input_error("lattice basis does not span the hull direction space");

    // t-space system: point(t) = k*base + sum t_j basis_j
    struct Row { QVec coef; Rat rhs; bool eq; };
    std::vector<Row> rows;
    Rat kq(static_cast<long>(k));
    auto add_row = [&](const QVec& normal, const Rat& offset, bool eq) {
        QVec coef(r);
        bool nz = false;
        for (std::size_t j = 0; j < r; ++j) {
            coef[j] = dot(normal, basis[j]);
            nz |= (coef[j] != 0);
        }
        Rat rhs = kq * offset - kq * dot(normal, base);
        rows.push_back(Row{std::move(coef), std::move(rhs), eq});
        return nz;
    };
    for (const Halfspace& h : facets_)
        if (!add_row(h.normal, h.offset, false)) {
            if (rows.back().rhs < 0) return;   // constant constraint violated
            rows.pop_back();
        }
    for (const Halfspace& e : equalities_)
        if (!add_row(e.normal, e.offset, true)) {
            if (rows.back().rhs != 0) return;
            rows.pop_back();
        }

    // bounding box from the t-polytope vertices
    std::vector<Halfspace> tsys;
    for (const Row& row : rows) {
        tsys.push_back(Halfspace{row.coef, row.rhs});
        if (row.eq) tsys.push_back(Halfspace{scale(-1, row.coef), -row.rhs});
    }
    MomentPolytope tpoly;
    try {
        tpoly = from_halfspaces(tsys);
    } catch (const Error& e) {
        if (std::string(e.what()).find("infeasible") != std::string::npos)
            return;   // no lattice points
        throw;
    }
    QVec lo(r), hi(r);
    for (std::size_t j = 0; j < r; ++j) {
        lo[j] = tpoly.vertices()[0][j];
        hi[j] = lo[j];
        for (const QVec& v : tpoly.vertices()) {
            lo[j] = std::min(lo[j], v[j]);
            hi[j] = std::max(hi[j], v[j]);
        }
    }
    auto ceil_q = [](const Rat& q) { mpz_class z; mpz_cdiv_q(z.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t()); return z.get_si(); };
    auto floor_q = [](const Rat& q) { mpz_class z; mpz_fdiv_q(z.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t()); return z.get_si(); };

    std::vector<long> t(r, 0);
    if (r <= 2) {
        long a1 = ceil_q(lo[0]), b1 = floor_q(hi[0]);
        for (long t1 = a1; t1 <= b1; ++t1) {
            t[0] = t1;
            if (r == 1) {
                bool ok = true;
                for (const Row& row : rows) {
                    Rat v = row.coef[0] * Rat(t1);
                    if (row.eq ? v != row.rhs : v > row.rhs) { ok = false; break; }
                }
                if (ok) visit(t);
                continue;
            }
            // exact interval (and equality pins) for t2 given t1
            bool feasible = true, pinned = false;
            Rat lo2 = lo[1], hi2 = hi[1], pin;
            for (const Row& row : rows) {
                Rat rem = row.rhs - row.coef[0] * Rat(t1);
                const Rat& c2 = row.coef[1];
                if (row.eq) {
                    if (c2 == 0) { if (rem != 0) { feasible = false; break; } }
                    else {
                        Rat val = rem / c2;
                        if (pinned && val != pin) { feasible = false; break; }
                        pinned = true;
                        pin = val;
                    }
                } else if (c2 == 0) {
                    if (rem < 0) { feasible = false; break; }
                } else if (c2 > 0) {
                    Rat bound = rem / c2;
                    if (bound < hi2) hi2 = bound;
                } else {
                    Rat bound = rem / c2;
                    if (bound > lo2) lo2 = bound;
                }
            }
            if (!feasible) continue;
            if (pinned) {
                if (pin.get_den() != 1 || pin < lo2 || pin > hi2) continue;
                t[1] = pin.get_num().get_si();
                visit(t);
                continue;
            }
            long a2 = ceil_q(lo2), b2 = floor_q(hi2);
            for (long t2 = a2; t2 <= b2; ++t2) {
                t[1] = t2;
                visit(t);
            }
        }
        return;
    }

    // generic odometer over the box with a full filter
    std::vector<long> cur(r), toplo(r), tophi(r);
    for (std::size_t j = 0; j < r; ++j) {
        toplo[j] = ceil_q(lo[j]);
        tophi[j] = floor_q(hi[j]);
        if (toplo[j] > tophi[j]) return;
        cur[j] = toplo[j];
    }
    while (true) {
        bool ok = true;
        for (const Row& row : rows) {
            Rat v = 0;
            for (std::size_t j = 0; j < r; ++j) v += row.coef[j] * Rat(cur[j]);
            if (row.eq ? v != row.rhs : v > row.rhs) { ok = false; break; }
        }
        if (ok) visit(cur);
        std::size_t j = 0;
        while (j < r && ++cur[j] > tophi[j]) { cur[j] = toplo[j]; ++j; }
        if (j == r) break;
    }
}

QMat MomentPolytope::lattice_points(unsigned k, const QMat& basis, const QVec& base) const {
    QMat out;
    Rat kq(static_cast<long>(k));
    enumerate_lattice_points(k, basis, base, [&](const std::vector<long>& t) {
        QVec p = scale(kq, base);
        for (std::size_t j = 0; j < basis.size(); ++j)
            p = add(p, scale(Rat(t[j]), basis[j]));
        out.push_back(std::move(p));
    });
    return out;
}

} // namespace ksph
