#include "ksph/polyhedral.hpp"
#include "ksph/linalg.hpp"

#include <algorithm>

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

// Canonical lineality basis: RREF rows, primitive.
QMat canonical_basis(QMat m) {
    rref(m);
    QMat out;
    for (QVec& row : m)
        if (!is_zero(row)) out.push_back(primitive(row));
    return out;
}

} // namespace

ConeDescription polar_cone(const QMat& constraint_rows, std::size_t dim) {
    // one above the public <= 10 contract, for homogenized polytope systems
    if (dim > 11)
        throw input_error("polyhedral kernel restricted to ambient dimension <= 10");
    QMat lineality = identity(dim);
    QMat rays;
    QMat processed;   // constraints already imposed

    for (const QVec& a : constraint_rows) {
        if (a.size() != dim) throw input_error("constraint dimension mismatch");
        if (is_zero(a)) continue;

        // Values of the new constraint on current generators.
        std::size_t hit = lineality.size();
        for (std::size_t i = 0; i < lineality.size(); ++i)
            if (dot(a, lineality[i]) != 0) { hit = i; break; }

        if (hit != lineality.size()) {
            // Cut the lineality: one direction becomes a ray, the rest is
            // projected into {a = 0}; existing rays are shifted likewise.
            QVec l = lineality[hit];
            Rat al = dot(a, l);
            QMat new_lin;
            for (std::size_t i = 0; i < lineality.size(); ++i) {
                if (i == hit) continue;
                new_lin.push_back(sub(lineality[i], scale(dot(a, lineality[i]) / al, l)));
            }
            for (QVec& r : rays) r = sub(r, scale(dot(a, r) / al, l));
            QVec r0 = al > 0 ? l : scale(-1, l);
            rays.push_back(primitive(r0));
            lineality = canonical_basis(new_lin);
        } else {
            std::vector<Rat> val(rays.size());
            bool any_neg = false;
            for (std::size_t i = 0; i < rays.size(); ++i) {
                val[i] = dot(a, rays[i]);
                if (val[i] < 0) any_neg = true;
            }
            if (!any_neg) { processed.push_back(a); continue; }

            std::size_t eff_dim = dim - lineality.size();
            QMat next;
            for (std::size_t i = 0; i < rays.size(); ++i)
                if (val[i] >= 0) next.push_back(rays[i]);
            for (std::size_t i = 0; i < rays.size(); ++i) {
                if (val[i] <= 0) continue;
                for (std::size_t j = 0; j < rays.size(); ++j) {
                    if (val[j] >= 0) continue;
                    // adjacency: common active processed constraints have
                    // rank eff_dim - 2
                    QMat active;
                    for (const QVec& c : processed)
                        if (dot(c, rays[i]) == 0 && dot(c, rays[j]) == 0)
                            active.push_back(c);
                    if (eff_dim >= 2 && rank(active) + 2 != eff_dim) continue;
                    QVec combo = sub(scale(val[i], rays[j]), scale(val[j], rays[i]));
                    next.push_back(primitive(combo));
                }
            }
            // dedup
            std::sort(next.begin(), next.end(), lex_less);
            next.erase(std::unique(next.begin(), next.end()), next.end());
            rays = std::move(next);
        }
        processed.push_back(a);
    }

    for (QVec& r : rays) r = primitive(r);
    std::sort(rays.begin(), rays.end(), lex_less);
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    return ConeDescription{std::move(rays), canonical_basis(lineality)};
}

// ------------------------- exact simplex ---------------------------------

namespace {

struct Tableau {
    QMat a;                 // m x n
    QVec b;                 // m, kept >= 0
    QVec cost;              // n
    std::vector<std::size_t> basis;  // m basic column indices

    std::size_t rows() const { return a.size(); }
    std::size_t cols() const { return a.empty() ? 0 : a[0].size(); }

    void pivot(std::size_t r, std::size_t c) {
        Rat inv = 1 / a[r][c];
        for (std::size_t j = 0; j < cols(); ++j) a[r][j] *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < rows(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (std::size_t j = 0; j < cols(); ++j) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        Rat fc = cost[c];
        if (fc != 0)
            for (std::size_t j = 0; j < cols(); ++j) cost[j] -= fc * a[r][j];
        basis[r] = c;
    }

    // Bland's rule; returns false when optimal, throws on unbounded.
    bool step() {
        std::size_t n = cols();
        std::size_t c = n;
        for (std::size_t j = 0; j < n; ++j)
            if (cost[j] < 0) { c = j; break; }
        if (c == n) return false;
        std::size_t r = rows();
        Rat best = 0;
        for (std::size_t i = 0; i < rows(); ++i) {
            if (a[i][c] <= 0) continue;
            Rat ratio = b[i] / a[i][c];
            if (r == rows() || ratio < best ||
                (ratio == best && basis[i] < basis[r])) {
                r = i;
                best = ratio;
            }
        }
        if (r == rows()) throw numeric_error("LP unbounded");
        pivot(r, c);
        return true;
    }
};

} // namespace

LpResult lp_solve(const QMat& a_in, const QVec& b_in, const QVec& c_in) {
    std::size_t m = a_in.size(), n = m ? a_in[0].size() : c_in.size();
    Tableau t;
    t.a = a_in;
    t.b = b_in;
    for (std::size_t i = 0; i < m; ++i)
        if (t.b[i] < 0) {
            t.b[i] = -t.b[i];
            for (Rat& x : t.a[i]) x = -x;
        }
    // phase 1: artificial columns
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) t.a[k].push_back(k == i ? 1 : 0);
        t.basis.push_back(n + i);
    }
    t.cost.assign(n + m, Rat(0));
    for (std::size_t j = n; j < n + m; ++j) t.cost[j] = 1;
    // reduce cost over the artificial basis
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n + m; ++j) t.cost[j] -= t.a[i][j];
    Rat p1_obj = 0;
    for (std::size_t i = 0; i < m; ++i) p1_obj += t.b[i];

    while (t.step()) {}
    Rat residual = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] >= n) residual += t.b[i];
    if (residual != 0) return LpResult{LpStatus::infeasible, Rat(0), {}};

    // drive surviving zero-valued artificials out of the basis
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis[i] < n) continue;
        std::size_t c = n;
        for (std::size_t j = 0; j < n; ++j)
            if (t.a[i][j] != 0) { c = j; break; }
        if (c < n) t.pivot(i, c);
        // else: redundant row, leave it (b[i] = 0)
    }

    // phase 2
    for (std::size_t i = 0; i < m; ++i) t.a[i].resize(n);
    t.cost.assign(n, Rat(0));
    for (std::size_t j = 0; j < n && j < c_in.size(); ++j) t.cost[j] = c_in[j];
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis[i] >= n) continue;
        Rat f = t.cost[t.basis[i]];
        if (f == 0) continue;
        for (std::size_t j = 0; j < n; ++j) t.cost[j] -= f * t.a[i][j];
    }
    try {
        while (t.step()) {}
    } catch (const Error&) {
        return LpResult{LpStatus::unbounded, Rat(0), {}};
    }

    QVec x = zeros(n);
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] < n) x[t.basis[i]] = t.b[i];
    Rat obj = 0;
    for (std::size_t j = 0; j < n && j < c_in.size(); ++j) obj += c_in[j] * x[j];
    return LpResult{LpStatus::optimal, obj, std::move(x)};
}

bool cone_contains(const QMat& rays, const QMat& lineality, const QVec& x) {
    std::size_t dim = x.size();
    // columns: lambda (rays), mu+ / mu- (lineality)
    std::size_t nc = rays.size() + 2 * lineality.size();
    if (nc == 0) return is_zero(x);
    QMat a(dim, QVec(nc, Rat(0)));
    for (std::size_t d = 0; d < dim; ++d) {
        std::size_t col = 0;
        for (const QVec& r : rays) a[d][col++] = r[d];
        for (const QVec& l : lineality) { a[d][col++] = l[d]; a[d][col++] = -l[d]; }
    }
    LpResult res = lp_solve(a, x, QVec(nc, Rat(0)));
    return res.status == LpStatus::optimal;
}

std::optional<Rat> cone_min_coefficient(const QMat& rays, const QMat& lineality,
                                        const QVec& x) {
    if (!cone_contains(rays, lineality, x)) return std::nullopt;
    if (rays.empty()) return Rat(1);
    std::size_t dim = x.size();
    // lambda_i = t + s_i, t free (t = t+ - t-), capped t <= 1 via slack.
    // columns: t+, t-, s (rays), mu+/mu- (lineality), slack
    std::size_t nr = rays.size(), nl = lineality.size();
    std::size_t nc = 2 + nr + 2 * nl + 1;
    QMat a(dim + 1, QVec(nc, Rat(0)));
    QVec b(dim + 1, Rat(0));
    QVec sum_rays = zeros(dim);
    for (const QVec& r : rays) sum_rays = add(sum_rays, r);
    for (std::size_t d = 0; d < dim; ++d) {
        a[d][0] = sum_rays[d];
        a[d][1] = -sum_rays[d];
        for (std::size_t i = 0; i < nr; ++i) a[d][2 + i] = rays[i][d];
        for (std::size_t i = 0; i < nl; ++i) {
            a[d][2 + nr + 2 * i] = lineality[i][d];
            a[d][2 + nr + 2 * i + 1] = -lineality[i][d];
        }
        b[d] = x[d];
    }
    a[dim][0] = 1;
    a[dim][1] = -1;
    a[dim][nc - 1] = 1;   // t + slack = 1
    b[dim] = 1;
    QVec c(nc, Rat(0));
    c[0] = -1;            // maximize t
    c[1] = 1;
    LpResult res = lp_solve(a, b, c);
    if (res.status != LpStatus::optimal)
        throw internal_error("bounded LP reported unbounded");
    return -res.objective;
}

} // namespace ksph
