#include "ksph/dhmeasure.hpp"
#include "ksph/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

namespace ksph {

using namespace linalg;

namespace {

unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("KSPH_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
    }
    return hw;
}

// Runs fn(i) for i in [0, n) across workers; partial results are produced
// per fixed-size chunk and combined in chunk order, so results do not
// depend on the worker count.
template <typename Partial, typename PerChunk, typename Combine>
void parallel_chunks(std::size_t n, std::size_t chunk_size, PerChunk per_chunk,
                     Combine combine) {
    if (n == 0) return;
    std::size_t nchunks = (n + chunk_size - 1) / chunk_size;
    std::vector<Partial> partials(nchunks);
    unsigned workers = std::min<std::size_t>(worker_count(), nchunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            partials[c] = per_chunk(c * chunk_size, std::min(n, (c + 1) * chunk_size));
    } else {
        std::atomic<std::size_t> next{0};
        auto run = [&]() {
            while (true) {
                std::size_t c = next.fetch_add(1);
                if (c >= nchunks) break;
                partials[c] = per_chunk(c * chunk_size, std::min(n, (c + 1) * chunk_size));
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
        for (std::thread& t : pool) t.join();
    }
    for (std::size_t c = 0; c < nchunks; ++c) combine(partials[c]);
}

mpz_class factorial(unsigned n) {
    mpz_class f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

// ---------- exact path ----------

struct ExactPartial {
    Rat mass;
    QVec first;
    QMat second;
};

using BaryPoly = std::map<std::vector<int>, Rat>;   // exponent vector -> coeff

BaryPoly expand_density(const QMat& forms, const QMat& simplex_vertices) {
    std::size_t nv = simplex_vertices.size();
    BaryPoly poly;
    poly[std::vector<int>(nv, 0)] = 1;
    for (const QVec& l : forms) {
        QVec a(nv);
        for (std::size_t k = 0; k < nv; ++k) a[k] = dot(l, simplex_vertices[k]);
        BaryPoly next;
        for (const auto& [expo, coeff] : poly)
            for (std::size_t k = 0; k < nv; ++k) {
                if (a[k] == 0) continue;
                std::vector<int> e = expo;
                e[k] += 1;
                next[e] += coeff * a[k];
            }
        poly = std::move(next);
    }
    return poly;
}

ExactPartial simplex_moments_exact(const MomentPolytope& p, const Simplex& s,
                                   const QMat& forms) {
    std::size_t n = p.ambient_dim();
    std::size_t d = s.vertices.size() - 1;
    Rat absdet = 1;
    if (d > 0) {
        QMat m(d, QVec(d));
        QVec c0 = p.hull_coords(s.vertices[0]);
        for (std::size_t i = 0; i < d; ++i) {
            QVec ci = p.hull_coords(s.vertices[i + 1]);
            for (std::size_t j = 0; j < d; ++j) m[i][j] = ci[j] - c0[j];
        }
        absdet = abs(det(m));
    }

    BaryPoly poly = expand_density(forms, s.vertices);
    std::size_t nv = d + 1;

    // integral of the barycentric monomial lam^e over the simplex
    auto mono = [&](const std::vector<int>& e) -> Rat {
        mpz_class num = 1;
        unsigned total = 0;
        for (int ek : e) {
            num *= factorial(static_cast<unsigned>(ek));
            total += static_cast<unsigned>(ek);
        }
        return absdet * Rat(num) / Rat(factorial(static_cast<unsigned>(d) + total));
    };

    ExactPartial out{Rat(0), zeros(n), QMat(n, zeros(n))};
    QMat svert = s.vertices;
    for (const auto& [expo, coeff] : poly) {
        out.mass += coeff * mono(expo);
        std::vector<int> e1 = expo;
        for (std::size_t k = 0; k < nv; ++k) {
            e1[k] += 1;
            Rat ik = coeff * mono(e1);
            for (std::size_t i = 0; i < n; ++i) out.first[i] += ik * svert[k][i];
            std::vector<int> e2 = e1;
            for (std::size_t l = 0; l < nv; ++l) {
                e2[l] += 1;
                Rat ikl = coeff * mono(e2);
                e2[l] -= 1;
                for (std::size_t i = 0; i < n; ++i) {
                    if (svert[k][i] == 0) continue;
                    Rat w = ikl * svert[k][i];
                    for (std::size_t j = 0; j < n; ++j) out.second[i][j] += w * svert[l][j];
                }
            }
            e1[k] -= 1;
        }
    }
    return out;
}

// ---------- Grundmann-Moller quadrature ----------

struct GMRule {
    std::vector<DVec> points;   // barycentric, length d+1
    DVec weights;               // sum to vol(T_d) = 1/d!
};

void compositions(unsigned total, unsigned parts, std::vector<unsigned>& cur,
                  std::vector<std::vector<unsigned>>& out) {
    if (cur.size() + 1 == parts) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (unsigned v = 0; v <= total; ++v) {
        cur.push_back(v);
        compositions(total - v, parts, cur, out);
        cur.pop_back();
    }
}

GMRule gm_rule(unsigned s, unsigned d) {
    GMRule rule;
    for (unsigned i = 0; i <= s; ++i) {
        long q = static_cast<long>(d + 2 * (s - i) + 1);   // d + 2s + 1 - 2i
        // (-1)^i 2^{-2s} q^{2s+1} / (i! (d+2s+1-i)!)
        mpz_class qp;
        mpz_ui_pow_ui(qp.get_mpz_t(), static_cast<unsigned long>(q), 2 * s + 1);
        Rat w = Rat(qp) / Rat(factorial(i) * factorial(d + 2 * s + 1 - i));
        mpz_class two2s;
        mpz_ui_pow_ui(two2s.get_mpz_t(), 2, 2 * s);
        w /= Rat(two2s);
        if (i % 2 == 1) w = -w;
        double wd = w.get_d();
        std::vector<std::vector<unsigned>> betas;
        std::vector<unsigned> cur;
        compositions(s - i, d + 1, cur, betas);
        for (const auto& beta : betas) {
            DVec pt(d + 1);
            for (unsigned k = 0; k <= d; ++k)
                pt[k] = static_cast<double>(2 * beta[k] + 1) / static_cast<double>(q);
            rule.points.push_back(std::move(pt));
            rule.weights.push_back(wd);
        }
    }
    return rule;
}

struct NumMoments {
    double mass = 0.0;
    DVec first;
    DMat second;
};

struct NumSimplex {
    DMat vertices;      // rows, ambient doubles
    double absdet = 0;  // hull-coordinate determinant
};

NumMoments eval_rule(const std::vector<NumSimplex>& simplices, const GMRule& rule,
                     const QMat& forms_q, const DVec& expc, double exp_const,
                     double shift, std::size_t n) {
    DMat forms = to_double(forms_q);
    NumMoments total;
    total.first.assign(n, 0.0);
    total.second.assign(n, DVec(n, 0.0));
    auto per_chunk = [&](std::size_t b, std::size_t e) {
        NumMoments part;
        part.first.assign(n, 0.0);
        part.second.assign(n, DVec(n, 0.0));
        DVec x(n);
        for (std::size_t si = b; si < e; ++si) {
            const NumSimplex& s = simplices[si];
            double m = 0;
            DVec f(n, 0.0);
            DMat sec(n, DVec(n, 0.0));
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const DVec& lam = rule.points[q];
                for (std::size_t i = 0; i < n; ++i) {
                    double xi = 0;
                    for (std::size_t k = 0; k < s.vertices.size(); ++k)
                        xi += lam[k] * s.vertices[k][i];
                    x[i] = xi;
                }
                double dens = 1.0;
                for (const DVec& l : forms) {
                    double v = 0;
                    for (std::size_t i = 0; i < n; ++i) v += l[i] * x[i];
                    dens *= v;
                }
                double expo = exp_const - shift;
                for (std::size_t i = 0; i < n && i < expc.size(); ++i) expo += expc[i] * x[i];
                double w = rule.weights[q] * dens * std::exp(expo);
                m += w;
                for (std::size_t i = 0; i < n; ++i) {
                    f[i] += w * x[i];
                    for (std::size_t j = 0; j < n; ++j) sec[i][j] += w * x[i] * x[j];
                }
            }
            part.mass += m * s.absdet;
            for (std::size_t i = 0; i < n; ++i) {
                part.first[i] += f[i] * s.absdet;
                for (std::size_t j = 0; j < n; ++j) part.second[i][j] += sec[i][j] * s.absdet;
            }
        }
        return part;
    };
    parallel_chunks<NumMoments>(simplices.size(), 8, per_chunk, [&](const NumMoments& p) {
        total.mass += p.mass;
        for (std::size_t i = 0; i < n; ++i) {
            total.first[i] += p.first[i];
            for (std::size_t j = 0; j < n; ++j) total.second[i][j] += p.second[i][j];
        }
    });
    return total;
}

// Longest-edge bisection; exact midpoint keeps the triangulation rational.
std::vector<Simplex> subdivide(const std::vector<Simplex>& in) {
    std::vector<Simplex> out;
    for (const Simplex& s : in) {
        std::size_t nv = s.vertices.size();
        if (nv < 2) {
            out.push_back(s);
            continue;
        }
        std::size_t bi = 0, bj = 1;
        Rat best = -1;
        for (std::size_t i = 0; i < nv; ++i)
            for (std::size_t j = i + 1; j < nv; ++j) {
                QVec diff = sub(s.vertices[i], s.vertices[j]);
                Rat len = dot(diff, diff);
                if (len > best) { best = len; bi = i; bj = j; }
            }
        QVec mid = scale(Rat(1, 2), add(s.vertices[bi], s.vertices[bj]));
        Simplex a = s, b = s;
        a.vertices[bj] = mid;
        b.vertices[bi] = mid;
        out.push_back(std::move(a));
        out.push_back(std::move(b));
    }
    return out;
}

} // namespace

DHDensity DHDensity::from_phi_p(const RootSystemData& rs, const QMat& phi_p) {
    DHDensity d;
    for (const QVec& a : phi_p) d.linear_forms.push_back(rs.kappa_form(a));
    return d;
}

void DHDensity::set_zeta(const QVec& two_rho_p, const DVec& zeta_lift) {
    exp_coeff.assign(zeta_lift.size(), 0.0);
    exp_const = 0.0;
    for (std::size_t i = 0; i < zeta_lift.size(); ++i) {
        exp_coeff[i] = -2.0 * zeta_lift[i];
        if (i < two_rho_p.size()) exp_const += 2.0 * two_rho_p[i].get_d() * zeta_lift[i];
    }
}

bool DHDensity::is_exact() const {
    if (exp_const != 0.0) return false;
    for (double c : exp_coeff)
        if (c != 0.0) return false;
    return true;
}

bool DHDensity::nonnegative_on(const MomentPolytope& p) const {
    for (const QVec& l : linear_forms)
        for (const QVec& v : p.vertices())
            if (dot(l, v) < 0) return false;
    return true;
}

QVec Moments::barycenter_q() const {
    if (!exact) throw internal_error("exact barycenter requested from numeric moments");
    if (mass == 0) throw numeric_error("density has zero mass on the polytope");
    QVec b(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) b[i] = first[i] / mass;
    return b;
}

DVec Moments::barycenter_d() const {
    if (mass_d == 0) throw numeric_error("density has zero mass on the polytope");
    DVec b(first_d.size());
    for (std::size_t i = 0; i < first_d.size(); ++i) b[i] = first_d[i] / mass_d;
    return b;
}

Moments moments_polynomial_exact(const MomentPolytope& p, const QMat& forms) {
    std::size_t n = p.ambient_dim();
    std::vector<Simplex> tris = p.triangulate();
    Moments out;
    out.exact = true;
    out.mass = 0;
    out.first = zeros(n);
    out.second = QMat(n, zeros(n));
    auto per_chunk = [&](std::size_t b, std::size_t e) {
        ExactPartial part{Rat(0), zeros(n), QMat(n, zeros(n))};
        for (std::size_t i = b; i < e; ++i) {
            ExactPartial sm = simplex_moments_exact(p, tris[i], forms);
            part.mass += sm.mass;
            part.first = add(part.first, sm.first);
            for (std::size_t r = 0; r < n; ++r) part.second[r] = add(part.second[r], sm.second[r]);
        }
        return part;
    };
    parallel_chunks<ExactPartial>(tris.size(), 4, per_chunk, [&](const ExactPartial& part) {
        out.mass += part.mass;
        out.first = add(out.first, part.first);
        for (std::size_t r = 0; r < n; ++r) out.second[r] = add(out.second[r], part.second[r]);
    });
    out.mass_d = out.mass.get_d();
    out.first_d = to_double(out.first);
    out.second_d = to_double(out.second);
    out.error_bound = 0.0;
    return out;
}

Moments moments_exponential(const MomentPolytope& p, const DHDensity& d, double tol) {
    if (tol <= 0) throw input_error("tolerance must be positive");
    if (d.is_exact()) return moments_polynomial_exact(p, d.linear_forms);

    std::size_t n = p.ambient_dim();
    // 0-dimensional hull: point evaluation
    if (p.hull_dim() == 0) {
        const QVec& v = p.vertices()[0];
        double dens = 1.0;
        for (const QVec& l : d.linear_forms) dens *= dot(l, v).get_d();
        double expo = d.exp_const;
        for (std::size_t i = 0; i < n && i < d.exp_coeff.size(); ++i)
            expo += d.exp_coeff[i] * v[i].get_d();
        Moments out;
        out.exact = false;
        out.mass_d = dens * std::exp(expo);
        out.first_d.assign(n, 0.0);
        out.second_d.assign(n, DVec(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            out.first_d[i] = out.mass_d * v[i].get_d();
            for (std::size_t j = 0; j < n; ++j)
                out.second_d[i][j] = out.mass_d * v[i].get_d() * v[j].get_d();
        }
        out.error_bound = 0.0;
        return out;
    }

    // exponent shift for overflow safety
    double shift = -1e300;
    for (const QVec& v : p.vertices()) {
        double e = d.exp_const;
        for (std::size_t i = 0; i < n && i < d.exp_coeff.size(); ++i)
            e += d.exp_coeff[i] * v[i].get_d();
        shift = std::max(shift, e);
    }

    // coordinate scale, used to normalize the second-moment gap
    double coord_scale = 0;
    for (const QVec& v : p.vertices())
        for (const Rat& x : v) coord_scale = std::max(coord_scale, std::fabs(x.get_d()));
    double second_scale = 1.0 + coord_scale * coord_scale;

    // Moderate orders with progressive subdivision: high GM orders lose
    // accuracy to weight cancellation, halving the cells does not.
    std::vector<Simplex> tris = p.triangulate();
    const int max_subdiv = 6;
    std::size_t hd = p.hull_dim();
    for (int round = 0; round <= max_subdiv; ++round) {
        std::vector<NumSimplex> ns;
        ns.reserve(tris.size());
        for (const Simplex& s : tris) {
            NumSimplex x;
            x.vertices = to_double(s.vertices);
            QMat m(hd, QVec(hd));
            QVec c0 = p.hull_coords(s.vertices[0]);
            for (std::size_t i = 0; i < hd; ++i) {
                QVec ci = p.hull_coords(s.vertices[i + 1]);
                for (std::size_t j = 0; j < hd; ++j) m[i][j] = ci[j] - c0[j];
            }
            // Jacobian of the barycentric chart
            x.absdet = Rat(abs(det(m))).get_d();
            ns.push_back(std::move(x));
        }
        NumMoments prev;
        bool have_prev = false;
        for (unsigned s = 3; s <= 7; s += 2) {
            GMRule rule = gm_rule(s, static_cast<unsigned>(hd));
            NumMoments cur = eval_rule(ns, rule, d.linear_forms, d.exp_coeff, d.exp_const,
                                       shift, n);
            if (have_prev) {
                double gap = 0, gap_second = 0;
                gap = std::fabs(prev.mass - cur.mass);
                for (std::size_t i = 0; i < n; ++i) {
                    gap = std::max(gap, std::fabs(prev.first[i] - cur.first[i]));
                    for (std::size_t j = 0; j < n; ++j)
                        gap_second = std::max(
                            gap_second, std::fabs(prev.second[i][j] - cur.second[i][j]));
                }
                if (gap <= tol / 4 * std::fabs(cur.mass) &&
                    gap_second <= tol / 4 * std::fabs(cur.mass) * second_scale) {
                    Moments out;
                    out.exact = false;
                    double rescale = std::exp(shift);
                    out.mass_d = cur.mass * rescale;
                    out.first_d.assign(n, 0.0);
                    out.second_d.assign(n, DVec(n, 0.0));
                    for (std::size_t i = 0; i < n; ++i) {
                        out.first_d[i] = cur.first[i] * rescale;
                        for (std::size_t j = 0; j < n; ++j)
                            out.second_d[i][j] = cur.second[i][j] * rescale;
                    }
                    out.error_bound = gap * rescale;
                    return out;
                }
            }
            prev = cur;
            have_prev = true;
        }
        if (round < max_subdiv) tris = subdivide(subdivide(tris));
    }
    throw numeric_error("quadrature failed to converge; input scale is pathological");
}

BarycenterResult barycenter(const MomentPolytope& p, const DHDensity& d, double tol) {
    Moments m = moments_exponential(p, d, tol);
    BarycenterResult out;
    out.exact = m.exact;
    if (m.exact) {
        if (m.mass == 0) throw numeric_error("density has zero mass on the polytope");
        out.value_q = m.barycenter_q();
        out.value_d = to_double(out.value_q);
        out.error_bound = 0.0;
        return out;
    }
    if (std::fabs(m.mass_d) <= m.error_bound)
        throw numeric_error("density mass is not certified nonzero on the polytope");
    out.value_d = m.barycenter_d();
    double bmax = 0;
    for (double b : out.value_d) bmax = std::max(bmax, std::fabs(b));
    out.error_bound = m.error_bound * (1.0 + bmax) / std::fabs(m.mass_d);
    return out;
}

} // namespace ksph
