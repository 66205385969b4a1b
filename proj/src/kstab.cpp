#include "ksph/kstab.hpp"
#include "ksph/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ksph {

using namespace linalg;

SphericalDatum SphericalDatum::make(RootSystemData rs, MomentPolytope delta,
                                    ValuationConeData valuation,
                                    std::optional<QMat> phi_p_list, unsigned multiplicity,
                                    std::optional<DVec> zeta_lift) {
    if (multiplicity == 0) throw input_error("density multiplicity must be positive");
    SphericalDatum d;
    std::size_t n = rs.ambient_dim;
    if (delta.ambient_dim() != n)
        throw input_error("polytope/root system dimension mismatch");
    if (valuation.dim() != 0 && valuation.dim() != n)
        throw input_error("valuation cone dimension mismatch");

    QMat base = phi_p_list ? *phi_p_list : derive_phi_p(rs, delta);
    for (const QVec& a : base)
        if (a.size() != n) throw input_error("phi_p root dimension mismatch");
    d.two_rho_p = base.empty() ? zeros(n) : ksph::two_rho_p(base);
    for (unsigned m = 0; m < multiplicity; ++m)
        for (const QVec& a : base) d.phi_p.push_back(a);
    d.phi_p_base = std::move(base);
    d.multiplicity = multiplicity;
    d.phi_p_derived = !phi_p_list.has_value();

    d.root_system = std::move(rs);
    d.delta_plus = std::move(delta);
    d.valuation = std::move(valuation);

    if (zeta_lift) {
        if (zeta_lift->size() != n) throw input_error("zeta lift dimension mismatch");
        // the projection of zeta must lie in the linear part of the cone:
        // the lift itself must be (numerically) in the lineality span
        double norm = 0;
        for (double z : *zeta_lift) norm = std::max(norm, std::fabs(z));
        if (norm > 0) {
            const QMat& lin = d.valuation.lineality_basis;
            if (lin.empty())
                throw input_error("zeta given but the valuation cone has no linear part");
            DMat lt = to_double(lin);
            std::size_t r = lin.size();
            DMat gram(r, DVec(r, 0.0));
            DVec rhs(r, 0.0);
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t j = 0; j < r; ++j)
                    for (std::size_t k = 0; k < n; ++k) gram[i][j] += lt[i][k] * lt[j][k];
                for (std::size_t k = 0; k < n; ++k) rhs[i] += lt[i][k] * (*zeta_lift)[k];
            }
            DVec y;
            if (!dsolve(gram, rhs, y))
                throw input_error("degenerate lineality basis");
            double resid = 0;
            for (std::size_t k = 0; k < n; ++k) {
                double v = (*zeta_lift)[k];
                for (std::size_t i = 0; i < r; ++i) v -= y[i] * lt[i][k];
                resid = std::max(resid, std::fabs(v));
            }
            if (resid > 1e-9 * std::max(1.0, norm))
                throw input_error("zeta lift is not in the linear part of the valuation cone");
        }
        d.zeta_lift = std::move(zeta_lift);
    }

    // positioning check: vertices of Delta+ - 2rho_P inside span(M_-)
    for (const QVec& v : d.delta_plus.vertices()) {
        if (!in_span(d.valuation.m_minus_basis, sub(v, d.two_rho_p))) {
            d.warnings.push_back(
                "some vertex of Delta+ - 2rho_P is outside span(m_minus_basis); "
                "lift invariance fails for this instance");
            break;
        }
    }
    DHDensity dens = DHDensity::from_phi_p(d.root_system, d.phi_p);
    if (!dens.nonnegative_on(d.delta_plus))
        d.warnings.push_back("density takes negative values at some vertex; "
                             "the polytope is not in the dominant region");
    return d;
}

DHDensity SphericalDatum::density() const {
    DHDensity d = DHDensity::from_phi_p(root_system, phi_p);
    if (zeta_lift) d.set_zeta(two_rho_p, *zeta_lift);
    return d;
}

SphericalDatum SphericalDatum::with_zeta(DVec zeta) const {
    SphericalDatum d = *this;
    d.zeta_lift = std::move(zeta);
    return d;
}

SphericalDatum SphericalDatum::without_zeta() const {
    SphericalDatum d = *this;
    d.zeta_lift.reset();
    return d;
}

std::string status_name(Status s) {
    switch (s) {
    case Status::stable: return "stable";
    case Status::semistable_not_stable: return "semistable_not_stable";
    case Status::unstable: return "unstable";
    case Status::inconclusive: return "inconclusive";
    }
    return "?";
}

FutakiValue futaki_pairing(const SphericalDatum& datum, const QVec& xi_lift, double tol) {
    if (xi_lift.size() != datum.root_system.ambient_dim)
        throw input_error("xi lift dimension mismatch");
    BarycenterResult bar = barycenter(datum.delta_plus, datum.density(), tol);
    FutakiValue out;
    out.exact = bar.exact;
    if (bar.exact) {
        out.value_q = dot(sub(bar.value_q, datum.two_rho_p), xi_lift);
        out.value_d = out.value_q.get_d();
        out.error_bound = 0;
        return out;
    }
    double v = 0, norm1 = 0;
    for (std::size_t i = 0; i < xi_lift.size(); ++i) {
        double xi = xi_lift[i].get_d();
        v += (bar.value_d[i] - datum.two_rho_p[i].get_d()) * xi;
        norm1 += std::fabs(xi);
    }
    out.value_d = v;
    out.error_bound = bar.error_bound * norm1;
    return out;
}

namespace {

std::string generator_description(const SphericalDatum& datum, const QVec& g) {
    std::ostringstream os;
    os << "one-parameter degeneration along xi = pi(g), g = (";
    for (std::size_t i = 0; i < g.size(); ++i)
        os << (i ? ", " : "") << rat_to_string(g[i]);
    os << ")";
    try {
        os << "; " << degeneration_description(classify_degeneration(datum, g));
    } catch (const Error&) {
        // classification is best-effort reporting
    }
    return os.str();
}

} // namespace

Verdict check_kstability(const SphericalDatum& datum, double tol,
                         double lineality_zero_tol) {
    Verdict verdict;
    verdict.bar = barycenter(datum.delta_plus, datum.density(), tol);
    const ValuationConeData& vc = datum.valuation;

    if (verdict.bar.exact) {
        QVec x = sub(verdict.bar.value_q, datum.two_rho_p);
        MembershipResult mem = membership(x, vc, true);
        for (const ConeMargin& m : mem.margins) {
            MarginEntry e;
            e.generator = m.generator;
            e.is_lineality = m.is_lineality;
            e.exact = true;
            e.value_q = m.value;
            e.value_d = m.value.get_d();
            verdict.margins.push_back(std::move(e));
        }
        switch (mem.verdict) {
        case ConeVerdict::inside_relint:
            verdict.status = Status::stable;
            break;
        case ConeVerdict::on_boundary:
            verdict.status = Status::semistable_not_stable;
            break;
        case ConeVerdict::outside:
            verdict.status = Status::unstable;
            verdict.destabilizer = Destabilizer{
                *mem.violating_generator,
                generator_description(datum, *mem.violating_generator)};
            break;
        }
        return verdict;
    }

    // numeric path: sign decisions guarded by the certified error
    DVec x(vc.dim());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = verdict.bar.value_d[i] - datum.two_rho_p[i].get_d();
    auto margin_of = [&](const QVec& g, bool lin) {
        MarginEntry e;
        e.generator = g;
        e.is_lineality = lin;
        e.exact = false;
        double v = 0, norm1 = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            double gi = g[i].get_d();
            v += x[i] * gi;
            norm1 += std::fabs(gi);
        }
        e.value_d = v;
        e.error = verdict.bar.error_bound * norm1;
        return e;
    };
    bool cert_unstable = false, touching = false;
    std::optional<QVec> violator;
    for (const QVec& l : vc.lineality_basis) {
        MarginEntry e = margin_of(l, true);
        double zero_tol = std::max(e.error, lineality_zero_tol);
        if (std::fabs(e.value_d) > zero_tol && !cert_unstable) {
            cert_unstable = true;
            violator = e.value_d < 0 ? l : scale(-1, l);
        }
        verdict.margins.push_back(std::move(e));
    }
    for (const QVec& r : vc.rays) {
        MarginEntry e = margin_of(r, false);
        if (!cert_unstable) {
            if (e.value_d < -e.error) {
                cert_unstable = true;
                violator = r;
            } else if (e.value_d <= e.error) {
                touching = true;
            }
        }
        verdict.margins.push_back(std::move(e));
    }
    if (cert_unstable) {
        verdict.status = Status::unstable;
        verdict.destabilizer =
            Destabilizer{*violator, generator_description(datum, *violator)};
    } else if (touching) {
        verdict.status = Status::inconclusive;
    } else {
        verdict.status = Status::stable;
    }
    return verdict;
}

SolitonResult solve_soliton(const SphericalDatum& datum, double tol, int max_iter,
                            const SolitonObserver& observer) {
    if (tol <= 0) throw input_error("tolerance must be positive");
    std::size_t n = datum.root_system.ambient_dim;
    const QMat& lin = datum.valuation.lineality_basis;
    SolitonResult out;
    out.zeta_lift.assign(n, 0.0);
    if (lin.empty()) {
        out.converged = true;
        return out;
    }

    // quotient out directions on which the density is constant: keep the
    // lineality vectors pairing nontrivially with the hull directions
    QMat pairing;
    for (const QVec& dir : datum.delta_plus.hull_directions()) {
        QVec row(lin.size());
        for (std::size_t j = 0; j < lin.size(); ++j) row[j] = dot(dir, lin[j]);
        pairing.push_back(std::move(row));
    }
    std::vector<std::size_t> active;
    if (!pairing.empty()) active = rref(pairing);

    double integ_tol = std::min(1e-12, tol * 1e-2);
    DVec y(active.size(), 0.0);
    auto zeta_of = [&](const DVec& yv) {
        DVec z(n, 0.0);
        for (std::size_t k = 0; k < active.size(); ++k)
            for (std::size_t i = 0; i < n; ++i)
                z[i] += yv[k] * lin[active[k]][i].get_d();
        return z;
    };
    auto moments_at = [&](const DVec& yv) {
        DHDensity dens = DHDensity::from_phi_p(datum.root_system, datum.phi_p);
        bool zero = std::all_of(yv.begin(), yv.end(), [](double v) { return v == 0.0; });
        if (!zero) dens.set_zeta(datum.two_rho_p, zeta_of(yv));
        return moments_exponential(datum.delta_plus, dens, integ_tol);
    };
    auto gradient = [&](const Moments& m) {
        DVec g(active.size(), 0.0);
        DVec bar = m.exact ? to_double(m.barycenter_q()) : m.barycenter_d();
        for (std::size_t k = 0; k < active.size(); ++k)
            for (std::size_t i = 0; i < n; ++i)
                g[k] += -2.0 * (bar[i] - datum.two_rho_p[i].get_d()) *
                        lin[active[k]][i].get_d();
        return g;
    };

    if (active.empty()) {
        // every lineality direction is flat; the lift stays zero
        Moments m = moments_at(y);
        DVec bar = m.exact ? to_double(m.barycenter_q()) : m.barycenter_d();
        double res = 0;
        for (const QVec& l : lin) {
            double v = 0;
            for (std::size_t i = 0; i < n; ++i)
                v += (bar[i] - datum.two_rho_p[i].get_d()) * l[i].get_d();
            res = std::max(res, 2.0 * std::fabs(v));
        }
        out.residual = res;
        out.converged = res <= tol;
        if (!out.converged)
            throw numeric_error("soliton equation has no stationary point: the density is "
                                "constant along the lineality but the pairing does not vanish");
        return out;
    }

    Moments m = moments_at(y);
    double h = std::log(m.mass_d);
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it;
        DVec g = gradient(m);
        double res = 0;
        for (double v : g) res = std::max(res, std::fabs(v));
        if (res < tol) {
            out.converged = true;
            break;
        }
        // Hessian 4 * lineality^T Cov lineality
        DVec bar = m.exact ? to_double(m.barycenter_q()) : m.barycenter_d();
        DMat second = m.exact ? to_double(m.second) : m.second_d;
        double mass = m.exact ? m.mass.get_d() : m.mass_d;
        DMat hess(active.size(), DVec(active.size(), 0.0));
        for (std::size_t k = 0; k < active.size(); ++k)
            for (std::size_t l2 = 0; l2 < active.size(); ++l2) {
                double s = 0;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        double cov = second[i][j] / mass - bar[i] * bar[j];
                        s += lin[active[k]][i].get_d() * cov * lin[active[l2]][j].get_d();
                    }
                hess[k][l2] = 4.0 * s;
            }
        if (observer) observer(zeta_of(y), hess);
        DVec step;
        DVec rhs(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) rhs[k] = -g[k];
        if (!dsolve(hess, rhs, step))
            throw numeric_error("singular Hessian in the soliton iteration");

        double lambda = 1.0;
        Moments next;
        double h_next = 0;
        bool accepted = false;
        while (lambda > 1e-16) {
            DVec ytry(y.size());
            for (std::size_t k = 0; k < y.size(); ++k) ytry[k] = y[k] + lambda * step[k];
            next = moments_at(ytry);
            double mass_try = next.exact ? next.mass.get_d() : next.mass_d;
            h_next = std::log(mass_try);
            if (std::isfinite(h_next) && h_next <= h + 1e-12 * (1.0 + std::fabs(h))) {
                y = std::move(ytry);
                accepted = true;
                break;
            }
            lambda /= 2;
        }
        if (!accepted) {
            // roundoff-limited: treat the current point as the optimum
            out.converged = res <= std::sqrt(tol);
            break;
        }
        m = std::move(next);
        h = h_next;
        double ynorm = 0;
        for (double v : y) ynorm = std::max(ynorm, std::fabs(v));
        if (ynorm > 1e8)
            throw numeric_error("soliton iterate diverges: 2rho_P projects outside the "
                                "relative interior of the projected polytope");
    }

    out.zeta_lift = zeta_of(y);
    // the reported residual covers the full lineality basis, including the
    // quotiented flat directions
    DVec bar = m.exact ? to_double(m.barycenter_q()) : m.barycenter_d();
    double res = 0;
    for (const QVec& l : lin) {
        double v = 0;
        for (std::size_t i = 0; i < n; ++i)
            v += (bar[i] - datum.two_rho_p[i].get_d()) * l[i].get_d();
        res = std::max(res, 2.0 * std::fabs(v));
    }
    out.residual = res;
    out.converged = res <= tol || (out.converged && res <= std::sqrt(tol));
    if (!out.converged)
        throw numeric_error("soliton iteration did not reach the requested residual");
    return out;
}

std::string degeneration_description(DegenerationType t) {
    switch (t) {
    case DegenerationType::product_type:
        return "product-type (central fiber isomorphic to X)";
    case DegenerationType::horospherical_central_fiber:
        return "horospherical central fiber";
    case DegenerationType::proper_spherical:
        return "proper spherical degeneration";
    }
    return "?";
}

DegenerationType classify_degeneration(const SphericalDatum& datum, const QVec& xi_lift) {
    const ValuationConeData& vc = datum.valuation;
    if (xi_lift.size() != vc.dim()) throw input_error("xi lift dimension mismatch");
    if (!cone_contains(vc.rays, vc.lineality_basis, xi_lift))
        throw input_error("xi is not in the lifted valuation cone");
    if (in_span(vc.lineality_basis, xi_lift)) return DegenerationType::product_type;
    std::optional<Rat> t = cone_min_coefficient(vc.rays, vc.lineality_basis, xi_lift);
    if (t && *t > 0) return DegenerationType::horospherical_central_fiber;
    return DegenerationType::proper_spherical;
}

} // namespace ksph
