#include "ksph/quantized.hpp"
#include "ksph/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace ksph {

using namespace linalg;

Rat weyl_dimension(const RootSystemData& rs, const QVec& lambda) {
    if (lambda.size() != rs.ambient_dim)
        throw input_error("weight dimension mismatch");
    Rat out = 1;
    QVec shifted = add(lambda, rs.rho);
    for (const QVec& a : rs.positive_roots) {
        Rat den = rs.kappa(rs.rho, a);
        if (den == 0) throw internal_error("kappa(rho, alpha) vanished");
        out *= rs.kappa(shifted, a) / den;
    }
    return out;
}

bool is_dominant(const RootSystemData& rs, const QVec& lambda) {
    for (const QVec& a : rs.simple_roots)
        if (rs.kappa(lambda, a) < 0) return false;
    return true;
}

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

struct ExactAcc {
    mpz_class mass;             // sum of products P(t)
    std::vector<mpz_class> moment;   // sum of P(t) * nu_i(t)
};

} // namespace

QuantizedSample quantized_barycenter(const SphericalDatum& datum, unsigned k) {
    if (k == 0) throw input_error("quantization level must be positive");
    std::size_t n = datum.root_system.ambient_dim;
    const QMat& basis = datum.valuation.m_minus_basis;
    if (basis.empty()) throw input_error("empty m_minus basis");
    std::size_t r = basis.size();

    // collect lattice coordinates
    std::vector<long> ts;
    datum.delta_plus.enumerate_lattice_points(
        k, basis, datum.two_rho_p,
        [&](const std::vector<long>& t) { ts.insert(ts.end(), t.begin(), t.end()); });
    std::size_t npts = ts.size() / std::max<std::size_t>(r, 1);
    if (npts == 0) throw input_error("no lattice points at this level");

    QuantizedSample out;
    out.level = k;
    out.point_count = npts;

    // density covectors, scaled primitive (the scale cancels in the weight)
    QMat forms;
    for (const QVec& a : datum.phi_p) forms.push_back(primitive(datum.root_system.kappa_form(a)));
    std::size_t m = forms.size();

    // common denominator D: mu(t) = D (k base + B t + rho) is integral
    mpz_class dcom = 1;
    auto lcm_in = [&](const Rat& q) {
        mpz_lcm(dcom.get_mpz_t(), dcom.get_mpz_t(), q.get_den().get_mpz_t());
    };
    for (const Rat& c : datum.two_rho_p) lcm_in(c);
    for (const QVec& b : basis)
        for (const Rat& c : b) lcm_in(c);
    for (const Rat& c : datum.root_system.rho) lcm_in(c);
    for (const QVec& l : forms)
        for (const Rat& c : l) lcm_in(c);   // forms are integral already; keep safe

    Rat dq(dcom);
    std::vector<mpz_class> mu0(n), rhoD(n);
    std::vector<std::vector<mpz_class>> bcols(r, std::vector<mpz_class>(n));
    for (std::size_t i = 0; i < n; ++i) {
        Rat v = dq * (Rat(static_cast<long>(k)) * datum.two_rho_p[i] + datum.root_system.rho[i]);
        if (v.get_den() != 1) throw internal_error("lattice scaling failed");
        mu0[i] = v.get_num();
        Rat rv = dq * datum.root_system.rho[i];
        rhoD[i] = rv.get_num();
        for (std::size_t j = 0; j < r; ++j) {
            Rat bv = dq * basis[j][i];
            bcols[j][i] = bv.get_num();
        }
    }
    std::vector<std::vector<mpz_class>> lforms(m, std::vector<mpz_class>(n));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t i = 0; i < n; ++i) lforms[a][i] = forms[a][i].get_num();

    // constant denominator of the weight: prod_a L'_a(D rho)
    mpz_class weight_den = 1;
    for (std::size_t a = 0; a < m; ++a) {
        mpz_class v = 0;
        for (std::size_t i = 0; i < n; ++i) v += lforms[a][i] * rhoD[i];
        if (v == 0) throw internal_error("density form vanishes on rho");
        weight_den *= v;
    }

    bool has_zeta = datum.zeta_lift.has_value();
    DVec zc;
    double zc0 = 0;
    if (has_zeta) {
        DHDensity dens;
        dens.set_zeta(datum.two_rho_p, *datum.zeta_lift);
        zc = dens.exp_coeff;
        zc0 = dens.exp_const;
    }

    const std::size_t chunk = 4096;
    std::size_t nchunks = (npts + chunk - 1) / chunk;

    if (!has_zeta) {
        std::vector<ExactAcc> parts(nchunks);
        auto run_chunk = [&](std::size_t ci) {
            ExactAcc acc;
            acc.mass = 0;
            acc.moment.assign(n, 0);
            std::vector<mpz_class> mu(n), nu(n);
            mpz_class prod, term;
            std::size_t b = ci * chunk, e = std::min(npts, (ci + 1) * chunk);
            for (std::size_t p = b; p < e; ++p) {
                const long* t = &ts[p * r];
                for (std::size_t i = 0; i < n; ++i) {
                    mu[i] = mu0[i];
                    for (std::size_t j = 0; j < r; ++j) mu[i] += bcols[j][i] * t[j];
                    nu[i] = mu[i] - rhoD[i];
                }
                prod = 1;
                for (std::size_t a = 0; a < m; ++a) {
                    term = 0;
                    for (std::size_t i = 0; i < n; ++i) term += lforms[a][i] * mu[i];
                    prod *= term;
                }
                acc.mass += prod;
                for (std::size_t i = 0; i < n; ++i) acc.moment[i] += prod * nu[i];
            }
            return acc;
        };
        unsigned workers = std::min<std::size_t>(worker_count(), nchunks);
        if (workers <= 1) {
            for (std::size_t c = 0; c < nchunks; ++c) parts[c] = run_chunk(c);
        } else {
            std::atomic<std::size_t> next{0};
            auto worker = [&]() {
                while (true) {
                    std::size_t c = next.fetch_add(1);
                    if (c >= nchunks) break;
                    parts[c] = run_chunk(c);
                }
            };
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (std::thread& th : pool) th.join();
        }
        mpz_class mass = 0;
        std::vector<mpz_class> moment(n, 0);
        for (const ExactAcc& p : parts) {
            mass += p.mass;
            for (std::size_t i = 0; i < n; ++i) moment[i] += p.moment[i];
        }
        out.exact = true;
        out.weighted_mass = Rat(mass) / Rat(weight_den);
        if (out.weighted_mass <= 0)
            throw numeric_error("quantized mass is not positive");
        out.weighted_moment = zeros(n);
        out.q_barycenter = zeros(n);
        Rat dk = dq * Rat(static_cast<long>(k));
        for (std::size_t i = 0; i < n; ++i) {
            out.weighted_moment[i] = Rat(moment[i]) / (dk * Rat(weight_den));
            out.q_barycenter[i] = Rat(moment[i]) / (dk * Rat(mass));
        }
        out.weighted_mass_d = out.weighted_mass.get_d();
        out.weighted_moment_d = to_double(out.weighted_moment);
        out.q_barycenter_d = to_double(out.q_barycenter);
        return out;
    }

    // numeric path (zeta present): double accumulation, fixed chunk order
    double dD = mpz_class(dcom).get_d();
    double wden = weight_den.get_d();
    double mass = 0;
    DVec moment(n, 0.0);
    for (std::size_t ci = 0; ci < nchunks; ++ci) {
        double pm = 0;
        DVec pmom(n, 0.0);
        std::size_t b = ci * chunk, e = std::min(npts, (ci + 1) * chunk);
        DVec mu(n), lam(n);
        for (std::size_t p = b; p < e; ++p) {
            const long* t = &ts[p * r];
            for (std::size_t i = 0; i < n; ++i) {
                double v = mu0[i].get_d();
                for (std::size_t j = 0; j < r; ++j) v += bcols[j][i].get_d() * t[j];
                mu[i] = v;
                lam[i] = (v - rhoD[i].get_d()) / dD / k;   // lambda/k
            }
            // weight = prod_a (L'.mu) / prod_a (L'.(D rho)); the D factors cancel
            double prod = 1;
            for (std::size_t a = 0; a < m; ++a) {
                double term = 0;
                for (std::size_t i = 0; i < n; ++i) term += lforms[a][i].get_d() * mu[i];
                prod *= term;
            }
            double expo = zc0;
            for (std::size_t i = 0; i < n; ++i) expo += zc[i] * lam[i];
            double w = prod / wden * std::exp(expo);
            pm += w;
            for (std::size_t i = 0; i < n; ++i) pmom[i] += w * lam[i];
        }
        mass += pm;
        for (std::size_t i = 0; i < n; ++i) moment[i] += pmom[i];
    }
    out.exact = false;
    out.weighted_mass_d = mass;
    if (!(mass > 0)) throw numeric_error("quantized mass is not positive");
    out.weighted_moment_d = moment;
    out.q_barycenter_d.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) out.q_barycenter_d[i] = moment[i] / mass;
    return out;
}

FutakiValue quantized_futaki(const SphericalDatum& datum, unsigned k, const QVec& xi_lift) {
    if (xi_lift.size() != datum.root_system.ambient_dim)
        throw input_error("xi lift dimension mismatch");
    QuantizedSample s = quantized_barycenter(datum, k);
    FutakiValue out;
    out.exact = s.exact;
    if (s.exact) {
        out.value_q = dot(sub(s.q_barycenter, datum.two_rho_p), xi_lift);
        out.value_d = out.value_q.get_d();
        return out;
    }
    double v = 0;
    for (std::size_t i = 0; i < xi_lift.size(); ++i)
        v += (s.q_barycenter_d[i] - datum.two_rho_p[i].get_d()) * xi_lift[i].get_d();
    out.value_d = v;
    return out;
}

} // namespace ksph
