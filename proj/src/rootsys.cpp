#include "ksph/rootsys.hpp"
#include "ksph/linalg.hpp"
#include "ksph/polyhedral.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ksph {

using namespace linalg;

Rat RootSystemData::kappa(const QVec& a, const QVec& b) const {
    return dot(a, mat_vec(form, b));
}

QVec RootSystemData::kappa_form(const QVec& a) const {
    return mat_vec(form, a);   // form is symmetric
}

namespace {

// Symmetrized Gram matrix (alpha_i, alpha_j) of the simple roots, long
// roots normalized to squared length 2.
QMat simple_gram(char type, int rank) {
    auto invalid = [&]() {
        return input_error(std::string("invalid root system type/rank: ") + type +
                           std::to_string(rank));
    };
    int n = rank;
    if (n < 1) throw invalid();
    QMat g(n, QVec(n, Rat(0)));
    auto chain = [&](const QVec& diag, std::map<std::pair<int, int>, Rat> off = {}) {
        for (int i = 0; i < n; ++i) g[i][i] = diag[i];
        for (int i = 0; i + 1 < n; ++i) {
            Rat v = off.count({i, i + 1}) ? off[{i, i + 1}] : Rat(-1);
            g[i][i + 1] = g[i + 1][i] = v;
        }
    };
    switch (type) {
    case 'A':
        chain(QVec(n, Rat(2)));
        break;
    case 'B':   // short last root
        if (n < 2) throw invalid();
        chain([&] { QVec d(n, Rat(2)); d[n - 1] = 1; return d; }());
        break;
    case 'C':   // long last root
        if (n < 2) throw invalid();
        chain([&] { QVec d(n, Rat(1)); d[n - 1] = 2; return d; }(),
              {{{0, 1}, Rat(-1, 2)}});
        for (int i = 0; i + 1 < n - 1; ++i) g[i][i + 1] = g[i + 1][i] = Rat(-1, 2);
        g[n - 2][n - 1] = g[n - 1][n - 2] = -1;
        break;
    case 'D':
        if (n < 3) throw invalid();
        chain(QVec(n, Rat(2)));
        g[n - 2][n - 1] = g[n - 1][n - 2] = 0;
        g[n - 3][n - 1] = g[n - 1][n - 3] = -1;
        break;
    case 'E': {
        if (n < 6 || n > 8) throw invalid();
        // Bourbaki: chain 1-3-4-5-...-n with node 2 attached to 4.
        chain(QVec(n, Rat(2)));
        for (int i = 0; i + 1 < n; ++i) g[i][i + 1] = g[i + 1][i] = 0;
        auto link = [&](int i, int j) { g[i - 1][j - 1] = g[j - 1][i - 1] = -1; };
        link(1, 3);
        link(2, 4);
        for (int i = 3; i < n; ++i) link(i, i + 1);
        break;
    }
    case 'F':
        if (n != 4) throw invalid();
        g = {{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 1, Rat(-1, 2)}, {0, 0, Rat(-1, 2), 1}};
        break;
    case 'G':
        if (n != 2) throw invalid();
        g = {{2, -1}, {-1, Rat(2, 3)}};
        break;
    default:
        throw invalid();
    }
    return g;
}

// Positive roots in simple-root integer coordinates by the root-string
// closure (exact).
std::vector<std::vector<long>> positive_root_coords(const QMat& gram) {
    std::size_t n = gram.size();
    std::set<std::vector<long>> roots;
    std::vector<std::vector<long>> frontier;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<long> e(n, 0);
        e[i] = 1;
        roots.insert(e);
        frontier.push_back(e);
    }
    while (!frontier.empty()) {
        std::vector<std::vector<long>> next;
        for (const auto& beta : frontier) {
            for (std::size_t i = 0; i < n; ++i) {
                // Cartan pairing <beta, alpha_i^vee> = 2 (beta, alpha_i) / (alpha_i, alpha_i)
                Rat num = 0;
                for (std::size_t j = 0; j < n; ++j) num += Rat(beta[j]) * gram[j][i];
                Rat cart = 2 * num / gram[i][i];
                if (cart.get_den() != 1) throw internal_error("non-integral Cartan pairing");
                long c = cart.get_num().get_si();
                long p = 0;   // largest k with beta - k alpha_i a root
                std::vector<long> down = beta;
                while (true) {
                    down[i] -= 1;
                    bool neg = std::all_of(down.begin(), down.end(), [](long x) { return x <= 0; });
                    if (!neg && roots.count(down) == 0) break;
                    if (neg) {
                        bool simple_neg = false;   // beta - k alpha_i never positive-negative mix
                        (void)simple_neg;
                        break;
                    }
                    ++p;
                }
                if (p - c <= 0) continue;
                std::vector<long> up = beta;
                up[i] += 1;
                if (roots.insert(up).second) next.push_back(up);
            }
        }
        frontier = std::move(next);
    }
    return {roots.begin(), roots.end()};
}

} // namespace

RootSystemData build_root_system(char type, int rank, int central_dims) {
    if (central_dims < 0) throw input_error("central_dims must be nonnegative");
    QMat gram = simple_gram(type, rank);
    std::size_t n = rank, nc = n + central_dims;

    // weight-basis coordinates: alpha_j = column j of the Cartan matrix
    // C_ij = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)
    QMat cartan(n, QVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cartan[i][j] = 2 * gram[i][j] / gram[i][i];

    RootSystemData rs;
    rs.ambient_dim = nc;
    for (std::size_t j = 0; j < n; ++j) {
        QVec col = zeros(nc);
        for (std::size_t i = 0; i < n; ++i) col[i] = cartan[i][j];
        rs.simple_roots.push_back(col);
    }
    for (const auto& c : positive_root_coords(gram)) {
        QVec v = zeros(nc);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) v[i] += Rat(c[j]) * cartan[i][j];
        rs.positive_roots.push_back(v);
    }
    std::sort(rs.positive_roots.begin(), rs.positive_roots.end(),
              [](const QVec& a, const QVec& b) {
                  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
              });

    // form on the weight basis: F = C^{-T} D with D = diag((alpha_i,alpha_i)/2);
    // identity on the center block
    QMat cinv = *inverse(cartan);
    QMat cinv_t = transpose(cinv);
    rs.form = identity(nc);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rs.form[i][j] = cinv_t[i][j] * gram[j][j] / 2;

    rs.rho = zeros(nc);
    for (const QVec& a : rs.positive_roots) rs.rho = add(rs.rho, a);
    rs.rho = scale(Rat(1, 2), rs.rho);
    return rs;
}

RootSystemData product_root_system(const std::vector<RootSystemData>& parts) {
    if (parts.empty()) throw input_error("empty root system product");
    RootSystemData rs;
    for (const RootSystemData& p : parts) rs.ambient_dim += p.ambient_dim;
    rs.form = identity(rs.ambient_dim);
    std::size_t off = 0;
    auto embed = [&](const QVec& v, std::size_t o) {
        QVec w = zeros(rs.ambient_dim);
        for (std::size_t i = 0; i < v.size(); ++i) w[o + i] = v[i];
        return w;
    };
    rs.rho = zeros(rs.ambient_dim);
    for (const RootSystemData& p : parts) {
        for (const QVec& a : p.simple_roots) rs.simple_roots.push_back(embed(a, off));
        for (const QVec& a : p.positive_roots) rs.positive_roots.push_back(embed(a, off));
        for (std::size_t i = 0; i < p.ambient_dim; ++i)
            for (std::size_t j = 0; j < p.ambient_dim; ++j) rs.form[off + i][off + j] = p.form[i][j];
        rs.rho = add(rs.rho, embed(p.rho, off));
        off += p.ambient_dim;
    }
    return rs;
}

RootSystemData make_root_system(QMat simple_roots, QMat positive_roots, QMat form) {
    RootSystemData rs;
    if (form.empty()) throw input_error("root system form is empty");
    rs.ambient_dim = form.size();
    for (const QVec& row : form)
        if (row.size() != rs.ambient_dim) throw input_error("form matrix is not square");
    for (std::size_t i = 0; i < rs.ambient_dim; ++i)
        for (std::size_t j = i + 1; j < rs.ambient_dim; ++j)
            if (form[i][j] != form[j][i]) throw input_error("form matrix is not symmetric");
    if (!is_positive_definite(form)) throw input_error("form matrix is not positive definite");
    rs.form = std::move(form);
    rs.simple_roots = std::move(simple_roots);
    rs.positive_roots = std::move(positive_roots);
    for (const QVec& a : rs.simple_roots)
        if (a.size() != rs.ambient_dim) throw input_error("simple root dimension mismatch");
    for (const QVec& a : rs.positive_roots)
        if (a.size() != rs.ambient_dim) throw input_error("positive root dimension mismatch");
    // Cartan integers on the simple roots
    for (std::size_t i = 0; i < rs.simple_roots.size(); ++i)
        for (std::size_t j = 0; j < rs.simple_roots.size(); ++j) {
            if (i == j) continue;
            Rat c = 2 * rs.kappa(rs.simple_roots[i], rs.simple_roots[j]) /
                    rs.kappa(rs.simple_roots[j], rs.simple_roots[j]);
            if (c > 0 || c.get_den() != 1)
                throw input_error("simple roots violate the Cartan integer condition");
        }
    // every positive root a nonnegative integer combination of simple roots
    for (const QVec& a : rs.positive_roots) {
        auto sol = solve(transpose(rs.simple_roots), a);
        if (!sol) throw input_error("positive root outside the simple-root span");
        for (const Rat& c : *sol)
            if (c < 0 || c.get_den() != 1)
                throw input_error("positive root is not a nonnegative integer combination "
                                  "of the simple roots");
    }
    rs.rho = zeros(rs.ambient_dim);
    for (const QVec& a : rs.positive_roots) rs.rho = add(rs.rho, a);
    rs.rho = scale(Rat(1, 2), rs.rho);
    return rs;
}

QMat derive_phi_p(const RootSystemData& rs, const MomentPolytope& delta_plus) {
    if (delta_plus.ambient_dim() != rs.ambient_dim)
        throw input_error("polytope/root system dimension mismatch");
    QMat out;
    for (const QVec& a : rs.positive_roots) {
        QVec l = rs.kappa_form(a);
        bool vanishes = true;
        for (const QVec& v : delta_plus.vertices())
            if (dot(l, v) != 0) { vanishes = false; break; }
        if (!vanishes) out.push_back(a);
    }
    return out;
}

QVec two_rho_p(const QMat& phi_p) {
    if (phi_p.empty()) return {};
    QVec s = zeros(phi_p[0].size());
    for (const QVec& a : phi_p) s = add(s, a);
    return s;
}

RestrictedRootData symmetric_space_data(const RootSystemData& rs, const QMat& sigma) {
    std::size_t n = rs.ambient_dim;
    if (sigma.size() != n) throw input_error("sigma dimension mismatch");
    QMat sq = mat_mul(sigma, sigma);
    if (sq != identity(n)) throw input_error("sigma is not an involution");

    std::set<QVec> all_roots;
    for (const QVec& a : rs.positive_roots) {
        all_roots.insert(a);
        all_roots.insert(scale(-1, a));
    }
    auto apply = [&](const QVec& a) { return mat_vec(sigma, a); };
    for (const QVec& a : all_roots)
        if (all_roots.count(apply(a)) == 0)
            throw input_error("sigma does not permute the root system");

    RestrictedRootData out;
    std::set<QVec> restricted;
    for (const QVec& a : rs.positive_roots) {
        QVec sa = apply(a);
        if (sa == a) continue;   // fixed root
        QVec neg = scale(-1, sa);
        bool sa_negative = std::find(rs.positive_roots.begin(), rs.positive_roots.end(), neg) !=
                           rs.positive_roots.end();
        if (!sa_negative)
            throw input_error("positive system is not compatible with sigma "
                              "(a moved positive root is not sent to a negative root)");
        out.psi_plus.push_back(a);
        restricted.insert(primitive(sub(a, sa)));
    }
    out.two_rho_sigma = out.psi_plus.empty() ? zeros(n) : two_rho_p(out.psi_plus);
    // keep unscaled representatives alpha - sigma(alpha) (dedup up to equality)
    std::set<QVec> seen;
    for (const QVec& a : out.psi_plus) {
        QVec r = sub(a, apply(a));
        if (seen.insert(r).second) out.restricted_positive_roots.push_back(r);
    }

    ConeDescription chamber = polar_cone(out.restricted_positive_roots, n);
    out.chamber_rays = chamber.rays;
    out.chamber_lineality = chamber.lineality;
    out.weyl_chamber_generators = chamber.rays;
    for (const QVec& l : chamber.lineality) {
        out.weyl_chamber_generators.push_back(l);
        out.weyl_chamber_generators.push_back(scale(-1, l));
    }
    return out;
}

GroupCompactificationData group_compactification_data(const RootSystemData& rs_hat) {
    GroupCompactificationData out;
    for (const QVec& a : rs_hat.positive_roots) {
        QVec l = rs_hat.kappa_form(a);
        out.density_forms.push_back(l);
        out.density_forms.push_back(l);
    }
    out.two_rho = scale(Rat(2), rs_hat.rho);
    ConeDescription chamber = polar_cone(rs_hat.positive_roots, rs_hat.ambient_dim);
    out.ray_generators = chamber.rays;
    out.lineality_basis = chamber.lineality;
    out.m_minus_basis = identity(rs_hat.ambient_dim);
    return out;
}

} // namespace ksph
