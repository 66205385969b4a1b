#include "ksph/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ksph {
namespace linalg {

QVec zeros(std::size_t n) { return QVec(n, Rat(0)); }

QMat identity(std::size_t n) {
    QMat m(n, zeros(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QVec add(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

QVec sub(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

QVec scale(const Rat& c, const QVec& a) {
    QVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

Rat dot(const QVec& a, const QVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool is_zero(const QVec& a) {
    for (const Rat& x : a)
        if (x != 0) return false;
    return true;
}

QVec mat_vec(const QMat& m, const QVec& x) {
    QVec r(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], x);
    return r;
}

QMat mat_mul(const QMat& a, const QMat& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMat r(n, zeros(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

QMat transpose(const QMat& m) {
    if (m.empty()) return {};
    QMat r(m[0].size(), QVec(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) r[j][i] = m[i][j];
    return r;
}

std::vector<std::size_t> rref(QMat& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rat inv = 1 / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t rank(QMat m) { return rref(m).size(); }

QMat nullspace(const QMat& m) {
    if (m.empty()) return {};
    std::size_t cols = m[0].size();
    QMat a = m;
    std::vector<std::size_t> pivots = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    QMat basis;
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        QVec v = zeros(cols);
        v[c] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][c];
        basis.push_back(v);
    }
    return basis;
}

std::optional<QVec> solve(const QMat& m, const QVec& b) {
    std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    QMat aug(rows, QVec(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug[i][j] = m[i][j];
        aug[i][cols] = b[i];
    }
    std::vector<std::size_t> pivots = rref(aug);
    for (std::size_t p : pivots)
        if (p == cols) return std::nullopt;   // row (0 ... 0 | 1)
    QVec x = zeros(cols);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
    return x;
}

std::optional<QMat> inverse(const QMat& m) {
    std::size_t n = m.size();
    QMat aug(n, QVec(2 * n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    std::vector<std::size_t> pivots = rref(aug);
    if (pivots.size() != n || pivots.back() >= n) return std::nullopt;
    QMat inv(n, QVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

Rat det(QMat m) {
    std::size_t n = m.size();
    Rat d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return Rat(0);
        if (p != c) { std::swap(m[p], m[c]); d = -d; }
        d *= m[c][c];
        Rat inv = 1 / m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Rat f = m[i][c] * inv;
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return d;
}

bool in_span(const QMat& basis, const QVec& v) {
    if (is_zero(v)) return true;
    if (basis.empty()) return false;
    QMat m = basis;
    std::size_t r0 = rref(m).size();
    m.push_back(v);
    return rank(m) == r0;
}

QVec primitive(const QVec& v) {
    mpz_class lcm_den = 1;
    for (const Rat& x : v) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den().get_mpz_t());
    mpz_class gcd_num = 0;
    std::vector<mpz_class> ints(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        ints[i] = v[i].get_num() * (lcm_den / v[i].get_den());
        mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), ints[i].get_mpz_t());
    }
    QVec out(v.size(), Rat(0));
    if (gcd_num == 0) return out;
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(ints[i] / gcd_num);
    return out;
}

bool is_positive_definite(const QMat& m) {
    std::size_t n = m.size();
    for (std::size_t k = 1; k <= n; ++k) {
        QMat minor(k, QVec(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) minor[i][j] = m[i][j];
        if (det(minor) <= 0) return false;
    }
    return true;
}

QVec char_poly_minor_sums(const QMat& m) {
    // Faddeev-LeVerrier: M_1 = M, c_k = tr(M_k)/k, M_{k+1} = M (M_k - c_k I);
    // the principal-minor sums are e_k = (-1)^{k+1} c_k.
    std::size_t n = m.size();
    QVec e(n);
    QMat mk = m;
    for (std::size_t k = 1; k <= n; ++k) {
        Rat tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += mk[i][i];
        Rat ck = tr / Rat(static_cast<long>(k));
        e[k - 1] = (k % 2 == 1) ? ck : -ck;
        if (k == n) break;
        QMat shifted = mk;
        for (std::size_t i = 0; i < n; ++i) shifted[i][i] -= ck;
        mk = mat_mul(m, shifted);
    }
    return e;
}

bool dsolve(DMat a, DVec b, DVec& x) {
    std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (std::fabs(a[i][c]) > std::fabs(a[p][c])) p = i;
        if (std::fabs(a[p][c]) < 1e-300) return false;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t i = c + 1; i < n; ++i) {
            double f = a[i][c] / a[c][c];
            if (f == 0) continue;
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
            b[i] -= f * b[c];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return true;
}

DVec symmetric_eigenvalues(DMat a) {
    std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    DVec ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace linalg
} // namespace ksph
