#ifndef KSPH_LINALG_HPP
#define KSPH_LINALG_HPP

#include "ksph/rational.hpp"

#include <cstddef>
#include <optional>

namespace ksph {
namespace linalg {

// ----- exact rational linear algebra (dense, small dimensions) -----

QVec zeros(std::size_t n);
QMat identity(std::size_t n);

QVec add(const QVec& a, const QVec& b);
QVec sub(const QVec& a, const QVec& b);
QVec scale(const Rat& c, const QVec& a);
Rat dot(const QVec& a, const QVec& b);
bool is_zero(const QVec& a);

QVec mat_vec(const QMat& m, const QVec& x);
QMat mat_mul(const QMat& a, const QMat& b);
QMat transpose(const QMat& m);

/// Reduced row echelon form in place; returns pivot column indices.
std::vector<std::size_t> rref(QMat& m);

std::size_t rank(QMat m);

/// Basis of { x : m x = 0 }, canonical (from RREF free columns).
QMat nullspace(const QMat& m);

/// One exact solution of m x = b (free variables set to 0), or nullopt if
/// the system is inconsistent.
std::optional<QVec> solve(const QMat& m, const QVec& b);

std::optional<QMat> inverse(const QMat& m);
Rat det(QMat m);

/// True if v lies in the row span of `basis`.
bool in_span(const QMat& basis, const QVec& v);

/// Scales to integer entries with content 1; orientation preserved.
QVec primitive(const QVec& v);

/// True if the symmetric matrix is positive definite (leading minors > 0).
bool is_positive_definite(const QMat& m);

/// Coefficients e_1..e_n with det(tI - M) = t^n - e1 t^{n-1} + e2 t^{n-2} - ...
/// (sums of principal minors, Faddeev-LeVerrier). For symmetric M, PSD is
/// equivalent to all e_k >= 0.
QVec char_poly_minor_sums(const QMat& m);

// ----- small double helpers for the numeric path -----

/// Solves a dense square system by partial-pivot LU; returns false if
/// numerically singular.
bool dsolve(DMat a, DVec b, DVec& x);

/// Eigenvalues of a small symmetric matrix (cyclic Jacobi).
DVec symmetric_eigenvalues(DMat a);

} // namespace linalg
} // namespace ksph

#endif
