#ifndef KSPH_RATIONAL_HPP
#define KSPH_RATIONAL_HPP

#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <vector>

namespace ksph {

/// Exact rational scalar. All combinatorial and polytope data is kept in
/// this type; floating point only enters through the exponential density
/// and the soliton solver.
using Rat = mpq_class;

using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;   // row-major
using DVec = std::vector<double>;
using DMat = std::vector<DVec>;

/// Error categories, mapped to CLI exit codes (2/3/4).
enum class ErrorKind { input, numeric, internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    ErrorKind kind;
};

inline Error input_error(const std::string& msg) { return Error(ErrorKind::input, msg); }
inline Error numeric_error(const std::string& msg) { return Error(ErrorKind::numeric, msg); }
inline Error internal_error(const std::string& msg) { return Error(ErrorKind::internal, msg); }

/// Parses "3", "-3/2", "0". Rejects zero denominators and garbage.
Rat rat_from_string(const std::string& s);

/// Canonical "num/den" (or "num" when den == 1).
std::string rat_to_string(const Rat& q);

inline double to_double(const Rat& q) { return q.get_d(); }

DVec to_double(const QVec& v);
DMat to_double(const QMat& m);

} // namespace ksph

#endif
