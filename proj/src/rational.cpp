#include "ksph/rational.hpp"

#include <cctype>

namespace ksph {

Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw input_error("empty rational literal");
    std::size_t slash = s.find('/');
    auto check_int = [&](const std::string& part, bool sign_ok) {
        if (part.empty()) return false;
        std::size_t i = 0;
        if (sign_ok && (part[0] == '-' || part[0] == '+')) i = 1;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
        return true;
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!check_int(num, true) || !check_int(den, false))
        throw input_error("malformed rational literal '" + s + "'");
    mpz_class n(num), d(den);
    if (d == 0) throw input_error("zero denominator in rational literal '" + s + "'");
    Rat q(n, d);
    q.canonicalize();
    return q;
}

std::string rat_to_string(const Rat& q) {
    Rat c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

DVec to_double(const QVec& v) {
    DVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
    return out;
}

DMat to_double(const QMat& m) {
    DMat out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = to_double(m[i]);
    return out;
}

} // namespace ksph
