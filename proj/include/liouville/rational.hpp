#pragma once

#include <gmpxx.h>

#include <cmath>

#include <string>
#include <string_view>

namespace liouville {

/// Exact rational with arbitrary-precision numerator and denominator.
using Rational = mpq_class;

/// Canonical `num/den` text, always with an explicit denominator.
inline std::string to_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Short form: `num` when the denominator is 1.
inline std::string to_short_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return to_string(r);
}

/// Parses `a`, `-a`, `a/b`. Throws std::invalid_argument on failure.
Rational parse_rational(std::string_view text);

inline long double to_long_double(const Rational& r) {
    // mpq_get_d loses nothing relevant for the magnitudes used by the flow lab,
    // but going through num/den keeps extra precision for long double.
    mpf_class num(r.get_num(), 128), den(r.get_den(), 128);
    mpf_class q(num / den, 128);
    long exp = 0;
    double mant = mpf_get_d_2exp(&exp, q.get_mpf_t());
    mpf_class rest(q, 128);
    rest -= mpf_class(std::ldexp(mant, static_cast<int>(exp)), 128);
    return static_cast<long double>(std::ldexp(mant, static_cast<int>(exp))) +
           static_cast<long double>(rest.get_d());
}

} // namespace liouville
