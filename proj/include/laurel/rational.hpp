#pragma once

/* Exact rational scalars. GMP's mpq_class keeps values canonical
 * (reduced, denominator > 0) after every operation, which the whole
 * engine relies on: equality of values is equality of representations.
 */

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace laurel {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p", "-p", "p/q" with arbitrary-precision p, q. Rejects q = 0 and
// anything mpq_set_str does not accept (whitespace, floats, empty string).
inline std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    mpq_class value;
    if (mpq_set_str(value.get_mpq_t(), text.c_str(), 10) != 0) return std::nullopt;
    if (value.get_den() == 0) return std::nullopt;
    value.canonicalize();
    return value;
}

inline std::string rational_to_string(const Rational& value) {
    return value.get_str();
}

// a^e for integer e of either sign; a must be nonzero when e < 0.
inline Rational rational_pow(const Rational& base, long exp) {
    if (exp == 0) return Rational(1);
    if (base == 0 && exp < 0) throw std::domain_error("rational_pow: zero base with negative exponent");
    Rational num, den;
    unsigned long mag = static_cast<unsigned long>(exp < 0 ? -exp : exp);
    mpz_pow_ui(num.get_num_mpz_t(), base.get_num_mpz_t(), mag);
    mpz_pow_ui(num.get_den_mpz_t(), base.get_den_mpz_t(), mag);
    num.canonicalize();
    if (exp < 0) {
        den = 1 / num;
        return den;
    }
    return num;
}

}  // namespace laurel
