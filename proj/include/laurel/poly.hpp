#pragma once

/* Sparse multivariate Laurent polynomials over exact rationals.
 *
 * A term maps an exponent vector (sorted sparse list of variable/exponent
 * pairs, exponents possibly negative) to a nonzero rational coefficient.
 * Terms live in a map ordered by graded lexicographic comparison, so the
 * leading term is the map's last element. Exact division is iterated
 * leading-term elimination under that order, with both operands shifted to
 * nonnegative exponents first and an early exit as soon as a leading term
 * fails to divide.
 */

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "laurel/rational.hpp"
#include "laurel/rng.hpp"

namespace laurel {

using VarId = std::uint32_t;

class ExponentVec {
public:
    using Entry = std::pair<VarId, std::int64_t>;

    ExponentVec() = default;
    static ExponentVec variable(VarId v, std::int64_t e = 1);
    // Sorts by variable and drops zero exponents; rejects duplicate variables.
    static ExponentVec from_entries(std::vector<Entry> entries);

    std::int64_t exponent_of(VarId v) const;
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    std::int64_t total_degree() const;
    bool nonnegative() const;
    const std::vector<Entry>& entries() const { return entries_; }

    ExponentVec operator+(const ExponentVec& rhs) const;  // monomial product
    ExponentVec operator-(const ExponentVec& rhs) const;  // monomial quotient
    ExponentVec negated() const;

    // Per-variable max / min, variables absent from one side counting as 0.
    // max is the monomial lcm; min over all terms of a polynomial is its
    // monomial content.
    static ExponentVec max(const ExponentVec& a, const ExponentVec& b);
    static ExponentVec min(const ExponentVec& a, const ExponentVec& b);

    bool operator==(const ExponentVec& rhs) const { return entries_ == rhs.entries_; }
    bool operator!=(const ExponentVec& rhs) const { return !(*this == rhs); }

private:
    std::vector<Entry> entries_;
};

// Graded lexicographic: larger total degree wins; on ties the first variable
// (ascending VarId) whose exponents differ decides, larger exponent first.
struct GrlexLess {
    bool operator()(const ExponentVec& a, const ExponentVec& b) const;
};

class LaurentPoly {
public:
    using TermMap = std::map<ExponentVec, Rational, GrlexLess>;

    LaurentPoly() = default;
    static LaurentPoly zero() { return LaurentPoly(); }
    static LaurentPoly constant(const Rational& c);
    static LaurentPoly variable(VarId v, std::int64_t e = 1);
    static LaurentPoly monomial(const Rational& c, const ExponentVec& e);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    // Leading term under grlex. Polynomial must be nonzero.
    const std::pair<const ExponentVec, Rational>& leading() const;

    // Max over terms of the exponent sum (0 for the zero polynomial).
    std::int64_t total_degree() const;

    // Per-variable minimum exponent across all terms (absent = 0); dividing
    // by it leaves a polynomial with a zero-exponent witness per variable.
    ExponentVec monomial_content() const;

    std::optional<Rational> coefficient(const ExponentVec& e) const;

    LaurentPoly operator+(const LaurentPoly& rhs) const;
    LaurentPoly operator-(const LaurentPoly& rhs) const;
    LaurentPoly operator-() const;
    LaurentPoly operator*(const LaurentPoly& rhs) const;
    LaurentPoly& operator+=(const LaurentPoly& rhs);
    LaurentPoly& operator-=(const LaurentPoly& rhs);

    LaurentPoly scaled(const Rational& c) const;          // c * this
    LaurentPoly shifted(const ExponentVec& m) const;      // X^m * this

    bool operator==(const LaurentPoly& rhs) const { return terms_ == rhs.terms_; }
    bool operator!=(const LaurentPoly& rhs) const { return !(*this == rhs); }

    // Full evaluation; every variable of the polynomial must be assigned.
    // Zero values under negative exponents raise std::domain_error.
    Rational evaluate(const std::map<VarId, Rational>& assignment) const;

    // Renames variables (identifying several is allowed; terms merge and may
    // cancel). Variables absent from the map are kept.
    LaurentPoly rename_variables(const std::map<VarId, VarId>& images) const;

    // Specializes every variable except `keep` using `assignment`; returns
    // dense coefficients of the resulting univariate polynomial in `keep`,
    // index = exponent - min exponent (the offset is irrelevant to gcd use).
    std::vector<Rational> specialize_to_univariate(
        VarId keep, const std::map<VarId, Rational>& assignment) const;

    std::vector<VarId> variables() const;

    std::string to_string(const std::function<std::string(VarId)>& namer = {}) const;

private:
    void insert_term(const ExponentVec& e, const Rational& c);  // merges, drops zeros
    TermMap terms_;
};

// Exact division: returns a/b when b divides a in the Laurent ring, nullopt
// otherwise. b must be nonzero.
std::optional<LaurentPoly> try_exact_div(const LaurentPoly& a, const LaurentPoly& b);

/* A Laurent fraction in normal form: numerator with trivial monomial content,
 * denominator a coefficient-1 monomial. The representation of a given value
 * is unique, so == on the parts is == on values. */
struct Fraction {
    LaurentPoly num;
    ExponentVec den;

    bool operator==(const Fraction& rhs) const { return num == rhs.num && den == rhs.den; }
    bool operator!=(const Fraction& rhs) const { return !(*this == rhs); }

    bool has_trivial_denominator() const { return den.empty(); }
    // Degree as a rational function: max of numerator and denominator total
    // degrees (numerator and denominator are coprime by construction).
    std::int64_t degree() const;
    LaurentPoly as_poly() const { return num.shifted(den.negated()); }
};

// Thrown when a fraction's denominator is not a single term.
struct NotMonomialDenominator : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Builds the normal form of numer/denom. denom must be one nonzero term.
Fraction make_fraction(const LaurentPoly& numer, const LaurentPoly& denom);
Fraction fraction_from_poly(const LaurentPoly& p);

Fraction fraction_mul(const Fraction& a, const Fraction& b);
Fraction fraction_scaled(const Fraction& a, const Rational& c);

/// Probabilistic coprimality of two content-free nonzero polynomials: all but
// one variable are specialized at uniform integers in [2, 10^6] and the
// univariate gcd is taken, `trials` times. A nontrivial gcd yields a witness;
// mutual exact division is attempted to confirm it.
struct CoprimeResult {
    bool likely_coprime = true;
    bool confirmed_common_factor = false;
    std::map<VarId, Rational> witness_point;  // populated when a factor was seen
};
CoprimeResult coprime_probable(const LaurentPoly& a, const LaurentPoly& b,
                               int trials, Rng& rng);

}  // namespace laurel
