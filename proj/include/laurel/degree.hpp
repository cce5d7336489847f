#pragma once

/* Denominator structure and degree growth.
 *
 * For an equation with positive coefficients and the Laurent property, the
 * reduced denominator of every iterate is a monomial in the initial
 * variables, and it obeys a recurrence of its own: a three-case LCM formula
 * that never touches numerators, together with its per-variable (max,+)
 * shadow.  For the two classical rank-3 systems the recurrence collapses
 * further, to an explicit product over the initial sites weakly below h + w.
 *
 * One-dimensional recurrences get a symbolic iterator (exact Fractions), a
 * tropical iterator that pushes the same (max,+) data to large ranges
 * cheaply, and an exact count of the initial sites a rank-3 parent
 * contributes to each reduced denominator.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "laurel/coeffs.hpp"
#include "laurel/errors.hpp"
#include "laurel/lattice.hpp"
#include "laurel/poly.hpp"
#include "laurel/reduction.hpp"

namespace laurel {

// A monomial in the initial variables, keyed by initial site. Exponents are
// kept nonzero; the empty map is the monomial 1.
using SiteMonomial = std::map<Point, std::int64_t>;

std::int64_t site_monomial_degree(const SiteMonomial& q);
// Divisibility as monomials: every exponent of a is <= the one in b.
bool site_monomial_divides(const SiteMonomial& a, const SiteMonomial& b);

// --------------------------------------------------------------------------
// The LCM recurrence.
//
// q_h = 1 on the initial set; q_h = X_{h+w} * LCM_j(q_{h+v_j} q_{h+u_j})
// when h + w is initial; otherwise the same LCM divided exactly by q_{h+w}.
// `prior` must contain every stencil predecessor of h (initial sites may be
// omitted: they count as 1). A failed exact division means the input was
// not a positive-coefficient Laurent system and raises InvariantViolation.
SiteMonomial denominator_recurrence(const ShiftSystem& s, const GoodDomain& d,
                                    const Point& h,
                                    const std::map<Point, SiteMonomial>& prior);

// Runs the recurrence bottom-up in grading order; the result holds every
// site in the dependency closure of window ∩ domain.
std::map<Point, SiteMonomial> denominator_table(const ShiftSystem& s,
                                                const GoodDomain& d,
                                                const Box& window);

// --------------------------------------------------------------------------
// Per-variable (max,+) field: d^{(h0)}_h = deg_{X_{h0}} q_h.
//
// Four cases, first match wins: 0 on the initial set; 1 when h + w = h0;
// max_j(d_{h+v_j} + d_{h+u_j}) when h + w is initial; the same max minus
// d_{h+w} otherwise.

struct DegreeField {
    Point h0;
    std::map<Point, std::int64_t> values;
};

DegreeField maxplus_field(const ShiftSystem& s, const GoodDomain& d,
                          const Point& h0, const Box& window);

// --------------------------------------------------------------------------
// Classical rank-3 shapes and their closed-form denominators.

enum class ClassicalShape { Hirota, Bkp };

// Recognizes the canonical three-dimensional shift systems (term order and
// the order within a pair do not matter).
std::optional<ClassicalShape> classify_shape(const ShiftSystem& s);

// q_h = prod of X_{h0} over initial h0 weakly below h + w in the semi-order.
// Valid for the classical shapes on any good domain; ShapeMismatch otherwise.
SiteMonomial closed_form_denominator(const ShiftSystem& s, const GoodDomain& d,
                                     const Point& h);

// --------------------------------------------------------------------------
// One-dimensional recurrences
//
//   f_m = ( sum_j  c_j(m) * prod_k f_{m-s_jk}^{e_jk} ) / f_{m-l},
//
// with initial values f_0 .. f_{L-1} = X_0 .. X_{L-1}, L the largest
// back-reference. Terms may be constants (empty factor list); coefficients
// are evaluated at the rank-1 point (m).

struct Term1D {
    CoefficientField coeff;
    // (offset, exponent) pairs, offsets and exponents >= 1.
    std::vector<std::pair<std::int64_t, std::int64_t>> factors;
};

struct Recurrence1D {
    std::vector<Term1D> terms;
    std::int64_t denom_offset = 1;  // the l in f_{m-l}
};

// The number of initial symbols: the largest offset anywhere in the shape.
std::int64_t recurrence_order(const Recurrence1D& rec);
void validate_recurrence(const Recurrence1D& rec);

// f_m = (alpha(m) f_{m-a} f_{m-l+a} + beta(m) f_{m-b} f_{m-l+b}) / f_{m-l},
// the shape every rank-1 bilinear reduction takes. Requires 0 < a < b < l.
Recurrence1D reduced_bilinear(const CoefficientField& alpha,
                              const CoefficientField& beta, std::int64_t a,
                              std::int64_t b, std::int64_t l);

// View a rank-1 bilinear equation as a Recurrence1D (coefficients carried
// over; the domain is re-read as m >= 0 with initial segment 0 .. L-1).
Recurrence1D recurrence_from_equation(const Equation& eq);

struct Sequence1D {
    std::vector<Fraction> iterates;     // f_0 .. f_last
    std::vector<std::int64_t> degrees;  // total degree of each iterate
    // First m whose division left a non-monomial denominator; iteration
    // stops there (the sequence holds the iterates before it).
    std::optional<std::int64_t> failure_index;
};

Sequence1D iterate_1d(const Recurrence1D& rec, std::int64_t m_max);

// Tropical counterpart: runs the per-variable denominator recurrence and the
// numerator degree recurrence on integers only. `exact` reports whether the
// degrees are guaranteed equal to the symbolic ones: coefficients certainly
// positive, every offset absent from at least one term (the no-common-factor
// argument needs a second term to play against), and a symbolic prefix of
// 2L iterates that is Laurent and agrees with the tropical values. Without
// the guarantee the values are upper bounds.
struct TropicalSequence1D {
    std::vector<mpz_class> denom_degrees;
    std::vector<mpz_class> numer_degrees;
    std::vector<mpz_class> total_degrees;
    // Per-variable denominator exponent vectors (length L), kept on request.
    std::vector<std::vector<mpz_class>> per_variable;
    bool exact = false;
    std::int64_t prefix_checked = 0;
};

TropicalSequence1D tropical_iterate_1d(const Recurrence1D& rec,
                                       bool per_variable, std::int64_t m_max);

// --------------------------------------------------------------------------
// e^{(m0)}_m: how many initial sites of a rank-3 parent, in the residue
// class m0 of a separating covector phi, lie weakly below h + w for a site
// with phi(h) = m. Summed over m0 this is the total denominator degree of
// the lifted iterate on the pulled-back half-line domain. Computed by
// enumerating the shape's monoid through its inequality description, so it
// shares no code with the semi-order walk.
std::int64_t lattice_point_count(const ReductionMap& phi,
                                 const ShiftSystem& shape, std::int64_t m0,
                                 std::int64_t m);

}  // namespace laurel
