#pragma once

/* Lattice-side machinery: points of Z^r, backward shift systems for bilinear
 * equations, good initial-value domains cut out by halfspaces, and the
 * semi-order generated by the shifts.
 *
 * A shift system lists k terms (v_i, u_i) and the divisor shift w with
 * v_i + u_i = w for every term; the equation at site h reads
 *   f_h * f_{h+w} relates to products f_{h+v_i} f_{h+u_i}.
 * Validation requires the shifts to generate Z^r as a group (checked via the
 * Smith normal form) so the evolution reaches the whole lattice.
 *
 * A good domain is an intersection of integer halfspaces <c_j, h> >= b_j such
 * that every shift has <c_j, shift> <= 0 (stepping backwards never re-enters),
 * together with an integer grading l with <l, v_i> <= -1 and <l, u_i> <= -1
 * that is a nonnegative rational combination of the c_j. The combination
 * certifies that grading levels are bounded below on the domain, which makes
 * every recursion well-founded.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "laurel/rational.hpp"

namespace laurel {

using Point = std::vector<std::int64_t>;
using IntMat = std::vector<std::vector<Integer>>;

Point point_add(const Point& a, const Point& b);
Point point_sub(const Point& a, const Point& b);
Point point_neg(const Point& a);
std::int64_t dot(const Point& c, const Point& h);
std::string point_to_string(const Point& p);

struct ShiftSystem {
    int rank = 0;
    std::vector<std::pair<Point, Point>> terms;  // (v_i, u_i) per term
    Point w;

    // All backward shifts in order v_1, u_1, v_2, u_2, ..., w.
    std::vector<Point> all_shifts() const;
};

// Throws std::invalid_argument when the system is malformed: dimension
// mismatches, a zero shift, v_i + u_i != w, shifts repeated across distinct
// terms (repetition inside one term is legal), or shifts that fail to
// generate Z^r.
void validate_shift_system(const ShiftSystem& s);

struct Halfspace {
    Point c;
    std::int64_t b = 0;  // constraint <c, h> >= b
};

struct GoodDomain {
    std::vector<Halfspace> halfspaces;
    Point grading;
};

struct DomainCertificate {
    std::vector<Rational> cone_coeffs;  // grading = sum coeff_j * c_j
    Rational grading_bound;             // <grading, h> >= this on the domain
};

// Checks the closure and grading certificates described above; throws
// std::invalid_argument with the violated condition otherwise.
DomainCertificate validate_domain(const GoodDomain& d, const ShiftSystem& s);

bool domain_contains(const GoodDomain& d, const Point& h);

// h lies in the domain but h + w does not: the equation cannot step down
// from h, so f_h is initial data.
bool in_initial_set(const GoodDomain& d, const ShiftSystem& s, const Point& h);

// Exact membership of target in the rational cone spanned by gens. On
// success returns nonnegative coefficients (length = gens.size()). Uses the
// Caratheodory bound: it suffices to scan linearly independent subsets of
// size at most the dimension.
std::optional<std::vector<Rational>> in_rational_cone(const std::vector<Point>& gens,
                                                      const Point& target);

// Solves A x = b exactly over the rationals (any shape); free variables are
// set to zero. Returns nullopt when inconsistent.
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a,
                                                 std::vector<Rational> b);

// lo <= hi in the semi-order: hi reaches lo by repeatedly adding shifts
// v_i, u_i. The grading certificate bounds the search depth.
bool semiorder_leq(const ShiftSystem& s, const Point& grading, const Point& lo,
                   const Point& hi);

// All points h0 of the initial set weakly below `top` in the semi-order;
// this is exactly the variable support of the closed-form denominator at
// top = h + w.
std::vector<Point> initial_points_below(const GoodDomain& d, const ShiftSystem& s,
                                        const Point& top);

struct Box {
    Point lo, hi;  // inclusive corners
};

bool box_contains(const Box& b, const Point& p);
std::vector<Point> box_points(const Box& b);  // lexicographic order
// Bounding box of the Minkowski sum b + offsets.
Box box_expand(const Box& b, const std::vector<Point>& offsets);

/* Smith normal form: U * A * V = diag(d_1..d_k) with U, V unimodular and
 * d_1 | d_2 | ... Exact over arbitrary-precision integers. */
struct SmithForm {
    IntMat u, v;                // square, unimodular
    std::vector<Integer> diag;  // length min(rows, cols)
};
SmithForm smith_normal_form(IntMat a);

IntMat int_identity(std::size_t n);
IntMat int_mat_mul(const IntMat& a, const IntMat& b);
std::vector<Integer> int_mat_vec(const IntMat& a, const std::vector<Integer>& x);

}  // namespace laurel
