#pragma once

/* Lattice reductions: pushing an equation forward along a surjective linear
 * map M : Z^r -> Z^r' (r' < r, uneven reductions of the lattice onto a
 * lower-dimensional one, e.g. plane waves m = <phi, h>).
 *
 * A reduction is valid for an equation when
 *   1. the coefficients are invariant along the kernel of M (so pushed
 *      values are well defined),
 *   2. the images of the shifts are still jointly one-sided: some covector y
 *      has <y, M s> <= -1 for every shift s (this is the integer analogue of
 *      "no nonnegative combination of the images vanishes"), and
 *   3. images of distinct shift directions stay distinct (v'_i != v'_j,
 *      u'_i != u'_j, v'_i != u'_j for i != j).
 * Violations throw InvalidReduction with the failed requirement.
 *
 * Surjectivity and kernel/preimage computations run through the Smith normal
 * form. Domains are pulled back (halfspace normals and grading compose with
 * M), with all certificates re-validated; a pullback whose certificates
 * break throws CertificateError. compare_reduction checks the substance:
 * solutions of the reduced system, with initial data identified along M,
 * match the pushed-forward solutions of the source system.
 */

#include <optional>
#include <vector>

#include "laurel/coeffs.hpp"
#include "laurel/errors.hpp"
#include "laurel/ivp.hpp"
#include "laurel/lattice.hpp"

namespace laurel {

struct ReductionMap {
    // rows() x cols() integer matrix, acting on column points: h -> M h.
    std::vector<std::vector<std::int64_t>> m;

    std::size_t rows() const { return m.size(); }
    std::size_t cols() const { return m.empty() ? 0 : m.front().size(); }
    Point apply(const Point& h) const;
};

// Z-module structure of the map: throws InvalidReduction unless M is
// surjective onto Z^(r'). kernel_basis spans ker M; preimage(y) is one x
// with M x = y.
struct ReductionStructure {
    std::vector<Point> kernel_basis;  // cols - rows vectors of length cols
    Point preimage(const Point& y) const;

    // Internals of the factorization, retained for preimage computation.
    SmithForm snf;
    std::size_t rows = 0, cols = 0;
};
ReductionStructure analyze_reduction(const ReductionMap& m);

// The three validity requirements above; throws InvalidReduction naming the
// first broken one. Table coefficients are checked for kernel invariance on
// their windows; Constant and Geometric fields are checked structurally.
// Returns the certifying covector of requirement 2.
Point validate_reduction(const Equation& eq, const ReductionMap& m);

// Pushes the equation forward: shifts map through M, coefficients transform
// (Constant unchanged, Geometric bases fold as ratio'_i = prod_j ratio_j ^
// M_ji, Table coefficients are rejected with std::invalid_argument since a
// table on the target cannot be reconstructed from a window alone), and the
// domain is replaced by `target_domain` (validated).
Equation reduce_equation(const Equation& eq, const ReductionMap& m,
                         const GoodDomain& target_domain);

// Pulls a target-side domain back along M: halfspaces <c, y> >= b become
// <c M, x> >= b, the grading pulls back to grading * M. Certificates are
// re-validated against the source shifts; failure throws CertificateError.
GoodDomain pullback_domain(const GoodDomain& target, const ReductionMap& m,
                           const ShiftSystem& source_shifts);

struct ReductionComparison {
    std::size_t sites_compared = 0;
    bool equal = true;
    std::optional<Point> first_mismatch;  // target-side site
};

// Evaluates the reduced equation at every target site of `target_window` (in
// its own domain) and the source equation at a preimage site, identifies
// source initials X_h with target initials X_{Mh}, and compares exactly.
// The source runs on pullback_domain(target_domain, m).
ReductionComparison compare_reduction(const Equation& source, const ReductionMap& m,
                                      const GoodDomain& target_domain,
                                      const Box& target_window);

}  // namespace laurel
