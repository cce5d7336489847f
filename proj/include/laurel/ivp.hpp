#pragma once

/* Memoized exact evaluation of lattice initial-value problems and the
 * Laurent-property verifier.
 *
 * Values are kept in the normal form of poly.hpp: content-free numerator over
 * a coefficient-1 Laurent monomial denominator in the initial variables. One
 * evaluation step at an interior site h forms
 *   F = sum_j alpha_j(h) * p_{h+v_j} p_{h+u_j} * (LCM / q-parts)
 * over a common monomial denominator, then divides by f_{h+w}: a monomial
 * numerator folds into the denominator outright, anything else must divide F
 * exactly or the site is not Laurent.
 *
 * Recursion is organized as an explicit worklist in ascending grading order;
 * the domain certificate bounds every chain, so termination is structural.
 */

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "laurel/coeffs.hpp"
#include "laurel/errors.hpp"
#include "laurel/lattice.hpp"
#include "laurel/poly.hpp"
#include "laurel/rng.hpp"

namespace laurel {

// Division by f_{h+w} failed: the value at `site` is not a Laurent
// polynomial of the initial values.
struct NonLaurentError : std::runtime_error {
    Point site;
    explicit NonLaurentError(Point h)
        : std::runtime_error("no Laurent form at " + point_to_string(h)),
          site(std::move(h)) {}
};

// An iterate needed as a divisor evaluated to zero (possible only with
// mixed-sign coefficients).
struct ZeroIterate : std::runtime_error {
    Point site;
    explicit ZeroIterate(Point h)
        : std::runtime_error("iterate vanishes identically at " + point_to_string(h)),
          site(std::move(h)) {}
};

class Ivp {
public:
    explicit Ivp(Equation eq);

    const Equation& equation() const { return eq_; }
    const DomainCertificate& certificate() const { return cert_; }

    // Exact value at h; initial sites yield their own variable. Throws
    // DomainError (h outside the domain), NonLaurentError, ZeroIterate.
    const Fraction& evaluate(const Point& h);

    // Stable id for the initial variable at h0; registers it on first use.
    VarId variable_for_initial(const Point& h0);
    const Point& initial_of(VarId v) const;
    std::optional<VarId> lookup_variable(const Point& h0) const;

    // Pretty-printer for variables: X(1,0,2).
    std::function<std::string(VarId)> namer() const;

private:
    Fraction step(const Point& h);

    Equation eq_;
    DomainCertificate cert_;
    std::map<Point, Fraction> cache_;
    std::map<Point, VarId> var_ids_;
    std::vector<Point> var_points_;
};

struct LaurentSite {
    Point h;
    bool laurent = true;
    // The denominator monomial of the normalized value (exponents over
    // initial variables; empty for initial sites). Meaningful when laurent.
    ExponentVec denominator;
};

struct LaurentReport {
    std::vector<LaurentSite> sites;  // window ∩ domain, ascending grading order
    bool all_laurent = true;
    std::optional<Point> first_failure;
    std::size_t spot_checks = 0;          // optional coprimality probes run
    std::size_t spot_check_failures = 0;  // probes that saw a common factor
};

// Checks every window point inside the domain, in ascending grading order,
// stopping at the first non-Laurent site. With spot_check_rng set, runs
// numerator-coprimality probes between each interior site and its divisor
// site (successive numerators of a Laurent system share no factor). A
// grading_bound restricts the sweep to the simplex <grading, h> <= bound,
// the shape exhaustive sweeps are usually phrased in.
LaurentReport verify_laurent(Ivp& ivp, const Box& window, Rng* spot_check_rng = nullptr,
                             std::optional<std::int64_t> grading_bound = {});

}  // namespace laurel
