#pragma once

/* Coefficient fields: exact rational-valued functions on lattice sites.
 * Three forms — a constant, a geometric family c * prod_k base_k^{h_k}, and a
 * finite table on a box window. Values are nonzero by construction (a zero
 * coefficient would change the equation's term count, so it is rejected as
 * ZeroCoefficient up front).
 */

#include <map>
#include <vector>

#include "laurel/errors.hpp"
#include "laurel/lattice.hpp"
#include "laurel/rational.hpp"

namespace laurel {

class CoefficientField {
public:
    enum class Kind { Constant, Geometric, Table };

    static CoefficientField constant(const Rational& c);
    static CoefficientField geometric(const Rational& c, std::vector<Rational> base);
    static CoefficientField table(const Box& window, std::vector<Rational> values);
    static CoefficientField table_from_map(const Box& window,
                                           const std::map<Point, Rational>& values);

    Kind kind() const { return kind_; }
    Rational eval(const Point& h) const;

    // True when every value this field can produce is > 0 (constant/geometric:
    // structurally; table: all entries checked). Gates the tropical fast path.
    bool certainly_positive() const;

    const Box& window() const;             // Table only
    bool covers(const Box& needed) const;  // non-Table fields cover everything

    // Structural read access (serialization): the scale is the constant value
    // or the geometric prefactor; base/values are kind-specific.
    const Rational& scale() const { return c_; }
    const std::vector<Rational>& base() const { return base_; }
    const std::vector<Rational>& values() const { return values_; }

    // A copy with the entry at h multiplied by f (Table only); the fixture
    // hook for condition-violation experiments.
    CoefficientField with_scaled_entry(const Point& h, const Rational& f) const;

private:
    CoefficientField() = default;
    std::size_t table_index(const Point& h) const;

    Kind kind_ = Kind::Constant;
    Rational c_;
    std::vector<Rational> base_;    // Geometric
    Box window_{{}, {}};            // Table
    std::vector<Rational> values_;  // Table, box_points order
};

// A bilinear lattice equation: shifts + one coefficient field per term + the
// initial-value domain.
struct Equation {
    ShiftSystem shifts;
    std::vector<CoefficientField> coeffs;
    GoodDomain domain;
};

// Validates shifts, domain certificates, and coefficient arity; returns the
// domain certificate for reuse.
DomainCertificate validate_equation(const Equation& eq);

}  // namespace laurel
