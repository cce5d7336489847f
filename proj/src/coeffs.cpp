#include "laurel/coeffs.hpp"

#include <cassert>

namespace laurel {

namespace {

// mpq arithmetic and comparison assume canonical form; callers may hand us
// e.g. Rational(7, 7), so normalize everything at the boundary.
Rational canonical(Rational r) {
    r.canonicalize();
    return r;
}

}  // namespace

CoefficientField CoefficientField::constant(const Rational& c) {
    CoefficientField f;
    f.kind_ = Kind::Constant;
    f.c_ = canonical(c);
    if (f.c_ == 0) throw ZeroCoefficient("constant coefficient is zero");
    return f;
}

CoefficientField CoefficientField::geometric(const Rational& c, std::vector<Rational> base) {
    for (Rational& b : base) {
        b.canonicalize();
        if (b == 0) throw ZeroCoefficient("geometric coefficient has zero base");
    }
    CoefficientField f;
    f.kind_ = Kind::Geometric;
    f.c_ = canonical(c);
    if (f.c_ == 0) throw ZeroCoefficient("geometric coefficient has zero scale");
    f.base_ = std::move(base);
    return f;
}

CoefficientField CoefficientField::table(const Box& window, std::vector<Rational> values) {
    if (window.lo.size() != window.hi.size())
        throw std::invalid_argument("table window dimension mismatch");
    std::size_t expect = box_points(window).size();
    if (values.size() != expect)
        throw std::invalid_argument("table value count does not match its window");
    for (Rational& v : values) {
        v.canonicalize();
        if (v == 0) throw ZeroCoefficient("table coefficient contains a zero entry");
    }
    CoefficientField f;
    f.kind_ = Kind::Table;
    f.window_ = window;
    f.values_ = std::move(values);
    return f;
}

CoefficientField CoefficientField::table_from_map(const Box& window,
                                                  const std::map<Point, Rational>& values) {
    std::vector<Rational> dense;
    for (const Point& p : box_points(window)) {
        auto it = values.find(p);
        if (it == values.end())
            throw std::invalid_argument("table map missing entry at " + point_to_string(p));
        dense.push_back(it->second);
    }
    return table(window, std::move(dense));
}

std::size_t CoefficientField::table_index(const Point& h) const {
    // box_points is an odometer over [lo,hi]: last coordinate fastest.
    std::size_t idx = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        std::size_t extent = static_cast<std::size_t>(window_.hi[i] - window_.lo[i] + 1);
        idx = idx * extent + static_cast<std::size_t>(h[i] - window_.lo[i]);
    }
    return idx;
}

Rational CoefficientField::eval(const Point& h) const {
    switch (kind_) {
        case Kind::Constant:
            return c_;
        case Kind::Geometric: {
            if (h.size() != base_.size())
                throw std::invalid_argument("geometric coefficient: wrong point rank");
            Rational v = c_;
            for (std::size_t i = 0; i < base_.size(); ++i)
                v *= rational_pow(base_[i], h[i]);
            return v;
        }
        case Kind::Table:
            if (h.size() != window_.lo.size())
                throw std::invalid_argument("table coefficient: wrong point rank");
            if (!box_contains(window_, h))
                throw OutsideTableWindow("coefficient table has no value at " +
                                         point_to_string(h));
            return values_[table_index(h)];
    }
    assert(false);
    return Rational(0);
}

bool CoefficientField::certainly_positive() const {
    switch (kind_) {
        case Kind::Constant:
            return c_ > 0;
        case Kind::Geometric: {
            if (c_ <= 0) return false;
            for (const Rational& b : base_)
                if (b <= 0) return false;
            return true;
        }
        case Kind::Table:
            for (const Rational& v : values_)
                if (v <= 0) return false;
            return true;
    }
    return false;
}

const Box& CoefficientField::window() const {
    if (kind_ != Kind::Table)
        throw std::logic_error("window() is meaningful only for table coefficients");
    return window_;
}

bool CoefficientField::covers(const Box& needed) const {
    if (kind_ != Kind::Table) return true;
    for (std::size_t i = 0; i < needed.lo.size(); ++i)
        if (needed.lo[i] < window_.lo[i] || needed.hi[i] > window_.hi[i]) return false;
    return true;
}

CoefficientField CoefficientField::with_scaled_entry(const Point& h, const Rational& f) const {
    if (kind_ != Kind::Table)
        throw std::logic_error("entry scaling applies to table coefficients only");
    if (!box_contains(window_, h))
        throw OutsideTableWindow("no table entry at " + point_to_string(h));
    if (f == 0) throw ZeroCoefficient("scaling a table entry to zero");
    CoefficientField out(*this);
    out.values_[table_index(h)] *= f;
    return out;
}

DomainCertificate validate_equation(const Equation& eq) {
    validate_shift_system(eq.shifts);
    if (eq.coeffs.size() != eq.shifts.terms.size())
        throw std::invalid_argument("equation needs one coefficient field per term");
    return validate_domain(eq.domain, eq.shifts);
}

}  // namespace laurel
