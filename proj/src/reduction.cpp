#include "laurel/reduction.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace laurel {

namespace {

std::int64_t to_int64(const Integer& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("lattice coordinate overflow");
    return z.get_si();
}

// Feasible rational point of {<a_t, y> <= c_t, y in Q^dim} by
// Fourier-Motzkin elimination of the last coordinate; nullopt when empty.
using LinearConstraint = std::pair<std::vector<Rational>, Rational>;
std::optional<std::vector<Rational>> solve_inequalities(
    const std::vector<LinearConstraint>& cons, std::size_t dim) {
    if (dim == 0) {
        for (const auto& [a, c] : cons)
            if (c < 0) return std::nullopt;
        return std::vector<Rational>{};
    }
    std::vector<const LinearConstraint*> pos, neg;
    std::vector<LinearConstraint> reduced;
    for (const auto& con : cons) {
        const Rational& lead = con.first[dim - 1];
        if (lead > 0)
            pos.push_back(&con);
        else if (lead < 0)
            neg.push_back(&con);
        else
            reduced.emplace_back(
                std::vector<Rational>(con.first.begin(), con.first.end() - 1), con.second);
    }
    for (const auto* p : pos)
        for (const auto* n : neg) {
            const Rational ap = p->first[dim - 1], an = n->first[dim - 1];
            std::vector<Rational> row(dim - 1);
            for (std::size_t i = 0; i + 1 < dim; ++i)
                row[i] = ap * n->first[i] - an * p->first[i];
            reduced.emplace_back(std::move(row), Rational(ap * n->second - an * p->second));
        }
    auto inner = solve_inequalities(reduced, dim - 1);
    if (!inner) return std::nullopt;
    // Back-substitute a value between the surviving bounds.
    std::optional<Rational> lo, hi;
    auto partial = [&](const LinearConstraint* con) -> Rational {
        Rational acc = con->second;
        for (std::size_t i = 0; i + 1 < dim; ++i) acc -= con->first[i] * (*inner)[i];
        return acc / con->first[dim - 1];
    };
    for (const auto* n : neg) {
        Rational bound = partial(n);  // lead < 0 flips the inequality
        if (!lo || bound > *lo) lo = bound;
    }
    for (const auto* p : pos) {
        Rational bound = partial(p);
        if (!hi || bound < *hi) hi = bound;
    }
    Rational pick(0);
    if (lo && hi)
        pick = (*lo + *hi) / 2;
    else if (lo)
        pick = *lo;
    else if (hi)
        pick = *hi;
    inner->push_back(pick);
    return inner;
}

}  // namespace

Point ReductionMap::apply(const Point& h) const {
    if (h.size() != cols()) throw std::invalid_argument("reduction: point rank mismatch");
    Point out(rows(), 0);
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) out[i] += m[i][j] * h[j];
    return out;
}

Point ReductionStructure::preimage(const Point& y) const {
    if (y.size() != rows) throw std::invalid_argument("preimage: point rank mismatch");
    // x = V [U y; 0] solves M x = y when every invariant factor is 1.
    std::vector<Integer> z(cols, 0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < rows; ++j) z[i] += snf.u[i][j] * y[j];
    Point x(cols, 0);
    for (std::size_t i = 0; i < cols; ++i) {
        Integer acc = 0;
        for (std::size_t j = 0; j < cols; ++j) acc += snf.v[i][j] * z[j];
        x[i] = to_int64(acc);
    }
    return x;
}

ReductionStructure analyze_reduction(const ReductionMap& m) {
    if (m.rows() == 0 || m.cols() == 0 || m.rows() > m.cols())
        throw InvalidReduction("reduction matrix must be r' x r with 0 < r' <= r");
    for (const auto& row : m.m)
        if (row.size() != m.cols()) throw InvalidReduction("ragged reduction matrix");
    IntMat a(m.rows(), std::vector<Integer>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m.m[i][j];
    ReductionStructure out;
    out.snf = smith_normal_form(a);
    out.rows = m.rows();
    out.cols = m.cols();
    for (const Integer& d : out.snf.diag)
        if (d != 1)
            throw InvalidReduction("reduction matrix is not surjective onto the target lattice");
    for (std::size_t k = m.rows(); k < m.cols(); ++k) {
        Point basis(m.cols());
        for (std::size_t i = 0; i < m.cols(); ++i) basis[i] = to_int64(out.snf.v[i][k]);
        out.kernel_basis.push_back(std::move(basis));
    }
    return out;
}

Point validate_reduction(const Equation& eq, const ReductionMap& m) {
    if (m.cols() != static_cast<std::size_t>(eq.shifts.rank))
        throw InvalidReduction("reduction matrix width must match the equation rank");
    ReductionStructure structure = analyze_reduction(m);

    // 1. Coefficients must be invariant along the kernel.
    for (std::size_t j = 0; j < eq.coeffs.size(); ++j) {
        const CoefficientField& f = eq.coeffs[j];
        switch (f.kind()) {
            case CoefficientField::Kind::Constant:
                break;
            case CoefficientField::Kind::Geometric:
                for (const Point& k : structure.kernel_basis) {
                    const Point zero(eq.shifts.rank, 0);
                    if (f.eval(k) != f.eval(zero))
                        throw InvalidReduction(
                            "coefficient " + std::to_string(j) +
                            " is not invariant along the kernel direction " +
                            point_to_string(k));
                }
                break;
            case CoefficientField::Kind::Table: {
                std::map<Point, std::pair<Point, Rational>> by_image;
                for (const Point& p : box_points(f.window())) {
                    Rational val = f.eval(p);
                    auto [it, fresh] = by_image.emplace(m.apply(p), std::make_pair(p, val));
                    if (!fresh && it->second.second != val)
                        throw InvalidReduction("coefficient " + std::to_string(j) +
                                               " differs at " +
                                               point_to_string(it->second.first) + " and " +
                                               point_to_string(p) +
                                               ", which reduce to the same site");
                }
                break;
            }
        }
    }

    // 2. The images of the shifts must admit a strictly separating covector.
    std::vector<Point> images;
    for (const auto& [v, u] : eq.shifts.terms) {
        images.push_back(m.apply(v));
        images.push_back(m.apply(u));
    }
    std::vector<LinearConstraint> cons;
    for (const Point& img : images) {
        std::vector<Rational> row(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) row[i] = img[i];
        cons.emplace_back(std::move(row), Rational(-1));
    }
    auto y = solve_inequalities(cons, m.rows());
    if (!y)
        throw InvalidReduction(
            "shift images admit a vanishing nonnegative combination (no separating "
            "covector exists)");
    Integer scale = 1;
    for (const Rational& c : *y) scale = lcm(scale, Integer(c.get_den()));
    Point covector(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Rational scaled = (*y)[i] * scale;
        covector[i] = to_int64(scaled.get_num());
    }
    for (const Point& img : images)
        if (dot(covector, img) > -1)
            throw InvalidReduction("separating covector certificate failed");

    // 3. Images of distinct directions must stay distinct.
    const std::size_t k = eq.shifts.terms.size();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const Point &vi = images[2 * i], &ui = images[2 * i + 1];
            const Point &vj = images[2 * j], &uj = images[2 * j + 1];
            if (vi == vj || ui == uj || vi == uj || ui == vj)
                throw InvalidReduction("terms " + std::to_string(i) + " and " +
                                       std::to_string(j) +
                                       " collide after reduction");
        }
    return covector;
}

Equation reduce_equation(const Equation& eq, const ReductionMap& m,
                         const GoodDomain& target_domain) {
    ReductionStructure structure = analyze_reduction(m);
    Equation out;
    out.shifts.rank = static_cast<int>(m.rows());
    for (const auto& [v, u] : eq.shifts.terms)
        out.shifts.terms.emplace_back(m.apply(v), m.apply(u));
    out.shifts.w = m.apply(eq.shifts.w);
    out.domain = target_domain;
    for (const CoefficientField& f : eq.coeffs) {
        switch (f.kind()) {
            case CoefficientField::Kind::Constant:
                out.coeffs.push_back(f);
                break;
            case CoefficientField::Kind::Geometric: {
                const Point zero(eq.shifts.rank, 0);
                Rational scale = f.eval(zero);
                std::vector<Rational> base(m.rows());
                for (std::size_t i = 0; i < m.rows(); ++i) {
                    Point unit(m.rows(), 0);
                    unit[i] = 1;
                    // Ratio along any preimage of the target unit step; kernel
                    // invariance (requirement 1) makes the choice immaterial.
                    base[i] = f.eval(structure.preimage(unit)) / scale;
                }
                out.coeffs.push_back(CoefficientField::geometric(scale, std::move(base)));
                break;
            }
            case CoefficientField::Kind::Table:
                throw std::invalid_argument(
                    "a Table coefficient cannot be pushed forward: its window does not "
                    "determine target-side values");
        }
    }
    validate_equation(out);
    return out;
}

GoodDomain pullback_domain(const GoodDomain& target, const ReductionMap& m,
                           const ShiftSystem& source_shifts) {
    GoodDomain out;
    for (const Halfspace& hs : target.halfspaces) {
        if (hs.c.size() != m.rows())
            throw std::invalid_argument("pullback: halfspace rank mismatch");
        Point c(m.cols(), 0);
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (std::size_t i = 0; i < m.rows(); ++i) c[j] += hs.c[i] * m.m[i][j];
        out.halfspaces.push_back({std::move(c), hs.b});
    }
    if (target.grading.size() != m.rows())
        throw std::invalid_argument("pullback: grading rank mismatch");
    out.grading.assign(m.cols(), 0);
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
            out.grading[j] += target.grading[i] * m.m[i][j];
    try {
        validate_domain(out, source_shifts);
    } catch (const std::invalid_argument& err) {
        throw CertificateError(std::string("pulled-back domain is not good: ") + err.what());
    }
    return out;
}

ReductionComparison compare_reduction(const Equation& source, const ReductionMap& m,
                                      const GoodDomain& target_domain,
                                      const Box& target_window) {
    validate_reduction(source, m);
    ReductionStructure structure = analyze_reduction(m);
    Equation target = reduce_equation(source, m, target_domain);
    Equation lifted = source;
    lifted.domain = pullback_domain(target_domain, m, source.shifts);

    Ivp source_ivp(lifted), target_ivp(target);
    ReductionComparison out;
    for (const Point& y : box_points(target_window)) {
        if (!domain_contains(target_domain, y)) continue;
        const Point x = structure.preimage(y);
        const Fraction fs = source_ivp.evaluate(x);
        const Fraction& ft = target_ivp.evaluate(y);
        ++out.sites_compared;

        // Identify X_p with X_{M p}: rename the source value's variables and
        // renormalize (identification can merge initials, leaving monomial
        // content behind).
        std::map<VarId, VarId> images;
        auto image_of = [&](VarId v) {
            auto it = images.find(v);
            if (it != images.end()) return it->second;
            VarId tv = target_ivp.variable_for_initial(m.apply(source_ivp.initial_of(v)));
            images.emplace(v, tv);
            return tv;
        };
        for (VarId v : fs.num.variables()) image_of(v);
        for (const auto& [v, e] : fs.den.entries()) image_of(v);
        LaurentPoly renamed_num = fs.num.rename_variables(images);
        std::vector<ExponentVec::Entry> den_entries;
        {
            std::map<VarId, std::int64_t> folded;
            for (const auto& [v, e] : fs.den.entries()) folded[images.at(v)] += e;
            den_entries.assign(folded.begin(), folded.end());
        }
        if (renamed_num.is_zero()) {
            if (!(ft == Fraction{})) {
                out.equal = false;
                if (!out.first_mismatch) out.first_mismatch = y;
            }
            continue;
        }
        Fraction folded = make_fraction(
            renamed_num,
            LaurentPoly::monomial(1, ExponentVec::from_entries(den_entries)));
        if (!(folded == ft)) {
            out.equal = false;
            if (!out.first_mismatch) out.first_mismatch = y;
        }
    }
    return out;
}

}  // namespace laurel
