#include "laurel/ivp.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace laurel {

Ivp::Ivp(Equation eq) : eq_(std::move(eq)), cert_(validate_equation(eq_)) {}

VarId Ivp::variable_for_initial(const Point& h0) {
    auto it = var_ids_.find(h0);
    if (it != var_ids_.end()) return it->second;
    if (!in_initial_set(eq_.domain, eq_.shifts, h0))
        throw DomainError("not an initial site: " + point_to_string(h0));
    VarId id = static_cast<VarId>(var_points_.size());
    var_points_.push_back(h0);
    var_ids_.emplace(h0, id);
    return id;
}

const Point& Ivp::initial_of(VarId v) const {
    if (v >= var_points_.size())
        throw std::out_of_range("unknown initial variable id");
    return var_points_[v];
}

std::optional<VarId> Ivp::lookup_variable(const Point& h0) const {
    auto it = var_ids_.find(h0);
    if (it == var_ids_.end()) return std::nullopt;
    return it->second;
}

std::function<std::string(VarId)> Ivp::namer() const {
    // Copy the registry: the printer must stay valid if more variables are
    // registered (or the Ivp goes away) after the closure is taken.
    auto points = var_points_;
    return [points](VarId v) {
        std::ostringstream out;
        out << 'X';
        if (v < points.size())
            out << point_to_string(points[v]);
        else
            out << "?" << v;
        return out.str();
    };
}

const Fraction& Ivp::evaluate(const Point& h) {
    if (h.size() != static_cast<std::size_t>(eq_.shifts.rank))
        throw DomainError("point rank mismatch");
    if (!domain_contains(eq_.domain, h))
        throw DomainError("site outside the domain: " + point_to_string(h));
    if (auto it = cache_.find(h); it != cache_.end()) return it->second;

    // Collect the uncached dependency closure, then fill it bottom-up in
    // grading order (every shift strictly lowers the grading, so all
    // dependencies of a site precede it).
    std::vector<Point> pending;
    std::set<Point> seen;
    std::vector<Point> stack{h};
    seen.insert(h);
    const std::vector<Point> shifts = eq_.shifts.all_shifts();
    while (!stack.empty()) {
        Point p = std::move(stack.back());
        stack.pop_back();
        if (cache_.count(p)) continue;
        if (in_initial_set(eq_.domain, eq_.shifts, p)) {
            VarId id = variable_for_initial(p);
            cache_.emplace(p, fraction_from_poly(LaurentPoly::variable(id)));
            continue;
        }
        pending.push_back(p);
        for (const Point& s : shifts) {
            Point q = point_add(p, s);
            if (seen.insert(q).second) stack.push_back(q);
        }
    }
    std::sort(pending.begin(), pending.end(), [&](const Point& a, const Point& b) {
        std::int64_t ga = dot(eq_.domain.grading, a);
        std::int64_t gb = dot(eq_.domain.grading, b);
        if (ga != gb) return ga < gb;
        return a < b;
    });
    for (const Point& p : pending) cache_.emplace(p, step(p));
    return cache_.at(h);
}

// One evaluation step; every dependency of h is already cached.
Fraction Ivp::step(const Point& h) {
    const ShiftSystem& s = eq_.shifts;
    const Fraction& fw = cache_.at(point_add(h, s.w));
    if (fw.num.is_zero()) throw ZeroIterate(point_add(h, s.w));

    // Common denominator of the term products.
    std::vector<ExponentVec> term_den;
    term_den.reserve(s.terms.size());
    ExponentVec lcm;
    for (std::size_t j = 0; j < s.terms.size(); ++j) {
        const Fraction& fv = cache_.at(point_add(h, s.terms[j].first));
        const Fraction& fu = cache_.at(point_add(h, s.terms[j].second));
        term_den.push_back(fv.den + fu.den);
        lcm = j == 0 ? term_den.back() : ExponentVec::max(lcm, term_den.back());
    }
    LaurentPoly f;
    for (std::size_t j = 0; j < s.terms.size(); ++j) {
        Rational c = eq_.coeffs[j].eval(h);
        if (c == 0) throw ZeroCoefficient("coefficient vanishes at " + point_to_string(h));
        const Fraction& fv = cache_.at(point_add(h, s.terms[j].first));
        const Fraction& fu = cache_.at(point_add(h, s.terms[j].second));
        f += (fv.num * fu.num).scaled(c).shifted(lcm - term_den[j]);
    }
    if (f.is_zero()) return Fraction{};  // the zero value

    if (fw.num.is_monomial())
        return make_fraction(f, fw.num.shifted(lcm - fw.den));
    auto q = try_exact_div(f, fw.num);
    if (!q) throw NonLaurentError(h);
    return make_fraction(*q, LaurentPoly::monomial(1, lcm - fw.den));
}

LaurentReport verify_laurent(Ivp& ivp, const Box& window, Rng* spot_check_rng,
                             std::optional<std::int64_t> grading_bound) {
    const Equation& eq = ivp.equation();
    std::vector<Point> sites;
    for (const Point& p : box_points(window)) {
        if (!domain_contains(eq.domain, p)) continue;
        if (grading_bound && dot(eq.domain.grading, p) > *grading_bound) continue;
        sites.push_back(p);
    }
    std::sort(sites.begin(), sites.end(), [&](const Point& a, const Point& b) {
        std::int64_t ga = dot(eq.domain.grading, a);
        std::int64_t gb = dot(eq.domain.grading, b);
        if (ga != gb) return ga < gb;
        return a < b;
    });

    LaurentReport report;
    for (const Point& h : sites) {
        LaurentSite entry;
        entry.h = h;
        try {
            const Fraction& f = ivp.evaluate(h);
            // Report the genuine denominator monomial: negative denominator
            // exponents are numerator content in disguise (monomial values).
            std::vector<ExponentVec::Entry> kept;
            for (const auto& [v, e] : f.den.entries())
                if (e > 0) kept.push_back({v, e});
            entry.denominator = ExponentVec::from_entries(kept);
            if (spot_check_rng != nullptr && !in_initial_set(eq.domain, eq.shifts, h)) {
                const Fraction& fw = ivp.evaluate(point_add(h, eq.shifts.w));
                if (!f.num.is_monomial() && !fw.num.is_monomial()) {
                    auto probe = coprime_probable(f.num, fw.num, 2, *spot_check_rng);
                    ++report.spot_checks;
                    if (!probe.likely_coprime) ++report.spot_check_failures;
                }
            }
        } catch (const NonLaurentError& err) {
            entry.laurent = false;
            report.all_laurent = false;
            report.first_failure = err.site;
            report.sites.push_back(std::move(entry));
            break;
        }
        report.sites.push_back(std::move(entry));
    }
    return report;
}

}  // namespace laurel
