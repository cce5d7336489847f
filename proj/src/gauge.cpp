#include "laurel/gauge.hpp"

#include <deque>
#include <set>

namespace laurel {

const Rational& GaugeFunction::at(const Point& h) const {
    auto it = values.find(h);
    if (it == values.end())
        throw OutsideTableWindow("gauge function undefined at " + point_to_string(h));
    return it->second;
}

GaugeFunction GaugeFunction::inverse() const {
    GaugeFunction out;
    for (const auto& [p, v] : values) out.values.emplace(p, 1 / v);
    return out;
}

GaugeFunction integrate_multiplicative(const std::vector<Point>& points,
                                       const std::vector<EdgeSpec>& edges) {
    std::set<Point> domain(points.begin(), points.end());
    GaugeFunction out;
    for (const Point& root : domain) {
        if (out.values.count(root)) continue;
        out.values.emplace(root, Rational(1));
        std::deque<Point> queue{root};
        while (!queue.empty()) {
            Point h = queue.front();
            queue.pop_front();
            const Rational here = out.values.at(h);
            for (const EdgeSpec& e : edges) {
                Point fwd = point_add(h, e.step);
                if (domain.count(fwd) && !out.values.count(fwd)) {
                    out.values.emplace(fwd, e.factor(h) * here);
                    queue.push_back(fwd);
                }
                Point bwd = point_sub(h, e.step);
                if (domain.count(bwd) && !out.values.count(bwd)) {
                    out.values.emplace(bwd, here / e.factor(bwd));
                    queue.push_back(bwd);
                }
            }
        }
    }
    // Every edge must agree with the integrated values, not just the
    // spanning tree the propagation happened to walk.
    for (const Point& h : domain)
        for (const EdgeSpec& e : edges) {
            Point fwd = point_add(h, e.step);
            if (!domain.count(fwd)) continue;
            if (out.values.at(fwd) != e.factor(h) * out.values.at(h))
                throw CompatibilityError("edge ratio inconsistent at " + point_to_string(h) +
                                         " along " + point_to_string(e.step));
        }
    return out;
}

Box gauge_support_box(const ShiftSystem& s, const Box& window) {
    std::vector<Point> offsets = s.all_shifts();
    offsets.push_back(Point(s.rank, 0));
    return box_expand(window, offsets);
}

Box gauge_coverage_box(const ShiftSystem& s, const Box& window) {
    std::vector<Point> offsets{Point(s.rank, 0)};
    for (const auto& [v, u] : s.terms) offsets.push_back(u);
    return box_expand(gauge_support_box(s, window), offsets);
}

Equation apply_gauge(const Equation& eq, const GaugeFunction& phi, const Box& window) {
    Equation out;
    out.shifts = eq.shifts;
    out.domain = eq.domain;
    for (std::size_t j = 0; j < eq.shifts.terms.size(); ++j) {
        const auto& [vj, uj] = eq.shifts.terms[j];
        std::map<Point, Rational> vals;
        for (const Point& h : box_points(window))
            vals.emplace(h, eq.coeffs.at(j).eval(h) * phi.at(h) *
                                phi.at(point_add(h, eq.shifts.w)) /
                                (phi.at(point_add(h, vj)) * phi.at(point_add(h, uj))));
        out.coeffs.push_back(CoefficientField::table_from_map(window, vals));
    }
    return out;
}

namespace {

void require_ok(const ConditionReport& rep, const char* what) {
    if (rep.ok()) return;
    const auto& v = rep.violations.front();
    throw ConditionViolated(std::string(what) + " fails at " + point_to_string(v.h) +
                            ": " + rational_to_string(v.lhs) + " != " +
                            rational_to_string(v.rhs));
}

}  // namespace

GaugeFunction build_gauge_hm(const CoefficientField& a, const CoefficientField& b,
                             const ShiftSystem& s, const Rational& target_a,
                             const Rational& target_b, const Box& window) {
    if (s.terms.size() != 2)
        throw ShapeMismatch("gauge to constants: needs a two-term system");
    const Box support = gauge_support_box(s, window);
    const Box coverage = gauge_coverage_box(s, window);
    require_ok(check_condition_hm(a, b, s, condition_site_box(s, coverage)),
               "three-term condition");

    const auto& [v1, u1] = s.terms[0];
    const auto& [v2, u2] = s.terms[1];
    const std::vector<Point> pts = box_points(support);

    // The explicit -> Rational on the factor lambdas matters: without it the
    // deduced type is a gmpxx expression template referencing dead
    // temporaries.
    GaugeFunction p = integrate_multiplicative(
        pts,
        {{v1, [&](const Point& h) -> Rational { return a.eval(h) / a.eval(point_add(h, u2)); }},
         {v2, [&](const Point& h) -> Rational { return b.eval(h) / b.eval(point_add(h, u1)); }}});
    GaugeFunction big_a = integrate_multiplicative(
        pts, {{v1, [&](const Point& h) -> Rational { return target_a / a.eval(h); }},
              {u2, [&](const Point& h) -> Rational { return p.at(h); }}});
    GaugeFunction big_b = integrate_multiplicative(
        pts, {{v2, [&](const Point& h) -> Rational { return target_b / b.eval(h); }},
              {u1, [&](const Point& h) -> Rational { return p.at(h); }}});
    return integrate_multiplicative(
        pts, {{u1, [&](const Point& h) -> Rational { return big_a.at(h); }},
              {u2, [&](const Point& h) -> Rational { return big_b.at(h); }}});
}

GaugeFunction build_gauge_bkp(const CoefficientField& a, const CoefficientField& b,
                              const CoefficientField& c, const ShiftSystem& s,
                              const Rational& target_a, const Rational& target_b,
                              const Rational& target_c, const Box& window) {
    if (s.terms.size() != 3)
        throw ShapeMismatch("gauge to constants: needs a three-term system");
    const Box support = gauge_support_box(s, window);
    const Box coverage = gauge_coverage_box(s, window);
    require_ok(check_condition_bkp(a, b, c, s, condition_site_box(s, coverage)),
               "four-term condition");

    const auto& [v1, u1] = s.terms[0];
    const auto& [v2, u2] = s.terms[1];
    const auto& [v3, u3] = s.terms[2];
    const std::vector<Point> pts = box_points(support);

    auto ratio = [](const CoefficientField& f, const Point& off) {
        return [&f, off](const Point& h) -> Rational {
            return f.eval(h) / f.eval(point_add(h, off));
        };
    };
    // One pair potential per pair of coefficient directions.
    GaugeFunction p =
        integrate_multiplicative(pts, {{v2, ratio(b, u3)}, {v3, ratio(c, u2)}});
    GaugeFunction q =
        integrate_multiplicative(pts, {{v1, ratio(a, u3)}, {v3, ratio(c, u1)}});
    GaugeFunction r =
        integrate_multiplicative(pts, {{v1, ratio(a, u2)}, {v2, ratio(b, u1)}});

    GaugeFunction big_a = integrate_multiplicative(
        pts, {{v1, [&](const Point& h) -> Rational { return target_a / a.eval(h); }},
              {u2, [&](const Point& h) -> Rational { return r.at(h); }},
              {u3, [&](const Point& h) -> Rational { return q.at(h); }}});
    GaugeFunction big_b = integrate_multiplicative(
        pts, {{v2, [&](const Point& h) -> Rational { return target_b / b.eval(h); }},
              {u1, [&](const Point& h) -> Rational { return r.at(h); }},
              {u3, [&](const Point& h) -> Rational { return p.at(h); }}});
    GaugeFunction big_c = integrate_multiplicative(
        pts, {{v3, [&](const Point& h) -> Rational { return target_c / c.eval(h); }},
              {u1, [&](const Point& h) -> Rational { return q.at(h); }},
              {u2, [&](const Point& h) -> Rational { return p.at(h); }}});
    return integrate_multiplicative(
        pts, {{u1, [&](const Point& h) -> Rational { return big_a.at(h); }},
              {u2, [&](const Point& h) -> Rational { return big_b.at(h); }},
              {u3, [&](const Point& h) -> Rational { return big_c.at(h); }}});
}

}  // namespace laurel
