#include "laurel/conditions.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace laurel {

namespace {

void require_terms(const ShiftSystem& s, std::size_t n, const char* what) {
    if (s.terms.size() != n)
        throw ShapeMismatch(std::string(what) + ": needs " + std::to_string(n) +
                            " product terms, got " + std::to_string(s.terms.size()));
}

Rational positive_small(Rng& rng) { return rng.rational(20); }

}  // namespace

ConditionReport check_condition_hm(const CoefficientField& a, const CoefficientField& b,
                                   const ShiftSystem& s, const Box& window) {
    require_terms(s, 2, "three-term condition");
    const auto& [v1, u1] = s.terms[0];
    const auto& [v2, u2] = s.terms[1];
    ConditionReport rep;
    for (const Point& h : box_points(window)) {
        Rational lhs = a.eval(h) * a.eval(point_add(h, s.w)) * b.eval(point_add(h, v1)) *
                       b.eval(point_add(h, u1));
        Rational rhs = b.eval(h) * b.eval(point_add(h, s.w)) * a.eval(point_add(h, v2)) *
                       a.eval(point_add(h, u2));
        ++rep.sites_checked;
        if (lhs != rhs) rep.violations.push_back({h, 0, lhs, rhs});
    }
    return rep;
}

ConditionReport check_condition_bkp(const CoefficientField& a, const CoefficientField& b,
                                    const CoefficientField& c, const ShiftSystem& s,
                                    const Box& window) {
    require_terms(s, 3, "four-term condition");
    const auto& [v1, u1] = s.terms[0];
    const auto& [v2, u2] = s.terms[1];
    const auto& [v3, u3] = s.terms[2];
    ConditionReport rep;
    for (const Point& h : box_points(window)) {
        auto at = [&](const CoefficientField& f, const Point& off) {
            return f.eval(point_add(h, off));
        };
        const Point zero(s.rank, 0);
        Rational l0 = at(a, v2) * at(b, zero) * at(c, u1);
        Rational r0 = at(a, v3) * at(b, u1) * at(c, zero);
        Rational l1 = at(a, u2) * at(b, v3) * at(c, zero);
        Rational r1 = at(a, zero) * at(b, v1) * at(c, u2);
        Rational l2 = at(a, zero) * at(b, u3) * at(c, v1);
        Rational r2 = at(a, u3) * at(b, zero) * at(c, v2);
        ++rep.sites_checked;
        if (l0 != r0) rep.violations.push_back({h, 0, l0, r0});
        if (l1 != r1) rep.violations.push_back({h, 1, l1, r1});
        if (l2 != r2) rep.violations.push_back({h, 2, l2, r2});
    }
    return rep;
}

ConditionReport check_condition_reduced(const CoefficientField& alpha,
                                        const CoefficientField& beta, std::int64_t a,
                                        std::int64_t b, std::int64_t l, const Box& window) {
    if (!(0 < a && a < b && b < l))
        throw ShapeMismatch("reduced condition: offsets must satisfy 0 < a < b < l");
    if (a + b == l)
        throw ShapeMismatch(
            "reduced condition: a + b = l collapses two product shifts into one");
    ConditionReport rep;
    for (const Point& h : box_points(window)) {
        std::int64_t m = h.at(0);
        auto at = [&](const CoefficientField& f, std::int64_t off) {
            return f.eval({m + off});
        };
        Rational lhs = at(alpha, 0) * at(alpha, -l) * at(beta, -a) * at(beta, -l + a);
        Rational rhs = at(beta, 0) * at(beta, -l) * at(alpha, -b) * at(alpha, -l + b);
        ++rep.sites_checked;
        if (lhs != rhs) rep.violations.push_back({h, 0, lhs, rhs});
    }
    return rep;
}

Box condition_site_box(const ShiftSystem& s, const Box& table_window) {
    Box out = table_window;
    for (const Point& sh : s.all_shifts())
        for (int i = 0; i < s.rank; ++i) {
            out.lo[i] = std::max(out.lo[i], table_window.lo[i] - sh[i]);
            out.hi[i] = std::min(out.hi[i], table_window.hi[i] - sh[i]);
        }
    return out;
}

std::pair<CoefficientField, CoefficientField> make_consistent_3term_tables(
    const ShiftSystem& s, const Point& grading, const Box& window, Rng& rng) {
    require_terms(s, 2, "three-term table builder");
    const auto& [v1, u1] = s.terms[0];
    const auto& [v2, u2] = s.terms[1];

    std::map<Point, Rational> av, bv;
    for (const Point& p : box_points(window)) {
        av[p] = positive_small(rng);
        bv[p] = positive_small(rng);
    }

    // Solve the condition for a(h+w) at each constraint site. Sweeping in
    // decreasing grading order keeps every solved entry fresh: all reads of
    // table `a` at a site sit strictly above its own h+w in the grading, so
    // no later (lower) constraint rewrites a value an earlier one consumed.
    std::vector<Point> sites = box_points(condition_site_box(s, window));
    std::sort(sites.begin(), sites.end(), [&](const Point& x, const Point& y) {
        std::int64_t gx = dot(grading, x), gy = dot(grading, y);
        if (gx != gy) return gx > gy;
        return x < y;
    });
    for (const Point& h : sites) {
        Rational rhs = bv.at(h) * bv.at(point_add(h, s.w)) * av.at(point_add(h, v2)) *
                       av.at(point_add(h, u2));
        Rational lhs_rest =
            av.at(h) * bv.at(point_add(h, v1)) * bv.at(point_add(h, u1));
        av[point_add(h, s.w)] = rhs / lhs_rest;
    }
    return {CoefficientField::table_from_map(window, av),
            CoefficientField::table_from_map(window, bv)};
}

std::array<CoefficientField, 3> make_consistent_4term_tables(const ShiftSystem& s,
                                                             const Box& window, Rng& rng) {
    require_terms(s, 3, "four-term table builder");
    // A positive gauge applied to positive constants satisfies the relations
    // identically: every relation balances the same product of gauge factors
    // on both sides.
    std::vector<Point> offsets = s.all_shifts();
    offsets.push_back(Point(s.rank, 0));
    Box phi_window = box_expand(window, offsets);
    std::map<Point, Rational> phi;
    for (const Point& p : box_points(phi_window)) phi[p] = positive_small(rng);

    std::array<Rational, 3> base = {positive_small(rng), positive_small(rng),
                                    positive_small(rng)};
    std::array<std::map<Point, Rational>, 3> tables;
    for (std::size_t j = 0; j < 3; ++j) {
        const auto& [vj, uj] = s.terms[j];
        for (const Point& h : box_points(window))
            tables[j][h] = base[j] * phi.at(h) * phi.at(point_add(h, s.w)) /
                           (phi.at(point_add(h, vj)) * phi.at(point_add(h, uj)));
    }
    return {CoefficientField::table_from_map(window, tables[0]),
            CoefficientField::table_from_map(window, tables[1]),
            CoefficientField::table_from_map(window, tables[2])};
}

}  // namespace laurel
