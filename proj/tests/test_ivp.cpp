#include <map>
#include <set>

#include "doctest.h"
#include "laurel/ivp.hpp"

using namespace laurel;

namespace {

ShiftSystem hirota_system() {
    ShiftSystem s;
    s.rank = 3;
    s.terms = {{{-1, 0, 0}, {0, -1, -1}}, {{0, -1, 0}, {-1, 0, -1}}};
    s.w = {-1, -1, -1};
    return s;
}

ShiftSystem bkp_system() {
    ShiftSystem s;
    s.rank = 3;
    s.terms = {{{-1, 0, 0}, {0, -1, -1}},
               {{0, -1, 0}, {-1, 0, -1}},
               {{0, 0, -1}, {-1, -1, 0}}};
    s.w = {-1, -1, -1};
    return s;
}

ShiftSystem kdv_system() {
    ShiftSystem s;
    s.rank = 2;
    s.terms = {{{-1, 0}, {-1, -1}}, {{0, -1}, {-2, 0}}};
    s.w = {-2, -1};
    return s;
}

GoodDomain orthant(int rank) {
    GoodDomain d;
    for (int i = 0; i < rank; ++i) {
        Point c(rank, 0);
        c[i] = 1;
        d.halfspaces.push_back({c, 0});
    }
    d.grading = Point(rank, 1);
    return d;
}

Equation make_equation(ShiftSystem s, std::vector<CoefficientField> coeffs) {
    Equation eq;
    eq.shifts = std::move(s);
    eq.coeffs = std::move(coeffs);
    eq.domain = orthant(eq.shifts.rank);
    return eq;
}

// Independent oracle: iterate the recurrence on plain rational numbers, with
// lazily drawn positive initial values. No polynomial arithmetic involved.
struct NumericOracle {
    const Equation& eq;
    Rng rng;
    std::map<Point, Rational> memo;
    std::map<Point, Rational> initials;

    NumericOracle(const Equation& e, std::uint64_t seed) : eq(e), rng(seed) {}

    Rational value(const Point& h) {
        REQUIRE(domain_contains(eq.domain, h));
        if (auto it = memo.find(h); it != memo.end()) return it->second;
        Rational out;
        if (in_initial_set(eq.domain, eq.shifts, h)) {
            auto [it, fresh] = initials.emplace(h, Rational(0));
            if (fresh) it->second = rng.rational(9);
            out = it->second;
        } else {
            Rational num(0);
            for (std::size_t j = 0; j < eq.shifts.terms.size(); ++j)
                num += eq.coeffs[j].eval(h) * value(point_add(h, eq.shifts.terms[j].first)) *
                       value(point_add(h, eq.shifts.terms[j].second));
            out = num / value(point_add(h, eq.shifts.w));
        }
        memo.emplace(h, out);
        return out;
    }
};

// Substitutes the oracle's initial draws into a symbolic value.
Rational substitute(Ivp& ivp, const Fraction& f, const NumericOracle& oracle) {
    std::map<VarId, Rational> assignment;
    for (const auto& [p, val] : oracle.initials) {
        auto id = ivp.lookup_variable(p);
        if (id) assignment.emplace(*id, val);
    }
    return f.as_poly().evaluate(assignment);
}

void check_against_oracle(const Equation& eq, const Box& window, std::uint64_t seed) {
    Ivp ivp(eq);
    NumericOracle oracle(eq, seed);
    for (const Point& h : box_points(window)) {
        if (!domain_contains(eq.domain, h)) continue;
        const Fraction& f = ivp.evaluate(h);
        CHECK(f.num.monomial_content().empty());  // normal form holds throughout
        CHECK(substitute(ivp, f, oracle) == oracle.value(h));
    }
}

}  // namespace

TEST_CASE("symbolic evaluation matches plain rational iteration") {
    SUBCASE("three-term, constant coefficients") {
        auto eq = make_equation(hirota_system(), {CoefficientField::constant(Rational(2)),
                                                  CoefficientField::constant(Rational(3, 5))});
        check_against_oracle(eq, Box{{0, 0, 0}, {3, 3, 3}}, 11);
    }
    SUBCASE("four-term, constant coefficients") {
        auto eq = make_equation(bkp_system(), {CoefficientField::constant(Rational(1)),
                                               CoefficientField::constant(Rational(7, 2)),
                                               CoefficientField::constant(Rational(4, 3))});
        check_against_oracle(eq, Box{{0, 0, 0}, {2, 2, 2}}, 12);
    }
    SUBCASE("rank-two system with a doubled shift") {
        auto eq = make_equation(kdv_system(), {CoefficientField::constant(Rational(1)),
                                               CoefficientField::constant(Rational(1))});
        check_against_oracle(eq, Box{{0, 0}, {6, 4}}, 13);
    }
    SUBCASE("geometric coefficients") {
        auto eq = make_equation(
            hirota_system(),
            {CoefficientField::geometric(Rational(2), {Rational(2), Rational(1), Rational(3)}),
             CoefficientField::geometric(Rational(1), {Rational(1, 2), Rational(5), Rational(1)})});
        check_against_oracle(eq, Box{{0, 0, 0}, {3, 3, 3}}, 14);
    }
    SUBCASE("table coefficients, all ones") {
        Box win{{0, 0, 0}, {4, 4, 4}};
        std::vector<Rational> ones(box_points(win).size(), Rational(1));
        auto eq = make_equation(hirota_system(), {CoefficientField::table(win, ones),
                                                  CoefficientField::table(win, ones)});
        check_against_oracle(eq, Box{{0, 0, 0}, {3, 3, 3}}, 15);
    }
}

TEST_CASE("initial sites evaluate to their own variable") {
    auto eq = make_equation(hirota_system(), {CoefficientField::constant(Rational(1)),
                                              CoefficientField::constant(Rational(1))});
    Ivp ivp(eq);
    for (Point h : {Point{0, 0, 0}, Point{0, 2, 1}, Point{5, 0, 3}, Point{3, 4, 0}}) {
        const Fraction& f = ivp.evaluate(h);
        VarId id = ivp.variable_for_initial(h);
        CHECK(f.as_poly() == LaurentPoly::variable(id));
        CHECK(ivp.initial_of(id) == h);
    }
    CHECK(ivp.namer()(ivp.variable_for_initial({0, 2, 1})) == "X(0,2,1)");
    CHECK_THROWS_AS(ivp.variable_for_initial({2, 2, 2}), DomainError);  // interior site
}

TEST_CASE("first interior three-term value is frozen") {
    auto eq = make_equation(hirota_system(), {CoefficientField::constant(Rational(2)),
                                              CoefficientField::constant(Rational(3))});
    Ivp ivp(eq);
    const Fraction f = ivp.evaluate({1, 1, 1});

    auto var = [&](std::int64_t a, std::int64_t b, std::int64_t c) {
        auto id = ivp.lookup_variable({a, b, c});
        REQUIRE(id);
        return LaurentPoly::variable(*id);
    };
    LaurentPoly expected_num =
        var(0, 1, 1) * var(1, 0, 0) * LaurentPoly::constant(2) +
        var(1, 0, 1) * var(0, 1, 0) * LaurentPoly::constant(3);
    CHECK(f.num == expected_num);
    CHECK(f.den == ExponentVec::variable(*ivp.lookup_variable({0, 0, 0})));
    CHECK(f.degree() == 2);
}

TEST_CASE("denominator support is the initial set below the divisor site") {
    auto eq = make_equation(hirota_system(), {CoefficientField::constant(Rational(1)),
                                              CoefficientField::constant(Rational(1))});
    Ivp ivp(eq);
    const Fraction f = ivp.evaluate({2, 2, 2});
    // Initial sites weakly below (1,1,1), each with exponent one.
    std::vector<Point> support = {{0, 0, 0}, {0, 0, 1}, {0, 1, 0},
                                  {0, 1, 1}, {1, 0, 0}, {1, 0, 1}};
    CHECK(support == initial_points_below(eq.domain, eq.shifts, {1, 1, 1}));
    std::set<std::pair<VarId, std::int64_t>> seen;
    for (const auto& [v, e] : f.den.entries()) seen.insert({v, e});
    std::set<std::pair<VarId, std::int64_t>> expected;
    for (const Point& p : support) expected.insert({*ivp.lookup_variable(p), 1});
    CHECK(seen == expected);
}

TEST_CASE("laurent verification passes on consistent systems") {
    SUBCASE("three-term") {
        auto eq = make_equation(hirota_system(), {CoefficientField::constant(Rational(2)),
                                                  CoefficientField::constant(Rational(5, 3))});
        Ivp ivp(eq);
        Rng rng(21);
        auto report = verify_laurent(ivp, Box{{0, 0, 0}, {3, 3, 3}}, &rng);
        CHECK(report.all_laurent);
        CHECK(!report.first_failure);
        CHECK(report.sites.size() == 64);
        CHECK(report.spot_checks > 0);
        CHECK(report.spot_check_failures == 0);
        // Sites arrive in ascending grading order.
        for (std::size_t i = 1; i < report.sites.size(); ++i)
            CHECK(dot(eq.domain.grading, report.sites[i - 1].h) <=
                  dot(eq.domain.grading, report.sites[i].h));
        // Initial sites report trivial denominators.
        for (const auto& site : report.sites)
            if (in_initial_set(eq.domain, eq.shifts, site.h)) CHECK(site.denominator.empty());
    }
    SUBCASE("four-term") {
        auto eq = make_equation(bkp_system(), {CoefficientField::constant(Rational(1)),
                                               CoefficientField::constant(Rational(2)),
                                               CoefficientField::constant(Rational(3))});
        Ivp ivp(eq);
        Rng rng(22);
        auto report = verify_laurent(ivp, Box{{0, 0, 0}, {2, 2, 2}}, &rng);
        CHECK(report.all_laurent);
        CHECK(report.spot_check_failures == 0);
    }
    SUBCASE("rank two") {
        auto eq = make_equation(kdv_system(), {CoefficientField::constant(Rational(1)),
                                               CoefficientField::constant(Rational(3))});
        Ivp ivp(eq);
        auto report = verify_laurent(ivp, Box{{0, 0}, {7, 5}});
        CHECK(report.all_laurent);
        CHECK(report.spot_checks == 0);  // no probes requested
    }
}

TEST_CASE("an inconsistent table breaks the Laurent property at a covered site") {
    Box win{{0, 0, 0}, {4, 4, 4}};
    std::vector<Rational> ones(box_points(win).size(), Rational(1));
    auto alpha = CoefficientField::table(win, ones).with_scaled_entry({1, 1, 1}, Rational(2));
    auto eq = make_equation(hirota_system(),
                            {alpha, CoefficientField::constant(Rational(1))});
    Ivp ivp(eq);
    auto report = verify_laurent(ivp, win);
    REQUIRE(!report.all_laurent);
    REQUIRE(report.first_failure.has_value());
    const Point hf = *report.first_failure;
    // The failing site's stencil must cover the perturbed entry.
    std::vector<Point> stencil{hf};
    for (const Point& s : eq.shifts.all_shifts()) stencil.push_back(point_add(hf, s));
    bool covered = false;
    for (const Point& p : stencil) covered |= (p == Point{1, 1, 1});
    CHECK(covered);
    // The report ends at the failure and marks it.
    CHECK(report.sites.back().h == hf);
    CHECK(!report.sites.back().laurent);
    // Everything strictly earlier passed.
    for (std::size_t i = 0; i + 1 < report.sites.size(); ++i) CHECK(report.sites[i].laurent);
}

TEST_CASE("evaluation rejects sites outside the domain") {
    auto eq = make_equation(hirota_system(), {CoefficientField::constant(Rational(1)),
                                              CoefficientField::constant(Rational(1))});
    Ivp ivp(eq);
    CHECK_THROWS_AS(ivp.evaluate({-1, 0, 0}), DomainError);
    CHECK_THROWS_AS(ivp.evaluate({0, 0}), DomainError);  // wrong rank
}

TEST_CASE("coefficient fields") {
    SUBCASE("constant") {
        auto c = CoefficientField::constant(Rational(7, 3));
        CHECK(c.eval({5, -2, 0}) == Rational(7, 3));
        CHECK(c.certainly_positive());
        CHECK(c.covers(Box{{-10, -10, -10}, {10, 10, 10}}));
        CHECK_THROWS_AS(CoefficientField::constant(Rational(0)), ZeroCoefficient);
    }
    SUBCASE("geometric") {
        auto g = CoefficientField::geometric(Rational(3), {Rational(2), Rational(1, 2)});
        CHECK(g.eval({0, 0}) == Rational(3));
        CHECK(g.eval({2, 1}) == Rational(3) * 4 / 2);
        CHECK(g.eval({-1, -2}) == Rational(3) / 2 * 4);
        CHECK(g.certainly_positive());
        CHECK(!CoefficientField::geometric(Rational(-3), {Rational(2)}).certainly_positive());
        CHECK_THROWS_AS(CoefficientField::geometric(Rational(1), {Rational(0)}), ZeroCoefficient);
    }
    SUBCASE("table") {
        Box win{{0, 0}, {1, 2}};
        // box_points order: (0,0),(0,1),(0,2),(1,0),(1,1),(1,2)
        auto t = CoefficientField::table(
            win, {Rational(1), Rational(2), Rational(3), Rational(4), Rational(5), Rational(6)});
        CHECK(t.eval({0, 0}) == Rational(1));
        CHECK(t.eval({0, 2}) == Rational(3));
        CHECK(t.eval({1, 0}) == Rational(4));
        CHECK(t.eval({1, 2}) == Rational(6));
        CHECK(t.window().lo == Point{0, 0});
        CHECK(t.covers(Box{{0, 1}, {1, 2}}));
        CHECK(!t.covers(Box{{0, 0}, {2, 2}}));
        CHECK_THROWS_AS(t.eval({2, 0}), OutsideTableWindow);
        CHECK_THROWS_AS(CoefficientField::table(win, {Rational(1)}), std::invalid_argument);
        auto scaled = t.with_scaled_entry({1, 1}, Rational(10));
        CHECK(scaled.eval({1, 1}) == Rational(50));
        CHECK(scaled.eval({0, 1}) == Rational(2));
    }
    SUBCASE("table from map") {
        Box win{{0}, {2}};
        auto t = CoefficientField::table_from_map(
            win, {{{0}, Rational(1)}, {{1}, Rational(2)}, {{2}, Rational(3)}});
        CHECK(t.eval({1}) == Rational(2));
        CHECK_THROWS_AS(CoefficientField::table_from_map(win, {{{0}, Rational(1)}}),
                        std::invalid_argument);
    }
}

TEST_CASE("equation validation composes the piecewise checks") {
    auto eq = make_equation(hirota_system(), {CoefficientField::constant(Rational(1)),
                                              CoefficientField::constant(Rational(1))});
    auto cert = validate_equation(eq);
    CHECK(cert.cone_coeffs.size() == 3);
    eq.coeffs.pop_back();  // arity mismatch
    CHECK_THROWS_AS(validate_equation(eq), std::invalid_argument);
}
