#include <set>

#include "doctest.h"
#include "laurel/conditions.hpp"
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

}  // namespace

TEST_CASE("site box arithmetic") {
    CHECK(condition_site_box(hirota_system(), Box{{0, 0, 0}, {4, 4, 4}}).lo ==
          Point{1, 1, 1});
    CHECK(condition_site_box(hirota_system(), Box{{0, 0, 0}, {4, 4, 4}}).hi ==
          Point{4, 4, 4});
    Box kb = condition_site_box(kdv_system(), Box{{0, 0}, {6, 5}});
    CHECK(kb.lo == Point{2, 1});
    CHECK(kb.hi == Point{6, 5});
}

TEST_CASE("constant coefficients satisfy every condition") {
    Box win{{-2, -2, -2}, {2, 2, 2}};
    auto a = CoefficientField::constant(Rational(7, 2));
    auto b = CoefficientField::constant(Rational(3));
    auto c = CoefficientField::constant(Rational(11, 5));
    CHECK(check_condition_hm(a, b, hirota_system(), win).ok());
    CHECK(check_condition_bkp(a, b, c, bkp_system(), win).ok());
    CHECK(check_condition_reduced(a, b, 1, 2, 5, Box{{-3}, {9}}).ok());
}

TEST_CASE("geometric coefficients satisfy the three-term condition identically") {
    // Both sides multiply the same total shift 2h + w into each base, so any
    // bases work. The four-term relations, by contrast, constrain the bases.
    Rng rng(31);
    Box win{{0, 0, 0}, {3, 3, 3}};
    for (int trial = 0; trial < 25; ++trial) {
        auto a = CoefficientField::geometric(rng.rational(9),
                                             {rng.rational(9), rng.rational(9), rng.rational(9)});
        auto b = CoefficientField::geometric(rng.rational(9),
                                             {rng.rational(9), rng.rational(9), rng.rational(9)});
        CHECK(check_condition_hm(a, b, hirota_system(), win).ok());
    }
    // Same collapse in one dimension.
    for (int trial = 0; trial < 25; ++trial) {
        auto a = CoefficientField::geometric(rng.rational(9), {rng.rational(9)});
        auto b = CoefficientField::geometric(rng.rational(9), {rng.rational(9)});
        CHECK(check_condition_reduced(a, b, 2, 3, 7, Box{{0}, {10}}).ok());
    }
}

TEST_CASE("generic geometric triples violate the four-term relations") {
    Rng rng(32);
    auto rnd = [&] {
        return CoefficientField::geometric(rng.rational(9),
                                           {rng.rational(9), rng.rational(9), rng.rational(9)});
    };
    auto rep = check_condition_bkp(rnd(), rnd(), rnd(), bkp_system(), Box{{0, 0, 0}, {1, 1, 1}});
    CHECK(!rep.ok());
    std::set<int> relations;
    for (const auto& v : rep.violations) {
        CHECK(v.lhs != v.rhs);
        relations.insert(v.relation);
    }
    CHECK(relations.size() == 3);  // all three relations break generically
}

TEST_CASE("swept three-term tables satisfy the condition and stay positive") {
    Rng rng(33);
    auto sys = hirota_system();
    Box win{{0, 0, 0}, {4, 4, 4}};
    auto [a, b] = make_consistent_3term_tables(sys, {1, 1, 1}, win, rng);
    CHECK(a.certainly_positive());
    CHECK(b.certainly_positive());
    auto rep = check_condition_hm(a, b, sys, condition_site_box(sys, win));
    CHECK(rep.ok());
    CHECK(rep.sites_checked == 64);

    // The substance of the condition: the initial-value problem with these
    // coefficients stays Laurent.
    Equation eq{sys, {a, b}, orthant(3)};
    Ivp ivp(eq);
    CHECK(verify_laurent(ivp, Box{{0, 0, 0}, {3, 3, 3}}).all_laurent);
}

TEST_CASE("swept tables work for the rank-two system as well") {
    Rng rng(34);
    auto sys = kdv_system();
    Box win{{0, 0}, {7, 5}};
    auto [a, b] = make_consistent_3term_tables(sys, {1, 1}, win, rng);
    auto rep = check_condition_hm(a, b, sys, condition_site_box(sys, win));
    CHECK(rep.ok());
    Equation eq{sys, {a, b}, orthant(2)};
    Ivp ivp(eq);
    CHECK(verify_laurent(ivp, Box{{0, 0}, {6, 4}}).all_laurent);
}

TEST_CASE("swept one-dimensional tables match the reduced checker") {
    // Offsets (a, b, l) = (1, 2, 5): shifts -1, -4 / -2, -3, divisor -5.
    ShiftSystem s;
    s.rank = 1;
    s.terms = {{{-1}, {-4}}, {{-2}, {-3}}};
    s.w = {-5};
    Rng rng(35);
    Box win{{0}, {24}};
    auto [a, b] = make_consistent_3term_tables(s, {1}, win, rng);
    auto general = check_condition_hm(a, b, s, condition_site_box(s, win));
    auto reduced = check_condition_reduced(a, b, 1, 2, 5, condition_site_box(s, win));
    CHECK(general.ok());
    CHECK(reduced.ok());
    CHECK(general.sites_checked == reduced.sites_checked);
}

TEST_CASE("gauge-built four-term tables satisfy all three relations") {
    Rng rng(36);
    auto sys = bkp_system();
    Box win{{0, 0, 0}, {3, 3, 3}};
    auto tables = make_consistent_4term_tables(sys, win, rng);
    for (const auto& t : tables) CHECK(t.certainly_positive());
    auto rep = check_condition_bkp(tables[0], tables[1], tables[2], sys,
                                   condition_site_box(sys, win));
    CHECK(rep.ok());
    CHECK(rep.sites_checked == 27);

    Equation eq{sys, {tables[0], tables[1], tables[2]}, orthant(3)};
    Ivp ivp(eq);
    CHECK(verify_laurent(ivp, win).all_laurent);
}

TEST_CASE("a scaled entry produces exactly the four covered violations") {
    Rng rng(37);
    auto sys = hirota_system();
    Box win{{0, 0, 0}, {4, 4, 4}};
    auto [a, b] = make_consistent_3term_tables(sys, {1, 1, 1}, win, rng);
    const Point p{2, 2, 2};
    auto rep = check_condition_hm(a.with_scaled_entry(p, Rational(3)), b, sys,
                                  condition_site_box(sys, win));
    REQUIRE(rep.violations.size() == 4);
    // The first coefficient is read at h, h+w, h+v2, h+u2; the perturbed
    // entry must appear in one of those slots of every violated site.
    const auto& [v2, u2] = sys.terms[1];
    std::set<Point> expected{p, point_sub(p, sys.w), point_sub(p, v2), point_sub(p, u2)};
    std::set<Point> got;
    for (const auto& v : rep.violations) got.insert(v.h);
    CHECK(got == expected);
}

TEST_CASE("shape preconditions are enforced") {
    Box win{{0, 0, 0}, {1, 1, 1}};
    auto c = CoefficientField::constant(Rational(1));
    CHECK_THROWS_AS(check_condition_hm(c, c, bkp_system(), win), ShapeMismatch);
    CHECK_THROWS_AS(check_condition_bkp(c, c, c, hirota_system(), win), ShapeMismatch);
    Box line{{0}, {5}};
    CHECK_THROWS_AS(check_condition_reduced(c, c, 0, 2, 5, line), ShapeMismatch);
    CHECK_THROWS_AS(check_condition_reduced(c, c, 2, 2, 5, line), ShapeMismatch);
    CHECK_THROWS_AS(check_condition_reduced(c, c, 2, 5, 5, line), ShapeMismatch);
    CHECK_THROWS_AS(check_condition_reduced(c, c, 2, 3, 5, line), ShapeMismatch);  // a+b=l
    Rng rng(1);
    CHECK_THROWS_AS(make_consistent_3term_tables(bkp_system(), {1, 1, 1}, win, rng),
                    ShapeMismatch);
}

TEST_CASE("table evaluation outside coverage is reported, not invented") {
    Rng rng(38);
    auto sys = hirota_system();
    Box win{{0, 0, 0}, {2, 2, 2}};
    auto [a, b] = make_consistent_3term_tables(sys, {1, 1, 1}, win, rng);
    // A window whose stencil leaves the table must throw.
    CHECK_THROWS_AS(check_condition_hm(a, b, sys, Box{{0, 0, 0}, {3, 3, 3}}),
                    OutsideTableWindow);
}
