#include <set>

#include "doctest.h"
#include "laurel/reduction.hpp"

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

GoodDomain halfline(Point covector, std::int64_t b = 0) {
    GoodDomain d;
    d.halfspaces.push_back({covector, b});
    d.grading = std::move(covector);
    return d;
}

const ReductionMap plane_collapse{{{1, 0, 1}, {0, 1, 0}}};  // rank 3 -> rank 2

Equation constant_equation(ShiftSystem s, std::vector<Rational> cs) {
    Equation eq;
    eq.domain = orthant(s.rank);
    eq.shifts = std::move(s);
    for (const Rational& c : cs) eq.coeffs.push_back(CoefficientField::constant(c));
    return eq;
}

}  // namespace

TEST_CASE("module structure of a reduction map") {
    SUBCASE("kernel and preimage of the plane collapse") {
        auto st = analyze_reduction(plane_collapse);
        REQUIRE(st.kernel_basis.size() == 1);
        const Point& k = st.kernel_basis[0];
        CHECK(plane_collapse.apply(k) == Point{0, 0});
        CHECK(k != Point{0, 0, 0});
        Rng rng(51);
        for (int t = 0; t < 100; ++t) {
            Point y{rng.uniform(-50, 50), rng.uniform(-50, 50)};
            CHECK(plane_collapse.apply(st.preimage(y)) == y);
        }
    }
    SUBCASE("covector maps have full corank kernels") {
        ReductionMap phi{{{1, 2, 4}}};
        auto st = analyze_reduction(phi);
        REQUIRE(st.kernel_basis.size() == 2);
        for (const Point& k : st.kernel_basis) CHECK(phi.apply(k) == Point{0});
        CHECK(phi.apply(st.preimage({9})) == Point{9});
    }
    SUBCASE("square unimodular maps have trivial kernels") {
        ReductionMap id{{{1, 0}, {0, 1}}};
        CHECK(analyze_reduction(id).kernel_basis.empty());
        CHECK(analyze_reduction(id).preimage({3, -4}) == Point{3, -4});
    }
    SUBCASE("non-surjective or malformed maps are rejected") {
        CHECK_THROWS_AS(analyze_reduction(ReductionMap{{{2, 0, 0}, {0, 1, 0}}}),
                        InvalidReduction);
        CHECK_THROWS_AS(analyze_reduction(ReductionMap{{{1, 0}, {0, 1}, {0, 0}}}),
                        InvalidReduction);
        CHECK_THROWS_AS(analyze_reduction(ReductionMap{{{1, 0}, {0}}}), InvalidReduction);
        CHECK_THROWS_AS(analyze_reduction(ReductionMap{{}}), InvalidReduction);
    }
}

TEST_CASE("validation requirement: separating covector") {
    auto eq = constant_equation(hirota_system(), {Rational(2), Rational(3)});
    Point y = validate_reduction(eq, plane_collapse);
    for (const auto& [v, u] : eq.shifts.terms) {
        CHECK(dot(y, plane_collapse.apply(v)) <= -1);
        CHECK(dot(y, plane_collapse.apply(u)) <= -1);
    }

    // A map sending one shift to zero (or to opposite signs) has no covector.
    auto kdv = constant_equation(kdv_system(), {Rational(1), Rational(1)});
    CHECK_THROWS_AS(validate_reduction(kdv, ReductionMap{{{1, -1}}}), InvalidReduction);
    CHECK_THROWS_AS(validate_reduction(kdv, ReductionMap{{{1, -2}}}), InvalidReduction);
}

TEST_CASE("validation requirement: image distinctness") {
    // Collapsing both product shifts of the rank-two system onto -1.
    auto kdv = constant_equation(kdv_system(), {Rational(1), Rational(1)});
    CHECK_THROWS_AS(validate_reduction(kdv, ReductionMap{{{1, 1}}}), InvalidReduction);

    // One-dimensional collapse of the three-term system with offsets
    // (a, b, l) = (1, 2, 3): the covector is (1, 2, 0) and two product
    // directions collide (a + b = l).
    auto hm = constant_equation(hirota_system(), {Rational(1), Rational(1)});
    CHECK_THROWS_AS(validate_reduction(hm, ReductionMap{{{1, 2, 0}}}), InvalidReduction);
    // Offsets (1, 2, 5) via covector (1, 2, 2) stay disjoint.
    Point y = validate_reduction(hm, ReductionMap{{{1, 2, 2}}});
    CHECK(dot(y, Point{-1}) <= -1);
}

TEST_CASE("validation requirement: kernel invariance of coefficients") {
    auto base_eq = constant_equation(hirota_system(), {Rational(2), Rational(3)});
    auto st = analyze_reduction(plane_collapse);
    const Point k = st.kernel_basis[0];

    SUBCASE("geometric fields need trivial base along the kernel") {
        Equation eq = base_eq;
        // Invariant: base (2, 5, 1/2) has 2^k1 * 5^k2 * (1/2)^k3 = 1 for
        // k = +-(1, 0, -1).
        eq.coeffs[0] =
            CoefficientField::geometric(Rational(7), {Rational(2), Rational(5), Rational(2)});
        CHECK(validate_reduction(eq, plane_collapse).size() == 2);
        eq.coeffs[0] =
            CoefficientField::geometric(Rational(7), {Rational(2), Rational(5), Rational(3)});
        CHECK_THROWS_AS(validate_reduction(eq, plane_collapse), InvalidReduction);
    }
    SUBCASE("table fields must agree on fibers crossing their window") {
        Box win{{0, 0, 0}, {3, 3, 3}};
        std::map<Point, Rational> vals;
        for (const Point& p : box_points(win))
            vals[p] = Rational(7 + plane_collapse.apply(p)[0] + 3 * plane_collapse.apply(p)[1]);
        Equation eq = base_eq;
        eq.coeffs[1] = CoefficientField::table_from_map(win, vals);
        CHECK(validate_reduction(eq, plane_collapse).size() == 2);

        vals[point_add(Point{1, 2, 0}, k)] += 1;  // break one fiber
        eq.coeffs[1] = CoefficientField::table_from_map(win, vals);
        CHECK_THROWS_AS(validate_reduction(eq, plane_collapse), InvalidReduction);
    }
}

TEST_CASE("the plane collapse carries the three-term system onto the rank-two one") {
    auto eq = constant_equation(hirota_system(), {Rational(2), Rational(3)});
    Equation red = reduce_equation(eq, plane_collapse, orthant(2));
    auto expect = kdv_system();
    CHECK(red.shifts.rank == expect.rank);
    CHECK(red.shifts.terms == expect.terms);
    CHECK(red.shifts.w == expect.w);
    CHECK(red.coeffs[0].eval({5, 9}) == Rational(2));
    CHECK(red.coeffs[1].eval({5, 9}) == Rational(3));
}

TEST_CASE("the covector (1,2,4) reduces the four-term system to a seven-step chain") {
    auto eq = constant_equation(bkp_system(), {Rational(1), Rational(2), Rational(3)});
    ReductionMap phi{{{1, 2, 4}}};
    validate_reduction(eq, phi);
    Equation red = reduce_equation(eq, phi, halfline({1}));
    CHECK(red.shifts.terms ==
          std::vector<std::pair<Point, Point>>{{{-1}, {-6}}, {{-2}, {-5}}, {{-4}, {-3}}});
    CHECK(red.shifts.w == Point{-7});
}

TEST_CASE("geometric coefficients push forward consistently") {
    Equation eq = constant_equation(hirota_system(), {Rational(2), Rational(3)});
    eq.coeffs[0] =
        CoefficientField::geometric(Rational(7, 3), {Rational(2), Rational(5), Rational(2)});
    Equation red = reduce_equation(eq, plane_collapse, orthant(2));
    REQUIRE(red.coeffs[0].kind() == CoefficientField::Kind::Geometric);
    Rng rng(52);
    for (int t = 0; t < 50; ++t) {
        Point h{rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(-6, 6)};
        CHECK(red.coeffs[0].eval(plane_collapse.apply(h)) == eq.coeffs[0].eval(h));
    }

    Box win{{0, 0, 0}, {2, 2, 2}};
    std::vector<Rational> ones(27, Rational(1));
    eq.coeffs[0] = CoefficientField::table(win, ones);
    CHECK_THROWS_AS(reduce_equation(eq, plane_collapse, orthant(2)), std::invalid_argument);
}

TEST_CASE("domain pullback composes the halfspaces with the map") {
    GoodDomain pulled = pullback_domain(orthant(2), plane_collapse, hirota_system());
    REQUIRE(pulled.halfspaces.size() == 2);
    CHECK(pulled.halfspaces[0].c == Point{1, 0, 1});
    CHECK(pulled.halfspaces[1].c == Point{0, 1, 0});
    CHECK(pulled.grading == Point{1, 1, 1});
    // Membership is exactly membership of the image.
    Rng rng(53);
    for (int t = 0; t < 200; ++t) {
        Point h{rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4)};
        CHECK(domain_contains(pulled, h) ==
              domain_contains(orthant(2), plane_collapse.apply(h)));
    }

    // A target domain that is not good for the reduced shifts cannot pull
    // back to a good one.
    GoodDomain junk = orthant(2);
    junk.grading = {0, 0};
    CHECK_THROWS_AS(pullback_domain(junk, plane_collapse, hirota_system()),
                    CertificateError);
}

TEST_CASE("reduced solutions match pushed-forward solutions") {
    SUBCASE("three-term to rank two, constant coefficients") {
        auto eq = constant_equation(hirota_system(), {Rational(2), Rational(3)});
        auto cmp = compare_reduction(eq, plane_collapse, orthant(2), Box{{0, 0}, {4, 3}});
        CHECK(cmp.equal);
        CHECK(!cmp.first_mismatch);
        CHECK(cmp.sites_compared == 20);
    }
    SUBCASE("three-term to rank two, kernel-invariant geometric coefficients") {
        Equation eq = constant_equation(hirota_system(), {Rational(2), Rational(3)});
        eq.coeffs[0] =
            CoefficientField::geometric(Rational(2), {Rational(3), Rational(2), Rational(3)});
        auto cmp = compare_reduction(eq, plane_collapse, orthant(2), Box{{0, 0}, {4, 3}});
        CHECK(cmp.equal);
    }
    SUBCASE("four-term to the seven-step chain") {
        auto eq = constant_equation(bkp_system(), {Rational(1), Rational(2), Rational(3)});
        auto cmp = compare_reduction(eq, ReductionMap{{{1, 2, 4}}}, halfline({1}),
                                     Box{{0}, {14}});
        CHECK(cmp.equal);
        CHECK(cmp.sites_compared == 15);
    }
    SUBCASE("three-term to the five-step chain with offsets (1,2,5)") {
        auto eq = constant_equation(hirota_system(), {Rational(1), Rational(1)});
        auto cmp = compare_reduction(eq, ReductionMap{{{1, 2, 2}}}, halfline({1}),
                                     Box{{0}, {12}});
        CHECK(cmp.equal);
    }
}
