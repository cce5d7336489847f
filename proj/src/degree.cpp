#include "laurel/degree.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace laurel {

namespace {

// Dependency closure of window ∩ domain: initial sites plus the interior
// sites sorted bottom-up, so every predecessor is handled first.
struct Closure {
    std::vector<Point> initial;
    std::vector<Point> interior;
};

Closure dependency_closure(const ShiftSystem& s, const GoodDomain& d, const Box& window) {
    if (window.lo.size() != static_cast<std::size_t>(s.rank) ||
        window.hi.size() != static_cast<std::size_t>(s.rank))
        throw DomainError("window rank mismatch");
    Closure out;
    std::set<Point> seen;
    std::vector<Point> stack;
    for (const Point& p : box_points(window)) {
        if (!domain_contains(d, p)) continue;
        if (seen.insert(p).second) stack.push_back(p);
    }
    const std::vector<Point> shifts = s.all_shifts();
    while (!stack.empty()) {
        Point p = std::move(stack.back());
        stack.pop_back();
        if (in_initial_set(d, s, p)) {
            out.initial.push_back(p);
            continue;
        }
        out.interior.push_back(p);
        for (const Point& sh : shifts) {
            Point q = point_add(p, sh);
            if (seen.insert(q).second) stack.push_back(q);
        }
    }
    std::sort(out.interior.begin(), out.interior.end(),
              [&](const Point& a, const Point& b) {
                  std::int64_t ga = dot(d.grading, a);
                  std::int64_t gb = dot(d.grading, b);
                  if (ga != gb) return ga < gb;
                  return a < b;
              });
    return out;
}

const SiteMonomial kTrivialMonomial{};

LaurentPoly poly_pow(const LaurentPoly& p, std::int64_t e) {
    LaurentPoly out = LaurentPoly::constant(1);
    for (std::int64_t i = 0; i < e; ++i) out = out * p;
    return out;
}

ExponentVec scaled_exp(const ExponentVec& v, std::int64_t e) {
    std::vector<ExponentVec::Entry> entries;
    entries.reserve(v.size());
    for (const auto& [var, ex] : v.entries()) entries.push_back({var, ex * e});
    return ExponentVec::from_entries(std::move(entries));
}

using TermPair = std::pair<Point, Point>;

std::vector<TermPair> normalized_terms(const ShiftSystem& s) {
    std::vector<TermPair> ts;
    for (const auto& [v, u] : s.terms)
        ts.push_back(v <= u ? TermPair{v, u} : TermPair{u, v});
    std::sort(ts.begin(), ts.end());
    return ts;
}

}  // namespace

std::int64_t site_monomial_degree(const SiteMonomial& q) {
    std::int64_t total = 0;
    for (const auto& [site, e] : q) total += e;
    return total;
}

bool site_monomial_divides(const SiteMonomial& a, const SiteMonomial& b) {
    for (const auto& [site, e] : a) {
        auto it = b.find(site);
        std::int64_t be = it == b.end() ? 0 : it->second;
        if (e > be) return false;
    }
    return true;
}

SiteMonomial denominator_recurrence(const ShiftSystem& s, const GoodDomain& d,
                                    const Point& h,
                                    const std::map<Point, SiteMonomial>& prior) {
    if (h.size() != static_cast<std::size_t>(s.rank))
        throw DomainError("point rank mismatch");
    if (!domain_contains(d, h))
        throw DomainError("site outside the domain: " + point_to_string(h));
    if (in_initial_set(d, s, h)) return {};

    auto fetch = [&](const Point& p) -> const SiteMonomial& {
        auto it = prior.find(p);
        if (it != prior.end()) return it->second;
        if (in_initial_set(d, s, p)) return kTrivialMonomial;
        throw std::invalid_argument("missing predecessor " + point_to_string(p));
    };

    SiteMonomial lcm;
    for (const auto& [v, u] : s.terms) {
        const SiteMonomial& qv = fetch(point_add(h, v));
        const SiteMonomial& qu = fetch(point_add(h, u));
        SiteMonomial prod = qv;
        for (const auto& [site, e] : qu) prod[site] += e;
        for (const auto& [site, e] : prod) {
            std::int64_t& slot = lcm[site];
            if (e > slot) slot = e;
        }
    }

    Point hw = point_add(h, s.w);
    if (in_initial_set(d, s, hw)) {
        lcm[hw] += 1;
        return lcm;
    }
    const SiteMonomial& qw = fetch(hw);
    for (const auto& [site, e] : qw) {
        auto it = lcm.find(site);
        if (it == lcm.end() || it->second < e)
            throw InvariantViolation(
                "denominator recurrence: no exact monomial division at " +
                point_to_string(h));
        it->second -= e;
        if (it->second == 0) lcm.erase(it);
    }
    return lcm;
}

std::map<Point, SiteMonomial> denominator_table(const ShiftSystem& s,
                                                const GoodDomain& d,
                                                const Box& window) {
    Closure c = dependency_closure(s, d, window);
    std::map<Point, SiteMonomial> table;
    for (const Point& p : c.initial) table.emplace(p, SiteMonomial{});
    for (const Point& p : c.interior)
        table.emplace(p, denominator_recurrence(s, d, p, table));
    return table;
}

DegreeField maxplus_field(const ShiftSystem& s, const GoodDomain& d,
                          const Point& h0, const Box& window) {
    if (h0.size() != static_cast<std::size_t>(s.rank))
        throw DomainError("point rank mismatch");
    if (!in_initial_set(d, s, h0))
        throw DomainError("tracked site is not initial: " + point_to_string(h0));
    Closure c = dependency_closure(s, d, window);
    DegreeField out{h0, {}};
    for (const Point& p : c.initial) out.values.emplace(p, 0);
    for (const Point& p : c.interior) {
        Point hw = point_add(p, s.w);
        std::int64_t val = 0;
        if (hw == h0) {
            val = 1;
        } else {
            std::int64_t best = 0;
            bool any = false;
            for (const auto& [v, u] : s.terms) {
                std::int64_t cand = out.values.at(point_add(p, v)) +
                                    out.values.at(point_add(p, u));
                if (!any || cand > best) best = cand;
                any = true;
            }
            if (in_initial_set(d, s, hw)) {
                val = best;
            } else {
                val = best - out.values.at(hw);
                if (val < 0)
                    throw InvariantViolation("(max,+) field went negative at " +
                                             point_to_string(p));
            }
        }
        out.values.emplace(p, val);
    }
    return out;
}

std::optional<ClassicalShape> classify_shape(const ShiftSystem& s) {
    if (s.rank != 3) return std::nullopt;
    if (s.w != Point{-1, -1, -1}) return std::nullopt;
    const std::vector<TermPair> hm = {
        {{-1, 0, -1}, {0, -1, 0}},
        {{-1, 0, 0}, {0, -1, -1}},
    };
    const std::vector<TermPair> bkp = {
        {{-1, -1, 0}, {0, 0, -1}},
        {{-1, 0, -1}, {0, -1, 0}},
        {{-1, 0, 0}, {0, -1, -1}},
    };
    std::vector<TermPair> norm = normalized_terms(s);
    if (norm == hm) return ClassicalShape::Hirota;
    if (norm == bkp) return ClassicalShape::Bkp;
    return std::nullopt;
}

SiteMonomial closed_form_denominator(const ShiftSystem& s, const GoodDomain& d,
                                     const Point& h) {
    if (!classify_shape(s))
        throw ShapeMismatch("closed-form denominators exist for the classical rank-3 shapes only");
    if (h.size() != 3) throw DomainError("point rank mismatch");
    if (!domain_contains(d, h))
        throw DomainError("site outside the domain: " + point_to_string(h));
    SiteMonomial q;
    for (const Point& h0 : initial_points_below(d, s, point_add(h, s.w))) q[h0] = 1;
    return q;
}

std::int64_t recurrence_order(const Recurrence1D& rec) {
    std::int64_t order = rec.denom_offset;
    for (const Term1D& t : rec.terms)
        for (const auto& [off, e] : t.factors) order = std::max(order, off);
    return order;
}

void validate_recurrence(const Recurrence1D& rec) {
    if (rec.terms.empty())
        throw std::invalid_argument("a recurrence needs at least one term");
    if (rec.denom_offset < 1)
        throw std::invalid_argument("the denominator offset must be positive");
    for (const Term1D& t : rec.terms)
        for (const auto& [off, e] : t.factors) {
            if (off < 1) throw std::invalid_argument("factor offsets must be positive");
            if (e < 1) throw std::invalid_argument("factor exponents must be positive");
        }
}

Recurrence1D reduced_bilinear(const CoefficientField& alpha,
                              const CoefficientField& beta, std::int64_t a,
                              std::int64_t b, std::int64_t l) {
    if (!(0 < a && a < b && b < l))
        throw std::invalid_argument("reduced bilinear shape needs 0 < a < b < l");
    Recurrence1D rec;
    rec.terms.push_back({alpha, {{a, 1}, {l - a, 1}}});
    rec.terms.push_back({beta, {{b, 1}, {l - b, 1}}});
    rec.denom_offset = l;
    return rec;
}

Recurrence1D recurrence_from_equation(const Equation& eq) {
    if (eq.shifts.rank != 1)
        throw ShapeMismatch("only rank-1 equations read as one-dimensional recurrences");
    validate_equation(eq);
    Recurrence1D rec;
    for (std::size_t j = 0; j < eq.shifts.terms.size(); ++j) {
        const auto& [v, u] = eq.shifts.terms[j];
        Term1D term{eq.coeffs[j], {}};
        if (v[0] >= 0 || u[0] >= 0)
            throw ShapeMismatch("shifts must point strictly backward");
        if (v == u)
            term.factors.push_back({-v[0], 2});
        else {
            term.factors.push_back({-v[0], 1});
            term.factors.push_back({-u[0], 1});
        }
        rec.terms.push_back(std::move(term));
    }
    if (eq.shifts.w[0] >= 0) throw ShapeMismatch("shifts must point strictly backward");
    rec.denom_offset = -eq.shifts.w[0];
    return rec;
}

Sequence1D iterate_1d(const Recurrence1D& rec, std::int64_t m_max) {
    validate_recurrence(rec);
    if (m_max < 0) throw std::invalid_argument("m_max must be nonnegative");
    const std::int64_t L = recurrence_order(rec);
    Sequence1D out;
    for (std::int64_t m = 0; m <= m_max; ++m) {
        Fraction fm;
        if (m < L) {
            fm = fraction_from_poly(LaurentPoly::variable(static_cast<VarId>(m)));
        } else {
            std::vector<LaurentPoly> nums;
            std::vector<ExponentVec> dens;
            nums.reserve(rec.terms.size());
            dens.reserve(rec.terms.size());
            for (const Term1D& term : rec.terms) {
                LaurentPoly n = LaurentPoly::constant(term.coeff.eval(Point{m}));
                ExponentVec den;
                for (const auto& [off, e] : term.factors) {
                    const Fraction& f = out.iterates[static_cast<std::size_t>(m - off)];
                    n = n * poly_pow(f.num, e);
                    den = den + scaled_exp(f.den, e);
                }
                nums.push_back(std::move(n));
                dens.push_back(std::move(den));
            }
            ExponentVec lcm = dens[0];
            for (std::size_t j = 1; j < dens.size(); ++j)
                lcm = ExponentVec::max(lcm, dens[j]);
            LaurentPoly sum;
            for (std::size_t j = 0; j < nums.size(); ++j)
                sum += nums[j].shifted(lcm - dens[j]);
            const Fraction& fd =
                out.iterates[static_cast<std::size_t>(m - rec.denom_offset)];
            if (fd.num.is_zero())
                throw std::domain_error("iteration divides by an identically zero iterate");
            if (sum.is_zero()) {
                fm = Fraction{};
            } else if (fd.num.is_monomial()) {
                fm = make_fraction(sum, fd.num.shifted(lcm - fd.den));
            } else if (auto q = try_exact_div(sum, fd.num)) {
                fm = make_fraction(*q, LaurentPoly::monomial(1, lcm - fd.den));
            } else {
                out.failure_index = m;
                break;
            }
        }
        out.degrees.push_back(fm.degree());
        out.iterates.push_back(std::move(fm));
    }
    return out;
}

TropicalSequence1D tropical_iterate_1d(const Recurrence1D& rec,
                                       bool per_variable, std::int64_t m_max) {
    validate_recurrence(rec);
    if (m_max < 0) throw std::invalid_argument("m_max must be nonnegative");
    const std::int64_t L = recurrence_order(rec);
    const std::int64_t l = rec.denom_offset;

    bool positive = true;
    for (const Term1D& t : rec.terms)
        positive = positive && t.coeff.certainly_positive();

    // Each offset must be absent from some term: with a term to play against,
    // positivity pins the denominator exactly; without one (a single-term
    // recurrence, say) monomial factors can sneak into numerators and the
    // tropical values become upper bounds.
    std::set<std::int64_t> offsets;
    for (const Term1D& t : rec.terms)
        for (const auto& [off, e] : t.factors) offsets.insert(off);
    bool avoidance = true;
    for (std::int64_t off : offsets) {
        bool avoided = false;
        for (const Term1D& t : rec.terms) {
            bool uses = false;
            for (const auto& [o, e] : t.factors) uses = uses || (o == off);
            if (!uses) {
                avoided = true;
                break;
            }
        }
        avoidance = avoidance && avoided;
    }

    bool bilinear = !rec.terms.empty();
    for (const Term1D& t : rec.terms) {
        std::int64_t tot = 0;
        for (const auto& [off, e] : t.factors) tot += e;
        bilinear = bilinear && (tot == 2);
    }

    TropicalSequence1D out;
    std::vector<std::vector<mpz_class>> den;
    std::vector<mpz_class> num;
    den.reserve(static_cast<std::size_t>(m_max) + 1);
    num.reserve(static_cast<std::size_t>(m_max) + 1);
    for (std::int64_t m = 0; m <= m_max; ++m) {
        std::vector<mpz_class> vm(static_cast<std::size_t>(L), mpz_class(0));
        mpz_class pm = 1;
        if (m >= L) {
            std::vector<mpz_class> lcm(static_cast<std::size_t>(L), mpz_class(0));
            std::vector<mpz_class> termdeg;
            std::vector<std::vector<mpz_class>> termvec;
            termdeg.reserve(rec.terms.size());
            termvec.reserve(rec.terms.size());
            for (const Term1D& t : rec.terms) {
                std::vector<mpz_class> q(static_cast<std::size_t>(L), mpz_class(0));
                for (const auto& [off, e] : t.factors) {
                    const auto& prev = den[static_cast<std::size_t>(m - off)];
                    for (std::size_t i = 0; i < q.size(); ++i) q[i] += e * prev[i];
                }
                mpz_class qd = 0;
                for (const mpz_class& x : q) qd += x;
                for (std::size_t i = 0; i < q.size(); ++i)
                    if (q[i] > lcm[i]) lcm[i] = q[i];
                termvec.push_back(std::move(q));
                termdeg.push_back(qd);
            }
            mpz_class lcmdeg = 0;
            for (const mpz_class& x : lcm) lcmdeg += x;

            vm = lcm;
            if (m - l < L) {
                vm[static_cast<std::size_t>(m - l)] += 1;
            } else {
                const auto& prev = den[static_cast<std::size_t>(m - l)];
                for (std::size_t i = 0; i < vm.size(); ++i) {
                    vm[i] -= prev[i];
                    if (vm[i] < 0)
                        throw InvariantViolation(
                            "tropical denominator went negative at index " +
                            std::to_string(m));
                }
            }

            bool first = true;
            mpz_class best = 0;
            for (std::size_t j = 0; j < rec.terms.size(); ++j) {
                mpz_class cand = lcmdeg - termdeg[j];
                for (const auto& [off, e] : rec.terms[j].factors)
                    cand += e * num[static_cast<std::size_t>(m - off)];
                if (first || cand > best) {
                    best = cand;
                    first = false;
                }
            }
            if (m - l >= L) best -= num[static_cast<std::size_t>(m - l)];
            if (best < 0)
                throw InvariantViolation("tropical numerator went negative at index " +
                                         std::to_string(m));
            pm = best;
        }
        mpz_class dd = 0;
        for (const mpz_class& x : vm) dd += x;
        out.denom_degrees.push_back(dd);
        out.numer_degrees.push_back(pm);
        if (bilinear)
            out.total_degrees.push_back(dd + 1);
        else
            out.total_degrees.push_back(pm > dd ? pm : dd);
        if (per_variable) out.per_variable.push_back(vm);
        den.push_back(std::move(vm));
        num.push_back(std::move(pm));
    }

    const std::int64_t prefix = std::min(m_max, 2 * L);
    Sequence1D sym = iterate_1d(rec, prefix);
    out.prefix_checked = prefix;
    bool prefix_ok = !sym.failure_index.has_value();
    for (std::int64_t m = 0; prefix_ok && m <= prefix; ++m)
        prefix_ok = (out.total_degrees[static_cast<std::size_t>(m)] ==
                     sym.degrees[static_cast<std::size_t>(m)]);
    out.exact = positive && avoidance && prefix_ok;
    return out;
}

std::int64_t lattice_point_count(const ReductionMap& phi,
                                 const ShiftSystem& shape, std::int64_t m0,
                                 std::int64_t m) {
    auto cls = classify_shape(shape);
    if (!cls)
        throw ShapeMismatch("lattice point counts are defined for the classical rank-3 shapes");
    if (phi.rows() != 1 || phi.cols() != 3)
        throw std::invalid_argument("the covector must map rank-3 points to integers");
    for (const Point& sh : shape.all_shifts())
        if (phi.apply(sh)[0] >= 0)
            throw InvalidReduction("covector does not separate the shifts");
    const std::int64_t l = -phi.apply(shape.w)[0];
    if (m0 < 0 || m0 >= l) throw DomainError("residue class out of range");

    // Sites h0 <= h + w of residue m0 are h + w + delta with delta in the
    // shape's monoid and phi(delta) = m0 - (m - l); since every generator has
    // covector value <= -1 and coordinates >= -1, delta lives in [t, 0]^3.
    const std::int64_t t = m0 - m + l;
    if (t > 0) return 0;
    const std::int64_t c1 = phi.m[0][0], c2 = phi.m[0][1], c3 = phi.m[0][2];
    const bool hm = (*cls == ClassicalShape::Hirota);
    std::int64_t count = 0;
    auto in_monoid = [hm](std::int64_t d1, std::int64_t d2, std::int64_t d3) {
        return !hm || d1 + d2 <= d3;  // nonpositivity is checked by the caller
    };
    for (std::int64_t d1 = t; d1 <= 0; ++d1)
        for (std::int64_t d2 = t; d2 <= 0; ++d2) {
            std::int64_t rhs = t - c1 * d1 - c2 * d2;
            if (c3 != 0) {
                if (rhs % c3 != 0) continue;
                std::int64_t d3 = rhs / c3;
                if (d3 < t || d3 > 0) continue;
                if (in_monoid(d1, d2, d3)) ++count;
            } else {
                if (rhs != 0) continue;
                for (std::int64_t d3 = t; d3 <= 0; ++d3)
                    if (in_monoid(d1, d2, d3)) ++count;
            }
        }
    return count;
}

}  // namespace laurel
