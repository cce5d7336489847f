#include "laurel/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace laurel {

namespace {

void check_dim(const Point& p, int rank, const char* what) {
    if (static_cast<int>(p.size()) != rank)
        throw std::invalid_argument(std::string(what) + ": wrong dimension");
}

bool is_zero_point(const Point& p) {
    return std::all_of(p.begin(), p.end(), [](std::int64_t x) { return x == 0; });
}

}  // namespace

Point point_add(const Point& a, const Point& b) {
    assert(a.size() == b.size());
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Point point_sub(const Point& a, const Point& b) {
    assert(a.size() == b.size());
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Point point_neg(const Point& a) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

std::int64_t dot(const Point& c, const Point& h) {
    assert(c.size() == h.size());
    std::int64_t s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * h[i];
    return s;
}

std::string point_to_string(const Point& p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << ",";
        os << p[i];
    }
    os << ")";
    return os.str();
}

std::vector<Point> ShiftSystem::all_shifts() const {
    std::vector<Point> out;
    for (const auto& [v, u] : terms) {
        out.push_back(v);
        out.push_back(u);
    }
    out.push_back(w);
    return out;
}

void validate_shift_system(const ShiftSystem& s) {
    if (s.rank <= 0) throw std::invalid_argument("shift system: rank must be positive");
    if (s.terms.empty()) throw std::invalid_argument("shift system: no terms");
    check_dim(s.w, s.rank, "shift w");
    if (is_zero_point(s.w)) throw std::invalid_argument("shift system: w is zero");
    for (const auto& [v, u] : s.terms) {
        check_dim(v, s.rank, "shift v");
        check_dim(u, s.rank, "shift u");
        if (is_zero_point(v) || is_zero_point(u))
            throw std::invalid_argument("shift system: zero shift in a term");
        if (point_add(v, u) != s.w)
            throw std::invalid_argument("shift system: v_i + u_i != w");
    }
    // Shifts of distinct terms must be distinct (v_i == u_i inside one term
    // is a legal squared factor).
    for (std::size_t i = 0; i < s.terms.size(); ++i)
        for (std::size_t j = i + 1; j < s.terms.size(); ++j) {
            const auto& [vi, ui] = s.terms[i];
            const auto& [vj, uj] = s.terms[j];
            if (vi == vj || vi == uj || ui == vj || ui == uj)
                throw std::invalid_argument(
                    "shift system: shift repeated across distinct terms");
        }

    // The shifts must generate Z^rank: the Smith form of the shift matrix
    // has to be all ones.
    IntMat m(static_cast<std::size_t>(s.rank));
    for (auto& row : m) row.clear();
    for (const Point& sh : s.all_shifts())
        for (int i = 0; i < s.rank; ++i)
            m[static_cast<std::size_t>(i)].push_back(Integer(sh[static_cast<std::size_t>(i)]));
    SmithForm sf = smith_normal_form(m);
    bool generates = static_cast<int>(sf.diag.size()) >= s.rank;
    if (generates)
        for (int i = 0; i < s.rank; ++i) {
            Integer d = sf.diag[static_cast<std::size_t>(i)];
            if (d != 1 && d != -1) generates = false;
        }
    if (!generates)
        throw std::invalid_argument("shift system: shifts do not generate the lattice");
}

DomainCertificate validate_domain(const GoodDomain& d, const ShiftSystem& s) {
    if (d.halfspaces.empty())
        throw std::invalid_argument("domain: at least one halfspace required");
    check_dim(d.grading, s.rank, "grading");
    std::vector<Point> normals;
    for (const Halfspace& hs : d.halfspaces) {
        check_dim(hs.c, s.rank, "halfspace normal");
        if (is_zero_point(hs.c))
            throw std::invalid_argument("domain: zero halfspace normal");
        for (const Point& sh : s.all_shifts())
            if (dot(hs.c, sh) > 0)
                throw std::invalid_argument(
                    "domain: halfspace " + point_to_string(hs.c) +
                    " is not closed under shift " + point_to_string(sh));
        normals.push_back(hs.c);
    }
    for (const auto& [v, u] : s.terms) {
        if (dot(d.grading, v) > -1)
            throw std::invalid_argument("domain: grading does not decrease along " +
                                        point_to_string(v));
        if (dot(d.grading, u) > -1)
            throw std::invalid_argument("domain: grading does not decrease along " +
                                        point_to_string(u));
    }
    auto coeffs = in_rational_cone(normals, d.grading);
    if (!coeffs)
        throw std::invalid_argument(
            "domain: grading is not a nonnegative combination of the halfspace "
            "normals");
    DomainCertificate cert;
    cert.cone_coeffs = *coeffs;
    cert.grading_bound = 0;
    for (std::size_t j = 0; j < d.halfspaces.size(); ++j)
        cert.grading_bound += cert.cone_coeffs[j] * Rational(d.halfspaces[j].b);
    return cert;
}

bool domain_contains(const GoodDomain& d, const Point& h) {
    for (const Halfspace& hs : d.halfspaces)
        if (dot(hs.c, h) < hs.b) return false;
    return true;
}

bool in_initial_set(const GoodDomain& d, const ShiftSystem& s, const Point& h) {
    return domain_contains(d, h) && !domain_contains(d, point_add(h, s.w));
}

std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a,
                                                 std::vector<Rational> b) {
    std::size_t m = a.size();
    std::size_t n = m ? a[0].size() : 0;
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < m; ++col) {
        std::size_t piv = rank;
        while (piv < m && a[piv][col] == 0) ++piv;
        if (piv == m) continue;
        std::swap(a[piv], a[rank]);
        std::swap(b[piv], b[rank]);
        for (std::size_t i = rank + 1; i < m; ++i) {
            if (a[i][col] == 0) continue;
            Rational f = a[i][col] / a[rank][col];
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[rank][j];
            b[i] -= f * b[rank];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t i = rank; i < m; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t i = rank; i-- > 0;) {
        std::size_t col = pivot_col[i];
        Rational acc = b[i];
        for (std::size_t j = col + 1; j < n; ++j) acc -= a[i][j] * x[j];
        x[col] = acc / a[i][col];
    }
    return x;
}

std::optional<std::vector<Rational>> in_rational_cone(const std::vector<Point>& gens,
                                                      const Point& target) {
    std::size_t n = gens.size();
    if (is_zero_point(target)) return std::vector<Rational>(n, Rational(0));
    if (n == 0) return std::nullopt;
    std::size_t dim = target.size();
    std::size_t max_size = std::min(dim, n);
    // Caratheodory: a cone member is a nonnegative combination of some
    // linearly independent subset, of size at most the dimension.
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        std::size_t size = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (size > max_size) continue;
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < n; ++j)
            if (mask & (std::uint64_t(1) << j)) idx.push_back(j);
        std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(size));
        std::vector<Rational> b(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            b[i] = Rational(target[i]);
            for (std::size_t j = 0; j < size; ++j)
                a[i][j] = Rational(gens[idx[j]][i]);
        }
        auto sol = solve_exact(std::move(a), std::move(b));
        if (!sol) continue;
        bool nonneg = std::all_of(sol->begin(), sol->end(),
                                  [](const Rational& r) { return r >= 0; });
        if (!nonneg) continue;
        std::vector<Rational> full(n, Rational(0));
        for (std::size_t j = 0; j < size; ++j) full[idx[j]] = (*sol)[j];
        return full;
    }
    return std::nullopt;
}

bool semiorder_leq(const ShiftSystem& s, const Point& grading, const Point& lo,
                   const Point& hi) {
    Point delta = point_sub(lo, hi);
    if (is_zero_point(delta)) return true;
    std::vector<Point> gens;
    for (const auto& [v, u] : s.terms) {
        gens.push_back(v);
        gens.push_back(u);
    }
    // delta must be a sum of generators; every partial remainder is itself
    // such a sum, so its grading is strictly negative until it hits zero.
    std::set<Point> seen;
    std::deque<Point> todo{delta};
    seen.insert(delta);
    while (!todo.empty()) {
        Point p = std::move(todo.front());
        todo.pop_front();
        for (const Point& g : gens) {
            Point q = point_sub(p, g);
            if (is_zero_point(q)) return true;
            if (dot(grading, q) >= 0) continue;
            if (seen.insert(q).second) todo.push_back(q);
        }
    }
    return false;
}

std::vector<Point> initial_points_below(const GoodDomain& d, const ShiftSystem& s,
                                        const Point& top) {
    std::vector<Point> out;
    if (!domain_contains(d, top)) return out;
    std::vector<Point> gens;
    for (const auto& [v, u] : s.terms) {
        gens.push_back(v);
        gens.push_back(u);
    }
    // Walking down by shifts never leaves the domain ahead of the target,
    // so pruning at the boundary is lossless; the grading certificate makes
    // the walk finite.
    std::set<Point> seen{top};
    std::deque<Point> todo{top};
    while (!todo.empty()) {
        Point p = std::move(todo.front());
        todo.pop_front();
        if (in_initial_set(d, s, p)) out.push_back(p);
        for (const Point& g : gens) {
            Point q = point_add(p, g);
            if (!domain_contains(d, q)) continue;
            if (seen.insert(q).second) todo.push_back(q);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool box_contains(const Box& b, const Point& p) {
    assert(b.lo.size() == p.size() && b.hi.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] < b.lo[i] || p[i] > b.hi[i]) return false;
    return true;
}

std::vector<Point> box_points(const Box& b) {
    std::vector<Point> out;
    std::size_t dim = b.lo.size();
    for (std::size_t i = 0; i < dim; ++i)
        if (b.lo[i] > b.hi[i]) return out;
    Point cur = b.lo;
    while (true) {
        out.push_back(cur);
        std::size_t i = dim;
        while (i-- > 0) {
            if (cur[i] < b.hi[i]) {
                ++cur[i];
                break;
            }
            cur[i] = b.lo[i];
            if (i == 0) return out;
        }
        if (dim == 0) return out;
    }
}

Box box_expand(const Box& b, const std::vector<Point>& offsets) {
    Box out = b;
    for (const Point& o : offsets)
        for (std::size_t i = 0; i < out.lo.size(); ++i) {
            out.lo[i] = std::min(out.lo[i], b.lo[i] + o[i]);
            out.hi[i] = std::max(out.hi[i], b.hi[i] + o[i]);
        }
    return out;
}

IntMat int_identity(std::size_t n) {
    IntMat m(n, std::vector<Integer>(n, Integer(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IntMat int_mat_mul(const IntMat& a, const IntMat& b) {
    std::size_t m = a.size(), k = b.size(), n = k ? b[0].size() : 0;
    IntMat out(m, std::vector<Integer>(n, Integer(0)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][l] * b[l][j];
        }
    return out;
}

std::vector<Integer> int_mat_vec(const IntMat& a, const std::vector<Integer>& x) {
    std::vector<Integer> out(a.size(), Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) out[i] += a[i][j] * x[j];
    return out;
}

namespace {

// In-place elementary operations mirrored on the transform matrices.
void row_swap(IntMat& a, IntMat& u, std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(u[i], u[j]);
}

void col_swap(IntMat& a, IntMat& v, std::size_t i, std::size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
    for (auto& row : v) std::swap(row[i], row[j]);
}

void row_addmul(IntMat& a, IntMat& u, std::size_t dst, std::size_t src, const Integer& q) {
    for (std::size_t j = 0; j < a[dst].size(); ++j) a[dst][j] -= q * a[src][j];
    for (std::size_t j = 0; j < u[dst].size(); ++j) u[dst][j] -= q * u[src][j];
}

void col_addmul(IntMat& a, IntMat& v, std::size_t dst, std::size_t src, const Integer& q) {
    for (auto& row : a) row[dst] -= q * row[src];
    for (auto& row : v) row[dst] -= q * row[src];
}

void row_negate(IntMat& a, IntMat& u, std::size_t i) {
    for (auto& x : a[i]) x = -x;
    for (auto& x : u[i]) x = -x;
}

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

SmithForm smith_normal_form(IntMat a) {
    std::size_t m = a.size();
    std::size_t n = m ? a[0].size() : 0;
    SmithForm sf;
    sf.u = int_identity(m);
    sf.v = int_identity(n);
    std::size_t k = std::min(m, n);

    for (std::size_t t = 0; t < k; ++t) {
        while (true) {
            // Pick the nonzero entry of least magnitude in the trailing block.
            std::size_t pi = m, pj = n;
            Integer best;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    if (a[i][j] == 0) continue;
                    Integer mag = abs(a[i][j]);
                    if (pi == m || mag < best) {
                        best = mag;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi == m) {
                // Trailing block vanished; remaining invariant factors are 0.
                for (std::size_t r = t; r < k; ++r) sf.diag.push_back(Integer(0));
                return sf;
            }
            if (pi != t) row_swap(a, sf.u, t, pi);
            if (pj != t) col_swap(a, sf.v, t, pj);

            bool again = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a[i][t] == 0) continue;
                row_addmul(a, sf.u, i, t, floor_div(a[i][t], a[t][t]));
                if (a[i][t] != 0) again = true;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a[t][j] == 0) continue;
                col_addmul(a, sf.v, j, t, floor_div(a[t][j], a[t][t]));
                if (a[t][j] != 0) again = true;
            }
            if (again) continue;  // smaller residues exist; re-pick the pivot

            // Enforce the divisibility chain: the pivot must divide every
            // trailing entry, else pull an offending row in and restart.
            bool divides_all = true;
            for (std::size_t i = t + 1; i < m && divides_all; ++i)
                for (std::size_t j = t + 1; j < n && divides_all; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        row_addmul(a, sf.u, t, i, Integer(-1));  // row_t += row_i
                        divides_all = false;
                    }
            if (divides_all) break;
        }
        if (a[t][t] < 0) row_negate(a, sf.u, t);
        sf.diag.push_back(a[t][t]);
    }
    return sf;
}

}  // namespace laurel
