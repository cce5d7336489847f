#include "laurel/poly.hpp"

#include <algorithm>
#include <cassert>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace laurel {

ExponentVec ExponentVec::variable(VarId v, std::int64_t e) {
    ExponentVec ev;
    if (e != 0) ev.entries_.emplace_back(v, e);
    return ev;
}

ExponentVec ExponentVec::from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& x, const Entry& y) { return x.first < y.first; });
    ExponentVec ev;
    for (const Entry& en : entries) {
        if (!ev.entries_.empty() && ev.entries_.back().first == en.first)
            throw std::invalid_argument("duplicate variable in exponent vector");
        if (en.second != 0) ev.entries_.push_back(en);
    }
    return ev;
}

std::int64_t ExponentVec::exponent_of(VarId v) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const Entry& e, VarId id) { return e.first < id; });
    return (it != entries_.end() && it->first == v) ? it->second : 0;
}

std::int64_t ExponentVec::total_degree() const {
    std::int64_t d = 0;
    for (const Entry& e : entries_) d += e.second;
    return d;
}

bool ExponentVec::nonnegative() const {
    for (const Entry& e : entries_)
        if (e.second < 0) return false;
    return true;
}

namespace {

// Merge walk over two sorted entry lists; f receives (exp_a, exp_b) with 0
// for a missing variable and returns the combined exponent (0 = drop).
template <typename F>
ExponentVec merge_entries(const ExponentVec& a, const ExponentVec& b, F f) {
    std::vector<ExponentVec::Entry> out;
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        VarId v;
        std::int64_t xa = 0, xb = 0;
        if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
            v = ea[i].first;
            xa = ea[i].second;
            ++i;
        } else if (i == ea.size() || eb[j].first < ea[i].first) {
            v = eb[j].first;
            xb = eb[j].second;
            ++j;
        } else {
            v = ea[i].first;
            xa = ea[i].second;
            xb = eb[j].second;
            ++i;
            ++j;
        }
        std::int64_t r = f(xa, xb);
        if (r != 0) out.emplace_back(v, r);
    }
    ExponentVec ev;
    ev = ExponentVec::from_entries(std::move(out));
    return ev;
}

}  // namespace

ExponentVec ExponentVec::operator+(const ExponentVec& rhs) const {
    return merge_entries(*this, rhs, [](std::int64_t x, std::int64_t y) { return x + y; });
}

ExponentVec ExponentVec::operator-(const ExponentVec& rhs) const {
    return merge_entries(*this, rhs, [](std::int64_t x, std::int64_t y) { return x - y; });
}

ExponentVec ExponentVec::negated() const {
    ExponentVec ev(*this);
    for (Entry& e : ev.entries_) e.second = -e.second;
    return ev;
}

ExponentVec ExponentVec::max(const ExponentVec& a, const ExponentVec& b) {
    return merge_entries(a, b, [](std::int64_t x, std::int64_t y) { return std::max(x, y); });
}

ExponentVec ExponentVec::min(const ExponentVec& a, const ExponentVec& b) {
    return merge_entries(a, b, [](std::int64_t x, std::int64_t y) { return std::min(x, y); });
}

bool GrlexLess::operator()(const ExponentVec& a, const ExponentVec& b) const {
    std::int64_t da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        std::int64_t xa = 0, xb = 0;
        if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
            xa = ea[i].second;
            ++i;
        } else if (i == ea.size() || eb[j].first < ea[i].first) {
            xb = eb[j].second;
            ++j;
        } else {
            xa = ea[i].second;
            xb = eb[j].second;
            ++i;
            ++j;
        }
        if (xa != xb) return xa < xb;
    }
    return false;
}

LaurentPoly LaurentPoly::constant(const Rational& c) {
    LaurentPoly p;
    p.insert_term(ExponentVec(), c);
    return p;
}

LaurentPoly LaurentPoly::variable(VarId v, std::int64_t e) {
    LaurentPoly p;
    p.insert_term(ExponentVec::variable(v, e), Rational(1));
    return p;
}

LaurentPoly LaurentPoly::monomial(const Rational& c, const ExponentVec& e) {
    LaurentPoly p;
    p.insert_term(e, c);
    return p;
}

bool LaurentPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

const std::pair<const ExponentVec, Rational>& LaurentPoly::leading() const {
    assert(!terms_.empty());
    return *terms_.rbegin();
}

std::int64_t LaurentPoly::total_degree() const {
    std::int64_t d = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        std::int64_t t = e.total_degree();
        if (first || t > d) d = t;
        first = false;
    }
    return d;
}

ExponentVec LaurentPoly::monomial_content() const {
    ExponentVec mc;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        mc = first ? e : ExponentVec::min(mc, e);
        first = false;
    }
    return mc;
}

std::optional<Rational> LaurentPoly::coefficient(const ExponentVec& e) const {
    auto it = terms_.find(e);
    if (it == terms_.end()) return std::nullopt;
    return it->second;
}

void LaurentPoly::insert_term(const ExponentVec& e, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& rhs) const {
    LaurentPoly out(*this);
    out += rhs;
    return out;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& rhs) const {
    LaurentPoly out(*this);
    out -= rhs;
    return out;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
    for (const auto& [e, c] : rhs.terms_) insert_term(e, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) {
    for (const auto& [e, c] : rhs.terms_) insert_term(e, -c);
    return *this;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& rhs) const {
    LaurentPoly out;
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : rhs.terms_) out.insert_term(ea + eb, ca * cb);
    return out;
}

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
    if (c == 0) return LaurentPoly();
    LaurentPoly out;
    for (const auto& [e, k] : terms_) out.terms_.emplace(e, k * c);
    return out;
}

LaurentPoly LaurentPoly::shifted(const ExponentVec& m) const {
    if (m.empty()) return *this;
    LaurentPoly out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e + m, c);
    return out;
}

Rational LaurentPoly::evaluate(const std::map<VarId, Rational>& assignment) const {
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (const auto& [v, exp] : e.entries()) {
            auto it = assignment.find(v);
            if (it == assignment.end())
                throw std::invalid_argument("evaluate: unassigned variable");
            t *= rational_pow(it->second, exp);
        }
        acc += t;
    }
    return acc;
}

LaurentPoly LaurentPoly::rename_variables(const std::map<VarId, VarId>& images) const {
    LaurentPoly out;
    for (const auto& [e, c] : terms_) {
        std::map<VarId, std::int64_t> folded;
        for (const auto& [v, exp] : e.entries()) {
            auto it = images.find(v);
            folded[it == images.end() ? v : it->second] += exp;
        }
        std::vector<ExponentVec::Entry> entries(folded.begin(), folded.end());
        out.insert_term(ExponentVec::from_entries(std::move(entries)), c);
    }
    return out;
}

std::vector<Rational> LaurentPoly::specialize_to_univariate(
    VarId keep, const std::map<VarId, Rational>& assignment) const {
    std::map<std::int64_t, Rational> by_exp;
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        std::int64_t pow = 0;
        for (const auto& [v, exp] : e.entries()) {
            if (v == keep) {
                pow = exp;
                continue;
            }
            auto it = assignment.find(v);
            if (it == assignment.end())
                throw std::invalid_argument("specialize: unassigned variable");
            t *= rational_pow(it->second, exp);
        }
        auto [it, fresh] = by_exp.emplace(pow, t);
        if (!fresh) it->second += t;
    }
    for (auto it = by_exp.begin(); it != by_exp.end();)
        it = (it->second == 0) ? by_exp.erase(it) : std::next(it);
    if (by_exp.empty()) return {};
    std::int64_t lo = by_exp.begin()->first, hi = by_exp.rbegin()->first;
    std::vector<Rational> dense(static_cast<std::size_t>(hi - lo + 1), Rational(0));
    for (const auto& [p, c] : by_exp) dense[static_cast<std::size_t>(p - lo)] = c;
    return dense;
}

std::vector<VarId> LaurentPoly::variables() const {
    std::vector<VarId> vars;
    for (const auto& [e, c] : terms_)
        for (const auto& [v, exp] : e.entries()) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

std::string LaurentPoly::to_string(const std::function<std::string(VarId)>& namer) const {
    if (terms_.empty()) return "0";
    auto name = [&namer](VarId v) {
        return namer ? namer(v) : ("x" + std::to_string(v));
    };
    std::ostringstream os;
    bool first = true;
    // Descending grlex reads most natural: leading term first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        Rational c = it->second;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        const auto& ev = it->first;
        if (ev.empty() || c != 1) {
            os << rational_to_string(c);
            if (!ev.empty()) os << "*";
        }
        bool firstvar = true;
        for (const auto& [v, exp] : ev.entries()) {
            if (!firstvar) os << "*";
            firstvar = false;
            os << name(v);
            if (exp != 1) os << "^" << exp;
        }
    }
    return os.str();
}

std::optional<LaurentPoly> try_exact_div(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw std::invalid_argument("exact division by zero");
    if (a.is_zero()) return LaurentPoly();

    // Shift both operands to nonnegative exponents: a = X^ca * A, b = X^cb * B
    // with A, B content-free, so a/b = X^(ca-cb) * (A/B) and A/B, when it
    // exists, is an ordinary polynomial quotient found by grlex leading-term
    // elimination.
    ExponentVec ca = a.monomial_content(), cb = b.monomial_content();
    LaurentPoly rem = a.shifted(ca.negated());
    LaurentPoly den = b.shifted(cb.negated());
    const auto& [lt_e, lt_c] = den.leading();

    LaurentPoly quot;
    while (!rem.is_zero()) {
        const auto& [re, rc] = rem.leading();
        ExponentVec t = re - lt_e;
        if (!t.nonnegative()) return std::nullopt;
        Rational c = rc / lt_c;
        quot += LaurentPoly::monomial(c, t);
        rem -= den.shifted(t).scaled(c);
    }
    return quot.shifted(ca - cb);
}

std::int64_t Fraction::degree() const {
    // Written as a quotient of honest polynomials A/B: positive entries of
    // den form B, negated negative entries multiply into A.
    std::int64_t pos = 0, neg = 0;
    for (const auto& [v, e] : den.entries()) (e > 0 ? pos : neg) += (e > 0 ? e : -e);
    return std::max(num.total_degree() + neg, pos);
}

Fraction make_fraction(const LaurentPoly& numer, const LaurentPoly& denom) {
    if (denom.is_zero()) throw std::invalid_argument("fraction with zero denominator");
    if (!denom.is_monomial())
        throw NotMonomialDenominator("fraction denominator is not a single term");
    const auto& [de, dc] = denom.leading();
    Fraction f;
    if (numer.is_zero()) return f;
    LaurentPoly n = numer.scaled(Rational(1) / dc);
    ExponentVec mc = n.monomial_content();
    f.num = n.shifted(mc.negated());
    f.den = de - mc;
    return f;
}

Fraction fraction_from_poly(const LaurentPoly& p) {
    return make_fraction(p, LaurentPoly::constant(Rational(1)));
}

Fraction fraction_mul(const Fraction& a, const Fraction& b) {
    // Monomial content is multiplicative, so the product numerator is already
    // content-free.
    Fraction f;
    f.num = a.num * b.num;
    if (f.num.is_zero()) return f;
    f.den = a.den + b.den;
    assert(f.num.monomial_content().empty());
    return f;
}

Fraction fraction_scaled(const Fraction& a, const Rational& c) {
    Fraction f;
    if (c == 0) return f;
    f.num = a.num.scaled(c);
    f.den = a.den;
    return f;
}

namespace {

// Dense univariate polynomials over Q, used only inside the gcd probe.
using UniPoly = std::vector<Rational>;

void uni_trim(UniPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

UniPoly uni_rem(UniPoly a, const UniPoly& b) {
    assert(!b.empty());
    while (a.size() >= b.size()) {
        Rational q = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= q * b[i];
        a.pop_back();
        uni_trim(a);
    }
    return a;
}

UniPoly uni_gcd(UniPoly a, UniPoly b) {
    uni_trim(a);
    uni_trim(b);
    while (!b.empty()) {
        UniPoly r = uni_rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
        // Monic normalization keeps coefficient growth in check.
        if (!b.empty()) {
            Rational lead = b.back();
            for (Rational& c : b) c /= lead;
        }
    }
    return a;
}

}  // namespace

CoprimeResult coprime_probable(const LaurentPoly& a, const LaurentPoly& b,
                               int trials, Rng& rng) {
    if (a.is_zero() || b.is_zero())
        throw std::invalid_argument("coprimality probe of the zero polynomial");

    // Units (monomials) share no nontrivial factor with anything.
    LaurentPoly A = a.shifted(a.monomial_content().negated());
    LaurentPoly B = b.shifted(b.monomial_content().negated());
    CoprimeResult res;
    if (A.is_constant() || B.is_constant()) return res;

    std::vector<VarId> va = A.variables(), vb = B.variables();
    std::vector<VarId> shared;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(),
                          std::back_inserter(shared));
    if (shared.empty()) return res;  // disjoint variables: only constant factors

    std::vector<VarId> all;
    std::set_union(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(all));

    for (int t = 0; t < trials; ++t) {
        VarId keep = shared[static_cast<std::size_t>(
            rng.uniform(0, static_cast<std::int64_t>(shared.size()) - 1))];
        std::map<VarId, Rational> point;
        for (VarId v : all)
            if (v != keep) point.emplace(v, Rational(rng.uniform(2, 1000000)));
        UniPoly ua = A.specialize_to_univariate(keep, point);
        UniPoly ub = B.specialize_to_univariate(keep, point);
        if (ua.empty() || ub.empty()) continue;  // degenerate point, retry
        UniPoly g = uni_gcd(std::move(ua), std::move(ub));
        if (g.size() >= 2) {
            res.likely_coprime = false;
            res.witness_point = std::move(point);
            res.confirmed_common_factor =
                try_exact_div(a, b).has_value() || try_exact_div(b, a).has_value();
            return res;
        }
    }
    return res;
}

}  // namespace laurel
