#include "laurel/specfile.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace laurel {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) { throw SpecError(what); }

std::int64_t get_int(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where + ": expected an integer");
    return j.get<std::int64_t>();
}

Point get_point(const Json& j, std::size_t rank, const std::string& where) {
    if (!j.is_array() || j.size() != rank)
        fail(where + ": expected an array of " + std::to_string(rank) + " integers");
    Point p;
    p.reserve(rank);
    for (const Json& e : j) p.push_back(get_int(e, where));
    return p;
}

Rational get_rational(const Json& j, const std::string& where) {
    if (!j.is_string()) fail(where + ": rationals are \"p/q\" strings");
    auto r = parse_rational(j.get<std::string>());
    if (!r) fail(where + ": cannot parse rational '" + j.get<std::string>() + "'");
    return *r;
}

const Json& need(const Json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where + ": missing key '" + key + "'");
    return *it;
}

CoefficientField get_coeff(const Json& j, std::size_t rank, const std::string& where) {
    if (!j.is_object()) fail(where + ": expected a coefficient object");
    const Json& kj = need(j, "kind", where);
    if (!kj.is_string()) fail(where + ": 'kind' must be a string");
    std::string kind = kj.get<std::string>();
    try {
        if (kind == "constant")
            return CoefficientField::constant(get_rational(need(j, "value", where), where));
        if (kind == "geometric") {
            const Json& base = need(j, "base", where);
            if (!base.is_array() || base.size() != rank)
                fail(where + ": geometric base needs one entry per axis");
            std::vector<Rational> b;
            for (const Json& e : base) b.push_back(get_rational(e, where));
            return CoefficientField::geometric(
                get_rational(need(j, "value", where), where), std::move(b));
        }
        if (kind == "table") {
            const Json& win = need(j, "window", where);
            Box box{get_point(need(win, "lo", where), rank, where),
                    get_point(need(win, "hi", where), rank, where)};
            const Json& values = need(j, "values", where);
            if (!values.is_array()) fail(where + ": table values must be an array");
            std::vector<Rational> v;
            for (const Json& e : values) v.push_back(get_rational(e, where));
            return CoefficientField::table(box, std::move(v));
        }
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        fail(where + ": " + e.what());
    }
    fail(where + ": unknown coefficient kind '" + kind + "'");
}

Json coeff_to_json(const CoefficientField& c) {
    Json j;
    switch (c.kind()) {
        case CoefficientField::Kind::Constant:
            j["kind"] = "constant";
            j["value"] = rational_to_string(c.scale());
            break;
        case CoefficientField::Kind::Geometric: {
            j["kind"] = "geometric";
            j["value"] = rational_to_string(c.scale());
            Json base = Json::array();
            for (const Rational& b : c.base()) base.push_back(rational_to_string(b));
            j["base"] = std::move(base);
            break;
        }
        case CoefficientField::Kind::Table: {
            j["kind"] = "table";
            j["window"] = Json{{"lo", c.window().lo}, {"hi", c.window().hi}};
            Json values = Json::array();
            for (const Rational& v : c.values()) values.push_back(rational_to_string(v));
            j["values"] = std::move(values);
            break;
        }
    }
    return j;
}

void parse_lattice_terms(const Json& terms, std::size_t rank, Equation& eq) {
    std::size_t ti = 0;
    for (const Json& t : terms) {
        std::string where = "terms[" + std::to_string(ti++) + "]";
        if (!t.is_object()) fail(where + ": expected an object");
        if (t.contains("factors"))
            fail(where + ": cannot mix lattice terms (v/u) with recurrence terms (factors)");
        Point v = get_point(need(t, "v", where), rank, where + ".v");
        Point u = get_point(need(t, "u", where), rank, where + ".u");
        eq.shifts.terms.emplace_back(std::move(v), std::move(u));
        eq.coeffs.push_back(get_coeff(need(t, "coeff", where), rank, where + ".coeff"));
    }
}

Recurrence1D parse_recurrence_terms(const Json& terms, const Json& doc) {
    Recurrence1D rec;
    std::size_t ti = 0;
    for (const Json& t : terms) {
        std::string where = "terms[" + std::to_string(ti++) + "]";
        if (!t.is_object()) fail(where + ": expected an object");
        if (t.contains("v") || t.contains("u"))
            fail(where + ": cannot mix recurrence terms (factors) with lattice terms (v/u)");
        const Json& factors = need(t, "factors", where);
        if (!factors.is_array()) fail(where + ".factors: expected an array");
        Term1D term{get_coeff(need(t, "coeff", where), 1, where + ".coeff"), {}};
        std::size_t fi = 0;
        for (const Json& f : factors) {
            std::string fw = where + ".factors[" + std::to_string(fi++) + "]";
            if (!f.is_object()) fail(fw + ": expected an object");
            term.factors.emplace_back(get_int(need(f, "offset", fw), fw + ".offset"),
                                      get_int(need(f, "exp", fw), fw + ".exp"));
        }
        rec.terms.push_back(std::move(term));
    }
    Point w = get_point(need(doc, "w", "w"), 1, "w");
    if (w[0] >= 0) fail("w: recurrence divisor shift must be negative");
    rec.denom_offset = -w[0];
    for (const char* key : {"domain", "reduction", "gauge"})
        if (doc.contains(key))
            fail(std::string(key) + ": not meaningful for a recurrence-style document");
    return rec;
}

Json term1d_to_json(const Term1D& t) {
    Json factors = Json::array();
    for (const auto& [offset, exp] : t.factors)
        factors.push_back(Json{{"offset", offset}, {"exp", exp}});
    Json j;
    j["factors"] = std::move(factors);
    j["coeff"] = coeff_to_json(t.coeff);
    return j;
}

}  // namespace

SpecFile parse_spec(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("top level must be an object");

    SpecFile out;
    std::int64_t rank_i = get_int(need(doc, "rank", "rank"), "rank");
    if (rank_i < 1 || rank_i > 16) fail("rank out of range");
    std::size_t rank = static_cast<std::size_t>(rank_i);

    const Json& terms = need(doc, "terms", "terms");
    if (!terms.is_array() || terms.empty()) fail("terms: expected a nonempty array");

    bool recurrence_style = terms.front().is_object() && terms.front().contains("factors");
    if (recurrence_style) {
        if (rank_i != 1) fail("recurrence-style terms require rank 1");
        Recurrence1D rec = parse_recurrence_terms(terms, doc);
        try {
            validate_recurrence(rec);
        } catch (const std::exception& e) {
            fail(std::string("invalid recurrence: ") + e.what());
        }
        out.recurrence = std::move(rec);
    } else {
        Equation eq;
        eq.shifts.rank = static_cast<int>(rank_i);
        parse_lattice_terms(terms, rank, eq);
        eq.shifts.w = get_point(need(doc, "w", "w"), rank, "w");
        for (std::size_t j = 0; j < eq.shifts.terms.size(); ++j) {
            const auto& [v, u] = eq.shifts.terms[j];
            if (point_add(v, u) != eq.shifts.w)
                fail("terms[" + std::to_string(j) + "]: v + u != w");
        }

        const Json& domain = need(doc, "domain", "domain");
        const Json& halfspaces = need(domain, "halfspaces", "domain.halfspaces");
        if (!halfspaces.is_array() || halfspaces.empty())
            fail("domain.halfspaces: expected a nonempty array");
        std::size_t hi = 0;
        for (const Json& h : halfspaces) {
            std::string where = "domain.halfspaces[" + std::to_string(hi++) + "]";
            if (!h.is_object()) fail(where + ": expected an object");
            Halfspace hs;
            hs.c = get_point(need(h, "c", where), rank, where + ".c");
            hs.b = get_int(need(h, "b", where), where + ".b");
            eq.domain.halfspaces.push_back(std::move(hs));
        }
        eq.domain.grading =
            get_point(need(domain, "grading", "domain.grading"), rank, "domain.grading");

        if (auto it = doc.find("reduction"); it != doc.end()) {
            const Json& matrix = need(*it, "matrix", "reduction.matrix");
            if (!matrix.is_array() || matrix.empty())
                fail("reduction.matrix: expected a nonempty array of rows");
            ReductionMap map;
            for (const Json& row : matrix)
                map.m.push_back(get_point(row, rank, "reduction.matrix row"));
            out.reduction = std::move(map);
        }
        if (auto it = doc.find("gauge"); it != doc.end()) {
            const Json& target = need(*it, "target", "gauge.target");
            if (!target.is_array() || target.size() != eq.coeffs.size())
                fail("gauge.target: expected one rational per term");
            std::vector<Rational> tv;
            for (const Json& e : target) tv.push_back(get_rational(e, "gauge.target"));
            out.gauge_target = std::move(tv);
        }

        try {
            validate_equation(eq);
        } catch (const SpecError&) {
            throw;
        } catch (const std::exception& e) {
            fail(std::string("invalid equation: ") + e.what());
        }
        out.equation = std::move(eq);
    }

    if (auto it = doc.find("analysis"); it != doc.end()) {
        if (!it->is_object()) fail("analysis: expected an object");
        if (auto f = it->find("window_bound"); f != it->end())
            out.analysis.window_bound = get_int(*f, "analysis.window_bound");
        if (auto f = it->find("m_max"); f != it->end())
            out.analysis.m_max = get_int(*f, "analysis.m_max");
        if (auto f = it->find("seed"); f != it->end()) {
            std::int64_t s = get_int(*f, "analysis.seed");
            if (s < 0) fail("analysis.seed: must be nonnegative");
            out.analysis.seed = static_cast<std::uint64_t>(s);
        }
        if (out.analysis.window_bound < 0) fail("analysis.window_bound: must be nonnegative");
        if (out.analysis.m_max < 0) fail("analysis.m_max: must be nonnegative");
    }
    return out;
}

SpecFile load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

std::string spec_to_json(const SpecFile& spec) {
    if (spec.equation.has_value() == spec.recurrence.has_value())
        throw std::invalid_argument("spec must hold exactly one of equation / recurrence");
    Json doc;
    if (spec.recurrence) {
        const Recurrence1D& rec = *spec.recurrence;
        doc["rank"] = 1;
        Json terms = Json::array();
        for (const Term1D& t : rec.terms) terms.push_back(term1d_to_json(t));
        doc["terms"] = std::move(terms);
        doc["w"] = Point{-rec.denom_offset};
    } else {
        const Equation& eq = *spec.equation;
        doc["rank"] = eq.shifts.rank;
        Json terms = Json::array();
        for (std::size_t j = 0; j < eq.shifts.terms.size(); ++j) {
            const auto& [v, u] = eq.shifts.terms[j];
            Json t;
            t["v"] = v;
            t["u"] = u;
            t["coeff"] = coeff_to_json(eq.coeffs[j]);
            terms.push_back(std::move(t));
        }
        doc["terms"] = std::move(terms);
        doc["w"] = eq.shifts.w;
        Json halfspaces = Json::array();
        for (const Halfspace& h : eq.domain.halfspaces)
            halfspaces.push_back(Json{{"c", h.c}, {"b", h.b}});
        doc["domain"] = Json{{"halfspaces", std::move(halfspaces)},
                             {"grading", eq.domain.grading}};
        if (spec.reduction) {
            Json rows = Json::array();
            for (const auto& row : spec.reduction->m) rows.push_back(row);
            doc["reduction"] = Json{{"matrix", std::move(rows)}};
        }
        if (spec.gauge_target) {
            Json target = Json::array();
            for (const Rational& r : *spec.gauge_target)
                target.push_back(rational_to_string(r));
            doc["gauge"] = Json{{"target", std::move(target)}};
        }
    }
    doc["analysis"] = Json{{"window_bound", spec.analysis.window_bound},
                           {"m_max", spec.analysis.m_max},
                           {"seed", spec.analysis.seed}};
    return doc.dump(2) + "\n";
}

void write_spec(const SpecFile& spec, const std::string& path) {
    std::string text = spec_to_json(spec);
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail("cannot write " + tmp);
        out << text;
        if (!out.flush()) fail("cannot write " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        fail("cannot move " + tmp + " into place");
    }
}

std::string spec_digest(const SpecFile& spec) {
    std::string text = spec_to_json(spec);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace laurel
