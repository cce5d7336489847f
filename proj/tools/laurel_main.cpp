/* Command-line front door.
 *
 *   laurel verify     spec.json [--window N]
 *   laurel conditions spec.json
 *   laurel gauge      spec.json [--target p/q,p/q[,p/q]]
 *   laurel reduce     spec.json [--compare]
 *   laurel entropy    spec.json [--m-max M] [--mode symbolic|tropical|both]
 *
 * Common options: --out-dir (tables and derived specs land there),
 * --seed (overrides the document's analysis.seed), --threads (reserved;
 * analyses currently run on one thread).
 *
 * Exit codes: 0 success, 1 input error (unreadable/invalid document, wrong
 * document style for the command), 2 mathematical verdict failure (Laurent
 * failure, condition violation, gauge obstruction, reduction mismatch,
 * symbolic/tropical disagreement). All file outputs are written atomically
 * and are byte-identical for identical document + seed.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "laurel/conditions.hpp"
#include "laurel/degree.hpp"
#include "laurel/entropy.hpp"
#include "laurel/gauge.hpp"
#include "laurel/ivp.hpp"
#include "laurel/reduction.hpp"
#include "laurel/rng.hpp"
#include "laurel/runreport.hpp"
#include "laurel/specfile.hpp"

namespace {

using namespace laurel;

struct CommonOpts {
    std::string spec_path;
    std::string out_dir = ".";
    std::optional<std::int64_t> seed;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("spec", opts.spec_path, "equation document (JSON)")->required();
    cmd->add_option("--out-dir", opts.out_dir, "directory for tables and derived specs");
    cmd->add_option("--seed", opts.seed, "override the document's analysis.seed");
    cmd->add_option("--threads", opts.threads, "worker threads (reserved)")
        ->check(CLI::PositiveNumber);
}

std::string file_stem(const std::string& path) {
    auto slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return name;
}

std::string out_path(const CommonOpts& opts, const std::string& suffix) {
    return opts.out_dir + "/" + file_stem(opts.spec_path) + suffix;
}

std::uint64_t effective_seed(const CommonOpts& opts, const SpecFile& spec) {
    if (opts.seed) return static_cast<std::uint64_t>(*opts.seed);
    return spec.analysis.seed;
}

const Equation& lattice_document(const SpecFile& spec, const char* command) {
    if (!spec.equation)
        throw SpecError(std::string(command) + " needs a lattice-style document (v/u terms)");
    return *spec.equation;
}

GoodDomain unit_orthant(std::size_t rank) {
    GoodDomain d;
    for (std::size_t i = 0; i < rank; ++i) {
        Point c(rank, 0);
        c[i] = 1;
        d.halfspaces.push_back({c, 0});
    }
    d.grading = Point(rank, 1);
    return d;
}

std::string monomial_string(const ExponentVec& e,
                            const std::function<std::string(VarId)>& namer) {
    if (e.empty()) return "1";
    std::string out;
    for (const auto& [v, exp] : e.entries()) {
        if (!out.empty()) out += "*";
        out += namer(v);
        if (exp != 1) out += "^" + std::to_string(exp);
    }
    return out;
}

std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

void finish(RunReport& report, int exit_status) {
    report.exit_status = exit_status;
    std::cout << format_report(report);
}

// ---------------------------------------------------------------- verify --

int run_verify(const CommonOpts& opts, std::optional<std::int64_t> window_cli) {
    SpecFile spec = load_spec(opts.spec_path);
    const Equation& eq = lattice_document(spec, "verify");
    std::int64_t bound = window_cli.value_or(spec.analysis.window_bound);
    if (bound < 0) throw SpecError("--window must be nonnegative");
    std::size_t rank = static_cast<std::size_t>(eq.shifts.rank);

    Ivp ivp(eq);
    Rng rng(effective_seed(opts, spec));
    Box box{Point(rank, -bound), Point(rank, bound)};
    LaurentReport lr = verify_laurent(ivp, box, &rng, bound);

    auto namer = ivp.namer();
    std::vector<std::vector<std::string>> rows;
    for (const LaurentSite& site : lr.sites) {
        std::vector<std::string> row;
        row.push_back(point_to_string(site.h));
        row.push_back(std::to_string(dot(eq.domain.grading, site.h)));
        row.push_back(site.laurent ? "yes" : "no");
        row.push_back(site.laurent ? monomial_string(site.denominator, namer) : "");
        row.push_back(site.laurent ? std::to_string(ivp.evaluate(site.h).degree()) : "");
        rows.push_back(std::move(row));
    }
    std::string csv = out_path(opts, "_verify.csv");
    write_csv(csv, {"site", "grading", "laurent", "denominator", "degree"}, rows);

    RunReport report;
    report.command = "verify";
    report.digest = spec_digest(spec);
    report.verdicts.emplace_back("window", std::to_string(bound));
    report.verdicts.emplace_back("sites", std::to_string(lr.sites.size()));
    report.verdicts.emplace_back("laurent", lr.all_laurent ? "yes" : "no");
    if (lr.first_failure)
        report.verdicts.emplace_back("first_failure", point_to_string(*lr.first_failure));
    report.verdicts.emplace_back("spot_checks", std::to_string(lr.spot_checks));
    report.verdicts.emplace_back("spot_check_failures",
                                 std::to_string(lr.spot_check_failures));
    report.outputs.push_back(csv);

    int rc = (lr.all_laurent && lr.spot_check_failures == 0) ? 0 : 2;
    finish(report, rc);
    return rc;
}

// ------------------------------------------------------------ conditions --

// The box of sites a condition sweep may use: the requested box shrunk so
// that every Table coefficient keeps the whole stencil inside its window.
std::optional<Box> condition_window(const Equation& eq, std::int64_t bound) {
    std::size_t rank = static_cast<std::size_t>(eq.shifts.rank);
    Box box{Point(rank, -bound), Point(rank, bound)};
    for (const CoefficientField& c : eq.coeffs) {
        if (c.kind() != CoefficientField::Kind::Table) continue;
        Box fits = condition_site_box(eq.shifts, c.window());
        for (std::size_t i = 0; i < rank; ++i) {
            box.lo[i] = std::max(box.lo[i], fits.lo[i]);
            box.hi[i] = std::min(box.hi[i], fits.hi[i]);
            if (box.lo[i] > box.hi[i]) return std::nullopt;
        }
    }
    return box;
}

// Offsets (a, l-a) of a rank-1 bilinear term, smaller first.
std::pair<std::int64_t, std::int64_t> term_offsets(const std::pair<Point, Point>& term) {
    std::int64_t x = -term.first[0], y = -term.second[0];
    return {std::min(x, y), std::max(x, y)};
}

ConditionReport dispatch_conditions(const Equation& eq, const Box& window) {
    std::size_t nterms = eq.shifts.terms.size();
    if (eq.shifts.rank == 1 && nterms == 2) {
        std::int64_t l = -eq.shifts.w[0];
        auto [a, a2] = term_offsets(eq.shifts.terms[0]);
        auto [b, b2] = term_offsets(eq.shifts.terms[1]);
        (void)a2;
        (void)b2;
        std::size_t first = a <= b ? 0 : 1;
        return check_condition_reduced(eq.coeffs[first], eq.coeffs[1 - first],
                                       std::min(a, b), std::max(a, b), l, window);
    }
    if (nterms == 2)
        return check_condition_hm(eq.coeffs[0], eq.coeffs[1], eq.shifts, window);
    if (nterms == 3)
        return check_condition_bkp(eq.coeffs[0], eq.coeffs[1], eq.coeffs[2], eq.shifts,
                                   window);
    throw SpecError("no coefficient condition family for " + std::to_string(nterms) +
                    " terms");
}

int run_conditions(const CommonOpts& opts) {
    SpecFile spec = load_spec(opts.spec_path);
    const Equation& eq = lattice_document(spec, "conditions");
    std::optional<Box> window = condition_window(eq, spec.analysis.window_bound);

    ConditionReport cr;
    if (window) cr = dispatch_conditions(eq, *window);

    std::vector<std::vector<std::string>> rows;
    for (const ConditionViolation& v : cr.violations)
        rows.push_back({point_to_string(v.h), std::to_string(v.relation),
                        rational_to_string(v.lhs), rational_to_string(v.rhs)});
    std::string csv = out_path(opts, "_conditions.csv");
    write_csv(csv, {"site", "relation", "lhs", "rhs"}, rows);

    RunReport report;
    report.command = "conditions";
    report.digest = spec_digest(spec);
    report.verdicts.emplace_back("sites", std::to_string(cr.sites_checked));
    report.verdicts.emplace_back("violations", std::to_string(cr.violations.size()));
    report.verdicts.emplace_back("satisfied", cr.ok() ? "yes" : "no");
    report.outputs.push_back(csv);
    for (const ConditionViolation& v : cr.violations)
        std::cout << "violated at " << point_to_string(v.h) << " relation " << v.relation
                  << ": " << rational_to_string(v.lhs) << " != " << rational_to_string(v.rhs)
                  << "\n";

    int rc = cr.ok() ? 0 : 2;
    finish(report, rc);
    return rc;
}

// ----------------------------------------------------------------- gauge --

std::vector<Rational> gauge_targets(const SpecFile& spec, const std::string& target_csv,
                                    std::size_t nterms) {
    std::vector<Rational> targets;
    if (!target_csv.empty()) {
        std::size_t start = 0;
        while (start <= target_csv.size()) {
            std::size_t comma = target_csv.find(',', start);
            std::string piece = target_csv.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            auto r = parse_rational(piece);
            if (!r) throw SpecError("--target: cannot parse rational '" + piece + "'");
            targets.push_back(*r);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    } else if (spec.gauge_target) {
        targets = *spec.gauge_target;
    } else {
        targets.assign(nterms, Rational(1));
    }
    if (targets.size() != nterms)
        throw SpecError("gauge needs one target per term (" + std::to_string(nterms) +
                        " terms)");
    return targets;
}

// The largest window whose gauge coverage box stays inside every Table
// coefficient's window; [0, bound]^rank when no tables constrain it.
std::optional<Box> gauge_window(const Equation& eq, std::int64_t bound) {
    std::size_t rank = static_cast<std::size_t>(eq.shifts.rank);
    Box box{Point(rank, 0), Point(rank, bound)};
    bool any_table = false;
    for (const CoefficientField& c : eq.coeffs) {
        if (c.kind() != CoefficientField::Kind::Table) continue;
        any_table = true;
        // Coverage widens a window by fixed per-axis margins; measure them
        // on a degenerate box and shrink the table window by the same.
        Box probe{Point(rank, 0), Point(rank, 0)};
        Box margins = gauge_coverage_box(eq.shifts, probe);
        const Box& win = c.window();
        for (std::size_t i = 0; i < rank; ++i) {
            box.lo[i] = std::max(box.lo[i], win.lo[i] - margins.lo[i]);
            box.hi[i] = std::min(box.hi[i], win.hi[i] - margins.hi[i]);
        }
    }
    (void)any_table;
    for (std::size_t i = 0; i < rank; ++i)
        if (box.lo[i] > box.hi[i]) return std::nullopt;
    return box;
}

int run_gauge(const CommonOpts& opts, const std::string& target_csv) {
    SpecFile spec = load_spec(opts.spec_path);
    const Equation& eq = lattice_document(spec, "gauge");
    std::size_t nterms = eq.shifts.terms.size();
    if (nterms != 2 && nterms != 3)
        throw SpecError("gauge handles two- and three-term systems only");
    std::vector<Rational> targets = gauge_targets(spec, target_csv, nterms);

    std::optional<Box> window = gauge_window(eq, spec.analysis.window_bound);
    if (!window)
        throw SpecError("table coefficients leave no window with full gauge coverage");

    GaugeFunction phi =
        nterms == 2 ? build_gauge_hm(eq.coeffs[0], eq.coeffs[1], eq.shifts, targets[0],
                                     targets[1], *window)
                    : build_gauge_bkp(eq.coeffs[0], eq.coeffs[1], eq.coeffs[2], eq.shifts,
                                      targets[0], targets[1], targets[2], *window);

    // The transformed coefficients must equal the targets on the window;
    // anything else is an integration bug, not a property of the input.
    Equation transformed = apply_gauge(eq, phi, *window);
    for (const Point& h : box_points(*window))
        for (std::size_t j = 0; j < nterms; ++j)
            if (transformed.coeffs[j].eval(h) != targets[j])
                throw InvariantViolation("gauged coefficient differs from its target at " +
                                         point_to_string(h));

    std::vector<std::vector<std::string>> rows;
    for (const auto& [h, value] : phi.values)
        rows.push_back({point_to_string(h), rational_to_string(value)});
    std::string csv = out_path(opts, "_gauge.csv");
    write_csv(csv, {"site", "phi"}, rows);

    SpecFile gauged;
    gauged.equation = eq;
    gauged.equation->coeffs.clear();
    for (const Rational& t : targets)
        gauged.equation->coeffs.push_back(CoefficientField::constant(t));
    gauged.analysis = spec.analysis;
    std::string gauged_path = out_path(opts, "_gauged.json");
    write_spec(gauged, gauged_path);

    RunReport report;
    report.command = "gauge";
    report.digest = spec_digest(spec);
    std::string tstr;
    for (const Rational& t : targets) tstr += (tstr.empty() ? "" : ",") + rational_to_string(t);
    report.verdicts.emplace_back("targets", tstr);
    report.verdicts.emplace_back("window", point_to_string(window->lo) + ".." +
                                               point_to_string(window->hi));
    report.verdicts.emplace_back("sites", std::to_string(phi.values.size()));
    report.outputs.push_back(csv);
    report.outputs.push_back(gauged_path);
    finish(report, 0);
    return 0;
}

// ---------------------------------------------------------------- reduce --

int run_reduce(const CommonOpts& opts, bool compare) {
    SpecFile spec = load_spec(opts.spec_path);
    const Equation& eq = lattice_document(spec, "reduce");
    if (!spec.reduction) throw SpecError("document carries no reduction section");
    const ReductionMap& m = *spec.reduction;

    Point covector = validate_reduction(eq, m);
    GoodDomain target_domain = unit_orthant(m.rows());
    Equation reduced = reduce_equation(eq, m, target_domain);

    SpecFile out;
    out.equation = std::move(reduced);
    out.analysis = spec.analysis;
    std::string reduced_path = out_path(opts, "_reduced.json");
    write_spec(out, reduced_path);

    RunReport report;
    report.command = "reduce";
    report.digest = spec_digest(spec);
    report.verdicts.emplace_back("target_rank", std::to_string(m.rows()));
    report.verdicts.emplace_back("covector", point_to_string(covector));
    report.outputs.push_back(reduced_path);

    int rc = 0;
    if (compare) {
        std::size_t rank = m.rows();
        Box window{Point(rank, 0), Point(rank, spec.analysis.window_bound)};
        ReductionComparison cmp = compare_reduction(eq, m, target_domain, window);
        report.verdicts.emplace_back("sites_compared", std::to_string(cmp.sites_compared));
        report.verdicts.emplace_back("transported", cmp.equal ? "yes" : "no");
        if (cmp.first_mismatch)
            report.verdicts.emplace_back("first_mismatch",
                                         point_to_string(*cmp.first_mismatch));
        if (!cmp.equal) rc = 2;
    }
    finish(report, rc);
    return rc;
}

// --------------------------------------------------------------- entropy --

Recurrence1D entropy_recurrence(const SpecFile& spec) {
    if (spec.recurrence) return *spec.recurrence;
    if (spec.equation && spec.equation->shifts.rank == 1)
        return recurrence_from_equation(*spec.equation);
    throw SpecError("entropy needs a one-dimensional document");
}

int run_entropy(const CommonOpts& opts, std::optional<std::int64_t> m_max_cli,
                const std::string& mode) {
    SpecFile spec = load_spec(opts.spec_path);
    Recurrence1D rec = entropy_recurrence(spec);
    std::int64_t m_max = m_max_cli.value_or(spec.analysis.m_max);
    if (m_max < 0) throw SpecError("--m-max must be nonnegative");
    bool want_symbolic = mode == "symbolic" || mode == "both";
    bool want_tropical = mode == "tropical" || mode == "both";

    RunReport report;
    report.command = "entropy";
    report.digest = spec_digest(spec);
    report.verdicts.emplace_back("mode", mode);
    report.verdicts.emplace_back("m_max", std::to_string(m_max));

    std::optional<Sequence1D> symbolic;
    std::optional<TropicalSequence1D> tropical;
    if (want_symbolic) symbolic = iterate_1d(rec, m_max);
    if (want_tropical) tropical = tropical_iterate_1d(rec, false, m_max);

    // Table rows and the degree sequence the estimate runs on. In "both"
    // mode the two sources must agree before either is used.
    std::vector<std::vector<std::string>> rows;
    std::vector<mpz_class> degrees;
    std::optional<std::int64_t> disagreement;
    if (want_symbolic && want_tropical && !symbolic->failure_index) {
        for (std::size_t i = 0; i < symbolic->degrees.size(); ++i)
            if (tropical->total_degrees[i] != symbolic->degrees[i]) {
                disagreement = static_cast<std::int64_t>(i);
                break;
            }
    }
    if (want_tropical) {
        for (std::size_t i = 0; i < tropical->total_degrees.size(); ++i)
            rows.push_back({std::to_string(i), tropical->total_degrees[i].get_str(),
                            tropical->numer_degrees[i].get_str(),
                            tropical->denom_degrees[i].get_str()});
        degrees = tropical->total_degrees;
        report.verdicts.emplace_back("tropical_exact", tropical->exact ? "yes" : "no");
    } else {
        for (std::size_t i = 0; i < symbolic->iterates.size(); ++i) {
            const Fraction& f = symbolic->iterates[i];
            std::int64_t pos = 0, neg = 0;
            for (const auto& [v, e] : f.den.entries()) (e > 0 ? pos : neg) += std::abs(e);
            rows.push_back({std::to_string(i), std::to_string(f.degree()),
                            std::to_string(f.num.total_degree() + neg),
                            std::to_string(pos)});
            degrees.emplace_back(f.degree());
        }
    }
    std::string csv = out_path(opts, "_degrees.csv");
    write_csv(csv, {"m", "deg", "deg_numer", "deg_denom"}, rows);
    report.outputs.push_back(csv);

    if (symbolic && symbolic->failure_index) {
        report.verdicts.emplace_back("laurent", "no");
        report.verdicts.emplace_back("failure_index",
                                     std::to_string(*symbolic->failure_index));
        finish(report, 2);
        return 2;
    }
    if (disagreement) {
        report.verdicts.emplace_back("overlap_agreement", "no");
        report.verdicts.emplace_back("first_disagreement", std::to_string(*disagreement));
        finish(report, 2);
        return 2;
    }
    if (want_symbolic && want_tropical)
        report.verdicts.emplace_back("overlap_agreement", "yes");

    EntropyEstimate est = entropy_estimate(degrees, 0.5);
    report.verdicts.emplace_back("tail", std::to_string(est.tail_start) + ".." +
                                             std::to_string(est.tail_end));
    report.verdicts.emplace_back("slope", fixed6(est.slope));
    report.verdicts.emplace_back("lambda_hat", fixed6(est.lambda_hat));
    report.verdicts.emplace_back("quadratic_residual",
                                 std::isfinite(est.residual) ? fixed6(est.residual) : "inf");
    report.verdicts.emplace_back(
        "verdict", est.zero_compatible
                       ? "zero-compatible"
                       : "positive (lambda_hat " + fixed6(est.lambda_hat) + ")");
    finish(report, 0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact analysis of bilinear lattice recurrences"};
    app.require_subcommand(1);

    CommonOpts verify_opts;
    std::optional<std::int64_t> window_cli;
    CLI::App* verify = app.add_subcommand("verify", "check the Laurent property on a window");
    add_common(verify, verify_opts);
    verify->add_option("--window", window_cli, "grading bound of the sweep");

    CommonOpts cond_opts;
    CLI::App* conditions =
        app.add_subcommand("conditions", "check the coefficient conditions");
    add_common(conditions, cond_opts);

    CommonOpts gauge_opts;
    std::string target_csv;
    CLI::App* gauge =
        app.add_subcommand("gauge", "build the gauge to prescribed constant coefficients");
    add_common(gauge, gauge_opts);
    gauge->add_option("--target", target_csv, "comma-separated constants, one per term");

    CommonOpts reduce_opts;
    bool compare = false;
    CLI::App* reduce = app.add_subcommand("reduce", "push the equation along its reduction");
    add_common(reduce, reduce_opts);
    reduce->add_flag("--compare", compare, "also transport iterates and compare exactly");

    CommonOpts entropy_opts;
    std::optional<std::int64_t> m_max_cli;
    std::string mode = "tropical";
    CLI::App* entropy = app.add_subcommand("entropy", "degree growth and entropy estimate");
    add_common(entropy, entropy_opts);
    entropy->add_option("--m-max", m_max_cli, "last iterate index");
    entropy->add_option("--mode", mode, "degree source")
        ->check(CLI::IsMember({"symbolic", "tropical", "both"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (verify->parsed()) return run_verify(verify_opts, window_cli);
        if (conditions->parsed()) return run_conditions(cond_opts);
        if (gauge->parsed()) return run_gauge(gauge_opts, target_csv);
        if (reduce->parsed()) return run_reduce(reduce_opts, compare);
        if (entropy->parsed()) return run_entropy(entropy_opts, m_max_cli, mode);
    } catch (const NonLaurentError& e) {
        std::cerr << "verdict failure: " << e.what() << "\n";
        return 2;
    } catch (const ZeroIterate& e) {
        std::cerr << "verdict failure: " << e.what() << "\n";
        return 2;
    } catch (const ConditionViolated& e) {
        std::cerr << "verdict failure: " << e.what() << "\n";
        return 2;
    } catch (const CompatibilityError& e) {
        std::cerr << "verdict failure: " << e.what() << "\n";
        return 2;
    } catch (const InvalidReduction& e) {
        std::cerr << "verdict failure: " << e.what() << "\n";
        return 2;
    } catch (const InvariantViolation& e) {
        std::cerr << "verdict failure: " << e.what() << "\n";
        return 2;
    } catch (const CertificateError& e) {
        std::cerr << "verdict failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
