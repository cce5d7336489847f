#pragma once

/* Equation description files.
 *
 * A JSON document describes one bilinear lattice equation plus optional
 * analysis directives:
 *
 *   {
 *     "rank": 3,
 *     "terms": [{"v": [-1,0,0], "u": [0,-1,-1], "coeff": {...}}, ...],
 *     "w": [-1,-1,-1],
 *     "domain": {"halfspaces": [{"c": [1,0,0], "b": 0}, ...],
 *                "grading": [1,1,1]},
 *     "reduction": {"matrix": [[1,2,2]]},              // optional
 *     "gauge": {"target": ["1", "1"]},                  // optional
 *     "analysis": {"window_bound": 8, "m_max": 60, "seed": 0}  // optional
 *   }
 *
 * Coefficient objects carry a "kind": "constant" {"value": "p/q"},
 * "geometric" {"value": "p/q", "base": ["p/q", ... rank entries]}, or
 * "table" {"window": {"lo": [...], "hi": [...]}, "values": ["p/q", ...]}
 * with values listed in the lexicographic order of the window points.
 * All integers are exact; rationals are "p/q" strings.
 *
 * Rank-1 documents may instead describe a general rational recurrence
 *   f_m = ( sum_j c_j(m) prod_k f_{m - s_jk}^{e_jk} ) / f_{m-l},
 * which covers one-dimensional shapes that are not bilinear (squared
 * iterates, constant terms). Each term then replaces "v"/"u" with
 *   "factors": [{"offset": 1, "exp": 2}, ...]        // may be empty
 * and "w" is [-l]. The two term styles cannot be mixed in one document, and
 * the recurrence style admits no "domain", "reduction", or "gauge" section
 * (the implied domain is m >= 0 with initial segment f_0 .. f_{L-1}).
 *
 * Loading validates the schema, the v_i + u_i = w constraint, and the full
 * equation (shift system, domain certificate, coefficient arity; table
 * coverage is checked by the consumer commands). Every load problem —
 * unreadable file, malformed JSON, schema or mathematical invalidity —
 * throws SpecError so the command line can map it to its input-error exit
 * code.
 */

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "laurel/coeffs.hpp"
#include "laurel/degree.hpp"
#include "laurel/reduction.hpp"

namespace laurel {

struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct AnalysisOptions {
    std::int64_t window_bound = 3;
    std::int64_t m_max = 60;
    std::uint64_t seed = 0;
};

// Exactly one of `equation` (lattice style) and `recurrence` (rank-1
// recurrence style) is set.
struct SpecFile {
    std::optional<Equation> equation;
    std::optional<Recurrence1D> recurrence;
    std::optional<ReductionMap> reduction;
    std::optional<std::vector<Rational>> gauge_target;
    AnalysisOptions analysis;
};

SpecFile parse_spec(const std::string& text);
SpecFile load_spec(const std::string& path);

// Canonical serialization: fixed key order, rationals as canonical "p/q"
// strings; parse(spec_to_json(s)) reproduces s exactly.
std::string spec_to_json(const SpecFile& spec);

// Atomic write (temp file + rename).
void write_spec(const SpecFile& spec, const std::string& path);

// Stable content digest of the canonical serialization (FNV-1a, hex).
std::string spec_digest(const SpecFile& spec);

}  // namespace laurel
