#pragma once

/* Run reports and table output for the command-line front end.
 *
 * A RunReport collects what one command did: which subcommand ran, the digest
 * of the input spec, the verdicts it reached (label/value pairs in emission
 * order), and the files it wrote. Given the same spec and seed the report —
 * and every table written through write_csv — is byte-identical.
 */

#include <string>
#include <utility>
#include <vector>

namespace laurel {

struct RunReport {
    std::string command;
    std::string digest;
    std::vector<std::pair<std::string, std::string>> verdicts;
    std::vector<std::string> outputs;  // paths of files written
    int exit_status = 0;
};

// Human-readable rendering, one "key: value" line per field/verdict.
std::string format_report(const RunReport& r);

// Writes header + rows as CSV, atomically (temp file, then rename). Cells
// containing commas, quotes, or newlines are quoted with internal quotes
// doubled; everything else is written verbatim, so numeric output is stable.
// Throws std::runtime_error when the file cannot be written.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace laurel
