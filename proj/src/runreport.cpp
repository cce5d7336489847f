#include "laurel/runreport.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace laurel {

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& os, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        os << csv_cell(row[i]);
    }
    os << '\n';
}

}  // namespace

std::string format_report(const RunReport& r) {
    std::ostringstream os;
    os << "command: " << r.command << '\n';
    os << "spec: " << r.digest << '\n';
    for (const auto& [label, value] : r.verdicts) os << label << ": " << value << '\n';
    for (const std::string& path : r.outputs) os << "wrote: " << path << '\n';
    os << "exit: " << r.exit_status << '\n';
    return os.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        write_row(out, header);
        for (const auto& row : rows) write_row(out, row);
        if (!out.flush()) throw std::runtime_error("cannot write " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move " + tmp + " into place");
    }
}

}  // namespace laurel
