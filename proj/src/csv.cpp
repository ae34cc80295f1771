#include "ckdv/csv.hpp"

#include <cstdio>
#include <sstream>

#include "ckdv/errors.hpp"

namespace ckdv {

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw Error("cannot open " + path.string() + " for writing");
}

void CsvWriter::header(std::span<const std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out_ << ',';
        out_ << names[i];
    }
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_double(values[i]);
    }
    out_ << '\n';
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw Error(path.string() + ": empty file");
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw Error(path.string() + ": non-numeric cell '" + cell + "'");
            }
        }
        if (row.size() != t.header.size())
            throw Error(path.string() + ": row width does not match header");
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace ckdv
