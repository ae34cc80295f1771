#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace ckdv {

// CSV emission with deterministic %.17g float formatting (round-trippable,
// identical bytes for identical doubles).
class CsvWriter {
  public:
    explicit CsvWriter(const std::filesystem::path& path);

    void header(std::span<const std::string> names);
    void row(std::span<const double> values);

  private:
    std::ofstream out_;
};

std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

} // namespace ckdv
