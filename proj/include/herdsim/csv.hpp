#pragma once

// Plain CSV with a mandatory header row, LF line endings and shortest round-trip
// float formatting.

#include "herdsim/timeseries.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace herdsim {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
    std::span<const double> column(const std::string& name) const;
};

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::span<const double>>& columns);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::span<const double>>& columns);

/// Writes "t,<names...>"; time values are divided by `time_unit` (1 keeps scaled time).
void write_series(const std::filesystem::path& path, const TimeSeries& series,
                  double time_unit = 1.0);

CsvTable read_csv(std::istream& is);
CsvTable read_csv(const std::filesystem::path& path);

/// Reads a file written by write_series; the first column must be "t".
TimeSeries read_series(const std::filesystem::path& path);

}  // namespace herdsim
