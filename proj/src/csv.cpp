#include "herdsim/csv.hpp"

#include "herdsim/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace herdsim {

std::span<const double> CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return columns[i];
    throw std::out_of_range("CSV has no column '" + name + "'");
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::span<const double>>& columns) {
    if (header.size() != columns.size()) throw std::invalid_argument("header/column count mismatch");
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns)
        if (col.size() != rows) throw std::invalid_argument("ragged CSV columns");
    std::string line;
    for (std::size_t r = 0; r < rows; ++r) {
        line.clear();
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) line.push_back(',');
            line += format_double(columns[c][r]);
        }
        line.push_back('\n');
        os << line;
    }
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::span<const double>>& columns) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_csv(os, header, columns);
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

void write_series(const std::filesystem::path& path, const TimeSeries& series, double time_unit) {
    std::vector<double> t(series.t);
    if (time_unit != 1.0)
        for (double& v : t) v /= time_unit;
    std::vector<std::string> header{"t"};
    std::vector<std::span<const double>> cols{t};
    for (std::size_t c = 0; c < series.columns.size(); ++c) {
        header.push_back(series.names[c]);
        cols.emplace_back(series.columns[c]);
    }
    write_csv(path, header, cols);
}

CsvTable read_csv(std::istream& is) {
    CsvTable table;
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("", "CSV input is empty");
    {
        std::stringstream ss(line);
        std::string name;
        while (std::getline(ss, name, ',')) table.header.push_back(name);
    }
    if (table.header.empty()) throw ConfigError("", "CSV header is empty");
    table.columns.resize(table.header.size());
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            double v = 0.0;
            const auto res = std::from_chars(p, end, v);
            if (res.ec != std::errc())
                throw ConfigError("", "malformed number on CSV line " + std::to_string(line_no));
            p = res.ptr;
            if (c + 1 < table.header.size()) {
                if (p == end || *p != ',')
                    throw ConfigError("", "too few fields on CSV line " + std::to_string(line_no));
                ++p;
            }
            table.columns[c].push_back(v);
        }
        if (p != end) throw ConfigError("", "too many fields on CSV line " + std::to_string(line_no));
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("", "cannot open " + path.string());
    return read_csv(is);
}

TimeSeries read_series(const std::filesystem::path& path) {
    CsvTable table = read_csv(path);
    if (table.header.front() != "t") throw ConfigError("", path.string() + ": first column must be t");
    TimeSeries s(std::vector<std::string>(table.header.begin() + 1, table.header.end()));
    s.t = std::move(table.columns.front());
    for (std::size_t c = 1; c < table.columns.size(); ++c) s.columns[c - 1] = std::move(table.columns[c]);
    return s;
}

}  // namespace herdsim
