#include "herdsim/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace herdsim {

std::size_t TimeSeries::index_of(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::out_of_range("no column named '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
}

std::span<const double> TimeSeries::column(const std::string& name) const {
    return columns[index_of(name)];
}

void TimeSeries::reserve(std::size_t n) {
    t.reserve(n);
    for (auto& c : columns) c.reserve(n);
}

TimeSeries TimeSeries::tail(double fraction) const {
    const auto skip = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(size())));
    TimeSeries out(names);
    out.t.assign(t.begin() + static_cast<std::ptrdiff_t>(skip), t.end());
    for (std::size_t c = 0; c < columns.size(); ++c)
        out.columns[c].assign(columns[c].begin() + static_cast<std::ptrdiff_t>(skip), columns[c].end());
    return out;
}

}  // namespace herdsim
