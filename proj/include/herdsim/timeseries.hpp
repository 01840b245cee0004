#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace herdsim {

/// Uniformly sampled multichannel series: `t` plus one column per named channel.
struct TimeSeries {
    std::vector<std::string> names;
    std::vector<double> t;
    std::vector<std::vector<double>> columns;

    TimeSeries() = default;
    explicit TimeSeries(std::vector<std::string> channel_names)
        : names(std::move(channel_names)), columns(names.size()) {}

    std::size_t size() const noexcept { return t.size(); }
    bool empty() const noexcept { return t.empty(); }

    /// Grid spacing; zero for fewer than two samples.
    double dt() const noexcept { return t.size() < 2 ? 0.0 : t[1] - t[0]; }

    std::span<const double> column(std::size_t i) const { return columns.at(i); }
    std::span<const double> column(const std::string& name) const;
    std::size_t index_of(const std::string& name) const;

    void reserve(std::size_t n);

    /// Drops the leading `fraction` of samples (burn-in).
    TimeSeries tail(double fraction) const;
};

}  // namespace herdsim
