#pragma once

// Estimators for stationary densities, power spectra and power-law exponents.
// Exponents are reported positive: p(x) ~ x^-lambda, S(f) ~ f^-beta.

#include "herdsim/timeseries.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace herdsim {

struct HistogramEstimate {
    std::vector<double> edges;    ///< log-spaced, size bins + 1
    std::vector<double> density;  ///< probability per unit value
    std::size_t sample_count = 0;

    std::size_t bins() const noexcept { return density.size(); }
    /// Geometric bin centres.
    std::vector<double> centers() const;
    /// Sum of density * width.
    double mass() const;
};

struct SpectrumEstimate {
    std::vector<double> frequency;  ///< 1 / time, strictly increasing, excludes 0
    std::vector<double> power;      ///< one-sided PSD
    std::size_t segments = 0;
    double dt = 0.0;

    /// Integral of the one-sided PSD over the frequency grid.
    double integrated_power() const;
};

struct PowerLawFit {
    double exponent = 0.0;   ///< negated log-log slope
    double std_error = 0.0;  ///< standard error of the slope
    double x_lo = 0.0;
    double x_hi = 0.0;
    double residual_rms = 0.0;  ///< RMS residual in natural-log units
    std::size_t points = 0;
};

/// Log-binned density over [min positive sample, max sample]. Normalized by the total
/// sample count, so mass() is the fraction of samples inside the covered range.
HistogramEstimate pdf_log_binned(std::span<const double> samples, std::size_t n_bins);
/// Same with an explicit positive range; samples outside it are counted but not binned.
HistogramEstimate pdf_log_binned(std::span<const double> samples, std::size_t n_bins, double lo,
                                 double hi);

/// Averaged periodogram of non-overlapping, mean-removed rectangular segments.
SpectrumEstimate psd_welch(std::span<const double> series, double dt, std::size_t segment_count);
SpectrumEstimate psd_welch(const TimeSeries& series, const std::string& column,
                           std::size_t segment_count);

/// Averages a spectrum into log-spaced frequency bins (empty bins dropped).
SpectrumEstimate log_bin_spectrum(const SpectrumEstimate& s, std::size_t bins_per_decade);

/// Least-squares line through (ln x, ln y) for points with x in [x_lo, x_hi].
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y, double x_lo,
                          double x_hi);

/// Fits a histogram over [lo, hi], ignoring empty bins.
PowerLawFit fit_pdf(const HistogramEstimate& h, double lo, double hi);
/// Fits a log-binned spectrum over [f_lo, f_hi].
PowerLawFit fit_psd(const SpectrumEstimate& s, double f_lo, double f_hi,
                    std::size_t bins_per_decade = 10);

/// [3 * median, 99.9th percentile] of the samples.
std::pair<double, double> default_pdf_fit_range(std::span<const double> samples);

struct HillEstimate {
    std::size_t k = 0;
    double tail_index = 0.0;    ///< complementary-CDF index
    double pdf_exponent = 0.0;  ///< tail_index + 1
    double std_error = 0.0;     ///< tail_index / sqrt(k)
};

/// Hill estimator over the k largest samples.
HillEstimate hill_tail_exponent(std::span<const double> samples, std::size_t k);

struct HillStability {
    std::vector<HillEstimate> estimates;
    double spread = 0.0;  ///< max - min of pdf_exponent over the ks
    double tolerance = 0.0;
    bool stable = false;
};

/// Hill estimates over several k. Stable when the spread stays within
/// `sigmas` times the largest standard error plus `relative` times the mean exponent.
HillStability hill_stability(std::span<const double> samples, std::span<const std::size_t> ks,
                             double sigmas = 3.0, double relative = 0.05);

/// Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS statistic.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace herdsim
