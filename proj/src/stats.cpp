#include "herdsim/stats.hpp"

#include "herdsim/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>

namespace herdsim {

std::vector<double> HistogramEstimate::centers() const {
    std::vector<double> c(bins());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::sqrt(edges[i] * edges[i + 1]);
    return c;
}

double HistogramEstimate::mass() const {
    double m = 0.0;
    for (std::size_t i = 0; i < bins(); ++i) m += density[i] * (edges[i + 1] - edges[i]);
    return m;
}

double SpectrumEstimate::integrated_power() const {
    if (frequency.empty()) return 0.0;
    const double df = frequency.size() > 1 ? frequency[1] - frequency[0] : frequency[0];
    return std::accumulate(power.begin(), power.end(), 0.0) * df;
}

HistogramEstimate pdf_log_binned(std::span<const double> samples, std::size_t n_bins) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    std::size_t positive = 0;
    for (double v : samples) {
        if (v > 0.0) {
            ++positive;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (positive < 1000) throw InsufficientData("log-binned PDF needs at least 1000 positive samples");
    if (!(hi > lo)) throw InsufficientData("degenerate histogram: all samples are equal");
    return pdf_log_binned(samples, n_bins, lo, hi);
}

HistogramEstimate pdf_log_binned(std::span<const double> samples, std::size_t n_bins, double lo,
                                 double hi) {
    if (n_bins == 0) throw InsufficientData("need at least one bin");
    if (!(lo > 0.0 && hi > lo)) throw InsufficientData("degenerate histogram range");
    if (samples.empty()) throw InsufficientData("no samples");

    HistogramEstimate h;
    h.sample_count = samples.size();
    h.edges.resize(n_bins + 1);
    const double log_lo = std::log(lo);
    const double step = (std::log(hi) - log_lo) / static_cast<double>(n_bins);
    for (std::size_t i = 0; i <= n_bins; ++i)
        h.edges[i] = std::exp(log_lo + step * static_cast<double>(i));
    h.edges.front() = lo;
    h.edges.back() = hi;

    std::vector<std::size_t> counts(n_bins, 0);
    for (double v : samples) {
        if (!(v >= lo && v <= hi)) continue;
        auto bin = static_cast<std::size_t>((std::log(v) - log_lo) / step);
        bin = std::min(bin, n_bins - 1);
        // Guard against log rounding at the edges.
        while (bin > 0 && v < h.edges[bin]) --bin;
        while (bin + 1 < n_bins && v >= h.edges[bin + 1]) ++bin;
        ++counts[bin];
    }
    h.density.resize(n_bins);
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < n_bins; ++i)
        h.density[i] = static_cast<double>(counts[i]) / (n * (h.edges[i + 1] - h.edges[i]));
    return h;
}

namespace {

struct FftwPlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : data(static_cast<double*>(fftw_malloc(sizeof(double) * n))) {}
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    double* data;
};

struct FftwComplexBuffer {
    explicit FftwComplexBuffer(std::size_t n)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
    ~FftwComplexBuffer() { fftw_free(data); }
    FftwComplexBuffer(const FftwComplexBuffer&) = delete;
    FftwComplexBuffer& operator=(const FftwComplexBuffer&) = delete;
    fftw_complex* data;
};

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

SpectrumEstimate psd_welch(std::span<const double> series, double dt, std::size_t segment_count) {
    if (segment_count == 0) throw InsufficientData("segment_count must be positive");
    if (!(dt > 0.0)) throw InsufficientData("sampling interval must be positive");
    if (series.size() < 2 * segment_count * 16) throw InsufficientData("series too short for PSD");

    const std::size_t len = series.size() / segment_count;
    const std::size_t half = len / 2;
    FftwBuffer in(len);
    FftwComplexBuffer out(half + 1);
    std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan;
    {
        // The FFTW planner is not thread-safe; execution is.
        std::lock_guard lock(fftw_planner_mutex());
        plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(len), in.data, out.data, FFTW_ESTIMATE));
    }

    SpectrumEstimate s;
    s.segments = segment_count;
    s.dt = dt;
    s.frequency.resize(half);
    s.power.assign(half, 0.0);
    const double duration = dt * static_cast<double>(len);
    for (std::size_t k = 1; k <= half; ++k) s.frequency[k - 1] = static_cast<double>(k) / duration;

    for (std::size_t seg = 0; seg < segment_count; ++seg) {
        const auto chunk = series.subspan(seg * len, len);
        const double mean = std::accumulate(chunk.begin(), chunk.end(), 0.0) / static_cast<double>(len);
        for (std::size_t i = 0; i < len; ++i) in.data[i] = chunk[i] - mean;
        fftw_execute(plan.get());
        for (std::size_t k = 1; k <= half; ++k) {
            const double re = out.data[k][0];
            const double im = out.data[k][1];
            // One-sided: double every bin except Nyquist for even lengths.
            const double factor = (2 * k == len) ? 1.0 : 2.0;
            s.power[k - 1] += factor * (re * re + im * im) * dt / static_cast<double>(len);
        }
    }
    for (double& p : s.power) p /= static_cast<double>(segment_count);
    return s;
}

SpectrumEstimate psd_welch(const TimeSeries& series, const std::string& column,
                           std::size_t segment_count) {
    return psd_welch(series.column(column), series.dt(), segment_count);
}

SpectrumEstimate log_bin_spectrum(const SpectrumEstimate& s, std::size_t bins_per_decade) {
    SpectrumEstimate out;
    out.segments = s.segments;
    out.dt = s.dt;
    if (s.frequency.empty() || bins_per_decade == 0) return out;
    const double step = std::log10(10.0) / static_cast<double>(bins_per_decade);
    const double start = std::log10(s.frequency.front());
    std::size_t i = 0;
    for (std::size_t b = 0; i < s.frequency.size(); ++b) {
        const double upper = std::pow(10.0, start + step * static_cast<double>(b + 1));
        double fsum = 0.0;
        double psum = 0.0;
        std::size_t n = 0;
        for (; i < s.frequency.size() && s.frequency[i] < upper; ++i) {
            fsum += std::log(s.frequency[i]);
            psum += s.power[i];
            ++n;
        }
        if (n == 0) continue;
        out.frequency.push_back(std::exp(fsum / static_cast<double>(n)));
        out.power.push_back(psum / static_cast<double>(n));
    }
    return out;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y, double x_lo,
                          double x_hi) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y sizes differ");
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= x_lo && x[i] <= x_hi)) continue;
        if (!(x[i] > 0.0 && y[i] > 0.0))
            throw DomainError("power-law fit needs positive points in range");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const std::size_t n = lx.size();
    if (n < 5) throw InsufficientData("power-law fit needs at least 5 points in range");

    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw InsufficientData("power-law fit needs distinct x values");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (intercept + slope * lx[i]);
        ssr += r * r;
    }

    PowerLawFit fit;
    fit.exponent = -slope;
    fit.std_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    fit.x_lo = std::exp(*std::min_element(lx.begin(), lx.end()));
    fit.x_hi = std::exp(*std::max_element(lx.begin(), lx.end()));
    fit.residual_rms = std::sqrt(ssr / static_cast<double>(n));
    fit.points = n;
    return fit;
}

PowerLawFit fit_pdf(const HistogramEstimate& h, double lo, double hi) {
    const auto c = h.centers();
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (h.density[i] > 0.0) {
            x.push_back(c[i]);
            y.push_back(h.density[i]);
        }
    }
    return fit_power_law(x, y, lo, hi);
}

PowerLawFit fit_psd(const SpectrumEstimate& s, double f_lo, double f_hi,
                    std::size_t bins_per_decade) {
    const SpectrumEstimate binned = log_bin_spectrum(s, bins_per_decade);
    return fit_power_law(binned.frequency, binned.power, f_lo, f_hi);
}

std::pair<double, double> default_pdf_fit_range(std::span<const double> samples) {
    if (samples.size() < 2) throw InsufficientData("need samples for a fit range");
    std::vector<double> v(samples.begin(), samples.end());
    const auto at = [&v](double q) {
        const auto idx = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
        return v[idx];
    };
    const double median = at(0.5);
    const double upper = at(0.999);
    return {3.0 * median, upper};
}

HillEstimate hill_tail_exponent(std::span<const double> samples, std::size_t k) {
    if (k == 0 || k >= samples.size() / 10)
        throw InsufficientData("Hill estimator needs 0 < k < n / 10");
    std::vector<double> v(samples.begin(), samples.end());
    // v[0..k] become the k + 1 largest values, sorted descending.
    std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k + 1), v.end(),
                      std::greater<>());
    const double threshold = v[k];
    if (!(threshold > 0.0)) throw DomainError("Hill estimator needs positive tail samples");
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += std::log(v[i] / threshold);
    if (!(sum > 0.0)) throw InsufficientData("tail samples are all equal");

    HillEstimate e;
    e.k = k;
    e.tail_index = static_cast<double>(k) / sum;
    e.pdf_exponent = e.tail_index + 1.0;
    e.std_error = e.tail_index / std::sqrt(static_cast<double>(k));
    return e;
}

HillStability hill_stability(std::span<const double> samples, std::span<const std::size_t> ks,
                             double sigmas, double relative) {
    HillStability st;
    if (ks.empty()) return st;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double max_se = 0.0;
    double mean = 0.0;
    for (std::size_t k : ks) {
        const HillEstimate e = hill_tail_exponent(samples, k);
        st.estimates.push_back(e);
        lo = std::min(lo, e.pdf_exponent);
        hi = std::max(hi, e.pdf_exponent);
        max_se = std::max(max_se, e.std_error);
        mean += e.pdf_exponent;
    }
    mean /= static_cast<double>(ks.size());
    st.spread = hi - lo;
    st.tolerance = sigmas * max_se + relative * mean;
    st.stable = st.spread <= st.tolerance;
    return st;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
    if (samples.size() < 100) throw InsufficientData("KS distance needs at least 100 samples");
    std::vector<double> v(samples.begin(), samples.end());
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = cdf(v[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw InsufficientData("two-sample KS needs nonempty samples");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

}  // namespace herdsim
