#include "kerrchaos/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>

#include <fftw3.h>

#include "kerrchaos/errors.hpp"

namespace kerrchaos {

namespace {

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// |X_k|^2 for k = 0..floor(L/2) of a real input.
std::vector<double> squared_dft_magnitudes(std::vector<double>& input) {
    const std::size_t length = input.size();
    const std::size_t bins = length / 2 + 1;
    auto* output = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins));
    if (output == nullptr) throw Error("FFT buffer allocation failed");

    fftw_plan plan = nullptr;
    {
        const std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(length), input.data(), output, FFTW_ESTIMATE);
    }
    if (plan == nullptr) {
        fftw_free(output);
        throw Error("FFTW could not create a plan");
    }
    fftw_execute(plan);

    std::vector<double> magnitudes(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        magnitudes[k] = output[k][0] * output[k][0] + output[k][1] * output[k][1];
    }
    {
        const std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(output);
    return magnitudes;
}

}  // namespace

std::string to_string(Normalization normalization) {
    switch (normalization) {
        case Normalization::max_one: return "max_one";
        case Normalization::unit_sum: return "unit_sum";
        case Normalization::raw: return "raw";
    }
    return "unknown";
}

Normalization parse_normalization(const std::string& name) {
    if (name == "max_one") return Normalization::max_one;
    if (name == "unit_sum") return Normalization::unit_sum;
    if (name == "raw") return Normalization::raw;
    throw ContractViolationError("invalid normalization: '" + name +
                                 "' (expected max_one, unit_sum or raw)");
}

std::string to_string(Taper taper) {
    return taper == Taper::hann ? "hann" : "none";
}

Taper parse_taper(const std::string& name) {
    if (name == "none") return Taper::none;
    if (name == "hann") return Taper::hann;
    throw ContractViolationError("invalid taper: '" + name + "' (expected none or hann)");
}

Spectrum power_spectrum(const TimeSeries& series, std::int64_t window_start,
                        std::int64_t window_end, bool remove_mean, Normalization normalization,
                        Taper taper) {
    if (series.values.empty()) throw ContractViolationError("empty time series");
    if (window_start < series.start_index || window_end > series.end_index() ||
        window_end < window_start) {
        std::ostringstream msg;
        msg << "invalid window " << window_start << ".." << window_end << ": series covers "
            << series.start_index << ".." << series.end_index();
        throw ContractViolationError(msg.str());
    }
    const auto length = static_cast<std::size_t>(window_end - window_start + 1);
    if (length < 2) throw ContractViolationError("invalid window: needs at least two samples");

    const auto first = series.values.begin() + (window_start - series.start_index);
    std::vector<double> window(first, first + static_cast<std::ptrdiff_t>(length));
    if (remove_mean) {
        const double mean =
            std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(length);
        for (double& v : window) v -= mean;
    }
    if (taper == Taper::hann) {
        constexpr double two_pi = 6.283185307179586476925;
        for (std::size_t n = 0; n < length; ++n) {
            const double w = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(n) /
                                                  static_cast<double>(length - 1));
            window[n] *= w;
        }
    }

    std::vector<double> power = squared_dft_magnitudes(window);
    // One-sided periodogram: interior bins carry their negative-frequency twin.
    const double scale = 1.0 / static_cast<double>(length);
    for (std::size_t k = 0; k < power.size(); ++k) {
        const bool unpaired = k == 0 || (length % 2 == 0 && k == length / 2);
        power[k] *= unpaired ? scale : 2.0 * scale;
    }

    if (normalization != Normalization::raw) {
        const double denom = normalization == Normalization::max_one
                                 ? *std::max_element(power.begin(), power.end())
                                 : std::accumulate(power.begin(), power.end(), 0.0);
        if (denom > 0.0) {
            for (double& p : power) p /= denom;
        }
    }
    return Spectrum{std::move(power), 1.0 / static_cast<double>(length), normalization,
                    remove_mean};
}

double spectral_concentration(const Spectrum& spec, std::size_t k) {
    const std::size_t skip = spec.mean_removed ? 1 : 0;
    if (spec.power.size() <= skip) throw UndefinedMeasureError("spectrum has no usable bins");
    std::vector<double> bins(spec.power.begin() + static_cast<std::ptrdiff_t>(skip),
                             spec.power.end());
    if (k == 0 || k > bins.size()) {
        std::ostringstream msg;
        msg << "invalid k = " << k << " for a spectrum with " << bins.size() << " usable bins";
        throw ContractViolationError(msg.str());
    }
    const double total = std::accumulate(bins.begin(), bins.end(), 0.0);
    if (!(total > 0.0)) throw UndefinedMeasureError("spectral concentration of an all-zero spectrum");

    std::partial_sort(bins.begin(), bins.begin() + static_cast<std::ptrdiff_t>(k), bins.end(),
                      std::greater<>());
    const double top = std::accumulate(bins.begin(), bins.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
    return std::min(1.0, top / total);
}

std::vector<SpectralPeak> dominant_peaks(const Spectrum& spec, std::size_t k) {
    if (k == 0) throw ContractViolationError("invalid k: must be >= 1");
    const std::vector<double>& p = spec.power;
    const std::size_t first = spec.mean_removed ? 1 : 0;

    std::vector<SpectralPeak> peaks;
    for (std::size_t i = first; i < p.size(); ++i) {
        if (!(p[i] > 0.0)) continue;
        // Strict on the left, non-strict on the right so a plateau yields one peak.
        const bool left = i == first || p[i] > p[i - 1];
        const bool right = i + 1 == p.size() || p[i] >= p[i + 1];
        if (left && right) peaks.push_back({i, p[i]});
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const SpectralPeak& a, const SpectralPeak& b) {
        return a.power > b.power;
    });
    if (peaks.size() > k) peaks.resize(k);
    return peaks;
}

}  // namespace kerrchaos
