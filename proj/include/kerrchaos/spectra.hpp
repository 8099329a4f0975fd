#pragma once

// One-sided power spectra of indicator time series and summaries of how
// concentrated the spectral power is.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kerrchaos/series.hpp"

namespace kerrchaos {

enum class Normalization {
    max_one,   // largest bin equals 1
    unit_sum,  // bins sum to 1
    raw,       // bins sum to the energy sum_n x_n^2 of the (mean-removed) window
};

enum class Taper { none, hann };

std::string to_string(Normalization normalization);
Normalization parse_normalization(const std::string& name);
std::string to_string(Taper taper);
Taper parse_taper(const std::string& name);

struct Spectrum {
    std::vector<double> power;  // bins 0..floor(L/2)
    double bin_width = 0.0;     // 1/L, cycles per pulse
    Normalization normalization = Normalization::max_one;
    bool mean_removed = false;

    double frequency(std::size_t bin) const { return bin_width * static_cast<double>(bin); }
};

struct SpectralPeak {
    std::size_t bin = 0;
    double power = 0.0;
};

/// Spectrum of the pulses window_start..window_end (absolute pulse indices,
/// both inclusive). Needs at least two samples in the window.
Spectrum power_spectrum(const TimeSeries& series, std::int64_t window_start,
                        std::int64_t window_end, bool remove_mean = true,
                        Normalization normalization = Normalization::max_one,
                        Taper taper = Taper::none);

/// Fraction of the total power held by the k largest bins. Bin 0 is left out
/// when the mean was removed.
double spectral_concentration(const Spectrum& spec, std::size_t k);

/// The k largest local maxima by power, descending; ties go to the lower bin.
std::vector<SpectralPeak> dominant_peaks(const Spectrum& spec, std::size_t k);

}  // namespace kerrchaos
