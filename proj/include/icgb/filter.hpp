#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace icgb {

/// Band-pass Butterworth design request. `order` is the analog low-pass
/// prototype order; the digital band-pass has order 2 * order.
struct FilterSpec {
    int order = 3;
    double f_low = 0.5;
    double f_high = 50.0;
    double fs = 2000.0;

    void validate() const;
};

/// One second-order section, a0 normalised to 1:
///   H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)
struct Biquad {
    double b0 = 1.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
};

struct FilterCoefficients {
    std::vector<Biquad> sections;
    double gain = 1.0;

    std::size_t order() const { return 2 * sections.size(); }
};

FilterCoefficients design_bandpass(const FilterSpec& spec);

/// Complex response of the cascade at frequency `f` (Hz).
std::complex<double> frequency_response(const FilterCoefficients& coeffs, double f, double fs);

/// Poles of a single section (roots of z^2 + a1 z + a2).
std::pair<std::complex<double>, std::complex<double>> section_poles(const Biquad& s);

/// Single causal pass with zero initial state.
std::vector<double> sosfilt(const FilterCoefficients& coeffs, std::span<const double> x);

/// Number of odd-reflected samples added at each end by filtfilt().
std::size_t filtfilt_padding(const FilterCoefficients& coeffs);

/// Zero-phase filtering: forward pass, reversed backward pass.
///
/// Both ends are extended by point reflection (2*x[0] - x[k]) over
/// filtfilt_padding() samples and each pass starts from the step
/// steady state scaled to its first input sample. Throws DataError if
/// the input is not longer than the padding or holds non-finite values.
std::vector<double> filtfilt(const FilterCoefficients& coeffs, std::span<const double> x);

}  // namespace icgb
