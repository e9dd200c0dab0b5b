#include "icgb/filter.hpp"

#include "icgb/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace icgb {

namespace {

using cplx = std::complex<double>;

// Initial TDF-II state of every section for a unit step held forever.
std::vector<std::array<double, 2>> step_steady_state(const FilterCoefficients& c) {
    std::vector<std::array<double, 2>> zi(c.sections.size());
    double v = c.gain;
    for (std::size_t k = 0; k < c.sections.size(); ++k) {
        const Biquad& s = c.sections[k];
        const double dc = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
        const double y = dc * v;
        const double z2 = s.b2 * v - s.a2 * y;
        const double z1 = s.b1 * v - s.a1 * y + z2;
        zi[k] = {z1, z2};
        v = y;
    }
    return zi;
}

void run_cascade(const FilterCoefficients& c, std::vector<double>& x,
                 std::vector<std::array<double, 2>> state) {
    for (double& sample : x) {
        double v = sample * c.gain;
        for (std::size_t k = 0; k < c.sections.size(); ++k) {
            const Biquad& s = c.sections[k];
            auto& z = state[k];
            const double y = s.b0 * v + z[0];
            z[0] = s.b1 * v - s.a1 * y + z[1];
            z[1] = s.b2 * v - s.a2 * y;
            v = y;
        }
        sample = v;
    }
}

}  // namespace

void FilterSpec::validate() const {
    if (order < 1) throw ConfigError("filter order must be >= 1");
    if (!(fs > 0.0) || !std::isfinite(fs)) throw ConfigError("sampling rate must be positive");
    if (!(f_low > 0.0)) throw ConfigError("low cutoff must be > 0 Hz");
    if (!(f_low < f_high))
        throw ConfigError("low cutoff " + std::to_string(f_low) + " Hz must be below high cutoff " +
                          std::to_string(f_high) + " Hz");
    if (!(f_high < fs / 2.0)) throw ConfigError("high cutoff must be below Nyquist (fs/2)");
}

FilterCoefficients design_bandpass(const FilterSpec& spec) {
    spec.validate();
    const int n = spec.order;
    const double fs2 = 2.0 * spec.fs;

    // Prewarped analog band edges (rad/s).
    const double wl = fs2 * std::tan(std::numbers::pi * spec.f_low / spec.fs);
    const double wh = fs2 * std::tan(std::numbers::pi * spec.f_high / spec.fs);
    const double bw = wh - wl;
    const double w0sq = wl * wh;

    // Low-pass prototype poles on the unit circle, mapped s -> (s^2 + w0^2) / (bw s).
    std::vector<cplx> analog;
    analog.reserve(2 * n);
    for (int k = 0; k < n; ++k) {
        const cplx p = std::polar(1.0, std::numbers::pi * (2.0 * k + n + 1) / (2.0 * n));
        const cplx a = p * (bw / 2.0);
        const cplx d = std::sqrt(a * a - w0sq);
        analog.push_back(a + d);
        analog.push_back(a - d);
    }

    // Bilinear map. The n zeros at s = 0 land on z = 1, the n at infinity on z = -1.
    cplx den = 1.0;
    std::vector<cplx> digital;
    digital.reserve(analog.size());
    for (const cplx& s : analog) {
        den *= (fs2 - s);
        digital.push_back((fs2 + s) / (fs2 - s));
    }
    const double gain = (std::pow(bw, n) * std::pow(fs2, n) / den).real();

    std::vector<cplx> upper;
    std::vector<double> real_poles;
    for (const cplx& z : digital) {
        if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z)))
            real_poles.push_back(z.real());
        else if (z.imag() > 0.0)
            upper.push_back(z);
    }
    std::sort(real_poles.begin(), real_poles.end());
    if (upper.size() * 2 + real_poles.size() != digital.size() || real_poles.size() % 2 != 0)
        throw ConfigError("band-pass design produced an unpaired pole set");

    FilterCoefficients out;
    out.gain = gain;
    for (const cplx& z : upper)
        out.sections.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
    for (std::size_t i = 0; i < real_poles.size(); i += 2) {
        const double p = real_poles[i], q = real_poles[i + 1];
        out.sections.push_back({1.0, 0.0, -1.0, -(p + q), p * q});
    }
    // Poles nearest the unit circle go last.
    std::sort(out.sections.begin(), out.sections.end(),
              [](const Biquad& a, const Biquad& b) { return a.a2 < b.a2; });
    return out;
}

std::complex<double> frequency_response(const FilterCoefficients& coeffs, double f, double fs) {
    const double w = 2.0 * std::numbers::pi * f / fs;
    const cplx z1 = std::polar(1.0, -w);
    const cplx z2 = z1 * z1;
    cplx h = coeffs.gain;
    for (const Biquad& s : coeffs.sections)
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    return h;
}

std::pair<std::complex<double>, std::complex<double>> section_poles(const Biquad& s) {
    const cplx disc = std::sqrt(cplx(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
    return {(-s.a1 + disc) / 2.0, (-s.a1 - disc) / 2.0};
}

std::vector<double> sosfilt(const FilterCoefficients& coeffs, std::span<const double> x) {
    std::vector<double> y(x.begin(), x.end());
    run_cascade(coeffs, y, std::vector<std::array<double, 2>>(coeffs.sections.size(), {0.0, 0.0}));
    return y;
}

std::size_t filtfilt_padding(const FilterCoefficients& coeffs) {
    return 3 * (coeffs.order() + 1);
}

std::vector<double> filtfilt(const FilterCoefficients& coeffs, std::span<const double> x) {
    const std::size_t pad = filtfilt_padding(coeffs);
    if (x.size() <= pad)
        throw DataError("input too short for zero-phase filtering: " + std::to_string(x.size()) +
                        " samples, need more than " + std::to_string(pad));
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]))
            throw DataError("non-finite input sample at index " + std::to_string(i));

    const std::size_t n = x.size();
    std::vector<double> ext(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) {
        ext[i] = 2.0 * x[0] - x[pad - i];
        ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];
    }
    std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));

    const auto zi = step_steady_state(coeffs);
    auto scaled = [&](double v) {
        auto state = zi;
        for (auto& z : state) {
            z[0] *= v;
            z[1] *= v;
        }
        return state;
    };

    run_cascade(coeffs, ext, scaled(ext.front()));
    std::reverse(ext.begin(), ext.end());
    run_cascade(coeffs, ext, scaled(ext.front()));
    std::reverse(ext.begin(), ext.end());

    return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
            ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

}  // namespace icgb
