#pragma once

#include <optional>
#include <stdexcept>

#include "ccfilter/biquad.hpp"
#include "ccfilter/frequency_response.hpp"

namespace ccfilter {

/// Quantities read off a sampled response. omega0 and bandwidth are in
/// rad/s; gains are linear (not dB).
struct MeasuredParams {
    FilterMode kind = FilterMode::low_pass;
    double omega0 = 0.0;
    double q = 0.0;
    double bandwidth = 0.0;
    double dc_gain = 0.0;           ///< magnitude at the lowest grid point
    double hf_gain = 0.0;           ///< magnitude at the highest grid point
    double peak_or_null_gain = 0.0; ///< refined extremum magnitude
};

/// The sweep does not bracket the feature measure() needs (peak or null on
/// a grid edge, missing -3 dB or phase crossing).
struct MeasurementError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Decide the response shape from band levels alone:
///   low-pass   passband at DC (within +/-1 dB of unity), top end <= -30 dB
///   high-pass  the mirror image
///   notch      both ends flat, an interior dip <= -30 dB
///   band-pass  both ends <= -20 dB with an interior peak
/// Checked in that order; anything else is nullopt. The sweep must span the
/// transition region (roughly two decades around the corner) for the levels
/// to mean anything.
std::optional<FilterMode> classify(const FrequencyResponse& resp);

/// Measure omega0 / q / bandwidth for a response of the given shape.
///
/// Band-pass: quadratic interpolation of the peak in (log w, dB), -3 dB
/// crossings by linear interpolation, q = omega0 / (w_hi - w_lo).
/// Notch: quadratic interpolation of |H|^2 around the null (locally
/// parabolic there), -3 dB points relative to the band level.
/// Low/high-pass: omega0 from the phase crossing of -45 deg per pole order
/// (low-pass; positive for high-pass), order 1 or 2 from the asymptotic
/// slope, q from the magnitude at omega0 over the passband gain.
MeasuredParams measure(const FrequencyResponse& resp, FilterMode kind);

} // namespace ccfilter
