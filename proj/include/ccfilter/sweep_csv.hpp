#pragma once

#include <ostream>
#include <string>

#include "ccfilter/frequency_response.hpp"

namespace ccfilter {

/// Write a sweep as CSV with header
///   omega_rad_s,freq_hz,mag,mag_db,phase_deg
/// one row per sample, every number printf %.9g, '.' decimal point, LF line
/// ends. The dB column is clamped at -400 so a zero magnitude stays finite.
/// Output is byte-identical for identical input on every platform this
/// builds on.
void write_sweep_csv(std::ostream& os, const FrequencyResponse& resp);

std::string sweep_csv_string(const FrequencyResponse& resp);

} // namespace ccfilter
