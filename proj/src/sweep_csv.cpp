#include "ccfilter/sweep_csv.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace ccfilter {

void write_sweep_csv(std::ostream& os, const FrequencyResponse& resp) {
    os << "omega_rad_s,freq_hz,mag,mag_db,phase_deg\n";
    char row[200];
    for (std::size_t i = 0; i < resp.size(); ++i) {
        const double w = resp.omega(i);
        const double mag = std::abs(resp.gain(i));
        const double db = mag > 0.0 ? std::max(20.0 * std::log10(mag), -400.0) : -400.0;
        const double phase = std::arg(resp.gain(i)) * 180.0 / std::numbers::pi;
        std::snprintf(row, sizeof row, "%.9g,%.9g,%.9g,%.9g,%.9g\n", w,
                      w / (2.0 * std::numbers::pi), mag, db, phase);
        os << row;
    }
}

std::string sweep_csv_string(const FrequencyResponse& resp) {
    std::ostringstream out;
    write_sweep_csv(out, resp);
    return out.str();
}

} // namespace ccfilter
