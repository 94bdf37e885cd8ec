#include "ccfilter/response_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace ccfilter {

namespace {

constexpr double kFlatBandDb = 1.0;   // |level| for "passband at unity"
constexpr double kStopBandDb = -30.0; // suppressed band for LP/HP/notch
constexpr double kBpEdgeDb = -20.0;   // band-pass skirt requirement
const double kHalfPowerDb = 20.0 * std::log10(std::sqrt(2.0));

double to_db(double mag) { return mag > 0.0 ? 20.0 * std::log10(mag) : -400.0; }

struct Shape {
    std::vector<double> logw;
    std::vector<double> mag;
    std::vector<double> db;

    explicit Shape(const FrequencyResponse& resp) {
        const std::size_t n = resp.size();
        logw.reserve(n);
        mag.reserve(n);
        db.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            logw.push_back(std::log10(resp.omega(i)));
            mag.push_back(std::abs(resp.gain(i)));
            db.push_back(to_db(mag.back()));
        }
    }

    std::size_t argmax() const {
        return static_cast<std::size_t>(
            std::max_element(mag.begin(), mag.end()) - mag.begin());
    }
    std::size_t argmin() const {
        return static_cast<std::size_t>(
            std::min_element(mag.begin(), mag.end()) - mag.begin());
    }
};

// Vertex of the parabola through (x0,y0), (x1,y1), (x2,y2), where y1 is the
// local extremum. Returns x1 unchanged when the three points are too flat to
// define one.
struct Parabola {
    double x_vertex;
    double y_vertex;
};

Parabola refine_extremum(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double h1 = x0 - x1;
    const double h2 = x2 - x1;
    const double d1 = y0 - y1;
    const double d2 = y2 - y1;
    const double det = h1 * h2 * (h1 - h2);
    if (det == 0.0) return {x1, y1};
    const double a = (d1 * h2 - d2 * h1) / det;
    const double b = (d2 * h1 * h1 - d1 * h2 * h2) / det;
    if (a == 0.0) return {x1, y1};
    double xv = x1 - b / (2.0 * a);
    xv = std::clamp(xv, std::min(x0, x2), std::max(x0, x2));
    const double dx = xv - x1;
    return {xv, y1 + (a * dx + b) * dx};
}

// x where the polyline (xs, ys) crosses the level y_target between samples i
// and i+1.
double cross_between(const std::vector<double>& xs, const std::vector<double>& ys,
                     std::size_t i, double y_target) {
    const double span = ys[i + 1] - ys[i];
    if (span == 0.0) return xs[i];
    return xs[i] + (y_target - ys[i]) * (xs[i + 1] - xs[i]) / span;
}

double interp_at(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + t * (ys[i + 1] - ys[i]);
}

// Phase in degrees, unwrapped so consecutive samples never jump more than
// half a turn.
std::vector<double> unwrapped_phase_deg(const FrequencyResponse& resp) {
    std::vector<double> phase;
    phase.reserve(resp.size());
    for (std::size_t i = 0; i < resp.size(); ++i) {
        double p = std::arg(resp.gain(i)) * 180.0 / std::numbers::pi;
        if (!phase.empty()) {
            while (p - phase.back() > 180.0) p -= 360.0;
            while (p - phase.back() < -180.0) p += 360.0;
        }
        phase.push_back(p);
    }
    return phase;
}

MeasuredParams measure_band_pass(const Shape& s) {
    MeasuredParams out;
    out.kind = FilterMode::band_pass;
    out.dc_gain = s.mag.front();
    out.hf_gain = s.mag.back();

    const std::size_t p = s.argmax();
    if (p == 0 || p + 1 == s.mag.size())
        throw MeasurementError("sweep too narrow: band-pass peak sits on a grid edge");

    const Parabola peak = refine_extremum(s.logw[p - 1], s.db[p - 1], s.logw[p], s.db[p],
                                          s.logw[p + 1], s.db[p + 1]);
    out.omega0 = std::pow(10.0, peak.x_vertex);
    out.peak_or_null_gain = std::pow(10.0, peak.y_vertex / 20.0);

    const double target = peak.y_vertex - kHalfPowerDb;
    std::optional<double> x_lo, x_hi;
    for (std::size_t i = p; i-- > 0;) {
        if (s.db[i] <= target) {
            x_lo = cross_between(s.logw, s.db, i, target);
            break;
        }
    }
    for (std::size_t i = p; i + 1 < s.db.size(); ++i) {
        if (s.db[i + 1] <= target) {
            x_hi = cross_between(s.logw, s.db, i, target);
            break;
        }
    }
    if (!x_lo || !x_hi)
        throw MeasurementError("sweep too narrow: -3 dB skirt not bracketed");

    out.bandwidth = std::pow(10.0, *x_hi) - std::pow(10.0, *x_lo);
    out.q = out.omega0 / out.bandwidth;
    return out;
}

MeasuredParams measure_notch(const FrequencyResponse& resp, const Shape& s) {
    MeasuredParams out;
    out.kind = FilterMode::notch;
    out.dc_gain = s.mag.front();
    out.hf_gain = s.mag.back();

    const std::size_t m = s.argmin();
    if (m == 0 || m + 1 == s.mag.size())
        throw MeasurementError("sweep too narrow: notch minimum sits on a grid edge");

    // |H|^2 is locally parabolic in omega around the null, so refine there
    // on a linear frequency axis.
    auto sq = [&](std::size_t i) { return s.mag[i] * s.mag[i]; };
    const Parabola null = refine_extremum(resp.omega(m - 1), sq(m - 1), resp.omega(m), sq(m),
                                          resp.omega(m + 1), sq(m + 1));
    out.omega0 = null.x_vertex;
    out.peak_or_null_gain = std::sqrt(std::max(null.y_vertex, 0.0));

    const double band_db = 0.5 * (s.db.front() + s.db.back());
    const double target = band_db - kHalfPowerDb;
    std::optional<double> x_lo, x_hi;
    for (std::size_t i = m; i-- > 0;) {
        if (s.db[i] >= target) {
            x_lo = cross_between(s.logw, s.db, i, target);
            break;
        }
    }
    for (std::size_t i = m; i + 1 < s.db.size(); ++i) {
        if (s.db[i + 1] >= target) {
            x_hi = cross_between(s.logw, s.db, i, target);
            break;
        }
    }
    if (!x_lo || !x_hi)
        throw MeasurementError("sweep too narrow: notch -3 dB shoulders not bracketed");

    out.bandwidth = std::pow(10.0, *x_hi) - std::pow(10.0, *x_lo);
    out.q = out.omega0 / out.bandwidth;
    return out;
}

MeasuredParams measure_corner(const FrequencyResponse& resp, const Shape& s, bool low_pass) {
    MeasuredParams out;
    out.kind = low_pass ? FilterMode::low_pass : FilterMode::high_pass;
    out.dc_gain = s.mag.front();
    out.hf_gain = s.mag.back();
    out.peak_or_null_gain = s.mag[s.argmax()];

    // Pole count from the stopband slope, one decade in from the edge.
    const std::size_t n = s.db.size();
    double slope;
    if (low_pass) {
        std::size_t j = n - 1;
        while (j > 0 && s.logw[n - 1] - s.logw[j] < 1.0) --j;
        slope = -(s.db[n - 1] - s.db[j]) / (s.logw[n - 1] - s.logw[j]);
    } else {
        std::size_t j = 0;
        while (j + 1 < n && s.logw[j] - s.logw[0] < 1.0) ++j;
        slope = (s.db[j] - s.db[0]) / (s.logw[j] - s.logw[0]);
    }
    const int order = std::clamp(static_cast<int>(std::lround(slope / 20.0)), 1, 2);

    // The natural frequency is where the phase passes -45 deg per pole
    // (+45 deg per pole for high-pass); phase is monotone for these shapes.
    const std::vector<double> phase = unwrapped_phase_deg(resp);
    const double target = (low_pass ? -45.0 : 45.0) * order;
    std::optional<double> x0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const bool brackets = (phase[i] - target) * (phase[i + 1] - target) <= 0.0 &&
                              phase[i] != phase[i + 1];
        if (brackets) {
            x0 = cross_between(s.logw, phase, i, target);
            break;
        }
    }
    if (!x0)
        throw MeasurementError("sweep too narrow: phase crossing not bracketed");

    out.omega0 = std::pow(10.0, *x0);
    const double ref_gain = low_pass ? out.dc_gain : out.hf_gain;
    const double mag_at = std::pow(10.0, interp_at(s.logw, s.db, *x0) / 20.0);
    out.q = mag_at / ref_gain;
    out.bandwidth = out.omega0 / out.q;
    return out;
}

} // namespace

std::optional<FilterMode> classify(const FrequencyResponse& resp) {
    const Shape s(resp);
    const double dc = s.db.front();
    const double hf = s.db.back();
    const std::size_t imax = s.argmax();
    const std::size_t imin = s.argmin();

    const bool dc_flat = std::abs(dc) <= kFlatBandDb;
    const bool hf_flat = std::abs(hf) <= kFlatBandDb;

    if (dc_flat && hf <= kStopBandDb) return FilterMode::low_pass;
    if (hf_flat && dc <= kStopBandDb) return FilterMode::high_pass;
    if (dc_flat && hf_flat && imin != 0 && imin + 1 != s.db.size() &&
        s.db[imin] <= kStopBandDb)
        return FilterMode::notch;
    if (dc <= kBpEdgeDb && hf <= kBpEdgeDb && imax != 0 && imax + 1 != s.db.size() &&
        s.db[imax] > dc && s.db[imax] > hf)
        return FilterMode::band_pass;
    return std::nullopt;
}

MeasuredParams measure(const FrequencyResponse& resp, FilterMode kind) {
    const Shape s(resp);
    switch (kind) {
    case FilterMode::band_pass: return measure_band_pass(s);
    case FilterMode::notch: return measure_notch(resp, s);
    case FilterMode::low_pass: return measure_corner(resp, s, true);
    case FilterMode::high_pass: return measure_corner(resp, s, false);
    }
    throw std::invalid_argument("measure: bad mode");
}

} // namespace ccfilter
