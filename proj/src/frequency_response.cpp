#include "ccfilter/frequency_response.hpp"

#include <cmath>
#include <stdexcept>

#include "ccfilter/rational_tf.hpp"

namespace ccfilter {

FrequencyResponse::FrequencyResponse(std::vector<double> omegas,
                                     std::vector<std::complex<double>> gains)
    : omegas_(std::move(omegas)), gains_(std::move(gains)) {
    if (omegas_.size() != gains_.size())
        throw std::invalid_argument("FrequencyResponse: omega/gain size mismatch");
    if (omegas_.size() < 16)
        throw std::invalid_argument("FrequencyResponse: need at least 16 samples");
    double prev = 0.0;
    for (double w : omegas_) {
        if (!(w > prev) || !std::isfinite(w))
            throw std::invalid_argument(
                "FrequencyResponse: frequencies must be positive and strictly increasing");
        prev = w;
    }
}

std::vector<double> log_grid(double w_min, double w_max, int points_per_decade) {
    if (!(w_min > 0.0) || !(w_max > w_min))
        throw std::invalid_argument("log_grid: need 0 < w_min < w_max");
    if (points_per_decade < 1) throw std::invalid_argument("log_grid: points_per_decade < 1");
    const double decades = std::log10(w_max / w_min);
    const int steps = static_cast<int>(std::floor(decades * points_per_decade + 1e-9));
    std::vector<double> out;
    out.reserve(steps + 1);
    for (int k = 0; k <= steps; ++k)
        out.push_back(w_min * std::pow(10.0, static_cast<double>(k) / points_per_decade));
    return out;
}

std::vector<double> centered_log_grid(double center, double half_decades,
                                      int points_per_decade) {
    if (!(center > 0.0) || !(half_decades > 0.0) || points_per_decade < 1)
        throw std::invalid_argument("centered_log_grid: bad arguments");
    const int n = static_cast<int>(std::ceil(half_decades * points_per_decade - 1e-9));
    std::vector<double> out;
    out.reserve(2 * n + 1);
    for (int k = -n; k <= n; ++k)
        out.push_back(center * std::pow(10.0, static_cast<double>(k) / points_per_decade));
    return out;
}

FrequencyResponse sample_response(const RationalTF& tf, const std::vector<double>& omegas) {
    std::vector<std::complex<double>> gains;
    gains.reserve(omegas.size());
    for (double w : omegas) gains.push_back(tf.evaluate(w));
    return FrequencyResponse(omegas, std::move(gains));
}

} // namespace ccfilter
