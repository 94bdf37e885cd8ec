#pragma once

#include <complex>
#include <vector>

namespace ccfilter {

class RationalTF;

/// Sampled complex gain over a strictly increasing positive frequency grid.
/// At least 16 samples are required so downstream shape analysis has
/// something to work with.
class FrequencyResponse {
public:
    FrequencyResponse(std::vector<double> omegas, std::vector<std::complex<double>> gains);

    std::size_t size() const { return omegas_.size(); }
    double omega(std::size_t i) const { return omegas_[i]; }
    const std::complex<double>& gain(std::size_t i) const { return gains_[i]; }

    const std::vector<double>& omegas() const { return omegas_; }
    const std::vector<std::complex<double>>& gains() const { return gains_; }

private:
    std::vector<double> omegas_;
    std::vector<std::complex<double>> gains_;
};

/// Log-spaced grid w_min * 10^(k/points_per_decade) clipped to w_max
/// (the last point lands on w_max only when the span is a whole number of
/// steps).
std::vector<double> log_grid(double w_min, double w_max, int points_per_decade);

/// Symmetric log grid center * 10^(k/points_per_decade) for
/// k = -n..n covering half_decades each side. The center frequency is always
/// a grid point, which keeps nulls and peaks on-sample.
std::vector<double> centered_log_grid(double center, double half_decades,
                                      int points_per_decade);

/// Evaluate a transfer function over a grid.
FrequencyResponse sample_response(const RationalTF& tf, const std::vector<double>& omegas);

} // namespace ccfilter
