#include "ccfilter/rational_tf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ccfilter {

namespace {

// Drop exactly-zero trailing coefficients so the stored size reflects the
// true degree. Nothing magnitude-based happens here: coefficients of mixed
// physical units legitimately span fifteen-plus orders of magnitude, so any
// relative threshold would eat real terms. Fitted coefficients are de-noised
// by the extraction code in its normalized domain before they get here.
void trim_poly(std::vector<double>& c) {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
}

} // namespace

RationalTF::RationalTF(std::vector<double> num, std::vector<double> den)
    : num_(std::move(num)), den_(std::move(den)) {
    for (double v : num_) {
        if (!std::isfinite(v))
            throw std::invalid_argument("RationalTF: non-finite numerator coefficient");
    }
    for (double v : den_) {
        if (!std::isfinite(v))
            throw std::invalid_argument("RationalTF: non-finite denominator coefficient");
    }
    trim_poly(num_);
    trim_poly(den_);
    if (den_.empty())
        throw std::invalid_argument("RationalTF: zero denominator polynomial");
    if (num_.empty()) num_.push_back(0.0);
    if (num_.size() > den_.size())
        throw std::invalid_argument("RationalTF: numerator degree exceeds denominator degree");
    const double lead = den_.back();
    for (double& v : num_) v /= lead;
    for (double& v : den_) v /= lead;
    den_.back() = 1.0;
}

std::complex<double> RationalTF::evaluate(double omega) const {
    const std::complex<double> s(0.0, omega);
    std::complex<double> n(0.0, 0.0);
    for (auto it = num_.rbegin(); it != num_.rend(); ++it) n = n * s + *it;
    std::complex<double> d(0.0, 0.0);
    for (auto it = den_.rbegin(); it != den_.rend(); ++it) d = d * s + *it;

    // Pole guard: compare |den(jw)| against the sum of term magnitudes, so a
    // cancellation to rounding noise is caught regardless of overall scale.
    const double aw = std::abs(omega);
    double dmag = 0.0;
    double p = 1.0;
    for (double v : den_) {
        dmag += std::abs(v) * p;
        p *= aw;
    }
    const double tol = 64.0 * std::numeric_limits<double>::epsilon();
    if (std::abs(d) < tol * dmag)
        throw std::domain_error("evaluation at pole: |den(j*omega)| vanishes at omega=" +
                                std::to_string(omega));
    return n / d;
}

} // namespace ccfilter
