#pragma once

#include <complex>
#include <vector>

namespace ccfilter {

/// Rational transfer function H(s) = num(s)/den(s) with real coefficients
/// stored in ascending powers of s (index == power).
///
/// Canonical form is established once, at construction: exactly-zero trailing
/// coefficients are dropped and both polynomials are scaled so the
/// highest-order denominator coefficient is exactly 1. Small coefficients are
/// never rounded away; with mixed physical units they can sit many orders of
/// magnitude below their neighbors and still be structural.
class RationalTF {
public:
    RationalTF(std::vector<double> num, std::vector<double> den);

    const std::vector<double>& num() const { return num_; }
    const std::vector<double>& den() const { return den_; }

    int num_degree() const { return static_cast<int>(num_.size()) - 1; }
    int den_degree() const { return static_cast<int>(den_.size()) - 1; }

    /// Evaluate H(j*omega). Throws std::domain_error ("evaluation at pole")
    /// when |den(j*omega)| collapses below machine tolerance relative to the
    /// magnitudes of the denominator terms.
    std::complex<double> evaluate(double omega) const;

    bool operator==(const RationalTF&) const = default;

private:
    std::vector<double> num_;
    std::vector<double> den_;
};

} // namespace ccfilter
