#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ccfilter/biquad.hpp"

namespace ccfilter {

enum class SensitivityTarget { omega0, q };

/// Classical relative sensitivities S^y_x = (x/y) dy/dx of one parameter
/// (omega0 or q) with respect to each component and conveyor gain.
struct SensitivityReport {
    struct Entry {
        double analytic;
        double numeric;  ///< NaN when only the closed forms were evaluated
        double abs_diff; ///< |analytic - numeric|, NaN likewise
    };

    SensitivityTarget target = SensitivityTarget::omega0;
    /// Fixed order: R1, R3, R4, R6, C2, C5, B1, B2, K1, K2.
    std::vector<std::pair<std::string, Entry>> entries;

    const Entry& at(const std::string& param) const;
};

/// Closed-form sensitivities:
///   omega0: -1/2 for R4, C2, C5 and every conveyor gain; 0 for R3;
///           -R6/(2(R1+R6)) for R1 and -R1/(2(R1+R6)) for R6.
///   q: +1 for R3, +1/2 for C2, otherwise identical to the omega0 column.
/// Every passive-component magnitude is at most 1/2 except S^q_R3 = 1.
std::pair<SensitivityReport, SensitivityReport> analytic_sensitivities(const FilterDesign& d);

/// Central-difference log-derivative check of the closed forms:
///   S = (ln y(x(1+h)) - ln y(x(1-h))) / (ln(1+h) - ln(1-h))
/// with h = rel_step, which must lie in [1e-9, 1e-3]. Fills analytic,
/// numeric, and abs_diff for every entry.
std::pair<SensitivityReport, SensitivityReport> numeric_sensitivities(const FilterDesign& d,
                                                                      double rel_step);

} // namespace ccfilter
