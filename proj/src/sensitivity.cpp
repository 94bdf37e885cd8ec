#include "ccfilter/sensitivity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ccfilter {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct Param {
    const char* name;
    double FilterDesign::* member;
};

constexpr Param kParams[] = {
    {"R1", &FilterDesign::r1}, {"R3", &FilterDesign::r3}, {"R4", &FilterDesign::r4},
    {"R6", &FilterDesign::r6}, {"C2", &FilterDesign::c2}, {"C5", &FilterDesign::c5},
    {"B1", &FilterDesign::b1}, {"B2", &FilterDesign::b2}, {"K1", &FilterDesign::k1},
    {"K2", &FilterDesign::k2},
};

double analytic_value(const FilterDesign& d, SensitivityTarget target,
                      const std::string& name) {
    const double split_r1 = -d.r6 / (2.0 * (d.r1 + d.r6));
    const double split_r6 = -d.r1 / (2.0 * (d.r1 + d.r6));
    if (target == SensitivityTarget::omega0) {
        if (name == "R1") return split_r1;
        if (name == "R3") return 0.0;
        if (name == "R6") return split_r6;
        return -0.5; // R4, C2, C5, B1, B2, K1, K2
    }
    if (name == "R1") return split_r1;
    if (name == "R3") return 1.0;
    if (name == "R6") return split_r6;
    if (name == "C2") return 0.5;
    return -0.5; // R4, C5, B1, B2, K1, K2
}

SensitivityReport analytic_report(const FilterDesign& d, SensitivityTarget target) {
    SensitivityReport report;
    report.target = target;
    for (const Param& p : kParams)
        report.entries.push_back({p.name, {analytic_value(d, target, p.name), kNan, kNan}});
    return report;
}

} // namespace

const SensitivityReport::Entry& SensitivityReport::at(const std::string& param) const {
    for (const auto& [name, entry] : entries)
        if (name == param) return entry;
    throw std::invalid_argument("SensitivityReport: no parameter '" + param + "'");
}

std::pair<SensitivityReport, SensitivityReport> analytic_sensitivities(const FilterDesign& d) {
    d.check();
    return {analytic_report(d, SensitivityTarget::omega0),
            analytic_report(d, SensitivityTarget::q)};
}

std::pair<SensitivityReport, SensitivityReport> numeric_sensitivities(const FilterDesign& d,
                                                                      double rel_step) {
    d.check();
    if (!(rel_step >= 1e-9) || !(rel_step <= 1e-3))
        throw std::invalid_argument("numeric_sensitivities: rel_step outside [1e-9, 1e-3]");

    auto result = analytic_sensitivities(d);

    // Symmetric perturbation in log space. Conveyor gains sit at 1.0 by
    // default and the (0, 2] bound keeps 1 +/- h inside range for any
    // admissible step.
    for (const Param& p : kParams) {
        FilterDesign up = d;
        FilterDesign down = d;
        up.*(p.member) *= (1.0 + rel_step);
        down.*(p.member) *= (1.0 - rel_step);
        const DesignParams hi = design_params(up);
        const DesignParams lo = design_params(down);
        const double dlog = std::log(1.0 + rel_step) - std::log(1.0 - rel_step);

        auto fill = [&](SensitivityReport& report, double y_hi, double y_lo) {
            const double numeric = (std::log(y_hi) - std::log(y_lo)) / dlog;
            for (auto& [name, entry] : report.entries) {
                if (name == p.name) {
                    entry.numeric = numeric;
                    entry.abs_diff = std::abs(entry.analytic - numeric);
                }
            }
        };
        fill(result.first, hi.omega0, lo.omega0);
        fill(result.second, hi.q, lo.q);
    }
    return result;
}

} // namespace ccfilter
