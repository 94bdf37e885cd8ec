#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ccfilter/netlist.hpp"
#include "ccfilter/rational_tf.hpp"

namespace ccfilter {

/// Component values for the two-conveyor voltage-mode biquad. Resistors in
/// ohms, capacitors in farads; b/k are the voltage and current gains of the
/// two conveyors (ideal conveyors have b = k = 1).
struct FilterDesign {
    double r1 = 10e3;
    double r3 = 14e3;
    double r4 = 10e3;
    double r6 = 10e3;
    double c2 = 10e-9;
    double c5 = 10e-9;
    double b1 = 1.0;
    double b2 = 1.0;
    double k1 = 1.0;
    double k2 = 1.0;

    /// The documented demonstration point (the struct defaults).
    static FilterDesign reference() { return FilterDesign{}; }

    /// Combined conveyor gain product K1*K2*B1*B2.
    double gain_product() const { return k1 * k2 * b1 * b2; }

    /// Throws std::invalid_argument unless all values are positive and
    /// finite and every conveyor gain lies in (0, 2].
    void check() const;
};

/// Which of the four input terminals are driven (the rest are grounded).
enum class FilterMode { low_pass, high_pass, band_pass, notch };

/// Drive pattern for terminals V1..V4: LP = (1,0,0,1), HP = (0,1,0,0),
/// BP = (0,0,1,0), notch = (1,1,0,1).
std::array<bool, 4> input_vector(FilterMode mode);

std::string_view mode_name(FilterMode mode);
std::optional<FilterMode> parse_mode(std::string_view name);

/// Derived second-order characteristics of a design.
struct DesignParams {
    double omega0 = 0.0;    ///< natural frequency, rad/s
    double bandwidth = 0.0; ///< -3 dB width, rad/s
    double q = 0.0;         ///< omega0 / bandwidth
};

/// Closed-form transfer function of the ideal-conveyor circuit:
///   D(s) = s^2 C2 C5 R1 R3 R4 R6 + s C5 R1 R4 R6 + (R1 R3 + R3 R6)
/// with numerators R3 R6 + R1 R3 (LP), s^2 C2 C5 R1 R3 R4 R6 (HP),
/// s C5 R1 R4 R6 (BP), and LP + HP combined (notch). Conveyor gains in the
/// design are ignored here; see nonideal_transfer_function.
RationalTF transfer_function(const FilterDesign& d, FilterMode mode);

/// Same circuit with the conveyor gains carried through: the s^2 and s
/// denominator terms and the HP/BP numerators pick up gain products, the
/// constant terms do not. Reduces exactly to transfer_function when all
/// gains are 1.
RationalTF nonideal_transfer_function(const FilterDesign& d, FilterMode mode);

/// omega0 = sqrt((R1+R6)/(G R1 R4 R6 C2 C5)) with G the conveyor gain
/// product, bandwidth = 1/(R3 C2), q = omega0/bandwidth.
DesignParams design_params(const FilterDesign& d);

/// No achievable component values hit the requested targets.
struct InfeasibleTuningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Solve for R3 and C5 that hit the requested omega0 and bandwidth, keeping
/// every other component fixed; bandwidth depends only on R3 (given C2) and
/// omega0 then only on C5, so the two solves are independent.
FilterDesign tune(const FilterDesign& d, double target_omega0, double target_bandwidth);

/// Build the two-conveyor biquad as a netlist: output node "out", driven
/// terminals tied to node "in" (one 1 V source), idle terminals grounded.
///
///   R1: V1 terminal -> out      R6: V4 terminal -> out
///   C2: f -> V2 terminal        R3: f -> V3 terminal
///   X1: y=out x=f z+=gnd z-=r   R4: r -> gnd
///   X2: y=r   x=w z+=out z-=gnd C5: w -> gnd
///
/// The first conveyor forces f to B1*V(out) and drains K1*Ix1 out of r; the
/// second forces w to B2*V(r) and feeds K2*Ix2 into out, closing the loop.
Netlist build_reference_netlist(const FilterDesign& d, FilterMode mode);

} // namespace ccfilter
