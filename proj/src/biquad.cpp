#include "ccfilter/biquad.hpp"

#include <cmath>

namespace ccfilter {

void FilterDesign::check() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("FilterDesign: ") + name +
                                        " must be positive and finite");
    };
    positive(r1, "R1");
    positive(r3, "R3");
    positive(r4, "R4");
    positive(r6, "R6");
    positive(c2, "C2");
    positive(c5, "C5");
    auto gain = [](double v, const char* name) {
        if (!(v > 0.0) || !(v <= 2.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("FilterDesign: ") + name +
                                        " must lie in (0, 2]");
    };
    gain(b1, "B1");
    gain(b2, "B2");
    gain(k1, "K1");
    gain(k2, "K2");
}

std::array<bool, 4> input_vector(FilterMode mode) {
    switch (mode) {
    case FilterMode::low_pass: return {true, false, false, true};
    case FilterMode::high_pass: return {false, true, false, false};
    case FilterMode::band_pass: return {false, false, true, false};
    case FilterMode::notch: return {true, true, false, true};
    }
    throw std::invalid_argument("input_vector: bad mode");
}

std::string_view mode_name(FilterMode mode) {
    switch (mode) {
    case FilterMode::low_pass: return "lp";
    case FilterMode::high_pass: return "hp";
    case FilterMode::band_pass: return "bp";
    case FilterMode::notch: return "notch";
    }
    return "?";
}

std::optional<FilterMode> parse_mode(std::string_view name) {
    if (name == "lp" || name == "lowpass") return FilterMode::low_pass;
    if (name == "hp" || name == "highpass") return FilterMode::high_pass;
    if (name == "bp" || name == "bandpass") return FilterMode::band_pass;
    if (name == "notch") return FilterMode::notch;
    return std::nullopt;
}

namespace {

// The three denominator products shared by every mode. Keeping one spelling
// here is what makes the four canonical denominators coefficient-identical.
struct BaseProducts {
    double d0; // R1 R3 + R3 R6
    double d1; // C5 R1 R4 R6
    double d2; // C2 C5 R1 R3 R4 R6
};

BaseProducts base_products(const FilterDesign& d) {
    return {
        d.r1 * d.r3 + d.r3 * d.r6,
        d.c5 * d.r1 * d.r4 * d.r6,
        d.c2 * d.c5 * d.r1 * d.r3 * d.r4 * d.r6,
    };
}

RationalTF make_tf(const FilterDesign& d, FilterMode mode, double forward_gain,
                   double loop_gain) {
    const BaseProducts p = base_products(d);
    std::vector<double> den{p.d0, loop_gain * p.d1, loop_gain * p.d2};
    std::vector<double> num(3, 0.0);
    switch (mode) {
    case FilterMode::low_pass:
        num[0] = d.r3 * d.r6 + d.r1 * d.r3;
        break;
    case FilterMode::high_pass:
        num[2] = forward_gain * p.d2;
        break;
    case FilterMode::band_pass:
        num[1] = forward_gain * p.d1;
        break;
    case FilterMode::notch:
        num[0] = d.r3 * d.r6 + d.r1 * d.r3;
        num[2] = forward_gain * p.d2;
        break;
    }
    return RationalTF(std::move(num), std::move(den));
}

} // namespace

RationalTF transfer_function(const FilterDesign& d, FilterMode mode) {
    d.check();
    return make_tf(d, mode, 1.0, 1.0);
}

RationalTF nonideal_transfer_function(const FilterDesign& d, FilterMode mode) {
    d.check();
    // V2/V3 reach the output through conveyor 2 only (K1 K2 B2); the loop
    // gain adds conveyor 1's voltage follower (K1 K2 B1 B2). V1/V4 couple in
    // resistively and carry no gain factor.
    const double forward = d.k1 * d.k2 * d.b2;
    return make_tf(d, mode, forward, forward * d.b1);
}

DesignParams design_params(const FilterDesign& d) {
    d.check();
    const double g = d.gain_product();
    DesignParams out;
    out.omega0 = std::sqrt((d.r1 + d.r6) / (g * d.r1 * d.r4 * d.r6 * d.c2 * d.c5));
    out.bandwidth = 1.0 / (d.r3 * d.c2);
    out.q = out.omega0 / out.bandwidth;
    return out;
}

FilterDesign tune(const FilterDesign& d, double target_omega0, double target_bandwidth) {
    d.check();
    if (!(target_omega0 > 0.0) || !std::isfinite(target_omega0))
        throw std::invalid_argument("tune: target omega0 must be positive and finite");
    if (!(target_bandwidth > 0.0) || !std::isfinite(target_bandwidth))
        throw std::invalid_argument("tune: target bandwidth must be positive and finite");

    FilterDesign out = d;
    out.r3 = 1.0 / (target_bandwidth * d.c2);
    out.c5 = (d.r1 + d.r6) /
             (d.gain_product() * d.r1 * d.r4 * d.r6 * d.c2 * target_omega0 * target_omega0);
    if (!(out.r3 > 0.0) || !std::isfinite(out.r3) || !(out.c5 > 0.0) || !std::isfinite(out.c5))
        throw InfeasibleTuningError("tune: required R3=" + std::to_string(out.r3) +
                                    " C5=" + std::to_string(out.c5) + " not realizable");
    return out;
}

Netlist build_reference_netlist(const FilterDesign& d, FilterMode mode) {
    d.check();
    const auto active = input_vector(mode);

    Netlist n;
    n.set_title(std::string("ccii biquad ") + std::string(mode_name(mode)));
    const NodeId gnd = n.node("0");
    const NodeId in = n.node("in");
    const NodeId out = n.node("out");
    const NodeId f = n.node("f");
    const NodeId r = n.node("r");
    const NodeId w = n.node("w");
    const auto terminal = [&](int i) { return active[i] ? in : gnd; };

    n.add_vsource("VIN", in, gnd, 1.0, "in");
    n.add_resistor("R1", terminal(0), out, d.r1);
    n.add_capacitor("C2", f, terminal(1), d.c2);
    n.add_resistor("R3", f, terminal(2), d.r3);
    n.add_resistor("R6", terminal(3), out, d.r6);
    n.add_resistor("R4", r, gnd, d.r4);
    n.add_capacitor("C5", w, gnd, d.c5);
    n.add_ccii("X1", out, f, gnd, r, d.b1, d.k1);
    n.add_ccii("X2", r, w, out, gnd, d.b2, d.k2);
    n.set_output(out);
    return n;
}

} // namespace ccfilter
