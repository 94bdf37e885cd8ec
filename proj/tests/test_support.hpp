#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ccfilter/biquad.hpp"
#include "ccfilter/netlist.hpp"
#include "ccfilter/rational_tf.hpp"

namespace ccfilter::test {

inline double log_uniform(std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

/// Random design over the standard component ranges: R log-uniform in
/// [1 kOhm, 100 kOhm], C log-uniform in [100 pF, 100 nF], ideal gains.
inline FilterDesign random_design(std::mt19937& rng) {
    FilterDesign d;
    d.r1 = log_uniform(rng, 1e3, 1e5);
    d.r3 = log_uniform(rng, 1e3, 1e5);
    d.r4 = log_uniform(rng, 1e3, 1e5);
    d.r6 = log_uniform(rng, 1e3, 1e5);
    d.c2 = log_uniform(rng, 100e-12, 100e-9);
    d.c5 = log_uniform(rng, 100e-12, 100e-9);
    return d;
}

/// Random design constrained to a q range by solving R3 = q/(omega0 C2);
/// omega0 does not depend on R3, so the solve is direct.
inline FilterDesign random_design_with_q(std::mt19937& rng, double q_lo, double q_hi) {
    FilterDesign d = random_design(rng);
    std::uniform_real_distribution<double> qd(q_lo, q_hi);
    d.r3 = qd(rng) / (design_params(d).omega0 * d.c2);
    return d;
}

/// Worst per-coefficient deviation between two canonical transfer functions,
/// relative to the largest coefficient after frequency normalization.
///
/// Raw coefficients of the same polynomial differ by tens of orders of
/// magnitude (farads against ohms), so a naive per-coefficient relative test
/// is meaningless for near-zero entries. Scaling coefficient k by w_ref^k
/// (w_ref from the denominator's constant/lead ratio, i.e. the geometric
/// mean pole magnitude) makes every significant coefficient O(1); the
/// returned figure is the max absolute difference in that domain over the
/// largest scaled magnitude.
inline double tf_mismatch(const RationalTF& a, const RationalTF& b) {
    if (a.den().size() != b.den().size() || a.num().size() != b.num().size())
        return std::numeric_limits<double>::infinity();

    const int deg = a.den_degree();
    double w_ref = 1.0;
    if (deg >= 1 && a.den().front() > 0.0) w_ref = std::pow(a.den().front(), 1.0 / deg);

    auto scaled = [&](const std::vector<double>& c) {
        std::vector<double> out(c.size());
        double p = 1.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            out[k] = c[k] * p;
            p *= w_ref;
        }
        return out;
    };
    const auto na = scaled(a.num());
    const auto nb = scaled(b.num());
    const auto da = scaled(a.den());
    const auto db = scaled(b.den());

    double peak = 0.0;
    for (const auto* v : {&na, &nb, &da, &db})
        for (double c : *v) peak = std::max(peak, std::abs(c));
    if (peak == 0.0) return 0.0;

    double worst = 0.0;
    for (std::size_t k = 0; k < na.size(); ++k)
        worst = std::max(worst, std::abs(na[k] - nb[k]));
    for (std::size_t k = 0; k < da.size(); ++k)
        worst = std::max(worst, std::abs(da[k] - db[k]));
    return worst / peak;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

/// Random valid netlist for round-trip testing: a connected R/C chain off
/// ground, a source, optional conveyors across random nodes, random title
/// and output node.
inline Netlist random_netlist(std::mt19937& rng) {
    Netlist n;
    std::uniform_int_distribution<int> extra_nodes(1, 5);
    std::uniform_int_distribution<int> coin(0, 1);

    const int count = extra_nodes(rng);
    std::vector<NodeId> nodes{n.node("0")};
    for (int i = 1; i <= count; ++i) nodes.push_back(n.node("n" + std::to_string(i)));

    auto pick = [&] {
        std::uniform_int_distribution<std::size_t> d(0, nodes.size() - 1);
        return nodes[d(rng)];
    };

    int r_seq = 0, c_seq = 0, x_seq = 0;
    for (int i = 1; i <= count; ++i) {
        if (coin(rng))
            n.add_resistor("R" + std::to_string(++r_seq), nodes[i], nodes[i - 1],
                           log_uniform(rng, 1.0, 1e6));
        else
            n.add_capacitor("C" + std::to_string(++c_seq), nodes[i], nodes[i - 1],
                            log_uniform(rng, 1e-12, 1e-3));
    }
    std::uniform_int_distribution<int> conveyors(0, 2);
    std::uniform_real_distribution<double> gain(0.5, 1.5);
    for (int i = conveyors(rng); i > 0; --i)
        n.add_ccii("X" + std::to_string(++x_seq), pick(), pick(), pick(), pick(), gain(rng),
                   gain(rng));

    n.add_vsource("V1", nodes[1], nodes[0], coin(rng) ? 1.0 : log_uniform(rng, 0.1, 10.0),
                  coin(rng) ? "drive" : "");
    if (coin(rng)) n.set_title("generated fixture " + std::to_string(rng() % 1000));

    std::uniform_int_distribution<int> out_pick(1, count);
    n.set_output(nodes[out_pick(rng)]);
    return n;
}

} // namespace ccfilter::test
