#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ccfilter/frequency_response.hpp"
#include "ccfilter/linalg.hpp"
#include "ccfilter/netlist.hpp"
#include "ccfilter/rational_tf.hpp"

namespace ccfilter {

/// Complex nodal system A x = b at one frequency.
///
/// Unknown layout: node voltages for nodes 1..N (ground eliminated), then one
/// branch current per voltage source, then one x-port current per conveyor,
/// all in element order. row_names mirrors that layout for diagnostics.
struct MnaSystem {
    int dimension = 0;
    Matrix<Complex> a;
    std::vector<Complex> b;
    std::vector<std::string> row_names;
    int output_row = -1;          ///< row of the output node voltage, -1 if ground
    double source_amplitude = 1;  ///< reference amplitude for gain normalization
};

/// The circuit could not be solved: a pivot collapsed during elimination.
/// The message names the equation (node or branch) that went degenerate.
struct SingularCircuitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The solve produced a residual too large to trust.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rational fit from sampled gains could not be completed.
struct ExtractionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Stamp the netlist into a complex system at angular frequency omega
/// (rad/s). The netlist must be valid; this does not re-run validate.
///
/// Stamps, with g = 1/R, y = j*omega*C, currents into each device:
///   resistor/capacitor between p, q: A[p][p]+=g, A[q][q]+=g, A[p][q]-=g, A[q][p]-=g
///   source branch i from p to q:     A[p][i]+=1, A[q][i]-=1, A[i][p]+=1, A[i][q]-=1, b[i]=volts
///   conveyor with x-port current i:  A[x][i]+=1, A[z+][i]+=K, A[z-][i]-=K,
///                                    constraint row i: A[i][x]+=1, A[i][y]-=B
/// Ground rows and columns are dropped rather than stamped.
MnaSystem assemble(const Netlist& n, double omega);

/// LU-solve the assembled system and verify the residual
/// (max-norm of A x - b at most 1e-9 of the max-norm of b).
std::vector<Complex> solve(const MnaSystem& sys);

/// Gain V(out)/amplitude at each grid frequency. The grid must be strictly
/// increasing and positive. threads > 1 splits the grid across worker
/// threads; results are identical to the sequential order regardless.
FrequencyResponse ac_sweep(const Netlist& n, const std::vector<double>& omegas,
                           int threads = 1);

/// Upper bound on the denominator degree a netlist can produce: one per
/// capacitor (each adds one independent state at most).
int capacitor_count(const Netlist& n);

/// Rough characteristic frequency 1/(R_bar * C_bar) from the geometric means
/// of the resistor and capacitor values. Geometric rather than arithmetic
/// means keep the estimate centered when values span decades.
double estimate_char_freq(const Netlist& n);

/// Recover the rational transfer function V(out)/V(in) of a linear netlist by
/// least-squares fit over sampled frequencies.
///
/// The fit runs in a normalized domain sigma = s/w_ref (w_ref from the
/// geometric means of the R and C values) on 2*(2*max_degree+1) log-spaced
/// points spanning two decades either side of w_ref, then refines once with
/// denominator-magnitude weighting on a 10x denser grid. A conditioning
/// estimate above 1e12 raises ExtractionError ("degree overestimate or
/// degenerate circuit").
RationalTF extract_tf(const Netlist& n, int max_degree);

} // namespace ccfilter
