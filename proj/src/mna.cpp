#include "ccfilter/mna.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace ccfilter {

MnaSystem assemble(const Netlist& n, double omega) {
    const int nodes = n.node_count();
    int sources = 0;
    int conveyors = 0;
    for (const auto& e : n.elements()) {
        if (std::holds_alternative<VSource>(e.device)) ++sources;
        if (std::holds_alternative<Ccii>(e.device)) ++conveyors;
    }

    MnaSystem sys;
    sys.dimension = nodes + sources + conveyors;
    sys.a = Matrix<Complex>(sys.dimension, sys.dimension);
    sys.b.assign(sys.dimension, Complex(0.0, 0.0));
    sys.row_names.reserve(sys.dimension);
    for (int i = 1; i <= nodes; ++i) sys.row_names.push_back("node " + n.node_names()[i]);

    // Node voltage unknowns come first; ground (index 0) maps to -1 and its
    // stamps are skipped, which implements the row/column elimination.
    auto row_of = [](const NodeId& id) { return id.index - 1; };
    auto add = [&](int r, int c, Complex v) {
        if (r >= 0 && c >= 0) sys.a(r, c) += v;
    };

    int branch = nodes; // next auxiliary unknown
    for (const auto& e : n.elements()) {
        if (const auto* r = std::get_if<Resistor>(&e.device)) {
            const Complex g(1.0 / r->ohms, 0.0);
            const int p = row_of(e.nodes[0]);
            const int q = row_of(e.nodes[1]);
            add(p, p, g);
            add(q, q, g);
            add(p, q, -g);
            add(q, p, -g);
        } else if (const auto* c = std::get_if<Capacitor>(&e.device)) {
            const Complex y(0.0, omega * c->farads);
            const int p = row_of(e.nodes[0]);
            const int q = row_of(e.nodes[1]);
            add(p, p, y);
            add(q, q, y);
            add(p, q, -y);
            add(q, p, -y);
        } else if (const auto* v = std::get_if<VSource>(&e.device)) {
            const int p = row_of(e.nodes[0]);
            const int q = row_of(e.nodes[1]);
            const int i = branch++;
            sys.row_names.push_back("branch " + e.name);
            add(p, i, Complex(1.0, 0.0));
            add(q, i, Complex(-1.0, 0.0));
            add(i, p, Complex(1.0, 0.0));
            add(i, q, Complex(-1.0, 0.0));
            sys.b[i] = Complex(v->volts, 0.0);
        } else if (const auto* x = std::get_if<Ccii>(&e.device)) {
            const int y = row_of(e.nodes[0]);
            const int xp = row_of(e.nodes[1]);
            const int zp = row_of(e.nodes[2]);
            const int zm = row_of(e.nodes[3]);
            const int i = branch++;
            sys.row_names.push_back("branch " + e.name);
            add(xp, i, Complex(1.0, 0.0));
            add(zp, i, Complex(x->k, 0.0));
            add(zm, i, Complex(-x->k, 0.0));
            add(i, xp, Complex(1.0, 0.0));
            add(i, y, Complex(-x->b, 0.0));
        }
    }

    sys.output_row = n.output().index - 1;
    sys.source_amplitude = 1.0;
    for (const auto& e : n.elements()) {
        if (const auto* v = std::get_if<VSource>(&e.device)) {
            if (v->volts != 0.0) {
                sys.source_amplitude = v->volts;
                break;
            }
        }
    }
    return sys;
}

std::vector<Complex> solve(const MnaSystem& sys) {
    std::vector<Complex> x;
    try {
        x = lu_solve(sys.a, sys.b);
    } catch (const SingularSystemError& e) {
        const std::string where = (e.pivot_row >= 0 &&
                                   e.pivot_row < static_cast<int>(sys.row_names.size()))
                                      ? sys.row_names[e.pivot_row]
                                      : "row " + std::to_string(e.pivot_row);
        throw SingularCircuitError("singular circuit: no usable pivot for " + where);
    }

    double residual = 0.0;
    double bnorm = 0.0;
    for (int r = 0; r < sys.dimension; ++r) {
        Complex sum(0.0, 0.0);
        for (int c = 0; c < sys.dimension; ++c) sum += sys.a(r, c) * x[c];
        residual = std::max(residual, std::abs(sum - sys.b[r]));
        bnorm = std::max(bnorm, std::abs(sys.b[r]));
    }
    if (residual > 1e-9 * bnorm)
        throw NumericalError("solve residual " + std::to_string(residual) +
                             " exceeds 1e-9 of source norm " + std::to_string(bnorm));
    return x;
}

namespace {

Complex gain_at(const Netlist& n, double omega) {
    const MnaSystem sys = assemble(n, omega);
    const std::vector<Complex> x = solve(sys);
    const Complex vout =
        (sys.output_row >= 0) ? x[sys.output_row] : Complex(0.0, 0.0);
    return vout / sys.source_amplitude;
}

} // namespace

FrequencyResponse ac_sweep(const Netlist& n, const std::vector<double>& omegas, int threads) {
    const std::size_t count = omegas.size();
    std::vector<Complex> gains(count);

    int workers = threads;
    if (workers <= 0) workers = 1;
    workers = std::min<int>(workers, static_cast<int>(count));

    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) gains[i] = gain_at(n, omegas[i]);
        return FrequencyResponse(omegas, std::move(gains));
    }

    // Contiguous chunks per worker; each frequency point is independent, so
    // the result is identical to the sequential loop.
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) gains[i] = gain_at(n, omegas[i]);
            } catch (...) {
                failures[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    return FrequencyResponse(omegas, std::move(gains));
}

int capacitor_count(const Netlist& n) {
    int count = 0;
    for (const auto& e : n.elements())
        if (std::holds_alternative<Capacitor>(e.device)) ++count;
    return count;
}

double estimate_char_freq(const Netlist& n) {
    double log_r = 0.0;
    int n_r = 0;
    double log_c = 0.0;
    int n_c = 0;
    for (const auto& e : n.elements()) {
        if (const auto* r = std::get_if<Resistor>(&e.device)) {
            log_r += std::log(r->ohms);
            ++n_r;
        } else if (const auto* c = std::get_if<Capacitor>(&e.device)) {
            log_c += std::log(c->farads);
            ++n_c;
        }
    }
    const double rbar = n_r ? std::exp(log_r / n_r) : 1.0;
    const double cbar = n_c ? std::exp(log_c / n_c) : 1.0 / rbar;
    return 1.0 / (rbar * cbar);
}

namespace {

struct FitSample {
    Complex sigma; // j*omega/w_ref
    Complex gain;
};

// One weighted linear least-squares pass for
//   num(sigma) - H(sigma) * den(sigma) = 0,  den monic of degree d.
// Unknowns: num coefficients 0..d then den coefficients 0..d-1.
LeastSquares fit_pass(const std::vector<FitSample>& samples, int degree,
                      const std::vector<double>& weights) {
    const int cols = 2 * degree + 1;
    const int rows = 2 * static_cast<int>(samples.size());
    Matrix<double> a(rows, cols);
    std::vector<double> rhs(rows);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Complex s = samples[i].sigma;
        const Complex h = samples[i].gain;
        const double w = weights[i];
        Complex p(1.0, 0.0);
        std::vector<Complex> pow(degree + 1);
        for (int m = 0; m <= degree; ++m) {
            pow[m] = p;
            p *= s;
        }
        const int re = static_cast<int>(2 * i);
        const int im = re + 1;
        for (int m = 0; m <= degree; ++m) {
            a(re, m) = w * pow[m].real();
            a(im, m) = w * pow[m].imag();
        }
        for (int m = 0; m < degree; ++m) {
            const Complex v = -h * pow[m];
            a(re, degree + 1 + m) = w * v.real();
            a(im, degree + 1 + m) = w * v.imag();
        }
        const Complex r = h * pow[degree];
        rhs[re] = w * r.real();
        rhs[im] = w * r.imag();
    }
    return solve_least_squares(std::move(a), std::move(rhs));
}

std::vector<double> fit_grid(double w_ref, int count) {
    // Two decades either side of the characteristic frequency.
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
        const double t = (count == 1) ? 0.5 : static_cast<double>(i) / (count - 1);
        out[i] = w_ref * std::pow(10.0, -2.0 + 4.0 * t);
    }
    return out;
}

} // namespace

RationalTF extract_tf(const Netlist& n, int max_degree) {
    if (max_degree < 0) throw std::invalid_argument("extract_tf: negative degree bound");

    const double w_ref = estimate_char_freq(n);

    if (max_degree == 0) {
        const Complex g = gain_at(n, w_ref);
        return RationalTF({g.real()}, {1.0});
    }

    const int d = max_degree;
    auto sample_at = [&](const std::vector<double>& grid) {
        std::vector<FitSample> samples;
        samples.reserve(grid.size());
        for (double w : grid)
            samples.push_back({Complex(0.0, w / w_ref), gain_at(n, w)});
        return samples;
    };

    const auto coarse = sample_at(fit_grid(w_ref, 2 * (2 * d + 1)));
    LeastSquares fit = fit_pass(coarse, d, std::vector<double>(coarse.size(), 1.0));
    if (!(fit.condition < 1e12))
        throw ExtractionError("rational fit ill-conditioned (condition estimate " +
                              std::to_string(fit.condition) +
                              "): degree overestimate or degenerate circuit");

    // Refinement: re-fit on a denser grid, weighting each row by the inverse
    // magnitude of the previously fitted denominator to undo the bias of the
    // linearized formulation.
    const auto dense = sample_at(fit_grid(w_ref, 10 * 2 * (2 * d + 1)));
    std::vector<double> weights(dense.size());
    for (std::size_t i = 0; i < dense.size(); ++i) {
        Complex den(1.0, 0.0); // monic lead
        for (int m = d - 1; m >= 0; --m)
            den = den * dense[i].sigma + fit.solution[static_cast<std::size_t>(d) + 1 + m];
        const double mag = std::abs(den);
        weights[i] = (mag > 1e-30) ? 1.0 / mag : 1.0;
    }
    fit = fit_pass(dense, d, weights);
    if (!(fit.condition < 1e12))
        throw ExtractionError("rational fit ill-conditioned (condition estimate " +
                              std::to_string(fit.condition) +
                              "): degree overestimate or degenerate circuit");

    std::vector<double> num(d + 1);
    std::vector<double> den(d + 1);
    for (int m = 0; m <= d; ++m) {
        num[m] = fit.solution[m];
        den[m] = (m < d) ? fit.solution[static_cast<std::size_t>(d) + 1 + m] : 1.0;
    }

    // Least-squares noise leaves near-zero coefficients around 1e-12..1e-10
    // of the significant ones. Zero them here, in the normalized domain where
    // all coefficients are comparable; after the w_ref^m unscaling below,
    // legitimate coefficients of mixed units sit many orders apart and no
    // threshold could tell dust from signal.
    auto noise_trim = [](std::vector<double>& c) {
        double peak = 0.0;
        for (double v : c) peak = std::max(peak, std::abs(v));
        for (double& v : c)
            if (std::abs(v) < 1e-8 * peak) v = 0.0;
    };
    noise_trim(num);
    noise_trim(den);

    // Map sigma-domain coefficients back to s: coefficient of s^m divides by
    // w_ref^m, then the canonical form renormalizes the lead.
    double scale = 1.0;
    for (int m = 0; m <= d; ++m) {
        num[m] /= scale;
        den[m] /= scale;
        scale *= w_ref;
    }
    return RationalTF(std::move(num), std::move(den));
}

} // namespace ccfilter
