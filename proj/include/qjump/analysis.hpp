#ifndef QJUMP_ANALYSIS_HPP
#define QJUMP_ANALYSIS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "qjump/model.hpp"

namespace qjump {

// Gaussian counting density (2 pi D1 t)^(-1/2) exp(-(D1 t - n)^2 / (2 D1 t)),
// the large-D1t limit of the blocked-free counting statistics.
double gaussian_counting(double n, double t, double d1);

// The density evaluated on n = 0..n_hi and renormalized to a lattice
// distribution (the raw lattice sum is within 1e-6 of 1 once D1 t >= 25).
std::vector<double> gaussian_counting_lattice(double t, double d1, std::size_t n_hi);

// Exact Poisson(mean) probabilities on n = 0..n_hi.
std::vector<double> poisson_pmf(double mean, std::size_t n_hi);

// (1/2) sum |a - b| over the common support; missing tail entries count as 0.
double total_variation(std::span<const double> a, std::span<const double> b);

struct RelaxationFit {
    double t0_fit = 0.0;      // fitted relaxation time
    double t0_formula = 0.0;  // D1 / (8 omega0^2)
    double residual = 0.0;    // rms misfit of the exponential ansatz
};

// Least-squares fit of s11(t) = 1/2 + (1/2) exp(-t / t0) to a sampled
// left-localized relaxation curve. Requires the overdamped regime
// (D1 >= 8 omega0) and a span of at least 5 formula relaxation times;
// non-monotone input is reported as a fit failure.
RelaxationFit fit_zeno_time(std::span<const double> t, std::span<const double> s11,
                            const ModelParams& p);

// Integrates the reduced equations from the left-localized state to
// t = 20 max(t0, 1/omega0) and returns max(|s11 - 1/2|, |s12|).
double steady_state_check(const ModelParams& p);

} // namespace qjump

#endif
