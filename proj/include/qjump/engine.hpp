#ifndef QJUMP_ENGINE_HPP
#define QJUMP_ENGINE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "qjump/model.hpp"
#include "qjump/state.hpp"

namespace qjump {

// Fixed-step RK4 integration of the n-resolved equations
//
//   d s11^(n) = -D1 s11^(n) + D1 s11^(n-1) + i O0 (s12^(n) - s21^(n))
//   d s22^(n) =                            - i O0 (s12^(n) - s21^(n))
//   d s12^(n) = i eps s12^(n) + i O0 (s11^(n) - s22^(n)) - (D1/2) s12^(n)
//
// with s11^(-1) = 0 and the outflow of the topmost block accumulated into
// `leaked`, plus the reduced (n-traced) pair
//
//   d s11 = i O0 (s12 - s21)
//   d s12 = i eps s12 + i O0 (2 s11 - 1) - (D1/2) s12.

struct EvolveOptions {
    double leak_budget = 1e-9;      // max tolerated leaked mass
    std::size_t n_max_cap = 200000; // ladder growth cap
    bool auto_grow = true;          // grow n_max per required_n_max before stepping
};

// Largest step the fixed-step integrator accepts for these parameters.
double stability_dt(const ModelParams& p);

// Ladder length that keeps the leaked mass far below budget up to t_end:
// ceil(D1 t + 10 sqrt(D1 t) + 10).
std::size_t required_n_max(double d1, double t_end);

// Time derivative of the full ladder (allocating; the integrator uses an
// internal non-allocating sweep). The t field of the result carries
// state.t; leaked carries d(leaked)/dt.
NResolvedState rhs_n_resolved(const NResolvedState& state, const ModelParams& p);

// Time derivative of the reduced state (t field carries state.t).
ReducedState rhs_reduced(const ReducedState& state, const ModelParams& p);

// Advances state to t_end in uniform steps of at most dt.
// Throws NumericalError when dt exceeds stability_dt, TruncationOverflowError
// when the leaked mass ends above budget.
NResolvedState evolve(NResolvedState state, const ModelParams& p, double t_end,
                      double dt, const EvolveOptions& opt = {});

ReducedState evolve_reduced(ReducedState state, const ModelParams& p,
                            double t_end, double dt);

// Snapshots at n_samples+1 uniformly spaced times from state.t to t_end
// (endpoints included). Each sample interval is integrated with uniform
// sub-steps of at most dt.
std::vector<NResolvedState> evolve_path(NResolvedState state, const ModelParams& p,
                                        double t_end, double dt, std::size_t n_samples,
                                        const EvolveOptions& opt = {});

std::vector<ReducedState> evolve_reduced_path(ReducedState state, const ModelParams& p,
                                              double t_end, double dt,
                                              std::size_t n_samples);

// P(n, t) = s11^(n) + s22^(n).
CountingDistribution counting_distribution(const NResolvedState& state);

// Ensemble-mean detector current I(t) = D1 s11(t).
std::vector<double> mean_current(std::span<const ReducedState> history,
                                 const ModelParams& p);

// Current from an n-resolved history sampled on a uniform grid: both
// D1 s11(t) and the finite-difference d<n>/dt (central differences,
// one-sided at the ends). The two agree to O(h^2).
struct CurrentSeries {
    std::vector<double> t;
    std::vector<double> from_population;  // D1 s11(t)
    std::vector<double> from_counting;    // d<n>/dt
};
CurrentSeries mean_current(std::span<const NResolvedState> history,
                           const ModelParams& p);

} // namespace qjump

#endif
