#ifndef QJUMP_TRAJECTORIES_HPP
#define QJUMP_TRAJECTORIES_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "qjump/model.hpp"
#include "qjump/state.hpp"

namespace qjump {

// Quantum-jump unraveling of the n-resolved dynamics. Between collector
// events the conditional 2x2 state evolves under the no-jump generator
// (coherent part plus loss -D1 s11 on the left population and -(D1/2) on
// the coherence) and is renormalized each step; an event fires in
// [t, t+dt) with probability D1 s11(t) dt + O(dt^2) -- realized as the
// trace deficit of the unnormalized no-jump step, which keeps the event
// rate exact -- and resets the state to the left-localized one. Averaged
// over seeds this reproduces the master equation; a single record shows
// the telegraph signal.

struct Trajectory {
    std::uint64_t seed = 0;            // per-trajectory RNG stream seed
    std::size_t n0 = 0;                // collector count at t = 0
    double d1 = 0.0;                   // detector rate used for the run
    double window = 0.0;               // current-synthesis window
    std::vector<double> jump_times;    // one entry per collector electron
    std::vector<ReducedState> cond_states;  // conditional state on the sample grid
    std::vector<double> current_trace;      // (n(t+w) - n(t))/w on the grid

    double t_end() const { return cond_states.empty() ? 0.0 : cond_states.back().t; }
    // Collector count accumulated by time t.
    std::size_t count_at(double t) const;
};

struct TrajectoryOptions {
    double window = -1.0;          // <= 0: use 20/D1
    std::size_t sample_points = 200;  // conditional-state grid resolution
};

// Self-test accumulator: per-step realized jumps against the sampled rate.
// A through-origin regression of y = (jumped / dt) on x = D1 s11 has slope
// sum_xy / sum_xx, which must come out at 1 for a correct sampler.
struct JumpRateStats {
    double sum_xx = 0.0;
    double sum_xy = 0.0;
    std::uint64_t steps = 0;

    double slope() const { return sum_xx > 0.0 ? sum_xy / sum_xx : 0.0; }
};

Trajectory simulate_trajectory(const InitialCondition& ic, const ModelParams& p,
                               double t_end, double dt, std::uint64_t seed,
                               const TrajectoryOptions& opt = {},
                               JumpRateStats* rate_stats = nullptr);

// Windowed event rate (n(t+w) - n(t))/w on the trajectory's sample grid,
// defined while t + w <= t_end. Throws ConfigError for windows below 10/D1.
std::vector<double> synthesize_current(const Trajectory& traj, double window);

// Runs n_traj trajectories with per-index RNG streams derived from the
// master seed. Results are ordered by index and do not depend on the
// number of worker threads (0 = auto, capped by QJUMP_THREADS).
std::vector<Trajectory> run_ensemble(const InitialCondition& ic, const ModelParams& p,
                                     double t_end, double dt, std::size_t n_traj,
                                     std::uint64_t master_seed,
                                     const TrajectoryOptions& opt = {},
                                     unsigned threads = 0);

struct Histogram {
    double lo = 0.0, hi = 0.0;
    std::vector<std::uint64_t> counts;  // out-of-range values land in edge bins
};

struct TelegraphStats {
    double high_fraction = 0.0;        // pooled fraction of time above threshold
    double probe_high_fraction = 0.0;  // ensemble fraction above threshold at probe_time
    std::vector<double> dwell_high;    // complete dwell intervals, conducting
    std::vector<double> dwell_low;     // complete dwell intervals, blocked
    Histogram current_histogram;       // windowed current at probe_time
};

TelegraphStats telegraph_stats(std::span<const Trajectory> ensemble,
                               const ModelParams& p, double probe_time,
                               double threshold);

struct CurrentAverage {
    std::vector<double> t;
    std::vector<double> mean;
    std::vector<double> sem;  // standard error of the mean
};

// Pointwise average of the synthesized currents over the ensemble.
CurrentAverage mean_over_trajectories(std::span<const Trajectory> ensemble,
                                      double window);

unsigned resolve_thread_count(unsigned requested);

} // namespace qjump

#endif
