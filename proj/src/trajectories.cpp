#include "qjump/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "qjump/engine.hpp"
#include "qjump/errors.hpp"
#include "qjump/rng.hpp"

namespace qjump {

namespace {

double default_window(const ModelParams& p, double t_end) {
    return p.d1 > 0.0 ? 20.0 / p.d1 : t_end;
}

void check_window(double window, double d1) {
    if (d1 > 0.0 && window < 10.0 / d1 * (1.0 - 1e-12))
        throw ConfigError("window too small: need at least 10/D1 to resolve levels");
    if (!(window > 0.0)) throw ConfigError("window must be positive");
}

// Unnormalized no-jump generator: coherent evolution plus loss -D1 p1 on
// the conducting population and -(D1/2) on the coherence. The trace decay
// rate equals the jump hazard D1 s11.
struct CondState {
    double p1, p2, x, y;
};

inline CondState nojump_rhs(const CondState& s, const ModelParams& p) {
    return {-2.0 * p.omega0 * s.y - p.d1 * s.p1,
            2.0 * p.omega0 * s.y,
            -p.epsilon * s.y - 0.5 * p.d1 * s.x,
            p.epsilon * s.x + p.omega0 * (s.p1 - s.p2) - 0.5 * p.d1 * s.y};
}

inline CondState axpy(const CondState& s, double a, const CondState& k) {
    return {s.p1 + a * k.p1, s.p2 + a * k.p2, s.x + a * k.x, s.y + a * k.y};
}

inline void rk4_nojump(CondState& s, const ModelParams& p, double h) {
    const CondState k1 = nojump_rhs(s, p);
    const CondState k2 = nojump_rhs(axpy(s, 0.5 * h, k1), p);
    const CondState k3 = nojump_rhs(axpy(s, 0.5 * h, k2), p);
    const CondState k4 = nojump_rhs(axpy(s, h, k3), p);
    const double h6 = h / 6.0;
    s.p1 += h6 * (k1.p1 + 2.0 * k2.p1 + 2.0 * k3.p1 + k4.p1);
    s.p2 += h6 * (k1.p2 + 2.0 * k2.p2 + 2.0 * k3.p2 + k4.p2);
    s.x += h6 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.y += h6 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
}

std::vector<double> windowed_rate(const std::vector<double>& jump_times,
                                  const std::vector<ReducedState>& grid,
                                  double window, double t_end) {
    std::vector<double> trace;
    if (grid.empty() || !(window > 0.0)) return trace;
    for (const auto& g : grid) {
        const double t0 = g.t;
        if (t0 + window > t_end * (1.0 + 1e-12) + 1e-12) break;
        const auto lo = std::upper_bound(jump_times.begin(), jump_times.end(), t0);
        const auto hi =
            std::upper_bound(jump_times.begin(), jump_times.end(), t0 + window);
        trace.push_back(static_cast<double>(hi - lo) / window);
    }
    return trace;
}

} // namespace

std::size_t Trajectory::count_at(double t) const {
    const auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
    return n0 + static_cast<std::size_t>(it - jump_times.begin());
}

Trajectory simulate_trajectory(const InitialCondition& ic, const ModelParams& p,
                               double t_end, double dt, std::uint64_t seed,
                               const TrajectoryOptions& opt,
                               JumpRateStats* rate_stats) {
    p.validate();
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (!(dt > 0.0)) throw NumericalError("step size must be positive");
    if (dt > stability_dt(p) * (1.0 + 1e-12))
        throw NumericalError("step too large: dt exceeds the stability bound");

    const std::size_t samples = std::max<std::size_t>(opt.sample_points, 1);
    const double grid_dt = t_end / static_cast<double>(samples);
    const std::size_t sub =
        static_cast<std::size_t>(std::max(1.0, std::ceil(grid_dt / dt - 1e-9)));
    const double h = grid_dt / static_cast<double>(sub);

    Trajectory traj;
    traj.seed = seed;
    traj.n0 = ic.n0;
    traj.d1 = p.d1;
    traj.window = opt.window > 0.0 ? opt.window : default_window(p, t_end);

    const ReducedState r0 = make_initial_reduced(ic);
    CondState s{r0.s11, 1.0 - r0.s11, r0.s12.real(), r0.s12.imag()};

    Xoshiro256pp rng(seed);
    traj.cond_states.reserve(samples + 1);
    traj.cond_states.push_back({0.0, s.p1, {s.x, s.y}});

    double t = 0.0;
    for (std::size_t g = 1; g <= samples; ++g) {
        for (std::size_t k = 0; k < sub; ++k) {
            const double hazard = p.d1 * s.p1;  // state is normalized here
            // trace decay of the unnormalized no-jump step gives the exact
            // per-step survival; 1 - rho = D1 s11 dt + O(dt^2)
            CondState trial = s;
            rk4_nojump(trial, p, h);
            const double rho = trial.p1 + trial.p2;
            const double u = rng.uniform();
            std::size_t events = 0;
            if (u >= rho) {
                // at least one collector electron this step; multiplicity
                // is Poisson in the integrated hazard so counts stay exact
                const double lambda = -std::log(rho);
                double term = rho * lambda;  // P(1)
                double cdf = rho + term;
                events = 1;
                while (u >= cdf && events < 64) {
                    ++events;
                    term *= lambda / static_cast<double>(events);
                    cdf += term;
                }
            }
            if (rate_stats) {
                rate_stats->sum_xx += hazard * hazard;
                rate_stats->sum_xy += hazard * static_cast<double>(events) / h;
                rate_stats->steps += 1;
            }
            if (events > 0) {
                // the transfer is conditioned on the left dot, so the
                // post-jump state is exactly left-localized
                s = {1.0, 0.0, 0.0, 0.0};
                for (std::size_t j = 1; j <= events; ++j)
                    traj.jump_times.push_back(
                        t + h * static_cast<double>(j) / static_cast<double>(events));
            } else {
                s = {trial.p1 / rho, trial.p2 / rho, trial.x / rho, trial.y / rho};
            }
            t += h;
        }
        const double tg = grid_dt * static_cast<double>(g);
        traj.cond_states.push_back({tg, s.p1, {s.x, s.y}});
        t = tg;
    }

    if (p.d1 > 0.0) check_window(traj.window, p.d1);
    traj.current_trace =
        windowed_rate(traj.jump_times, traj.cond_states, traj.window, t_end);
    return traj;
}

std::vector<double> synthesize_current(const Trajectory& traj, double window) {
    if (traj.d1 > 0.0) check_window(window, traj.d1);
    if (!(window > 0.0)) throw ConfigError("window must be positive");
    return windowed_rate(traj.jump_times, traj.cond_states, window, traj.t_end());
}

unsigned resolve_thread_count(unsigned requested) {
    unsigned n = requested;
    if (n == 0) {
        n = std::thread::hardware_concurrency();
        if (n == 0) n = 1;
    }
    if (const char* cap_env = std::getenv("QJUMP_THREADS")) {
        char* end = nullptr;
        const unsigned long cap = std::strtoul(cap_env, &end, 10);
        if (end != cap_env && cap > 0) n = std::min<unsigned long>(n, cap);
    }
    return std::max(1u, n);
}

std::vector<Trajectory> run_ensemble(const InitialCondition& ic, const ModelParams& p,
                                     double t_end, double dt, std::size_t n_traj,
                                     std::uint64_t master_seed,
                                     const TrajectoryOptions& opt, unsigned threads) {
    if (n_traj == 0) throw ConfigError("ensemble needs at least one trajectory");
    std::vector<Trajectory> out(n_traj);
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_thread_count(threads), n_traj));

    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= n_traj) return;
            try {
                out[i] = simulate_trajectory(
                    ic, p, t_end, dt, Xoshiro256pp::stream_seed(master_seed, i), opt);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

TelegraphStats telegraph_stats(std::span<const Trajectory> ensemble,
                               const ModelParams& p, double probe_time,
                               double threshold) {
    if (ensemble.empty()) throw ConfigError("telegraph_stats: empty ensemble");
    if (!(threshold > 0.0 && threshold < p.d1))
        throw ConfigError("threshold must lie strictly between 0 and D1");

    TelegraphStats stats;
    const auto& grid = ensemble.front().cond_states;
    if (grid.size() < 2) throw ConfigError("telegraph_stats: trajectory grid too short");
    const double grid_dt = grid[1].t - grid[0].t;

    std::uint64_t high = 0, total = 0;
    std::uint64_t probe_high = 0;

    std::size_t probe_idx = static_cast<std::size_t>(std::llround(probe_time / grid_dt));
    const std::size_t trace_len = ensemble.front().current_trace.size();
    if (trace_len == 0)
        throw ConfigError("telegraph_stats: current window longer than the record");
    probe_idx = std::min(probe_idx, trace_len - 1);

    Histogram hist;
    hist.lo = 0.0;
    hist.hi = 1.25 * p.d1;
    hist.counts.assign(25, 0);
    const double bin_w = (hist.hi - hist.lo) / static_cast<double>(hist.counts.size());

    for (const auto& traj : ensemble) {
        const auto& trace = traj.current_trace;
        bool prev_high = false;
        std::size_t run = 0;
        bool have_complete_left_edge = false;  // first run is censored
        for (std::size_t i = 0; i < trace.size(); ++i) {
            const bool is_high = trace[i] > threshold;
            high += is_high ? 1 : 0;
            ++total;
            if (i == 0) {
                prev_high = is_high;
                run = 1;
                continue;
            }
            if (is_high == prev_high) {
                ++run;
            } else {
                if (have_complete_left_edge) {
                    auto& dwell = prev_high ? stats.dwell_high : stats.dwell_low;
                    dwell.push_back(static_cast<double>(run) * grid_dt);
                }
                have_complete_left_edge = true;
                prev_high = is_high;
                run = 1;
            }
        }
        // trailing run is censored at t_end and dropped

        const double probe_current = trace[probe_idx];
        if (probe_current > threshold) ++probe_high;
        int bin = static_cast<int>((probe_current - hist.lo) / bin_w);
        bin = std::clamp(bin, 0, static_cast<int>(hist.counts.size()) - 1);
        ++hist.counts[static_cast<std::size_t>(bin)];
    }

    stats.high_fraction =
        total > 0 ? static_cast<double>(high) / static_cast<double>(total) : 0.0;
    stats.probe_high_fraction =
        static_cast<double>(probe_high) / static_cast<double>(ensemble.size());
    stats.current_histogram = std::move(hist);
    return stats;
}

CurrentAverage mean_over_trajectories(std::span<const Trajectory> ensemble,
                                      double window) {
    if (ensemble.empty()) throw ConfigError("mean_over_trajectories: empty ensemble");
    CurrentAverage avg;
    const std::size_t m = ensemble.size();

    std::vector<std::vector<double>> traces;
    traces.reserve(m);
    std::size_t len = SIZE_MAX;
    for (const auto& traj : ensemble) {
        traces.push_back(synthesize_current(traj, window));
        len = std::min(len, traces.back().size());
    }
    if (len == SIZE_MAX || len == 0) return avg;

    avg.t.resize(len);
    avg.mean.assign(len, 0.0);
    avg.sem.assign(len, 0.0);
    for (std::size_t i = 0; i < len; ++i) avg.t[i] = ensemble.front().cond_states[i].t;

    for (const auto& trace : traces)
        for (std::size_t i = 0; i < len; ++i) avg.mean[i] += trace[i];
    for (std::size_t i = 0; i < len; ++i) avg.mean[i] /= static_cast<double>(m);

    if (m > 1) {
        for (const auto& trace : traces)
            for (std::size_t i = 0; i < len; ++i) {
                const double d = trace[i] - avg.mean[i];
                avg.sem[i] += d * d;
            }
        for (std::size_t i = 0; i < len; ++i)
            avg.sem[i] = std::sqrt(avg.sem[i] / static_cast<double>(m - 1) /
                                   static_cast<double>(m));
    }
    return avg;
}

} // namespace qjump
