#include "qjump/run.hpp"

#include <cmath>

#include "qjump/analysis.hpp"
#include "qjump/engine.hpp"
#include "qjump/errors.hpp"
#include "qjump/rng.hpp"
#include "qjump/trajectories.hpp"
#include "qjump/version.hpp"

namespace qjump {

namespace {

Table new_table(const ScenarioConfig& c) {
    Table t;
    t.metadata = config_metadata(c);
    t.metadata.emplace_back("rng", kRngAlgorithm);
    t.metadata.emplace_back("version", kVersion);
    return t;
}

std::string companion_path(const std::string& path, const std::string& tag) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "_" + tag;
    return path.substr(0, dot) + "_" + tag + path.substr(dot);
}

std::vector<NamedTable> build_reduced(const ScenarioConfig& c) {
    const auto path = evolve_reduced_path(make_initial_reduced(c.ic), c.params,
                                          c.t_end, c.effective_dt(), c.n_samples);
    Table t = new_table(c);
    t.columns = {"t", "sigma11", "re_sigma12", "im_sigma12", "current"};
    for (const auto& s : path)
        t.rows.push_back(
            {s.t, s.s11, s.s12.real(), s.s12.imag(), c.params.d1 * s.s11});
    return {{"", std::move(t)}};
}

std::vector<NamedTable> build_n_resolved(const ScenarioConfig& c) {
    EvolveOptions opt;
    opt.leak_budget = c.leak_budget;
    opt.n_max_cap = c.n_max_cap;
    const auto path = evolve_path(make_initial_state(c.ic, c.ic.n0), c.params,
                                  c.t_end, c.effective_dt(), c.n_samples, opt);

    Table series = new_table(c);
    series.columns = {"t",      "sigma11", "sigma22", "mean_n",
                      "var_n",  "leaked",  "current"};
    for (const auto& s : path) {
        const auto dist = counting_distribution(s);
        const double left = s.population_left();
        series.rows.push_back({s.t, left, s.population_right(), dist.mean(),
                               dist.variance(), s.leaked, c.params.d1 * left});
    }

    Table dist_table = new_table(c);
    dist_table.columns = {"n", "p"};
    const auto dist = counting_distribution(path.back());
    for (std::size_t n = 0; n < dist.p.size(); ++n)
        dist_table.rows.push_back({static_cast<double>(n), dist.p[n]});
    return {{"", std::move(series)}, {"pn", std::move(dist_table)}};
}

std::vector<NamedTable> build_trajectory(const ScenarioConfig& c) {
    TrajectoryOptions opt;
    opt.window = c.effective_window();
    opt.sample_points = c.n_samples;
    const Trajectory traj =
        simulate_trajectory(c.ic, c.params, c.t_end, c.effective_dt(),
                            Xoshiro256pp::stream_seed(c.master_seed, 0), opt);

    Table t = new_table(c);
    t.metadata.emplace_back("jumps", std::to_string(traj.jump_times.size()));
    t.columns = {"t", "current", "sigma11_cond", "n_cum"};
    // rows stop where the current window runs past t_end
    for (std::size_t i = 0; i < traj.current_trace.size(); ++i) {
        const auto& s = traj.cond_states[i];
        t.rows.push_back({s.t, traj.current_trace[i], s.s11,
                          static_cast<double>(traj.count_at(s.t))});
    }
    return {{"", std::move(t)}};
}

std::vector<NamedTable> build_ensemble(const ScenarioConfig& c) {
    TrajectoryOptions opt;
    opt.window = c.effective_window();
    opt.sample_points = c.n_samples;
    const auto ensemble = run_ensemble(c.ic, c.params, c.t_end, c.effective_dt(),
                                       c.n_traj, c.master_seed, opt, c.threads);
    const auto avg = mean_over_trajectories(ensemble, opt.window);
    const auto stats = telegraph_stats(ensemble, c.params, c.effective_probe_time(),
                                       c.effective_threshold());

    Table t = new_table(c);
    t.metadata.emplace_back("high_fraction", format_double(stats.high_fraction));
    t.metadata.emplace_back("probe_high_fraction",
                            format_double(stats.probe_high_fraction));
    t.columns = {"t", "mean_current", "sem_current", "mean_sigma11", "sem_sigma11"};

    const std::size_t len = avg.t.size();
    std::vector<double> mean_s11(len, 0.0), sem_s11(len, 0.0);
    for (const auto& traj : ensemble)
        for (std::size_t i = 0; i < len; ++i) mean_s11[i] += traj.cond_states[i].s11;
    for (auto& v : mean_s11) v /= static_cast<double>(ensemble.size());
    if (ensemble.size() > 1) {
        for (const auto& traj : ensemble)
            for (std::size_t i = 0; i < len; ++i) {
                const double d = traj.cond_states[i].s11 - mean_s11[i];
                sem_s11[i] += d * d;
            }
        for (auto& v : sem_s11)
            v = std::sqrt(v / static_cast<double>(ensemble.size() - 1) /
                          static_cast<double>(ensemble.size()));
    }
    for (std::size_t i = 0; i < len; ++i)
        t.rows.push_back({avg.t[i], avg.mean[i], avg.sem[i], mean_s11[i], sem_s11[i]});

    Table hist = new_table(c);
    hist.columns = {"bin_lo", "bin_hi", "count"};
    const auto& h = stats.current_histogram;
    const double bin_w =
        (h.hi - h.lo) / static_cast<double>(h.counts.empty() ? 1 : h.counts.size());
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        hist.rows.push_back({h.lo + bin_w * static_cast<double>(b),
                             h.lo + bin_w * static_cast<double>(b + 1),
                             static_cast<double>(h.counts[b])});
    return {{"", std::move(t)}, {"hist", std::move(hist)}};
}

std::vector<NamedTable> build_zeno_sweep(const ScenarioConfig& c) {
    Table t = new_table(c);
    t.columns = {"d1", "t0_fit", "t0_formula", "ratio", "residual"};
    for (const double ratio : c.sweep) {
        ModelParams p = c.params;
        p.d1 = ratio * p.omega0;
        const double t0 = p.zeno_time();
        const auto path =
            evolve_reduced_path(make_initial_reduced({InitialKind::LeftLocalized, 0}),
                                p, 6.0 * t0, stability_dt(p), 600);
        std::vector<double> ts, s11;
        ts.reserve(path.size());
        s11.reserve(path.size());
        for (const auto& s : path) {
            ts.push_back(s.t);
            s11.push_back(s.s11);
        }
        const auto fit = fit_zeno_time(ts, s11, p);
        t.rows.push_back(
            {p.d1, fit.t0_fit, fit.t0_formula, fit.t0_fit / fit.t0_formula,
             fit.residual});
    }
    return {{"", std::move(t)}};
}

std::vector<NamedTable> build_gaussian_check(const ScenarioConfig& c) {
    EvolveOptions opt;
    opt.leak_budget = c.leak_budget;
    opt.n_max_cap = c.n_max_cap;
    const auto end = evolve(make_initial_state(c.ic, c.ic.n0), c.params, c.t_end,
                            c.effective_dt(), opt);
    const auto dist = counting_distribution(end);
    const std::size_t n_hi = dist.p.size() - 1;
    const double tv_gauss = total_variation(
        dist.p, gaussian_counting_lattice(c.t_end, c.params.d1, n_hi));
    const double tv_poisson =
        total_variation(dist.p, poisson_pmf(c.params.d1 * c.t_end, n_hi));
    const bool pass = tv_gauss < 0.03 && tv_poisson < 1e-6;

    Table t = new_table(c);
    t.columns = {"d1t", "tv_gaussian", "tv_poisson", "pass"};
    t.rows.push_back(
        {c.params.d1 * c.t_end, tv_gauss, tv_poisson, pass ? 1.0 : 0.0});
    return {{"", std::move(t)}};
}

std::vector<NamedTable> build_steady_check(const ScenarioConfig& c) {
    const double dev = steady_state_check(c.params);
    const double horizon =
        20.0 * std::max(c.params.zeno_time(), 1.0 / c.params.omega0);
    Table t = new_table(c);
    t.columns = {"omega0", "d1", "epsilon", "horizon", "deviation"};
    t.rows.push_back(
        {c.params.omega0, c.params.d1, c.params.epsilon, horizon, dev});
    return {{"", std::move(t)}};
}

} // namespace

std::vector<NamedTable> build_tables(const ScenarioConfig& c) {
    c.validate();
    switch (c.scenario) {
        case Scenario::Reduced: return build_reduced(c);
        case Scenario::NResolved: return build_n_resolved(c);
        case Scenario::Trajectory: return build_trajectory(c);
        case Scenario::Ensemble: return build_ensemble(c);
        case Scenario::ZenoSweep: return build_zeno_sweep(c);
        case Scenario::GaussianCheck: return build_gaussian_check(c);
        case Scenario::SteadyCheck: return build_steady_check(c);
    }
    throw ConfigError("unhandled scenario");
}

std::vector<std::string> run_scenario(const ScenarioConfig& c) {
    const auto tables = build_tables(c);
    std::vector<std::string> paths;
    for (const auto& [tag, table] : tables) {
        std::string path = c.output_path;
        if (!tag.empty()) path = companion_path(path, tag);
        write_table(table, path, c.format);
        paths.push_back(std::move(path));
    }
    return paths;
}

} // namespace qjump
