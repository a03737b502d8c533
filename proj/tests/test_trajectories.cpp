#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qjump/engine.hpp"
#include "qjump/errors.hpp"
#include "qjump/model.hpp"
#include "qjump/rng.hpp"
#include "qjump/trajectories.hpp"

using namespace qjump;

TEST_CASE("blocked detector produces no jumps") {
    const ModelParams p{0.0, 0.0, 4.0};
    const auto traj = simulate_trajectory({InitialKind::RightLocalized, 0}, p, 50.0,
                                          stability_dt(p), 17);
    CHECK(traj.jump_times.empty());
    for (const double i : traj.current_trace) CHECK(i == 0.0);
    for (const auto& s : traj.cond_states) CHECK(s.s11 == 0.0);
}

TEST_CASE("free conducting dot: jump counts are Poisson over seeds") {
    const ModelParams p{0.0, 0.0, 1.0};
    const std::size_t n_seeds = 400;
    const double t_end = 1000.0;
    std::vector<double> counts(n_seeds);
    TrajectoryOptions opt;
    opt.sample_points = 50;
    for (std::size_t i = 0; i < n_seeds; ++i) {
        const auto traj = simulate_trajectory({InitialKind::LeftLocalized, 0}, p,
                                              t_end, 0.01,
                                              Xoshiro256pp::stream_seed(2718, i), opt);
        counts[i] = static_cast<double>(traj.jump_times.size());
        CHECK(std::is_sorted(traj.jump_times.begin(), traj.jump_times.end()));
    }
    const double mean =
        std::accumulate(counts.begin(), counts.end(), 0.0) / n_seeds;
    double var = 0.0;
    for (const double c : counts) var += (c - mean) * (c - mean);
    var /= (n_seeds - 1);
    // Poisson(1000): mean within 3 sqrt(lambda / n), variance within 3 of
    // its own sampling error sqrt(2 lambda^2 / n)
    CHECK(std::abs(mean - 1000.0) <= 3.0 * std::sqrt(1000.0 / n_seeds));
    CHECK(std::abs(var - 1000.0) <= 3.0 * std::sqrt(2e6 / n_seeds) + 3.0);
}

TEST_CASE("identical seed reproduces the trajectory bit for bit") {
    const ModelParams p{1.0, 0.3, 8.0};
    const auto a = simulate_trajectory({InitialKind::EqualMixture, 0}, p, 6.0,
                                       stability_dt(p), 777);
    const auto b = simulate_trajectory({InitialKind::EqualMixture, 0}, p, 6.0,
                                       stability_dt(p), 777);
    REQUIRE(a.jump_times.size() == b.jump_times.size());
    for (std::size_t i = 0; i < a.jump_times.size(); ++i)
        CHECK(a.jump_times[i] == b.jump_times[i]);
    REQUIRE(a.cond_states.size() == b.cond_states.size());
    for (std::size_t i = 0; i < a.cond_states.size(); ++i) {
        CHECK(a.cond_states[i].s11 == b.cond_states[i].s11);
        CHECK(a.cond_states[i].s12 == b.cond_states[i].s12);
    }
    CHECK(a.current_trace == b.current_trace);

    const auto c = simulate_trajectory({InitialKind::EqualMixture, 0}, p, 6.0,
                                       stability_dt(p), 778);
    CHECK(a.jump_times != c.jump_times);
}

TEST_CASE("conditional state is unit trace and positive on the grid") {
    const ModelParams p{1.0, -0.5, 16.0};
    const auto traj = simulate_trajectory({InitialKind::EqualSuperposition, 0}, p,
                                          4.0, stability_dt(p), 31415);
    for (const auto& s : traj.cond_states) {
        CHECK(s.s11 >= -1e-8);
        CHECK(s.s11 <= 1.0 + 1e-8);
        CHECK(s.s11 * (1.0 - s.s11) >= std::norm(s.s12) - 1e-8);
    }
}

TEST_CASE("the state right after a jump is exactly left-localized") {
    const ModelParams p{1.0, 0.0, 8.0};
    const double dt = stability_dt(p);
    TrajectoryOptions opt;
    opt.sample_points = static_cast<std::size_t>(std::llround(10.0 / dt));
    const auto traj =
        simulate_trajectory({InitialKind::EqualMixture, 0}, p, 10.0, dt, 99, opt);
    REQUIRE(!traj.jump_times.empty());
    std::size_t checked = 0;
    for (const double tj : traj.jump_times) {
        const double idx_f = tj / dt;
        const auto idx = static_cast<std::size_t>(std::llround(idx_f));
        if (std::abs(idx_f - static_cast<double>(idx)) > 1e-9) continue;
        const auto& s = traj.cond_states[idx];
        CHECK(s.s11 == 1.0);
        CHECK(s.s12 == std::complex<double>{0.0, 0.0});
        ++checked;
    }
    CHECK(checked > 15);
}

TEST_CASE("realized jump rate regresses onto D1 sigma11 with slope 1") {
    const ModelParams p{1.0, 0.0, 8.0};
    JumpRateStats stats;
    for (std::size_t i = 0; i < 200; ++i)
        simulate_trajectory({InitialKind::EqualMixture, 0}, p, 20.0, stability_dt(p),
                            Xoshiro256pp::stream_seed(606, i), {}, &stats);
    CHECK(stats.steps == 200 * 16000);
    CHECK(stats.slope() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("ensemble averages reproduce the master equation") {
    const ModelParams p{1.0, 0.0, 8.0};
    const InitialCondition ic{InitialKind::EqualMixture, 0};
    const double t_end = 3.0, dt = stability_dt(p);
    const std::size_t n_traj = 2000;
    TrajectoryOptions opt;
    opt.sample_points = 60;
    const auto ensemble = run_ensemble(ic, p, t_end, dt, n_traj, 4242, opt);

    const std::size_t n_probes = 4;
    const auto red = evolve_reduced_path(make_initial_reduced(ic), p, t_end, dt,
                                         n_probes);
    const auto full = evolve_path(make_initial_state(ic, 0), p, t_end, dt, n_probes);

    for (std::size_t k = 1; k <= n_probes; ++k) {
        const std::size_t gi = k * 15;  // probes at 0.75 k
        double m = 0.0, msq = 0.0, en = 0.0, ensq = 0.0;
        std::size_t low = 0;
        const double t_probe = red[k].t;
        for (const auto& traj : ensemble) {
            const double v = traj.cond_states[gi].s11;
            m += v;
            msq += v * v;
            const auto n = static_cast<double>(traj.count_at(t_probe));
            en += n;
            ensq += n * n;
            if (n <= 2.0) ++low;
        }
        m /= n_traj;
        en /= n_traj;
        const double sem_s = std::sqrt((msq / n_traj - m * m) / n_traj);
        const double sem_n = std::sqrt((ensq / n_traj - en * en) / n_traj);

        CHECK(std::abs(m - red[k].s11) <= 3.0 * sem_s);
        const auto dist = counting_distribution(full[k]);
        CHECK(std::abs(en - dist.mean()) <= 3.0 * sem_n);
        const double p_low = dist.mass_leq(2);
        const double sem_low = std::sqrt(p_low * (1.0 - p_low) / n_traj);
        CHECK(std::abs(static_cast<double>(low) / n_traj - p_low) <= 3.0 * sem_low);
    }
}

TEST_CASE("mixture and superposition records agree after a few 1/D1") {
    const ModelParams p{1.0, 0.0, 16.0};
    const double t_end = 2.0, dt = stability_dt(p);
    const std::size_t n_traj = 1500;
    TrajectoryOptions opt;
    opt.sample_points = 40;
    const auto a = run_ensemble({InitialKind::EqualMixture, 0}, p, t_end, dt, n_traj,
                                11, opt);
    const auto b = run_ensemble({InitialKind::EqualSuperposition, 0}, p, t_end, dt,
                                n_traj, 12, opt);
    for (const std::size_t gi : {std::size_t{20}, std::size_t{40}}) {  // t = 1, 2
        double ma = 0.0, mb = 0.0, qa = 0.0, qb = 0.0;
        for (std::size_t i = 0; i < n_traj; ++i) {
            ma += a[i].cond_states[gi].s11;
            qa += a[i].cond_states[gi].s11 * a[i].cond_states[gi].s11;
            mb += b[i].cond_states[gi].s11;
            qb += b[i].cond_states[gi].s11 * b[i].cond_states[gi].s11;
        }
        ma /= n_traj;
        mb /= n_traj;
        const double se = std::sqrt((qa / n_traj - ma * ma) / n_traj +
                                    (qb / n_traj - mb * mb) / n_traj);
        CHECK(std::abs(ma - mb) <= 3.0 * se);
    }
}

TEST_CASE("windowed current: plateau at D1 for a frozen left dot") {
    const ModelParams p{0.0, 0.0, 2.0};
    const auto traj = simulate_trajectory({InitialKind::LeftLocalized, 0}, p, 400.0,
                                          0.005, 5);
    REQUIRE(!traj.current_trace.empty());
    const double mean =
        std::accumulate(traj.current_trace.begin(), traj.current_trace.end(), 0.0) /
        static_cast<double>(traj.current_trace.size());
    // shot noise of Poisson counting in window w: sqrt(D1 / w) per sample
    CHECK(mean == doctest::Approx(2.0).epsilon(0.1));
    for (const double v : traj.current_trace) CHECK(v >= 0.0);

    CHECK_THROWS_AS(synthesize_current(traj, 1.0), ConfigError);  // < 10 / D1
    const auto again = synthesize_current(traj, traj.window);
    CHECK(again == traj.current_trace);
}

TEST_CASE("telegraph record alternates between the two current levels") {
    const ModelParams p{1.0, 0.0, 32.0};
    const double t0 = p.zeno_time();
    TrajectoryOptions opt;
    opt.sample_points = 300;
    const auto ensemble = run_ensemble({InitialKind::EqualMixture, 0}, p, 3.0 * t0,
                                       stability_dt(p), 400, 2026, opt);
    const auto stats = telegraph_stats(ensemble, p, t0 / 4.0, 0.5 * p.d1);
    // bimodal split at the probe: half conducting, half blocked
    CHECK(stats.probe_high_fraction == doctest::Approx(0.5).epsilon(0.12));
    // histogram mass equals the ensemble size, concentrated at the edges
    std::uint64_t total = 0;
    for (const auto c : stats.current_histogram.counts) total += c;
    CHECK(total == 400);
    // two modes: away from the midpoint D1/2 by more than 0.1 D1
    const auto& hist = stats.current_histogram;
    const double bin_w = (hist.hi - hist.lo) / static_cast<double>(hist.counts.size());
    std::uint64_t modes = 0;
    for (std::size_t b = 0; b < hist.counts.size(); ++b) {
        const double center = hist.lo + bin_w * (static_cast<double>(b) + 0.5);
        if (std::abs(center - 0.5 * p.d1) > 0.1 * p.d1) modes += hist.counts[b];
    }
    CHECK(static_cast<double>(modes) / 400.0 > 0.85);
    // dwell samples exist on both levels for a telegraph signal
    CHECK(stats.dwell_high.size() > 50);
    CHECK(stats.dwell_low.size() > 50);
}

TEST_CASE("long-run occupation above threshold approaches one half") {
    const ModelParams p{1.0, 0.0, 16.0};
    const double t0 = p.zeno_time();
    TrajectoryOptions opt;
    opt.sample_points = 150;
    const auto ensemble = run_ensemble({InitialKind::EqualMixture, 0}, p, 12.0 * t0,
                                       stability_dt(p), 300, 515, opt);
    const auto stats = telegraph_stats(ensemble, p, t0 / 4.0, 0.5 * p.d1);
    CHECK(stats.high_fraction == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("a permanently conducting dot spends all its time high") {
    // a window of 40 expected events and a threshold at D1/4 push the
    // shot-noise misread probability below 1e-8 per sample
    const ModelParams p{0.0, 0.0, 4.0};
    TrajectoryOptions opt;
    opt.window = 40.0 / p.d1;
    const auto ensemble = run_ensemble({InitialKind::LeftLocalized, 0}, p, 100.0,
                                       stability_dt(p), 20, 3, opt);
    const auto stats = telegraph_stats(ensemble, p, 10.0, 0.25 * p.d1);
    CHECK(stats.high_fraction == 1.0);
    CHECK(stats.probe_high_fraction == 1.0);
    CHECK(stats.dwell_low.empty());
}

TEST_CASE("zeno slowdown: blocked dwells lengthen with the detector rate") {
    double prev = 0.0;
    for (const double d1 : {8.0, 16.0, 32.0}) {
        const ModelParams p{1.0, 0.0, d1};
        const double t0 = p.zeno_time();
        TrajectoryOptions opt;
        opt.sample_points = 250;
        const auto ensemble = run_ensemble({InitialKind::EqualMixture, 0}, p,
                                           15.0 * t0, stability_dt(p), 150,
                                           909, opt);
        const auto stats = telegraph_stats(ensemble, p, t0 / 4.0, 0.5 * p.d1);
        REQUIRE(stats.dwell_low.size() > 30);
        const double mean_low =
            std::accumulate(stats.dwell_low.begin(), stats.dwell_low.end(), 0.0) /
            static_cast<double>(stats.dwell_low.size());
        CHECK(mean_low > prev);
        prev = mean_low;
    }
}

TEST_CASE("ensemble mean current settles on the no-collapse line") {
    const ModelParams p{1.0, 0.0, 8.0};
    const double t0 = p.zeno_time();
    TrajectoryOptions opt;
    opt.sample_points = 100;
    const auto ensemble = run_ensemble({InitialKind::EqualMixture, 0}, p, 20.0 * t0,
                                       stability_dt(p), 500, 88, opt);
    const auto avg = mean_over_trajectories(ensemble, 20.0 / p.d1);
    double late = 0.0;
    std::size_t n_late = 0;
    for (std::size_t i = 0; i < avg.t.size(); ++i)
        if (avg.t[i] >= 3.0 * t0) {
            late += avg.mean[i];
            ++n_late;
        }
    late /= static_cast<double>(n_late);
    CHECK(late == doctest::Approx(0.5 * p.d1).epsilon(0.05));

    // an ensemble of one is just that trajectory
    const auto single = mean_over_trajectories(std::span(ensemble.data(), 1),
                                               20.0 / p.d1);
    const auto direct = synthesize_current(ensemble[0], 20.0 / p.d1);
    for (std::size_t i = 0; i < single.mean.size(); ++i) {
        CHECK(single.mean[i] == direct[i]);
        CHECK(single.sem[i] == 0.0);
    }
}

TEST_CASE("worker count does not change ensemble results") {
    const ModelParams p{1.0, 0.0, 8.0};
    const auto one = run_ensemble({InitialKind::EqualMixture, 0}, p, 2.0,
                                  stability_dt(p), 24, 1303, {}, 1);
    const auto many = run_ensemble({InitialKind::EqualMixture, 0}, p, 2.0,
                                   stability_dt(p), 24, 1303, {}, 5);
    REQUIRE(one.size() == many.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].seed == many[i].seed);
        CHECK(one[i].jump_times == many[i].jump_times);
        CHECK(one[i].current_trace == many[i].current_trace);
    }
}

TEST_CASE("error paths: empty ensembles and bad thresholds") {
    const ModelParams p{1.0, 0.0, 8.0};
    CHECK_THROWS_AS(telegraph_stats({}, p, 1.0, 4.0), ConfigError);
    CHECK_THROWS_AS(mean_over_trajectories({}, 1.25), ConfigError);
    const auto ensemble = run_ensemble({InitialKind::EqualMixture, 0}, p, 2.0,
                                       stability_dt(p), 4, 5, {});
    CHECK_THROWS_AS(telegraph_stats(ensemble, p, 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(telegraph_stats(ensemble, p, 1.0, 9.0), ConfigError);
    CHECK_THROWS_AS(run_ensemble({InitialKind::EqualMixture, 0}, p, 2.0,
                                 stability_dt(p), 0, 5, {}),
                    ConfigError);
    CHECK_THROWS_AS(simulate_trajectory({InitialKind::EqualMixture, 0}, p, 2.0,
                                        0.1, 5),
                    NumericalError);
}
