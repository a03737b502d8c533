#include "qjump/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>

#include "qjump/analysis.hpp"
#include "qjump/engine.hpp"
#include "qjump/errors.hpp"
#include "qjump/oracle.hpp"
#include "qjump/output.hpp"
#include "qjump/rng.hpp"
#include "qjump/run.hpp"
#include "qjump/trajectories.hpp"

namespace qjump {

namespace {

std::string fmt(const char* format, ...) {
    va_list args;
    va_start(args, format);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return std::string(buf);
}

struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

// --- 1. counting law: P(n,t) vs the Gaussian limit and exact Poisson ----

CriterionResult check_counting_law() {
    ModelParams p{/*omega0=*/0.0, /*epsilon=*/0.0, /*d1=*/1.0};
    const double t_end = 100.0;  // D1 t = 100
    const auto end = evolve(make_initial_state({InitialKind::LeftLocalized, 0}, 0),
                            p, t_end, 0.005);
    const auto dist = counting_distribution(end);
    const std::size_t n_hi = dist.p.size() - 1;
    const double tv_gauss =
        total_variation(dist.p, gaussian_counting_lattice(t_end, p.d1, n_hi));
    const double tv_poisson =
        total_variation(dist.p, poisson_pmf(p.d1 * t_end, n_hi));

    Check c;
    c.require(tv_gauss < 0.03, fmt("TV(gaussian)=%.4f < 0.03", tv_gauss));
    c.require(tv_poisson < 1e-6, fmt("TV(poisson)=%.2e < 1e-6", tv_poisson));
    return {"gaussian-counting-law", c.pass, c.detail, 0.0};
}

// --- 2. summing the ladder reproduces the reduced evolution -------------

CriterionResult check_trace_out() {
    const double omega0 = 1.0;
    const double t_end = 10.0;  // 10 / omega0
    double worst = 0.0;
    for (const double d1 : {0.5, 2.0, 8.0}) {
        for (const double eps : {0.0, 1.0, 4.0}) {
            const ModelParams p{omega0, eps, d1};
            const double dt = stability_dt(p);
            for (const InitialKind kind :
                 {InitialKind::LeftLocalized, InitialKind::EqualSuperposition}) {
                const InitialCondition ic{kind, 0};
                const auto full = evolve_path(make_initial_state(ic, 0), p, t_end,
                                              dt, 50);
                const auto red =
                    evolve_reduced_path(make_initial_reduced(ic), p, t_end, dt, 50);
                for (std::size_t i = 0; i < full.size(); ++i) {
                    worst = std::max(
                        worst, std::abs(full[i].population_left() - red[i].s11));
                    worst = std::max(
                        worst, std::abs(full[i].coherence() - red[i].s12));
                }
            }
        }
    }
    Check c;
    c.require(worst < 1e-8, fmt("max|sum_n - reduced|=%.2e < 1e-8", worst));
    return {"trace-out-identity", c.pass, c.detail, 0.0};
}

// --- 3. long-time reduced state is the half/half mixture ----------------

CriterionResult check_steady_state() {
    Check c;
    for (const double d1 : {4.0, 16.0, 64.0}) {
        const ModelParams p{1.0, 0.0, d1};
        const double dev = steady_state_check(p);
        c.require(dev < 1e-3, fmt("D1=%g: dev=%.2e < 1e-3", d1, dev));
    }
    return {"mixture-steady-state", c.pass, c.detail, 0.0};
}

// --- 4. relaxation time scales as D1 / (8 omega0^2) ---------------------

CriterionResult check_zeno_scaling() {
    Check c;
    double prev_fit = 0.0;
    for (const double d1 : {8.0, 16.0, 32.0}) {
        const ModelParams p{1.0, 0.0, d1};
        const double t0 = p.zeno_time();
        const auto path =
            evolve_reduced_path(make_initial_reduced({InitialKind::LeftLocalized, 0}),
                                p, 6.0 * t0, stability_dt(p), 600);
        std::vector<double> ts, s11;
        for (const auto& s : path) {
            ts.push_back(s.t);
            s11.push_back(s.s11);
        }
        const auto fit = fit_zeno_time(ts, s11, p);
        const double ratio = fit.t0_fit / fit.t0_formula;
        c.require(ratio >= 0.8 && ratio <= 1.2,
                  fmt("D1=%g: t0_fit/t0=%.3f in [0.8,1.2]", d1, ratio));
        c.require(fit.t0_fit > prev_fit, fmt("monotone at D1=%g", d1));
        prev_fit = fit.t0_fit;
    }
    return {"zeno-scaling", c.pass, c.detail, 0.0};
}

// --- 5. bimodal counting statistics at t0/4 -----------------------------

CriterionResult check_bimodal() {
    const ModelParams p{1.0, 0.0, 32.0};
    const double t_probe = p.zeno_time() / 4.0;  // = 1
    const double load = p.d1 * t_probe;
    Check c;
    for (const InitialKind kind :
         {InitialKind::EqualMixture, InitialKind::EqualSuperposition}) {
        const auto end = evolve(make_initial_state({kind, 0}, 0), p, t_probe,
                                stability_dt(p));
        const auto dist = counting_distribution(end);
        const double high = dist.mass_window(load, 5.0 * std::sqrt(load));
        const double low = dist.mass_leq(2);
        c.require(std::abs(high - 0.5) <= 0.05,
                  fmt("%s: P(|n-D1t|<=5rt)=%.3f = 0.5+-0.05", to_string(kind), high));
        c.require(std::abs(low - 0.5) <= 0.05,
                  fmt("%s: P(n<=2)=%.3f = 0.5+-0.05", to_string(kind), low));
    }
    return {"bimodal-counting", c.pass, c.detail, 0.0};
}

// --- 6. jump unraveling reproduces the master equation ------------------

CriterionResult check_unraveling(const AcceptanceOptions& opt) {
    const ModelParams p{1.0, 0.0, 16.0};
    const InitialCondition ic{InitialKind::EqualMixture, 0};
    const double t_end = 6.0;  // 3 t0
    const double dt = stability_dt(p);
    const std::size_t n_traj = 10000;

    TrajectoryOptions topt;
    topt.sample_points = 80;  // grid 0.075; probes at multiples of 0.75
    const auto ensemble = run_ensemble(ic, p, t_end, dt, n_traj, opt.master_seed,
                                       topt, opt.threads);

    const std::size_t n_probes = 8;
    const auto reduced = evolve_reduced_path(make_initial_reduced(ic), p, t_end,
                                             dt, n_probes);
    const auto full = evolve_path(make_initial_state(ic, 0), p, t_end, dt, n_probes);

    const double inv_n = 1.0 / static_cast<double>(n_traj);
    Check c;
    double worst_sigma = 0.0;
    for (std::size_t k = 1; k <= n_probes; ++k) {
        const double t_probe = t_end * static_cast<double>(k) / n_probes;
        const std::size_t grid_idx = k * 10;  // 0.75 / 0.075

        // conditional sigma11 / sigma12 against the reduced solution
        double m1 = 0, m1sq = 0, mx = 0, mxsq = 0, my = 0, mysq = 0;
        for (const auto& traj : ensemble) {
            const auto& s = traj.cond_states[grid_idx];
            m1 += s.s11;
            m1sq += s.s11 * s.s11;
            mx += s.s12.real();
            mxsq += s.s12.real() * s.s12.real();
            my += s.s12.imag();
            mysq += s.s12.imag() * s.s12.imag();
        }
        m1 *= inv_n;
        mx *= inv_n;
        my *= inv_n;
        const auto sem = [&](double mean, double meansq) {
            const double var = std::max(0.0, meansq * inv_n - mean * mean);
            return std::max(std::sqrt(var * inv_n), 1e-12);
        };
        const double z1 = std::abs(m1 - reduced[k].s11) / sem(m1, m1sq);
        const double zx = std::abs(mx - reduced[k].s12.real()) / sem(mx, mxsq);
        const double zy = std::abs(my - reduced[k].s12.imag()) / sem(my, mysq);

        // counting statistics against the n-resolved solution
        const auto dist = counting_distribution(full[k]);
        const double load = p.d1 * t_probe;
        const double master_mean = dist.mean();
        const double master_low = dist.mass_leq(2);
        const double master_high = dist.mass_window(load, 5.0 * std::sqrt(load));

        double en = 0, ensq = 0;
        std::size_t low_hits = 0, high_hits = 0;
        for (const auto& traj : ensemble) {
            const double n = static_cast<double>(traj.count_at(t_probe));
            en += n;
            ensq += n * n;
            if (n <= 2.0) ++low_hits;
            if (std::abs(n - load) <= 5.0 * std::sqrt(load)) ++high_hits;
        }
        en *= inv_n;
        const double zn = std::abs(en - master_mean) / sem(en, ensq);
        const auto binom_sem = [&](double prob) {
            return std::max(std::sqrt(prob * (1.0 - prob) * inv_n), 1e-12);
        };
        const double zlow =
            std::abs(static_cast<double>(low_hits) * inv_n - master_low) /
            binom_sem(master_low);
        const double zhigh =
            std::abs(static_cast<double>(high_hits) * inv_n - master_high) /
            binom_sem(master_high);

        worst_sigma = std::max({worst_sigma, z1, zx, zy, zn, zlow, zhigh});
    }
    c.require(worst_sigma <= 3.0,
              fmt("10^4 trajectories, 8 probes: worst deviation %.2f sigma <= 3",
                  worst_sigma));
    return {"unraveling-consistency", c.pass, c.detail, 0.0};
}

// --- 7. flat ensemble current vs telegraph single records ---------------

CriterionResult check_dichotomy(const AcceptanceOptions& opt) {
    const ModelParams p{1.0, 0.0, 32.0};
    const InitialCondition ic{InitialKind::EqualMixture, 0};
    const double t0 = p.zeno_time();  // 4
    const double t_end = 12.0 * t0;   // 48
    const double dt = stability_dt(p);
    const double half = 0.5 * p.d1;

    // no-collapse line: the ensemble-mean current from the master equation
    const auto reduced = evolve_reduced_path(make_initial_reduced(ic), p, t_end,
                                             dt, 200);
    const auto line = mean_current(std::span<const ReducedState>(reduced), p);
    double worst_rel = 0.0;
    for (std::size_t i = 0; i < reduced.size(); ++i)
        if (reduced[i].t >= 3.0 * t0)
            worst_rel = std::max(worst_rel, std::abs(line[i] - half) / half);

    // collapse picture: seeded jump records
    TrajectoryOptions topt;
    topt.sample_points = 200;
    const std::size_t n_traj = 1000;
    const auto ensemble = run_ensemble(ic, p, t_end, dt, n_traj,
                                       opt.master_seed ^ 0x7u, topt, opt.threads);
    const auto avg = mean_over_trajectories(ensemble, 20.0 / p.d1);
    double late_sum = 0.0;
    std::size_t late_count = 0;
    for (std::size_t i = 0; i < avg.t.size(); ++i)
        if (avg.t[i] >= 3.0 * t0) {
            late_sum += avg.mean[i];
            ++late_count;
        }
    const double late_mean = late_sum / static_cast<double>(late_count);

    const auto stats = telegraph_stats(ensemble, p, t0 / 4.0, half);

    Check c;
    c.require(worst_rel <= 0.05,
              fmt("master current flat: |I-D1/2|/(D1/2)=%.2e <= 0.05 past 3 t0",
                  worst_rel));
    c.require(std::abs(late_mean - half) / half <= 0.05,
              fmt("trajectory-mean current %.3f vs D1/2=%.1f (5%%)", late_mean, half));
    c.require(std::abs(stats.high_fraction - 0.5) <= 0.05,
              fmt("time above threshold %.3f = 0.5+-0.05", stats.high_fraction));
    return {"fig2-dichotomy", c.pass, c.detail, 0.0};
}

// --- 8. RK4 vs dense matrix-exponential reference -----------------------

CriterionResult check_oracle(const AcceptanceOptions& opt) {
    Xoshiro256pp rng(opt.master_seed ^ 0x8u);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const ModelParams p{2.0 * rng.uniform(), -2.0 + 4.0 * rng.uniform(),
                            0.05 + 0.55 * rng.uniform()};

        NResolvedState state;
        state.s11.assign(33, 0.0);
        state.s22.assign(33, 0.0);
        state.s12.assign(33, {0.0, 0.0});
        double trace = 0.0;
        for (std::size_t n = 0; n < 6; ++n) {
            const double a = rng.uniform(), b = rng.uniform();
            const double mag = std::sqrt(a * b) * rng.uniform();
            const double phase = 2.0 * 3.14159265358979323846 * rng.uniform();
            state.s11[n] = a;
            state.s22[n] = b;
            state.s12[n] = {mag * std::cos(phase), mag * std::sin(phase)};
            trace += a + b;
        }
        for (std::size_t n = 0; n < 6; ++n) {
            state.s11[n] /= trace;
            state.s22[n] /= trace;
            state.s12[n] /= trace;
        }

        const auto a = evolve(state, p, 5.0, stability_dt(p));
        const auto b = evolve_oracle(state, p, 5.0);
        double diff = std::abs(a.leaked - b.leaked);
        for (std::size_t n = 0; n < state.s11.size(); ++n) {
            diff = std::max(diff, std::abs(a.s11[n] - b.s11[n]));
            diff = std::max(diff, std::abs(a.s22[n] - b.s22[n]));
            diff = std::max(diff, std::abs(a.s12[n] - b.s12[n]));
        }
        worst = std::max(worst, diff);
    }
    Check c;
    c.require(worst < 1e-7, fmt("20 random sets, n_max=32, t=5: max|RK4-expm|=%.2e < 1e-7",
                                worst));
    return {"oracle-equivalence", c.pass, c.detail, 0.0};
}

// --- 9. same master seed, byte-identical data sections -------------------

std::string data_section(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        out += line;
        out += "\n";
    }
    return out;
}

CriterionResult check_determinism(const AcceptanceOptions& opt) {
    ScenarioConfig c;
    c.scenario = Scenario::Ensemble;
    c.params = {1.0, 0.0, 8.0};
    c.ic = {InitialKind::EqualMixture, 0};
    c.t_end = 4.0;
    c.n_traj = 64;
    c.n_samples = 100;
    c.master_seed = opt.master_seed ^ 0x9u;
    c.output_path = "determinism.csv";  // not written; rendered in memory

    Check chk;
    for (const Scenario scenario : {Scenario::Ensemble, Scenario::Trajectory}) {
        c.scenario = scenario;
        c.threads = 1;
        const auto first = build_tables(c);
        c.threads = 4;
        const auto second = build_tables(c);
        bool same = first.size() == second.size();
        if (same)
            for (std::size_t i = 0; i < first.size(); ++i) {
                const auto a = render_table(first[i].table, OutputFormat::Csv);
                const auto b = render_table(second[i].table, OutputFormat::Csv);
                same = same && data_section(a) == data_section(b);
            }
        chk.require(same, fmt("%s rerun byte-identical", to_string(scenario)));
    }
    return {"determinism", chk.pass, chk.detail, 0.0};
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    const auto timed = [&](auto&& f) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult r = f();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                  start)
                        .count();
        return r;
    };

    std::vector<CriterionResult> results;
    results.push_back(timed([&] { return check_counting_law(); }));
    results.push_back(timed([&] { return check_trace_out(); }));
    results.push_back(timed([&] { return check_steady_state(); }));
    results.push_back(timed([&] { return check_zeno_scaling(); }));
    results.push_back(timed([&] { return check_bimodal(); }));
    results.push_back(timed([&] { return check_unraveling(opt); }));
    results.push_back(timed([&] { return check_dichotomy(opt); }));
    results.push_back(timed([&] { return check_oracle(opt); }));
    results.push_back(timed([&] { return check_determinism(opt); }));
    return results;
}

std::string format_results(const std::vector<CriterionResult>& results) {
    std::string out;
    for (const auto& r : results) {
        out += r.pass ? "[PASS] " : "[FAIL] ";
        out += r.name;
        out += ": ";
        out += r.detail;
        out += fmt(" (%.2f s)\n", r.seconds);
    }
    return out;
}

} // namespace qjump
