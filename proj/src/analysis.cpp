#include "qjump/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qjump/engine.hpp"
#include "qjump/errors.hpp"

namespace qjump {

double gaussian_counting(double n, double t, double d1) {
    if (!(t > 0.0)) throw ConfigError("gaussian_counting requires t > 0");
    if (!(d1 > 0.0)) throw ConfigError("gaussian_counting requires d1 > 0");
    const double load = d1 * t;
    const double dev = load - n;
    return std::exp(-dev * dev / (2.0 * load)) / std::sqrt(2.0 * std::numbers::pi * load);
}

std::vector<double> gaussian_counting_lattice(double t, double d1, std::size_t n_hi) {
    std::vector<double> w(n_hi + 1);
    double sum = 0.0;
    for (std::size_t n = 0; n <= n_hi; ++n) {
        w[n] = gaussian_counting(static_cast<double>(n), t, d1);
        sum += w[n];
    }
    for (double& v : w) v /= sum;
    return w;
}

std::vector<double> poisson_pmf(double mean, std::size_t n_hi) {
    if (!(mean >= 0.0)) throw ConfigError("poisson_pmf requires a nonnegative mean");
    std::vector<double> p(n_hi + 1);
    if (mean == 0.0) {
        p[0] = 1.0;
        return p;
    }
    // log-space evaluation keeps large means finite
    const double log_mean = std::log(mean);
    double log_fact = 0.0;
    for (std::size_t n = 0; n <= n_hi; ++n) {
        if (n > 0) log_fact += std::log(static_cast<double>(n));
        p[n] = std::exp(-mean + static_cast<double>(n) * log_mean - log_fact);
    }
    return p;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
    const std::size_t m = std::max(a.size(), b.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double av = i < a.size() ? a[i] : 0.0;
        const double bv = i < b.size() ? b[i] : 0.0;
        sum += std::abs(av - bv);
    }
    return 0.5 * sum;
}

RelaxationFit fit_zeno_time(std::span<const double> t, std::span<const double> s11,
                            const ModelParams& p) {
    p.validate();
    if (!(p.omega0 > 0.0)) throw ConfigError("fit_zeno_time requires omega0 > 0");
    if (p.d1 < 8.0 * p.omega0 * (1.0 - 1e-12))
        throw ConfigError("fit_zeno_time requires the overdamped regime D1 >= 8 omega0");
    if (t.size() != s11.size() || t.size() < 8)
        throw ConfigError("fit_zeno_time: need matching series of at least 8 samples");

    const double t0_formula = p.zeno_time();
    if (t.back() - t.front() < 5.0 * t0_formula * (1.0 - 1e-12))
        throw ConfigError("fit_zeno_time: series must span at least 5 relaxation times");

    double running_min = s11.front();
    for (double v : s11) {
        if (v > running_min + 1e-6)
            throw NumericalError("fit_zeno_time: non-monotone relaxation data");
        running_min = std::min(running_min, v);
    }

    const auto sse = [&](double tau) {
        double acc = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double model = 0.5 + 0.5 * std::exp(-(t[i] - t.front()) / tau);
            const double d = s11[i] - model;
            acc += d * d;
        }
        return acc;
    };

    // golden-section search; the objective is unimodal in tau here
    double lo = t0_formula / 50.0, hi = t0_formula * 50.0;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
    double fc = sse(c), fd = sse(d);
    for (int it = 0; it < 200 && hi - lo > 1e-12 * t0_formula; ++it) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = sse(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = sse(d);
        }
    }

    RelaxationFit fit;
    fit.t0_fit = 0.5 * (lo + hi);
    fit.t0_formula = t0_formula;
    fit.residual = std::sqrt(sse(fit.t0_fit) / static_cast<double>(t.size()));
    return fit;
}

double steady_state_check(const ModelParams& p) {
    p.validate();
    if (!(p.omega0 > 0.0 && p.d1 > 0.0))
        throw ConfigError("steady_state_check requires omega0 > 0 and d1 > 0");
    const double horizon = 20.0 * std::max(p.zeno_time(), 1.0 / p.omega0);
    const ReducedState end =
        evolve_reduced(make_initial_reduced({InitialKind::LeftLocalized, 0}), p,
                       horizon, stability_dt(p));
    return std::max(std::abs(end.s11 - 0.5), std::abs(end.s12));
}

} // namespace qjump
