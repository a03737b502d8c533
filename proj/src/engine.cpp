#include "qjump/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "qjump/errors.hpp"

namespace qjump {

namespace {

// Flat layout for the RK4 sweep: [s11(0..N) | s22(0..N) | Re s12(0..N) |
// Im s12(0..N) | leaked], so the derivative is one pass over four
// contiguous arrays.
struct Workspace {
    std::size_t nblk = 0;  // N + 1
    std::vector<double> v, k1, k2, k3, k4, tmp;

    void resize(std::size_t nblocks) {
        nblk = nblocks;
        const std::size_t dim = 4 * nblocks + 1;
        v.resize(dim);
        k1.resize(dim);
        k2.resize(dim);
        k3.resize(dim);
        k4.resize(dim);
        tmp.resize(dim);
    }
};

void flatten(const NResolvedState& s, std::vector<double>& v) {
    const std::size_t m = s.s11.size();
    for (std::size_t n = 0; n < m; ++n) {
        v[n] = s.s11[n];
        v[m + n] = s.s22[n];
        v[2 * m + n] = s.s12[n].real();
        v[3 * m + n] = s.s12[n].imag();
    }
    v[4 * m] = s.leaked;
}

void unflatten(const std::vector<double>& v, NResolvedState& s) {
    const std::size_t m = s.s11.size();
    for (std::size_t n = 0; n < m; ++n) {
        s.s11[n] = v[n];
        s.s22[n] = v[m + n];
        s.s12[n] = {v[2 * m + n], v[3 * m + n]};
    }
    s.leaked = v[4 * m];
}

void rhs_flat(const double* v, double* dv, std::size_t m, const ModelParams& p) {
    const double d1 = p.d1, om = p.omega0, eps = p.epsilon;
    const double* p1 = v;
    const double* p2 = v + m;
    const double* x = v + 2 * m;
    const double* y = v + 3 * m;
    double* dp1 = dv;
    double* dp2 = dv + m;
    double* dx = dv + 2 * m;
    double* dy = dv + 3 * m;
    double feed = 0.0;  // s11^(n-1), zero below the ladder
    for (std::size_t n = 0; n < m; ++n) {
        // i O0 (s12 - s21) = -2 O0 Im s12
        dp1[n] = -d1 * p1[n] + d1 * feed - 2.0 * om * y[n];
        dp2[n] = 2.0 * om * y[n];
        dx[n] = -eps * y[n] - 0.5 * d1 * x[n];
        dy[n] = eps * x[n] + om * (p1[n] - p2[n]) - 0.5 * d1 * y[n];
        feed = p1[n];
    }
    dv[4 * m] = d1 * p1[m - 1];  // outflow of the topmost block
}

void rk4_step(Workspace& w, const ModelParams& p, double h) {
    const std::size_t m = w.nblk;
    const std::size_t dim = 4 * m + 1;
    double* v = w.v.data();
    double* k1 = w.k1.data();
    double* k2 = w.k2.data();
    double* k3 = w.k3.data();
    double* k4 = w.k4.data();
    double* tmp = w.tmp.data();

    rhs_flat(v, k1, m, p);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = v[i] + 0.5 * h * k1[i];
    rhs_flat(tmp, k2, m, p);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = v[i] + 0.5 * h * k2[i];
    rhs_flat(tmp, k3, m, p);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = v[i] + h * k3[i];
    rhs_flat(tmp, k4, m, p);
    const double h6 = h / 6.0;
    for (std::size_t i = 0; i < dim; ++i)
        v[i] += h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

void check_step(const ModelParams& p, double dt) {
    if (!(dt > 0.0)) throw NumericalError("step size must be positive");
    const double bound = stability_dt(p);
    if (dt > bound * (1.0 + 1e-12))
        throw NumericalError("step too large: dt exceeds the stability bound");
}

std::size_t step_count(double span, double dt) {
    if (span <= 0.0) return 0;
    return static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
}

} // namespace

double stability_dt(const ModelParams& p) {
    const double scale = std::max({p.d1, std::abs(p.epsilon), p.omega0, 1.0});
    return 0.01 / scale;
}

std::size_t required_n_max(double d1, double t_end) {
    const double load = d1 * t_end;
    if (load <= 0.0) return 10;
    return static_cast<std::size_t>(std::ceil(load + 10.0 * std::sqrt(load) + 10.0));
}

NResolvedState rhs_n_resolved(const NResolvedState& state, const ModelParams& p) {
    p.validate();
    NResolvedState d = state;
    const std::size_t m = state.s11.size();
    std::vector<double> v(4 * m + 1), dv(4 * m + 1);
    flatten(state, v);
    rhs_flat(v.data(), dv.data(), m, p);
    unflatten(dv, d);
    d.t = state.t;
    return d;
}

ReducedState rhs_reduced(const ReducedState& state, const ModelParams& p) {
    p.validate();
    const double x = state.s12.real(), y = state.s12.imag();
    ReducedState d;
    d.t = state.t;
    d.s11 = -2.0 * p.omega0 * y;
    d.s12 = {-p.epsilon * y - 0.5 * p.d1 * x,
             p.epsilon * x + p.omega0 * (2.0 * state.s11 - 1.0) - 0.5 * p.d1 * y};
    return d;
}

NResolvedState evolve(NResolvedState state, const ModelParams& p, double t_end,
                      double dt, const EvolveOptions& opt) {
    p.validate();
    if (t_end < state.t - 1e-12)
        throw ConfigError("t_end lies before the state's current time");
    check_step(p, dt);

    if (opt.auto_grow) {
        const std::size_t want =
            std::min(required_n_max(p.d1, t_end), opt.n_max_cap);
        if (state.n_max() < want) state.grow(want);
    }

    const double span = t_end - state.t;
    const std::size_t steps = step_count(span, dt);
    if (steps > 0) {
        const double h = span / static_cast<double>(steps);
        Workspace w;
        w.resize(state.s11.size());
        flatten(state, w.v);
        for (std::size_t k = 0; k < steps; ++k) rk4_step(w, p, h);
        unflatten(w.v, state);
    }
    state.t = t_end;

    if (state.leaked >= opt.leak_budget)
        throw TruncationOverflowError(
            "probability mass beyond the n ladder exceeded the leak budget");
    return state;
}

ReducedState evolve_reduced(ReducedState state, const ModelParams& p,
                            double t_end, double dt) {
    p.validate();
    if (t_end < state.t - 1e-12)
        throw ConfigError("t_end lies before the state's current time");
    check_step(p, dt);

    const double span = t_end - state.t;
    const std::size_t steps = step_count(span, dt);
    if (steps > 0) {
        const double h = span / static_cast<double>(steps);
        const double d1 = p.d1, om = p.omega0, eps = p.epsilon;
        double s = state.s11, x = state.s12.real(), y = state.s12.imag();
        auto f = [&](double s_, double x_, double y_, double& ds, double& dx,
                     double& dy) {
            ds = -2.0 * om * y_;
            dx = -eps * y_ - 0.5 * d1 * x_;
            dy = eps * x_ + om * (2.0 * s_ - 1.0) - 0.5 * d1 * y_;
        };
        for (std::size_t k = 0; k < steps; ++k) {
            double k1s, k1x, k1y, k2s, k2x, k2y, k3s, k3x, k3y, k4s, k4x, k4y;
            f(s, x, y, k1s, k1x, k1y);
            f(s + 0.5 * h * k1s, x + 0.5 * h * k1x, y + 0.5 * h * k1y, k2s, k2x, k2y);
            f(s + 0.5 * h * k2s, x + 0.5 * h * k2x, y + 0.5 * h * k2y, k3s, k3x, k3y);
            f(s + h * k3s, x + h * k3x, y + h * k3y, k4s, k4x, k4y);
            const double h6 = h / 6.0;
            s += h6 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
            x += h6 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            y += h6 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        }
        state.s11 = s;
        state.s12 = {x, y};
    }
    state.t = t_end;
    return state;
}

std::vector<NResolvedState> evolve_path(NResolvedState state, const ModelParams& p,
                                        double t_end, double dt,
                                        std::size_t n_samples,
                                        const EvolveOptions& opt) {
    if (n_samples == 0) throw ConfigError("n_samples must be at least 1");
    if (opt.auto_grow) {
        const std::size_t want =
            std::min(required_n_max(p.d1, t_end), opt.n_max_cap);
        if (state.n_max() < want) state.grow(want);
    }
    std::vector<NResolvedState> out;
    out.reserve(n_samples + 1);
    out.push_back(state);
    const double t0 = state.t;
    for (std::size_t k = 1; k <= n_samples; ++k) {
        const double tk =
            t0 + (t_end - t0) * static_cast<double>(k) / static_cast<double>(n_samples);
        state = evolve(std::move(state), p, tk, dt, opt);
        out.push_back(state);
    }
    return out;
}

std::vector<ReducedState> evolve_reduced_path(ReducedState state, const ModelParams& p,
                                              double t_end, double dt,
                                              std::size_t n_samples) {
    if (n_samples == 0) throw ConfigError("n_samples must be at least 1");
    std::vector<ReducedState> out;
    out.reserve(n_samples + 1);
    out.push_back(state);
    const double t0 = state.t;
    for (std::size_t k = 1; k <= n_samples; ++k) {
        const double tk =
            t0 + (t_end - t0) * static_cast<double>(k) / static_cast<double>(n_samples);
        state = evolve_reduced(state, p, tk, dt);
        out.push_back(state);
    }
    return out;
}

CountingDistribution counting_distribution(const NResolvedState& state) {
    CountingDistribution c;
    c.t = state.t;
    c.leaked = state.leaked;
    c.p.resize(state.s11.size());
    for (std::size_t n = 0; n < c.p.size(); ++n) c.p[n] = state.s11[n] + state.s22[n];
    return c;
}

std::vector<double> mean_current(std::span<const ReducedState> history,
                                 const ModelParams& p) {
    if (history.empty()) throw ConfigError("mean_current: empty history");
    std::vector<double> out(history.size());
    for (std::size_t i = 0; i < history.size(); ++i) out[i] = p.d1 * history[i].s11;
    return out;
}

CurrentSeries mean_current(std::span<const NResolvedState> history,
                           const ModelParams& p) {
    if (history.empty()) throw ConfigError("mean_current: empty history");
    const std::size_t m = history.size();
    CurrentSeries cs;
    cs.t.resize(m);
    cs.from_population.resize(m);
    cs.from_counting.resize(m);

    std::vector<double> mean_n(m);
    for (std::size_t i = 0; i < m; ++i) {
        cs.t[i] = history[i].t;
        cs.from_population[i] = p.d1 * history[i].population_left();
        mean_n[i] = counting_distribution(history[i]).mean();
    }
    if (m == 1) {
        cs.from_counting[0] = cs.from_population[0];
        return cs;
    }

    const double h = cs.t[1] - cs.t[0];
    for (std::size_t i = 2; i < m; ++i) {
        if (std::abs((cs.t[i] - cs.t[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw ConfigError("mean_current: history grid is not uniform");
    }
    if (m == 2) {
        const double slope = (mean_n[1] - mean_n[0]) / h;
        cs.from_counting[0] = cs.from_counting[1] = slope;
        return cs;
    }
    // second-order one-sided stencils at the ends, central in the bulk
    cs.from_counting[0] =
        (-3.0 * mean_n[0] + 4.0 * mean_n[1] - mean_n[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < m; ++i)
        cs.from_counting[i] = (mean_n[i + 1] - mean_n[i - 1]) / (2.0 * h);
    cs.from_counting[m - 1] =
        (3.0 * mean_n[m - 1] - 4.0 * mean_n[m - 2] + mean_n[m - 3]) / (2.0 * h);
    return cs;
}

} // namespace qjump
