#include "qjump/state.hpp"

namespace qjump {

double NResolvedState::total_trace() const {
    double tr = leaked;
    for (std::size_t n = 0; n < s11.size(); ++n) tr += s11[n] + s22[n];
    return tr;
}

double NResolvedState::population_left() const {
    double sum = 0.0;
    for (double v : s11) sum += v;
    return sum;
}

double NResolvedState::population_right() const {
    double sum = 0.0;
    for (double v : s22) sum += v;
    return sum;
}

std::complex<double> NResolvedState::coherence() const {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& v : s12) sum += v;
    return sum;
}

void NResolvedState::grow(std::size_t new_n_max) {
    if (new_n_max + 1 <= s11.size()) return;
    s11.resize(new_n_max + 1, 0.0);
    s22.resize(new_n_max + 1, 0.0);
    s12.resize(new_n_max + 1, std::complex<double>{0.0, 0.0});
}

double CountingDistribution::mean() const {
    double m = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) m += static_cast<double>(n) * p[n];
    return m;
}

double CountingDistribution::variance() const {
    const double m = mean();
    double m2 = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        const double d = static_cast<double>(n);
        m2 += d * d * p[n];
    }
    return m2 - m * m;
}

double CountingDistribution::mass_leq(std::size_t n_hi) const {
    double mass = 0.0;
    for (std::size_t n = 0; n < p.size() && n <= n_hi; ++n) mass += p[n];
    return mass;
}

double CountingDistribution::mass_window(double center, double halfwidth) const {
    double mass = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        const double d = static_cast<double>(n) - center;
        if (d >= -halfwidth && d <= halfwidth) mass += p[n];
    }
    return mass;
}

} // namespace qjump
