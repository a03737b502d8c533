#ifndef QJUMP_STATE_HPP
#define QJUMP_STATE_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace qjump {

// Density matrix of the double dot resolved on the collector electron
// number n. Per n the 2x2 block is (s11, s22, s12) with s21 implicit as
// conj(s12). Layout is struct-of-arrays over n so the integrator sweeps
// three contiguous arrays.
struct NResolvedState {
    double t = 0.0;
    std::vector<double> s11;                // left-dot population, per n
    std::vector<double> s22;                // right-dot population, per n
    std::vector<std::complex<double>> s12;  // coherence, per n
    double leaked = 0.0;                    // mass lost past the truncation edge

    std::size_t n_max() const { return s11.size() - 1; }

    double total_trace() const;
    double population_left() const;   // sum_n s11
    double population_right() const;  // sum_n s22
    std::complex<double> coherence() const;  // sum_n s12

    // Extends the ladder with zero blocks up to new_n_max (no-op if smaller).
    void grow(std::size_t new_n_max);
};

// Reduced 2x2 state of the dot after tracing out the collector record.
// s22 is implicit: s22 = 1 - s11.
struct ReducedState {
    double t = 0.0;
    double s11 = 0.0;
    std::complex<double> s12{0.0, 0.0};

    double s22() const { return 1.0 - s11; }
};

// P(n, t) over the collector electron number at a fixed time.
struct CountingDistribution {
    double t = 0.0;
    std::vector<double> p;
    double leaked = 0.0;

    double mean() const;
    double variance() const;
    // Total mass with n <= n_hi.
    double mass_leq(std::size_t n_hi) const;
    // Total mass with |n - center| <= halfwidth.
    double mass_window(double center, double halfwidth) const;
};

} // namespace qjump

#endif
