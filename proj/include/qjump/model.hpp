#ifndef QJUMP_MODEL_HPP
#define QJUMP_MODEL_HPP

#include <cstddef>

#include "qjump/state.hpp"

namespace qjump {

// Units: hbar = 1, e = 1. Energies and rates are inverse times, currents
// are electrons per unit time.

// Point-contact transmissions and bias. The blocked transmission is kept
// as a field but must be zero: the contact carries no current while the
// right dot is occupied.
struct DetectorParams {
    double transmission_open = 0.0;     // T1, left dot occupied
    double transmission_blocked = 0.0;  // T2, right dot occupied
    double bias = 0.0;                  // mu_L - mu_R

    void validate() const;  // throws ConfigError on violation
};

// Collector rate D = T (mu_L - mu_R) / (2 pi) for the open contact.
double derive_rate(const DetectorParams& d);

// Effective parameters the equations of motion actually use.
struct ModelParams {
    double omega0 = 0.0;   // interdot coupling
    double epsilon = 0.0;  // level detuning E2 - E1
    double d1 = 0.0;       // detector rate, left dot occupied

    static ModelParams from_detector(double omega0, double epsilon,
                                     const DetectorParams& d);

    void validate() const;

    // Relaxation time of the monitored dot, d1 / (8 omega0^2).
    double zeno_time() const;
};

enum class InitialKind {
    LeftLocalized,
    RightLocalized,
    EqualMixture,
    EqualSuperposition,
};

struct InitialCondition {
    InitialKind kind = InitialKind::LeftLocalized;
    std::size_t n0 = 0;  // initial collector count
};

// Builds the n-resolved initial state with unit trace concentrated at n0.
NResolvedState make_initial_state(const InitialCondition& ic, std::size_t n_max);

// The same initial condition as a reduced 2x2 state.
ReducedState make_initial_reduced(const InitialCondition& ic);

const char* to_string(InitialKind kind);

} // namespace qjump

#endif
