#include "qjump/model.hpp"

#include <cmath>
#include <numbers>

#include "qjump/errors.hpp"

namespace qjump {

void DetectorParams::validate() const {
    if (!(transmission_open >= 0.0 && transmission_open <= 1.0))
        throw ConfigError("transmission_open must lie in [0, 1]");
    if (!(transmission_blocked >= 0.0 && transmission_blocked <= 1.0))
        throw ConfigError("transmission_blocked must lie in [0, 1]");
    if (transmission_blocked > transmission_open)
        throw ConfigError("transmission_blocked must not exceed transmission_open");
    if (!(bias > 0.0)) throw ConfigError("bias must be positive");
}

double derive_rate(const DetectorParams& d) {
    d.validate();
    return d.transmission_open * d.bias / (2.0 * std::numbers::pi);
}

ModelParams ModelParams::from_detector(double omega0, double epsilon,
                                       const DetectorParams& d) {
    d.validate();
    if (d.transmission_blocked != 0.0)
        throw ConfigError("blocked-contact model requires transmission_blocked = 0");
    ModelParams p;
    p.omega0 = omega0;
    p.epsilon = epsilon;
    p.d1 = derive_rate(d);
    p.validate();
    return p;
}

void ModelParams::validate() const {
    if (!(omega0 >= 0.0)) throw ConfigError("omega0 must be nonnegative");
    if (!(d1 >= 0.0)) throw ConfigError("d1 must be nonnegative");
    if (!std::isfinite(omega0) || !std::isfinite(epsilon) || !std::isfinite(d1))
        throw ConfigError("model parameters must be finite");
}

double ModelParams::zeno_time() const {
    if (!(omega0 > 0.0)) throw ConfigError("zeno_time requires omega0 > 0");
    return d1 / (8.0 * omega0 * omega0);
}

NResolvedState make_initial_state(const InitialCondition& ic, std::size_t n_max) {
    if (ic.n0 > n_max)
        throw ConfigError("initial collector count n0 exceeds n_max");
    NResolvedState s;
    s.s11.assign(n_max + 1, 0.0);
    s.s22.assign(n_max + 1, 0.0);
    s.s12.assign(n_max + 1, std::complex<double>{0.0, 0.0});
    switch (ic.kind) {
        case InitialKind::LeftLocalized:
            s.s11[ic.n0] = 1.0;
            break;
        case InitialKind::RightLocalized:
            s.s22[ic.n0] = 1.0;
            break;
        case InitialKind::EqualMixture:
            s.s11[ic.n0] = 0.5;
            s.s22[ic.n0] = 0.5;
            break;
        case InitialKind::EqualSuperposition:
            s.s11[ic.n0] = 0.5;
            s.s22[ic.n0] = 0.5;
            s.s12[ic.n0] = std::complex<double>{0.5, 0.0};
            break;
    }
    return s;
}

ReducedState make_initial_reduced(const InitialCondition& ic) {
    ReducedState s;
    switch (ic.kind) {
        case InitialKind::LeftLocalized:
            s.s11 = 1.0;
            break;
        case InitialKind::RightLocalized:
            s.s11 = 0.0;
            break;
        case InitialKind::EqualMixture:
            s.s11 = 0.5;
            break;
        case InitialKind::EqualSuperposition:
            s.s11 = 0.5;
            s.s12 = std::complex<double>{0.5, 0.0};
            break;
    }
    return s;
}

const char* to_string(InitialKind kind) {
    switch (kind) {
        case InitialKind::LeftLocalized: return "left";
        case InitialKind::RightLocalized: return "right";
        case InitialKind::EqualMixture: return "mixture";
        case InitialKind::EqualSuperposition: return "superposition";
    }
    return "?";
}

} // namespace qjump
