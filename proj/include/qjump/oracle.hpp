#ifndef QJUMP_ORACLE_HPP
#define QJUMP_ORACLE_HPP

#include "qjump/engine.hpp"
#include "qjump/model.hpp"
#include "qjump/state.hpp"

namespace qjump {

// Reference propagator for small ladders, independent of the RK4 path:
// assembles the dense generator of the n-resolved equations (real
// representation, one extra row for the leaked mass) and applies its
// matrix exponential via scaling-and-squaring with a Pade core.
// Throws ConfigError when state.n_max() exceeds 64.
NResolvedState evolve_oracle(const NResolvedState& state, const ModelParams& p,
                             double t_end);

inline constexpr std::size_t kOracleMaxN = 64;

} // namespace qjump

#endif
