#include "qjump/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "qjump/errors.hpp"

namespace qjump {

namespace {

// exp(A) by scaling-and-squaring with the [13/13] Pade approximant
// (coefficients from the standard double-precision table).
Eigen::MatrixXd expm(const Eigen::MatrixXd& a_in) {
    static const double b[] = {64764752532480000.0, 32382376266240000.0,
                               7771770303897600.0,  1187353796428800.0,
                               129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,
                               1323241920.0,        40840800.0,
                               960960.0,            16380.0,
                               182.0,               1.0};
    const double theta13 = 5.371920351148152;

    const Eigen::Index n = a_in.rows();
    const double norm = a_in.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    int squarings = 0;
    if (norm > theta13)
        squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    const Eigen::MatrixXd a = a_in / std::ldexp(1.0, squarings);

    const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = a * a;
    const Eigen::MatrixXd a4 = a2 * a2;
    const Eigen::MatrixXd a6 = a2 * a4;
    const Eigen::MatrixXd u =
        a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
             b[3] * a2 + b[1] * ident);
    const Eigen::MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                              b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

    Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < squarings; ++k) r = r * r;
    return r;
}

} // namespace

NResolvedState evolve_oracle(const NResolvedState& state, const ModelParams& p,
                             double t_end) {
    p.validate();
    if (state.n_max() > kOracleMaxN)
        throw ConfigError("evolve_oracle: ladder too long (n_max > 64)");
    if (t_end < state.t - 1e-12)
        throw ConfigError("t_end lies before the state's current time");

    const std::size_t m = state.s11.size();
    const Eigen::Index dim = static_cast<Eigen::Index>(4 * m + 1);
    const double d1 = p.d1, om = p.omega0, eps = p.epsilon;

    // Real state ordering: [s11 | s22 | Re s12 | Im s12 | leaked].
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(dim, dim);
    const auto i1 = [&](std::size_t n) { return static_cast<Eigen::Index>(n); };
    const auto i2 = [&](std::size_t n) { return static_cast<Eigen::Index>(m + n); };
    const auto ix = [&](std::size_t n) { return static_cast<Eigen::Index>(2 * m + n); };
    const auto iy = [&](std::size_t n) { return static_cast<Eigen::Index>(3 * m + n); };
    for (std::size_t n = 0; n < m; ++n) {
        gen(i1(n), i1(n)) = -d1;
        if (n > 0) gen(i1(n), i1(n - 1)) = d1;
        gen(i1(n), iy(n)) = -2.0 * om;
        gen(i2(n), iy(n)) = 2.0 * om;
        gen(ix(n), iy(n)) = -eps;
        gen(ix(n), ix(n)) = -0.5 * d1;
        gen(iy(n), ix(n)) = eps;
        gen(iy(n), i1(n)) = om;
        gen(iy(n), i2(n)) = -om;
        gen(iy(n), iy(n)) = -0.5 * d1;
    }
    gen(dim - 1, i1(m - 1)) = d1;

    Eigen::VectorXd z(dim);
    for (std::size_t n = 0; n < m; ++n) {
        z(i1(n)) = state.s11[n];
        z(i2(n)) = state.s22[n];
        z(ix(n)) = state.s12[n].real();
        z(iy(n)) = state.s12[n].imag();
    }
    z(dim - 1) = state.leaked;

    const Eigen::VectorXd out = expm(gen * (t_end - state.t)) * z;

    NResolvedState result = state;
    for (std::size_t n = 0; n < m; ++n) {
        result.s11[n] = out(i1(n));
        result.s22[n] = out(i2(n));
        result.s12[n] = {out(ix(n)), out(iy(n))};
    }
    result.leaked = out(dim - 1);
    result.t = t_end;
    return result;
}

} // namespace qjump
