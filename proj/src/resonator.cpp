#include "cavchain/resonator.hpp"

#include <cmath>

#include "cavchain/errors.hpp"

namespace cavchain {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
const cplx kI{0.0, 1.0};
} // namespace

SteadyState steady_state(const SubsystemParams& sub, double probe, cplx a_in,
                         cplx b_in) {
    const CavityParams& c = sub.cavity;
    const double delta = c.delta0 + probe;
    const double kappa = c.kappa();
    const cplx dA = kI * (delta + c.h) + kappa;
    const cplx dB = kI * (delta - c.h) + kappa;
    const double sq = std::sqrt(2.0 * c.kappa_ex);
    const cplx A_in = (a_in + b_in) * kInvSqrt2;
    const cplx B_in = (a_in - b_in) * kInvSqrt2;

    SteadyState st;
    if (!sub.atom_is_coupled()) {
        if (dA == cplx(0.0) || dB == cplx(0.0))
            throw singular_system_error("undamped mode exactly on resonance");
        st.A = sq * A_in / dA;
        st.B = sq * B_in / dB;
        st.sigma = 0.0;
        return st;
    }

    const AtomParams& at = *sub.atom;
    const cplx dS = kI * (at.Delta0 + probe) + at.gamma;
    CMatrix m(3, 3);
    m(0, 0) = dA;  m(0, 1) = 0.0;       m(0, 2) = kI * at.g_A;
    m(1, 0) = 0.0; m(1, 1) = dB;        m(1, 2) = at.g_B;
    m(2, 0) = kI * at.g_A;
    m(2, 1) = -at.g_B;
    m(2, 2) = dS;
    const std::vector<cplx> rhs{sq * A_in, sq * B_in, cplx(0.0)};
    const std::vector<cplx> x = solve(m, rhs);
    st.A = x[0];
    st.B = x[1];
    st.sigma = x[2];
    return st;
}

ScatteringResponse scattering_amplitudes(const SubsystemParams& sub, double probe) {
    ScatteringResponse resp;
    resp.state = steady_state(sub, probe, 1.0, 0.0);
    const double sq = std::sqrt(2.0 * sub.cavity.kappa_ex);
    const cplx a = (resp.state.A + resp.state.B) * kInvSqrt2;
    const cplx b = (resp.state.A - resp.state.B) * kInvSqrt2;
    resp.t = -1.0 + sq * a;
    resp.r = sq * b;
    return resp;
}

ExcitationGuard excitation_guard(const SubsystemParams& sub, double probe,
                                 cplx a_in, cplx b_in, double threshold) {
    const SteadyState st = steady_state(sub, probe, a_in, b_in);
    ExcitationGuard g;
    g.excitation = st.excitation();
    g.saturated = g.excitation > threshold;
    return g;
}

ModePopulations mode_populations(const SubsystemParams& sub, double probe,
                                 cplx a_in, cplx b_in) {
    const SteadyState st = steady_state(sub, probe, a_in, b_in);
    return {std::norm(st.A), std::norm(st.B)};
}

} // namespace cavchain
