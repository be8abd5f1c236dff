#include "cavchain/chain.hpp"

#include <cmath>

#include "cavchain/errors.hpp"

namespace cavchain {

TransferMatrix from_scattering(const ScatteringResponse& resp, double eps_t,
                               std::size_t index) {
    const double abs_t = std::abs(resp.t);
    if (abs_t <= eps_t)
        throw opaque_subsystem_error(index, abs_t);
    const cplx t = resp.t;
    const cplx r = resp.r;
    return {(t * t - r * r) / t, r / t,
            -r / t,             cplx(1.0) / t};
}

TransferMatrix propagation(double phi) {
    const cplx fwd = std::polar(1.0, phi);
    const cplx bwd = std::polar(1.0, -phi);
    return {fwd, 0.0, 0.0, bwd};
}

TransferMatrix compose(const ChainSpec& spec, double probe, double eps_t) {
    TransferMatrix total =
        from_scattering(scattering_amplitudes(spec.subsystems[0], probe), eps_t, 0);
    for (std::size_t n = 1; n < spec.subsystems.size(); ++n) {
        const TransferMatrix mn = from_scattering(
            scattering_amplitudes(spec.subsystems[n], probe), eps_t, n);
        total = mn * propagation(segment_phase(spec.lengths[n - 1])) * total;
    }
    return total;
}

ChainResponse response(const TransferMatrix& m) {
    const double denom = std::abs(m.m22);
    if (denom < kDefaultOpacityGate)
        throw degenerate_chain_error("chain response undefined: |m22| ~ 0");
    ChainResponse out;
    out.r_total = -m.m21 / m.m22;
    out.t_total = m.det() / m.m22;
    out.T = std::norm(out.t_total);
    out.R = std::norm(out.r_total);
    return out;
}

double independent_transmission(const ChainSpec& spec, double probe) {
    double prod = 1.0;
    for (const SubsystemParams& sub : spec.subsystems)
        prod *= std::norm(scattering_amplitudes(sub, probe).t);
    return prod;
}

std::vector<LocalFields> port_fields(const ChainSpec& spec, double probe,
                                     double eps_t) {
    const std::size_t n = spec.subsystems.size();
    const ChainResponse total = response(compose(spec, probe, eps_t));

    std::vector<LocalFields> out(n);
    // left pair of subsystem 0 under unit drive
    cplx fwd = 1.0;
    cplx bwd = total.r_total;
    for (std::size_t k = 0; k < n; ++k) {
        const TransferMatrix mk = from_scattering(
            scattering_amplitudes(spec.subsystems[k], probe), eps_t, k);
        const cplx fwd_r = mk.m11 * fwd + mk.m12 * bwd;
        const cplx bwd_r = mk.m21 * fwd + mk.m22 * bwd;
        LocalFields& lf = out[k];
        lf.a_in = fwd;
        lf.b_out = bwd;
        lf.a_out = fwd_r;
        lf.b_in = bwd_r;
        lf.state = steady_state(spec.subsystems[k], probe, lf.a_in, lf.b_in);
        if (k + 1 < n) {
            const TransferMatrix seg = propagation(segment_phase(spec.lengths[k]));
            fwd = seg.m11 * fwd_r;
            bwd = seg.m22 * bwd_r;
        }
    }
    return out;
}

} // namespace cavchain
