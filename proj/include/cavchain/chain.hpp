#ifndef CAVCHAIN_CHAIN_HPP
#define CAVCHAIN_CHAIN_HPP

#include <optional>
#include <vector>

#include "cavchain/model.hpp"
#include "cavchain/resonator.hpp"

namespace cavchain {

// 2x2 map from the left port pair (a_in, b_out) to the right port pair
// (a_out, b_in); entries ordered (forward field, backward field). Symmetric
// scattering makes det = 1, which composition preserves.
struct TransferMatrix {
    cplx m11{1.0}, m12{0.0};
    cplx m21{0.0}, m22{1.0};

    cplx det() const { return m11 * m22 - m12 * m21; }

    TransferMatrix operator*(const TransferMatrix& rhs) const {
        return {m11 * rhs.m11 + m12 * rhs.m21, m11 * rhs.m12 + m12 * rhs.m22,
                m21 * rhs.m11 + m22 * rhs.m21, m21 * rhs.m12 + m22 * rhs.m22};
    }
};

struct ChainResponse {
    cplx t_total{};
    cplx r_total{};
    double T = 0.0;
    double R = 0.0;
    std::optional<double> T_ind;      // filled by the analysis layer
    std::optional<double> superness;  // T - T_ind
};

inline constexpr double kDefaultOpacityGate = 1e-12;

// The cascade loses its attenuated solution to cancellation deep inside
// strongly absorbing regions of long chains. det(M_total) = 1 is the
// built-in witness: once the computed determinant drifts beyond this bound
// the cascade result is untrusted and callers switch to the direct solver.
inline constexpr double kTransferDetGate = 1e-9;

// M = (1/t) [[t^2 - r^2, r], [-r, 1]]. Throws opaque_subsystem_error when
// |t| <= eps_t; `index` only labels the error message.
TransferMatrix from_scattering(const ScatteringResponse& resp,
                               double eps_t = kDefaultOpacityGate,
                               std::size_t index = 0);

// diag(e^{i phi}, e^{-i phi})
TransferMatrix propagation(double phi);

// M_total = M_N * M_phi(N-1) * ... * M_phi(1) * M_1
TransferMatrix compose(const ChainSpec& spec, double probe,
                       double eps_t = kDefaultOpacityGate);

// T, R and the total amplitudes for a left-driven chain (b_in at the right
// end is zero, unit input flux).
ChainResponse response(const TransferMatrix& m);

// T_ind = product of per-subsystem |t_n|^2; independent of the spacings.
double independent_transmission(const ChainSpec& spec, double probe);

// Local port fields of every subsystem, reconstructed by marching the
// composed left-port pair through the chain. Feeds per-cavity diagnostics.
struct LocalFields {
    cplx a_in{}, b_in{};
    cplx a_out{}, b_out{};
    SteadyState state;
};

std::vector<LocalFields> port_fields(const ChainSpec& spec, double probe,
                                     double eps_t = kDefaultOpacityGate);

} // namespace cavchain

#endif
