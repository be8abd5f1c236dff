#ifndef CAVCHAIN_ORACLE_HPP
#define CAVCHAIN_ORACLE_HPP

#include <vector>

#include "cavchain/chain.hpp"
#include "cavchain/model.hpp"

namespace cavchain {

// Direct solution of the complete steady-state system: all cavity modes,
// atomic coherences and fiber links at once. Slower than the transfer
// cascade but valid for any chain, including opaque subsystems; serves as
// ground truth for cross-validation.

struct CavityFields {
    cplx A{}, B{}, sigma{};
    cplx a_in{}, b_in{};
    cplx a_out{}, b_out{};
    double excitation() const { return std::norm(sigma); }
};

struct FullSolution {
    std::vector<CavityFields> cavities;
    double T = 0.0;
    double R = 0.0;
    double max_excitation = 0.0;
    double condition = 0.0;       // 1-norm condition estimate of the system
    double max_residual = 0.0;    // worst equation residual, relative
    bool ill_conditioned = false; // condition above the warning threshold
};

inline constexpr double kConditionWarning = 1e12;

// drive_left feeds a_in of cavity 1, drive_right feeds b_in of cavity N.
FullSolution solve_full(const ChainSpec& spec, double probe,
                        cplx drive_left = 1.0, cplx drive_right = 0.0);

struct DiscrepancyPoint {
    double probe = 0.0;
    double diff_T = 0.0;
    double diff_R = 0.0;
    bool transfer_available = true;
    bool flagged = false;
};

struct DiscrepancyReport {
    std::vector<DiscrepancyPoint> points;
    double max_T = 0.0, mean_T = 0.0;
    double max_R = 0.0, mean_R = 0.0;
    std::size_t unavailable = 0;
    std::size_t flagged = 0;
    double tolerance = 0.0;
    bool ok() const { return flagged == 0; }
};

// Transfer-cascade (T, R) against the direct solve over a grid. Points where
// the transfer path hits the opacity gate are marked unavailable rather than
// compared.
DiscrepancyReport compare_with_transfer(const ChainSpec& spec,
                                        const ScanGrid& grid,
                                        double tolerance = 1e-9);

} // namespace cavchain

#endif
