#ifndef CAVCHAIN_RESONATOR_HPP
#define CAVCHAIN_RESONATOR_HPP

#include "cavchain/linalg.hpp"
#include "cavchain/model.hpp"

namespace cavchain {

// Weak-excitation steady state of one subsystem.
//
// With D_A = i(delta+h)+kappa, D_B = i(delta-h)+kappa, D_s = i*Delta+gamma
// and normal-mode inputs A_in = (a_in+b_in)/sqrt2, B_in = (a_in-b_in)/sqrt2,
// the solved equations are
//
//   0 = -D_A A + sqrt(2 kappa_ex) A_in - i g_A sigma
//   0 = -D_B B + sqrt(2 kappa_ex) B_in -   g_B sigma
//   0 = -D_s sigma - i g_A A + g_B B
//
// The relative signs of the coupling terms are fixed so that the energy
// exchange between atom and modes is conservative: |t|^2 + |r|^2 <= 1 with
// equality exactly in the lossless limit, and scattering is symmetric
// whenever the atom couples to a single normal mode.
struct SteadyState {
    cplx A{};      // normal-mode amplitudes per unit input flux amplitude
    cplx B{};
    cplx sigma{};  // atomic coherence; zero for empty cavities

    double excitation() const { return std::norm(sigma); }
};

struct ScatteringResponse {
    cplx t{};  // a_out under drive (a_in, b_in) = (1, 0)
    cplx r{};  // b_out under the same drive
    SteadyState state;
};

SteadyState steady_state(const SubsystemParams& sub, double probe, cplx a_in,
                         cplx b_in);

ScatteringResponse scattering_amplitudes(const SubsystemParams& sub, double probe);

struct ExcitationGuard {
    double excitation = 0.0;  // |sigma|^2
    bool saturated = false;
};

// Diagnostic for the weak-excitation assumption; does not alter any result.
ExcitationGuard excitation_guard(const SubsystemParams& sub, double probe,
                                 cplx a_in, cplx b_in,
                                 double threshold = 0.1);

struct ModePopulations {
    double pop_A = 0.0;  // |A|^2
    double pop_B = 0.0;  // |B|^2
};

ModePopulations mode_populations(const SubsystemParams& sub, double probe,
                                 cplx a_in, cplx b_in);

} // namespace cavchain

#endif
