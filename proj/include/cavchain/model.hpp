#ifndef CAVCHAIN_MODEL_HPP
#define CAVCHAIN_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cavchain {

// Unit conventions: every rate is quoted in units of the atomic decay rate
// gamma, every length in units of the probe wavelength lambda. Neither unit
// is stored.

// One whispering-gallery resonator, described in the normal-mode basis
// A = (a+b)/sqrt2, B = (a-b)/sqrt2 of its counterpropagating modes. The
// intermodal scattering h splits the normal modes to delta +- h.
struct CavityParams {
    double delta0 = 0.0;    // cavity-laser detuning offset added to the scan variable
    double h = 0.0;         // intermodal scattering rate, >= 0
    double kappa_ex = 0.0;  // fiber coupling rate, >= 0
    double kappa_i = 0.0;   // intrinsic loss rate, >= 0

    double kappa() const { return kappa_ex + kappa_i; }
};

// Two-level emitter next to a cavity. g_A/g_B are the position-dependent
// couplings to the two normal modes; the usual configuration couples the
// atom to B only.
struct AtomParams {
    double Delta0 = 0.0;  // atom-laser detuning offset added to the scan variable
    double gamma = 1.0;   // spontaneous decay rate; the unit of all rates
    double g_A = 0.0;
    double g_B = 0.0;
};

struct SubsystemParams {
    CavityParams cavity;
    std::optional<AtomParams> atom;  // absent = empty cavity

    bool has_atom() const { return atom.has_value(); }
    // An atom with g_A = g_B = 0 behaves exactly like no atom.
    bool atom_is_coupled() const {
        return atom && (atom->g_A != 0.0 || atom->g_B != 0.0);
    }
};

enum class Drive { left };  // right-end drive is test-only, via the oracle

// Ordered chain of subsystems along the fiber. lengths[n] is the distance
// between the coupling points of subsystems n and n+1, in lambda.
struct ChainSpec {
    std::vector<SubsystemParams> subsystems;
    std::vector<double> lengths;
    Drive drive = Drive::left;

    std::size_t size() const { return subsystems.size(); }
};

// Uniform detuning grid. Evaluating subsystem n at probe Delta uses
// delta_n = delta0_n + Delta and Delta_n = Delta0_n + Delta: the laser is
// scanned against all resonances in common.
struct ScanGrid {
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 2;

    double at(std::size_t i) const {
        return start + (stop - start) * static_cast<double>(i) /
                           static_cast<double>(points - 1);
    }
    double step() const {
        return (stop - start) / static_cast<double>(points - 1);
    }
};

struct Violation {
    std::string path;     // e.g. "chain.lengths" or "subsystems[2].cavity.h"
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

ValidationReport validate(const ChainSpec& spec);
ValidationReport validate(const ScanGrid& grid);

// n identical subsystems, n-1 equal spacings.
ChainSpec uniform_chain(std::size_t n, const SubsystemParams& sub, double spacing);

// Propagation phase of one fiber segment. Only the fractional part of the
// length in lambda matters; fmod keeps full precision for lengths like 100.3.
inline double segment_phase(double length_in_lambda) {
    return 2.0 * M_PI * std::fmod(length_in_lambda, 1.0);
}

} // namespace cavchain

#endif
