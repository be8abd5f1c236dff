#ifndef CAVCHAIN_ANALYSIS_HPP
#define CAVCHAIN_ANALYSIS_HPP

#include <functional>
#include <string>
#include <vector>

#include "cavchain/chain.hpp"
#include "cavchain/model.hpp"
#include "cavchain/oracle.hpp"

namespace cavchain {

inline constexpr double kRelSupernessFloor = 1e-9;   // eps_T
inline constexpr double kSaturationDefault = 0.1;

// One scan row: chain observables plus per-cavity diagnostics. The transfer
// cascade is used when every subsystem passes the opacity gate; otherwise
// the full-system solver takes over (used_oracle).
struct SpectrumRecord {
    double probe = 0.0;
    double T = 0.0;
    double R = 0.0;
    double T_ind = 0.0;
    double delta_T = 0.0;            // T - T_ind
    double relative = 0.0;           // delta_T / T, meaningful when defined
    bool relative_defined = false;   // false when T < eps_T
    std::vector<double> excitations; // |sigma_n|^2 per cavity
    double max_excitation = 0.0;
    bool saturated = false;
    bool used_oracle = false;
};

struct Thresholds {
    double saturation = kSaturationDefault;
    double eps_T = kRelSupernessFloor;
    double eps_t = kDefaultOpacityGate;
};

SpectrumRecord evaluate_point(const ChainSpec& spec, double probe,
                              const Thresholds& th = {});

std::vector<SpectrumRecord> superness_spectrum(const ChainSpec& spec,
                                               const ScanGrid& grid,
                                               const Thresholds& th = {});

// Golden-section maximization of f on [a, b].
double golden_section_max(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-7);

struct PeakEstimate {
    double probe = 0.0;
    double value = 0.0;
};

// Grid argmax refined by golden-section search between the neighbours.
PeakEstimate refine_peak(const std::function<double(double)>& f,
                         const std::vector<double>& xs,
                         const std::vector<double>& ys);

// Chain-length scan for uniform chains. The supermode peak found at the
// first N is followed through the longer chains: each subsequent peak is
// the refined maximum inside a window around the previous peak position,
// so the reported sequence traces one spectral feature rather than hopping
// between unrelated maxima.
struct LengthScanPoint {
    std::size_t n = 0;
    double peak_probe = 0.0;
    double peak_delta_T = 0.0;
    double peak_relative = 0.0;      // delta_T / T at the tracked peak
    bool relative_defined = false;
};

std::vector<LengthScanPoint> scan_chain_length(
    const SubsystemParams& sub, double spacing, const ScanGrid& grid,
    const std::vector<std::size_t>& n_range, double track_window = 6.0,
    const Thresholds& th = {});

// --- multiple-reflection pathway decomposition ---

struct PathwayEvent {
    enum class Kind { transmit, reflect, segment_forward, segment_backward };
    Kind kind;
    std::size_t index;  // cavity index for transmit/reflect, segment index otherwise
};

struct Pathway {
    std::vector<PathwayEvent> events;
    cplx amplitude{};
    std::size_t bounces = 0;

    std::string describe() const;  // e.g. "t1 >1 r2 <1 r1 >1 t2"
};

struct PathwaySet {
    std::vector<Pathway> pathways;
    cplx truncated_sum{};
};

// All transmission pathways with at most max_bounces reflection events,
// in depth-first order (straight-through first). max_bounces must be even.
PathwaySet pathways(const ChainSpec& spec, double probe,
                    std::size_t max_bounces, std::size_t max_count = 1000000);

// arg(r_a) + arg(r_b) + 2 phi reduced to (-pi, pi]; zero means the
// double-reflection pathway adds exactly in phase with the direct one.
double constructive_condition(cplx r_a, cplx r_b, double phi);

// --- reflection-based identification of atom configurations ---

struct SignatureFeatures {
    double min_probe = 0.0;
    double min_R = 0.0;
    double max_R = 0.0;
    double R_at_zero = 0.0;  // at the grid point nearest probe = 0
};

struct ConfigurationSignature {
    std::string label;                  // "none", "1", "1+2", ...
    std::vector<std::size_t> atoms_at;  // 1-based cavity indices with active atom
    std::vector<double> reflection;     // R over the grid
    SignatureFeatures features;
};

// All on/off configurations of the atoms present in the base chain.
std::vector<ConfigurationSignature> reflection_signatures(
    const ChainSpec& base, const ScanGrid& grid, std::size_t max_configs = 16,
    const Thresholds& th = {});

struct Classification {
    std::string label;
    std::size_t index = 0;
    double distance = 0.0;
    double margin = 0.0;   // runner-up distance minus winner distance
    bool ambiguous = false;
};

// Nearest candidate under the maximum pointwise distance.
Classification classify_configuration(
    const std::vector<double>& observed,
    const std::vector<ConfigurationSignature>& candidates,
    double ambiguity_threshold = 0.01);

} // namespace cavchain

#endif
