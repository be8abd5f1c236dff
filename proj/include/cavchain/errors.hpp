#ifndef CAVCHAIN_ERRORS_HPP
#define CAVCHAIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cavchain {

// A steady-state system without a unique solution (all losses zero at a
// degenerate parameter point).
class singular_system_error : public std::runtime_error {
public:
    explicit singular_system_error(const std::string& what, double condition = 0.0)
        : std::runtime_error(what), condition_estimate(condition) {}
    double condition_estimate;
};

// |t| at or below the opacity gate: the transfer matrix of this subsystem is
// numerically singular. The full-system solver handles these points.
class opaque_subsystem_error : public std::runtime_error {
public:
    opaque_subsystem_error(std::size_t index, double abs_t)
        : std::runtime_error("subsystem " + std::to_string(index) +
                             " is opaque (|t| = " + std::to_string(abs_t) +
                             "); use the direct solver"),
          subsystem_index(index), magnitude(abs_t) {}
    std::size_t subsystem_index;
    double magnitude;
};

class degenerate_chain_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class grid_mismatch_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class pathway_limit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class undefined_phase_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cavchain

#endif
