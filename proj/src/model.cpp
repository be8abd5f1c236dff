#include "cavchain/model.hpp"

#include <sstream>

namespace cavchain {

namespace {

void check_subsystem(const SubsystemParams& s, std::size_t index,
                     std::vector<Violation>& out) {
    const std::string base = "subsystems[" + std::to_string(index) + "]";
    const CavityParams& c = s.cavity;
    if (!(c.h >= 0.0))
        out.push_back({base + ".cavity.h", "must be >= 0"});
    if (!(c.kappa_ex >= 0.0))
        out.push_back({base + ".cavity.kappa_ex", "must be >= 0"});
    if (!(c.kappa_i >= 0.0))
        out.push_back({base + ".cavity.kappa_i", "must be >= 0"});
    if (!(c.kappa_ex + c.kappa_i > 0.0))
        out.push_back({base + ".cavity", "total loss must be positive"});
    if (!std::isfinite(c.delta0))
        out.push_back({base + ".cavity.delta0", "must be finite"});
    if (s.atom) {
        if (!(s.atom->gamma > 0.0))
            out.push_back({base + ".atom.gamma", "must be > 0"});
        if (!(s.atom->g_A >= 0.0))
            out.push_back({base + ".atom.g_A", "must be >= 0"});
        if (!(s.atom->g_B >= 0.0))
            out.push_back({base + ".atom.g_B", "must be >= 0"});
        if (!std::isfinite(s.atom->Delta0))
            out.push_back({base + ".atom.Delta0", "must be finite"});
    }
}

} // namespace

std::string ValidationReport::summary() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i].path << ": " << violations[i].message;
    }
    return os.str();
}

ValidationReport validate(const ChainSpec& spec) {
    ValidationReport rep;
    if (spec.subsystems.empty())
        rep.violations.push_back({"subsystems", "chain must have at least one subsystem"});
    for (std::size_t i = 0; i < spec.subsystems.size(); ++i)
        check_subsystem(spec.subsystems[i], i, rep.violations);
    if (!spec.subsystems.empty() &&
        spec.lengths.size() != spec.subsystems.size() - 1) {
        rep.violations.push_back(
            {"lengths", "lengths.count != N-1 (got " +
                            std::to_string(spec.lengths.size()) + ", expected " +
                            std::to_string(spec.subsystems.size() - 1) + ")"});
    }
    for (std::size_t i = 0; i < spec.lengths.size(); ++i) {
        if (!(spec.lengths[i] > 0.0))
            rep.violations.push_back(
                {"lengths[" + std::to_string(i) + "]", "must be > 0"});
    }
    return rep;
}

ValidationReport validate(const ScanGrid& grid) {
    ValidationReport rep;
    if (grid.points < 2)
        rep.violations.push_back({"scan.points", "must be >= 2"});
    if (!(grid.stop > grid.start))
        rep.violations.push_back({"scan", "stop must exceed start"});
    if (!std::isfinite(grid.start) || !std::isfinite(grid.stop))
        rep.violations.push_back({"scan", "bounds must be finite"});
    return rep;
}

ChainSpec uniform_chain(std::size_t n, const SubsystemParams& sub, double spacing) {
    if (n == 0)
        throw std::invalid_argument("uniform_chain: n must be >= 1");
    if (!(spacing > 0.0))
        throw std::invalid_argument("uniform_chain: spacing must be > 0");
    ChainSpec spec;
    spec.subsystems.assign(n, sub);
    spec.lengths.assign(n - 1, spacing);
    return spec;
}

} // namespace cavchain
