#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cavchain/errors.hpp"
#include "cavchain/numeric.hpp"
#include "cavchain/oracle.hpp"
#include "helpers.hpp"

using namespace cavchain;
using cavchain::testing::Gen;

TEST_CASE("a single subsystem reduces to the scattering amplitudes") {
    Gen gen(3);
    for (int rep = 0; rep < 50; ++rep) {
        ChainSpec spec = gen.chain(1);
        const double probe = gen.uniform(-150.0, 150.0);
        const FullSolution sol = solve_full(spec, probe);
        const ScatteringResponse resp =
            scattering_amplitudes(spec.subsystems[0], probe);
        CHECK(rel_diff(sol.cavities[0].a_out, resp.t) < 1e-12);
        CHECK(rel_diff(sol.cavities[0].b_out, resp.r) < 1e-12);
    }
}

TEST_CASE("atom-free lossless chains conserve flux") {
    Gen gen(13);
    for (int rep = 0; rep < 50; ++rep) {
        ChainSpec spec = gen.chain(gen.pick({1, 2, 3, 5}), false);
        for (SubsystemParams& s : spec.subsystems) s.cavity.kappa_i = 0.0;
        const FullSolution sol = solve_full(spec, gen.uniform(-150.0, 150.0));
        CHECK(std::abs(sol.T + sol.R - 1.0) < 1e-12);
    }
}

TEST_CASE("transfer cascade agrees with the direct solve") {
    Gen gen(29);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const ChainSpec spec = gen.chain(gen.pick({1, 2, 3, 5}));
        for (int k = 0; k < 5; ++k) {
            const double probe = gen.uniform(-150.0, 150.0);
            const FullSolution full = solve_full(spec, probe);
            try {
                const ChainResponse tr = response(compose(spec, probe));
                worst = std::max(
                    {worst, rel_diff(tr.T, full.T), rel_diff(tr.R, full.R)});
            } catch (const opaque_subsystem_error&) {
            }
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("port fields from the cascade match the direct solve") {
    Gen gen(37);
    for (int rep = 0; rep < 30; ++rep) {
        const ChainSpec spec = gen.chain(gen.pick({2, 3, 5}));
        const double probe = gen.uniform(-120.0, 120.0);
        const FullSolution full = solve_full(spec, probe);
        try {
            const std::vector<LocalFields> pf = port_fields(spec, probe);
            for (std::size_t k = 0; k < pf.size(); ++k) {
                CHECK(rel_diff(pf[k].a_in, full.cavities[k].a_in) < 1e-9);
                CHECK(rel_diff(pf[k].b_in, full.cavities[k].b_in) < 1e-9);
                CHECK(rel_diff(pf[k].state.sigma, full.cavities[k].sigma) < 1e-9);
            }
        } catch (const opaque_subsystem_error&) {
        }
    }
}

TEST_CASE("residuals stay at solver precision") {
    Gen gen(43);
    for (int rep = 0; rep < 50; ++rep) {
        const ChainSpec spec = gen.chain(gen.pick({2, 3, 5}));
        const FullSolution sol = solve_full(spec, gen.uniform(-150.0, 150.0));
        CHECK(sol.max_residual < 1e-10);
        CHECK_FALSE(sol.ill_conditioned);
    }
}

TEST_CASE("mirror duality: right drive on the reversed chain") {
    Gen gen(53);
    for (int rep = 0; rep < 30; ++rep) {
        const ChainSpec spec = gen.chain(gen.pick({2, 3, 5}));
        const double probe = gen.uniform(-120.0, 120.0);
        ChainSpec mirrored = spec;
        std::reverse(mirrored.subsystems.begin(), mirrored.subsystems.end());
        std::reverse(mirrored.lengths.begin(), mirrored.lengths.end());

        const FullSolution fwd = solve_full(spec, probe, 1.0, 0.0);
        const FullSolution rev = solve_full(mirrored, probe, 0.0, 1.0);
        const std::size_t n = spec.size();
        for (std::size_t k = 0; k < n; ++k) {
            // cavity k of the original is cavity n-1-k of the mirror with
            // the port roles exchanged
            const CavityFields& f = fwd.cavities[k];
            const CavityFields& m = rev.cavities[n - 1 - k];
            CHECK(rel_diff(f.a_in, m.b_in) < 1e-10);
            CHECK(rel_diff(f.b_in, m.a_in) < 1e-10);
            CHECK(rel_diff(f.a_out, m.b_out) < 1e-10);
            CHECK(rel_diff(f.b_out, m.a_out) < 1e-10);
        }
        CHECK(rel_diff(fwd.T, rev.T) < 1e-10);
        CHECK(rel_diff(fwd.R, rev.R) < 1e-10);
    }
}

TEST_CASE("compare_with_transfer on a single subsystem") {
    Gen gen(61);
    const ChainSpec spec = gen.chain(1);
    const DiscrepancyReport rep =
        compare_with_transfer(spec, ScanGrid{-50.0, 50.0, 101});
    CHECK(rep.ok());
    CHECK(rep.unavailable == 0);
    CHECK(rep.max_T < 1e-12);
    CHECK(rep.max_R < 1e-12);
}

TEST_CASE("compare_with_transfer marks opaque points unavailable") {
    // kappa_ex = sqrt(kappa_i^2 + h^2) makes the bare cavity exactly opaque
    // between its split resonances
    SubsystemParams opaque;
    opaque.cavity.h = 50.0;
    opaque.cavity.kappa_i = 0.5;
    opaque.cavity.kappa_ex = std::sqrt(0.5 * 0.5 + 50.0 * 50.0);
    REQUIRE(std::abs(scattering_amplitudes(opaque, 0.0).t) < 1e-12);

    ChainSpec spec;
    spec.subsystems = {opaque};
    const DiscrepancyReport rep =
        compare_with_transfer(spec, ScanGrid{-10.0, 10.0, 3});
    CHECK(rep.unavailable == 1);
    CHECK_FALSE(rep.points[1].transfer_available);
    CHECK(rep.points[0].transfer_available);
    CHECK(rep.ok());
}

TEST_CASE("random three-cavity chains pass the discrepancy scan") {
    Gen gen(71);
    const ChainSpec spec = gen.chain(3);
    const DiscrepancyReport rep =
        compare_with_transfer(spec, ScanGrid{-100.0, 100.0, 201});
    CHECK(rep.ok());
    CHECK(rep.max_T < 1e-9);
    CHECK(rep.max_R < 1e-9);
}
