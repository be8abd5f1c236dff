#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cavchain/errors.hpp"
#include "cavchain/linalg.hpp"

using namespace cavchain;

TEST_CASE("lu solve recovers a known solution") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 1 + rng() % 12;
        CMatrix a(n, n);
        std::vector<cplx> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = cplx(u(rng), u(rng));
            for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx(u(rng), u(rng));
            a(i, i) += 4.0;  // keep it comfortably nonsingular
        }
        std::vector<cplx> b(n);
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
            b[i] = s;
        }
        const std::vector<cplx> got = solve(a, b);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(got[i] - x[i]) < 1e-11);
    }
}

TEST_CASE("singular systems are reported, never NaN") {
    CMatrix a(2, 2);
    a(0, 0) = 1.0; a(0, 1) = 2.0;
    a(1, 0) = 2.0; a(1, 1) = 4.0;
    CHECK_THROWS_AS(solve(a, {cplx(1.0), cplx(1.0)}), singular_system_error);
}

TEST_CASE("condition number of the identity is one") {
    CMatrix a(3, 3);
    for (int i = 0; i < 3; ++i) a(i, i) = 1.0;
    double cond = 0.0;
    solve(a, {cplx(1.0), cplx(2.0), cplx(3.0)}, &cond);
    CHECK(cond == doctest::Approx(1.0));
}

TEST_CASE("condition number tracks diagonal scaling") {
    CMatrix a(2, 2);
    a(0, 0) = 1e8;
    a(1, 1) = 1e-4;
    double cond = 0.0;
    solve(a, {cplx(1.0), cplx(1.0)}, &cond);
    CHECK(cond == doctest::Approx(1e12));
}
