#include "cavchain/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "cavchain/errors.hpp"

namespace cavchain {

LuFactors lu_factor(CMatrix a) {
    const std::size_t n = a.rows();
    LuFactors f;
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t r = k + 1; r < n; ++r) {
            const double v = std::abs(a(r, k));
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0.0) {
            f.singular = true;
            f.lu = std::move(a);
            return f;
        }
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(a(piv, c), a(k, c));
            std::swap(f.perm[piv], f.perm[k]);
        }
        const cplx pivot = a(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            const cplx m = a(r, k) / pivot;
            a(r, k) = m;
            if (m != cplx(0.0)) {
                for (std::size_t c = k + 1; c < n; ++c)
                    a(r, c) -= m * a(k, c);
            }
        }
    }
    f.lu = std::move(a);
    return f;
}

std::vector<cplx> lu_solve(const LuFactors& f, std::vector<cplx> b) {
    const std::size_t n = f.lu.rows();
    std::vector<cplx> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 1; i < n; ++i) {
        cplx s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        cplx s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s / f.lu(i, i);
    }
    return x;
}

double condition_1norm(const CMatrix& a, const LuFactors& f) {
    const std::size_t n = a.rows();
    double norm_a = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += std::abs(a(r, c));
        norm_a = std::max(norm_a, s);
    }
    double norm_inv = 0.0;
    std::vector<cplx> e(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::fill(e.begin(), e.end(), cplx(0.0));
        e[c] = 1.0;
        const std::vector<cplx> col = lu_solve(f, e);
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += std::abs(col[r]);
        norm_inv = std::max(norm_inv, s);
    }
    return norm_a * norm_inv;
}

std::vector<cplx> solve(const CMatrix& a, const std::vector<cplx>& b,
                        double* cond_out) {
    LuFactors f = lu_factor(a);
    if (f.singular)
        throw singular_system_error("linear system is singular");
    if (cond_out) *cond_out = condition_1norm(a, f);
    return lu_solve(f, b);
}

} // namespace cavchain
