#ifndef CAVCHAIN_LINALG_HPP
#define CAVCHAIN_LINALG_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace cavchain {

using cplx = std::complex<double>;

// Dense row-major complex matrix. The systems here are at most a few hundred
// unknowns, so a plain LU with partial pivoting is all that is needed.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

struct LuFactors {
    CMatrix lu;                    // combined L (unit diagonal) and U
    std::vector<std::size_t> perm; // row permutation
    bool singular = false;
};

LuFactors lu_factor(CMatrix a);
std::vector<cplx> lu_solve(const LuFactors& f, std::vector<cplx> b);

// ||A||_1 * ||A^-1||_1 via the explicit inverse; exact, fine at these sizes.
double condition_1norm(const CMatrix& a, const LuFactors& f);

// Solve A x = b; throws singular_system_error when the factorization breaks
// down. cond_out, when non-null, receives the 1-norm condition number.
std::vector<cplx> solve(const CMatrix& a, const std::vector<cplx>& b,
                        double* cond_out = nullptr);

} // namespace cavchain

#endif
