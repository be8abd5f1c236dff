#include "cavchain/oracle.hpp"

#include <cmath>

#include "cavchain/errors.hpp"
#include "cavchain/linalg.hpp"
#include "cavchain/numeric.hpp"

namespace cavchain {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
const cplx kI{0.0, 1.0};

// Affine expression c0 + sum_k coeff[k] * x_k over the packed unknowns.
struct Affine {
    cplx c0{};
    std::vector<cplx> coeff;

    explicit Affine(std::size_t n) : coeff(n) {}
    void add(std::size_t k, cplx v) { coeff[k] += v; }
    Affine& operator*=(cplx s) {
        c0 *= s;
        for (cplx& v : coeff) v *= s;
        return *this;
    }
    cplx eval(const std::vector<cplx>& x) const {
        cplx v = c0;
        for (std::size_t k = 0; k < coeff.size(); ++k) v += coeff[k] * x[k];
        return v;
    }
};

struct Layout {
    std::vector<std::size_t> base;  // first unknown of cavity n
    std::vector<bool> atom;        // has a coherence unknown
    std::size_t total = 0;
};

Layout layout_of(const ChainSpec& spec) {
    Layout lo;
    lo.base.resize(spec.size());
    lo.atom.resize(spec.size());
    std::size_t c = 0;
    for (std::size_t n = 0; n < spec.size(); ++n) {
        lo.base[n] = c;
        lo.atom[n] = spec.subsystems[n].has_atom();
        c += lo.atom[n] ? 3 : 2;
    }
    lo.total = c;
    return lo;
}

} // namespace

FullSolution solve_full(const ChainSpec& spec, double probe, cplx drive_left,
                        cplx drive_right) {
    const std::size_t n = spec.size();
    const Layout lo = layout_of(spec);

    // Port inputs as affine forms over the unknowns, built by marching the
    // link relations a_in,n = a_out,n-1 e^{i phi_(n-1)} from the left and
    // b_in,n = b_out,n+1 e^{i phi_n} from the right.
    std::vector<Affine> a_in(n, Affine(lo.total));
    std::vector<Affine> b_in(n, Affine(lo.total));
    a_in[0].c0 = drive_left;
    for (std::size_t k = 1; k < n; ++k) {
        const double sq = std::sqrt(2.0 * spec.subsystems[k - 1].cavity.kappa_ex);
        Affine out = a_in[k - 1];
        out *= cplx(-1.0);
        out.add(lo.base[k - 1] + 0, sq * kInvSqrt2);  // A_(k-1)
        out.add(lo.base[k - 1] + 1, sq * kInvSqrt2);  // B_(k-1)
        out *= std::polar(1.0, segment_phase(spec.lengths[k - 1]));
        a_in[k] = std::move(out);
    }
    b_in[n - 1].c0 = drive_right;
    for (std::size_t k = n - 1; k-- > 0;) {
        const double sq = std::sqrt(2.0 * spec.subsystems[k + 1].cavity.kappa_ex);
        Affine out = b_in[k + 1];
        out *= cplx(-1.0);
        out.add(lo.base[k + 1] + 0, sq * kInvSqrt2);
        out.add(lo.base[k + 1] + 1, -sq * kInvSqrt2);
        out *= std::polar(1.0, segment_phase(spec.lengths[k]));
        b_in[k] = std::move(out);
    }

    CMatrix m(lo.total, lo.total);
    std::vector<cplx> rhs(lo.total);
    std::size_t row = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const SubsystemParams& sub = spec.subsystems[k];
        const CavityParams& c = sub.cavity;
        const double delta = c.delta0 + probe;
        const cplx dA = kI * (delta + c.h) + c.kappa();
        const cplx dB = kI * (delta - c.h) + c.kappa();
        const double sqh = std::sqrt(c.kappa_ex);  // sqrt(2 kex)/sqrt(2)

        // dA*A + i gA sigma - sqh*(a_in + b_in) = 0
        m(row, lo.base[k] + 0) = dA;
        if (lo.atom[k]) m(row, lo.base[k] + 2) = kI * sub.atom->g_A;
        for (std::size_t j = 0; j < lo.total; ++j)
            m(row, j) -= sqh * (a_in[k].coeff[j] + b_in[k].coeff[j]);
        rhs[row] = sqh * (a_in[k].c0 + b_in[k].c0);
        ++row;

        // dB*B + gB sigma - sqh*(a_in - b_in) = 0
        m(row, lo.base[k] + 1) = dB;
        if (lo.atom[k]) m(row, lo.base[k] + 2) = sub.atom->g_B;
        for (std::size_t j = 0; j < lo.total; ++j)
            m(row, j) -= sqh * (a_in[k].coeff[j] - b_in[k].coeff[j]);
        rhs[row] = sqh * (a_in[k].c0 - b_in[k].c0);
        ++row;

        if (lo.atom[k]) {
            const AtomParams& at = *sub.atom;
            m(row, lo.base[k] + 0) = kI * at.g_A;
            m(row, lo.base[k] + 1) = -at.g_B;
            m(row, lo.base[k] + 2) = kI * (at.Delta0 + probe) + at.gamma;
            rhs[row] = 0.0;
            ++row;
        }
    }

    double cond = 0.0;
    std::vector<cplx> x;
    try {
        x = solve(m, rhs, &cond);
    } catch (const singular_system_error&) {
        throw singular_system_error("full chain system is singular", cond);
    }

    FullSolution sol;
    sol.condition = cond;
    sol.ill_conditioned = cond > kConditionWarning;
    sol.cavities.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        CavityFields& f = sol.cavities[k];
        f.A = x[lo.base[k] + 0];
        f.B = x[lo.base[k] + 1];
        f.sigma = lo.atom[k] ? x[lo.base[k] + 2] : cplx(0.0);
        f.a_in = a_in[k].eval(x);
        f.b_in = b_in[k].eval(x);
        const double sq = std::sqrt(2.0 * spec.subsystems[k].cavity.kappa_ex);
        f.a_out = -f.a_in + sq * (f.A + f.B) * kInvSqrt2;
        f.b_out = -f.b_in + sq * (f.A - f.B) * kInvSqrt2;
        sol.max_excitation = std::max(sol.max_excitation, f.excitation());
    }

    // Residual check against the assembled equations.
    double scale = 0.0;
    for (std::size_t j = 0; j < lo.total; ++j) scale = std::max(scale, std::abs(x[j]));
    double mnorm = 0.0;
    for (std::size_t r = 0; r < lo.total; ++r) {
        double s = 0.0;
        for (std::size_t c2 = 0; c2 < lo.total; ++c2) s += std::abs(m(r, c2));
        mnorm = std::max(mnorm, s);
    }
    const double denom = std::max(1e-300, mnorm * scale);
    for (std::size_t r = 0; r < lo.total; ++r) {
        cplx acc = -rhs[r];
        for (std::size_t c2 = 0; c2 < lo.total; ++c2) acc += m(r, c2) * x[c2];
        sol.max_residual = std::max(sol.max_residual, std::abs(acc) / denom);
    }

    const double in_flux = std::norm(drive_left) + std::norm(drive_right);
    if (in_flux > 0.0) {
        if (drive_left != cplx(0.0) && drive_right == cplx(0.0)) {
            sol.T = std::norm(sol.cavities[n - 1].a_out) / std::norm(drive_left);
            sol.R = std::norm(sol.cavities[0].b_out) / std::norm(drive_left);
        } else if (drive_left == cplx(0.0)) {
            sol.T = std::norm(sol.cavities[0].b_out) / std::norm(drive_right);
            sol.R = std::norm(sol.cavities[n - 1].a_out) / std::norm(drive_right);
        } else {
            // both ports driven: totals are not separable, leave T = R = 0
            sol.T = sol.R = 0.0;
        }
    }
    return sol;
}

DiscrepancyReport compare_with_transfer(const ChainSpec& spec,
                                        const ScanGrid& grid,
                                        double tolerance) {
    DiscrepancyReport rep;
    rep.tolerance = tolerance;
    rep.points.reserve(grid.points);
    double sum_T = 0.0, sum_R = 0.0;
    std::size_t compared = 0;
    for (std::size_t i = 0; i < grid.points; ++i) {
        DiscrepancyPoint p;
        p.probe = grid.at(i);
        const FullSolution full = solve_full(spec, p.probe);
        try {
            const TransferMatrix m = compose(spec, p.probe);
            if (std::abs(m.det() - 1.0) > kTransferDetGate) {
                p.transfer_available = false;
                ++rep.unavailable;
                rep.points.push_back(p);
                continue;
            }
            const ChainResponse tr = response(m);
            p.diff_T = rel_diff(tr.T, full.T);
            p.diff_R = rel_diff(tr.R, full.R);
            p.flagged = p.diff_T > tolerance || p.diff_R > tolerance;
            rep.max_T = std::max(rep.max_T, p.diff_T);
            rep.max_R = std::max(rep.max_R, p.diff_R);
            sum_T += p.diff_T;
            sum_R += p.diff_R;
            ++compared;
        } catch (const opaque_subsystem_error&) {
            p.transfer_available = false;
            ++rep.unavailable;
        }
        if (p.flagged) ++rep.flagged;
        rep.points.push_back(p);
    }
    if (compared > 0) {
        rep.mean_T = sum_T / static_cast<double>(compared);
        rep.mean_R = sum_R / static_cast<double>(compared);
    }
    return rep;
}

} // namespace cavchain
