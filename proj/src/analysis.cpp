#include "cavchain/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cavchain/errors.hpp"
#include "cavchain/numeric.hpp"

namespace cavchain {

SpectrumRecord evaluate_point(const ChainSpec& spec, double probe,
                              const Thresholds& th) {
    SpectrumRecord rec;
    rec.probe = probe;
    rec.T_ind = independent_transmission(spec, probe);
    bool use_direct = false;
    try {
        const TransferMatrix m = compose(spec, probe, th.eps_t);
        if (std::abs(m.det() - 1.0) > kTransferDetGate) {
            use_direct = true;
        } else {
            const ChainResponse resp = response(m);
            rec.T = resp.T;
            rec.R = resp.R;
            for (const LocalFields& lf : port_fields(spec, probe, th.eps_t))
                rec.excitations.push_back(lf.state.excitation());
        }
    } catch (const opaque_subsystem_error&) {
        use_direct = true;
    }
    if (use_direct) {
        const FullSolution full = solve_full(spec, probe);
        rec.T = full.T;
        rec.R = full.R;
        for (const CavityFields& f : full.cavities)
            rec.excitations.push_back(f.excitation());
        rec.used_oracle = true;
    }
    rec.delta_T = rec.T - rec.T_ind;
    rec.relative_defined = rec.T >= th.eps_T;
    rec.relative = rec.relative_defined ? rec.delta_T / rec.T : 0.0;
    for (double e : rec.excitations)
        rec.max_excitation = std::max(rec.max_excitation, e);
    rec.saturated = rec.max_excitation > th.saturation;
    return rec;
}

std::vector<SpectrumRecord> superness_spectrum(const ChainSpec& spec,
                                               const ScanGrid& grid,
                                               const Thresholds& th) {
    std::vector<SpectrumRecord> rows;
    rows.reserve(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i)
        rows.push_back(evaluate_point(spec, grid.at(i), th));
    return rows;
}

double golden_section_max(const std::function<double(double)>& f, double a,
                          double b, double tol) {
    static const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c; fd = fc;
            c = b - gr * (b - a); fc = f(c);
        } else {
            a = c;
            c = d; fc = fd;
            d = a + gr * (b - a); fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

PeakEstimate refine_peak(const std::function<double(double)>& f,
                         const std::vector<double>& xs,
                         const std::vector<double>& ys) {
    const std::size_t i =
        static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
    const double a = xs[i == 0 ? 0 : i - 1];
    const double b = xs[std::min(i + 1, xs.size() - 1)];
    PeakEstimate pk;
    if (a == b) {
        pk.probe = xs[i];
        pk.value = ys[i];
        return pk;
    }
    pk.probe = golden_section_max(f, a, b);
    pk.value = f(pk.probe);
    if (ys[i] > pk.value) {  // refinement never loses against the grid sample
        pk.probe = xs[i];
        pk.value = ys[i];
    }
    return pk;
}

std::vector<LengthScanPoint> scan_chain_length(
    const SubsystemParams& sub, double spacing, const ScanGrid& grid,
    const std::vector<std::size_t>& n_range, double track_window,
    const Thresholds& th) {
    if (n_range.empty())
        throw std::invalid_argument("scan_chain_length: empty n_range");
    for (std::size_t n : n_range)
        if (n < 2)
            throw std::invalid_argument("scan_chain_length: every N must be >= 2");

    std::vector<LengthScanPoint> out;
    out.reserve(n_range.size());
    bool have_track = false;
    double track_x = 0.0;
    for (std::size_t n : n_range) {
        const ChainSpec spec = uniform_chain(n, sub, spacing);
        auto delta_T_of = [&](double p) { return evaluate_point(spec, p, th).delta_T; };

        std::vector<double> xs, ys;
        xs.reserve(grid.points);
        ys.reserve(grid.points);
        for (std::size_t i = 0; i < grid.points; ++i) {
            const double x = grid.at(i);
            if (have_track && std::abs(x - track_x) > track_window) continue;
            xs.push_back(x);
            ys.push_back(delta_T_of(x));
        }
        const PeakEstimate pk = refine_peak(delta_T_of, xs, ys);
        track_x = pk.probe;
        have_track = true;

        const SpectrumRecord at_pk = evaluate_point(spec, pk.probe, th);
        LengthScanPoint pt;
        pt.n = n;
        pt.peak_probe = pk.probe;
        pt.peak_delta_T = pk.value;
        pt.peak_relative = at_pk.relative;
        pt.relative_defined = at_pk.relative_defined;
        out.push_back(pt);
    }
    return out;
}

// --- pathways ---

std::string Pathway::describe() const {
    std::string s;
    for (const PathwayEvent& e : events) {
        if (!s.empty()) s += ' ';
        switch (e.kind) {
            case PathwayEvent::Kind::transmit:
                s += 't' + std::to_string(e.index + 1);
                break;
            case PathwayEvent::Kind::reflect:
                s += 'r' + std::to_string(e.index + 1);
                break;
            case PathwayEvent::Kind::segment_forward:
                s += '>' + std::to_string(e.index + 1);
                break;
            case PathwayEvent::Kind::segment_backward:
                s += '<' + std::to_string(e.index + 1);
                break;
        }
    }
    return s;
}

namespace {

struct PathwayEnumerator {
    const std::vector<cplx>& t;
    const std::vector<cplx>& r;
    const std::vector<cplx>& seg;  // e^{i phi_k}
    std::size_t max_bounces;
    std::size_t max_count;
    PathwaySet result;
    std::vector<PathwayEvent> events;

    void emit(cplx amp, std::size_t bounces) {
        if (result.pathways.size() >= max_count)
            throw pathway_limit_error(
                "pathway enumeration exceeded the configured cap of " +
                std::to_string(max_count));
        Pathway p;
        p.events = events;
        p.amplitude = amp;
        p.bounces = bounces;
        result.pathways.push_back(std::move(p));
        result.truncated_sum += amp;
    }

    // About to hit cavity `k` travelling forward (toward higher indices).
    void forward(std::size_t k, cplx amp, std::size_t bounces) {
        // transmit
        events.push_back({PathwayEvent::Kind::transmit, k});
        if (k + 1 == t.size()) {
            emit(amp * t[k], bounces);
        } else {
            events.push_back({PathwayEvent::Kind::segment_forward, k});
            forward(k + 1, amp * t[k] * seg[k], bounces);
            events.pop_back();
        }
        events.pop_back();
        // reflect: turns the path backward; leaving through the front face
        // of cavity 0 is a reflection contribution, not a transmission one.
        if (bounces < max_bounces && k > 0) {
            events.push_back({PathwayEvent::Kind::reflect, k});
            events.push_back({PathwayEvent::Kind::segment_backward, k - 1});
            backward(k - 1, amp * r[k] * seg[k - 1], bounces + 1);
            events.pop_back();
            events.pop_back();
        }
    }

    // About to hit cavity `k` travelling backward.
    void backward(std::size_t k, cplx amp, std::size_t bounces) {
        // transmitting through cavity 0 backward exits the chain: dead branch
        if (bounces < max_bounces) {
            events.push_back({PathwayEvent::Kind::reflect, k});
            events.push_back({PathwayEvent::Kind::segment_forward, k});
            forward(k + 1, amp * r[k] * seg[k], bounces + 1);
            events.pop_back();
            events.pop_back();
        }
        if (k > 0) {
            events.push_back({PathwayEvent::Kind::transmit, k});
            events.push_back({PathwayEvent::Kind::segment_backward, k - 1});
            backward(k - 1, amp * t[k] * seg[k - 1], bounces);
            events.pop_back();
            events.pop_back();
        }
    }
};

} // namespace

PathwaySet pathways(const ChainSpec& spec, double probe,
                    std::size_t max_bounces, std::size_t max_count) {
    if (max_bounces % 2 != 0)
        throw std::invalid_argument("pathways: max_bounces must be even");
    const std::size_t n = spec.size();
    std::vector<cplx> t(n), r(n), seg(n > 0 ? n - 1 : 0);
    for (std::size_t k = 0; k < n; ++k) {
        const ScatteringResponse resp = scattering_amplitudes(spec.subsystems[k], probe);
        t[k] = resp.t;
        r[k] = resp.r;
    }
    for (std::size_t k = 0; k + 1 < n; ++k)
        seg[k] = std::polar(1.0, segment_phase(spec.lengths[k]));

    PathwayEnumerator en{t, r, seg, max_bounces, max_count, {}, {}};
    en.forward(0, cplx(1.0), 0);
    return std::move(en.result);
}

double constructive_condition(cplx r_a, cplx r_b, double phi) {
    if (r_a == cplx(0.0) || r_b == cplx(0.0))
        throw undefined_phase_error(
            "constructive_condition: reflection amplitude is zero");
    return wrap_phase(std::arg(r_a) + std::arg(r_b) + 2.0 * phi);
}

// --- reflection signatures ---

namespace {

SignatureFeatures features_of(const ScanGrid& grid,
                              const std::vector<double>& refl) {
    SignatureFeatures f;
    std::size_t imin = 0, izero = 0;
    double best_zero = std::abs(grid.at(0));
    f.max_R = refl[0];
    for (std::size_t i = 0; i < refl.size(); ++i) {
        if (refl[i] < refl[imin]) imin = i;
        f.max_R = std::max(f.max_R, refl[i]);
        const double d0 = std::abs(grid.at(i));
        if (d0 < best_zero) { best_zero = d0; izero = i; }
    }
    f.min_probe = grid.at(imin);
    f.min_R = refl[imin];
    f.R_at_zero = refl[izero];
    return f;
}

} // namespace

std::vector<ConfigurationSignature> reflection_signatures(
    const ChainSpec& base, const ScanGrid& grid, std::size_t max_configs,
    const Thresholds& th) {
    std::vector<std::size_t> atom_sites;
    for (std::size_t k = 0; k < base.size(); ++k)
        if (base.subsystems[k].has_atom()) atom_sites.push_back(k);

    const std::size_t n_cfg = std::size_t{1} << atom_sites.size();
    if (n_cfg > max_configs)
        throw std::invalid_argument(
            "reflection_signatures: " + std::to_string(n_cfg) +
            " configurations exceed the cap of " + std::to_string(max_configs));

    std::vector<ConfigurationSignature> out;
    out.reserve(n_cfg);
    for (std::size_t mask = 0; mask < n_cfg; ++mask) {
        ChainSpec spec = base;
        ConfigurationSignature sig;
        for (std::size_t b = 0; b < atom_sites.size(); ++b) {
            if (mask & (std::size_t{1} << b)) {
                sig.atoms_at.push_back(atom_sites[b] + 1);
            } else {
                spec.subsystems[atom_sites[b]].atom.reset();
            }
        }
        if (sig.atoms_at.empty()) {
            sig.label = "none";
        } else {
            for (std::size_t i = 0; i < sig.atoms_at.size(); ++i) {
                if (i) sig.label += '+';
                sig.label += std::to_string(sig.atoms_at[i]);
            }
        }
        sig.reflection.reserve(grid.points);
        for (std::size_t i = 0; i < grid.points; ++i)
            sig.reflection.push_back(evaluate_point(spec, grid.at(i), th).R);
        sig.features = features_of(grid, sig.reflection);
        out.push_back(std::move(sig));
    }
    return out;
}

Classification classify_configuration(
    const std::vector<double>& observed,
    const std::vector<ConfigurationSignature>& candidates,
    double ambiguity_threshold) {
    if (candidates.empty())
        throw std::invalid_argument("classify_configuration: no candidates");
    std::vector<double> dist(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const std::vector<double>& spec = candidates[c].reflection;
        if (spec.size() != observed.size())
            throw grid_mismatch_error(
                "classify_configuration: candidate '" + candidates[c].label +
                "' has " + std::to_string(spec.size()) + " points, observed has " +
                std::to_string(observed.size()));
        double d = 0.0;
        for (std::size_t i = 0; i < spec.size(); ++i)
            d = std::max(d, std::abs(spec[i] - observed[i]));
        dist[c] = d;
    }
    std::size_t best_i = 0;
    for (std::size_t c = 1; c < dist.size(); ++c)
        if (dist[c] < dist[best_i]) best_i = c;
    double second = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < dist.size(); ++c)
        if (c != best_i) second = std::min(second, dist[c]);

    Classification cl;
    cl.label = candidates[best_i].label;
    cl.index = best_i;
    cl.distance = dist[best_i];
    cl.margin = candidates.size() > 1 ? second - dist[best_i] : 0.0;
    cl.ambiguous = candidates.size() > 1 && cl.margin < ambiguity_threshold;
    return cl;
}

} // namespace cavchain
