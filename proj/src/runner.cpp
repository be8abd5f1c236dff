#include "cavchain/runner.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>

#include "cavchain/errors.hpp"
#include "cavchain/numeric.hpp"

namespace cavchain {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

struct TaskOutput {
    std::string task;
    std::string variant;
    std::vector<std::string> meta;            // comment lines (CSV) / strings (JSON)
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string output_path(const Scenario& sc, const std::string& task,
                        const std::string& variant, std::size_t n_tasks,
                        std::size_t n_variants) {
    std::string path = sc.output.path;
    std::string ext;
    const std::size_t dot = path.rfind('.');
    if (dot != std::string::npos && dot > path.rfind('/') + 1) {
        ext = path.substr(dot);
        path = path.substr(0, dot);
    }
    if (n_tasks > 1) path += "_" + task;
    if (n_variants > 1 && !variant.empty()) path += "_" + variant;
    return path + ext;
}

ChainSpec apply_variant(const ChainSpec& base, const Variant& v) {
    ChainSpec spec = base;
    if (!v.lengths.empty()) spec.lengths = v.lengths;
    return spec;
}

// Worst rel_diff between emitted (T, R) and the direct solve over the grid.
double oracle_scan_discrepancy(const ChainSpec& spec, const ScanGrid& grid,
                               const Thresholds& th) {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double probe = grid.at(i);
        const SpectrumRecord rec = evaluate_point(spec, probe, th);
        const FullSolution full = solve_full(spec, probe);
        worst = std::max({worst, rel_diff(rec.T, full.T), rel_diff(rec.R, full.R)});
    }
    return worst;
}

TaskOutput spectrum_task(const Scenario& sc, const ChainSpec& spec,
                         const std::string& task, const std::string& variant,
                         double& worst_oracle) {
    TaskOutput out;
    out.task = task;
    out.variant = variant;
    out.columns = {"detuning", "T",       "R",
                   "T_ind",    "delta_T", "rel_superness",
                   "saturation_flag"};
    const std::vector<SpectrumRecord> rows =
        superness_spectrum(spec, sc.scan, sc.thresholds);
    std::size_t oracle_points = 0;
    for (const SpectrumRecord& r : rows) {
        out.rows.push_back({format_double(r.probe), format_double(r.T),
                            format_double(r.R), format_double(r.T_ind),
                            format_double(r.delta_T),
                            r.relative_defined ? format_double(r.relative) : "nan",
                            r.saturated ? "1" : "0"});
        if (r.used_oracle) ++oracle_points;
    }
    if (oracle_points > 0)
        out.meta.push_back("direct-solver points (opacity gate): " +
                           std::to_string(oracle_points));
    if (sc.oracle_check.enabled)
        worst_oracle = std::max(
            worst_oracle, oracle_scan_discrepancy(spec, sc.scan, sc.thresholds));
    return out;
}

TaskOutput length_scan_task(const Scenario& sc, const ChainSpec& spec,
                            double& worst_oracle) {
    TaskOutput out;
    out.task = "length_scan";
    out.columns = {"N", "peak_detuning", "peak_delta_T", "peak_rel_superness"};
    const SubsystemParams& sub = spec.subsystems.front();
    std::vector<std::size_t> n_range;
    for (std::size_t n = sc.length_scan.n_min; n <= sc.length_scan.n_max; ++n)
        n_range.push_back(n);
    const std::vector<LengthScanPoint> pts = scan_chain_length(
        sub, sc.length_scan.spacing, sc.scan, n_range,
        sc.length_scan.track_window, sc.thresholds);
    for (const LengthScanPoint& p : pts) {
        out.rows.push_back({std::to_string(p.n), format_double(p.peak_probe),
                            format_double(p.peak_delta_T),
                            p.relative_defined ? format_double(p.peak_relative)
                                               : "nan"});
    }
    out.meta.push_back("uniform chains of the first subsystem, spacing " +
                       format_double(sc.length_scan.spacing) +
                       ", peak tracked with window " +
                       format_double(sc.length_scan.track_window));
    if (sc.oracle_check.enabled) {
        for (std::size_t n : n_range) {
            const ChainSpec c = uniform_chain(n, sub, sc.length_scan.spacing);
            worst_oracle = std::max(
                worst_oracle, oracle_scan_discrepancy(c, sc.scan, sc.thresholds));
        }
    }
    return out;
}

TaskOutput reflection_task(const Scenario& sc, const ChainSpec& spec,
                           const std::string& variant, double& worst_oracle) {
    TaskOutput out;
    out.task = "reflection_signatures";
    out.variant = variant;
    const std::vector<ConfigurationSignature> sigs =
        reflection_signatures(spec, sc.scan, 16, sc.thresholds);
    out.columns = {"detuning"};
    for (const ConfigurationSignature& s : sigs) out.columns.push_back("R_" + s.label);
    for (std::size_t i = 0; i < sc.scan.points; ++i) {
        std::vector<std::string> row{format_double(sc.scan.at(i))};
        for (const ConfigurationSignature& s : sigs)
            row.push_back(format_double(s.reflection[i]));
        out.rows.push_back(std::move(row));
    }
    for (const ConfigurationSignature& s : sigs) {
        out.meta.push_back("config " + s.label +
                           ": min R = " + format_double(s.features.min_R) + " at " +
                           format_double(s.features.min_probe) +
                           ", max R = " + format_double(s.features.max_R) +
                           ", R(0) = " + format_double(s.features.R_at_zero));
        const Classification cl = classify_configuration(s.reflection, sigs);
        out.meta.push_back("config " + s.label + ": classified as " + cl.label +
                           ", margin " + format_double(cl.margin) +
                           (cl.ambiguous ? " (ambiguous)" : ""));
    }
    if (sc.oracle_check.enabled) {
        ChainSpec cfg = spec;
        std::vector<std::size_t> sites;
        for (std::size_t k = 0; k < spec.size(); ++k)
            if (spec.subsystems[k].has_atom()) sites.push_back(k);
        for (std::size_t mask = 0; mask < (std::size_t{1} << sites.size()); ++mask) {
            cfg = spec;
            for (std::size_t b = 0; b < sites.size(); ++b)
                if (!(mask & (std::size_t{1} << b)))
                    cfg.subsystems[sites[b]].atom.reset();
            worst_oracle = std::max(
                worst_oracle, oracle_scan_discrepancy(cfg, sc.scan, sc.thresholds));
        }
    }
    return out;
}

TaskOutput pathways_task(const Scenario& sc, const ChainSpec& spec,
                         const std::string& variant, double& worst_oracle) {
    TaskOutput out;
    out.task = "pathways";
    out.variant = variant;
    out.columns = {"descriptor", "bounces", "amp_re", "amp_im", "probability"};
    const PathwaySet set = pathways(spec, sc.pathways.probe,
                                    sc.pathways.max_bounces, sc.pathways.max_count);
    for (const Pathway& p : set.pathways) {
        out.rows.push_back({p.describe(), std::to_string(p.bounces),
                            format_double(p.amplitude.real()),
                            format_double(p.amplitude.imag()),
                            format_double(std::norm(p.amplitude))});
    }
    const SpectrumRecord exact = evaluate_point(spec, sc.pathways.probe, sc.thresholds);
    const ChainResponse resp = response(compose(spec, sc.pathways.probe, sc.thresholds.eps_t));
    out.meta.push_back("probe detuning: " + format_double(sc.pathways.probe));
    out.meta.push_back("truncated sum: " + format_double(set.truncated_sum.real()) +
                       (set.truncated_sum.imag() < 0 ? " - " : " + ") +
                       format_double(std::abs(set.truncated_sum.imag())) + "i");
    out.meta.push_back("exact t_total: " + format_double(resp.t_total.real()) +
                       (resp.t_total.imag() < 0 ? " - " : " + ") +
                       format_double(std::abs(resp.t_total.imag())) + "i");
    out.meta.push_back("truncation error: " +
                       format_double(std::abs(set.truncated_sum - resp.t_total)));
    if (sc.oracle_check.enabled) {
        const FullSolution full = solve_full(spec, sc.pathways.probe);
        worst_oracle = std::max({worst_oracle, rel_diff(exact.T, full.T),
                                 rel_diff(exact.R, full.R)});
    }
    return out;
}

void write_csv(std::ostream& os, const Scenario& sc, const TaskOutput& t) {
    os << "# scenario: " << serialize_scenario(sc) << "\n";
    os << "# task: " << t.task;
    if (!t.variant.empty()) os << " variant: " << t.variant;
    os << "\n";
    for (const std::string& m : t.meta) os << "# " << m << "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? "," : "") << t.columns[c];
    os << "\n";
    for (const std::vector<std::string>& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << row[c];
        os << "\n";
    }
}

void write_json(std::ostream& os, const Scenario& sc, const TaskOutput& t) {
    json j;
    j["scenario"] = json::parse(serialize_scenario(sc));
    j["task"] = t.task;
    if (!t.variant.empty()) j["variant"] = t.variant;
    j["metadata"] = t.meta;
    j["columns"] = t.columns;
    json rows = json::array();
    for (const std::vector<std::string>& row : t.rows) rows.push_back(row);
    j["rows"] = rows;
    os << j.dump(2) << "\n";
}

} // namespace

RunResult run(const Scenario& sc, std::ostream& log) {
    RunResult result;
    std::vector<Variant> variants = sc.variants;
    if (variants.empty()) variants.push_back({"", sc.chain.lengths});

    std::vector<std::pair<std::string, TaskOutput>> outputs;
    try {
        for (const std::string& task : sc.tasks) {
            // length_scan builds its own chains; variants do not apply to it
            if (task == "length_scan") {
                TaskOutput t = length_scan_task(sc, sc.chain,
                                                result.worst_oracle_discrepancy);
                outputs.emplace_back(
                    output_path(sc, task, "", sc.tasks.size(), 1), std::move(t));
                continue;
            }
            for (const Variant& v : variants) {
                const ChainSpec spec = apply_variant(sc.chain, v);
                TaskOutput t;
                if (task == "spectrum" || task == "superness") {
                    t = spectrum_task(sc, spec, task, v.name,
                                      result.worst_oracle_discrepancy);
                } else if (task == "reflection_signatures") {
                    t = reflection_task(sc, spec, v.name,
                                        result.worst_oracle_discrepancy);
                } else {
                    t = pathways_task(sc, spec, v.name,
                                      result.worst_oracle_discrepancy);
                }
                outputs.emplace_back(output_path(sc, task, v.name, sc.tasks.size(),
                                                 variants.size()),
                                     std::move(t));
            }
        }
    } catch (const std::exception& e) {
        result.exit_code = kExitValidation;
        result.message = e.what();
        log << "error: " << e.what() << "\n";
        return result;
    }

    for (const auto& [path, t] : outputs) {
        std::ofstream os(path, std::ios::binary);
        if (!os) {
            result.exit_code = kExitIo;
            result.message = "cannot open " + path;
            log << "error: cannot open " << path << "\n";
            return result;
        }
        if (sc.output.format == OutputFormat::csv)
            write_csv(os, sc, t);
        else
            write_json(os, sc, t);
        if (!os.good()) {
            result.exit_code = kExitIo;
            result.message = "write failed: " + path;
            log << "error: write failed: " << path << "\n";
            return result;
        }
        result.files_written.push_back(path);
        log << t.task << (t.variant.empty() ? "" : " [" + t.variant + "]")
            << " -> " << path << " (" << t.rows.size() << " rows)\n";
    }

    if (sc.oracle_check.enabled) {
        log << "oracle check: worst discrepancy "
            << format_double(result.worst_oracle_discrepancy) << " (tolerance "
            << format_double(sc.oracle_check.tolerance) << ")\n";
        if (result.worst_oracle_discrepancy > sc.oracle_check.tolerance) {
            result.exit_code = kExitOracleMismatch;
            result.message = "oracle mismatch";
            return result;
        }
    }
    return result;
}

} // namespace cavchain
