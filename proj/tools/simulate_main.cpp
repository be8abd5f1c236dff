#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cavchain/runner.hpp"
#include "cavchain/scenario.hpp"

namespace {

int read_file(const std::string& path, std::string& out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        std::cerr << "error: cannot read " << path << "\n";
        return cavchain::kExitIo;
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    out = ss.str();
    return cavchain::kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state spectra of fiber-coupled atom-microcavity chains"};
    app.require_subcommand(0, 1);

    std::string scenario_file;
    std::string preset_name;
    std::string out_path;
    std::string format;
    bool oracle_check = false;
    double tolerance = -1.0;

    app.add_option("scenario", scenario_file, "scenario file (JSON)");
    app.add_option("--preset", preset_name, "run a bundled scenario instead");
    app.add_option("--out", out_path, "override the output path");
    app.add_option("--format", format, "override the output format (csv|json)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--oracle-check", oracle_check,
                 "re-derive every emitted point from the full-system solver");
    app.add_option("--tolerance", tolerance, "oracle check tolerance");

    std::string validate_file;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "parse and validate a scenario file");
    validate_cmd->add_option("scenario", validate_file, "scenario file (JSON)")
        ->required();

    CLI::App* presets_cmd =
        app.add_subcommand("presets", "list the bundled scenarios");

    CLI11_PARSE(app, argc, argv);

    if (*presets_cmd) {
        for (const cavchain::PresetInfo& p : cavchain::presets())
            std::cout << p.name << "  " << p.description << "\n";
        return cavchain::kExitOk;
    }

    if (*validate_cmd) {
        std::string text;
        if (int rc = read_file(validate_file, text)) return rc;
        try {
            cavchain::parse_scenario(text);
        } catch (const cavchain::scenario_validation_error& e) {
            std::cerr << "invalid scenario:\n";
            for (const cavchain::Violation& v : e.report().violations)
                std::cerr << "  " << v.path << ": " << v.message << "\n";
            return cavchain::kExitValidation;
        } catch (const std::exception& e) {
            std::cerr << "invalid scenario: " << e.what() << "\n";
            return cavchain::kExitValidation;
        }
        std::cout << "ok\n";
        return cavchain::kExitOk;
    }

    if (scenario_file.empty() == preset_name.empty()) {
        std::cerr << "error: pass exactly one of a scenario file or --preset\n";
        return cavchain::kExitValidation;
    }

    cavchain::Scenario sc;
    try {
        if (!preset_name.empty()) {
            sc = cavchain::preset(preset_name);
        } else {
            std::string text;
            if (int rc = read_file(scenario_file, text)) return rc;
            sc = cavchain::parse_scenario(text);
            if (sc.name.empty()) sc.name = scenario_file;
        }
    } catch (const cavchain::scenario_validation_error& e) {
        std::cerr << "invalid scenario:\n";
        for (const cavchain::Violation& v : e.report().violations)
            std::cerr << "  " << v.path << ": " << v.message << "\n";
        return cavchain::kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cavchain::kExitValidation;
    }

    if (!out_path.empty()) sc.output.path = out_path;
    if (!format.empty())
        sc.output.format = format == "csv" ? cavchain::OutputFormat::csv
                                           : cavchain::OutputFormat::json;
    if (oracle_check) sc.oracle_check.enabled = true;
    if (tolerance > 0.0) sc.oracle_check.tolerance = tolerance;

    const cavchain::RunResult result = cavchain::run(sc, std::cout);
    return result.exit_code;
}
