#include "cavchain/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace cavchain {

using nlohmann::json;

namespace {

const std::set<std::string> kTaskNames = {
    "spectrum", "superness", "length_scan", "reflection_signatures", "pathways"};

double num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw scenario_parse_error(std::string(key) + " must be a number");
    return j.at(key).get<double>();
}

SubsystemParams parse_subsystem(const json& j, std::size_t index) {
    const std::string where = "chain.subsystems[" + std::to_string(index) + "]";
    if (!j.is_object())
        throw scenario_parse_error(where + " must be an object");
    if (!j.contains("cavity"))
        throw scenario_parse_error(where + ".cavity is required");
    SubsystemParams sub;
    const json& c = j.at("cavity");
    sub.cavity.delta0 = num(c, "delta0", 0.0);
    sub.cavity.h = num(c, "h", 0.0);
    sub.cavity.kappa_ex = num(c, "kappa_ex", 0.0);
    sub.cavity.kappa_i = num(c, "kappa_i", 0.0);
    if (j.contains("atom") && !j.at("atom").is_null()) {
        const json& a = j.at("atom");
        AtomParams at;
        at.Delta0 = num(a, "Delta0", 0.0);
        at.gamma = num(a, "gamma", 1.0);
        at.g_A = num(a, "g_A", 0.0);
        at.g_B = num(a, "g_B", 0.0);
        sub.atom = at;
    }
    return sub;
}

json subsystem_to_json(const SubsystemParams& sub) {
    json j;
    j["cavity"] = {{"delta0", sub.cavity.delta0},
                   {"h", sub.cavity.h},
                   {"kappa_ex", sub.cavity.kappa_ex},
                   {"kappa_i", sub.cavity.kappa_i}};
    if (sub.atom) {
        j["atom"] = {{"Delta0", sub.atom->Delta0},
                     {"gamma", sub.atom->gamma},
                     {"g_A", sub.atom->g_A},
                     {"g_B", sub.atom->g_B}};
    } else {
        j["atom"] = nullptr;
    }
    return j;
}

} // namespace

namespace {
Scenario parse_scenario_impl(const json& j);
} // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw scenario_parse_error(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw scenario_parse_error("scenario must be a JSON object");
    try {
        return parse_scenario_impl(j);
    } catch (const json::exception& e) {
        throw scenario_parse_error(std::string("malformed scenario: ") + e.what());
    }
}

namespace {

Scenario parse_scenario_impl(const json& j) {
    Scenario sc;
    if (!j.contains("chain") || !j.at("chain").is_object())
        throw scenario_parse_error("chain is required");
    const json& jc = j.at("chain");
    if (!jc.contains("subsystems") || !jc.at("subsystems").is_array())
        throw scenario_parse_error("chain.subsystems must be an array");
    std::size_t idx = 0;
    for (const json& js : jc.at("subsystems"))
        sc.chain.subsystems.push_back(parse_subsystem(js, idx++));
    if (jc.contains("lengths")) {
        for (const json& v : jc.at("lengths")) {
            if (!v.is_number())
                throw scenario_parse_error("chain.lengths must contain numbers");
            sc.chain.lengths.push_back(v.get<double>());
        }
    }
    if (jc.contains("drive") && jc.at("drive").get<std::string>() != "left")
        throw scenario_parse_error("chain.drive: only \"left\" is supported");

    if (!j.contains("scan") || !j.at("scan").is_object())
        throw scenario_parse_error("scan is required");
    const json& jg = j.at("scan");
    sc.scan.start = num(jg, "start", 0.0);
    sc.scan.stop = num(jg, "stop", 0.0);
    sc.scan.points = jg.contains("points")
                         ? jg.at("points").get<std::size_t>()
                         : std::size_t{2};

    if (!j.contains("tasks") || !j.at("tasks").is_array() || j.at("tasks").empty())
        throw scenario_parse_error("tasks must be a non-empty array");
    for (const json& t : j.at("tasks")) {
        const std::string name = t.get<std::string>();
        if (!kTaskNames.count(name))
            throw scenario_parse_error("unknown task \"" + name + "\"");
        sc.tasks.push_back(name);
    }

    if (j.contains("variants")) {
        for (const json& jv : j.at("variants")) {
            Variant v;
            v.name = jv.at("name").get<std::string>();
            for (const json& L : jv.at("lengths")) v.lengths.push_back(L.get<double>());
            sc.variants.push_back(std::move(v));
        }
    }

    if (j.contains("oracle_check")) {
        const json& jo = j.at("oracle_check");
        sc.oracle_check.enabled = jo.value("enabled", false);
        sc.oracle_check.tolerance = num(jo, "tolerance", 1e-9);
    }
    if (j.contains("output")) {
        const json& jo = j.at("output");
        const std::string fmt = jo.value("format", "csv");
        if (fmt == "csv") sc.output.format = OutputFormat::csv;
        else if (fmt == "json") sc.output.format = OutputFormat::json;
        else throw scenario_parse_error("output.format must be csv or json");
        sc.output.path = jo.value("path", std::string());
    }
    if (sc.output.path.empty())
        sc.output.path = sc.output.format == OutputFormat::csv ? "out.csv" : "out.json";

    if (j.contains("thresholds")) {
        const json& jt = j.at("thresholds");
        sc.thresholds.saturation = num(jt, "saturation", kSaturationDefault);
        sc.thresholds.eps_T = num(jt, "eps_T", kRelSupernessFloor);
        sc.thresholds.eps_t = num(jt, "eps_t", kDefaultOpacityGate);
    }
    if (j.contains("length_scan")) {
        const json& jl = j.at("length_scan");
        sc.length_scan.n_min = jl.value("n_min", std::size_t{2});
        sc.length_scan.n_max = jl.value("n_max", std::size_t{20});
        sc.length_scan.spacing = num(jl, "spacing", 100.2);
        sc.length_scan.track_window = num(jl, "track_window", 6.0);
    }
    if (j.contains("pathways")) {
        const json& jp = j.at("pathways");
        sc.pathways.probe = num(jp, "probe", 0.0);
        sc.pathways.max_bounces = jp.value("max_bounces", std::size_t{30});
        sc.pathways.max_count = jp.value("max_count", std::size_t{1000000});
    }
    if (j.contains("name")) sc.name = j.at("name").get<std::string>();

    // model invariants
    ValidationReport rep = validate(sc.chain);
    const ValidationReport grid_rep = validate(sc.scan);
    rep.violations.insert(rep.violations.end(), grid_rep.violations.begin(),
                          grid_rep.violations.end());
    for (std::size_t v = 0; v < sc.variants.size(); ++v) {
        if (sc.variants[v].lengths.size() != sc.chain.subsystems.size() - 1)
            rep.violations.push_back(
                {"variants[" + std::to_string(v) + "].lengths",
                 "lengths.count != N-1"});
        for (double L : sc.variants[v].lengths)
            if (!(L > 0.0))
                rep.violations.push_back(
                    {"variants[" + std::to_string(v) + "].lengths", "must be > 0"});
    }
    if (sc.length_scan.n_min < 2)
        rep.violations.push_back({"length_scan.n_min", "must be >= 2"});
    if (sc.length_scan.n_max < sc.length_scan.n_min)
        rep.violations.push_back({"length_scan.n_max", "must be >= n_min"});
    if (sc.pathways.max_bounces % 2 != 0)
        rep.violations.push_back({"pathways.max_bounces", "must be even"});
    if (!rep.ok())
        throw scenario_validation_error(rep);
    return sc;
}

} // namespace

std::string serialize_scenario(const Scenario& sc) {
    json j;
    json subs = json::array();
    for (const SubsystemParams& s : sc.chain.subsystems)
        subs.push_back(subsystem_to_json(s));
    j["chain"] = {{"subsystems", subs},
                  {"lengths", sc.chain.lengths},
                  {"drive", "left"}};
    j["scan"] = {{"start", sc.scan.start},
                 {"stop", sc.scan.stop},
                 {"points", sc.scan.points}};
    j["tasks"] = sc.tasks;
    if (!sc.variants.empty()) {
        json vs = json::array();
        for (const Variant& v : sc.variants)
            vs.push_back({{"name", v.name}, {"lengths", v.lengths}});
        j["variants"] = vs;
    }
    j["oracle_check"] = {{"enabled", sc.oracle_check.enabled},
                         {"tolerance", sc.oracle_check.tolerance}};
    j["output"] = {{"format", sc.output.format == OutputFormat::csv ? "csv" : "json"},
                   {"path", sc.output.path}};
    j["thresholds"] = {{"saturation", sc.thresholds.saturation},
                       {"eps_T", sc.thresholds.eps_T},
                       {"eps_t", sc.thresholds.eps_t}};
    if (std::find(sc.tasks.begin(), sc.tasks.end(), "length_scan") != sc.tasks.end())
        j["length_scan"] = {{"n_min", sc.length_scan.n_min},
                            {"n_max", sc.length_scan.n_max},
                            {"spacing", sc.length_scan.spacing},
                            {"track_window", sc.length_scan.track_window}};
    if (std::find(sc.tasks.begin(), sc.tasks.end(), "pathways") != sc.tasks.end())
        j["pathways"] = {{"probe", sc.pathways.probe},
                         {"max_bounces", sc.pathways.max_bounces},
                         {"max_count", sc.pathways.max_count}};
    if (!sc.name.empty()) j["name"] = sc.name;
    return j.dump();
}

PresetCalibration spectra_calibration() {
    PresetCalibration cal;
    cal.kappa_ex = 53.0;
    cal.kappa_i = 13.0;
    cal.cavity_offset = 17.0;
    return cal;
}

PresetCalibration length_scan_calibration() {
    PresetCalibration cal;
    cal.kappa_ex = 50.0;
    cal.kappa_i = 18.0;
    cal.cavity_offset = 0.0;
    return cal;
}

SubsystemParams calibrated_subsystem(const PresetCalibration& cal, bool with_atom) {
    SubsystemParams sub;
    sub.cavity.delta0 = cal.cavity_offset;
    sub.cavity.h = cal.h;
    sub.cavity.kappa_ex = cal.kappa_ex;
    sub.cavity.kappa_i = cal.kappa_i;
    if (with_atom) {
        AtomParams at;
        at.Delta0 = 0.0;
        at.gamma = cal.gamma;
        at.g_A = 0.0;
        at.g_B = cal.g_B;
        sub.atom = at;
    }
    return sub;
}

std::vector<PresetInfo> presets() {
    return {
        {"fig2", "N=2 superness spectra for four intercavity distances, "
                 "L_tot=200.3"},
        {"fig3", "uniform-chain length scan N=2..20 at spacing 100.2: tracked "
                 "supermode peak and its relative size"},
        {"fig4", "N=2 reflection spectra for all atom on/off configurations, "
                 "L_1=100.3"},
        {"fig5", "N=3 superness spectra, central cavity moved across four "
                 "positions, L_tot=200.3"},
    };
}

namespace {

Scenario base_scenario() {
    Scenario sc;
    sc.scan = {-100.0, 150.0, 2501};
    sc.oracle_check.enabled = false;
    sc.oracle_check.tolerance = 1e-9;
    return sc;
}

std::string variant_name(double L1) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "L1_%.2f", L1);
    return buf;
}

} // namespace

Scenario preset(const std::string& name) {
    const SubsystemParams atom_sub = calibrated_subsystem(spectra_calibration());
    Scenario sc = base_scenario();
    sc.name = name;
    if (name == "fig2") {
        sc.chain.subsystems = {atom_sub, atom_sub};
        sc.chain.lengths = {100.0};
        sc.tasks = {"superness"};
        for (double L1 : {100.0, 100.15, 100.25, 100.35})
            sc.variants.push_back({variant_name(L1), {L1}});
        sc.output.path = "fig2.csv";
    } else if (name == "fig3") {
        const SubsystemParams scan_sub =
            calibrated_subsystem(length_scan_calibration());
        sc.chain.subsystems = {scan_sub, scan_sub};
        sc.chain.lengths = {100.2};
        sc.tasks = {"length_scan"};
        sc.length_scan = {2, 20, 100.2, 6.0};
        sc.output.path = "fig3.csv";
    } else if (name == "fig4") {
        sc.chain.subsystems = {atom_sub, atom_sub};
        sc.chain.lengths = {100.3};
        sc.tasks = {"reflection_signatures"};
        sc.output.path = "fig4.csv";
    } else if (name == "fig5") {
        sc.chain.subsystems = {atom_sub, atom_sub, atom_sub};
        sc.chain.lengths = {100.0, 100.3};
        sc.tasks = {"superness"};
        for (double L1 : {100.0, 100.05, 100.1, 100.15})
            sc.variants.push_back({variant_name(L1), {L1, 200.3 - L1}});
        sc.output.path = "fig5.csv";
    } else {
        throw scenario_parse_error("unknown preset \"" + name + "\"");
    }
    return sc;
}

} // namespace cavchain
