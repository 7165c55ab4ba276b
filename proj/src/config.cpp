#include "cryospike/config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace cryospike {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

void require_keys(const Json& obj, const std::string& section,
                  std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) bad("section \"" + section + "\" must be a JSON object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) known = known || item.key() == key;
        if (!known) bad("unknown key \"" + item.key() + "\" in section \"" + section + "\"");
    }
}

/// Read an optional suffixed number; absent keys keep the fallback. The
/// divisor is an exact power of ten, so the quotient is correctly rounded
/// and matches what a plain SI literal would parse to.
double get_num(const Json& obj, const std::string& section, const char* key, double divisor,
               double fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_number()) bad("key \"" + std::string(key) + "\" in section \"" + section +
                            "\" must be a number");
    return v.get<double>() / divisor;
}

std::int64_t get_int(const Json& obj, const std::string& section, const char* key,
                     std::int64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_number_integer()) bad("key \"" + std::string(key) + "\" in section \"" + section +
                                    "\" must be an integer");
    return v.get<std::int64_t>();
}

bool get_bool(const Json& obj, const std::string& section, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_boolean()) bad("key \"" + std::string(key) + "\" in section \"" + section +
                             "\" must be a boolean");
    return v.get<bool>();
}

std::string get_str(const Json& obj, const std::string& section, const char* key,
                    const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_string()) bad("key \"" + std::string(key) + "\" in section \"" + section +
                            "\" must be a string");
    return v.get<std::string>();
}

std::vector<double> get_num_array(const Json& obj, const std::string& section, const char* key,
                                  double divisor, const std::vector<double>& fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_array()) bad("key \"" + std::string(key) + "\" in section \"" + section +
                           "\" must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const Json& x : v) {
        if (!x.is_number()) bad("key \"" + std::string(key) + "\" in section \"" + section +
                                "\" must be an array of numbers");
        out.push_back(x.get<double>() / divisor);
    }
    return out;
}

void read_snw(const Json& obj, const std::string& section, SnwParams& p) {
    require_keys(obj, section,
                 {"critical_current_uA", "retrapping_current_uA", "hotspot_resistance_ohm",
                  "inductance_nH"});
    p.critical_current = get_num(obj, section, "critical_current_uA", 1e6, p.critical_current);
    p.retrapping_current =
        get_num(obj, section, "retrapping_current_uA", 1e6, p.retrapping_current);
    p.hotspot_resistance =
        get_num(obj, section, "hotspot_resistance_ohm", 1.0, p.hotspot_resistance);
    p.inductance = get_num(obj, section, "inductance_nH", 1e9, p.inductance);
}

void read_sm(const Json& obj, const std::string& section, SmParams& p) {
    require_keys(obj, section, {"r_lrs_mohm", "r_hrs_mohm", "v_set_uV"});
    p.r_lrs = get_num(obj, section, "r_lrs_mohm", 1e3, p.r_lrs);
    p.r_hrs = get_num(obj, section, "r_hrs_mohm", 1e3, p.r_hrs);
    p.v_set = get_num(obj, section, "v_set_uV", 1e6, p.v_set);
}

/// Suffix of the sweep "values" key for each sweepable parameter.
struct ParamUnit {
    const char* parameter;
    const char* values_key;
    double divisor;
};

const ParamUnit kParamUnits[] = {
    {"bias_current", "values_uA", 1e6},
    {"input_current", "values_uA", 1e6},
    {"critical_current", "values_uA", 1e6},
    {"retrapping_current", "values_uA", 1e6},
    {"nanowire_inductance", "values_nH", 1e9},
    {"orientation_deg", "values_deg", 1.0},
    {"coupling_inductance", "values_nH", 1e9},
};

const ParamUnit& param_unit(const std::string& parameter) {
    for (const ParamUnit& u : kParamUnits)
        if (parameter == u.parameter) return u;
    bad("unknown sweep parameter \"" + parameter + "\"");
}

std::vector<StateCombo> get_combos(const Json& obj, const std::string& section,
                                   const std::vector<StateCombo>& fallback) {
    if (!obj.contains("combos")) return fallback;
    const Json& v = obj.at("combos");
    if (!v.is_array() || v.empty()) bad("key \"combos\" in section \"" + section +
                                        "\" must be a nonempty array of state labels");
    std::vector<StateCombo> out;
    for (const Json& x : v) {
        if (!x.is_string()) bad("key \"combos\" in section \"" + section +
                                "\" must be a nonempty array of state labels");
        out.push_back(parse_combo(x.get<std::string>()));
    }
    return out;
}

void read_sweep(const Json& obj, RunConfig& rc) {
    const std::string section = "experiment.sweep";
    rc.has_sweep = true;
    rc.sweep.base = rc.neuron;
    rc.sweep.setup = rc.setup;
    rc.sweep.tol = rc.tol;
    const std::string parameter = get_str(obj, section, "parameter", "");
    if (parameter.empty()) bad("section \"" + section + "\" needs a \"parameter\" key");
    const ParamUnit& unit = param_unit(parameter);
    require_keys(obj, section, {"parameter", unit.values_key, "combos", "t_end_us"});
    rc.sweep.parameter = parameter;
    rc.sweep.values = get_num_array(obj, section, unit.values_key, unit.divisor, {});
    if (rc.sweep.values.empty())
        bad("section \"" + section + "\" needs a nonempty \"" + unit.values_key + "\" array");
    rc.sweep.combos = get_combos(obj, section, rc.sweep.combos);
    rc.sweep.t_end = get_num(obj, section, "t_end_us", 1e6, rc.sweep.t_end);
}

void read_mc(const Json& obj, RunConfig& rc) {
    const std::string s = "experiment.montecarlo";
    require_keys(obj, s,
                 {"seed", "samples", "bias_points_uA", "input_current_uA", "t_end_us",
                  "sigma_critical_current_uA", "sigma_retrapping_current_uA",
                  "sigma_nanowire_inductance_nH", "sigma_r_hrs_mohm", "sigma_r_lrs_mohm",
                  "per_device", "values_are_3sigma", "redraw_cap"});
    rc.has_mc = true;
    rc.mc.base = rc.neuron;
    if (obj.contains("seed")) {
        const Json& v = obj.at("seed");
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
            bad("key \"seed\" in section \"" + s + "\" must be a nonnegative integer");
        rc.mc.seed = v.get<std::uint64_t>();
    }
    rc.mc.samples = static_cast<int>(get_int(obj, s, "samples", rc.mc.samples));
    rc.mc.bias_points = get_num_array(obj, s, "bias_points_uA", 1e6, rc.mc.bias_points);
    rc.mc.input_current = get_num(obj, s, "input_current_uA", 1e6, rc.mc.input_current);
    rc.mc.t_end = get_num(obj, s, "t_end_us", 1e6, rc.mc.t_end);
    rc.mc.sigma_critical_current =
        get_num(obj, s, "sigma_critical_current_uA", 1e6, rc.mc.sigma_critical_current);
    rc.mc.sigma_retrapping_current =
        get_num(obj, s, "sigma_retrapping_current_uA", 1e6, rc.mc.sigma_retrapping_current);
    rc.mc.sigma_nanowire_inductance =
        get_num(obj, s, "sigma_nanowire_inductance_nH", 1e9, rc.mc.sigma_nanowire_inductance);
    rc.mc.sigma_r_hrs = get_num(obj, s, "sigma_r_hrs_mohm", 1e3, rc.mc.sigma_r_hrs);
    rc.mc.sigma_r_lrs = get_num(obj, s, "sigma_r_lrs_mohm", 1e3, rc.mc.sigma_r_lrs);
    rc.mc.per_device = get_bool(obj, s, "per_device", rc.mc.per_device);
    rc.mc.values_are_3sigma = get_bool(obj, s, "values_are_3sigma", rc.mc.values_are_3sigma);
    rc.mc.redraw_cap = static_cast<int>(get_int(obj, s, "redraw_cap", rc.mc.redraw_cap));
}

/// Human-unit value that parses back to exactly the given SI double: try the
/// short decimal first, keep full precision only when the snap loses bits.
double to_human(double si, double divisor) {
    const double h = si * divisor;
    char buf[40];
    for (const char* fmt : {"%.12g", "%.15g"}) {
        std::snprintf(buf, sizeof buf, fmt, h);
        const double snapped = std::strtod(buf, nullptr);
        if (snapped / divisor == si) return snapped;
    }
    return h;
}

Json snw_json(const SnwParams& p) {
    Json j;
    j["critical_current_uA"] = to_human(p.critical_current, 1e6);
    j["retrapping_current_uA"] = to_human(p.retrapping_current, 1e6);
    j["hotspot_resistance_ohm"] = to_human(p.hotspot_resistance, 1.0);
    j["inductance_nH"] = to_human(p.inductance, 1e9);
    return j;
}

Json sm_json(const SmParams& p) {
    Json j;
    j["r_lrs_mohm"] = to_human(p.r_lrs, 1e3);
    j["r_hrs_mohm"] = to_human(p.r_hrs, 1e3);
    j["v_set_uV"] = to_human(p.v_set, 1e6);
    return j;
}

Json combo_json(const std::vector<StateCombo>& combos) {
    Json j = Json::array();
    for (const StateCombo& c : combos) j.push_back(combo_label(c));
    return j;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const Json::parse_error& e) {
        bad(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) bad("config root must be a JSON object");
    require_keys(root, "config",
                 {"snw_ctrl", "snw_main", "sm1", "sm2", "htron", "circuit", "drive",
                  "tolerance", "experiment"});

    RunConfig rc;
    if (root.contains("snw_ctrl")) read_snw(root["snw_ctrl"], "snw_ctrl", rc.neuron.control_nanowire);
    if (root.contains("snw_main")) read_snw(root["snw_main"], "snw_main", rc.neuron.main_nanowire);
    if (root.contains("sm1")) read_sm(root["sm1"], "sm1", rc.neuron.control_memristor);
    if (root.contains("sm2")) read_sm(root["sm2"], "sm2", rc.neuron.main_memristor);

    if (root.contains("htron")) {
        const Json& h = root["htron"];
        require_keys(h, "htron",
                     {"gate_threshold_uA", "channel_resistance_ohm", "parallel_resistance_ohm"});
        auto& p = rc.neuron.htron;
        p.gate_threshold = get_num(h, "htron", "gate_threshold_uA", 1e6, p.gate_threshold);
        p.channel_resistance =
            get_num(h, "htron", "channel_resistance_ohm", 1.0, p.channel_resistance);
        p.parallel_resistance =
            get_num(h, "htron", "parallel_resistance_ohm", 1.0, p.parallel_resistance);
    }

    if (root.contains("circuit")) {
        const Json& c = root["circuit"];
        require_keys(c, "circuit",
                     {"coupling_inductance_nH", "coupling_resistance_mohm", "orientation_deg"});
        rc.neuron.coupling_inductance =
            get_num(c, "circuit", "coupling_inductance_nH", 1e9, rc.neuron.coupling_inductance);
        rc.neuron.coupling_resistance = get_num(c, "circuit", "coupling_resistance_mohm", 1e3,
                                                rc.neuron.coupling_resistance);
        if (c.contains("orientation_deg")) {
            rc.has_orientation = true;
            rc.orientation_deg = get_num(c, "circuit", "orientation_deg", 1.0, 0.0);
            rc.neuron.set_orientation(rc.orientation_deg);
        }
    }

    if (root.contains("drive")) {
        const Json& d = root["drive"];
        require_keys(d, "drive",
                     {"i_bias_uA", "i_in_uA", "i_gate_uA", "t_end_us", "sm1_state", "sm2_state"});
        rc.setup.bias_current = get_num(d, "drive", "i_bias_uA", 1e6, rc.setup.bias_current);
        rc.setup.input_current = get_num(d, "drive", "i_in_uA", 1e6, rc.setup.input_current);
        if (get_num(d, "drive", "i_gate_uA", 1e6, 0.0) != 0.0)
            bad("a constant gate drive is not supported; the program command owns the gate");
        rc.t_end = get_num(d, "drive", "t_end_us", 1e6, rc.t_end);
        rc.setup.control_state =
            parse_sm_state(get_str(d, "drive", "sm1_state", sm_state_name(rc.setup.control_state)));
        rc.setup.main_state =
            parse_sm_state(get_str(d, "drive", "sm2_state", sm_state_name(rc.setup.main_state)));
    }

    if (root.contains("tolerance")) {
        const Json& t = root["tolerance"];
        require_keys(t, "tolerance",
                     {"sample_interval_ns", "event_time_fs", "min_dwell_fs", "guard_rel",
                      "event_cap", "max_bisection", "chatter_limit"});
        rc.tol.sample_interval =
            get_num(t, "tolerance", "sample_interval_ns", 1e9, rc.tol.sample_interval);
        rc.tol.event_time = get_num(t, "tolerance", "event_time_fs", 1e15, rc.tol.event_time);
        rc.tol.min_dwell = get_num(t, "tolerance", "min_dwell_fs", 1e15, rc.tol.min_dwell);
        rc.tol.guard_rel = get_num(t, "tolerance", "guard_rel", 1.0, rc.tol.guard_rel);
        const std::int64_t cap = get_int(t, "tolerance", "event_cap",
                                         static_cast<std::int64_t>(rc.tol.event_cap));
        if (cap < 1) bad("key \"event_cap\" in section \"tolerance\" must be positive");
        rc.tol.event_cap = static_cast<std::uint64_t>(cap);
        rc.tol.max_bisection =
            static_cast<int>(get_int(t, "tolerance", "max_bisection", rc.tol.max_bisection));
        rc.tol.chatter_limit =
            static_cast<int>(get_int(t, "tolerance", "chatter_limit", rc.tol.chatter_limit));
    }

    if (root.contains("experiment")) {
        const Json& e = root["experiment"];
        require_keys(e, "experiment", {"sweep", "montecarlo"});
        if (e.contains("sweep")) read_sweep(e["sweep"], rc);
        if (e.contains("montecarlo")) read_mc(e["montecarlo"], rc);
    }
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad("cannot open config file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string write_config(const RunConfig& rc) {
    Json root;
    root["snw_ctrl"] = snw_json(rc.neuron.control_nanowire);
    root["snw_main"] = snw_json(rc.neuron.main_nanowire);
    root["sm1"] = sm_json(rc.neuron.control_memristor);
    root["sm2"] = sm_json(rc.neuron.main_memristor);
    {
        Json h;
        h["gate_threshold_uA"] = to_human(rc.neuron.htron.gate_threshold, 1e6);
        h["channel_resistance_ohm"] = to_human(rc.neuron.htron.channel_resistance, 1.0);
        h["parallel_resistance_ohm"] = to_human(rc.neuron.htron.parallel_resistance, 1.0);
        root["htron"] = h;
    }
    {
        Json c;
        c["coupling_inductance_nH"] = to_human(rc.neuron.coupling_inductance, 1e9);
        c["coupling_resistance_mohm"] = to_human(rc.neuron.coupling_resistance, 1e3);
        if (rc.has_orientation) c["orientation_deg"] = to_human(rc.orientation_deg, 1.0);
        root["circuit"] = c;
    }
    {
        Json d;
        d["i_bias_uA"] = to_human(rc.setup.bias_current, 1e6);
        d["i_in_uA"] = to_human(rc.setup.input_current, 1e6);
        d["i_gate_uA"] = 0.0;
        d["t_end_us"] = to_human(rc.t_end, 1e6);
        d["sm1_state"] = sm_state_name(rc.setup.control_state);
        d["sm2_state"] = sm_state_name(rc.setup.main_state);
        root["drive"] = d;
    }
    {
        Json t;
        t["sample_interval_ns"] = to_human(rc.tol.sample_interval, 1e9);
        t["event_time_fs"] = to_human(rc.tol.event_time, 1e15);
        t["min_dwell_fs"] = to_human(rc.tol.min_dwell, 1e15);
        t["guard_rel"] = to_human(rc.tol.guard_rel, 1.0);
        t["event_cap"] = rc.tol.event_cap;
        t["max_bisection"] = rc.tol.max_bisection;
        t["chatter_limit"] = rc.tol.chatter_limit;
        root["tolerance"] = t;
    }
    if (rc.has_sweep || rc.has_mc) {
        Json e;
        if (rc.has_sweep) {
            const ParamUnit& unit = param_unit(rc.sweep.parameter);
            Json s;
            s["parameter"] = rc.sweep.parameter;
            Json values = Json::array();
            for (double v : rc.sweep.values) values.push_back(to_human(v, unit.divisor));
            s[unit.values_key] = values;
            s["combos"] = combo_json(rc.sweep.combos);
            s["t_end_us"] = to_human(rc.sweep.t_end, 1e6);
            e["sweep"] = s;
        }
        if (rc.has_mc) {
            Json m;
            m["seed"] = rc.mc.seed;
            m["samples"] = rc.mc.samples;
            Json pts = Json::array();
            for (double b : rc.mc.bias_points) pts.push_back(to_human(b, 1e6));
            m["bias_points_uA"] = pts;
            m["input_current_uA"] = to_human(rc.mc.input_current, 1e6);
            m["t_end_us"] = to_human(rc.mc.t_end, 1e6);
            m["sigma_critical_current_uA"] = to_human(rc.mc.sigma_critical_current, 1e6);
            m["sigma_retrapping_current_uA"] = to_human(rc.mc.sigma_retrapping_current, 1e6);
            m["sigma_nanowire_inductance_nH"] = to_human(rc.mc.sigma_nanowire_inductance, 1e9);
            m["sigma_r_hrs_mohm"] = to_human(rc.mc.sigma_r_hrs, 1e3);
            m["sigma_r_lrs_mohm"] = to_human(rc.mc.sigma_r_lrs, 1e3);
            m["per_device"] = rc.mc.per_device;
            m["values_are_3sigma"] = rc.mc.values_are_3sigma;
            m["redraw_cap"] = rc.mc.redraw_cap;
            e["montecarlo"] = m;
        }
        root["experiment"] = e;
    }
    return root.dump(2) + "\n";
}

SmState parse_sm_state(const std::string& name) {
    if (name == "HRS") return SmState::HRS;
    if (name == "LRS") return SmState::LRS;
    bad("memristor state must be \"HRS\" or \"LRS\", got \"" + name + "\"");
}

std::string sm_state_name(SmState state) { return state == SmState::HRS ? "HRS" : "LRS"; }

StateCombo parse_combo(const std::string& label) {
    const auto dash = label.find('-');
    if (dash == std::string::npos || label.find('-', dash + 1) != std::string::npos)
        bad("state pair must look like \"HRS-LRS\", got \"" + label + "\"");
    return {parse_sm_state(label.substr(0, dash)), parse_sm_state(label.substr(dash + 1))};
}

} // namespace cryospike
