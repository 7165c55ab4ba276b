#include "cryospike/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cryospike/config.hpp"
#include "cryospike/svg.hpp"

namespace cryospike {
namespace {

using Json = nlohmann::ordered_json;

/// Shortest exact decimal form, shared with every CSV writer in the library.
std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open \"" + path + "\" for writing");
    return os;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open \"" + path + "\"");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

/// CSV cells must stay comma-free; error messages are the only free text.
std::string csv_safe(std::string text) {
    for (char& c : text)
        if (c == ',') c = ';';
    return text;
}

Json stats_json(const SampleStats& s) {
    Json j;
    j["mean"] = s.mean;
    j["std"] = s.std_dev;
    j["min"] = s.min;
    j["max"] = s.max;
    j["count"] = s.count;
    return j;
}

int source_index(const Trace& trace, const std::string& id) {
    for (std::size_t i = 0; i < trace.source_ids.size(); ++i)
        if (trace.source_ids[i] == id) return static_cast<int>(i);
    throw DimensionError("trace has no source \"" + id + "\"");
}

struct SimulateArgs {
    std::string config;
    std::string trace_path;
    std::string summary_path;
    std::string events_path;
};

int cmd_simulate(const SimulateArgs& a) {
    const RunConfig rc = load_config(a.config);
    const RunResult rr = run_spiking(rc.neuron, rc.setup, rc.t_end, rc.tol);
    if (!a.trace_path.empty()) {
        std::ofstream os = open_out(a.trace_path);
        write_neuron_trace_csv(os, rr.trace);
    }
    if (!a.events_path.empty()) {
        std::ofstream os = open_out(a.events_path);
        write_events_jsonl(os, rr.trace);
    }
    if (!a.summary_path.empty()) {
        const SpikeMetrics m = reduce_spiking(rc.neuron, rr, rc.t_end);
        Json j;
        j["frequency_Hz"] = m.frequency;
        j["amplitude_V"] = m.amplitude;
        j["peak_level_V"] = m.peak_level;
        j["avg_power_W"] = m.avg_power;
        j["energy_J"] = m.energy;
        j["spike_count"] = m.spike_count;
        open_out(a.summary_path) << j.dump(2) << "\n";
    }
    return 0;
}

struct SweepArgs {
    std::string config;
    std::string out;
};

int cmd_sweep(const SweepArgs& a) {
    const RunConfig rc = load_config(a.config);
    if (!rc.has_sweep) throw ConfigError("config has no experiment.sweep section");
    const std::vector<SweepRow> rows = run_sweep(rc.sweep);
    std::ofstream os = open_out(a.out);
    os << "parameter,value,combo,ok,frequency_Hz,amplitude_V,peak_level_V,"
          "avg_power_W,energy_J,spike_count,error\n";
    for (const SweepRow& r : rows) {
        os << rc.sweep.parameter << ',' << full(r.value) << ',' << combo_label(r.combo) << ','
           << (r.ok ? 1 : 0) << ',';
        if (r.ok)
            os << full(r.metrics.frequency) << ',' << full(r.metrics.amplitude) << ','
               << full(r.metrics.peak_level) << ',' << full(r.metrics.avg_power) << ','
               << full(r.metrics.energy) << ',' << r.metrics.spike_count << ',';
        else
            os << ",,,,,,";
        os << csv_safe(r.error) << "\n";
    }
    return 0;
}

struct McArgs {
    std::string config;
    std::string out;
    std::string csv;
    int samples = 0;
    std::uint64_t seed = 0;
    bool has_samples = false;
    bool has_seed = false;
};

int cmd_montecarlo(const McArgs& a) {
    RunConfig rc = load_config(a.config);
    if (!rc.has_mc) throw ConfigError("config has no experiment.montecarlo section");
    if (a.has_samples) rc.mc.samples = a.samples;
    if (a.has_seed) rc.mc.seed = a.seed;
    const McReport rep = run_monte_carlo(rc.mc);

    Json j;
    j["spec"] = Json::parse(write_config(rc));
    j["seed"] = rc.mc.seed;
    Json points = Json::array();
    for (const McCell& c : rep.cells) {
        Json p;
        p["combo"] = combo_label(c.combo);
        p["i_bias_A"] = c.bias_current;
        p["freq_Hz"] = c.frequencies;
        p["amp_V"] = c.peak_levels;
        Json stats;
        stats["freq"] = stats_json(c.frequency_stats);
        stats["amp"] = stats_json(c.peak_level_stats);
        p["stats"] = stats;
        Json failures = Json::array();
        for (const McFailure& f : c.failures) {
            Json e;
            e["trial"] = f.trial;
            e["error"] = f.error;
            failures.push_back(e);
        }
        p["failures"] = failures;
        points.push_back(p);
    }
    j["points"] = points;
    Json overlap = Json::object();
    for (const McOverlap& o : rep.overlaps) overlap[o.key] = o.value;
    j["overlap"] = overlap;
    open_out(a.out) << j.dump(2) << "\n";

    if (!a.csv.empty()) {
        std::ofstream os = open_out(a.csv);
        os << "combo,i_bias_A,trial,freq_Hz,amp_V\n";
        for (const McCell& c : rep.cells)
            for (std::size_t i = 0; i < c.frequencies.size(); ++i) {
                if (!std::isfinite(c.frequencies[i]) || !std::isfinite(c.peak_levels[i]))
                    continue;
                os << combo_label(c.combo) << ',' << full(c.bias_current) << ',' << i << ','
                   << full(c.frequencies[i]) << ',' << full(c.peak_levels[i]) << "\n";
            }
    }
    return 0;
}

struct ProgramArgs {
    std::string config;
    std::string out;
    std::string to;
    std::string from;
};

int cmd_program(const ProgramArgs& a) {
    const RunConfig rc = load_config(a.config);
    const StateCombo to = parse_combo(a.to);
    const StateCombo from = a.from.empty()
                                ? StateCombo{rc.setup.control_state, rc.setup.main_state}
                                : parse_combo(a.from);
    const ProgrammingReport rep =
        program_states(rc.neuron, from.control, from.main, to.control, to.main, rc.tol);

    Json j;
    j["from"] = combo_label(from);
    j["to"] = combo_label(to);
    j["pulses"] = rep.pulses;
    j["control_margin_V"] = rep.control_margin;
    j["main_margin_V"] = rep.main_margin;
    const int bias = source_index(rep.trace, "i_bias");
    const int input = source_index(rep.trace, "i_in");
    const int gate = source_index(rep.trace, "i_gate");
    Json schedule = Json::array();
    for (std::size_t i = 0; i < rep.trace.size(); ++i) {
        if (i > 0 && !(rep.trace.u[i].array() != rep.trace.u[i - 1].array()).any()) continue;
        Json row;
        row["t_s"] = rep.trace.t[i];
        row["i_bias_A"] = rep.trace.u[i][bias];
        row["i_in_A"] = rep.trace.u[i][input];
        row["i_gate_A"] = rep.trace.u[i][gate];
        schedule.push_back(row);
    }
    j["schedule"] = schedule;
    open_out(a.out) << j.dump(2) << "\n";
    return 0;
}

struct PlotArgs {
    std::string kind;
    std::string in;
    std::string out;
    std::string x;
    std::string y;
    std::string column;
    std::string group = "combo";
    int bins = 50;
};

int cmd_plot(const PlotArgs& a) {
    const CsvTable table = parse_csv(read_file(a.in));
    std::string svg;
    if (a.kind == "trace") {
        svg = svg_trace(table, a.x.empty() ? "t_s" : a.x);
    } else if (a.kind == "sweep") {
        svg = svg_sweep(table, a.x.empty() ? "value" : a.x, a.y.empty() ? "frequency_Hz" : a.y,
                        a.group);
    } else if (a.kind == "scatter") {
        svg = svg_scatter(table, a.x.empty() ? "i_bias_A" : a.x, a.y.empty() ? "freq_Hz" : a.y,
                          a.group);
    } else {
        svg = svg_histogram(table, a.column.empty() ? "freq_Hz" : a.column, a.bins);
    }
    open_out(a.out) << svg;
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Simulator for a reconfigurable superconducting spiking neuron", "cryospike"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "Run one neuron and write its waveforms");
    c_sim->add_option("--config", sim.config, "JSON run configuration")->required();
    c_sim->add_option("--out", sim.trace_path, "Trace CSV output path");
    c_sim->add_option("--summary", sim.summary_path, "Spike-metric JSON output path");
    c_sim->add_option("--events", sim.events_path, "Transition JSONL output path");

    SweepArgs swp;
    CLI::App* c_swp = app.add_subcommand("sweep", "Run the configured parameter sweep");
    c_swp->add_option("--config", swp.config, "JSON run configuration")->required();
    c_swp->add_option("--out", swp.out, "Sweep CSV output path")->required();

    McArgs mc;
    CLI::App* c_mc = app.add_subcommand("montecarlo", "Run the configured variability study");
    c_mc->add_option("--config", mc.config, "JSON run configuration")->required();
    c_mc->add_option("--out", mc.out, "Report JSON output path")->required();
    c_mc->add_option("--csv", mc.csv, "Optional per-trial CSV output path");
    CLI::Option* mc_samples =
        c_mc->add_option("--samples", mc.samples, "Override the trial count");
    CLI::Option* mc_seed = c_mc->add_option("--seed", mc.seed, "Override the master seed");

    ProgramArgs prg;
    CLI::App* c_prg = app.add_subcommand("program", "Pulse the memristors to a target state");
    c_prg->add_option("--config", prg.config, "JSON run configuration")->required();
    c_prg->add_option("--to", prg.to, "Target state pair, e.g. HRS-LRS")->required();
    c_prg->add_option("--from", prg.from, "Starting state pair; defaults to the drive section");
    c_prg->add_option("--out", prg.out, "Programming report JSON output path")->required();

    PlotArgs plt;
    CLI::App* c_plt = app.add_subcommand("plot", "Render a CSV artifact as SVG");
    c_plt->add_option("--kind", plt.kind, "One of: trace, sweep, scatter, histogram")
        ->required()
        ->check(CLI::IsMember({"trace", "sweep", "scatter", "histogram"}));
    c_plt->add_option("--in", plt.in, "CSV input path")->required();
    c_plt->add_option("--out", plt.out, "SVG output path")->required();
    c_plt->add_option("--x", plt.x, "X column; kind-specific default");
    c_plt->add_option("--y", plt.y, "Y column; kind-specific default");
    c_plt->add_option("--column", plt.column, "Histogram value column");
    c_plt->add_option("--bins", plt.bins, "Histogram bin count");
    c_plt->add_option("--group", plt.group, "Series label column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        mc.has_samples = mc_samples->count() > 0;
        mc.has_seed = mc_seed->count() > 0;
        if (c_sim->parsed()) return cmd_simulate(sim);
        if (c_swp->parsed()) return cmd_sweep(swp);
        if (c_mc->parsed()) return cmd_montecarlo(mc);
        if (c_prg->parsed()) return cmd_program(prg);
        return cmd_plot(plt);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cryospike
