// Command-line front end: plant ingestion, the design/analysis subcommands,
// capacity sweeps over graph families, and CSV/JSON emission.
//
// Exit codes: 0 success, 2 config error, 3 solver non-convergence
// (report still emitted), 4 infeasible.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nettrack/errors.hpp"
#include "nettrack/json_io.hpp"
#include "nettrack/lmi_design.hpp"
#include "nettrack/local_design.hpp"
#include "nettrack/norm_design.hpp"
#include "nettrack/scalar_design.hpp"

namespace {

using namespace nettrack;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitInfeasible = 4;

// 12 significant digits; infinities as a literal `inf`
std::string fmt12(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw SchemaError("cannot open output file: " + out_path);
    f << text;
}

struct PlantSource {
    std::string plant_path;
    std::string graph_spec;
    std::string model_preset;
    double a = -1.0;  // < 0: leave A as loaded/built

    Plant build() const {
        Plant p;
        if (!plant_path.empty()) {
            if (!graph_spec.empty() || !model_preset.empty())
                throw SchemaError("--plant excludes --graph/--model");
            p = load_plant(plant_path);
        } else {
            if (graph_spec.empty()) throw SchemaError("need --plant or --graph");
            const Graph g = parse_graph(graph_spec);
            const std::string preset = model_preset.empty() ? "canonical-scalar" : model_preset;
            if (preset == "canonical-scalar") {
                p = make_canonical_scalar(g);
            } else if (preset == "none") {
                p = make_no_observation(g);
            } else {
                throw SchemaError("unknown model preset '" + preset + "'");
            }
        }
        if (a >= 0.0) set_instability(p, a);
        return p;
    }
};

void add_plant_options(CLI::App* cmd, PlantSource& src) {
    cmd->add_option("--plant", src.plant_path, "Plant JSON file");
    cmd->add_option("--graph", src.graph_spec,
                    "Graph grammar (circulant:N=..,m=.. | complete:N=.. | edges:i-j,...)");
    cmd->add_option("--model", src.model_preset, "Model preset: canonical-scalar | none");
    cmd->add_option("--a", src.a, "Rescale A to this spectral norm before analysis");
}

// comma list and lo..hi ranges, e.g. "1,2,3" or "2..16"
std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dots = item.find("..");
        if (dots != std::string::npos) {
            const int lo = std::stoi(item.substr(0, dots));
            const int hi = std::stoi(item.substr(dots + 2));
            for (int v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            out.push_back(std::stoi(item));
        }
    }
    return out;
}

int run_capacity(const PlantSource& src, const std::string& out_path) {
    const Plant p = src.build();
    const CapacityReport rep = compute_ntc(p);
    emit(to_json(rep).dump(2) + "\n", out_path);
    return rep.converged ? kExitOk : kExitNoConverge;
}

int run_scalar(const PlantSource& src, const std::string& out_path) {
    Plant p = src.build();
    const ScalarGainReport rep = scalar_report(p, instability(p));
    emit(to_json(rep).dump(2) + "\n", out_path);
    return kExitOk;
}

int run_local_alpha(const PlantSource& src, const std::string& cycle_csv,
                    const std::string& out_path) {
    Plant p = src.build();
    std::optional<std::vector<int>> cycle;
    if (!cycle_csv.empty()) cycle = parse_int_list(cycle_csv);
    const LocalBoundReport rep = local_alpha_interval(p, instability(p), cycle);
    emit(to_json(rep).dump(2) + "\n", out_path);
    return kExitOk;
}

int run_lmi(const PlantSource& src, const std::string& out_path) {
    const Plant p = src.build();
    const CclResult res = ccl_design(p);
    emit(to_json(res).dump(2) + "\n", out_path);
    switch (res.status) {
        case CclResult::Status::converged: return kExitOk;
        case CclResult::Status::infeasible: return kExitInfeasible;
        case CclResult::Status::max_iterations: return kExitNoConverge;
    }
    return kExitNoConverge;
}

struct SimulateArgs {
    std::string alpha = "opt";
    int steps = 1000;
    int trials = 100;
    std::uint64_t seed = 42;
    bool allow_unstable = false;
    int threads = 0;
    std::string csv_path;
};

int run_simulate(const PlantSource& src, const SimulateArgs& args, const std::string& out_path) {
    Plant p = src.build();
    double alpha;
    if (args.alpha == "opt") {
        alpha = scalar_capacity(p).alpha_opt;
    } else {
        try {
            alpha = std::stod(args.alpha);
        } catch (...) {
            throw SchemaError("--alpha must be a number or 'opt'");
        }
    }
    const Design d = make_scalar_design(p, alpha);
    SimOptions opts;
    opts.steps = args.steps;
    opts.trials = args.trials;
    opts.seed = args.seed;
    opts.allow_unstable = args.allow_unstable;
    opts.threads = args.threads;
    const SimulationResult res = simulate(p, d, opts);

    if (!args.csv_path.empty()) {
        std::string csv = "step,mean_error_norm\n";
        for (int k = 0; k < res.steps; ++k)
            csv += std::to_string(k + 1) + "," + fmt12(res.empirical_mean_error[k]) + "\n";
        emit(csv, args.csv_path);
    }
    json j = to_json(res);
    j["alpha"] = alpha;
    emit(j.dump(2) + "\n", out_path);
    return kExitOk;
}

struct SweepArgs {
    std::string m_list = "1";
    std::string n_list = "2..16";
    std::string mode = "scalar";
};

int run_sweep(const SweepArgs& args, const std::string& out_path) {
    const std::vector<int> ms = parse_int_list(args.m_list);
    const std::vector<int> ns = parse_int_list(args.n_list);
    if (args.mode != "scalar" && args.mode != "full")
        throw SchemaError("--mode must be scalar or full");
    for (int nv : ns)
        if (nv < 2 || nv > 32) throw SchemaError("sweep: N must lie in 2..32");

    bool any_failed = false;
    std::string csv = "m,N,capacity\n";
    for (int m : ms) {
        for (int nv : ns) {
            if (m < 1 || m > nv - 1) continue;  // no such circulant
            std::string cell;
            try {
                const Plant p = make_canonical_scalar(circulant(nv, m));
                if (args.mode == "scalar") {
                    const ScalarGainReport rep = scalar_capacity(p);
                    cell = rep.capacity_infinite ? "inf" : fmt12(rep.C_alpha);
                } else {
                    const CapacityReport rep = compute_ntc(p);
                    cell = rep.infinite ? "inf" : fmt12(rep.capacity);
                }
            } catch (const Error&) {
                cell = "failed";  // partial rows are flagged, not fatal
                any_failed = true;
            }
            csv += std::to_string(m) + "," + std::to_string(nv) + "," + cell + "\n";
        }
    }
    emit(csv, out_path);
    return any_failed ? kExitNoConverge : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Networked-estimation design and analysis toolkit"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "Output path (default stdout)")->capture_default_str();

    PlantSource cap_src, sc_src, la_src, lmi_src, sim_src;
    std::string cycle_csv;
    SimulateArgs sim_args;
    SweepArgs sweep_args;

    CLI::App* cap = app.add_subcommand("capacity", "Network tracking capacity of a plant");
    cap->fallthrough();
    add_plant_options(cap, cap_src);

    CLI::App* sc = app.add_subcommand("scalar", "Scalar-gain closed forms and stability window");
    sc->fallthrough();
    add_plant_options(sc, sc_src);

    CLI::App* la = app.add_subcommand("local-alpha", "Locally computable stability window");
    la->fallthrough();
    add_plant_options(la, la_src);
    la->add_option("--cycle", cycle_csv, "Hamiltonian cycle as a comma list of vertices");

    CLI::App* lmi = app.add_subcommand("lmi", "Spectral-radius design via the CCL iteration");
    lmi->fallthrough();
    add_plant_options(lmi, lmi_src);

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo run of the error process");
    sim->fallthrough();
    add_plant_options(sim, sim_src);
    sim->add_option("--alpha", sim_args.alpha, "Scalar gain, or 'opt'")->capture_default_str();
    sim->add_option("--steps", sim_args.steps)->capture_default_str();
    sim->add_option("--trials", sim_args.trials)->capture_default_str();
    sim->add_option("--seed", sim_args.seed)->capture_default_str();
    sim->add_option("--threads", sim_args.threads, "0 = hardware (NETTRACK_THREADS caps)");
    sim->add_flag("--allow-unstable", sim_args.allow_unstable, "Run divergence demos");
    sim->add_option("--csv", sim_args.csv_path, "Per-step mean error norm CSV path");

    CLI::App* sw = app.add_subcommand("sweep", "Capacity over circulant families (CSV)");
    sw->fallthrough();
    sw->add_option("--m", sweep_args.m_list, "m values, e.g. 1,2,3")->capture_default_str();
    sw->add_option("--N", sweep_args.n_list, "N values, e.g. 2..16")->capture_default_str();
    sw->add_option("--mode", sweep_args.mode, "scalar | full")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (cap->parsed()) return run_capacity(cap_src, out_path);
        if (sc->parsed()) return run_scalar(sc_src, out_path);
        if (la->parsed()) return run_local_alpha(la_src, cycle_csv, out_path);
        if (lmi->parsed()) return run_lmi(lmi_src, out_path);
        if (sim->parsed()) return run_simulate(sim_src, sim_args, out_path);
        if (sw->parsed()) return run_sweep(sweep_args, out_path);
    } catch (const CapacityExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const MaxIterations& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConverge;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
