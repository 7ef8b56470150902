// collmem: command-line front end for the two-mode collective memory simulator.
//
// Exit codes: 0 success, 1 failed reproduction, 2 usage or parse error,
// 3 I/O error, 4 threshold search failed.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "collmem/acceptance.hpp"
#include "collmem/collmem.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kReproduceFailed = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;
constexpr int kSearchFailed = 4;

struct IoError : collmem::Error {
    using collmem::Error::Error;
};

// Writes to `path`, or stdout when the path is empty.
template <class Fn>
void emit(const std::string& path, Fn write) {
    if (path.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write(out);
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

struct OverlapArgs {
    std::string grid;
    std::string output;
};

int cmd_overlap(const OverlapArgs& a) {
    std::ifstream in(a.grid);
    if (!in) throw IoError("cannot open grid file '" + a.grid + "'");
    const auto grids = collmem::read_grid_csv(in);
    const auto g = collmem::profile_from_grid(grids.g);
    const auto h = collmem::profile_from_grid(grids.h);
    const double s = std::abs(collmem::overlap_from_profiles(g, h));
    std::cout << "overlap " << fixed(s, 10) << '\n';
    try {
        const auto pair = collmem::gram_schmidt(g, h);
        emit(a.output, [&](std::ostream& os) { os << collmem::pair_to_json(pair).dump() << '\n'; });
    } catch (const collmem::DegeneracyError& e) {
        std::cerr << "warning: " << e.what() << "; no orthogonal mode written\n";
    }
    return kOk;
}

struct SimulateArgs {
    double overlap = 0.0;
    int cycles = 1;
    double theta = std::numbers::pi / 2;
    double omega_g = 1.0;
    double omega_h = 1.0;
    std::string format = "json";
    std::string output;
    std::int64_t mc_samples = 0;
    std::uint64_t seed = 1;
};

int cmd_simulate(const SimulateArgs& a) {
    const auto format = collmem::parse_format(a.format);
    const auto basis = collmem::build_basis(2);
    const auto params = collmem::SequenceParams::for_rotation(a.overlap, a.cycles, a.theta, a.omega_g, a.omega_h);
    const auto report = collmem::evaluate(params, basis);

    collmem::json mc;
    if (a.mc_samples > 0) {
        const collmem::SubspaceProjectors proj(basis);
        const auto [actual, ideal] = collmem::evolve(params, basis);
        collmem::MonteCarloOptions opt{a.mc_samples, a.seed, 4};
        const auto f = collmem::monte_carlo_average_fidelity(actual, ideal, proj, opt);
        const auto fc = collmem::monte_carlo_conditional_fidelity(actual, ideal, proj, opt);
        mc = {{"samples", a.mc_samples}, {"seed", a.seed},     {"F", f.mean},
              {"F_std_error", f.std_error}, {"Fc", fc.fidelity.mean}, {"Fc_std_error", fc.fidelity.std_error}};
    }

    emit(a.output, [&](std::ostream& os) {
        if (format == collmem::OutputFormat::csv) {
            os << collmem::kReportHeader << '\n' << collmem::report_csv_row(report) << '\n';
        } else {
            auto j = collmem::report_to_json(report);
            if (!mc.is_null()) j["monte_carlo"] = mc;
            os << j.dump(2) << '\n';
        }
    });
    return kOk;
}

struct SweepArgs {
    std::string config_path;
    std::vector<double> overlaps;
    int n_min = 0;
    int n_max = 0;
    double theta = 0.0;
    std::string format;
    std::string output;
    std::uint64_t seed = 0;
    unsigned workers = 0;
};

int cmd_sweep(const SweepArgs& a, const CLI::App& sub) {
    collmem::SweepConfig cfg;
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) throw IoError("cannot open config '" + a.config_path + "'");
        collmem::json j;
        try {
            in >> j;
        } catch (const collmem::json::parse_error& e) {
            throw collmem::ParseError(std::string("config: ") + e.what(), 0, 0);
        }
        cfg = collmem::sweep_config_from_json(j);
    }
    if (sub.count("--overlaps")) cfg.overlaps = a.overlaps;
    if (sub.count("--n-min")) cfg.n_min = a.n_min;
    if (sub.count("--n-max")) cfg.n_max = a.n_max;
    if (sub.count("--theta")) cfg.theta = a.theta;
    if (sub.count("--format")) cfg.format = collmem::parse_format(a.format);
    if (sub.count("--output")) cfg.output_path = a.output;
    if (sub.count("--seed")) cfg.seed = a.seed;
    cfg.validate();

    const auto start = std::chrono::steady_clock::now();
    const auto rows = collmem::run_sweep(cfg, a.workers);
    emit(cfg.output_path, [&](std::ostream& os) {
        if (cfg.format == collmem::OutputFormat::csv)
            collmem::write_reports_csv(os, rows);
        else
            collmem::write_reports_json(os, rows);
    });
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    std::cerr << "sweep: " << rows.size() << " points in " << fixed(elapsed.count(), 3) << " s\n";
    return kOk;
}

struct FindArgs {
    double overlap = 0.0;
    double target = 0.999;
    int max_n = 1000;
};

int cmd_find_n(const FindArgs& a) {
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto r = collmem::find_min_N(a.overlap, a.target, a.max_n);
        const double t = collmem::total_time(r.cycles, 1.0, 1.0, a.overlap);
        std::cout << "N=" << r.cycles << " tau=" << fixed(r.tau, 6) << " T=" << fixed(t, 4)
                  << " Fc=" << fixed(r.conditional_fidelity, 6) << " p_herald=" << fixed(r.herald, 6) << '\n';
    } catch (const collmem::NotFound& e) {
        std::cerr << "error: " << e.what() << "; best N=" << e.best_cycles() << " Fc=" << fixed(e.best_fidelity(), 6)
                  << '\n';
        return kSearchFailed;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    std::cerr << "find-n: " << fixed(elapsed.count(), 3) << " s\n";
    return kOk;
}

struct ReproduceArgs {
    std::string grid;
    std::int64_t mc_samples = 1'000'000;
    std::uint64_t seed = 20260101;
};

int cmd_reproduce(const ReproduceArgs& a) {
    collmem::acceptance::Options opt;
    if (!a.grid.empty()) opt.grid_path = a.grid;
    opt.monte_carlo_samples = a.mc_samples;
    opt.seed = a.seed;
    bool all = true;
    for (const auto& r : collmem::acceptance::run_all(opt)) {
        std::cout << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " :: " << r.detail << '\n';
        all = all && r.passed;
    }
    return all ? kOk : kReproduceFailed;
}

struct GridArgs {
    std::size_t points = 200;
    double extent = 6.0;
    std::string output;
};

int cmd_grid(const GridArgs& a) {
    const auto grids = collmem::harmonic_oscillator_grid(a.points, a.extent);
    emit(a.output, [&](std::ostream& os) { collmem::write_grid_csv(os, grids); });
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-mode collective spin memory: overlaps, pulse sequences and swap fidelities"};
    app.require_subcommand(1);

    OverlapArgs overlap;
    auto* c_overlap = app.add_subcommand("overlap", "Mode overlap and Gram-Schmidt mode from a density grid CSV");
    c_overlap->add_option("grid_file", overlap.grid, "CSV with columns x,y,density_g,density_h,weight")->required();
    c_overlap->add_option("--output", overlap.output, "Write the orthogonal mode pair JSON here");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Fidelity report for one (overlap, cycles) point");
    c_sim->add_option("--overlap", sim.overlap, "Mode overlap s in [0, 1)")->required();
    c_sim->add_option("--cycles", sim.cycles, "Number of pulse cycles N >= 1")->required();
    c_sim->add_option("--theta", sim.theta, "Target rotation angle (radians)");
    c_sim->add_option("--omega-g", sim.omega_g, "Coupling rate of the g mode");
    c_sim->add_option("--omega-h", sim.omega_h, "Coupling rate of the h mode");
    c_sim->add_option("--format", sim.format, "json or csv");
    c_sim->add_option("--output", sim.output, "Output file (default stdout)");
    c_sim->add_option("--mc-samples", sim.mc_samples, "Also report Monte-Carlo estimates with this many samples");
    c_sim->add_option("--seed", sim.seed, "Monte-Carlo seed");

    SweepArgs sweep;
    auto* c_sweep = app.add_subcommand("sweep", "Fidelity table over an (overlap, cycles) grid");
    c_sweep->add_option("--config", sweep.config_path, "JSON sweep config");
    c_sweep->add_option("--overlaps", sweep.overlaps, "Overlap values")->delimiter(',');
    c_sweep->add_option("--n-min", sweep.n_min, "Smallest cycle count");
    c_sweep->add_option("--n-max", sweep.n_max, "Largest cycle count");
    c_sweep->add_option("--theta", sweep.theta, "Target rotation angle (radians)");
    c_sweep->add_option("--format", sweep.format, "csv or json");
    c_sweep->add_option("--output", sweep.output, "Output file (default stdout)");
    c_sweep->add_option("--seed", sweep.seed, "Seed recorded in the config");
    c_sweep->add_option("--workers", sweep.workers, "Worker threads (0 = hardware concurrency)");

    FindArgs find;
    auto* c_find = app.add_subcommand("find-n", "Smallest cycle count reaching a conditional fidelity");
    c_find->add_option("--overlap", find.overlap, "Mode overlap s in [0, 1)")->required();
    c_find->add_option("--target", find.target, "Target conditional fidelity");
    c_find->add_option("--max-n", find.max_n, "Search limit");

    ReproduceArgs repro;
    auto* c_repro = app.add_subcommand("reproduce", "Run the reproduction checks and print one line per criterion");
    c_repro->add_option("--grid", repro.grid, "Harmonic grid CSV (default: generated in memory)");
    c_repro->add_option("--mc-samples", repro.mc_samples, "Monte-Carlo samples per estimate");
    c_repro->add_option("--seed", repro.seed, "Monte-Carlo base seed");

    GridArgs grid;
    auto* c_grid = app.add_subcommand("grid", "Write the 2D harmonic-oscillator psi_00/psi_10 density grid");
    c_grid->add_option("--points", grid.points, "Points per axis");
    c_grid->add_option("--extent", grid.extent, "Half-width of the square domain");
    c_grid->add_option("--output", grid.output, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (c_overlap->parsed()) return cmd_overlap(overlap);
        if (c_sim->parsed()) return cmd_simulate(sim);
        if (c_sweep->parsed()) return cmd_sweep(sweep, *c_sweep);
        if (c_find->parsed()) return cmd_find_n(find);
        if (c_repro->parsed()) return cmd_reproduce(repro);
        if (c_grid->parsed()) return cmd_grid(grid);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const collmem::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const collmem::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
