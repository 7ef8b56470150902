#ifndef COLLMEM_SWEEP_HPP
#define COLLMEM_SWEEP_HPP

// (s, N) parameter sweeps over the closed-form fidelity pipeline.

#include <algorithm>
#include <atomic>
#include <exception>
#include <cstdint>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "collmem/dynamics.hpp"
#include "collmem/error.hpp"
#include "collmem/fidelity.hpp"
#include "collmem/modes.hpp"

namespace collmem {

enum class OutputFormat { csv, json };

struct SweepConfig {
    std::vector<double> overlaps{0.1, 0.3, 0.5, 0.7, 0.9};
    int n_min = 1;
    int n_max = 100;
    double theta = std::numbers::pi / 2;
    double omega_g = 1.0;
    double omega_h = 1.0;
    std::uint64_t seed = 1;  // only consumed by Monte-Carlo paths
    std::string output_path;  // empty: stdout
    OutputFormat format = OutputFormat::csv;

    void validate() const {
        if (overlaps.empty()) throw InvalidParameter("sweep needs at least one overlap");
        for (double s : overlaps)
            if (!(s >= 0.0 && s < 1.0 - kParallelCutoff))
                throw InvalidParameter("sweep overlap " + std::to_string(s) + " outside [0, 1 - 1e-9)");
        if (n_min < 1 || n_max < n_min) throw InvalidParameter("cycle range must satisfy 1 <= min <= max");
        if (!(theta > 0.0)) throw InvalidParameter("rotation angle must be positive");
        if (!(omega_g > 0.0) || !(omega_h > 0.0)) throw InvalidParameter("coupling rates must be positive");
    }

    std::size_t point_count() const { return overlaps.size() * static_cast<std::size_t>(n_max - n_min + 1); }
};

inline OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw InvalidParameter("unknown output format '" + name + "' (expected csv or json)");
}

/// Reads a config object; absent keys keep their defaults. N_range is [min, max].
inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
    SweepConfig c;
    if (!j.is_object()) throw InvalidParameter("sweep config must be a JSON object");
    if (j.contains("overlaps")) c.overlaps = j.at("overlaps").get<std::vector<double>>();
    if (j.contains("N_range")) {
        const auto range = j.at("N_range").get<std::vector<int>>();
        if (range.size() != 2) throw InvalidParameter("N_range must be [min, max]");
        c.n_min = range[0];
        c.n_max = range[1];
    }
    if (j.contains("theta")) c.theta = j.at("theta").get<double>();
    if (j.contains("omega_g")) c.omega_g = j.at("omega_g").get<double>();
    if (j.contains("omega_h")) c.omega_h = j.at("omega_h").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
    if (j.contains("format")) c.format = parse_format(j.at("format").get<std::string>());
    return c;
}

inline nlohmann::json sweep_config_to_json(const SweepConfig& c) {
    return {{"overlaps", c.overlaps},
            {"N_range", {c.n_min, c.n_max}},
            {"theta", c.theta},
            {"omega_g", c.omega_g},
            {"omega_h", c.omega_h},
            {"seed", c.seed},
            {"output_path", c.output_path},
            {"format", c.format == OutputFormat::csv ? "csv" : "json"}};
}

/// One report per (s, N), s outer and N inner. Points are spread over
/// `workers` threads; each result lands in its own slot, so the output does
/// not depend on the worker count.
inline std::vector<FidelityReport> run_sweep(const SweepConfig& config, unsigned workers = 0) {
    config.validate();
    const std::size_t per_s = static_cast<std::size_t>(config.n_max - config.n_min + 1);
    const std::size_t total = config.point_count();
    std::vector<FidelityReport> out(total);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](unsigned id) {
        try {
            const auto basis = build_basis(2);
            for (std::size_t i = next++; i < total; i = next++) {
                const double s = config.overlaps[i / per_s];
                const int n = config.n_min + static_cast<int>(i % per_s);
                out[i] = evaluate(SequenceParams::for_rotation(s, n, config.theta, config.omega_g, config.omega_h),
                                  basis);
            }
        } catch (...) {
            errors[id] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace collmem

#endif  // COLLMEM_SWEEP_HPP
