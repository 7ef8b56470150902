#ifndef COLLMEM_ACCEPTANCE_HPP
#define COLLMEM_ACCEPTANCE_HPP

// Reproduction checks for the published protocol figures. Shared by the
// acceptance test binary and `collmem reproduce`.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "collmem/dynamics.hpp"
#include "collmem/fidelity.hpp"
#include "collmem/hilbert.hpp"
#include "collmem/io.hpp"
#include "collmem/modes.hpp"
#include "collmem/sweep.hpp"

namespace collmem::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Options {
    std::optional<std::string> grid_path;  // bundled harmonic grid; generated in memory when absent
    std::int64_t monte_carlo_samples = 1'000'000;
    std::uint64_t seed = 20260101;
};

namespace detail {

inline std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

struct Threshold {
    FidelityReport report;
    double seconds = 0.0;
};

inline Threshold timed_threshold(double s) {
    const auto start = std::chrono::steady_clock::now();
    const auto report = find_min_N(s, 0.999, 1000);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return {report, elapsed.count()};
}

}  // namespace detail

inline CriterionResult threshold_cycles() {
    CriterionResult r{1, "threshold cycle counts N_0.999(0.1)=19, N_0.999(0.9)=80 (+-1, <10 s each)", true, ""};
    const std::pair<double, int> cases[] = {{0.1, 19}, {0.9, 80}};
    for (const auto& [s, expected] : cases) {
        const auto t = detail::timed_threshold(s);
        const bool ok = std::abs(t.report.cycles - expected) <= 1 && t.seconds < 10.0;
        r.passed = r.passed && ok;
        r.detail += "s=" + detail::fmt(s) + ": N=" + std::to_string(t.report.cycles) + " (" +
                    detail::fmt(t.seconds, 3) + " s); ";
    }
    return r;
}

inline CriterionResult timing() {
    CriterionResult r{2, "total time T = 21.9 and 67.9 (+-0.1)", true, ""};
    const std::pair<double, double> cases[] = {{0.1, 21.9}, {0.9, 67.9}};
    for (const auto& [s, expected] : cases) {
        const auto report = find_min_N(s, 0.999, 1000);
        const double t = total_time(report.cycles, 1.0, 1.0, s);
        const bool consistent = std::abs(t - report.total) <= 1e-9 * t;
        r.passed = r.passed && std::abs(t - expected) <= 0.1 && consistent;
        r.detail += "s=" + detail::fmt(s) + ": T=" + detail::fmt(t, 5) + "; ";
    }
    return r;
}

inline CriterionResult herald_probability() {
    CriterionResult r{3, "herald probability in [0.93, 0.97] at both thresholds", true, ""};
    for (double s : {0.1, 0.9}) {
        const auto report = find_min_N(s, 0.999, 1000);
        r.passed = r.passed && report.herald >= 0.93 && report.herald <= 0.97;
        r.detail += "s=" + detail::fmt(s) + ": p=" + detail::fmt(report.herald, 5) + "; ";
    }
    return r;
}

inline CriterionResult harmonic_overlap(const Options& opt) {
    CriterionResult r{4, "harmonic-dot grid overlap = 3^(-1/2) within 1e-6", false, ""};
    GridPair grids = [&] {
        if (opt.grid_path) {
            std::ifstream in(*opt.grid_path);
            if (!in) throw Error("cannot open grid file " + *opt.grid_path);
            return read_grid_csv(in);
        }
        return harmonic_oscillator_grid(200, 6.0);
    }();
    const double s = std::abs(overlap_from_profiles(profile_from_grid(grids.g), profile_from_grid(grids.h)));
    const double err = std::abs(s - 1.0 / std::sqrt(3.0));
    r.passed = grids.g.size() == 200 * 200 && err <= 1e-6;
    r.detail = "points=" + std::to_string(grids.g.size()) + " s=" + detail::fmt(s, 12) + " |err|=" + detail::fmt(err, 3);
    return r;
}

inline CriterionResult conditioning_gain() {
    CriterionResult r{5, "at first N with 1-F <= 1e-2: 1-F_c <= (1-F)/50", true, ""};
    const auto basis = build_basis(2);
    for (double s : SweepConfig{}.overlaps) {
        std::optional<FidelityReport> hit;
        for (int n = 1; n <= 1000 && !hit; ++n) {
            const auto rep = evaluate(SequenceParams::for_rotation(s, n), basis);
            if (1.0 - rep.fidelity <= 1e-2) hit = rep;
        }
        if (!hit) {
            r.passed = false;
            r.detail += "s=" + detail::fmt(s) + ": no N <= 1000; ";
            continue;
        }
        const double gain = (1.0 - hit->fidelity) / (1.0 - hit->conditional_fidelity);
        r.passed = r.passed && (1.0 - hit->conditional_fidelity) <= (1.0 - hit->fidelity) / 50.0;
        r.detail += "s=" + detail::fmt(s) + ": N=" + std::to_string(hit->cycles) + " gain=" + detail::fmt(gain, 4) + "; ";
    }
    return r;
}

inline CriterionResult figure_shape() {
    CriterionResult r{6, "infidelity decreasing in N (10..100) and ordered by s at fixed N", true, ""};
    SweepConfig cfg;
    cfg.n_min = 10;
    cfg.n_max = 100;
    const auto rows = run_sweep(cfg);
    const std::size_t per_s = static_cast<std::size_t>(cfg.n_max - cfg.n_min + 1);
    int decreasing_violations = 0;
    int ordering_violations = 0;
    auto infid = [&](std::size_t si, std::size_t ni, bool conditional) {
        const auto& rep = rows[si * per_s + ni];
        return 1.0 - (conditional ? rep.conditional_fidelity : rep.fidelity);
    };
    for (bool conditional : {false, true}) {
        for (std::size_t si = 0; si < cfg.overlaps.size(); ++si)
            for (std::size_t ni = 0; ni + 1 < per_s; ++ni)
                if (!(std::log(infid(si, ni + 1, conditional)) < std::log(infid(si, ni, conditional))))
                    ++decreasing_violations;
        for (std::size_t ni = 0; ni < per_s; ++ni)
            for (std::size_t si = 0; si + 1 < cfg.overlaps.size(); ++si)
                if (!(infid(si, ni, conditional) < infid(si + 1, ni, conditional))) ++ordering_violations;
    }
    r.passed = decreasing_violations == 0 && ordering_violations == 0;
    r.detail = "monotonicity violations=" + std::to_string(decreasing_violations) +
               " ordering violations=" + std::to_string(ordering_violations) + " (F and F_c)";
    return r;
}

inline const std::vector<std::pair<double, int>>& pinned_points() {
    static const std::vector<std::pair<double, int>> points{{0.1, 19}, {0.3, 10}, {0.5, 10}, {0.7, 40}, {0.9, 80}};
    return points;
}

inline CriterionResult monte_carlo_equivalence(const Options& opt) {
    CriterionResult r{7, "closed-form F, F_c within 3 SE of Monte-Carlo at 5 points", true, ""};
    const auto basis = build_basis(2);
    const SubspaceProjectors proj(basis);
    std::uint64_t k = 0;
    for (const auto& [s, n] : pinned_points()) {
        const auto [actual, ideal] = evolve(SequenceParams::for_rotation(s, n), basis);
        const double f = average_fidelity(build_M(actual, ideal, proj));
        const double fc = conditional_fidelity(actual, ideal, proj).fidelity;
        MonteCarloOptions mc{opt.monte_carlo_samples, stream_seed(opt.seed, k++), 4};
        const auto ef = monte_carlo_average_fidelity(actual, ideal, proj, mc);
        mc.seed = stream_seed(opt.seed, k++);
        const auto ec = monte_carlo_conditional_fidelity(actual, ideal, proj, mc).fidelity;
        const double zf = (f - ef.mean) / ef.std_error;
        const double zc = (fc - ec.mean) / ec.std_error;
        r.passed = r.passed && std::abs(zf) <= 3.0 && std::abs(zc) <= 3.0;
        r.detail += "(" + detail::fmt(s) + "," + std::to_string(n) + ") zF=" + detail::fmt(zf, 3) +
                    " zFc=" + detail::fmt(zc, 3) + "; ";
    }
    return r;
}

/// max|U_tau - exp(-[H_h, H_g] tau^2)|.
inline double bch_deviation(double s, double tau) {
    const auto basis = build_basis(2);
    const auto [h_g, h_h] = build_hamiltonians(1.0, 1.0, s, basis);
    // -[H_h,H_g] tau^2 = -i K tau^2 with K = -i [H_h, H_g] hermitian.
    const Operator k = Operator::hermitian(basis, (complex(0.0, -1.0) * commutator(h_h, h_g)).matrix());
    return distance(pulse_cycle(h_g, h_h, tau), expm(k, tau * tau));
}

inline CriterionResult bch_order() {
    CriterionResult r{8, "BCH deviation ratio in [6, 10] when tau halves (tau 0.1 -> 0.05)", true, ""};
    for (double s : {0.1, 0.5, 0.9}) {
        const double ratio = bch_deviation(s, 0.1) / bch_deviation(s, 0.05);
        r.passed = r.passed && ratio >= 6.0 && ratio <= 10.0;
        r.detail += "s=" + detail::fmt(s) + ": " + detail::fmt(ratio, 4) + "; ";
    }
    return r;
}

/// Largest matrix element of `op` connecting different excitation sectors.
inline double off_block_norm(const Operator& op) {
    const auto& basis = *op.basis();
    double worst = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (basis[i].total_excitation() != basis[j].total_excitation()) worst = std::max(worst, std::abs(op(i, j)));
    return worst;
}

inline CriterionResult structure() {
    CriterionResult r{9, "generator = [H_h,H_g]tau/(4i), 9-state basis, unitary and block-preserving", true, ""};
    const auto basis = build_basis(2);

    const std::vector<BasisState> listed{
        {Spin::down, 0, 0}, {Spin::down, 1, 0}, {Spin::down, 0, 1}, {Spin::down, 1, 1}, {Spin::down, 2, 0},
        {Spin::down, 0, 2}, {Spin::up, 0, 0},   {Spin::up, 1, 0},   {Spin::up, 0, 1}};
    bool basis_ok = basis->size() == listed.size();
    for (const auto& st : listed) basis_ok = basis_ok && basis->index_of(st).has_value();

    double generator_err = 0.0;
    for (double s : {0.0, 0.1, 0.5, 1.0 / std::sqrt(3.0), 0.9}) {
        for (double tau : {0.05, 0.3, 1.0}) {
            const auto ops = ladder_operators(basis);
            const Operator hop = ops.b_g_dag * ops.b_ghat;
            const complex pre = tau / complex(0.0, 2.0) * std::sqrt(1.0 - s * s);
            const Operator direct = pre * ((hop - hop.adjoint()) * ops.S_z);
            const auto [h_g, h_h] = build_hamiltonians(1.0, 1.0, s, basis);
            generator_err = std::max(generator_err, distance(direct, (tau / complex(0.0, 4.0)) * commutator(h_h, h_g)));
        }
    }

    double unitary_err = 0.0, block_err = 0.0;
    for (double s : SweepConfig{}.overlaps) {
        for (int n : {1, 10, 100}) {
            const auto [actual, ideal] = evolve(SequenceParams::for_rotation(s, n), basis);
            unitary_err = std::max({unitary_err, unitarity_defect(actual.matrix()), unitarity_defect(ideal.matrix())});
            block_err = std::max({block_err, off_block_norm(actual), off_block_norm(ideal)});
        }
    }
    r.passed = basis_ok && generator_err <= 1e-12 && unitary_err <= 1e-11 && block_err <= 1e-11;
    r.detail = std::string("basis ") + (basis_ok ? "ok" : "WRONG") + " generator err=" + detail::fmt(generator_err, 3) +
               " unitarity err=" + detail::fmt(unitary_err, 3) + " off-block=" + detail::fmt(block_err, 3);
    return r;
}

inline CriterionResult beam_splitter_action() {
    CriterionResult r{10, "ideal swap at theta=pi/2 maps |down,1,0> to -|down,0,1> (1e-12)", false, ""};
    const auto basis = build_basis(2);
    double worst = 0.0;
    for (double s : {0.0, 0.1, 0.5, 0.9}) {
        const auto p = SequenceParams::for_rotation(s, 19);
        const Operator u = ideal_swap(1.0, 1.0, s, p.tau, p.total, basis);
        Vector in = Vector::Zero(static_cast<Eigen::Index>(basis->size()));
        in(static_cast<Eigen::Index>(basis->at(Spin::down, 1, 0))) = 1.0;
        Vector expected = Vector::Zero(in.size());
        expected(static_cast<Eigen::Index>(basis->at(Spin::down, 0, 1))) = -1.0;
        worst = std::max(worst, (u.matrix() * in - expected).cwiseAbs().maxCoeff());
    }
    r.passed = worst <= 1e-12;
    r.detail = "max deviation=" + detail::fmt(worst, 3);
    return r;
}

inline std::vector<CriterionResult> run_all(const Options& opt = {}) {
    std::vector<std::function<CriterionResult()>> checks{
        threshold_cycles,
        timing,
        herald_probability,
        [&] { return harmonic_overlap(opt); },
        conditioning_gain,
        figure_shape,
        [&] { return monte_carlo_equivalence(opt); },
        bch_order,
        structure,
        beam_splitter_action,
    };
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        try {
            out.push_back(checks[i]());
        } catch (const std::exception& e) {
            out.push_back({static_cast<int>(i + 1), "criterion " + std::to_string(i + 1), false,
                           std::string("exception: ") + e.what()});
        }
    }
    return out;
}

}  // namespace collmem::acceptance

#endif  // COLLMEM_ACCEPTANCE_HPP
