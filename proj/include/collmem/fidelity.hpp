#ifndef COLLMEM_FIDELITY_HPP
#define COLLMEM_FIDELITY_HPP

// Haar-averaged gate fidelity of the pulse sequence against the ideal swap,
// with and without heralding on the central spin ending in |down>.
//
// S: the information subspace {|down,n_g,n_ghat> : n_g, n_ghat in {0,1}}.
// T: every spin-down state of the basis; finding the spin down projects onto T.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "collmem/dynamics.hpp"
#include "collmem/error.hpp"
#include "collmem/hilbert.hpp"

namespace collmem {

class SubspaceProjectors {
public:
    explicit SubspaceProjectors(const BasisHandle& basis) : basis_(basis) {
        if (basis->cutoff() < 2) throw InvalidParameter("the two-qubit subspace needs cutoff >= 2");
        for (int n_g : {0, 1})
            for (int n_ghat : {0, 1}) info_.push_back(basis->at(Spin::down, n_g, n_ghat));
        std::sort(info_.begin(), info_.end());
        for (std::size_t i = 0; i < basis->size(); ++i)
            if ((*basis)[i].spin == Spin::down) herald_.push_back(i);
    }

    const BasisHandle& basis() const noexcept { return basis_; }
    /// Basis positions spanning S, ascending.
    const std::vector<std::size_t>& info_indices() const noexcept { return info_; }
    /// Basis positions spanning T, ascending.
    const std::vector<std::size_t>& herald_indices() const noexcept { return herald_; }
    int n_info() const noexcept { return static_cast<int>(info_.size()); }

    Operator P_S() const { return projector(info_); }
    Operator P_T() const { return projector(herald_); }

private:
    Operator projector(const std::vector<std::size_t>& idx) const {
        const auto n = static_cast<Eigen::Index>(basis_->size());
        Matrix m = Matrix::Zero(n, n);
        for (auto i : idx) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        return Operator::hermitian(basis_, std::move(m));
    }

    BasisHandle basis_;
    std::vector<std::size_t> info_;
    std::vector<std::size_t> herald_;
};

namespace detail {

inline Matrix select(const Matrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                m(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c]));
    return out;
}

inline void require_projector_basis(const Operator& op, const SubspaceProjectors& proj) {
    if (!(*op.basis() == *proj.basis())) throw BasisMismatch("operator and projectors use different bases");
}

}  // namespace detail

/// M = P_S U_ideal^dag P_S U_N P_S restricted to the range of P_S.
inline Matrix build_M(const Operator& actual, const Operator& ideal, const SubspaceProjectors& proj) {
    Operator::require_same_basis(actual, ideal);
    detail::require_projector_basis(actual, proj);
    const auto& s = proj.info_indices();
    return detail::select(ideal.matrix().adjoint(), s, s) * detail::select(actual.matrix(), s, s);
}

/// (Tr(M M^dag) + |Tr M|^2) / (n (n + 1)).
inline double average_fidelity(const Matrix& m) {
    const double n = static_cast<double>(m.rows());
    return ((m * m.adjoint()).trace().real() + std::norm(m.trace())) / (n * (n + 1.0));
}

/// Tr(P_S U^dag P_T U P_S): summed spin-down probability over a basis of S.
inline double herald_trace(const Operator& actual, const SubspaceProjectors& proj) {
    detail::require_projector_basis(actual, proj);
    return detail::select(actual.matrix(), proj.herald_indices(), proj.info_indices()).squaredNorm();
}

struct ConditionalFidelity {
    double fidelity = 0.0;  // F_c
    double herald = 0.0;    // p_herald, Haar mean over S
};

inline ConditionalFidelity conditional_fidelity(const Operator& actual, const Operator& ideal,
                                                const SubspaceProjectors& proj) {
    const Matrix m = build_M(actual, ideal, proj);
    const double denominator = herald_trace(actual, proj);
    if (denominator < 1e-15) throw DegenerateConditioning("herald probability vanishes");
    const double n = proj.n_info();
    const double num = (m * m.adjoint()).trace().real() + std::norm(m.trace());
    return {num / ((n + 1.0) * denominator), denominator / n};
}

struct FidelityReport {
    double overlap = 0.0;
    int cycles = 0;
    double tau = 0.0;
    double total = 0.0;
    double fidelity = 0.0;              // F
    double conditional_fidelity = 0.0;  // F_c
    double herald = 0.0;                // p_herald
};

/// Full pipeline for one configuration.
inline FidelityReport evaluate(const SequenceParams& params, const BasisHandle& basis) {
    const SubspaceProjectors proj(basis);
    const auto [actual, ideal] = evolve(params, basis);
    const double f = average_fidelity(build_M(actual, ideal, proj));
    const auto fc = conditional_fidelity(actual, ideal, proj);
    return {params.overlap, params.cycles, params.tau, params.total, f, fc.fidelity, fc.herald};
}

inline FidelityReport evaluate(const SequenceParams& params) { return evaluate(params, build_basis(2)); }

/// Smallest N <= max_cycles whose pi/2 sequence reaches F_c >= target. The
/// scan runs upward from N = 1 and returns on the first hit.
inline FidelityReport find_min_N(double overlap, double target, int max_cycles, double omega_g = 1.0,
                                 double omega_h = 1.0) {
    require_overlap_in_range(overlap);
    if (!(target >= 0.0 && target < 1.0)) throw InvalidParameter("target fidelity must lie in [0, 1)");
    if (max_cycles < 1) throw InvalidParameter("search limit must be at least 1");
    const auto basis = build_basis(2);
    FidelityReport best;
    best.conditional_fidelity = -1.0;
    for (int n = 1; n <= max_cycles; ++n) {
        const auto report =
            evaluate(SequenceParams::for_rotation(overlap, n, std::numbers::pi / 2, omega_g, omega_h), basis);
        if (report.conditional_fidelity >= target) return report;
        if (report.conditional_fidelity > best.conditional_fidelity) best = report;
    }
    throw NotFound("no cycle count up to " + std::to_string(max_cycles) + " reaches F_c = " + std::to_string(target),
                   best.cycles, best.conditional_fidelity);
}

/// Haar-random pure states: normalized vectors of i.i.d. standard complex
/// Gaussians, drawn from a seeded mt19937_64.
class HaarSampler {
public:
    HaarSampler(std::uint64_t seed, int dimension) : seed_(seed), dimension_(dimension), engine_(seed) {
        if (dimension < 1) throw InvalidParameter("sampler dimension must be positive");
    }

    std::uint64_t seed() const noexcept { return seed_; }
    int dimension() const noexcept { return dimension_; }

    Vector sample() {
        Vector v(dimension_);
        for (int i = 0; i < dimension_; ++i) {
            const double re = normal_(engine_);
            const double im = normal_(engine_);
            v(i) = complex(re, im);
        }
        return v / v.norm();
    }

private:
    std::uint64_t seed_;
    int dimension_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Seed of the k-th independent stream derived from a base seed (splitmix64).
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

struct MonteCarloOptions {
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    int streams = 4;  // sample budget is split evenly; each stream runs on its own thread
};

namespace detail {

struct Moments {
    double n = 0, a = 0, b = 0, aa = 0, bb = 0, ab = 0;

    void add(double x, double y) {
        n += 1;
        a += x;
        b += y;
        aa += x * x;
        bb += y * y;
        ab += x * y;
    }
    Moments& operator+=(const Moments& o) {
        n += o.n;
        a += o.a;
        b += o.b;
        aa += o.aa;
        bb += o.bb;
        ab += o.ab;
        return *this;
    }
};

// Streams are pooled by summing moments; with equal stream sizes this is the
// mean of the per-stream means.
template <class Kernel>
Moments run_streams(const MonteCarloOptions& opt, int dimension, Kernel kernel) {
    if (opt.samples < 2) throw InvalidParameter("Monte-Carlo estimate needs at least two samples");
    const int streams = std::max(1, opt.streams);
    std::vector<std::future<Moments>> jobs;
    for (int k = 0; k < streams; ++k) {
        const std::int64_t count = opt.samples / streams + (k < opt.samples % streams ? 1 : 0);
        jobs.push_back(std::async(std::launch::async, [=] {
            HaarSampler sampler(stream_seed(opt.seed, static_cast<std::uint64_t>(k)), dimension);
            Moments m;
            for (std::int64_t i = 0; i < count; ++i) kernel(sampler.sample(), m);
            return m;
        }));
    }
    Moments total;
    for (auto& j : jobs) total += j.get();
    return total;
}

}  // namespace detail

/// Monte-Carlo average of f = |<psi| U_ideal^dag U_N |psi>|^2 over Haar psi in S.
inline Estimate monte_carlo_average_fidelity(const Operator& actual, const Operator& ideal,
                                              const SubspaceProjectors& proj, const MonteCarloOptions& opt = {}) {
    Operator::require_same_basis(actual, ideal);
    detail::require_projector_basis(actual, proj);
    const Matrix u = actual.matrix();
    const Matrix v = ideal.matrix();
    const auto& s = proj.info_indices();
    const auto n = static_cast<Eigen::Index>(proj.basis()->size());
    const auto m = detail::run_streams(opt, proj.n_info(), [&](const Vector& psi_s, detail::Moments& acc) {
        Vector psi = Vector::Zero(n);
        for (std::size_t i = 0; i < s.size(); ++i) psi(static_cast<Eigen::Index>(s[i])) = psi_s(static_cast<Eigen::Index>(i));
        const Vector target = v * psi;
        const Vector out = u * psi;
        // <psi|P_S U_ideal^dag P_S U_N P_S|psi>
        complex amp = 0.0;
        for (auto i : s) amp += std::conj(target(static_cast<Eigen::Index>(i))) * out(static_cast<Eigen::Index>(i));
        acc.add(std::norm(amp), 0.0);
    });
    const double mean = m.a / m.n;
    const double var = std::max(0.0, (m.aa / m.n - mean * mean) * m.n / (m.n - 1));
    return {mean, std::sqrt(var / m.n)};
}

struct ConditionalEstimate {
    Estimate fidelity;  // F_c
    Estimate herald;    // mean spin-down probability
};

/// Monte-Carlo heralded fidelity: each sampled input is evolved, projected on
/// spin down and renormalized; its squared overlap with the target is weighted
/// by the herald probability, and the average is divided by the mean herald
/// probability. The standard error of the ratio uses the delta method.
inline ConditionalEstimate monte_carlo_conditional_fidelity(const Operator& actual, const Operator& ideal,
                                                            const SubspaceProjectors& proj,
                                                            const MonteCarloOptions& opt = {}) {
    Operator::require_same_basis(actual, ideal);
    detail::require_projector_basis(actual, proj);
    const Matrix u = actual.matrix();
    const Matrix v = ideal.matrix();
    const auto& s = proj.info_indices();
    const auto& t = proj.herald_indices();
    const auto n = static_cast<Eigen::Index>(proj.basis()->size());
    const auto m = detail::run_streams(opt, proj.n_info(), [&](const Vector& psi_s, detail::Moments& acc) {
        Vector psi = Vector::Zero(n);
        for (std::size_t i = 0; i < s.size(); ++i) psi(static_cast<Eigen::Index>(s[i])) = psi_s(static_cast<Eigen::Index>(i));
        const Vector out = u * psi;
        Vector heralded = Vector::Zero(n);
        for (auto i : t) heralded(static_cast<Eigen::Index>(i)) = out(static_cast<Eigen::Index>(i));
        const double prob = heralded.squaredNorm();
        double weighted = 0.0;
        if (prob > 0.0) {
            heralded /= std::sqrt(prob);
            Vector target = Vector::Zero(n);
            const Vector ideal_out = v * psi;
            for (auto i : s) target(static_cast<Eigen::Index>(i)) = ideal_out(static_cast<Eigen::Index>(i));
            weighted = std::norm(target.dot(heralded)) * prob;
        }
        acc.add(weighted, prob);
    });
    const double mean_a = m.a / m.n;
    const double mean_b = m.b / m.n;
    if (mean_b < 1e-15) throw DegenerateConditioning("herald probability vanishes");
    const double unbias = m.n / (m.n - 1);
    const double var_a = std::max(0.0, (m.aa / m.n - mean_a * mean_a) * unbias);
    const double var_b = std::max(0.0, (m.bb / m.n - mean_b * mean_b) * unbias);
    const double cov = (m.ab / m.n - mean_a * mean_b) * unbias;
    const double ratio = mean_a / mean_b;
    const double var_ratio =
        std::max(0.0, (var_a - 2.0 * ratio * cov + ratio * ratio * var_b) / (mean_b * mean_b));
    return {{ratio, std::sqrt(var_ratio / m.n)}, {mean_b, std::sqrt(var_b / m.n)}};
}

}  // namespace collmem

#endif  // COLLMEM_FIDELITY_HPP
