#ifndef COLLMEM_MODES_HPP
#define COLLMEM_MODES_HPP

// Collective-mode coupling profiles.
//
// A profile {g_i} over N ensemble members defines a bosonic mode
//   b_g^dagger = (1/sqrt(N)) sum_i (g_i^* / gbar) sigma_i^+,  gbar = rms(g).
// Profiles are kept unnormalized; every overlap uses the rms-normalized
// amplitudes g_i / (sqrt(N) gbar).

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "collmem/error.hpp"

namespace collmem {

using complex = std::complex<double>;

class CouplingProfile {
public:
    explicit CouplingProfile(std::vector<complex> amplitudes)
        : amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.empty()) throw DimensionError("coupling profile needs at least one amplitude");
        double sum = 0.0;
        for (const auto& a : amplitudes_) sum += std::norm(a);
        rms_ = std::sqrt(sum / static_cast<double>(amplitudes_.size()));
        if (!(rms_ > 0.0)) throw DegenerateProfileError("coupling profile has zero rms");
    }

    static CouplingProfile from_real(std::span<const double> values) {
        return CouplingProfile(std::vector<complex>(values.begin(), values.end()));
    }

    std::span<const complex> amplitudes() const noexcept { return amplitudes_; }
    std::size_t spin_count() const noexcept { return amplitudes_.size(); }
    double rms() const noexcept { return rms_; }

    /// g_i / (sqrt(N) * rms): the unit vector of amplitudes of |1_g>.
    std::vector<complex> normalized() const {
        const double scale = 1.0 / (std::sqrt(static_cast<double>(spin_count())) * rms_);
        std::vector<complex> out(amplitudes_.size());
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) out[i] = amplitudes_[i] * scale;
        return out;
    }

private:
    std::vector<complex> amplitudes_;
    double rms_ = 0.0;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Sampled electron density |psi(r_i)|^2 with quadrature weights.
class WavefunctionGrid {
public:
    WavefunctionGrid(std::vector<Point2> points, std::vector<double> densities, std::vector<double> weights)
        : points_(std::move(points)), densities_(std::move(densities)), weights_(std::move(weights)) {
        if (points_.size() != densities_.size() || points_.size() != weights_.size())
            throw DimensionError("grid points, densities and weights differ in length");
        for (double d : densities_)
            if (!(d >= 0.0)) throw InvalidParameter("grid density must be nonnegative");
        for (double w : weights_)
            if (!(w >= 0.0)) throw InvalidParameter("quadrature weight must be nonnegative");
    }

    std::span<const Point2> points() const noexcept { return points_; }
    std::span<const double> densities() const noexcept { return densities_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return points_.size(); }

private:
    std::vector<Point2> points_;
    std::vector<double> densities_;
    std::vector<double> weights_;
};

/// The g mode together with the Gram-Schmidt mode ghat orthogonal to it.
///
/// With s = |<1_g|1_h>| and c = sqrt(1 - s^2) the h mode decomposes as
///   h_normalized = e^{i h_phase} (s g_normalized + c ghat_normalized).
/// h_phase is 0 for real nonnegative overlaps.
struct OrthogonalModePair {
    double overlap = 0.0;
    double gs_norm = 1.0;  // (1 - s^2)^(-1/2)
    double h_phase = 0.0;
    CouplingProfile profile_g;
    CouplingProfile profile_ghat;  // stored with rms = 1

    double complement() const { return std::sqrt(1.0 - overlap * overlap); }
};

inline constexpr double kParallelCutoff = 1e-9;

/// <1_g|1_h> = (1 / (N gbar hbar)) sum_i g_i^* h_i.
inline complex overlap_from_profiles(const CouplingProfile& g, const CouplingProfile& h) {
    if (g.spin_count() != h.spin_count())
        throw DimensionError("profiles have different spin counts: " + std::to_string(g.spin_count()) + " vs " +
                             std::to_string(h.spin_count()));
    complex sum = 0.0;
    const auto ga = g.amplitudes();
    const auto ha = h.amplitudes();
    for (std::size_t i = 0; i < ga.size(); ++i) sum += std::conj(ga[i]) * ha[i];
    return sum / (static_cast<double>(g.spin_count()) * g.rms() * h.rms());
}

/// Coupling profile g_i ∝ |psi(r_i)|^2, weighted by sqrt(w_i) so that profile
/// overlaps approximate the continuum ratio
///   ∫ rho_g rho_h / sqrt(∫ rho_g^2 ∫ rho_h^2).
inline CouplingProfile profile_from_grid(const WavefunctionGrid& grid) {
    if (grid.size() == 0) throw DimensionError("empty wavefunction grid");
    const auto rho = grid.densities();
    const auto w = grid.weights();
    std::vector<complex> amplitudes(grid.size());
    bool any_positive = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        amplitudes[i] = std::sqrt(w[i]) * rho[i];
        any_positive = any_positive || amplitudes[i].real() > 0.0;
    }
    if (!any_positive) throw DegenerateProfileError("grid has no positive weighted density");
    return CouplingProfile(std::move(amplitudes));
}

/// Builds ghat = (1 - s^2)^(-1/2) (h - s g) on normalized amplitudes, with the
/// phase of <1_g|1_h> absorbed into ghat so the stored overlap is real and >= 0.
inline OrthogonalModePair gram_schmidt(const CouplingProfile& g, const CouplingProfile& h) {
    const complex raw = overlap_from_profiles(g, h);
    const double s = std::abs(raw);
    if (s > 1.0 - kParallelCutoff)
        throw DegeneracyError("modes are parallel to within 1e-9 (overlap " + std::to_string(s) + ")", s);
    const double phase = s > 0.0 ? std::arg(raw) : 0.0;
    const complex unphase = std::polar(1.0, -phase);
    const double norm = 1.0 / std::sqrt(1.0 - s * s);

    const auto gn = g.normalized();
    const auto hn = h.normalized();
    const double root_n = std::sqrt(static_cast<double>(g.spin_count()));
    std::vector<complex> ghat(gn.size());
    for (std::size_t i = 0; i < gn.size(); ++i) ghat[i] = root_n * norm * (hn[i] * unphase - s * gn[i]);
    return OrthogonalModePair{s, norm, phase, g, CouplingProfile(std::move(ghat))};
}

/// |<1_g|1_h>_vector - overlap_from_profiles(g, h)| where the single-excitation
/// states are expanded explicitly over the N singly-flipped ensemble states.
inline double exact_single_excitation_check(const CouplingProfile& g, const CouplingProfile& h) {
    if (g.spin_count() != h.spin_count()) throw DimensionError("profiles have different spin counts");
    const std::size_t n = g.spin_count();
    const double root_n = std::sqrt(static_cast<double>(n));

    // |1_g> = (1/sqrt(N)) sum_i (g_i / gbar) |0...1_i...0>; component i is
    // the amplitude on the state with only member i flipped.
    std::vector<complex> state_g(n), state_h(n);
    for (std::size_t i = 0; i < n; ++i) {
        state_g[i] = g.amplitudes()[i] / (root_n * g.rms());
        state_h[i] = h.amplitudes()[i] / (root_n * h.rms());
    }
    complex inner = 0.0;
    for (std::size_t i = 0; i < n; ++i) inner += std::conj(state_g[i]) * state_h[i];
    return std::abs(inner - overlap_from_profiles(g, h));
}

/// Densities of the 2D harmonic oscillator states psi_00 and psi_10
/// (dimensionless oscillator units) on an n x n midpoint grid over
/// [-extent, extent]^2 with uniform rectangle weights.
struct GridPair {
    WavefunctionGrid g;
    WavefunctionGrid h;
};

inline GridPair harmonic_oscillator_grid(std::size_t n, double extent) {
    if (n == 0) throw InvalidParameter("grid needs at least one point per axis");
    if (!(extent > 0.0)) throw InvalidParameter("grid extent must be positive");
    const double step = 2.0 * extent / static_cast<double>(n);
    const double weight = step * step;
    std::vector<Point2> points;
    std::vector<double> rho00, rho10;
    points.reserve(n * n);
    rho00.reserve(n * n);
    rho10.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -extent + (static_cast<double>(i) + 0.5) * step;
        for (std::size_t j = 0; j < n; ++j) {
            const double y = -extent + (static_cast<double>(j) + 0.5) * step;
            const double gauss = std::exp(-(x * x + y * y)) / std::numbers::pi;
            points.push_back({x, y});
            rho00.push_back(gauss);
            rho10.push_back(2.0 * x * x * gauss);
        }
    }
    std::vector<double> weights(n * n, weight);
    return GridPair{WavefunctionGrid(points, std::move(rho00), weights),
                    WavefunctionGrid(std::move(points), std::move(rho10), std::move(weights))};
}

}  // namespace collmem

#endif  // COLLMEM_MODES_HPP
