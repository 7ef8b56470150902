#ifndef COLLMEM_DYNAMICS_HPP
#define COLLMEM_DYNAMICS_HPP

// Pulse-cycle dynamics: U_tau = e^{iH_h tau} e^{iH_g tau} e^{-iH_h tau} e^{-iH_g tau}
// and its N-fold repetition, which approximates e^{-iHT} with the
// beam-splitter generator H = [H_h, H_g] tau / (4i) and T = 4 N tau.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "collmem/error.hpp"
#include "collmem/hilbert.hpp"

namespace collmem {

inline constexpr double kSequenceTolerance = 1e-11;

/// exp(-i H t) for Hermitian H, via eigendecomposition.
inline Operator expm(const Operator& h, double t) {
    if (!h.is_hermitian()) {
        const double defect = hermiticity_defect(h.matrix());
        if (defect > kOperatorTolerance)
            throw NotHermitian("expm needs a hermitian generator (defect " + std::to_string(defect) + ")");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(h.matrix());
    if (eig.info() != Eigen::Success) throw Error("eigendecomposition failed");
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    Vector phases(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) phases(i) = std::polar(1.0, -lambda(i) * t);
    const Matrix& v = eig.eigenvectors();
    return Operator::unitary(h.basis(), v * phases.asDiagonal() * v.adjoint());
}

/// Rightmost factor e^{-iH_g tau} acts first.
inline Operator pulse_cycle(const Operator& h_g, const Operator& h_h, double tau) {
    Operator::require_same_basis(h_g, h_h);
    if (!(tau > 0.0)) throw InvalidParameter("pulse duration must be positive");
    const Matrix u = expm(h_h, -tau).matrix() * expm(h_g, -tau).matrix() * expm(h_h, tau).matrix() *
                     expm(h_g, tau).matrix();
    return Operator::unitary(h_g.basis(), u);
}

/// (U_tau)^N by repeated multiplication.
inline Operator sequence(const Operator& u_tau, int cycles) {
    if (cycles < 1) throw InvalidParameter("cycle count must be at least 1");
    if (!u_tau.is_unitary() && unitarity_defect(u_tau.matrix()) > kOperatorTolerance)
        throw InvalidParameter("cycle operator is not unitary");
    Matrix acc = u_tau.matrix();
    for (int i = 1; i < cycles; ++i) acc = u_tau.matrix() * acc;
    return Operator::unitary(u_tau.basis(), std::move(acc), kSequenceTolerance);
}

inline double complement_of(double overlap) {
    if (!(overlap >= 0.0)) throw InvalidParameter("mode overlap must be nonnegative");
    if (!(overlap < 1.0)) throw InvalidParameter("mode overlap must be below 1, got " + std::to_string(overlap));
    return std::sqrt(1.0 - overlap * overlap);
}

/// H = (tau / 2i) Omega_g Omega_h sqrt(1 - s^2) (b_g^dag b_ghat - b_g b_ghat^dag) S_z.
///
/// The result is cross-checked against [H_h, H_g] tau / (4i) built from the
/// flip-flop Hamiltonians; a mismatch beyond rounding throws.
inline Operator effective_hamiltonian(double omega_g, double omega_h, double overlap, double tau,
                                      const BasisHandle& basis) {
    const double c = complement_of(overlap);
    if (!(tau > 0.0)) throw InvalidParameter("pulse duration must be positive");
    const auto ops = ladder_operators(basis);
    // b_g b_ghat^dag is written as the adjoint of b_g^dag b_ghat; the modes
    // commute, so this keeps the lowering factor first under truncation.
    const Operator hop = ops.b_g_dag * ops.b_ghat;
    const complex prefactor = tau / complex(0.0, 2.0) * omega_g * omega_h * c;
    const Operator h = prefactor * ((hop - hop.adjoint()) * ops.S_z);

    const auto [h_g, h_h] = build_hamiltonians(omega_g, omega_h, overlap, basis);
    const Operator from_commutator = (tau / complex(0.0, 4.0)) * commutator(h_h, h_g);
    const double scale = std::max(1.0, tau * omega_g * omega_h);
    if (distance(h, from_commutator) > kOperatorTolerance * scale)
        throw Error("beam-splitter generator disagrees with the commutator form");
    return Operator::hermitian(basis, h.matrix(), kOperatorTolerance * scale);
}

/// theta = (tau / 4) Omega_g Omega_h sqrt(1 - s^2) T.
inline double rotation_angle(double omega_g, double omega_h, double overlap, double tau, double total) {
    return 0.25 * tau * omega_g * omega_h * complement_of(overlap) * total;
}

/// exp(-i H T): rotates |down,1,0> into cos(theta)|down,1,0> - sin(theta)|down,0,1>.
inline Operator ideal_swap(double omega_g, double omega_h, double overlap, double tau, double total,
                           const BasisHandle& basis) {
    return expm(effective_hamiltonian(omega_g, omega_h, overlap, tau, basis), total);
}

/// tau such that N cycles of duration 4 tau rotate by theta.
inline double tau_for_theta(double theta, int cycles, double omega_g, double omega_h, double overlap) {
    if (!(theta > 0.0)) throw InvalidParameter("rotation angle must be positive");
    if (cycles < 1) throw InvalidParameter("cycle count must be at least 1");
    const double c = complement_of(overlap);
    return std::sqrt(theta / (static_cast<double>(cycles) * omega_g * omega_h * c));
}

/// Total protocol time for a pi/2 swap, sqrt(8 pi N / (Omega_g Omega_h sqrt(1 - s^2))).
inline double total_time(int cycles, double omega_g, double omega_h, double overlap) {
    if (cycles < 1) throw InvalidParameter("cycle count must be at least 1");
    const double c = complement_of(overlap);
    return std::sqrt(8.0 * std::numbers::pi * static_cast<double>(cycles) / (omega_g * omega_h * c));
}

struct SequenceParams {
    double omega_g = 1.0;
    double omega_h = 1.0;
    double overlap = 0.0;
    int cycles = 1;
    double tau = 0.0;
    double theta = std::numbers::pi / 2;
    double total = 0.0;  // 4 N tau

    /// Chooses tau so that the effective rotation is exactly theta.
    static SequenceParams for_rotation(double overlap, int cycles, double theta = std::numbers::pi / 2,
                                       double omega_g = 1.0, double omega_h = 1.0) {
        if (!(omega_g > 0.0) || !(omega_h > 0.0)) throw InvalidParameter("coupling rates must be positive");
        SequenceParams p;
        p.omega_g = omega_g;
        p.omega_h = omega_h;
        p.overlap = overlap;
        p.cycles = cycles;
        p.theta = theta;
        p.tau = tau_for_theta(theta, cycles, omega_g, omega_h, overlap);
        p.total = 4.0 * cycles * p.tau;
        return p;
    }
};

struct Evolution {
    Operator actual;  // U_N
    Operator ideal;   // exp(-i H T)
};

inline Evolution evolve(const SequenceParams& p, const BasisHandle& basis) {
    const auto [h_g, h_h] = build_hamiltonians(p.omega_g, p.omega_h, p.overlap, basis);
    return {sequence(pulse_cycle(h_g, h_h, p.tau), p.cycles),
            ideal_swap(p.omega_g, p.omega_h, p.overlap, p.tau, p.total, basis)};
}

}  // namespace collmem

#endif  // COLLMEM_DYNAMICS_HPP
