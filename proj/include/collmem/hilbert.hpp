#ifndef COLLMEM_HILBERT_HPP
#define COLLMEM_HILBERT_HPP

// Truncated central-spin ⊗ two-mode basis and the dense operators on it.

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "collmem/error.hpp"
#include "collmem/modes.hpp"

namespace collmem {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Spin { down, up };

struct BasisState {
    Spin spin = Spin::down;
    int n_g = 0;
    int n_ghat = 0;

    int total_excitation() const noexcept { return n_g + n_ghat + (spin == Spin::up ? 1 : 0); }
    auto key() const noexcept { return std::tuple(spin, n_g, n_ghat); }
    friend bool operator==(const BasisState&, const BasisState&) = default;
};

inline std::string to_string(const BasisState& s) {
    return std::string("|") + (s.spin == Spin::up ? "up" : "down") + "," + std::to_string(s.n_g) + "," +
           std::to_string(s.n_ghat) + ">";
}

/// All |spin, n_g, n_ghat> with total excitation <= cutoff, ordered by total
/// excitation, then spin down before up, then n_g descending.
class TruncatedBasis {
public:
    explicit TruncatedBasis(int cutoff) : cutoff_(cutoff) {
        if (cutoff < 0) throw InvalidParameter("basis cutoff must be nonnegative");
        for (int total = 0; total <= cutoff; ++total) {
            for (Spin spin : {Spin::down, Spin::up}) {
                const int bosons = total - (spin == Spin::up ? 1 : 0);
                if (bosons < 0) continue;
                for (int n_g = bosons; n_g >= 0; --n_g) {
                    const BasisState state{spin, n_g, bosons - n_g};
                    index_.emplace(state.key(), states_.size());
                    states_.push_back(state);
                }
            }
        }
    }

    int cutoff() const noexcept { return cutoff_; }
    std::size_t size() const noexcept { return states_.size(); }
    const std::vector<BasisState>& states() const noexcept { return states_; }
    const BasisState& operator[](std::size_t i) const { return states_.at(i); }

    std::optional<std::size_t> index_of(const BasisState& s) const {
        const auto it = index_.find(s.key());
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t at(Spin spin, int n_g, int n_ghat) const {
        const auto i = index_of({spin, n_g, n_ghat});
        if (!i) throw InvalidParameter("state " + to_string({spin, n_g, n_ghat}) + " outside the basis");
        return *i;
    }

    friend bool operator==(const TruncatedBasis& a, const TruncatedBasis& b) { return a.cutoff_ == b.cutoff_; }

private:
    int cutoff_;
    std::vector<BasisState> states_;
    std::map<std::tuple<Spin, int, int>, std::size_t> index_;
};

using BasisHandle = std::shared_ptr<const TruncatedBasis>;

inline BasisHandle build_basis(int cutoff = 2) { return std::make_shared<const TruncatedBasis>(cutoff); }

inline double hermiticity_defect(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

inline double unitarity_defect(const Matrix& m) {
    return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

inline constexpr double kOperatorTolerance = 1e-12;

/// Dense operator on a truncated basis. The hermitian/unitary flags are only
/// set by the checked factories, which verify them at the given tolerance.
class Operator {
public:
    Operator(BasisHandle basis, Matrix m) : basis_(std::move(basis)), m_(std::move(m)) {
        if (!basis_) throw InvalidParameter("operator needs a basis");
        const auto n = static_cast<Eigen::Index>(basis_->size());
        if (m_.rows() != n || m_.cols() != n)
            throw DimensionError("matrix is " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                                 " but the basis has " + std::to_string(n) + " states");
    }

    static Operator zero(BasisHandle basis) {
        const auto n = static_cast<Eigen::Index>(basis->size());
        return Operator(std::move(basis), Matrix::Zero(n, n));
    }
    static Operator identity(BasisHandle basis) {
        const auto n = static_cast<Eigen::Index>(basis->size());
        Operator op(std::move(basis), Matrix::Identity(n, n));
        op.hermitian_ = op.unitary_ = true;
        return op;
    }

    static Operator hermitian(BasisHandle basis, Matrix m, double tol = kOperatorTolerance) {
        Operator op(std::move(basis), std::move(m));
        const double defect = hermiticity_defect(op.m_);
        if (defect > tol) throw NotHermitian("operator deviates from hermitian by " + std::to_string(defect));
        op.hermitian_ = true;
        return op;
    }

    static Operator unitary(BasisHandle basis, Matrix m, double tol = kOperatorTolerance) {
        Operator op(std::move(basis), std::move(m));
        const double defect = unitarity_defect(op.m_);
        if (defect > tol) throw Error("operator deviates from unitary by " + std::to_string(defect));
        op.unitary_ = true;
        return op;
    }

    const BasisHandle& basis() const noexcept { return basis_; }
    const Matrix& matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return basis_->size(); }
    bool is_hermitian() const noexcept { return hermitian_; }
    bool is_unitary() const noexcept { return unitary_; }

    complex operator()(std::size_t row, std::size_t col) const {
        return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

    Operator adjoint() const {
        Operator op(basis_, m_.adjoint());
        op.hermitian_ = hermitian_;
        op.unitary_ = unitary_;
        return op;
    }

    friend Operator operator*(const Operator& a, const Operator& b) {
        require_same_basis(a, b);
        return Operator(a.basis_, a.m_ * b.m_);
    }
    friend Operator operator+(const Operator& a, const Operator& b) {
        require_same_basis(a, b);
        return Operator(a.basis_, a.m_ + b.m_);
    }
    friend Operator operator-(const Operator& a, const Operator& b) {
        require_same_basis(a, b);
        return Operator(a.basis_, a.m_ - b.m_);
    }
    friend Operator operator*(complex c, const Operator& a) { return Operator(a.basis_, c * a.m_); }
    friend Operator operator*(double c, const Operator& a) {
        Operator op(a.basis_, c * a.m_);
        op.hermitian_ = a.hermitian_;
        return op;
    }

    static void require_same_basis(const Operator& a, const Operator& b) {
        if (!(*a.basis_ == *b.basis_))
            throw BasisMismatch("operators live on bases with cutoffs " + std::to_string(a.basis_->cutoff()) +
                                " and " + std::to_string(b.basis_->cutoff()));
    }

private:
    BasisHandle basis_;
    Matrix m_;
    bool hermitian_ = false;
    bool unitary_ = false;
};

inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

/// Max-abs entrywise distance.
inline double distance(const Operator& a, const Operator& b) {
    Operator::require_same_basis(a, b);
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

struct LadderOperators {
    Operator S_plus, S_minus, S_z;
    Operator b_g, b_g_dag;
    Operator b_ghat, b_ghat_dag;
};

namespace detail {

// Matrix of the map |state> -> amplitude(state) |image(state)>; images that
// fall outside the basis are dropped.
template <class Map>
Operator from_action(const BasisHandle& basis, Map action) {
    const auto n = static_cast<Eigen::Index>(basis->size());
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t col = 0; col < basis->size(); ++col) {
        const auto [amplitude, image] = action((*basis)[col]);
        if (amplitude == 0.0) continue;
        if (const auto row = basis->index_of(image))
            m(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) += amplitude;
    }
    return Operator(basis, std::move(m));
}

}  // namespace detail

inline LadderOperators ladder_operators(const BasisHandle& basis) {
    using detail::from_action;
    auto s_plus = from_action(basis, [](BasisState s) {
        const double amp = s.spin == Spin::down ? 1.0 : 0.0;
        s.spin = Spin::up;
        return std::pair(amp, s);
    });
    auto s_z = from_action(basis, [](BasisState s) { return std::pair(s.spin == Spin::up ? 0.5 : -0.5, s); });
    auto b_g = from_action(basis, [](BasisState s) {
        const double amp = std::sqrt(static_cast<double>(s.n_g));
        s.n_g -= 1;
        return std::pair(amp, s);
    });
    auto b_ghat = from_action(basis, [](BasisState s) {
        const double amp = std::sqrt(static_cast<double>(s.n_ghat));
        s.n_ghat -= 1;
        return std::pair(amp, s);
    });
    auto s_minus = s_plus.adjoint();
    auto b_g_dag = b_g.adjoint();
    auto b_ghat_dag = b_ghat.adjoint();
    return {std::move(s_plus), std::move(s_minus), Operator::hermitian(basis, s_z.matrix()),
            std::move(b_g),    std::move(b_g_dag), std::move(b_ghat), std::move(b_ghat_dag)};
}

/// Total excitation number b_g^dag b_g + b_ghat^dag b_ghat + S_z + 1/2.
inline Operator excitation_number(const BasisHandle& basis) {
    const auto ops = ladder_operators(basis);
    const Operator half = 0.5 * Operator::identity(basis);
    return Operator::hermitian(basis, (ops.b_g_dag * ops.b_g + ops.b_ghat_dag * ops.b_ghat + ops.S_z + half).matrix());
}

inline void require_overlap_in_range(double s) {
    if (!(s >= 0.0 && s < 1.0)) throw InvalidParameter("mode overlap must lie in [0, 1), got " + std::to_string(s));
}

/// b_h = s b_g + sqrt(1 - s^2) b_ghat.
inline Operator build_h_mode(double overlap, const BasisHandle& basis) {
    require_overlap_in_range(overlap);
    const auto ops = ladder_operators(basis);
    return overlap * ops.b_g + std::sqrt(1.0 - overlap * overlap) * ops.b_ghat;
}

inline Operator build_h_mode(const OrthogonalModePair& pair, const BasisHandle& basis) {
    return build_h_mode(pair.overlap, basis);
}

/// Omega (S^+ b + S^- b^dag). The product S^+ b is formed with the lowering
/// operator acting first and the second term as its adjoint, so the result is
/// exact on every excitation sector kept by the truncation.
inline Operator flip_flop(double omega, const Operator& s_plus, const Operator& lowering) {
    const Operator forward = s_plus * lowering;
    return Operator::hermitian(forward.basis(), (omega * (forward + forward.adjoint())).matrix());
}

struct HamiltonianPair {
    Operator H_g;
    Operator H_h;
};

inline HamiltonianPair build_hamiltonians(double omega_g, double omega_h, double overlap, const BasisHandle& basis) {
    if (!(omega_g > 0.0) || !(omega_h > 0.0)) throw InvalidParameter("coupling rates must be positive");
    require_overlap_in_range(overlap);
    const auto ops = ladder_operators(basis);
    const Operator b_h = build_h_mode(overlap, basis);
    return {flip_flop(omega_g, ops.S_plus, ops.b_g), flip_flop(omega_h, ops.S_plus, b_h)};
}

}  // namespace collmem

#endif  // COLLMEM_HILBERT_HPP
