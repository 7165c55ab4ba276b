#pragma once

#include <Eigen/Dense>

#include <limits>

#include "cryospike/errors.hpp"

namespace cryospike {

/// Closed-form propagation of dx/dt = A x + b over arbitrary intervals.
///
/// The solution is evaluated exactly (to rounding) rather than stepped, so
/// interval length never affects accuracy. A spectral decomposition is used
/// when it reproduces A well and its eigenvector basis is well conditioned;
/// otherwise each call falls back to an augmented matrix exponential, which
/// also covers singular A (the drive term is handled in integral form and
/// never requires inverting A).
class AffinePropagator {
public:
    explicit AffinePropagator(Eigen::MatrixXd A);

    /// State after time dt starting from x0 under constant drive b = B u.
    [[nodiscard]] Eigen::VectorXd advance(const Eigen::VectorXd& x0,
                                          const Eigen::VectorXd& drive,
                                          double dt) const;

    /// Reciprocal of the fastest decay rate, +inf for marginal dynamics.
    [[nodiscard]] double min_time_constant() const { return rate_ > 0.0 ? 1.0 / rate_ : std::numeric_limits<double>::infinity(); }

    [[nodiscard]] bool uses_spectral_path() const { return spectral_; }
    [[nodiscard]] int dim() const { return static_cast<int>(A_.rows()); }

private:
    Eigen::MatrixXd A_;
    bool spectral_ = false;
    Eigen::VectorXcd lambda_;
    Eigen::MatrixXcd V_;
    Eigen::MatrixXcd Vinv_;
    double rate_ = 0.0;
};

} // namespace cryospike
