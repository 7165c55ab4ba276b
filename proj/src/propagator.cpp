#include "cryospike/propagator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace cryospike {

namespace {

/// (e^{lambda t} - 1) / lambda, stable through lambda -> 0.
std::complex<double> phi1(std::complex<double> lambda, double t) {
    const std::complex<double> w = lambda * t;
    if (std::abs(w) < 1e-4) {
        return t * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0))));
    }
    return (std::exp(w) - 1.0) / lambda;
}

} // namespace

AffinePropagator::AffinePropagator(Eigen::MatrixXd A) : A_(std::move(A)) {
    if (A_.rows() != A_.cols()) throw DimensionError("propagator needs a square matrix");
    const int n = dim();
    if (n == 0) return;

    Eigen::EigenSolver<Eigen::MatrixXd> es(A_);
    if (es.info() == Eigen::Success) {
        const Eigen::MatrixXcd V = es.eigenvectors();
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(V);
        if (lu.isInvertible()) {
            const Eigen::MatrixXcd Vinv = lu.inverse();
            const double cond = V.cwiseAbs().maxCoeff() * Vinv.cwiseAbs().maxCoeff() * n;
            const Eigen::MatrixXd rebuilt =
                (V * es.eigenvalues().asDiagonal() * Vinv).real();
            const double scale = std::max(A_.cwiseAbs().maxCoeff(), 1.0);
            if (cond <= 1e8 && (rebuilt - A_).cwiseAbs().maxCoeff() <= 1e-9 * scale) {
                spectral_ = true;
                lambda_ = es.eigenvalues();
                V_ = V;
                Vinv_ = Vinv;
            }
        }
    }
    const Eigen::VectorXcd evs = spectral_ ? lambda_ : Eigen::VectorXcd(A_.eigenvalues());
    for (int i = 0; i < n; ++i) rate_ = std::max(rate_, std::abs(evs(i).real()));
}

Eigen::VectorXd AffinePropagator::advance(const Eigen::VectorXd& x0,
                                          const Eigen::VectorXd& drive,
                                          double dt) const {
    const int n = dim();
    if (x0.size() != n || drive.size() != n)
        throw DimensionError("propagator state or drive has wrong length");
    if (n == 0) return Eigen::VectorXd(0);
    if (dt == 0.0) return x0;
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw NumericError("propagation interval must be finite and nonnegative", dt);

    if (spectral_) {
        const Eigen::VectorXcd c0 = Vinv_ * x0.cast<std::complex<double>>();
        const Eigen::VectorXcd cb = Vinv_ * drive.cast<std::complex<double>>();
        Eigen::VectorXcd out(n);
        for (int i = 0; i < n; ++i)
            out(i) = std::exp(lambda_(i) * dt) * c0(i) + phi1(lambda_(i), dt) * cb(i);
        return (V_ * out).real();
    }

    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = A_ * dt;
    aug.topRightCorner(n, 1) = drive * dt;
    const Eigen::MatrixXd E = aug.exp();
    return E.topLeftCorner(n, n) * x0 + E.topRightCorner(n, 1);
}

} // namespace cryospike
