#include "semsched/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "semsched/errors.hpp"

namespace semsched {

LinearSystem make_system(Eigen::MatrixXd drift, Eigen::MatrixXd diffusion) {
    const auto n = drift.rows();
    if (n < 1 || drift.cols() != n)
        throw std::invalid_argument("drift must be a square matrix of dim >= 1");
    if (diffusion.rows() != n || diffusion.cols() != n)
        throw std::invalid_argument("diffusion must match the drift dimension");

    const double dnorm = diffusion.cwiseAbs().maxCoeff();
    const double asym = (diffusion - diffusion.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, dnorm))
        throw std::invalid_argument("diffusion must be symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diffusion);
    if (es.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, dnorm))
        throw std::invalid_argument("diffusion must be positive semidefinite");

    return LinearSystem{std::move(drift), std::move(diffusion)};
}

SpectralData spectral_decompose(const LinearSystem& system) {
    const int n = system.dim();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(system.drift);
    if (solver.info() != Eigen::Success)
        throw NonDiagonalizableError("eigendecomposition did not converge");

    // Fixed eigenvalue order keeps every downstream result reproducible.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXcd raw = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (raw(a).real() != raw(b).real()) return raw(a).real() > raw(b).real();
        if (raw(a).imag() != raw(b).imag()) return raw(a).imag() > raw(b).imag();
        return a < b;
    });

    SpectralData out;
    out.eigvals.resize(n);
    out.eigvecs.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.eigvals(i) = raw(order[i]);
        out.eigvecs.col(i) = solver.eigenvectors().col(order[i]);
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.eigvecs);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    out.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(out.condition < 1e10))
        throw NonDiagonalizableError("eigenvector matrix condition " +
                                     std::to_string(out.condition) + " exceeds 1e10");

    out.inv_eigvecs = out.eigvecs.partialPivLu().solve(
        Eigen::MatrixXcd::Identity(n, n));

    const double anorm = system.drift.cwiseAbs().maxCoeff();
    const double recon_err =
        (out.eigvecs * out.eigvals.asDiagonal() * out.inv_eigvecs - system.drift)
            .cwiseAbs()
            .maxCoeff();
    if (recon_err > 1e-8 * std::max(1.0, anorm))
        throw NonDiagonalizableError("eigenbasis reconstruction error " +
                                     std::to_string(recon_err));

    for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) {
            const std::complex<double> sum = out.eigvals(m) + std::conj(out.eigvals(k));
            const double scale =
                std::max(1.0, std::abs(out.eigvals(m)) + std::abs(out.eigvals(k)));
            if (std::abs(sum) < 1e-10 * scale)
                throw ResonanceError("eigenvalue pair (" + std::to_string(m) + "," +
                                     std::to_string(k) + ") sums to zero");
        }
    }
    return out;
}

}  // namespace semsched
