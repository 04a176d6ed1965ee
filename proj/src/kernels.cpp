#include "semsched/kernels.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "semsched/errors.hpp"
#include "semsched/rng.hpp"

namespace semsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& x) {
    return 0.5 * (x + x.adjoint());
}

// Trace table: trace{ e^{A t} X e^{A^H t} } = sum_{m,n} g(m,n) exp(z(m,n) t)
// with g(m,n) = (U^{-1} X U^{-H})(m,n) * (U^H U)(n,m).
Eigen::MatrixXcd trace_table(const SpectralData& spec, const Eigen::MatrixXcd& x,
                             const Eigen::MatrixXcd& gram) {
    Eigen::MatrixXcd basis = spec.inv_eigvecs * x * spec.inv_eigvecs.adjoint();
    return basis.cwiseProduct(gram.transpose());
}

double checked_real(const std::complex<double>& value, double magnitude_scale) {
    if (std::abs(value.imag()) > 1e-8 * std::max(1.0, magnitude_scale))
        throw NegativeResultError("trace has non-real residue " +
                                  std::to_string(value.imag()));
    return value.real();
}

}  // namespace

MseKernels compute_kernels(const SpectralData& spec, const LinearSystem& system) {
    const int n = system.dim();
    MseKernels k;

    k.z.resize(n, n);
    k.b.resize(n, n);
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            k.z(m, j) = spec.eigvals(m) + std::conj(spec.eigvals(j));
            k.b(m, j) = 1.0 / k.z(m, j);
        }
    }

    const Eigen::MatrixXcd d_basis =
        spec.inv_eigvecs * system.diffusion * spec.inv_eigvecs.adjoint();
    k.upsilon = hermitize(spec.eigvecs * d_basis.cwiseProduct(k.b) * spec.eigvecs.adjoint());

    const Eigen::MatrixXcd y_basis =
        spec.inv_eigvecs * k.upsilon * spec.inv_eigvecs.adjoint();
    k.phi = hermitize(spec.eigvecs * y_basis.cwiseProduct(k.b) * spec.eigvecs.adjoint());

    const Eigen::MatrixXcd gram = spec.eigvecs.adjoint() * spec.eigvecs;
    k.g_upsilon = trace_table(spec, k.upsilon, gram);
    k.g_phi = trace_table(spec, k.phi, gram);
    k.trace_upsilon = k.upsilon.trace().real();
    return k;
}

double packet_integrated_mse(const MseKernels& kernels, double tau_lo, double tau_hi) {
    if (!(tau_lo >= 0.0) || !(tau_hi >= tau_lo))
        throw InvalidIntervalError("need 0 <= tau_lo <= tau_hi, got [" +
                                   std::to_string(tau_lo) + ", " +
                                   std::to_string(tau_hi) + "]");
    if (tau_lo == tau_hi) return 0.0;

    const int n = kernels.dim();
    std::complex<double> acc = 0.0;
    double magnitude = 0.0;
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            const std::complex<double> g = kernels.g_phi(m, j);
            const double growth =
                kernels.z(m, j).real() * tau_hi + std::log(std::abs(g) + 1e-300);
            if (growth > 700.0) return kInf;  // unstable system, huge age
            const std::complex<double> term =
                g * (std::exp(kernels.z(m, j) * tau_hi) -
                     std::exp(kernels.z(m, j) * tau_lo));
            acc += term;
            magnitude += std::abs(term);
        }
    }
    const double linear = kernels.trace_upsilon * (tau_hi - tau_lo);
    magnitude += std::abs(linear);

    double value = checked_real(acc, magnitude) - linear;
    if (!std::isfinite(value)) return kInf;
    if (value < 0.0) {
        if (value >= -1e-10 * std::max(1.0, magnitude)) return 0.0;
        throw NegativeResultError("loss integral is negative: " + std::to_string(value));
    }
    return value;
}

double instantaneous_mse(const MseKernels& kernels, double tau) {
    if (!(tau >= 0.0))
        throw InvalidIntervalError("age must be nonnegative");
    const int n = kernels.dim();
    std::complex<double> acc = 0.0;
    double magnitude = 0.0;
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            const std::complex<double> g = kernels.g_upsilon(m, j);
            const double growth =
                kernels.z(m, j).real() * tau + std::log(std::abs(g) + 1e-300);
            if (growth > 700.0) return kInf;
            const std::complex<double> term = g * std::exp(kernels.z(m, j) * tau);
            acc += term;
            magnitude += std::abs(term);
        }
    }
    magnitude += std::abs(kernels.trace_upsilon);
    double value = checked_real(acc, magnitude) - kernels.trace_upsilon;
    if (!std::isfinite(value)) return kInf;
    if (value < 0.0 && value >= -1e-10 * std::max(1.0, magnitude)) value = 0.0;
    return value;
}

double mse_upper_bound(const MseKernels& kernels, const SpectralData& spec) {
    for (int m = 0; m < spec.eigvals.size(); ++m)
        if (spec.eigvals(m).real() >= -1e-12) return kInf;
    return -kernels.trace_upsilon;
}

BoundData make_bound_data(const MseKernels& kernels, const SpectralData& spec,
                          double delta, double epsilon) {
    if (!(delta > 0.0)) throw InvalidIntervalError("delta must be positive");
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw InvalidIntervalError("epsilon must be in [0, 1)");

    const int n = kernels.dim();
    BoundData bd;
    bd.delta = delta;
    bd.epsilon = epsilon;
    bd.c.resize(n, n);
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            // |eps * exp(z delta)| >= 1 means the retransmission series for
            // this entry diverges; the printed ratio would be meaningless.
            if (epsilon * std::exp(kernels.z(m, j).real() * delta) >= 1.0 - 1e-12)
                throw DegenerateGeometricSumError(
                    "retransmission series diverges for eigenvalue pair (" +
                    std::to_string(m) + "," + std::to_string(j) + ")");
            const std::complex<double> denom =
                1.0 - epsilon * std::exp(kernels.z(m, j) * delta);
            bd.c(m, j) = (1.0 - epsilon) / denom;
        }
    }
    const Eigen::MatrixXcd phi_basis =
        spec.inv_eigvecs * kernels.phi * spec.inv_eigvecs.adjoint();
    bd.psi = hermitize(spec.eigvecs * phi_basis.cwiseProduct(bd.c) * spec.eigvecs.adjoint());
    return bd;
}

double mse_lower_bound_constant(const MseKernels& kernels, const SpectralData& spec,
                                double delta, double epsilon) {
    const BoundData bd = make_bound_data(kernels, spec, delta, epsilon);
    const int n = kernels.dim();

    // numerator = trace{ e^{2 A d} Psi e^{2 A^H d} - e^{A d} Phi e^{A^H d} }
    //             - (d / (1-eps)) trace{upsilon},
    // evaluated entry-wise in the eigenbasis (Psi's table is g_phi .* C).
    std::complex<double> acc = 0.0;
    double magnitude = 0.0;
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            const std::complex<double> term =
                kernels.g_phi(m, j) *
                (bd.c(m, j) * std::exp(kernels.z(m, j) * (2.0 * delta)) -
                 std::exp(kernels.z(m, j) * delta));
            acc += term;
            magnitude += std::abs(term);
        }
    }
    const double service = delta / (1.0 - epsilon);
    const double linear = kernels.trace_upsilon * service;
    magnitude += std::abs(linear);
    const double numerator = checked_real(acc, magnitude) - linear;
    return numerator / service;
}

double mse_lower_bound_general(const MseKernels& kernels, const DeltaModel& delta_model,
                               double epsilon, std::int64_t num_samples,
                               std::uint64_t seed) {
    if (num_samples < 1) throw InvalidIntervalError("num_samples must be >= 1");
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw InvalidIntervalError("epsilon must be in [0, 1)");

    Rng rng(derive_seed(seed, 0x1b));
    const double log_eps = epsilon > 0.0 ? std::log(epsilon) : 0.0;

    double loss_sum = 0.0;
    double service_sum = 0.0;
    for (std::int64_t i = 0; i < num_samples; ++i) {
        std::int64_t failures = 0;
        if (epsilon > 0.0) {
            const double u = rng.uniform();
            failures = static_cast<std::int64_t>(std::log1p(-u) / log_eps);
        }
        const double first = delta_model.sample(rng);
        double total = first;
        for (std::int64_t j = 0; j < failures + 1; ++j)
            total += delta_model.sample(rng);
        loss_sum += packet_integrated_mse(kernels, first, total);
        service_sum += total - first;
    }
    return loss_sum / service_sum;
}

}  // namespace semsched
