#include "semsched/oracle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <functional>
#include <limits>
#include <string>

#include "semsched/errors.hpp"
#include "semsched/rng.hpp"
#include "semsched/spectral.hpp"

namespace semsched {

namespace {

// Scaled-and-squared Taylor series; exact to machine precision for the
// small-norm step matrices used here.
Eigen::MatrixXd expm(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm > 0.25) {
        norm *= 0.5;
        ++squarings;
    }
    const Eigen::MatrixXd t = m / std::pow(2.0, squarings);
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= 16; ++k) {
        term = (term * t / static_cast<double>(k)).eval();
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = (result * result).eval();
    return result;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

struct SensorTrial {
    double mse_h = 0.0;
    double mse_half = 0.0;
};

// One Euler-Maruyama trial of one sensor at step h: propagate the true state
// on a uniform grid, replay the delivery log into the estimator, accumulate
// the squared estimation error.
double run_trial(const LinearSystem& sys, const std::vector<DeliveryEvent>& events,
                 const Eigen::VectorXd& x0, const Eigen::MatrixXd& chol,
                 double step, double horizon, std::uint64_t trial_seed) {
    const int n = sys.dim();
    const std::int64_t num_steps = std::llround(horizon / step);
    const Eigen::MatrixXd step_exp = expm(sys.drift * step);

    Rng rng(trial_seed);
    Eigen::VectorXd x = x0;
    Eigen::VectorXd xhat = x0;  // receiver starts with a perfect estimate
    Eigen::VectorXd noise(n);

    // Pending packets: state snapshots taken at generation times.
    std::size_t next_gen = 0;
    std::size_t next_delivery = 0;
    std::vector<Eigen::VectorXd> snapshots(events.size());
    std::vector<Eigen::MatrixXd> delay_exp_cache;
    std::vector<double> delay_cache;
    const auto delay_propagator = [&](double delay) -> const Eigen::MatrixXd& {
        for (std::size_t i = 0; i < delay_cache.size(); ++i)
            if (delay_cache[i] == delay) return delay_exp_cache[i];
        delay_cache.push_back(delay);
        delay_exp_cache.push_back(expm(sys.drift * delay));
        return delay_exp_cache.back();
    };

    double err_acc = 0.0;
    for (std::int64_t i = 0; i < num_steps; ++i) {
        while (next_delivery < events.size() &&
               std::llround(events[next_delivery].delivery_time / step) <= i) {
            const auto& ev = events[next_delivery];
            xhat = delay_propagator(ev.delivery_time - ev.generation_time) *
                   snapshots[next_delivery];
            ++next_delivery;
        }
        while (next_gen < events.size() &&
               std::llround(events[next_gen].generation_time / step) <= i) {
            snapshots[next_gen] = x;
            ++next_gen;
        }
        err_acc += (xhat - x).squaredNorm();

        for (int j = 0; j < n; ++j) noise(j) = rng.normal();
        x += step * (sys.drift * x) + std::sqrt(step) * (chol * noise);
        xhat = (step_exp * xhat).eval();
    }
    return err_acc * step / horizon;
}

}  // namespace

Eigen::MatrixXd lyapunov_solve(const LinearSystem& system) {
    const int n = system.dim();
    Eigen::MatrixXd k(n * n, n * n);
    k.setZero();
    // vec(A S) = (I kron A) vec(S), vec(S A^T) = (A kron I) vec(S)
    for (int c = 0; c < n; ++c)
        k.block(c * n, c * n, n, n) += system.drift;
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
            for (int j = 0; j < n; ++j)
                k(c * n + r, j * n + r) += system.drift(c, j);

    Eigen::VectorXd rhs(n * n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) rhs(c * n + r) = -system.diffusion(r, c);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
    if (!lu.isInvertible())
        throw SingularSystemError("vectorized Lyapunov system is singular");
    const Eigen::VectorXd sol = lu.solve(rhs);

    Eigen::MatrixXd sigma(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) sigma(r, c) = sol(c * n + r);
    return 0.5 * (sigma + sigma.transpose());
}

double quadrature_L(const LinearSystem& system, double tau_lo, double tau_hi) {
    if (!(tau_lo >= 0.0) || !(tau_hi >= tau_lo))
        throw InvalidIntervalError("need 0 <= tau_lo <= tau_hi");
    if (tau_lo == tau_hi) return 0.0;

    const SpectralData spec = spectral_decompose(system);
    const int n = system.dim();
    const Eigen::MatrixXcd d_basis =
        spec.inv_eigvecs * system.diffusion * spec.inv_eigvecs.adjoint();
    const Eigen::MatrixXcd gram = spec.eigvecs.adjoint() * spec.eigvecs;

    Eigen::MatrixXcd coef(n, n), z(n, n);
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            z(m, j) = spec.eigvals(m) + std::conj(spec.eigvals(j));
            coef(m, j) = d_basis(m, j) * gram(j, m);
        }
    }

    // Error variance at age tau, straight from the noise covariance:
    // trace{ int_0^tau e^{A s} D e^{A^H s} ds } entrywise in the eigenbasis.
    const auto variance = [&](double tau) {
        std::complex<double> acc = 0.0;
        for (int m = 0; m < n; ++m)
            for (int j = 0; j < n; ++j)
                acc += coef(m, j) * (std::exp(z(m, j) * tau) - 1.0) / z(m, j);
        return acc.real();
    };

    const double fa = variance(tau_lo);
    const double fb = variance(tau_hi);
    const double fm = variance(0.5 * (tau_lo + tau_hi));
    const double whole = (tau_hi - tau_lo) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = 1e-9 + 1e-10 * std::abs(whole);
    return adaptive_simpson(variance, tau_lo, tau_hi, fa, fm, fb, whole, tol, 40);
}

MonteCarloMse monte_carlo_mse(const std::vector<LinearSystem>& systems,
                              const std::vector<DeliveryEvent>& schedule_trace,
                              const TrajectoryConfig& config, ExecPolicy exec) {
    if (!(config.horizon > 0.0)) throw InvalidIntervalError("horizon must be positive");
    if (config.trials < 1) throw InvalidIntervalError("trials must be >= 1");

    const int num_sensors = static_cast<int>(systems.size());
    double step = config.step;
    if (step <= 0.0) {
        double min_delay = config.horizon / 5000.0;
        for (const auto& ev : schedule_trace)
            min_delay = std::min(min_delay, ev.delivery_time - ev.generation_time);
        step = min_delay / 50.0;
    }

    std::vector<std::vector<DeliveryEvent>> per_sensor(num_sensors);
    for (const auto& ev : schedule_trace) {
        if (ev.sensor < 0 || ev.sensor >= num_sensors)
            throw InvalidIntervalError("event log names unknown sensor " +
                                       std::to_string(ev.sensor));
        per_sensor[ev.sensor].push_back(ev);
    }
    for (auto& evs : per_sensor)
        std::sort(evs.begin(), evs.end(), [](const auto& a, const auto& b) {
            return a.generation_time < b.generation_time;
        });

    MonteCarloMse out;
    out.mse.resize(num_sensors);
    out.stderr_mse.resize(num_sensors);

    for (int g = 0; g < num_sensors; ++g) {
        const auto& sys = systems[g];
        const int n = sys.dim();
        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
        if (!config.initial_states.empty()) {
            if (static_cast<int>(config.initial_states.size()) <= g ||
                config.initial_states[g].size() != n)
                throw InvalidIntervalError("initial state dimension mismatch");
            x0 = config.initial_states[g];
        }
        // jitter keeps the factorization alive for semidefinite diffusion
        Eigen::MatrixXd d = sys.diffusion +
                            1e-12 * Eigen::MatrixXd::Identity(n, n);
        Eigen::LLT<Eigen::MatrixXd> llt(d);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("diffusion is not positive semidefinite");
        const Eigen::MatrixXd chol = llt.matrixL();

        std::vector<SensorTrial> trials(config.trials);
        std::vector<std::exception_ptr> errors(config.trials);
        const auto body = [&](int t) {
            try {
                const std::uint64_t s1 =
                    derive_seed(config.seed, 0x7000u + 31u * g + static_cast<unsigned>(t));
                const std::uint64_t s2 =
                    derive_seed(config.seed, 0xA000u + 31u * g + static_cast<unsigned>(t));
                trials[t].mse_h = run_trial(sys, per_sensor[g], x0, chol, step,
                                            config.horizon, s1);
                if (config.check_step)
                    trials[t].mse_half = run_trial(sys, per_sensor[g], x0, chol,
                                                   0.5 * step, config.horizon, s2);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        };
        if (exec == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
            for (int t = 0; t < config.trials; ++t) body(t);
        } else {
            for (int t = 0; t < config.trials; ++t) body(t);
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);

        const auto stats = [&](auto pick) {
            double mean = 0.0;
            for (const auto& tr : trials) mean += pick(tr);
            mean /= config.trials;
            double var = 0.0;
            for (const auto& tr : trials) {
                const double d2 = pick(tr) - mean;
                var += d2 * d2;
            }
            var = config.trials > 1 ? var / (config.trials - 1) : 0.0;
            return std::pair<double, double>(mean, std::sqrt(var / config.trials));
        };
        const auto [mean_h, se_h] = stats([](const SensorTrial& t) { return t.mse_h; });
        out.mse[g] = mean_h;
        out.stderr_mse[g] = se_h;

        if (config.check_step) {
            const auto [mean_half, se_half] =
                stats([](const SensorTrial& t) { return t.mse_half; });
            const double se = std::sqrt(se_h * se_h + se_half * se_half);
            if (std::abs(mean_h - mean_half) > 2.0 * se)
                throw StepTooCoarseError(
                    "halving the step moved sensor " + std::to_string(g) +
                    " from " + std::to_string(mean_h) + " to " +
                    std::to_string(mean_half));
        }
    }
    return out;
}

}  // namespace semsched
