#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semsched/config.hpp"
#include "semsched/csv.hpp"
#include "semsched/errors.hpp"
#include "semsched/oracle.hpp"
#include "semsched/simulate.hpp"
#include "semsched/sweep.hpp"

namespace {

using namespace semsched;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitGrid = 4;

struct Options {
    std::string config_path;
    std::string policy_spec;
    std::string grid_path;
    std::string out_dir = ".";
    std::int64_t seed = -1;  // <0: use the config's seed list
};

std::filesystem::path out_file(const Options& opt, const char* name) {
    std::filesystem::create_directories(opt.out_dir);
    return std::filesystem::path(opt.out_dir) / name;
}

std::vector<std::uint64_t> effective_seeds(const ExperimentConfig& cfg,
                                           const Options& opt) {
    if (opt.seed >= 0) return {static_cast<std::uint64_t>(opt.seed)};
    return cfg.seeds;
}

int cmd_bounds(const Options& opt) {
    const ExperimentConfig cfg = load_experiment_config(opt.config_path);
    std::vector<double> lower(cfg.systems.size());
    std::vector<double> upper(cfg.systems.size());
    for (std::size_t g = 0; g < cfg.systems.size(); ++g) {
        try {
            const SpectralData spec = spectral_decompose(cfg.systems[g]);
            const MseKernels kernels = compute_kernels(spec, cfg.systems[g]);
            upper[g] = mse_upper_bound(kernels, spec);
            try {
                lower[g] = mse_lower_bound_constant(kernels, spec, cfg.delta,
                                                    cfg.epsilon);
            } catch (const DegenerateGeometricSumError&) {
                lower[g] = std::numeric_limits<double>::infinity();
            }
        } catch (const Error& e) {
            std::fprintf(stderr, "sensor %zu rejected: %s\n", g + 1, e.what());
            return kExitNumerical;
        }
        std::printf("sensor %zu: lower_bound=%s upper_bound=%s\n", g + 1,
                    format_full(lower[g]).c_str(), format_full(upper[g]).c_str());
    }
    write_bounds_csv(out_file(opt, "bounds.csv").string(), lower, upper);
    return kExitOk;
}

int cmd_simulate(const Options& opt) {
    const ExperimentConfig cfg = load_experiment_config(opt.config_path);
    const std::string spec_str =
        !opt.policy_spec.empty() ? opt.policy_spec : cfg.policy;
    if (spec_str.empty())
        throw ConfigError("no policy given (use --policy or the config file)");
    const PolicyVariant policy =
        parse_policy_spec(spec_str, static_cast<int>(cfg.systems.size()));

    const auto seeds = effective_seeds(cfg, opt);
    const std::size_t num_sensors = cfg.systems.size();
    std::vector<std::vector<double>> mse_runs;
    std::vector<ResultRow> rows(num_sensors);
    for (std::size_t g = 0; g < num_sensors; ++g)
        rows[g].sensor = static_cast<int>(g + 1);

    for (const auto seed : seeds) {
        const SimulationConfig sc = cfg.simulation(seed);
        const SimulationResult res =
            std::holds_alternative<CoordinatedPolicy>(policy)
                ? simulate_coordinated(sc, std::get<CoordinatedPolicy>(policy))
                : simulate_aloha(sc, std::get<AlohaPolicy>(policy));
        mse_runs.push_back(res.mse);
        for (std::size_t g = 0; g < num_sensors; ++g) {
            rows[g].aoi_mean += res.aoi_mean[g] / static_cast<double>(seeds.size());
            rows[g].successes += res.successes[g];
            rows[g].failures += res.failures[g];
        }
    }
    for (std::size_t g = 0; g < num_sensors; ++g) {
        double mean = 0.0;
        for (const auto& run : mse_runs) mean += run[g];
        mean /= static_cast<double>(seeds.size());
        double var = 0.0;
        for (const auto& run : mse_runs) var += (run[g] - mean) * (run[g] - mean);
        var = seeds.size() > 1 ? var / static_cast<double>(seeds.size() - 1) : 0.0;
        rows[g].mse = mean;
        rows[g].stderr_mse = std::sqrt(var / static_cast<double>(seeds.size()));
        std::printf("sensor %zu: mse=%s aoi_mean=%s successes=%lld failures=%lld\n",
                    g + 1, format_full(rows[g].mse).c_str(),
                    format_full(rows[g].aoi_mean).c_str(),
                    static_cast<long long>(rows[g].successes),
                    static_cast<long long>(rows[g].failures));
    }
    write_result_csv(out_file(opt, "result.csv").string(), rows);
    return kExitOk;
}

int cmd_sweep(const Options& opt) {
    const ExperimentConfig cfg = load_experiment_config(opt.config_path);
    ParameterGrid grid = load_grid(opt.grid_path, cfg.seeds);
    if (opt.seed >= 0) grid.seeds = {static_cast<std::uint64_t>(opt.seed)};

    const SimulationConfig base = cfg.simulation(0);
    const auto points = evaluate_grid(grid, base);
    write_points_csv(out_file(opt, "points.csv").string(), points);

    const Frontier frontier = make_frontier(points);
    write_frontier_csv(out_file(opt, "frontier.csv").string(), frontier.points,
                       frontier.hull);

    std::vector<AchievablePoint> bests;
    std::vector<std::vector<double>> alphas;
    for (const auto& alpha : cfg.weights) {
        try {
            bests.push_back(weighted_best(points, alpha));
            alphas.push_back(alpha);
        } catch (const AllInfiniteError&) {
            std::fprintf(stderr, "all points infinite for a weight vector; skipped\n");
        }
    }
    write_weighted_csv(out_file(opt, "weighted.csv").string(), alphas, bests);
    std::printf("evaluated %zu tuples (%zu pareto, %zu hull)\n", points.size(),
                frontier.points.size(), frontier.hull.size());
    return kExitOk;
}

int cmd_selfcheck(const Options& opt) {
    // Cross-validates the three independent routes to the loss integral on
    // random systems (and the config's systems when one is given).
    std::vector<LinearSystem> systems;
    Rng rng(opt.seed >= 0 ? static_cast<std::uint64_t>(opt.seed) : 7u);
    for (int i = 0; i < 25; ++i) {
        const int n = 1 + static_cast<int>(rng.uniform() * 4.0);
        Eigen::MatrixXd a(n, n), m(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                a(r, c) = 2.0 * rng.uniform() - 1.0;
                m(r, c) = 2.0 * rng.uniform() - 1.0;
            }
        const bool stable = i % 2 == 0;
        Eigen::VectorXcd eig = a.eigenvalues();
        double max_re = -1e300, min_re = 1e300;
        for (int r = 0; r < n; ++r) {
            max_re = std::max(max_re, eig(r).real());
            min_re = std::min(min_re, eig(r).real());
        }
        a -= Eigen::MatrixXd::Identity(n, n) *
             (stable ? max_re + 0.3 : min_re - 0.3);
        systems.push_back(make_system(a, m * m.transpose()));
    }
    if (!opt.config_path.empty()) {
        const ExperimentConfig cfg = load_experiment_config(opt.config_path);
        for (const auto& sys : cfg.systems) systems.push_back(sys);
    }

    int checked = 0;
    double worst_lyap = 0.0, worst_quad = 0.0;
    for (const auto& sys : systems) {
        SpectralData spec;
        try {
            spec = spectral_decompose(sys);
        } catch (const Error&) {
            continue;  // rejected systems are out of scope for the triangle
        }
        const MseKernels kernels = compute_kernels(spec, sys);
        const Eigen::MatrixXd sigma = lyapunov_solve(sys);
        const double lyap_err =
            (sigma + kernels.upsilon.real()).cwiseAbs().maxCoeff() /
            std::max(1.0, sigma.cwiseAbs().maxCoeff());
        const double lo = rng.uniform() * 2.0;
        const double hi = lo + 0.5 + rng.uniform() * 3.0;
        const double fast = packet_integrated_mse(kernels, lo, hi);
        const double slow = quadrature_L(sys, lo, hi);
        const double quad_err = std::abs(fast - slow) / std::max(1.0, std::abs(slow));
        worst_lyap = std::max(worst_lyap, lyap_err);
        worst_quad = std::max(worst_quad, quad_err);
        ++checked;
    }
    const bool ok = worst_lyap < 1e-8 && worst_quad < 1e-6 && checked > 0;
    std::printf("selfcheck: %d systems, lyapunov residual %.3g, quadrature residual %.3g -> %s\n",
                checked, worst_lyap, worst_quad, ok ? "ok" : "FAILED");
    return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semantic channel-access simulator for remote state estimation"};
    app.require_subcommand(1);

    Options opt;
    const auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* c = sub->add_option("--config", opt.config_path, "experiment config (JSON)");
        if (need_config) c->required();
        sub->add_option("--seed", opt.seed, "override the config's seed list");
        sub->add_option("--out", opt.out_dir, "output directory");
    };

    auto* bounds = app.add_subcommand("bounds", "analytic per-sensor MSE bounds");
    add_common(bounds, true);
    auto* simulate = app.add_subcommand("simulate", "run one policy");
    add_common(simulate, true);
    simulate->add_option("--policy", opt.policy_spec, "policy spec string");
    auto* sweep = app.add_subcommand("sweep", "evaluate a parameter grid");
    add_common(sweep, true);
    sweep->add_option("--grid", opt.grid_path, "grid file (JSON)")->required();
    auto* selfcheck = app.add_subcommand("selfcheck", "cross-validate the numerics");
    add_common(selfcheck, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (bounds->parsed()) return cmd_bounds(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        return cmd_selfcheck(opt);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const GridTooLargeError& e) {
        std::fprintf(stderr, "grid error: %s\n", e.what());
        return kExitGrid;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical rejection: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
