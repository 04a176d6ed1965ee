// Compares the OpenMP kernels against their serial reference paths and
// verifies that both produce identical numbers.
#include <chrono>
#include <cstdio>

#include "semsched/oracle.hpp"
#include "semsched/simulate.hpp"
#include "semsched/sweep.hpp"

using namespace semsched;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

SimulationConfig demo_config() {
    Eigen::MatrixXd a1(2, 2), d1(2, 2);
    a1 << -0.02, 0.0, 0.0, -0.03;
    d1 << 0.7, 0.2, 0.2, 0.6;
    Eigen::MatrixXd a2(2, 2), d2(2, 2);
    a2 << -0.1, 0.05, 0.0, -0.2;
    d2 << 1.0, 0.0, 0.0, 0.5;

    SimulationConfig cfg;
    cfg.systems = {make_system(a1, d1), make_system(a2, d2)};
    cfg.delta.value = 1.0;
    cfg.epsilon = 0.05;
    cfg.num_packets = 20000;
    return cfg;
}

}  // namespace

int main() {
    const SimulationConfig cfg = demo_config();

    ParameterGrid grid;
    grid.family = "individual-cap";
    grid.cap_values = {0.2, 0.4, 0.6, 0.8, 1.0};
    grid.seeds = {11, 12, 13, 14};

    auto t0 = std::chrono::steady_clock::now();
    const auto serial = evaluate_grid_serial(grid, cfg);
    const double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto parallel = evaluate_grid(grid, cfg, ExecPolicy::Parallel);
    const double t_parallel = seconds_since(t0);

    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i)
        identical = serial[i].mse == parallel[i].mse &&
                    serial[i].stderr_mse == parallel[i].stderr_mse;

    std::printf("evaluate_grid   %4zu tasks  serial %7.3fs  openmp %7.3fs  speedup %5.2fx  %s\n",
                serial.size() * grid.seeds.size(), t_serial, t_parallel,
                t_serial / t_parallel, identical ? "identical" : "MISMATCH");

    SimulationConfig trace_cfg = cfg;
    trace_cfg.num_packets = 4000;
    trace_cfg.record_events = true;
    trace_cfg.seed = 5;
    const SimulationResult run = simulate_coordinated(trace_cfg, round_robin(2));

    TrajectoryConfig tc;
    tc.horizon = run.total_time;
    tc.step = cfg.delta.value / 50.0;
    tc.trials = 8;
    tc.seed = 99;
    tc.check_step = false;

    t0 = std::chrono::steady_clock::now();
    const auto mc_serial =
        monte_carlo_mse(cfg.systems, run.events, tc, ExecPolicy::Serial);
    const double mc_t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto mc_parallel =
        monte_carlo_mse(cfg.systems, run.events, tc, ExecPolicy::Parallel);
    const double mc_t_parallel = seconds_since(t0);

    const bool mc_identical =
        mc_serial.mse == mc_parallel.mse && mc_serial.stderr_mse == mc_parallel.stderr_mse;
    std::printf("monte_carlo_mse %4d trials  serial %7.3fs  openmp %7.3fs  speedup %5.2fx  %s\n",
                tc.trials, mc_t_serial, mc_t_parallel, mc_t_serial / mc_t_parallel,
                mc_identical ? "identical" : "MISMATCH");

    return identical && mc_identical ? 0 : 1;
}
