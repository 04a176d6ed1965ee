#include "semsched/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <stdexcept>

#include "semsched/errors.hpp"

namespace semsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_param(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_param(std::uint32_t v) {
    return v == kUnboundedTrials ? "inf" : std::to_string(v);
}

template <typename T>
std::string bracket_list(const std::vector<T>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += format_param(values[i]);
    }
    return out + "]";
}

// Enumerates the cartesian power list^G as index tuples.
std::vector<std::vector<std::size_t>> cartesian_power(std::size_t base, int exponent,
                                                      std::size_t limit) {
    double size = 1.0;
    for (int i = 0; i < exponent; ++i) size *= static_cast<double>(base);
    if (size > static_cast<double>(limit))
        throw GridTooLargeError("grid has " + std::to_string(size) +
                                " tuples, cap is " + std::to_string(limit));
    std::vector<std::vector<std::size_t>> tuples;
    std::vector<std::size_t> idx(static_cast<std::size_t>(exponent), 0);
    while (true) {
        tuples.push_back(idx);
        int pos = exponent - 1;
        while (pos >= 0 && ++idx[pos] == base) {
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return tuples;
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

bool lex_less(const AchievablePoint& a, const AchievablePoint& b) {
    if (a.mse != b.mse) return a.mse < b.mse;
    return a.params < b.params;
}

}  // namespace

std::string policy_spec_string(const PolicyVariant& policy) {
    if (const auto* cp = std::get_if<CoordinatedPolicy>(&policy)) {
        if (cp->kind == CoordinatedPolicy::Kind::MaxTrials)
            return "max-trials:" + bracket_list(cp->max_trials);
        return "multiple-success:" + bracket_list(cp->success_quota);
    }
    const auto& ap = std::get<AlohaPolicy>(policy);
    if (ap.kind == AlohaPolicy::Kind::IndividualCap)
        return "individual-cap:" + bracket_list(ap.cap);
    return "threshold-adra:" + bracket_list(ap.cap) + ":" +
           bracket_list(ap.threshold);
}

std::vector<PolicyVariant> expand_grid(const ParameterGrid& grid, int num_sensors) {
    std::vector<PolicyVariant> out;
    if (grid.family == "max-trials" || grid.family == "multiple-success") {
        const auto& values = grid.family == "max-trials" ? grid.max_trials_values
                                                         : grid.quota_values;
        if (values.empty()) throw ConfigError("grid value list is empty");
        for (const auto& tuple : cartesian_power(values.size(), num_sensors,
                                                 grid.max_points)) {
            CoordinatedPolicy p;
            p.kind = grid.family == "max-trials"
                         ? CoordinatedPolicy::Kind::MaxTrials
                         : CoordinatedPolicy::Kind::MultipleSuccess;
            auto& dst = p.kind == CoordinatedPolicy::Kind::MaxTrials
                            ? p.max_trials
                            : p.success_quota;
            for (auto i : tuple) dst.push_back(values[i]);
            out.emplace_back(std::move(p));
        }
        return out;
    }
    if (grid.family == "individual-cap") {
        if (grid.cap_values.empty()) throw ConfigError("grid value list is empty");
        for (const auto& tuple : cartesian_power(grid.cap_values.size(), num_sensors,
                                                 grid.max_points)) {
            AlohaPolicy p;
            p.kind = AlohaPolicy::Kind::IndividualCap;
            for (auto i : tuple) p.cap.push_back(grid.cap_values[i]);
            out.emplace_back(std::move(p));
        }
        return out;
    }
    if (grid.family == "threshold-adra") {
        if (grid.cap_values.empty() || grid.threshold_values.empty())
            throw ConfigError("grid value list is empty");
        const std::size_t pairs = grid.cap_values.size() * grid.threshold_values.size();
        for (const auto& tuple : cartesian_power(pairs, num_sensors, grid.max_points)) {
            AlohaPolicy p;
            p.kind = AlohaPolicy::Kind::ThresholdAdra;
            for (auto i : tuple) {
                p.cap.push_back(grid.cap_values[i / grid.threshold_values.size()]);
                p.threshold.push_back(
                    grid.threshold_values[i % grid.threshold_values.size()]);
            }
            out.emplace_back(std::move(p));
        }
        return out;
    }
    throw ConfigError("unknown policy family '" + grid.family + "'");
}

namespace {

std::vector<AchievablePoint> evaluate_grid_impl(const ParameterGrid& grid,
                                                const SimulationConfig& base,
                                                bool parallel) {
    if (grid.seeds.empty()) throw ConfigError("grid needs at least one seed");
    const int num_sensors = static_cast<int>(base.systems.size());
    const auto policies = expand_grid(grid, num_sensors);
    const std::size_t num_seeds = grid.seeds.size();
    const std::size_t num_tasks = policies.size() * num_seeds;

    std::vector<std::vector<double>> runs(num_tasks);
    std::vector<std::exception_ptr> errors(num_tasks);
    const auto body = [&](std::size_t task) {
        try {
            SimulationConfig cfg = base;
            cfg.seed = grid.seeds[task % num_seeds];
            cfg.record_events = false;
            const auto& pv = policies[task / num_seeds];
            SimulationResult res =
                std::holds_alternative<CoordinatedPolicy>(pv)
                    ? simulate_coordinated(cfg, std::get<CoordinatedPolicy>(pv))
                    : simulate_aloha(cfg, std::get<AlohaPolicy>(pv));
            runs[task] = std::move(res.mse);
        } catch (...) {
            errors[task] = std::current_exception();
        }
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long task = 0; task < static_cast<long long>(num_tasks); ++task)
            body(static_cast<std::size_t>(task));
    } else {
        for (std::size_t task = 0; task < num_tasks; ++task) body(task);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    // Deterministic reduction in (tuple, seed) order.
    std::vector<AchievablePoint> points;
    points.reserve(policies.size());
    for (std::size_t p = 0; p < policies.size(); ++p) {
        AchievablePoint pt;
        pt.params = policy_spec_string(policies[p]);
        pt.mse.assign(num_sensors, 0.0);
        pt.stderr_mse.assign(num_sensors, 0.0);
        for (int g = 0; g < num_sensors; ++g) {
            double mean = 0.0;
            bool finite = true;
            for (std::size_t s = 0; s < num_seeds; ++s) {
                const double v = runs[p * num_seeds + s][g];
                if (!std::isfinite(v)) finite = false;
                mean += v;
            }
            if (!finite) {
                pt.mse[g] = kInf;
                pt.stderr_mse[g] = kInf;
                pt.infinite = true;
                continue;
            }
            mean /= static_cast<double>(num_seeds);
            double var = 0.0;
            for (std::size_t s = 0; s < num_seeds; ++s) {
                const double d = runs[p * num_seeds + s][g] - mean;
                var += d * d;
            }
            var = num_seeds > 1 ? var / static_cast<double>(num_seeds - 1) : 0.0;
            pt.mse[g] = mean;
            pt.stderr_mse[g] = std::sqrt(var / static_cast<double>(num_seeds));
        }
        points.push_back(std::move(pt));
    }
    return points;
}

}  // namespace

std::vector<AchievablePoint> evaluate_grid(const ParameterGrid& grid,
                                           const SimulationConfig& base,
                                           ExecPolicy exec) {
    return evaluate_grid_impl(grid, base, exec == ExecPolicy::Parallel);
}

std::vector<AchievablePoint> evaluate_grid_serial(const ParameterGrid& grid,
                                                  const SimulationConfig& base) {
    return evaluate_grid_impl(grid, base, false);
}

std::vector<AchievablePoint> pareto_filter(const std::vector<AchievablePoint>& points) {
    if (points.empty()) throw std::invalid_argument("need at least one point");
    std::vector<AchievablePoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(), lex_less);

    std::vector<AchievablePoint> kept;
    for (const auto& p : sorted) {
        bool drop = false;
        for (const auto& q : kept) {
            if (q.mse == p.mse || dominates(q.mse, p.mse)) {  // duplicates keep first
                drop = true;
                break;
            }
        }
        if (!drop) kept.push_back(p);
    }
    return kept;
}

std::vector<AchievablePoint> time_sharing_hull(const std::vector<AchievablePoint>& points) {
    if (points.empty()) throw std::invalid_argument("need at least one point");
    if (points.front().mse.size() != 2)
        throw DimensionUnsupportedError("time-sharing hull needs exactly 2 sensors");

    std::vector<AchievablePoint> finite;
    for (const auto& p : points)
        if (!p.infinite) finite.push_back(p);
    if (finite.empty()) return {};

    // Pareto points sorted by mse_1 give a strictly decreasing staircase;
    // the monotone chain keeps its convex (and collinear) vertices.
    std::vector<AchievablePoint> frontier = pareto_filter(finite);
    std::vector<AchievablePoint> hull;
    for (const auto& p : frontier) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2].mse;
            const auto& b = hull[hull.size() - 1].mse;
            const double cross = (b[0] - a[0]) * (p.mse[1] - b[1]) -
                                 (b[1] - a[1]) * (p.mse[0] - b[0]);
            if (cross < 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    return hull;
}

Frontier make_frontier(const std::vector<AchievablePoint>& points) {
    Frontier f;
    f.points = pareto_filter(points);
    if (!points.empty() && points.front().mse.size() == 2)
        f.hull = time_sharing_hull(points);
    return f;
}

AchievablePoint weighted_best(const std::vector<AchievablePoint>& points,
                              const std::vector<double>& alpha) {
    if (points.empty()) throw std::invalid_argument("need at least one point");
    const std::size_t num_sensors = points.front().mse.size();
    if (alpha.size() != num_sensors)
        throw std::invalid_argument("weight vector size mismatch");
    double sum = 0.0;
    for (double a : alpha) {
        if (a < 0.0) throw std::invalid_argument("weights must be nonnegative");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("weights must sum to 1");

    const AchievablePoint* best = nullptr;
    double best_obj = kInf;
    for (const auto& p : points) {
        if (p.infinite) continue;
        double obj = 0.0;
        for (std::size_t g = 0; g < num_sensors; ++g) obj += alpha[g] * p.mse[g];
        if (best == nullptr || obj < best_obj ||
            (obj == best_obj && lex_less(p, *best))) {
            best = &p;
            best_obj = obj;
        }
    }
    if (best == nullptr)
        throw AllInfiniteError("every candidate point has infinite MSE");
    return *best;
}

}  // namespace semsched
