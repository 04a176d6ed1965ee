#pragma once

#include <string>
#include <vector>

#include "semsched/sweep.hpp"

namespace semsched {

/// Full-precision decimal ("%.17g"); infinities print as "inf".
std::string format_full(double value);

/// Seed-aggregated view of one simulate run, one row per sensor.
struct ResultRow {
    int sensor = 0;  // 1-based in the file
    double mse = 0.0;
    double aoi_mean = 0.0;
    double stderr_mse = 0.0;
    std::int64_t successes = 0;
    std::int64_t failures = 0;
};

// Writers produce byte-identical files for identical inputs.
void write_bounds_csv(const std::string& path, const std::vector<double>& lower,
                      const std::vector<double>& upper);
void write_result_csv(const std::string& path, const std::vector<ResultRow>& rows);
void write_points_csv(const std::string& path,
                      const std::vector<AchievablePoint>& points);
void write_frontier_csv(const std::string& path,
                        const std::vector<AchievablePoint>& pareto,
                        const std::vector<AchievablePoint>& hull);
void write_weighted_csv(const std::string& path,
                        const std::vector<std::vector<double>>& alphas,
                        const std::vector<AchievablePoint>& bests);

}  // namespace semsched
