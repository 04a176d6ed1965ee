#include "semsched/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace semsched {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // fixed newlines everywhere
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

}  // namespace

std::string format_full(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_bounds_csv(const std::string& path, const std::vector<double>& lower,
                      const std::vector<double>& upper) {
    auto out = open_out(path);
    out << "sensor,lower_bound,upper_bound\n";
    for (std::size_t g = 0; g < lower.size(); ++g)
        out << g + 1 << "," << format_full(lower[g]) << ","
            << format_full(upper[g]) << "\n";
}

void write_result_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    auto out = open_out(path);
    out << "sensor,mse,aoi_mean,stderr,successes,failures\n";
    for (const auto& r : rows)
        out << r.sensor << "," << format_full(r.mse) << ","
            << format_full(r.aoi_mean) << "," << format_full(r.stderr_mse) << ","
            << r.successes << "," << r.failures << "\n";
}

namespace {

void write_point_row(std::ofstream& out, const AchievablePoint& p, bool with_stderr,
                     int hull_flag) {
    out << '"' << p.params << '"';
    for (double v : p.mse) out << "," << format_full(v);
    if (with_stderr)
        for (double v : p.stderr_mse) out << "," << format_full(v);
    if (hull_flag >= 0) out << "," << hull_flag;
    out << "\n";
}

}  // namespace

void write_points_csv(const std::string& path,
                      const std::vector<AchievablePoint>& points) {
    auto out = open_out(path);
    const std::size_t num_sensors = points.empty() ? 0 : points.front().mse.size();
    out << "params";
    for (std::size_t g = 1; g <= num_sensors; ++g) out << ",mse_" << g;
    for (std::size_t g = 1; g <= num_sensors; ++g) out << ",stderr_" << g;
    out << "\n";
    for (const auto& p : points) write_point_row(out, p, true, -1);
}

void write_frontier_csv(const std::string& path,
                        const std::vector<AchievablePoint>& pareto,
                        const std::vector<AchievablePoint>& hull) {
    auto out = open_out(path);
    const std::size_t num_sensors = pareto.empty() ? 0 : pareto.front().mse.size();
    out << "params";
    for (std::size_t g = 1; g <= num_sensors; ++g) out << ",mse_" << g;
    out << ",hull\n";
    for (const auto& p : pareto) {
        bool on_hull = false;
        for (const auto& h : hull)
            if (h.params == p.params && h.mse == p.mse) on_hull = true;
        write_point_row(out, p, false, on_hull ? 1 : 0);
    }
}

void write_weighted_csv(const std::string& path,
                        const std::vector<std::vector<double>>& alphas,
                        const std::vector<AchievablePoint>& bests) {
    auto out = open_out(path);
    const std::size_t num_sensors = alphas.empty() ? 0 : alphas.front().size();
    for (std::size_t g = 1; g <= num_sensors; ++g)
        out << (g == 1 ? "" : ",") << "alpha_" << g;
    out << ",params,objective\n";
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        for (std::size_t g = 0; g < num_sensors; ++g)
            out << (g == 0 ? "" : ",") << format_full(alphas[i][g]);
        double obj = 0.0;
        for (std::size_t g = 0; g < num_sensors; ++g)
            obj += alphas[i][g] * bests[i].mse[g];
        out << ",\"" << bests[i].params << "\"," << format_full(obj) << "\n";
    }
}

}  // namespace semsched
