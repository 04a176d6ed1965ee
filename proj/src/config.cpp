#include "semsched/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "semsched/errors.hpp"

namespace semsched {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!known.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

Eigen::MatrixXd parse_matrix(const json& rows, const std::string& what) {
    if (!rows.is_array() || rows.empty())
        throw ConfigError(what + " must be a non-empty array of rows");
    const std::size_t n = rows.size();
    Eigen::MatrixXd m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (!rows[r].is_array() || rows[r].size() != n)
            throw ConfigError(what + " must be square (row-major rows)");
        for (std::size_t c = 0; c < n; ++c) {
            if (!rows[r][c].is_number())
                throw ConfigError(what + " entries must be numbers");
            m(r, c) = rows[r][c].get<double>();
        }
    }
    return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---- policy spec grammar ----

std::vector<std::string> split_fields(const std::string& body) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : body) {
        if (ch == ',') {
            fields.push_back(current);
            current.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            current += ch;
        }
    }
    fields.push_back(current);
    return fields;
}

std::vector<std::string> parse_bracket_list(const std::string& text, std::size_t& pos,
                                            const std::string& spec) {
    if (pos >= text.size() || text[pos] != '[')
        throw ConfigError("expected '[' in policy spec '" + spec + "'");
    const std::size_t close = text.find(']', pos);
    if (close == std::string::npos)
        throw ConfigError("missing ']' in policy spec '" + spec + "'");
    const std::string body = text.substr(pos + 1, close - pos - 1);
    pos = close + 1;
    return split_fields(body);
}

std::uint32_t parse_trials(const std::string& field, const std::string& spec) {
    if (field == "inf") return kUnboundedTrials;
    try {
        std::size_t used = 0;
        const long long v = std::stoll(field, &used);
        if (used != field.size() || v < 1 || v >= kUnboundedTrials)
            throw std::invalid_argument(field);
        return static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("bad integer '" + field + "' in policy spec '" + spec + "'");
    }
}

double parse_real(const std::string& field, const std::string& spec) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + field + "' in policy spec '" + spec + "'");
    }
}

}  // namespace

PolicyVariant parse_policy_spec(const std::string& spec, int num_sensors) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos)
        throw ConfigError("policy spec '" + spec + "' has no parameter list");
    const std::string family = spec.substr(0, colon);
    std::size_t pos = colon + 1;

    const auto check_count = [&](std::size_t got) {
        if (static_cast<int>(got) != num_sensors)
            throw ConfigError("policy spec '" + spec + "' names " +
                              std::to_string(got) + " sensors, expected " +
                              std::to_string(num_sensors));
    };
    const auto expect_end = [&] {
        if (pos != spec.size())
            throw ConfigError("trailing characters in policy spec '" + spec + "'");
    };

    if (family == "max-trials" || family == "multiple-success") {
        const auto fields = parse_bracket_list(spec, pos, spec);
        expect_end();
        check_count(fields.size());
        CoordinatedPolicy p;
        p.kind = family == "max-trials" ? CoordinatedPolicy::Kind::MaxTrials
                                        : CoordinatedPolicy::Kind::MultipleSuccess;
        auto& dst = family == "max-trials" ? p.max_trials : p.success_quota;
        for (const auto& f : fields) {
            const std::uint32_t v = parse_trials(f, spec);
            if (family == "multiple-success" && v == kUnboundedTrials)
                throw ConfigError("multiple-success quotas must be finite");
            dst.push_back(v);
        }
        return p;
    }
    if (family == "individual-cap" || family == "threshold-adra") {
        const auto caps = parse_bracket_list(spec, pos, spec);
        AlohaPolicy p;
        p.kind = family == "individual-cap" ? AlohaPolicy::Kind::IndividualCap
                                            : AlohaPolicy::Kind::ThresholdAdra;
        check_count(caps.size());
        for (const auto& f : caps) {
            const double r = parse_real(f, spec);
            if (!(r > 0.0 && r <= 1.0))
                throw ConfigError("access probabilities must lie in (0,1]");
            p.cap.push_back(r);
        }
        if (family == "threshold-adra") {
            if (pos >= spec.size() || spec[pos] != ':')
                throw ConfigError("threshold-adra needs a second parameter list");
            ++pos;
            const auto taus = parse_bracket_list(spec, pos, spec);
            check_count(taus.size());
            for (const auto& f : taus) {
                const double t = parse_real(f, spec);
                if (!(t >= 0.0))
                    throw ConfigError("age thresholds must be nonnegative");
                p.threshold.push_back(t);
            }
        }
        expect_end();
        return p;
    }
    throw ConfigError("unknown policy family '" + family + "'");
}

ExperimentConfig load_experiment_config(const std::string& path) {
    const json j = load_json(path);
    if (!j.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(j,
                        {"systems", "delta", "epsilon", "num_packets", "seeds",
                         "policy", "weights", "output_dir"},
                        "config");

    ExperimentConfig cfg;
    if (!j.contains("systems") || !j["systems"].is_array() || j["systems"].empty())
        throw ConfigError("config needs a non-empty 'systems' array");
    for (const auto& sj : j["systems"]) {
        if (!sj.is_object()) throw ConfigError("each system must be an object");
        reject_unknown_keys(sj, {"drift", "diffusion"}, "system");
        if (!sj.contains("drift") || !sj.contains("diffusion"))
            throw ConfigError("each system needs 'drift' and 'diffusion'");
        try {
            cfg.systems.push_back(make_system(parse_matrix(sj["drift"], "drift"),
                                              parse_matrix(sj["diffusion"], "diffusion")));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("bad system: ") + e.what());
        }
    }

    cfg.delta = j.value("delta", 1.0);
    if (!(cfg.delta > 0.0)) throw ConfigError("'delta' must be positive");
    cfg.epsilon = j.value("epsilon", 0.05);
    if (!(cfg.epsilon >= 0.0 && cfg.epsilon < 1.0))
        throw ConfigError("'epsilon' must be in [0, 1)");
    cfg.num_packets = j.value("num_packets", std::int64_t{1});
    if (cfg.num_packets < 1) throw ConfigError("'num_packets' must be >= 1");

    if (j.contains("seeds")) {
        if (!j["seeds"].is_array() || j["seeds"].empty())
            throw ConfigError("'seeds' must be a non-empty array");
        for (const auto& s : j["seeds"]) {
            if (!s.is_number_integer()) throw ConfigError("seeds must be integers");
            cfg.seeds.push_back(s.get<std::uint64_t>());
        }
    } else {
        cfg.seeds = {1};
    }

    cfg.policy = j.value("policy", std::string{});
    if (!cfg.policy.empty())
        parse_policy_spec(cfg.policy, static_cast<int>(cfg.systems.size()));

    if (j.contains("weights")) {
        if (!j["weights"].is_array())
            throw ConfigError("'weights' must be an array of weight vectors");
        for (const auto& row : j["weights"]) {
            if (!row.is_array() || row.size() != cfg.systems.size())
                throw ConfigError("each weight vector needs one entry per sensor");
            std::vector<double> alpha;
            double sum = 0.0;
            for (const auto& a : row) {
                if (!a.is_number()) throw ConfigError("weights must be numbers");
                alpha.push_back(a.get<double>());
                sum += alpha.back();
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw ConfigError("weight vectors must sum to 1");
            cfg.weights.push_back(std::move(alpha));
        }
    }
    cfg.output_dir = j.value("output_dir", std::string{});
    return cfg;
}

void save_experiment_config(const ExperimentConfig& config, const std::string& path) {
    json j;
    j["systems"] = json::array();
    for (const auto& sys : config.systems)
        j["systems"].push_back({{"drift", matrix_to_json(sys.drift)},
                                {"diffusion", matrix_to_json(sys.diffusion)}});
    j["delta"] = config.delta;
    j["epsilon"] = config.epsilon;
    j["num_packets"] = config.num_packets;
    j["seeds"] = config.seeds;
    if (!config.policy.empty()) j["policy"] = config.policy;
    if (!config.weights.empty()) j["weights"] = config.weights;
    if (!config.output_dir.empty()) j["output_dir"] = config.output_dir;

    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

ParameterGrid load_grid(const std::string& path,
                        const std::vector<std::uint64_t>& default_seeds) {
    const json j = load_json(path);
    if (!j.is_object()) throw ConfigError("grid root must be an object");
    reject_unknown_keys(j,
                        {"family", "max_trials", "success_quota", "cap",
                         "threshold", "seeds", "max_points"},
                        "grid");
    if (!j.contains("family") || !j["family"].is_string())
        throw ConfigError("grid needs a 'family' string");

    ParameterGrid grid;
    grid.family = j["family"].get<std::string>();

    if (j.contains("max_trials"))
        for (const auto& v : j["max_trials"]) {
            if (v.is_string() && v.get<std::string>() == "inf")
                grid.max_trials_values.push_back(kUnboundedTrials);
            else if (v.is_number_integer() && v.get<std::int64_t>() >= 1)
                grid.max_trials_values.push_back(v.get<std::uint32_t>());
            else
                throw ConfigError("'max_trials' entries must be positive integers or \"inf\"");
        }
    if (j.contains("success_quota"))
        for (const auto& v : j["success_quota"]) {
            if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
                throw ConfigError("'success_quota' entries must be positive integers");
            grid.quota_values.push_back(v.get<std::uint32_t>());
        }
    if (j.contains("cap"))
        for (const auto& v : j["cap"]) {
            if (!v.is_number() || !(v.get<double>() > 0.0 && v.get<double>() <= 1.0))
                throw ConfigError("'cap' entries must lie in (0,1]");
            grid.cap_values.push_back(v.get<double>());
        }
    if (j.contains("threshold"))
        for (const auto& v : j["threshold"]) {
            if (!v.is_number() || !(v.get<double>() >= 0.0))
                throw ConfigError("'threshold' entries must be nonnegative");
            grid.threshold_values.push_back(v.get<double>());
        }
    if (j.contains("seeds")) {
        for (const auto& s : j["seeds"]) {
            if (!s.is_number_integer()) throw ConfigError("grid seeds must be integers");
            grid.seeds.push_back(s.get<std::uint64_t>());
        }
    } else {
        grid.seeds = default_seeds;
    }
    if (j.contains("max_points")) {
        if (!j["max_points"].is_number_integer() || j["max_points"].get<std::int64_t>() < 1)
            throw ConfigError("'max_points' must be a positive integer");
        grid.max_points = j["max_points"].get<std::size_t>();
    }
    return grid;
}

}  // namespace semsched
