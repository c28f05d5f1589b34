// Copyright 2026 The timebin-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "timebin/runner.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "timebin/contextuality.hpp"
#include "timebin/entangle.hpp"
#include "timebin/hom.hpp"
#include "timebin/qwalk.hpp"
#include "timebin/tomography.hpp"

namespace timebin::cli {

namespace {

using Json = nlohmann::ordered_json;

// Seeds of consecutive tomography targets are spaced so that the per-setting
// seeds (seed + 0..5) never overlap.
constexpr std::uint64_t kTargetSeedStride = 16;

std::string num(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", v);
    return buffer;
}

Json complex_array(const CVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(Json::array({v(i).real(), v(i).imag()}));
    return out;
}

Json complex_matrix(const CMatrix& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(complex_array(m.row(r).transpose()));
    return out;
}

// A table of rows plus the JSON result object for one experiment.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    Json results = Json::object();
};

Table run_hom_scan(const RunConfig& config, const HomScanParams& p) {
    Table t;
    t.columns = {"delay_ps", "p_antibunch", "p_bunch", "counts_antibunch", "counts_bunch"};
    const auto scan = hom_scan(p.target, p.reference, p.delays_ps, p.model, config.noise);
    Json points = Json::array();
    for (std::size_t i = 0; i < scan.size(); ++i) {
        const ScanPoint& point = scan[i];
        const CountRecord counts =
            simulate_counts(point.p_antibunch, HomSetting{p.reference, point.delay_ps, config.noise}, config.seed + i);
        t.rows.push_back({num(point.delay_ps), num(point.p_antibunch), num(point.p_bunch),
                          std::to_string(counts.antibunching), std::to_string(counts.bunching)});
        points.push_back({{"delay_ps", point.delay_ps},
                          {"p_antibunch", point.p_antibunch},
                          {"p_bunch", point.p_bunch},
                          {"counts_antibunch", counts.antibunching},
                          {"counts_bunch", counts.bunching}});
    }
    t.results["points"] = std::move(points);
    return t;
}

Table run_tomography_suite(const RunConfig& config, const TomographyParams& p) {
    Table t;
    t.columns = {"state_id", "fidelity", "purity_true", "purity_reconstructed", "converged", "iterations"};
    const MeasurementSchedule schedule = MeasurementSchedule::mub(config.noise);
    Json states = Json::array();
    double fidelity_sum = 0.0;
    for (std::size_t i = 0; i < p.targets.size(); ++i) {
        const SuiteState& target = p.targets[i];
        const TomographyResult r = run_tomography(target.rho, schedule, config.seed + kTargetSeedStride * i, p.mle);
        fidelity_sum += r.fidelity_to_target;
        t.rows.push_back({target.id, num(r.fidelity_to_target), num(target.rho.purity()), num(r.rho.purity()),
                          r.converged ? "true" : "false", std::to_string(r.iterations)});
        states.push_back({{"state_id", target.id},
                          {"fidelity", r.fidelity_to_target},
                          {"purity_true", target.rho.purity()},
                          {"purity_reconstructed", r.rho.purity()},
                          {"converged", r.converged},
                          {"iterations", r.iterations},
                          {"log_likelihood", r.log_likelihood},
                          {"rho", complex_matrix(r.rho.matrix())}});
    }
    t.results["mean_fidelity"] = fidelity_sum / static_cast<double>(p.targets.size());
    t.results["states"] = std::move(states);
    return t;
}

Table run_chsh(const RunConfig& config, const ChshParams& p) {
    Table t;
    t.columns = {"quantity", "value", "standard_error"};
    const ChshSettings settings = optimal_settings();
    const double analytic = chsh_value(p.state, settings);
    const ChshResult r = simulate_chsh(p.state, settings, p.shots_per_setting, config.seed, config.noise);
    const char* names[] = {"E_a0b0", "E_a0b1", "E_a1b0", "E_a1b1"};
    t.rows.push_back({"s_value", num(r.s_value), num(r.standard_error)});
    t.rows.push_back({"s_analytic", num(analytic), "0"});
    Json correlators = Json::object();
    for (std::size_t k = 0; k < 4; ++k) {
        t.rows.push_back({names[k], num(r.correlators[k]), ""});
        correlators[names[k]] = r.correlators[k];
    }
    t.results["s_value"] = r.s_value;
    t.results["standard_error"] = r.standard_error;
    t.results["s_analytic"] = analytic;
    t.results["classical_bound"] = 2.0;
    t.results["correlators"] = std::move(correlators);
    return t;
}

Table run_qwalk(const RunConfig& config, const QwalkParams& p) {
    Table t;
    t.columns = {"step", "theta", "phi1", "phi2"};
    SynthesisOptions options;
    options.success_weight = p.success_weight;
    const SynthesisResult r = synthesize(p.target, p.n_steps, p.restarts, config.seed, options);
    Json coins = Json::array();
    for (std::size_t k = 0; k < r.coins.size(); ++k) {
        const CoinParams& c = r.coins[k];
        t.rows.push_back({std::to_string(k), num(c.theta), num(c.phi1), num(c.phi2)});
        coins.push_back({{"step", k}, {"theta", c.theta}, {"phi1", c.phi1}, {"phi2", c.phi2}});
    }
    t.results["fidelity"] = r.fidelity;
    t.results["success_probability"] = r.success_probability;
    t.results["objective"] = r.objective;
    t.results["coins"] = std::move(coins);
    t.results["projection"] = complex_array(r.projection.amplitudes());
    t.results["walker"] = complex_array(r.walker.amplitudes());
    return t;
}

Table run_entangle(const RunConfig& config, const EntangleParams& p) {
    Table t;
    t.columns = {"alice_ref", "bob_ref", "p_joint"};
    const PureState pair = spdc_entangled_state(p.pump);
    const Eigen::MatrixXd table = correlation_table(pair, p.alice_refs, p.bob_refs, config.noise);
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < table.cols(); ++j) {
            t.rows.push_back({p.alice_labels[static_cast<std::size_t>(i)], p.bob_labels[static_cast<std::size_t>(j)],
                              num(table(i, j))});
            row.push_back(table(i, j));
        }
        rows.push_back(std::move(row));
    }
    t.results["pair_state"] = complex_array(pair.amplitudes());
    t.results["alice_refs"] = p.alice_labels;
    t.results["bob_refs"] = p.bob_labels;
    t.results["p_joint"] = std::move(rows);
    return t;
}

Table run_experiment(const RunConfig& config) {
    return std::visit(
        [&](const auto& params) -> Table {
            using T = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<T, HomScanParams>)
                return run_hom_scan(config, params);
            else if constexpr (std::is_same_v<T, TomographyParams>)
                return run_tomography_suite(config, params);
            else if constexpr (std::is_same_v<T, ChshParams>)
                return run_chsh(config, params);
            else if constexpr (std::is_same_v<T, QwalkParams>)
                return run_qwalk(config, params);
            else
                return run_entangle(config, params);
        },
        config.params);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

std::string render_csv(const RunConfig& config, const Table& t) {
    std::ostringstream out;
    out << "# experiment: " << to_string(config.experiment) << "\n";
    out << "# schema_version: " << kSchemaVersion << "\n";
    out << "# seed: " << config.seed << "\n";
    out << "# config: " << config.resolved.dump() << "\n";
    for (const auto& w : config.warnings) out << "# warning: " << w << "\n";
    for (auto it = t.results.begin(); it != t.results.end(); ++it)
        if (it.value().is_primitive()) out << "# " << it.key() << ": " << it.value().dump() << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
        out << "\n";
    }
    return out.str();
}

std::string render_json(const RunConfig& config, Table t) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["experiment"] = to_string(config.experiment);
    doc["seed"] = config.seed;
    doc["config"] = config.resolved;
    doc["warnings"] = config.warnings;
    doc["results"] = std::move(t.results);
    return doc.dump(2) + "\n";
}

}  // namespace

std::string render(const RunConfig& config) {
    Table t = run_experiment(config);
    return config.format == OutputFormat::Csv ? render_csv(config, t) : render_json(config, std::move(t));
}

int run(const RunConfig& config, std::ostream& diagnostics) {
    std::string text;
    try {
        text = render(config);
    } catch (const std::exception& e) {
        diagnostics << "error: " << to_string(config.experiment) << " failed: " << e.what() << "\n";
        return 2;
    }
    std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        diagnostics << "error: cannot open output file '" << config.output_path.string() << "' for writing\n";
        return 3;
    }
    file << text;
    file.close();
    if (!file) {
        diagnostics << "error: failed writing '" << config.output_path.string() << "'\n";
        return 3;
    }
    for (const auto& w : config.warnings) diagnostics << "warning: " << w << "\n";
    return 0;
}

}  // namespace timebin::cli
