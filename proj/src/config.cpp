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

#include "timebin/config.hpp"

#include <cmath>
#include <sstream>

#include "timebin/contextuality.hpp"

namespace timebin::cli {

namespace {

using Json = nlohmann::ordered_json;
using Kind = ConfigError::Kind;

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

std::string format_number(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

double get_number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(Kind::WrongType, path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(Kind::OutOfRange, path, "must be finite");
    return v;
}

std::uint64_t get_count(const Json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        if (j.get<std::int64_t>() < 0) throw ConfigError(Kind::OutOfRange, path, "must be non-negative");
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (v >= 0.0 && v == std::floor(v) && v < 1.8e19) return static_cast<std::uint64_t>(v);
        throw ConfigError(Kind::OutOfRange, path, "must be a non-negative integer");
    }
    throw ConfigError(Kind::WrongType, path, "expected a non-negative integer");
}

std::string get_string(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(Kind::WrongType, path, "expected a string");
    return j.get<std::string>();
}

// Reads `obj[key]`, inserting `fallback` into the resolved object when absent.
Json& field_or(Json& obj, const std::string& key, Json fallback) {
    if (!obj.contains(key)) obj[key] = std::move(fallback);
    return obj[key];
}

void require_range(double v, double lo, double hi, const std::string& path, bool lo_open = false) {
    const bool ok = (lo_open ? v > lo : v >= lo) && v <= hi;
    if (!ok)
        throw ConfigError(Kind::OutOfRange, path,
                          "must lie in " + std::string(lo_open ? "(" : "[") + format_number(lo) + ", " +
                              format_number(hi) + "] (got " + format_number(v) + ")");
}

// ---------------------------------------------------------------------------
// States

struct StateContext {
    std::vector<std::string>* warnings;
    std::size_t dim_hint = 2;
};

Complex parse_complex(const Json& j, const std::string& path) {
    if (j.is_number()) return Complex(get_number(j, path), 0.0);
    if (j.is_array() && j.size() == 2)
        return Complex(get_number(j[0], index_path(path, 0)), get_number(j[1], index_path(path, 1)));
    throw ConfigError(Kind::WrongType, path, "amplitudes must be numbers or [re, im] pairs");
}

PureState named_state(const std::string& name, const std::string& path, std::size_t dim_hint) {
    if (name == "t0" && dim_hint <= 2) return states::t(0);
    if (name == "t1" && dim_hint <= 2) return states::t(1);
    if (name == "plus") return states::plus();
    if (name == "minus") return states::minus();
    if (name == "plus_i") return states::plus_i();
    if (name == "minus_i") return states::minus_i();
    if (name == "H") return states::horizontal();
    if (name == "V") return states::vertical();
    if (name == "hybrid") return hybrid_entangled_state();
    if (name.size() > 1 && name[0] == 't' && name.find_first_not_of("0123456789", 1) == std::string::npos) {
        const std::size_t k = std::stoul(name.substr(1));
        return states::t(k, std::max(dim_hint, k + 1));
    }
    throw ConfigError(Kind::WrongType, path, "unknown state name '" + name + "'");
}

PureState parse_pure(Json& j, const std::string& path, const StateContext& ctx) {
    if (j.is_string()) return named_state(j.get<std::string>(), path, ctx.dim_hint);
    if (!j.is_array() || j.empty()) throw ConfigError(Kind::WrongType, path, "expected a state name or amplitude list");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i], index_path(path, i));
    const double norm = v.norm();
    if (!(norm > 1e-12) || !std::isfinite(norm))
        throw ConfigError(Kind::NonNormalizable, path, "amplitudes cannot be normalised (zero norm)");
    if (std::abs(norm - 1.0) > kNormTolerance) {
        ctx.warnings->push_back(path + ": amplitudes normalised (input norm " + format_number(norm) + ")");
        v /= norm;
        Json normalised = Json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) normalised.push_back(Json::array({v(i).real(), v(i).imag()}));
        j = std::move(normalised);
    }
    return PureState::normalized(std::move(v));
}

DensityMatrix parse_density(Json& j, const std::string& path, const StateContext& ctx) {
    if (!j.is_object()) return DensityMatrix(parse_pure(j, path, ctx));
    if (j.contains("mixture")) {
        Json& parts = j["mixture"];
        const std::string mpath = join(path, "mixture");
        if (!parts.is_array() || parts.empty())
            throw ConfigError(Kind::WrongType, mpath, "expected a non-empty list of {state, weight}");
        std::vector<std::pair<DensityMatrix, double>> components;
        double total = 0.0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const std::string ipath = index_path(mpath, i);
            if (!parts[i].is_object() || !parts[i].contains("state") || !parts[i].contains("weight"))
                throw ConfigError(Kind::Missing, ipath, "mixture entries need 'state' and 'weight'");
            const double w = get_number(parts[i]["weight"], join(ipath, "weight"));
            if (w < 0.0) throw ConfigError(Kind::OutOfRange, join(ipath, "weight"), "must be >= 0");
            components.emplace_back(parse_density(parts[i]["state"], join(ipath, "state"), ctx), w);
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw ConfigError(Kind::OutOfRange, mpath, "weights must sum to 1 (got " + format_number(total) + ")");
        try {
            return convex_mixture(components);
        } catch (const Error& e) {
            throw ConfigError(Kind::OutOfRange, mpath, e.what());
        }
    }
    if (j.contains("white_noise")) {
        const double v = get_number(j["white_noise"], join(path, "white_noise"));
        require_range(v, 0.0, 1.0, join(path, "white_noise"));
        if (!j.contains("state")) throw ConfigError(Kind::Missing, join(path, "state"), "required with white_noise");
        return white_noise_mixture(parse_pure(j["state"], join(path, "state"), ctx), v);
    }
    throw ConfigError(Kind::WrongType, path, "expected a state, {mixture: ...} or {white_noise: v, state: ...}");
}

std::string state_label(const Json& j, std::size_t index) {
    if (j.is_string()) return j.get<std::string>();
    return "ref_" + std::to_string(index);
}

// ---------------------------------------------------------------------------
// Per-experiment parameters

TomographyParams parse_tomography(Json& params, const NoiseModel&, std::uint64_t seed, std::vector<std::string>& warnings) {
    TomographyParams out;
    StateContext ctx{&warnings, 2};
    const std::string norm = get_string(field_or(params, "normalization", "complementary-pairs"), "params.normalization");
    if (norm == "complementary-pairs")
        out.mle.normalization = Normalization::ComplementaryPairs;
    else if (norm == "known-intensity")
        out.mle.normalization = Normalization::KnownIntensity;
    else
        throw ConfigError(Kind::OutOfRange, "params.normalization", "must be 'complementary-pairs' or 'known-intensity'");

    const bool has_targets = params.contains("targets");
    const bool has_suite = params.contains("suite");
    const bool has_random = params.contains("random_pure");
    if (!has_targets && !has_suite && !has_random) params["suite"] = "standard";

    if (params.contains("suite")) {
        const std::string suite = get_string(params["suite"], "params.suite");
        if (suite != "standard") throw ConfigError(Kind::OutOfRange, "params.suite", "only 'standard' is available");
        const std::uint64_t suite_seed = get_count(field_or(params, "suite_seed", seed), "params.suite_seed");
        auto states = standard_suite(suite_seed);
        out.targets.insert(out.targets.end(), states.begin(), states.end());
    }
    if (has_random) {
        const std::uint64_t n = get_count(params["random_pure"], "params.random_pure");
        if (n == 0 || n > 100000) throw ConfigError(Kind::OutOfRange, "params.random_pure", "must lie in [1, 100000]");
        const std::uint64_t base = get_count(field_or(params, "random_seed", seed), "params.random_seed");
        for (std::uint64_t i = 0; i < n; ++i)
            out.targets.push_back({"random_" + std::to_string(i), DensityMatrix(random_pure_state(2, base + i))});
    }
    if (has_targets) {
        Json& targets = params["targets"];
        if (!targets.is_array() || targets.empty())
            throw ConfigError(Kind::WrongType, "params.targets", "expected a non-empty list");
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const std::string path = index_path("params.targets", i);
            Json& entry = targets[i];
            std::string id = state_label(entry, i);
            DensityMatrix rho = [&] {
                if (entry.is_object() && entry.contains("id")) {
                    id = get_string(entry["id"], join(path, "id"));
                    if (!entry.contains("state")) throw ConfigError(Kind::Missing, join(path, "state"), "required");
                    return parse_density(entry["state"], join(path, "state"), ctx);
                }
                return parse_density(entry, path, ctx);
            }();
            if (rho.dim() != 2)
                throw ConfigError(Kind::OutOfRange, path, "tomography targets must be time-bin qubits");
            out.targets.push_back({id, rho});
        }
    }
    return out;
}

ChshParams parse_chsh(Json& params, std::vector<std::string>& warnings) {
    StateContext ctx{&warnings, 4};
    DensityMatrix state = parse_density(field_or(params, "state", "hybrid"), "params.state", ctx);
    const double v = get_number(field_or(params, "white_noise_visibility", 1.0), "params.white_noise_visibility");
    require_range(v, 0.0, 1.0, "params.white_noise_visibility");
    if (state.dim() != 4)
        throw ConfigError(Kind::OutOfRange, "params.state", "CHSH states must be 4-dimensional (time x polarization)");
    if (v < 1.0) {
        const CMatrix mixed = v * state.matrix() + (1.0 - v) * CMatrix::Identity(4, 4) / 4.0;
        state = DensityMatrix(hermitian_part(mixed));
    }
    const std::uint64_t shots = get_count(field_or(params, "shots_per_setting", 1000000), "params.shots_per_setting");
    if (shots < 1) throw ConfigError(Kind::OutOfRange, "params.shots_per_setting", "must be >= 1");
    const std::string settings = get_string(field_or(params, "settings", "optimal"), "params.settings");
    if (settings != "optimal") throw ConfigError(Kind::OutOfRange, "params.settings", "only 'optimal' is available");
    return ChshParams{state, shots};
}

HomScanParams parse_hom_scan(Json& params, std::vector<std::string>& warnings) {
    StateContext ctx{&warnings, 2};
    if (!params.contains("reference")) throw ConfigError(Kind::Missing, "params.reference", "required");
    if (!params.contains("target")) throw ConfigError(Kind::Missing, "params.target", "required");
    PureState reference = parse_pure(params["reference"], "params.reference", ctx);
    ctx.dim_hint = reference.dim();
    DensityMatrix target = parse_density(params["target"], "params.target", ctx);
    if (target.dim() != reference.dim())
        throw ConfigError(Kind::OutOfRange, "params.target", "dimension differs from params.reference");

    TemporalModeModel model;
    model.bin_spacing_ps = get_number(field_or(params, "bin_spacing_ps", model.bin_spacing_ps), "params.bin_spacing_ps");
    model.coherence_time_ps =
        get_number(field_or(params, "coherence_time_ps", model.coherence_time_ps), "params.coherence_time_ps");
    if (!(model.bin_spacing_ps > 0.0)) throw ConfigError(Kind::OutOfRange, "params.bin_spacing_ps", "must be > 0");
    if (!(model.coherence_time_ps > 0.0)) throw ConfigError(Kind::OutOfRange, "params.coherence_time_ps", "must be > 0");

    std::vector<double> delays;
    Json& grid = field_or(params, "delays_ps", Json{{"start", -20.0}, {"stop", 20.0}, {"step", 0.5}});
    if (grid.is_array()) {
        for (std::size_t i = 0; i < grid.size(); ++i) delays.push_back(get_number(grid[i], index_path("params.delays_ps", i)));
    } else if (grid.is_object()) {
        for (const char* key : {"start", "stop", "step"})
            if (!grid.contains(key)) throw ConfigError(Kind::Missing, join("params.delays_ps", key), "required");
        const double start = get_number(grid["start"], "params.delays_ps.start");
        const double stop = get_number(grid["stop"], "params.delays_ps.stop");
        const double step = get_number(grid["step"], "params.delays_ps.step");
        if (!(step > 0.0)) throw ConfigError(Kind::OutOfRange, "params.delays_ps.step", "must be > 0");
        if (stop < start) throw ConfigError(Kind::OutOfRange, "params.delays_ps.stop", "must be >= start");
        const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (n > 1000000) throw ConfigError(Kind::OutOfRange, "params.delays_ps", "more than 10^6 delay points");
        for (long i = 0; i < n; ++i) delays.push_back(start + static_cast<double>(i) * step);
    } else {
        throw ConfigError(Kind::WrongType, "params.delays_ps", "expected a list or {start, stop, step}");
    }
    if (delays.empty()) throw ConfigError(Kind::OutOfRange, "params.delays_ps", "no delay points");
    return HomScanParams{target, reference, std::move(delays), model};
}

QwalkParams parse_qwalk(Json& params, std::vector<std::string>& warnings) {
    StateContext ctx{&warnings, 2};
    if (!params.contains("target")) throw ConfigError(Kind::Missing, "params.target", "required");
    PureState target = parse_pure(params["target"], "params.target", ctx);
    const std::uint64_t steps = get_count(field_or(params, "n_steps", target.dim() + 1), "params.n_steps");
    if (steps + 1 < target.dim())
        throw ConfigError(Kind::OutOfRange, "params.n_steps",
                          "must be >= target dimension - 1 (" + std::to_string(target.dim() - 1) + ")");
    if (steps > 64) throw ConfigError(Kind::OutOfRange, "params.n_steps", "must be <= 64");
    const std::uint64_t restarts = get_count(field_or(params, "restarts", 32), "params.restarts");
    if (restarts < 1 || restarts > 10000) throw ConfigError(Kind::OutOfRange, "params.restarts", "must lie in [1, 10000]");
    const double weight = get_number(field_or(params, "success_weight", 0.1), "params.success_weight");
    if (weight < 0.0) throw ConfigError(Kind::OutOfRange, "params.success_weight", "must be >= 0");
    return QwalkParams{target, static_cast<std::size_t>(steps), static_cast<std::size_t>(restarts), weight};
}

void parse_refs(Json& j, const std::string& path, std::size_t dim, std::vector<std::string>& warnings,
                std::vector<PureState>& refs, std::vector<std::string>& labels) {
    StateContext ctx{&warnings, dim};
    if (j.is_string() && j.get<std::string>() == "mub") {
        if (dim != 2) throw ConfigError(Kind::OutOfRange, path, "'mub' references need a 2-bin pump");
        const char* names[] = {"t0", "t1", "plus", "minus", "plus_i", "minus_i"};
        refs = mub_states();
        labels.assign(std::begin(names), std::end(names));
        return;
    }
    if (!j.is_array() || j.empty()) throw ConfigError(Kind::WrongType, path, "expected 'mub' or a list of states");
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string label = state_label(j[i], i);
        PureState s = parse_pure(j[i], index_path(path, i), ctx);
        if (s.dim() != dim)
            throw ConfigError(Kind::OutOfRange, index_path(path, i), "reference dimension must equal the pump length");
        refs.push_back(std::move(s));
        labels.push_back(label);
    }
}

EntangleParams parse_entangle(Json& params, std::vector<std::string>& warnings) {
    StateContext ctx{&warnings, 2};
    Json& pump_json = field_or(params, "pump", Json::array({1.0, 1.0}));
    const PureState pump_state = parse_pure(pump_json, "params.pump", ctx);
    EntangleParams out{PumpProfile(pump_state.amplitudes()), {}, {}, {}, {}};
    parse_refs(field_or(params, "alice_refs", "mub"), "params.alice_refs", pump_state.dim(), warnings, out.alice_refs,
               out.alice_labels);
    parse_refs(field_or(params, "bob_refs", "mub"), "params.bob_refs", pump_state.dim(), warnings, out.bob_refs,
               out.bob_labels);
    return out;
}

}  // namespace

std::string to_string(Experiment experiment) {
    switch (experiment) {
    case Experiment::Tomography:
        return "tomography";
    case Experiment::Chsh:
        return "chsh";
    case Experiment::HomScan:
        return "hom-scan";
    case Experiment::QwalkSynth:
        return "qwalk-synth";
    case Experiment::Entangle:
        return "entangle";
    }
    return "unknown";
}

std::optional<Experiment> parse_experiment(const std::string& name) {
    for (Experiment e : {Experiment::Tomography, Experiment::Chsh, Experiment::HomScan, Experiment::QwalkSynth,
                         Experiment::Entangle})
        if (to_string(e) == name) return e;
    return std::nullopt;
}

ConfigError::ConfigError(Kind kind, std::string path, const std::string& message)
    : Error(path.empty() ? message : path + ": " + message), kind_(kind), path_(std::move(path)) {}

RunConfig parse_config(const std::string& text, const Overrides& overrides) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(Kind::Syntax, "", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError(Kind::Syntax, "", "configuration must be a JSON object");

    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        if (key != "experiment" && key != "seed" && key != "noise" && key != "params" && key != "output")
            throw ConfigError(Kind::Missing, key, "unknown top-level key");
    }

    RunConfig config;
    if (!doc.contains("experiment")) throw ConfigError(Kind::Missing, "experiment", "required");
    const std::string name = get_string(doc["experiment"], "experiment");
    const auto experiment = parse_experiment(name);
    if (!experiment)
        throw ConfigError(Kind::UnknownExperiment, "experiment",
                          "unknown experiment '" + name + "' (expected tomography, chsh, hom-scan, qwalk-synth or entangle)");
    config.experiment = *experiment;

    if (overrides.seed) doc["seed"] = *overrides.seed;
    config.seed = get_count(field_or(doc, "seed", 0), "seed");

    Json& noise = field_or(doc, "noise", Json::object());
    if (!noise.is_object()) throw ConfigError(Kind::WrongType, "noise", "expected an object");
    config.noise.visibility = get_number(field_or(noise, "visibility", 1.0), "noise.visibility");
    require_range(config.noise.visibility, 0.0, 1.0, "noise.visibility");
    config.noise.accidental_rate = get_number(field_or(noise, "accidental_rate", 0.0), "noise.accidental_rate");
    if (config.noise.accidental_rate < 0.0) throw ConfigError(Kind::OutOfRange, "noise.accidental_rate", "must be >= 0");
    config.noise.mean_counts = get_number(field_or(noise, "mean_counts", 10000.0), "noise.mean_counts");
    if (!(config.noise.mean_counts > 0.0)) throw ConfigError(Kind::OutOfRange, "noise.mean_counts", "must be > 0");

    Json& params = field_or(doc, "params", Json::object());
    if (!params.is_object()) throw ConfigError(Kind::WrongType, "params", "expected an object");
    switch (config.experiment) {
    case Experiment::Tomography:
        config.params = parse_tomography(params, config.noise, config.seed, config.warnings);
        break;
    case Experiment::Chsh:
        config.params = parse_chsh(params, config.warnings);
        break;
    case Experiment::HomScan:
        config.params = parse_hom_scan(params, config.warnings);
        break;
    case Experiment::QwalkSynth:
        config.params = parse_qwalk(params, config.warnings);
        break;
    case Experiment::Entangle:
        config.params = parse_entangle(params, config.warnings);
        break;
    }

    Json& output = field_or(doc, "output", Json::object());
    if (!output.is_object()) throw ConfigError(Kind::WrongType, "output", "expected an object");
    if (overrides.output_path) output["path"] = *overrides.output_path;
    const std::string default_format = config.experiment == Experiment::HomScan ||
                                               config.experiment == Experiment::Tomography
                                           ? "csv"
                                           : "json";
    const std::string format = get_string(field_or(output, "format", default_format), "output.format");
    if (format == "csv")
        config.format = OutputFormat::Csv;
    else if (format == "json")
        config.format = OutputFormat::Json;
    else
        throw ConfigError(Kind::OutOfRange, "output.format", "must be 'csv' or 'json'");
    const std::string extension = format == "csv" ? ".csv" : ".json";
    config.output_path = get_string(field_or(output, "path", name + "_results" + extension), "output.path");
    if (config.output_path.empty()) throw ConfigError(Kind::OutOfRange, "output.path", "must not be empty");

    config.resolved = std::move(doc);
    return config;
}

}  // namespace timebin::cli
