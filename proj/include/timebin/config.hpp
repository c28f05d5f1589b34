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

// JSON run configuration for the timebin-lab batch front-end.
//
// {
//   "experiment": "tomography" | "chsh" | "hom-scan" | "qwalk-synth" | "entangle",
//   "seed": 42,
//   "noise": {"visibility": 0.985, "accidental_rate": 0.0, "mean_counts": 10000},
//   "params": { ...per experiment... },
//   "output": {"path": "out.csv", "format": "csv" | "json"}
// }
//
// States are given by name ("t0", "t1", "plus", "minus", "plus_i", "minus_i",
// "H", "V", "hybrid", "t<k>") or as amplitude lists whose entries are real
// numbers or [re, im] pairs. Amplitude lists are normalised at parse time and
// a warning is recorded when they were not unit norm. Mixed states are
// {"mixture": [{"state": ..., "weight": w}, ...]} or
// {"white_noise": v, "state": ...}.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "timebin/entangle.hpp"
#include "timebin/hom.hpp"
#include "timebin/quantum.hpp"
#include "timebin/tomography.hpp"

namespace timebin::cli {

enum class Experiment { Tomography, Chsh, HomScan, QwalkSynth, Entangle };
enum class OutputFormat { Csv, Json };

std::string to_string(Experiment experiment);
std::optional<Experiment> parse_experiment(const std::string& name);

class ConfigError : public Error {
  public:
    enum class Kind { Syntax, UnknownExperiment, Missing, WrongType, OutOfRange, NonNormalizable };

    ConfigError(Kind kind, std::string path, const std::string& message);

    Kind kind() const { return kind_; }
    /// Dotted field path, e.g. "noise.visibility" (empty for syntax errors).
    const std::string& path() const { return path_; }

  private:
    Kind kind_;
    std::string path_;
};

struct TomographyParams {
    std::vector<SuiteState> targets;
    MleOptions mle;
};

struct ChshParams {
    DensityMatrix state;
    std::uint64_t shots_per_setting = 1000000;
};

struct HomScanParams {
    DensityMatrix target;
    PureState reference;
    std::vector<double> delays_ps;
    TemporalModeModel model;
};

struct QwalkParams {
    PureState target;
    std::size_t n_steps = 0;
    std::size_t restarts = 32;
    double success_weight = 0.1;
};

struct EntangleParams {
    PumpProfile pump;
    std::vector<PureState> alice_refs;
    std::vector<std::string> alice_labels;
    std::vector<PureState> bob_refs;
    std::vector<std::string> bob_labels;
};

using ExperimentParams = std::variant<TomographyParams, ChshParams, HomScanParams, QwalkParams, EntangleParams>;

struct RunConfig {
    Experiment experiment = Experiment::Tomography;
    std::uint64_t seed = 0;
    NoiseModel noise;
    ExperimentParams params;
    std::filesystem::path output_path;
    OutputFormat format = OutputFormat::Json;
    std::vector<std::string> warnings;
    /// The configuration with every default filled in, echoed into outputs.
    nlohmann::ordered_json resolved;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_path;
};

RunConfig parse_config(const std::string& text, const Overrides& overrides = {});

}  // namespace timebin::cli
