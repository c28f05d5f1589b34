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

// timebin-lab <experiment> --config <path> [--seed N] [--out <path>]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "timebin/config.hpp"
#include "timebin/runner.hpp"

int main(int argc, char** argv) {
    using namespace timebin::cli;

    CLI::App app{"Batch simulator for HOM-based time-bin photonic measurements"};
    std::string experiment;
    std::string config_path;
    Overrides overrides;
    app.add_option("experiment", experiment, "tomography | chsh | hom-scan | qwalk-synth | entangle")->required();
    app.add_option("--config,-c", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--seed", overrides.seed, "override the config seed");
    app.add_option("--out,-o", overrides.output_path, "override output.path");
    CLI11_PARSE(app, argc, argv);

    if (!parse_experiment(experiment)) {
        std::cerr << "error: unknown experiment '" << experiment << "'\n";
        return 1;
    }

    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read " << config_path << "\n";
        return 1;
    }
    std::ostringstream text;
    text << in.rdbuf();

    RunConfig config;
    try {
        config = parse_config(text.str(), overrides);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << config_path << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << config_path << ": " << e.what() << "\n";
        return 1;
    }
    if (to_string(config.experiment) != experiment) {
        std::cerr << "error: command requests '" << experiment << "' but the config declares '"
                  << to_string(config.experiment) << "'\n";
        return 1;
    }
    return run(config, std::cerr);
}
