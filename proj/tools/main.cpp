// Copyright 2026 The qkmar authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end over the qkmar C API.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qkmar.h"

namespace {

using nlohmann::json;

int fail_with(qkm_status status) {
    json error;
    error["error"] = qkm_last_error();
    error["stage"] = qkm_last_error_stage();
    error["code"] = static_cast<int>(status);
    std::cerr << error.dump() << std::endl;
    return static_cast<int>(status);
}

int fail_config(const std::string& stage, const std::string& message) {
    json error;
    error["error"] = message;
    error["stage"] = stage;
    error["code"] = 2;
    std::cerr << error.dump() << std::endl;
    return 2;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Loads a config file and applies the CLI overrides to the JSON document.
int load_config(const std::string& path, const std::optional<std::uint64_t>& seed,
                const std::optional<std::string>& out_dir, std::string& config_out) {
    const auto text = read_file(path);
    if (!text.has_value()) {
        return fail_config("cli", "cannot read config file '" + path + "'");
    }
    json config;
    try {
        config = json::parse(*text);
    } catch (const json::exception& e) {
        return fail_config("cli", "config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (seed.has_value()) {
        config["seed"] = *seed;
    }
    if (out_dir.has_value()) {
        config["output_dir"] = *out_dir;
    }
    config_out = config.dump();
    return 0;
}

int print_grids(const std::optional<std::string>& config_path) {
    std::string kernel;
    if (config_path.has_value()) {
        const auto text = read_file(*config_path);
        if (!text.has_value()) {
            return fail_config("cli", "cannot read config file '" + *config_path + "'");
        }
        try {
            kernel = json::parse(*text).at("kernel").get<std::string>();
        } catch (const json::exception& e) {
            return fail_config("cli", std::string("config file lacks a kernel field: ") +
                                          e.what());
        }
    }
    const std::vector<std::string> kernels =
        kernel.empty() ? std::vector<std::string>{"linear", "rbf", "laplacian", "ry1dst",
                                                  "ryrz1dalt", "cryrz1dst"}
                       : std::vector<std::string>{kernel};
    for (const std::string& name : kernels) {
        char* grid = nullptr;
        const qkm_status status = qkm_default_grid(name.c_str(), &grid);
        if (status != QKM_OK) {
            return fail_with(status);
        }
        std::cout << grid;
        qkm_string_free(grid);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qkmar: quantum and classical kernel pipelines for SAR chip classification"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_path;
    int workers = 0;
    bool print_grid = false;

    app.add_flag("--print-grid", print_grid,
                 "Print the default hyperparameter grids (or the config's kernel grid) and exit");
    app.add_option("--config", config_path, "Path to a JSON config file");
    app.add_option("--seed", seed, "Root seed override");
    app.add_option("--workers", workers, "Worker thread cap (0 = hardware concurrency)");
    app.add_option("--out", out_path, "Output directory (run/synth) or file (kernel)");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic SARC dataset");
    auto* kernel = app.add_subcommand("kernel", "Export a precomputed training Gram matrix");
    auto* run = app.add_subcommand("run", "Run a full experiment");
    auto* report = app.add_subcommand("report", "Pretty-print a run report");
    std::string report_path;
    report->add_option("report_json", report_path, "Path to report.json")->required();

    CLI11_PARSE(app, argc, argv);

    if (print_grid) {
        return print_grids(config_path.empty() ? std::nullopt
                                               : std::optional<std::string>(config_path));
    }
    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 0;
    }

    if (synth->parsed()) {
        if (config_path.empty() || !out_path.has_value()) {
            return fail_config("cli", "synth requires --config <spec.json> and --out <dir>");
        }
        auto spec = read_file(config_path);
        if (!spec.has_value()) {
            return fail_config("cli", "cannot read spec file '" + config_path + "'");
        }
        if (seed.has_value()) {
            try {
                json j = json::parse(*spec);
                j["seed"] = *seed;
                *spec = j.dump();
            } catch (const json::exception& e) {
                return fail_config("cli", std::string("spec file is not valid JSON: ") + e.what());
            }
        }
        const qkm_status status = qkm_synth(spec->c_str(), out_path->c_str());
        if (status != QKM_OK) {
            return fail_with(status);
        }
        std::cout << "synthetic dataset written to " << *out_path << std::endl;
        return 0;
    }

    if (kernel->parsed()) {
        if (config_path.empty() || !out_path.has_value()) {
            return fail_config("cli", "kernel requires --config <config.json> and --out <file>");
        }
        std::string config;
        if (const int rc = load_config(config_path, seed, std::nullopt, config); rc != 0) {
            return rc;
        }
        const qkm_status status = qkm_kernel_matrix(config.c_str(), out_path->c_str(), workers);
        if (status != QKM_OK) {
            return fail_with(status);
        }
        std::cout << "Gram matrix written to " << *out_path << std::endl;
        return 0;
    }

    if (run->parsed()) {
        if (config_path.empty()) {
            return fail_config("cli", "run requires --config <config.json>");
        }
        std::string config;
        if (const int rc = load_config(config_path, seed, out_path, config); rc != 0) {
            return rc;
        }
        char* report_json = nullptr;
        const qkm_status status = qkm_run(config.c_str(), workers, &report_json);
        if (status != QKM_OK) {
            return fail_with(status);
        }
        char* text = nullptr;
        if (qkm_render_report(report_json, &text) == QKM_OK) {
            std::cout << text;
            qkm_string_free(text);
        }
        qkm_string_free(report_json);
        return 0;
    }

    if (report->parsed()) {
        const auto text = read_file(report_path);
        if (!text.has_value()) {
            return fail_config("cli", "cannot read report file '" + report_path + "'");
        }
        char* rendered = nullptr;
        const qkm_status status = qkm_render_report(text->c_str(), &rendered);
        if (status != QKM_OK) {
            return fail_with(status);
        }
        std::cout << rendered;
        qkm_string_free(rendered);
        return 0;
    }

    std::cout << app.help();
    return 0;
}
