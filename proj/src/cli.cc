// Copyright 2026 The tisim Authors
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

#include "tisim/cli.h"

#include <fmt/format.h>

#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "tisim/accounting.h"
#include "tisim/consistency.h"
#include "tisim/csv.h"
#include "tisim/entanglement.h"
#include "tisim/errors.h"
#include "tisim/sampler.h"
#include "tisim/scenario.h"
#include "tisim/wave.h"

namespace tisim::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr uint64_t kIndependentSeedSalt = 0x9E3779B97F4A7C15ull;

void emit(const RunConfig &config, std::ostream &out, const std::string &content) {
    if (!config.out) {
        out << content;
        return;
    }
    std::ofstream file(*config.out, std::ios::binary);
    if (!file) {
        throw IoError("cannot write '" + config.out->string() + "'");
    }
    file << content;
}

std::string dump(const ordered_json &doc) {
    return doc.dump(2) + "\n";
}

// Maps library errors onto the exit-status contract.
int guarded(std::ostream &err, const std::function<int()> &body) {
    try {
        return body();
    } catch (const NotWellPosed &e) {
        err << "not well posed: " << e.what() << "\n";
        return kExitPathological;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

std::string active_list(const Setup &setup, const History &history) {
    std::string out;
    for (const auto &absorber : setup.absorbers()) {
        if (history.is_active(absorber.name)) {
            if (!out.empty()) {
                out += ';';
            }
            out += absorber.name;
        }
    }
    return out;
}

double firing_time(const History &history) {
    if (history.boundary_firing_time) {
        return *history.boundary_firing_time;
    }
    return *history.firing_times.at(history.firing_absorber());
}

std::string complex_text(Amplitude a) {
    // Adding 0.0 folds -0 into +0.
    return fmt::format("{:+.6f}{:+.6f}i", a.real() + 0.0, a.imag() + 0.0);
}

// ---- compare manifest ----

struct ManifestCell {
    std::string setup_id;
    std::string state_id;
    std::filesystem::path scenario;
    std::optional<double> prior;
    std::size_t trials = 0;
    uint64_t seed = 0;
};

struct Manifest {
    std::string label;
    bool independent = false;
    std::vector<ManifestCell> cells;
};

Manifest load_manifest(const RunConfig &config) {
    std::ifstream in(config.ensemble_path);
    if (!in) {
        throw IoError("cannot read ensemble manifest '" + config.ensemble_path.string() + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw SchemaError(config.ensemble_path.string() + ": not valid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("cells") || !doc.at("cells").is_array()) {
        throw SchemaError("ensemble: expected an object with a 'cells' array");
    }
    for (const auto &[key, _] : doc.items()) {
        if (key != "label" && key != "batches" && key != "cells") {
            throw SchemaError("ensemble: unknown key '" + key + "'");
        }
    }
    Manifest manifest;
    manifest.label = doc.value("label", std::string("ensemble"));
    auto batches = doc.value("batches", std::string("shared"));
    if (batches != "shared" && batches != "independent") {
        throw SchemaError("ensemble.batches: expected 'shared' or 'independent'");
    }
    manifest.independent = batches == "independent";

    auto base = config.ensemble_path.parent_path();
    for (const auto &node : doc.at("cells")) {
        if (!node.is_object()) {
            throw SchemaError("ensemble.cells[]: expected an object");
        }
        for (const auto &[key, _] : node.items()) {
            if (key != "setup" && key != "state" && key != "scenario" && key != "prior" && key != "trials" &&
                key != "seed") {
                throw SchemaError("ensemble.cells[]: unknown key '" + key + "'");
            }
        }
        for (auto key : {"setup", "state", "scenario"}) {
            if (!node.contains(key) || !node.at(key).is_string()) {
                throw SchemaError(std::string("ensemble.cells[]: '") + key + "' must be a string");
            }
        }
        ManifestCell cell;
        cell.setup_id = node.at("setup").get<std::string>();
        cell.state_id = node.at("state").get<std::string>();
        cell.scenario = base / node.at("scenario").get<std::string>();
        if (node.contains("prior")) {
            if (!node.at("prior").is_number()) {
                throw SchemaError("ensemble.cells[].prior: expected a number");
            }
            cell.prior = node.at("prior").get<double>();
        }
        cell.trials = config.trials;
        if (node.contains("trials")) {
            if (!node.at("trials").is_number_unsigned()) {
                throw SchemaError("ensemble.cells[].trials: expected a non-negative integer");
            }
            cell.trials = node.at("trials").get<std::size_t>();
        }
        cell.seed = config.seed;
        if (node.contains("seed")) {
            if (!node.at("seed").is_number_unsigned()) {
                throw SchemaError("ensemble.cells[].seed: expected a non-negative integer");
            }
            cell.seed = node.at("seed").get<uint64_t>();
        }
        manifest.cells.push_back(std::move(cell));
    }
    if (manifest.cells.empty()) {
        throw EmptyBatch("ensemble has no cells");
    }
    std::size_t with_prior = 0;
    for (const auto &cell : manifest.cells) {
        with_prior += cell.prior.has_value();
    }
    if (with_prior != 0 && with_prior != manifest.cells.size()) {
        throw SchemaError("ensemble: give a prior for every cell or for none");
    }
    if (with_prior == 0) {
        for (auto &cell : manifest.cells) {
            cell.prior = 1.0 / static_cast<double>(manifest.cells.size());
        }
    }
    return manifest;
}

}  // namespace

int cmd_check(const RunConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        auto setup = load_scenario_file(config.scenario_path);
        auto report = classify(setup);
        std::ostringstream text;
        switch (config.format) {
            case OutputFormat::Json:
                text << dump(report_to_json(setup, report));
                break;
            case OutputFormat::Csv:
                write_csv_row(text, {"history", "outcome", "firing", "firing_time", "active"});
                for (std::size_t i = 0; i < report.histories.size(); ++i) {
                    const auto &h = report.histories[i];
                    write_csv_row(text, {std::to_string(i), h.outcome_channel, h.firing_absorber(),
                                         format_double(firing_time(h)), active_list(setup, h)});
                }
                break;
            case OutputFormat::Text:
                text << fmt::format("scenario {} (boundary {})\n", setup.label(), boundary_name(setup.boundary()));
                text << fmt::format("classification: {}\n", report.well_posed() ? "WellPosed" : "Pathological");
                for (const auto &reason : report.reasons) {
                    text << fmt::format("  {}({}): {}\n", pathology_name(reason.kind), reason.channel, reason.detail);
                }
                text << fmt::format("{} consistent histories\n", report.histories.size());
                for (std::size_t i = 0; i < report.histories.size(); ++i) {
                    const auto &h = report.histories[i];
                    text << fmt::format("  #{} outcome {:<4} fired by {} at t={} s; active: {}\n", i,
                                        h.outcome_channel, h.firing_absorber(), format_double(firing_time(h)),
                                        active_list(setup, h));
                }
                break;
        }
        emit(config, out, text.str());
        if (!report.well_posed()) {
            for (const auto &reason : report.reasons) {
                err << pathology_name(reason.kind) << "(" << reason.channel << ")\n";
            }
            return kExitPathological;
        }
        return kExitOk;
    });
}

int cmd_run(const RunConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        auto setup = load_scenario_file(config.scenario_path);
        auto batch = run_trials(setup, config.trials, config.seed, config.threads);
        auto diagnostics = loop_diagnostic(setup, batch);
        std::ostringstream text;
        switch (config.format) {
            case OutputFormat::Csv:
                write_batch_csv(text, batch);
                break;
            case OutputFormat::Json: {
                auto doc = batch_to_json(setup, batch, config.records);
                doc["loop_diagnostic"] = diagnostics_to_json(diagnostics);
                if (!setup.detector_chain().empty()) {
                    doc["detector_chain"] = distribution_to_json(build_chain(setup.detector_chain()));
                }
                text << dump(doc);
                break;
            }
            case OutputFormat::Text: {
                text << fmt::format("scenario {} (boundary {}), seed {}, {} trials\n", setup.label(),
                                    boundary_name(setup.boundary()), batch.seed, batch.trials.size());
                text << fmt::format("{:<10} {:>10} {:>12} {:>12}\n", "outcome", "count", "frequency", "|c|^2");
                auto counts = batch.counts();
                for (std::size_t c = 0; c < counts.size(); ++c) {
                    text << fmt::format("{:<10} {:>10} {:>12.6f} {:>12.6f}\n", counts[c].first, counts[c].second,
                                        batch.frequencies[c].second, setup.channels()[c].weight());
                }
                text << "completions\n";
                for (const auto &[channel, row] : batch.completions()) {
                    for (const auto &[absorber, count] : row) {
                        text << fmt::format("  {:<8} by {:<10} {:>10}\n", channel, absorber, count);
                    }
                }
                text << "loop diagnostic (declared weight vs completion frequency when in place)\n";
                for (const auto &d : diagnostics) {
                    text << fmt::format("  {:<10} {:>10.6f} {:>12}\n", d.absorber, d.declared_weight,
                                        d.loop_frequency ? fmt::format("{:.6f}", *d.loop_frequency) : "n/a");
                }
                if (!setup.detector_chain().empty()) {
                    auto tree = build_chain(setup.detector_chain());
                    text << "detector chain distribution\n";
                    for (const auto &[path, weight] : terminal_distribution(tree)) {
                        text << fmt::format("  {:<40} {:.6f}\n", path, weight);
                    }
                }
                break;
            }
        }
        emit(config, out, text.str());
        return kExitOk;
    });
}

int cmd_ledger(const RunConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        auto setup = load_scenario_file(config.scenario_path);
        auto histories = enumerate_histories(setup);
        bool any_flagged = false;

        std::ostringstream text;
        ordered_json doc;
        doc["scenario"] = setup.label();
        doc["boundary"] = boundary_name(setup.boundary());
        auto &entries = doc["histories"] = ordered_json::array();
        if (config.format == OutputFormat::Csv) {
            write_csv_row(text, {"history", "outcome", "firing", "t_start", "t_end", "channel", "net_re", "net_im",
                                 "flagged"});
        } else if (config.format == OutputFormat::Text) {
            text << fmt::format("scenario {} (boundary {})\n", setup.label(), boundary_name(setup.boundary()));
        }
        for (std::size_t i = 0; i < histories.size(); ++i) {
            const auto &history = histories[i];
            auto ledger = advanced_ledger(setup, history);
            bool clean = ledger.max_residual() <= kTolerance;
            any_flagged |= !clean;
            switch (config.format) {
                case OutputFormat::Json: {
                    ordered_json entry;
                    entry["history"] = history_to_json(setup, history);
                    entry["regions"] = ledger_to_json(ledger);
                    entry["clean"] = clean;
                    entries.push_back(std::move(entry));
                    break;
                }
                case OutputFormat::Csv:
                    for (const auto &region : ledger.regions) {
                        bool flagged = std::abs(region.net) > kTolerance;
                        write_csv_row(text, {std::to_string(i), history.outcome_channel, history.firing_absorber(),
                                             format_double(region.t_start), format_double(region.t_end),
                                             region.channel, format_double(region.net.real()),
                                             format_double(region.net.imag()), flagged ? "true" : "false"});
                    }
                    break;
                case OutputFormat::Text:
                    text << fmt::format("history #{}: outcome {}, fired by {}\n", i, history.outcome_channel,
                                        history.firing_absorber());
                    for (const auto &region : ledger.regions) {
                        bool flagged = std::abs(region.net) > kTolerance;
                        text << fmt::format("  [{}, {}) {:<6} net {} {}\n", format_double(region.t_start),
                                            format_double(region.t_end), region.channel, complex_text(region.net),
                                            flagged ? "RESIDUAL" : "clean");
                        for (const auto &component : region.components) {
                            text << fmt::format("      {:<13} {:<10} {}\n", ledger_component_name(component.kind),
                                                component.origin, complex_text(component.amplitude));
                        }
                    }
                    break;
            }
        }
        if (histories.empty()) {
            err << "no consistent histories\n";
        }
        doc["clean"] = !any_flagged && !histories.empty();
        if (config.format == OutputFormat::Json) {
            text << dump(doc);
        } else if (config.format == OutputFormat::Text) {
            text << (doc["clean"].get<bool>() ? "all pre-emission regions cancel\n"
                                              : "uncancelled advanced amplitude before emission\n");
        }
        emit(config, out, text.str());
        return doc["clean"].get<bool>() ? kExitOk : kExitPathological;
    });
}

int cmd_compare(const RunConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        auto manifest = load_manifest(config);
        RunEnsemble big;
        RunEnsemble many;
        ordered_json cells = ordered_json::array();
        ordered_json diagnostics = ordered_json::object();
        for (const auto &cell : manifest.cells) {
            auto setup = load_scenario_file(cell.scenario);
            auto batch = run_trials(setup, cell.trials, cell.seed, config.threads);
            diagnostics[cell.setup_id][cell.state_id] = diagnostics_to_json(loop_diagnostic(setup, batch));
            cells.push_back({{"setup", cell.setup_id},
                             {"state", cell.state_id},
                             {"scenario", setup.label()},
                             {"prior", *cell.prior},
                             {"trials", cell.trials},
                             {"seed", cell.seed}});
            if (manifest.independent) {
                uint64_t seed = cell.seed ^ kIndependentSeedSalt;
                many.cells.push_back(
                    {cell.setup_id, cell.state_id, run_trials(setup, cell.trials, seed, config.threads), *cell.prior});
            }
            big.cells.push_back({cell.setup_id, cell.state_id, std::move(batch), *cell.prior});
        }
        auto report = manifest.independent ? account(big, many) : account(big);

        std::ostringstream text;
        switch (config.format) {
            case OutputFormat::Csv:
                write_accounting_csv(text, report);
                break;
            case OutputFormat::Json: {
                auto doc = accounting_to_json(report);
                doc["label"] = manifest.label;
                doc["batches"] = manifest.independent ? "independent" : "shared";
                doc["cells"] = std::move(cells);
                doc["loop_diagnostic"] = std::move(diagnostics);
                text << dump(doc);
                break;
            }
            case OutputFormat::Text:
                text << fmt::format("ensemble {} ({} batches)\n", manifest.label,
                                    manifest.independent ? "independent" : "shared");
                text << fmt::format("{:<16} {:<12} {:<8} {:>12} {:>12} {:>12}\n", "setup", "state", "outcome", "joint",
                                    "conditional", "many-spaces");
                for (const auto &[key, joint] : report.big.joint) {
                    for (const auto &[outcome, p] : joint) {
                        auto cond = report.big.conditionals.contains(key) ? report.big.conditionals.at(key).at(outcome)
                                                                          : 0.0;
                        text << fmt::format("{:<16} {:<12} {:<8} {:>12.6f} {:>12.6f} {:>12.6f}\n", key.first,
                                            key.second, outcome, p, cond, report.many_spaces.at(key).at(outcome));
                    }
                }
                text << fmt::format("max divergence {}\n", format_double(report.max_divergence));
                break;
        }
        emit(config, out, text.str());
        return kExitOk;
    });
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Transactional-interpretation simulator: consistency checks, Born-rule trials, advanced-wave "
                 "ledgers and probability accounting."};
    app.name("tisim");
    app.require_subcommand(1);

    RunConfig config;
    config.threads = std::max(1u, std::thread::hardware_concurrency());
    std::string format = "text";
    std::string out_path;
    const std::map<std::string, OutputFormat> formats{
        {"text", OutputFormat::Text}, {"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}};

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
        sub->add_option("--out", out_path, "Write the report to this file instead of stdout");
    };
    auto add_scenario = [&](CLI::App *sub) {
        sub->add_option("scenario,--scenario", config.scenario_path, "Scenario document")->required();
    };

    auto *check = app.add_subcommand("check", "Enumerate consistent histories and classify the setup");
    add_scenario(check);
    add_common(check);

    auto *run_cmd = app.add_subcommand("run", "Sample transactions by Born weight");
    add_scenario(run_cmd);
    add_common(run_cmd);
    run_cmd->add_option("--trials", config.trials, "Number of trials")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--seed", config.seed, "64-bit seed");
    run_cmd->add_flag("--records", config.records, "Include per-trial records in JSON output");

    auto *ledger = app.add_subcommand("ledger", "Tabulate pre-emission advanced amplitudes per history");
    add_scenario(ledger);
    add_common(ledger);

    auto *compare_cmd = app.add_subcommand("compare", "Big-space vs many-spaces tables over an ensemble");
    compare_cmd->add_option("ensemble,--ensemble", config.ensemble_path, "Ensemble manifest")->required();
    compare_cmd->add_option("--trials", config.trials, "Default trials per cell")->check(CLI::NonNegativeNumber);
    compare_cmd->add_option("--seed", config.seed, "Default seed per cell");
    add_common(compare_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back();  // program name
    }
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    config.format = formats.at(format);
    if (!out_path.empty()) {
        config.out = out_path;
    }
    if (check->parsed()) {
        return cmd_check(config, out, err);
    }
    if (run_cmd->parsed()) {
        return cmd_run(config, out, err);
    }
    if (ledger->parsed()) {
        return cmd_ledger(config, out, err);
    }
    return cmd_compare(config, out, err);
}

}  // namespace tisim::cli
