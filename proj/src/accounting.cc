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

#include "tisim/accounting.h"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <set>

#include "tisim/csv.h"
#include "tisim/errors.h"

namespace tisim {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using boost::multiprecision::cpp_int;

Rational exact(double value) {
    return Rational(value);
}

double to_double(const Rational &value) {
    // Exact integers below 2^53 divide with a single correctly rounded step.
    static const cpp_int kLimit = cpp_int(1) << 53;
    const auto num = boost::multiprecision::numerator(value);
    const auto den = boost::multiprecision::denominator(value);
    if (boost::multiprecision::abs(num) < kLimit && den < kLimit) {
        return num.convert_to<double>() / den.convert_to<double>();
    }
    return value.convert_to<double>();
}

void check_cells(const RunEnsemble &ensemble) {
    if (ensemble.cells.empty()) {
        throw EmptyBatch("ensemble has no cells");
    }
    std::set<CellKey> seen;
    for (const auto &cell : ensemble.cells) {
        CellKey key{cell.setup_id, cell.state_id};
        if (!seen.insert(key).second) {
            throw DuplicateCell("duplicate cell (" + cell.setup_id + ", " + cell.state_id + ")");
        }
        if (cell.batch.trials.empty()) {
            throw EmptyBatch("cell (" + cell.setup_id + ", " + cell.state_id + ") has an empty batch");
        }
    }
}

}  // namespace

BigSpaceTables big_space(const RunEnsemble &ensemble) {
    check_cells(ensemble);
    double prior_sum = 0.0;
    for (const auto &cell : ensemble.cells) {
        if (!(cell.prior >= 0.0) || !std::isfinite(cell.prior)) {
            throw PriorsNotNormalized("prior of (" + cell.setup_id + ", " + cell.state_id + ") is not a finite non-negative number");
        }
        prior_sum += cell.prior;
    }
    if (std::abs(prior_sum - 1.0) > 1e-12) {
        throw PriorsNotNormalized("priors sum to " + format_double(prior_sum));
    }

    BigSpaceTables tables;
    for (const auto &cell : ensemble.cells) {
        CellKey key{cell.setup_id, cell.state_id};
        Rational prior = exact(cell.prior);
        Rational trials(static_cast<long long>(cell.batch.trials.size()));

        std::vector<std::pair<std::string, Rational>> joint;
        Rational marginal = 0;
        for (const auto &[outcome, count] : cell.batch.counts()) {
            Rational p = prior * Rational(static_cast<long long>(count)) / trials;
            marginal += p;
            joint.emplace_back(outcome, p);
        }
        auto &joint_row = tables.joint[key];
        for (const auto &[outcome, p] : joint) {
            joint_row[outcome] = to_double(p);
        }
        tables.marginals[key] = to_double(marginal);
        if (marginal == 0) {
            continue;
        }
        auto &conditional = tables.conditionals[key];
        for (const auto &[outcome, p] : joint) {
            conditional[outcome] = to_double(p / marginal);
        }
    }
    return tables;
}

std::map<CellKey, OutcomeTable> many_spaces(const RunEnsemble &ensemble) {
    check_cells(ensemble);
    std::map<CellKey, OutcomeTable> out;
    for (const auto &cell : ensemble.cells) {
        auto &table = out[{cell.setup_id, cell.state_id}];
        for (const auto &[outcome, frequency] : cell.batch.frequencies) {
            table[outcome] = frequency;
        }
    }
    return out;
}

AccountingReport account(const RunEnsemble &ensemble) {
    return account(ensemble, ensemble);
}

AccountingReport account(const RunEnsemble &big, const RunEnsemble &many) {
    AccountingReport report;
    report.big = big_space(big);
    report.many_spaces = many_spaces(many);
    for (const auto &[key, _] : report.big.joint) {
        if (!report.many_spaces.contains(key)) {
            throw CellMismatch("cell (" + key.first + ", " + key.second + ") is missing from the many-spaces ensemble");
        }
    }
    if (report.many_spaces.size() != report.big.joint.size()) {
        throw CellMismatch("the two ensembles list different cells");
    }
    report.max_divergence = compare(report);
    return report;
}

double compare(const AccountingReport &report) {
    if (report.many_spaces.empty()) {
        throw EmptyBatch("nothing to compare");
    }
    double worst = 0.0;
    for (const auto &[key, conditional] : report.big.conditionals) {
        auto it = report.many_spaces.find(key);
        if (it == report.many_spaces.end()) {
            continue;
        }
        const auto &many = it->second;
        std::set<std::string> outcomes;
        for (const auto &[x, _] : conditional) {
            outcomes.insert(x);
        }
        for (const auto &[x, _] : many) {
            outcomes.insert(x);
        }
        for (const auto &x : outcomes) {
            double a = conditional.contains(x) ? conditional.at(x) : 0.0;
            double b = many.contains(x) ? many.at(x) : 0.0;
            worst = std::max(worst, std::abs(a - b));
        }
    }
    return worst;
}

std::vector<LoopDiagnostic> loop_diagnostic(const Setup &setup, const TrialBatch &batch) {
    std::vector<LoopDiagnostic> out;
    for (const auto &absorber : setup.absorbers()) {
        LoopDiagnostic d;
        d.absorber = absorber.name;
        d.channel = absorber.channel;
        d.declared_weight = setup.find_channel(absorber.channel)->weight();
        for (const auto &record : batch.trials) {
            if (record.history && record.history->is_active(absorber.name)) {
                ++d.active_trials;
            }
            if (record.completing_absorber == absorber.name) {
                ++d.completions;
            }
        }
        if (d.active_trials > 0) {
            d.loop_frequency = static_cast<double>(d.completions) / static_cast<double>(d.active_trials);
        }
        out.push_back(std::move(d));
    }
    return out;
}

namespace {

nlohmann::ordered_json nested(const std::map<CellKey, OutcomeTable> &tables) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto &[key, table] : tables) {
        auto &row = out[key.first][key.second] = nlohmann::ordered_json::object();
        for (const auto &[outcome, p] : table) {
            row[outcome] = p;
        }
    }
    return out;
}

}  // namespace

nlohmann::ordered_json accounting_to_json(const AccountingReport &report) {
    nlohmann::ordered_json out;
    out["joint"] = nested(report.big.joint);
    auto &marginals = out["marginals"] = nlohmann::ordered_json::object();
    for (const auto &[key, p] : report.big.marginals) {
        marginals[key.first][key.second] = p;
    }
    out["conditionals"] = nested(report.big.conditionals);
    out["many_spaces"] = nested(report.many_spaces);
    out["max_divergence"] = report.max_divergence;
    return out;
}

nlohmann::ordered_json diagnostics_to_json(const std::vector<LoopDiagnostic> &diagnostics) {
    auto out = nlohmann::ordered_json::array();
    for (const auto &d : diagnostics) {
        nlohmann::ordered_json row;
        row["absorber"] = d.absorber;
        row["channel"] = d.channel;
        row["declared_weight"] = d.declared_weight;
        row["active_trials"] = d.active_trials;
        row["completions"] = d.completions;
        row["loop_frequency"] = d.loop_frequency ? nlohmann::ordered_json(*d.loop_frequency) : nullptr;
        out.push_back(std::move(row));
    }
    return out;
}

void write_accounting_csv(std::ostream &out, const AccountingReport &report) {
    write_csv_row(out, {"setup", "state", "outcome", "mode", "probability"});
    auto emit = [&](const std::map<CellKey, OutcomeTable> &tables, std::string_view mode) {
        for (const auto &[key, table] : tables) {
            for (const auto &[outcome, p] : table) {
                write_csv_row(out, {key.first, key.second, outcome, mode, format_double(p)});
            }
        }
    };
    emit(report.big.joint, "joint");
    emit(report.big.conditionals, "conditional");
    emit(report.many_spaces, "many_spaces");
}

}  // namespace tisim
