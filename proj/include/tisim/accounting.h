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

#ifndef TISIM_ACCOUNTING_H
#define TISIM_ACCOUNTING_H

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tisim/sampler.h"
#include "tisim/scenario.h"

namespace tisim {

/// One (setup, initial state) cell of an ensemble and the batch run in it.
struct EnsembleCell {
    std::string setup_id;
    std::string state_id;
    TrialBatch batch;
    double prior = 0.0;
};

struct RunEnsemble {
    std::vector<EnsembleCell> cells;
};

using CellKey = std::pair<std::string, std::string>;  // (setup_id, state_id)
using OutcomeTable = std::map<std::string, double>;

/// Big-space tables: P(S, L, X), the marginal P(S, L) = sum_X P(S, L, X) and
/// the conditional P(X | S, L) = P(S, L, X) / P(S, L).
struct BigSpaceTables {
    std::map<CellKey, OutcomeTable> joint;
    std::map<CellKey, double> marginals;
    /// Cells with zero marginal have no conditional and are absent.
    std::map<CellKey, OutcomeTable> conditionals;
};

/// Joint = prior * observed frequency. Every ratio is evaluated exactly over
/// the double inputs and rounded once, so with shared batches the conditional
/// of a cell is bit-identical to its frequency table.
///
/// Throws EmptyBatch, PriorsNotNormalized, DuplicateCell.
BigSpaceTables big_space(const RunEnsemble &ensemble);

/// One independent table per cell: its batch frequencies. Priors are ignored.
/// Throws EmptyBatch, DuplicateCell.
std::map<CellKey, OutcomeTable> many_spaces(const RunEnsemble &ensemble);

struct AccountingReport {
    BigSpaceTables big;
    std::map<CellKey, OutcomeTable> many_spaces;
    double max_divergence = 0.0;
};

/// Both modes over the same batches.
AccountingReport account(const RunEnsemble &ensemble);

/// Big-space tables from `big`, many-spaces tables from `many`. Both
/// ensembles must list the same cells.
AccountingReport account(const RunEnsemble &big, const RunEnsemble &many);

/// Max over cells and outcomes of |conditional - many-spaces|. Cells without
/// a conditional are skipped. Throws EmptyBatch for an empty report.
double compare(const AccountingReport &report);

/// Declared channel weight against completion frequency conditioned on the
/// absorber being in place. For a contingent absorber the two can differ
/// (Maudlin's B: weight 1/2, completes every run in which it swings).
struct LoopDiagnostic {
    std::string absorber;
    std::string channel;
    double declared_weight = 0.0;
    std::size_t active_trials = 0;
    std::size_t completions = 0;
    std::optional<double> loop_frequency;  // completions / active_trials
};

std::vector<LoopDiagnostic> loop_diagnostic(const Setup &setup, const TrialBatch &batch);

nlohmann::ordered_json accounting_to_json(const AccountingReport &report);
nlohmann::ordered_json diagnostics_to_json(const std::vector<LoopDiagnostic> &diagnostics);

/// Columns setup,state,outcome,mode,probability; mode is joint, conditional
/// or many_spaces.
void write_accounting_csv(std::ostream &out, const AccountingReport &report);

}  // namespace tisim

#endif  // TISIM_ACCOUNTING_H
