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

#ifndef TISIM_ENTANGLEMENT_H
#define TISIM_ENTANGLEMENT_H

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace tisim {

/// A detector the outgoing particle can entangle with. `activate` is the
/// amplitude of the branch that triggers the detector, `pass` the amplitude of
/// the branch that leaves it in its ready state.
///
/// Couplings are fixed per detector. Branch-dependent couplings would replace
/// these two fields with a function of the incoming path.
struct Detector {
    std::string name;
    std::complex<double> activate;
    std::complex<double> pass;
    bool irreversible = false;

    bool operator==(const Detector &) const = default;
};

/// Validating constructor: |activate|^2 + |pass|^2 must be 1 within 1e-12.
Detector make_detector(std::string name, std::complex<double> activate, std::complex<double> pass, bool irreversible);

enum class DetectorState : uint8_t { Ready, Activated };

struct Branch {
    std::vector<DetectorState> path;  // one entry per detector in the chain
    double weight = 0.0;

    bool operator==(const Branch &) const = default;
};

/// Product tree of detector interactions. Leaves with zero weight are pruned.
class BranchTree {
   public:
    /// The root: empty chain, a single unit-weight leaf.
    BranchTree();
    /// Raw constructor. Does not check conservation; terminal_distribution does.
    BranchTree(std::vector<Detector> chain, std::vector<Branch> leaves);

    const std::vector<Detector> &chain() const { return chain_; }
    const std::vector<Branch> &leaves() const { return leaves_; }
    double total_weight() const;

   private:
    std::vector<Detector> chain_;
    std::vector<Branch> leaves_;
};

/// Splits every leaf into an activated branch (weight w|c1|^2) and a ready
/// branch (weight w|c2|^2). Throws DuplicateDetector if the name is already in
/// the chain.
BranchTree interact(const BranchTree &tree, const Detector &detector);

/// Folds interact over `detectors`, starting from the root.
BranchTree build_chain(std::span<const Detector> detectors);

/// Only irreversible entanglement can emit a confirmation wave.
bool confirmation_eligible(const Detector &detector);

/// Leaves whose path activates at least one irreversible detector.
std::vector<Branch> transaction_capable_leaves(const BranchTree &tree);

/// Leaf weights keyed by path label ("root" for the empty chain, otherwise
/// states joined by '/'). Throws ConservationViolation if the weights do not
/// sum to 1 within 1e-12.
std::map<std::string, double> terminal_distribution(const BranchTree &tree);

std::string path_label(const std::vector<DetectorState> &path);

Detector detector_from_json(const nlohmann::json &node);
nlohmann::ordered_json detector_to_json(const Detector &detector);
nlohmann::ordered_json distribution_to_json(const BranchTree &tree);

}  // namespace tisim

#endif  // TISIM_ENTANGLEMENT_H
