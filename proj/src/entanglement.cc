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

#include "tisim/entanglement.h"

#include <algorithm>
#include <cmath>

#include "tisim/errors.h"

namespace tisim {

namespace {

constexpr double kConservationTolerance = 1e-12;

std::complex<double> coupling_from_json(const nlohmann::json &node, const std::string &where) {
    if (!node.is_object() || node.size() != 2 || !node.contains("re") || !node.contains("im") ||
        !node.at("re").is_number() || !node.at("im").is_number()) {
        throw SchemaError(where + ": expected {re, im}");
    }
    return {node.at("re").get<double>(), node.at("im").get<double>()};
}

}  // namespace

Detector make_detector(std::string name, std::complex<double> activate, std::complex<double> pass,
                       bool irreversible) {
    if (name.empty()) {
        throw InvalidDetector("detector name must not be empty");
    }
    double norm = std::norm(activate) + std::norm(pass);
    if (std::abs(norm - 1.0) > kConservationTolerance) {
        throw InvalidDetector("detector '" + name + "': |c1|^2 + |c2|^2 = " + std::to_string(norm) + ", not 1");
    }
    return Detector{std::move(name), activate, pass, irreversible};
}

BranchTree::BranchTree() : leaves_{Branch{{}, 1.0}} {}

BranchTree::BranchTree(std::vector<Detector> chain, std::vector<Branch> leaves)
    : chain_(std::move(chain)), leaves_(std::move(leaves)) {}

double BranchTree::total_weight() const {
    // Kahan summation; chains of length 20 produce a million leaves.
    double sum = 0.0;
    double carry = 0.0;
    for (const auto &leaf : leaves_) {
        double y = leaf.weight - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

BranchTree interact(const BranchTree &tree, const Detector &detector) {
    const auto &chain = tree.chain();
    if (std::any_of(chain.begin(), chain.end(), [&](const Detector &d) { return d.name == detector.name; })) {
        throw DuplicateDetector("detector '" + detector.name + "' is already in the chain");
    }
    double p_activate = std::norm(detector.activate);
    double p_pass = std::norm(detector.pass);

    std::vector<Branch> leaves;
    leaves.reserve(tree.leaves().size() * 2);
    for (const auto &leaf : tree.leaves()) {
        for (auto [state, p] : {std::pair{DetectorState::Activated, p_activate}, std::pair{DetectorState::Ready, p_pass}}) {
            double w = leaf.weight * p;
            if (w == 0.0) {
                continue;
            }
            Branch child{leaf.path, w};
            child.path.push_back(state);
            leaves.push_back(std::move(child));
        }
    }
    auto next_chain = chain;
    next_chain.push_back(detector);
    return BranchTree(std::move(next_chain), std::move(leaves));
}

BranchTree build_chain(std::span<const Detector> detectors) {
    BranchTree tree;
    for (const auto &detector : detectors) {
        tree = interact(tree, detector);
    }
    return tree;
}

bool confirmation_eligible(const Detector &detector) {
    return detector.irreversible;
}

std::vector<Branch> transaction_capable_leaves(const BranchTree &tree) {
    std::vector<Branch> out;
    const auto &chain = tree.chain();
    for (const auto &leaf : tree.leaves()) {
        for (std::size_t i = 0; i < leaf.path.size(); ++i) {
            if (leaf.path[i] == DetectorState::Activated && confirmation_eligible(chain[i])) {
                out.push_back(leaf);
                break;
            }
        }
    }
    return out;
}

std::string path_label(const std::vector<DetectorState> &path) {
    if (path.empty()) {
        return "root";
    }
    std::string label;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) {
            label += '/';
        }
        label += path[i] == DetectorState::Activated ? "activated" : "ready";
    }
    return label;
}

std::map<std::string, double> terminal_distribution(const BranchTree &tree) {
    double total = tree.total_weight();
    if (std::abs(total - 1.0) > kConservationTolerance) {
        throw ConservationViolation("branch weights sum to " + std::to_string(total));
    }
    std::map<std::string, double> out;
    for (const auto &leaf : tree.leaves()) {
        out[path_label(leaf.path)] += leaf.weight;
    }
    return out;
}

Detector detector_from_json(const nlohmann::json &node) {
    if (!node.is_object()) {
        throw SchemaError("detector_chain[]: expected an object");
    }
    for (const auto &[key, _] : node.items()) {
        if (key != "name" && key != "c1" && key != "c2" && key != "irreversible") {
            throw SchemaError("detector_chain[]: unknown key '" + key + "'");
        }
    }
    for (auto key : {"name", "c1", "c2", "irreversible"}) {
        if (!node.contains(key)) {
            throw SchemaError(std::string("detector_chain[]: missing key '") + key + "'");
        }
    }
    if (!node.at("name").is_string() || !node.at("irreversible").is_boolean()) {
        throw SchemaError("detector_chain[]: 'name' must be a string and 'irreversible' a boolean");
    }
    auto name = node.at("name").get<std::string>();
    return make_detector(name, coupling_from_json(node.at("c1"), "detector '" + name + "'.c1"),
                         coupling_from_json(node.at("c2"), "detector '" + name + "'.c2"),
                         node.at("irreversible").get<bool>());
}

nlohmann::ordered_json detector_to_json(const Detector &detector) {
    return {{"name", detector.name},
            {"c1", {{"re", detector.activate.real()}, {"im", detector.activate.imag()}}},
            {"c2", {{"re", detector.pass.real()}, {"im", detector.pass.imag()}}},
            {"irreversible", detector.irreversible}};
}

nlohmann::ordered_json distribution_to_json(const BranchTree &tree) {
    nlohmann::ordered_json out;
    auto &distribution = out["distribution"] = nlohmann::ordered_json::object();
    for (const auto &[label, weight] : terminal_distribution(tree)) {
        distribution[label] = weight;
    }
    auto &capable = out["transaction_capable"] = nlohmann::ordered_json::array();
    for (const auto &leaf : transaction_capable_leaves(tree)) {
        capable.push_back(path_label(leaf.path));
    }
    return out;
}

}  // namespace tisim
