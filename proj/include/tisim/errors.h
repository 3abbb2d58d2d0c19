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

#ifndef TISIM_ERRORS_H
#define TISIM_ERRORS_H

#include <stdexcept>
#include <string>

namespace tisim {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define TISIM_DEFINE_ERROR(name, base) \
    struct name : base {               \
        using base::base;              \
    }

// Scenario construction.
TISIM_DEFINE_ERROR(ScenarioError, Error);
TISIM_DEFINE_ERROR(SchemaError, ScenarioError);
TISIM_DEFINE_ERROR(NormalizationError, ScenarioError);
TISIM_DEFINE_ERROR(DanglingReference, ScenarioError);
TISIM_DEFINE_ERROR(PredicateCycle, ScenarioError);
TISIM_DEFINE_ERROR(RangeError, ScenarioError);

TISIM_DEFINE_ERROR(IoError, Error);
TISIM_DEFINE_ERROR(UnknownAbsorber, Error);

// History enumeration and transaction resolution.
TISIM_DEFINE_ERROR(TooLarge, Error);
TISIM_DEFINE_ERROR(NotWellPosed, Error);
TISIM_DEFINE_ERROR(NoConsistentHistory, Error);

TISIM_DEFINE_ERROR(DeficitPresent, Error);

// Detector chains.
TISIM_DEFINE_ERROR(InvalidDetector, Error);
TISIM_DEFINE_ERROR(DuplicateDetector, Error);
// Raised when branch weights stop summing to one. Always an internal bug.
TISIM_DEFINE_ERROR(ConservationViolation, Error);

// Probability accounting.
TISIM_DEFINE_ERROR(PriorsNotNormalized, Error);
TISIM_DEFINE_ERROR(EmptyBatch, Error);
TISIM_DEFINE_ERROR(DuplicateCell, Error);
TISIM_DEFINE_ERROR(CellMismatch, Error);

#undef TISIM_DEFINE_ERROR

}  // namespace tisim

#endif  // TISIM_ERRORS_H
