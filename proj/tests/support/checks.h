// Copyright 2026 The amdlv authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AMDLV_TESTS_SUPPORT_CHECKS_H_
#define AMDLV_TESTS_SUPPORT_CHECKS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "amdlv/abstract.h"
#include "amdlv/datalog.h"
#include "amdlv/explorer.h"
#include "amdlv/topology.h"
#include "support/random_program.h"

namespace amdlv::testing {

// Counts of examined cases and violations; the first few violations are
// described.
struct Report {
  size_t cases = 0;
  size_t violations = 0;
  std::vector<std::string> details;

  bool ok() const { return violations == 0; }
  void Fail(const std::string& what);
  void Merge(const Report& other);
  std::string Summary() const;
};

// Compiled relation steps against the syntax-tree oracle.
Report CheckAgainstOracle(const RandomProgram& rp);

// Relation and packet-state outcome sets agree under ps_of, on every
// reachable relation state and input.
Report CheckBisimulation(const RandomProgram& rp);

// Full packet steps projected to a pair equal the substate step.
Report CheckLocality(const RandomProgram& rp);

// Seeds 1..count of the random family.
std::vector<RandomProgram> RandomFamily(int count, uint64_t base_seed = 1);

// mu# by plain Kleene iteration of the reference transformer.
AbstractElement KleeneLfp(const Topology& topology);

// Facts of `a` missing from `b`, rendered for humans.
std::vector<std::string> MissingFacts(const Topology& topology,
                                      const AbstractElement& a,
                                      const AbstractElement& b,
                                      size_t limit = 5);

struct SoundnessResult {
  Report report;
  ExploreStatus status = ExploreStatus::kSafe;
  size_t configs = 0;
  bool truncated = false;
  bool verify_unsafe = false;
};

// Every fact of a bounded exploration is covered by mu#; an explorer error
// implies an UNSAFE verdict.
SoundnessResult CheckSoundness(const Topology& topology, Variant variant,
                               const ExplorationBounds& bounds);

struct CompletenessResult {
  // A cap k <= max_cap with alpha(k) == alpha(k+1) and no truncation.
  bool stabilized = false;
  int cap = 0;
  size_t configs = 0;
  bool equal = false;
  std::string difference;
  StickyResult sticky;
  bool verify_unsafe = false;
};

CompletenessResult CheckCompleteness(const Topology& topology, int max_cap,
                                     size_t max_configs);

// Least model of the emitted program against mu#: channel facts, non-err
// rows, aborted middleboxes and `abort`.
Report CheckDatalog(const Topology& topology, DatalogDialect dialect);

// Join and order laws plus monotonicity and extensivity of the transformer.
Report CheckLatticeLaws(const Topology& topology, int samples, uint64_t seed);

// A random element shaped like `topology`.
AbstractElement RandomElement(const Topology& topology, uint64_t seed,
                              double density);

}  // namespace amdlv::testing

#endif  // AMDLV_TESTS_SUPPORT_CHECKS_H_
