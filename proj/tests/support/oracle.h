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

#ifndef AMDLV_TESTS_SUPPORT_ORACLE_H_
#define AMDLV_TESTS_SUPPORT_ORACLE_H_

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "amdlv/ast.h"
#include "amdlv/packet.h"
#include "amdlv/program.h"
#include "amdlv/relation_semantics.h"

namespace amdlv::testing {

// Straight reading of a parsed program: relations by name, tuples as value
// vectors, guards evaluated on the syntax tree.
struct OracleState {
  bool err = false;
  std::map<std::string, std::set<std::vector<ValueCode>>> relations;
  friend auto operator<=>(const OracleState&, const OracleState&) = default;
};

struct OracleSend {
  std::string channel;
  Packet packet;
  friend auto operator<=>(const OracleSend&, const OracleSend&) = default;
};

using OracleOutcome = std::pair<OracleState, std::vector<OracleSend>>;

std::set<OracleOutcome> OracleStep(const MiddleboxProgram& program,
                                   const ConstantResolver& resolve,
                                   const OracleState& state, const Packet& p,
                                   const std::string& channel);

// The same outcome set from the compiled relation semantics.
std::set<OracleOutcome> CompiledOutcomes(const CompiledProgram& program,
                                         const RelationState& state,
                                         const Packet& p, int channel);

OracleState ToOracle(const CompiledProgram& program, const RelationState& s);

}  // namespace amdlv::testing

#endif  // AMDLV_TESTS_SUPPORT_ORACLE_H_
