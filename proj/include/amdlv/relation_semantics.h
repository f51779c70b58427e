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

#ifndef AMDLV_RELATION_SEMANTICS_H_
#define AMDLV_RELATION_SEMANTICS_H_

#include <string>
#include <vector>

#include "amdlv/interpreter.h"
#include "amdlv/packet.h"
#include "amdlv/program.h"

namespace amdlv {

// Middlebox state as one sorted tuple set per relation, or err.
struct RelationState {
  bool is_err = false;
  std::vector<std::vector<TupleCode>> tuples;

  static RelationState Initial(const CompiledProgram& program);
  static RelationState Err(const CompiledProgram& program);

  bool Contains(int relation, TupleCode tuple) const;
  void Set(int relation, TupleCode tuple, bool present);

  bool err() const { return is_err; }
  bool Member(const StepContext& ctx, int query, const Packet& p) const;
  void Assign(const StepContext& ctx, int relation, const ValueCode* values,
              bool b, const Packet& p);
  void SetErr();

  friend bool operator==(const RelationState&, const RelationState&) = default;
  friend auto operator<=>(const RelationState&, const RelationState&) = default;
};

struct RelationOutcome {
  RelationState state;
  Emission emission;

  friend bool operator==(const RelationOutcome&,
                         const RelationOutcome&) = default;
  friend auto operator<=>(const RelationOutcome&,
                          const RelationOutcome&) = default;
};

ValueCode EvalAtom(const CompiledAtom& atom, const Packet& p);

// Evaluates condition node `cond` of the program.
bool EvalRelationCond(const CompiledProgram& program, int cond,
                      const RelationState& state, const Packet& p);

// All outcomes of one step, sorted and duplicate-free.
std::vector<RelationOutcome> StepRelation(const CompiledProgram& program,
                                          const RelationState& state,
                                          const Packet& p, int channel);

std::string DescribeRelationState(const CompiledProgram& program,
                                  const RelationState& state);

}  // namespace amdlv

#endif  // AMDLV_RELATION_SEMANTICS_H_
