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

#include "amdlv/ast.h"

#include <utility>

namespace amdlv {

const char* SortName(Sort sort) {
  return sort == Sort::kHost ? "host" : "tag";
}

Sort FieldSort(int field) {
  return field == kFieldTag ? Sort::kTag : Sort::kHost;
}

Atom Atom::Field(int index, SourcePos pos) {
  Atom atom;
  atom.kind = Kind::kField;
  atom.field = index;
  atom.pos = pos;
  return atom;
}

Atom Atom::Constant(std::string name, SourcePos pos) {
  Atom atom;
  atom.kind = Kind::kConstant;
  atom.constant = std::move(name);
  atom.pos = pos;
  return atom;
}

bool operator==(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return false;
  return a.is_field() ? a.field == b.field : a.constant == b.constant;
}

bool operator==(const Query& a, const Query& b) {
  return a.relation == b.relation && a.atoms == b.atoms;
}

Condition Condition::True() { return Condition{}; }

Condition Condition::False() {
  Condition c;
  c.kind = Kind::kFalse;
  return c;
}

Condition Condition::And(Condition lhs, Condition rhs) {
  Condition c;
  c.kind = Kind::kAnd;
  c.pos = lhs.pos;
  c.operands.push_back(std::move(lhs));
  c.operands.push_back(std::move(rhs));
  return c;
}

Condition Condition::Not(Condition operand) {
  Condition c;
  c.kind = Kind::kNot;
  c.pos = operand.pos;
  c.operands.push_back(std::move(operand));
  return c;
}

Condition Condition::Eq(Atom lhs, Atom rhs) {
  Condition c;
  c.kind = Kind::kEq;
  c.pos = lhs.pos;
  c.atoms = {std::move(lhs), std::move(rhs)};
  return c;
}

Condition Condition::Member(std::vector<Atom> tuple, std::string relation) {
  Condition c;
  c.kind = Kind::kMember;
  c.atoms = std::move(tuple);
  c.relation = std::move(relation);
  return c;
}

bool operator==(const Condition& a, const Condition& b) {
  return a.kind == b.kind && a.operands == b.operands && a.atoms == b.atoms &&
         a.relation == b.relation && a.query == b.query;
}

bool operator==(const Action& a, const Action& b) {
  return a.kind == b.kind && a.target == b.target && a.atoms == b.atoms &&
         a.value == b.value;
}

bool operator==(const GuardedCommand& a, const GuardedCommand& b) {
  return a.is_choice == b.is_choice && a.guard == b.guard &&
         a.actions == b.actions && a.alternatives == b.alternatives;
}

int FieldBinding::arity() const {
  return is_record() ? kPacketArity : static_cast<int>(fields.size());
}

bool operator==(const FieldBinding& a, const FieldBinding& b) {
  return a.record == b.record && a.fields == b.fields;
}

bool operator==(const PacketBlock& a, const PacketBlock& b) {
  return a.channel == b.channel && a.binding == b.binding && a.body == b.body;
}

bool operator==(const RelationDecl& a, const RelationDecl& b) {
  return a.name == b.name && a.sorts == b.sorts && a.declared == b.declared;
}

bool operator==(const MiddleboxProgram& a, const MiddleboxProgram& b) {
  return a.name == b.name && a.relations == b.relations &&
         a.blocks == b.blocks && a.queries == b.queries &&
         a.channel_names == b.channel_names;
}

int MiddleboxProgram::FindRelation(const std::string& rel) const {
  for (size_t i = 0; i < relations.size(); ++i) {
    if (relations[i].name == rel) return static_cast<int>(i);
  }
  return -1;
}

int MiddleboxProgram::FindChannel(const std::string& channel) const {
  for (size_t i = 0; i < channel_names.size(); ++i) {
    if (channel_names[i] == channel) return static_cast<int>(i);
  }
  return -1;
}

int MiddleboxProgram::FindQuery(const Query& query) const {
  for (size_t i = 0; i < queries.size(); ++i) {
    if (queries[i] == query) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace amdlv
