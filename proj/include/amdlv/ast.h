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

#ifndef AMDLV_AST_H_
#define AMDLV_AST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace amdlv {

// Packets have exactly three components: source host, destination host, tag.
inline constexpr int kPacketArity = 3;
inline constexpr int kFieldSrc = 0;
inline constexpr int kFieldDst = 1;
inline constexpr int kFieldTag = 2;

enum class Sort : uint8_t { kHost, kTag };

const char* SortName(Sort sort);
Sort FieldSort(int field);

struct SourcePos {
  int line = 0;
  int column = 0;
};

// A field reference (positional, into the enclosing block's binding) or a
// named constant resolved later against the topology.
struct Atom {
  enum class Kind : uint8_t { kField, kConstant };

  Kind kind = Kind::kConstant;
  int field = -1;
  std::string constant;
  SourcePos pos;

  static Atom Field(int index, SourcePos pos = {});
  static Atom Constant(std::string name, SourcePos pos = {});

  bool is_field() const { return kind == Kind::kField; }
};

// Structural equality ignoring source positions.
bool operator==(const Atom& a, const Atom& b);

struct Query {
  std::string relation;
  std::vector<Atom> atoms;
};

bool operator==(const Query& a, const Query& b);

struct Condition {
  enum class Kind : uint8_t { kTrue, kFalse, kAnd, kNot, kEq, kMember };

  Kind kind = Kind::kTrue;
  std::vector<Condition> operands;
  std::vector<Atom> atoms;
  std::string relation;
  int query = -1;
  SourcePos pos;

  static Condition True();
  static Condition False();
  static Condition And(Condition lhs, Condition rhs);
  static Condition Not(Condition operand);
  static Condition Eq(Atom lhs, Atom rhs);
  static Condition Member(std::vector<Atom> tuple, std::string relation);
};

bool operator==(const Condition& a, const Condition& b);

struct Action {
  enum class Kind : uint8_t { kSend, kAssign, kAbort, kSkip };

  Kind kind = Kind::kSkip;
  // Channel name for sends, relation name for assignments.
  std::string target;
  std::vector<Atom> atoms;
  Condition value;
  SourcePos pos;
};

bool operator==(const Action& a, const Action& b);

// Either a leaf `guard => actions` or a choice `if alt [] ... [] alt fi`.
struct GuardedCommand {
  bool is_choice = false;
  Condition guard;
  std::vector<Action> actions;
  std::vector<GuardedCommand> alternatives;
  SourcePos pos;
};

bool operator==(const GuardedCommand& a, const GuardedCommand& b);

// `c ? p` binds a record variable whose fields are src/dst/type;
// `c ? (a, b, t)` binds positional names.
struct FieldBinding {
  std::string record;
  std::vector<std::string> fields;

  bool is_record() const { return !record.empty(); }
  int arity() const;
};

bool operator==(const FieldBinding& a, const FieldBinding& b);

struct PacketBlock {
  std::string channel;
  FieldBinding binding;
  GuardedCommand body;
  SourcePos pos;
};

bool operator==(const PacketBlock& a, const PacketBlock& b);

struct RelationDecl {
  std::string name;
  // Unknown entries occur for inferred relations used only with constants;
  // they are fixed when constants are resolved.
  std::vector<std::optional<Sort>> sorts;
  bool declared = false;
  SourcePos pos;

  int arity() const { return static_cast<int>(sorts.size()); }
};

bool operator==(const RelationDecl& a, const RelationDecl& b);

struct MiddleboxProgram {
  std::string name;
  std::vector<RelationDecl> relations;
  std::vector<PacketBlock> blocks;
  std::vector<Query> queries;
  std::vector<std::string> channel_names;
  std::vector<std::string> warnings;

  int FindRelation(const std::string& name) const;
  int FindChannel(const std::string& name) const;
  int FindQuery(const Query& query) const;
};

bool operator==(const MiddleboxProgram& a, const MiddleboxProgram& b);

}  // namespace amdlv

#endif  // AMDLV_AST_H_
