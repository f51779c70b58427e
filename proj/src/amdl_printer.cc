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

#include <string>
#include <vector>

#include "amdlv/amdl.h"

namespace amdlv {
namespace {

const char* kRecordFields[] = {"src", "dst", "type"};

bool IsWholeRecord(const std::vector<Atom>& atoms, const FieldBinding& b) {
  if (!b.is_record() || atoms.size() != kPacketArity) return false;
  for (int i = 0; i < kPacketArity; ++i) {
    if (!atoms[i].is_field() || atoms[i].field != i) return false;
  }
  return true;
}

std::string Tuple(const std::vector<Atom>& atoms, const FieldBinding& b,
                  bool allow_bare) {
  if (IsWholeRecord(atoms, b)) return b.record;
  if (allow_bare && atoms.size() == 1) return PrintAtom(atoms[0], b);
  std::string out = "(";
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) out += ", ";
    out += PrintAtom(atoms[i], b);
  }
  return out + ")";
}

std::string Cond(const Condition& c, const FieldBinding& b);

std::string Operand(const Condition& c, const FieldBinding& b) {
  if (c.kind == Condition::Kind::kAnd) return "(" + Cond(c, b) + ")";
  return Cond(c, b);
}

std::string Cond(const Condition& c, const FieldBinding& b) {
  switch (c.kind) {
    case Condition::Kind::kTrue:
      return "true";
    case Condition::Kind::kFalse:
      return "false";
    case Condition::Kind::kAnd:
      return Cond(c.operands[0], b) + " and " + Operand(c.operands[1], b);
    case Condition::Kind::kNot:
      return "not " + Operand(c.operands[0], b);
    case Condition::Kind::kEq:
      return PrintAtom(c.atoms[0], b) + " = " + PrintAtom(c.atoms[1], b);
    case Condition::Kind::kMember:
      return Tuple(c.atoms, b, true) + " in " + c.relation;
  }
  return "";
}

std::string Actions(const std::vector<Action>& actions, const FieldBinding& b) {
  std::string out;
  for (size_t i = 0; i < actions.size(); ++i) {
    if (i > 0) out += "; ";
    const Action& a = actions[i];
    switch (a.kind) {
      case Action::Kind::kSend:
        out += a.target + " ! " + Tuple(a.atoms, b, false);
        break;
      case Action::Kind::kAssign:
        out += a.target + Tuple(a.atoms, b, false) + " := " + Cond(a.value, b);
        break;
      case Action::Kind::kAbort:
        out += "abort";
        break;
      case Action::Kind::kSkip:
        out += "skip";
        break;
    }
  }
  return out;
}

void Guarded(const GuardedCommand& gc, const FieldBinding& b, int indent,
             std::string& out) {
  std::string pad(indent, ' ');
  if (!gc.is_choice) {
    out += Cond(gc.guard, b) + " => " + Actions(gc.actions, b);
    return;
  }
  out += "if ";
  for (size_t i = 0; i < gc.alternatives.size(); ++i) {
    if (i > 0) out += "\n" + pad + "[] ";
    Guarded(gc.alternatives[i], b, indent + 3, out);
  }
  out += "\n" + pad + "fi";
}

}  // namespace

std::string PrintAtom(const Atom& atom, const FieldBinding& binding) {
  if (!atom.is_field()) return atom.constant;
  if (binding.is_record()) {
    return binding.record + "." + kRecordFields[atom.field];
  }
  return binding.fields[atom.field];
}

std::string PrintQuery(const Query& query) {
  FieldBinding record;
  record.record = "p";
  return Tuple(query.atoms, record, true) + " in " + query.relation;
}

std::string PrintAmdl(const MiddleboxProgram& program) {
  std::string out;
  for (const RelationDecl& r : program.relations) {
    if (!r.declared) continue;
    out += "relation " + r.name + "(";
    for (size_t i = 0; i < r.sorts.size(); ++i) {
      if (i > 0) out += ", ";
      out += SortName(*r.sorts[i]);
    }
    out += ")\n";
  }
  out += program.name + " = do\n";
  for (size_t i = 0; i < program.blocks.size(); ++i) {
    const PacketBlock& blk = program.blocks[i];
    out += i == 0 ? "   " : "[] ";
    out += blk.channel + " ? ";
    if (blk.binding.is_record()) {
      out += blk.binding.record;
    } else {
      out += "(";
      for (size_t k = 0; k < blk.binding.fields.size(); ++k) {
        if (k > 0) out += ", ";
        out += blk.binding.fields[k];
      }
      out += ")";
    }
    out += " =>\n      ";
    Guarded(blk.body, blk.binding, 6, out);
    out += "\n";
  }
  out += "od\n";
  return out;
}

}  // namespace amdlv
