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

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amdlv/amdl.h"
#include "amdlv/error.h"

namespace amdlv {
namespace {

enum class Tok { kIdent, kInt, kSym, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  SourcePos pos;
};

std::vector<Token> Lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.compare(i, 2, "//") == 0) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.pos = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_')) {
        ++j;
      }
      tok.kind = Tok::kIdent;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      tok.kind = Tok::kInt;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    static constexpr std::string_view kTwo[] = {"=>", ":=", "!=", "[]"};
    bool matched = false;
    for (std::string_view sym : kTwo) {
      if (src.compare(i, sym.size(), sym) == 0) {
        tok.kind = Tok::kSym;
        tok.text = std::string(sym);
        advance(sym.size());
        matched = true;
        break;
      }
    }
    if (!matched && src.compare(i, 3, "□") == 0) {
      tok.kind = Tok::kSym;
      tok.text = "[]";
      advance(3);
      matched = true;
    }
    if (!matched) {
      static constexpr std::string_view kOne = "?!;,().=";
      if (kOne.find(c) == std::string_view::npos) {
        throw Error(ErrorKind::kSyntax,
                    std::string("unexpected character '") + c + "'", line, col);
      }
      tok.kind = Tok::kSym;
      tok.text = std::string(1, c);
      advance(1);
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

bool IsKeyword(const std::string& s) {
  static const char* kWords[] = {"do",  "od",    "if",       "fi",   "true",
                                 "false", "and", "not",      "in",   "abort",
                                 "skip", "relation"};
  for (const char* w : kWords) {
    if (s == w) return true;
  }
  return false;
}

struct RelationUse {
  std::vector<std::optional<Sort>> sorts;
  SourcePos pos;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  MiddleboxProgram Run() {
    MiddleboxProgram prog;
    ParseDecls();
    prog.name = ExpectIdent("program name");
    Expect("=");
    ParseDecls();
    ExpectWord("do");
    do {
      prog.blocks.push_back(ParseBlock());
    } while (Accept("[]"));
    ExpectWord("od");
    if (Peek().kind != Tok::kEnd) Fail("expected end of input after 'od'");
    Finish(prog);
    return prog;
  }

 private:
  const Token& Peek(int ahead = 0) const {
    size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  bool IsSym(const char* s, int ahead = 0) const {
    return Peek(ahead).kind == Tok::kSym && Peek(ahead).text == s;
  }
  bool IsWord(const char* s, int ahead = 0) const {
    return Peek(ahead).kind == Tok::kIdent && Peek(ahead).text == s;
  }
  bool Accept(const char* s) {
    if (IsSym(s)) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool AcceptWord(const char* s) {
    if (IsWord(s)) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void Fail(const std::string& msg) const {
    const Token& t = Peek();
    std::string near = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorKind::kSyntax, msg + " near " + near, t.pos.line,
                t.pos.column);
  }
  void Expect(const char* s) {
    if (!Accept(s)) Fail(std::string("expected '") + s + "'");
  }
  void ExpectWord(const char* s) {
    if (!AcceptWord(s)) Fail(std::string("expected '") + s + "'");
  }
  std::string ExpectIdent(const char* what) {
    if (Peek().kind != Tok::kIdent || IsKeyword(Peek().text)) {
      Fail(std::string("expected ") + what);
    }
    return toks_[pos_++].text;
  }

  void ParseDecls() {
    while (IsWord("relation")) {
      SourcePos at = Peek().pos;
      ++pos_;
      RelationDecl decl;
      decl.name = ExpectIdent("relation name");
      decl.declared = true;
      decl.pos = at;
      Expect("(");
      if (!IsSym(")")) {
        do {
          std::string sort = ExpectIdent("sort");
          if (sort == "host") {
            decl.sorts.push_back(Sort::kHost);
          } else if (sort == "tag") {
            decl.sorts.push_back(Sort::kTag);
          } else {
            --pos_;
            Fail("expected sort 'host' or 'tag'");
          }
        } while (Accept(","));
      }
      Expect(")");
      Accept(";");
      for (const RelationDecl& d : decls_) {
        if (d.name == decl.name) {
          throw Error(ErrorKind::kValidation,
                      "relation '" + decl.name + "' declared twice", at.line,
                      at.column);
        }
      }
      decls_.push_back(std::move(decl));
    }
  }

  PacketBlock ParseBlock() {
    PacketBlock block;
    block.pos = Peek().pos;
    block.channel = ExpectIdent("channel name");
    NoteChannel(block.channel);
    Expect("?");
    if (Accept("(")) {
      if (!IsSym(")")) {
        do {
          SourcePos at = Peek().pos;
          std::string f = ExpectIdent("field name");
          for (const std::string& g : block.binding.fields) {
            if (g == f) {
              throw Error(ErrorKind::kValidation,
                          "field '" + f + "' bound twice", at.line, at.column);
            }
          }
          block.binding.fields.push_back(f);
        } while (Accept(","));
      }
      Expect(")");
      if (block.binding.fields.size() > kPacketArity) {
        throw Error(ErrorKind::kArity,
                    "packet binding has more than 3 fields", block.pos.line,
                    block.pos.column);
      }
    } else {
      block.binding.record = ExpectIdent("packet variable");
    }
    Expect("=>");
    binding_ = &block.binding;
    block.body = ParseGuarded();
    binding_ = nullptr;
    return block;
  }

  GuardedCommand ParseGuarded() {
    GuardedCommand gc;
    gc.pos = Peek().pos;
    if (AcceptWord("if")) {
      gc.is_choice = true;
      do {
        gc.alternatives.push_back(ParseGuarded());
      } while (Accept("[]"));
      ExpectWord("fi");
      return gc;
    }
    gc.guard = ParseCond();
    Expect("=>");
    gc.actions = ParseActions();
    return gc;
  }

  std::vector<Action> ParseActions() {
    std::vector<Action> out;
    bool aborted = false;
    do {
      Action a = ParseAction();
      if (aborted) {
        warnings_.push_back(std::to_string(a.pos.line) + ":" +
                            std::to_string(a.pos.column) +
                            ": action after abort is unreachable");
      }
      if (a.kind == Action::Kind::kAbort) aborted = true;
      out.push_back(std::move(a));
    } while (Accept(";"));
    return out;
  }

  Action ParseAction() {
    Action a;
    a.pos = Peek().pos;
    if (AcceptWord("abort")) {
      a.kind = Action::Kind::kAbort;
      return a;
    }
    if (AcceptWord("skip")) {
      a.kind = Action::Kind::kSkip;
      return a;
    }
    std::string name = ExpectIdent("action");
    if (Accept("!")) {
      a.kind = Action::Kind::kSend;
      a.target = name;
      NoteChannel(name);
      SourcePos at = Peek().pos;
      a.atoms = ParseTuple();
      if (a.atoms.size() != kPacketArity) {
        throw Error(ErrorKind::kArity, "sent packet must have 3 components",
                    at.line, at.column);
      }
      return a;
    }
    if (IsSym("(")) {
      a.kind = Action::Kind::kAssign;
      a.target = name;
      a.atoms = ParseParenAtoms();
      Expect(":=");
      a.value = ParseCond();
      UseRelation(name, a.atoms, a.pos);
      return a;
    }
    Fail("expected '!' or '(' after '" + name + "'");
  }

  // `(a, b)` or a single atom; a bare record variable expands to all fields.
  std::vector<Atom> ParseTuple() {
    if (IsSym("(")) return ParseParenAtoms();
    return ParseAtomOrRecord();
  }

  std::vector<Atom> ParseParenAtoms() {
    Expect("(");
    std::vector<Atom> out;
    if (!IsSym(")")) {
      do {
        std::vector<Atom> part = ParseAtomOrRecord();
        out.insert(out.end(), part.begin(), part.end());
      } while (Accept(","));
    }
    Expect(")");
    return out;
  }

  std::vector<Atom> ParseAtomOrRecord() {
    const Token& t = Peek();
    SourcePos at = t.pos;
    if (t.kind == Tok::kInt) {
      ++pos_;
      return {Atom::Constant(t.text, at)};
    }
    if (t.kind != Tok::kIdent || IsKeyword(t.text)) Fail("expected atom");
    std::string name = t.text;
    ++pos_;
    if (Accept(".")) {
      std::string field = ExpectIdent("field name");
      if (binding_ == nullptr || !binding_->is_record() ||
          binding_->record != name) {
        throw Error(ErrorKind::kUnboundField,
                    "'" + name + "." + field + "' is not bound by the block",
                    at.line, at.column);
      }
      int idx = -1;
      if (field == "src") idx = kFieldSrc;
      if (field == "dst") idx = kFieldDst;
      if (field == "type" || field == "tag") idx = kFieldTag;
      if (idx < 0) {
        throw Error(ErrorKind::kUnboundField,
                    "packet has no field '" + field + "'", at.line, at.column);
      }
      return {Atom::Field(idx, at)};
    }
    if (binding_ != nullptr && binding_->is_record() &&
        binding_->record == name) {
      return {Atom::Field(kFieldSrc, at), Atom::Field(kFieldDst, at),
              Atom::Field(kFieldTag, at)};
    }
    if (binding_ != nullptr) {
      for (size_t i = 0; i < binding_->fields.size(); ++i) {
        if (binding_->fields[i] == name) {
          return {Atom::Field(static_cast<int>(i), at)};
        }
      }
    }
    return {Atom::Constant(name, at)};
  }

  Atom ParseSingleAtom() {
    SourcePos at = Peek().pos;
    std::vector<Atom> a = ParseAtomOrRecord();
    if (a.size() != 1) {
      throw Error(ErrorKind::kArity, "a whole packet cannot be compared",
                  at.line, at.column);
    }
    return a[0];
  }

  Condition ParseCond() {
    Condition lhs = ParseUnary();
    while (AcceptWord("and")) {
      lhs = Condition::And(std::move(lhs), ParseUnary());
    }
    return lhs;
  }

  Condition ParseUnary() {
    SourcePos at = Peek().pos;
    if (AcceptWord("not")) {
      Condition c = Condition::Not(ParseUnary());
      c.pos = at;
      return c;
    }
    return ParsePrimary();
  }

  Condition ParsePrimary() {
    SourcePos at = Peek().pos;
    if (AcceptWord("true")) {
      Condition c = Condition::True();
      c.pos = at;
      return c;
    }
    if (AcceptWord("false")) {
      Condition c = Condition::False();
      c.pos = at;
      return c;
    }
    if (IsSym("(")) {
      size_t save = pos_;
      std::optional<std::vector<Atom>> tuple;
      try {
        tuple = ParseParenAtoms();
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kSyntax) throw;
        tuple.reset();
      }
      if (tuple && (IsWord("in") || IsSym("=") || IsSym("!="))) {
        return Relational(std::move(*tuple), at);
      }
      pos_ = save;
      Expect("(");
      Condition inner = ParseCond();
      Expect(")");
      return inner;
    }
    return Relational(ParseAtomOrRecord(), at);
  }

  Condition Relational(std::vector<Atom> lhs, SourcePos at) {
    if (AcceptWord("in")) {
      std::string rel = ExpectIdent("relation name");
      UseRelation(rel, lhs, at);
      Condition c = Condition::Member(std::move(lhs), rel);
      c.pos = at;
      return c;
    }
    bool negated = false;
    if (Accept("!=")) {
      negated = true;
    } else {
      Expect("=");
    }
    if (lhs.size() != 1) {
      throw Error(ErrorKind::kArity, "equality compares single atoms",
                  at.line, at.column);
    }
    Atom rhs = ParseSingleAtom();
    if (lhs[0].is_field() && rhs.is_field() &&
        FieldSort(lhs[0].field) != FieldSort(rhs.field)) {
      throw Error(ErrorKind::kSort, "comparison of a host and a tag field",
                  at.line, at.column);
    }
    Condition c = Condition::Eq(std::move(lhs[0]), std::move(rhs));
    c.pos = at;
    if (negated) {
      c = Condition::Not(std::move(c));
      c.pos = at;
    }
    return c;
  }

  void NoteChannel(const std::string& name) {
    for (const std::string& c : channels_) {
      if (c == name) return;
    }
    channels_.push_back(name);
  }

  void UseRelation(const std::string& name, const std::vector<Atom>& atoms,
                   SourcePos at) {
    if (atoms.size() > 4) {
      throw Error(ErrorKind::kArity,
                  "relation '" + name + "' has arity above 4", at.line,
                  at.column);
    }
    std::vector<std::optional<Sort>> sorts;
    for (const Atom& a : atoms) {
      if (a.is_field()) {
        sorts.push_back(FieldSort(a.field));
      } else {
        sorts.push_back(std::nullopt);
      }
    }
    uses_.emplace_back(name, RelationUse{sorts, at});
  }

  void Finish(MiddleboxProgram& prog) {
    if (!decls_.empty()) {
      for (const auto& [name, use] : uses_) {
        const RelationDecl* decl = nullptr;
        for (const RelationDecl& d : decls_) {
          if (d.name == name) decl = &d;
        }
        if (decl == nullptr) {
          throw Error(ErrorKind::kUnknownRelation,
                      "relation '" + name + "' is not declared", use.pos.line,
                      use.pos.column);
        }
        CheckUse(name, decl->sorts, use);
      }
      prog.relations = decls_;
    } else {
      for (const auto& [name, use] : uses_) {
        RelationDecl* decl = nullptr;
        for (RelationDecl& d : prog.relations) {
          if (d.name == name) decl = &d;
        }
        if (decl == nullptr) {
          RelationDecl d;
          d.name = name;
          d.sorts = use.sorts;
          d.pos = use.pos;
          prog.relations.push_back(std::move(d));
          continue;
        }
        CheckUse(name, decl->sorts, use);
        for (size_t i = 0; i < decl->sorts.size(); ++i) {
          if (!decl->sorts[i]) decl->sorts[i] = use.sorts[i];
        }
      }
    }
    prog.channel_names = channels_;
    prog.warnings = warnings_;
    IndexQueries(prog);
  }

  static void CheckUse(const std::string& name,
                       const std::vector<std::optional<Sort>>& sorts,
                       const RelationUse& use) {
    if (sorts.size() != use.sorts.size()) {
      throw Error(ErrorKind::kArity,
                  "relation '" + name + "' used with " +
                      std::to_string(use.sorts.size()) + " arguments, expected " +
                      std::to_string(sorts.size()),
                  use.pos.line, use.pos.column);
    }
    for (size_t i = 0; i < sorts.size(); ++i) {
      if (sorts[i] && use.sorts[i] && *sorts[i] != *use.sorts[i]) {
        throw Error(ErrorKind::kSort,
                    "argument " + std::to_string(i + 1) + " of '" + name +
                        "' expects a " + SortName(*sorts[i]),
                    use.pos.line, use.pos.column);
      }
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  const FieldBinding* binding_ = nullptr;
  std::vector<RelationDecl> decls_;
  std::vector<std::pair<std::string, RelationUse>> uses_;
  std::vector<std::string> channels_;
  std::vector<std::string> warnings_;
};

}  // namespace

MiddleboxProgram ParseAmdl(std::string_view source) {
  return Parser(Lex(source)).Run();
}

MiddleboxProgram ParseAmdlFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseAmdl(buf.str());
}

}  // namespace amdlv
