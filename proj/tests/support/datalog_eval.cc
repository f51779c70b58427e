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

#include "support/datalog_eval.h"

#include <cctype>
#include <stdexcept>
#include <unordered_map>

namespace amdlv::testing {
namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  DlProgram Parse() {
    DlProgram out;
    while (true) {
      SkipSpace();
      if (pos_ >= text_.size()) break;
      if (text_[pos_] == '.') {
        SkipLine();
        continue;
      }
      DlRule rule;
      rule.head = ParseAtom();
      SkipSpace();
      if (Accept(":-")) {
        do {
          rule.body.push_back(ParseAtom());
        } while (Accept(","));
      }
      if (!Accept(".")) Fail("expected '.'");
      for (const DlArg& a : rule.head.args) {
        if (a.is_var && !BoundIn(a.text, rule.body)) {
          Fail("unbound head variable " + a.text);
        }
      }
      out.rules.push_back(std::move(rule));
    }
    return out;
  }

 private:
  static bool BoundIn(const std::string& v, const std::vector<DlAtom>& body) {
    for (const DlAtom& atom : body) {
      for (const DlArg& a : atom.args) {
        if (a.is_var && a.text == v) return true;
      }
    }
    return false;
  }

  [[noreturn]] void Fail(const std::string& what) {
    size_t line = 1;
    for (size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') ++line;
    }
    throw std::runtime_error("datalog line " + std::to_string(line) + ": " +
                             what);
  }

  void SkipLine() {
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
  }

  void SkipSpace() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_.compare(pos_, 2, "//") == 0) {
        SkipLine();
      } else {
        break;
      }
    }
  }

  bool Accept(const std::string& s) {
    SkipSpace();
    if (text_.compare(pos_, s.size(), s) != 0) return false;
    pos_ += s.size();
    return true;
  }

  std::string Ident() {
    SkipSpace();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) Fail("expected identifier");
    return text_.substr(start, pos_ - start);
  }

  DlAtom ParseAtom() {
    DlAtom atom;
    atom.predicate = Ident();
    if (!Accept("(")) return atom;
    if (Accept(")")) return atom;
    do {
      atom.args.push_back(ParseArg());
    } while (Accept(","));
    if (!Accept(")")) Fail("expected ')'");
    return atom;
  }

  DlArg ParseArg() {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == '"') {
      size_t end = text_.find('"', pos_ + 1);
      if (end == std::string::npos) Fail("unterminated string");
      DlArg a{false, text_.substr(pos_ + 1, end - pos_ - 1)};
      pos_ = end + 1;
      return a;
    }
    std::string word = Ident();
    if (word == "true") return {false, "1"};
    if (word == "false") return {false, "0"};
    if (std::isdigit(static_cast<unsigned char>(word[0]))) return {false, word};
    if (std::isupper(static_cast<unsigned char>(word[0]))) {
      Fail("uppercase identifier " + word + " is neither variable nor constant");
    }
    return {true, word};
  }

  const std::string& text_;
  size_t pos_ = 0;
};

// Tuples over interned constants.
using Ids = std::vector<int>;

struct IdsHash {
  size_t operator()(const Ids& v) const {
    size_t h = v.size();
    for (int x : v) h = h * 1000003u ^ static_cast<size_t>(x);
    return h;
  }
};

using Relation = std::unordered_map<Ids, char, IdsHash>;

struct CArg {
  bool is_var;
  int id;  // constant id or variable slot
};

struct CAtom {
  int predicate;
  std::vector<CArg> args;
};

struct CRule {
  CAtom head;
  std::vector<CAtom> body;
  int vars = 0;
};

class Engine {
 public:
  explicit Engine(const DlProgram& program) {
    for (const DlRule& r : program.rules) rules_.push_back(Compile(r));
    total_.resize(predicates_.size());
    lists_.resize(predicates_.size());
    index_.resize(predicates_.size());
  }

  size_t Run() {
    std::vector<std::vector<Ids>> delta(predicates_.size());
    for (const CRule& r : rules_) {
      if (!r.body.empty()) continue;
      Ids t;
      for (const CArg& a : r.head.args) t.push_back(a.id);
      if (Insert(r.head.predicate, t)) delta[r.head.predicate].push_back(t);
    }
    size_t rounds = 0;
    while (true) {
      bool any = false;
      for (const auto& d : delta) any = any || !d.empty();
      if (!any) break;
      ++rounds;
      std::vector<std::vector<Ids>> next(predicates_.size());
      for (const CRule& r : rules_) {
        for (size_t i = 0; i < r.body.size(); ++i) {
          const std::vector<Ids>& d = delta[r.body[i].predicate];
          if (d.empty()) continue;
          std::vector<int> env(r.vars, -1);
          for (const Ids& t : d) {
            std::vector<int> saved = env;
            if (Bind(r.body[i], t, env)) Join(r, i, 0, env, next);
            env = saved;
          }
        }
      }
      delta = std::move(next);
    }
    return rounds;
  }

  std::map<std::string, std::set<DlTuple>> Facts() const {
    std::map<std::string, std::set<DlTuple>> out;
    for (size_t p = 0; p < predicates_.size(); ++p) {
      std::set<DlTuple>& dst = out[predicates_[p]];
      for (const auto& [t, unused] : total_[p]) {
        DlTuple row;
        for (int id : t) row.push_back(constants_[id]);
        dst.insert(std::move(row));
      }
    }
    return out;
  }

 private:
  int Intern(std::vector<std::string>& names,
             std::unordered_map<std::string, int>& ids, const std::string& s) {
    auto [it, inserted] = ids.emplace(s, static_cast<int>(names.size()));
    if (inserted) names.push_back(s);
    return it->second;
  }

  CAtom CompileAtom(const DlAtom& a, std::unordered_map<std::string, int>& vars) {
    CAtom out;
    out.predicate = Intern(predicates_, predicate_ids_,
                           a.predicate + "/" + std::to_string(a.args.size()));
    for (const DlArg& arg : a.args) {
      if (arg.is_var) {
        auto [it, inserted] =
            vars.emplace(arg.text, static_cast<int>(vars.size()));
        out.args.push_back({true, it->second});
      } else {
        out.args.push_back({false, Intern(constants_, constant_ids_, arg.text)});
      }
    }
    return out;
  }

  CRule Compile(const DlRule& r) {
    CRule out;
    std::unordered_map<std::string, int> vars;
    for (const DlAtom& a : r.body) out.body.push_back(CompileAtom(a, vars));
    out.head = CompileAtom(r.head, vars);
    out.vars = static_cast<int>(vars.size());
    return out;
  }

  static bool Bind(const CAtom& a, const Ids& t, std::vector<int>& env) {
    for (size_t k = 0; k < a.args.size(); ++k) {
      const CArg& arg = a.args[k];
      if (!arg.is_var) {
        if (arg.id != t[k]) return false;
      } else if (env[arg.id] < 0) {
        env[arg.id] = t[k];
      } else if (env[arg.id] != t[k]) {
        return false;
      }
    }
    return true;
  }

  // Joins body atoms other than `fixed` against the current totals.
  void Join(const CRule& r, size_t fixed, size_t at, std::vector<int>& env,
            std::vector<std::vector<Ids>>& next) {
    if (at == r.body.size()) {
      Ids t;
      for (const CArg& a : r.head.args) t.push_back(a.is_var ? env[a.id] : a.id);
      if (Insert(r.head.predicate, t)) next[r.head.predicate].push_back(t);
      return;
    }
    if (at == fixed) {
      Join(r, fixed, at + 1, env, next);
      return;
    }
    const CAtom& a = r.body[at];
    bool ground = true;
    for (const CArg& arg : a.args) ground = ground && (!arg.is_var || env[arg.id] >= 0);
    if (ground) {
      Ids t;
      for (const CArg& arg : a.args) t.push_back(arg.is_var ? env[arg.id] : arg.id);
      if (total_[a.predicate].count(t)) Join(r, fixed, at + 1, env, next);
      return;
    }
    // Candidates through the index of the first bound column, if any.
    const std::vector<int>* ids = nullptr;
    for (size_t k = 0; k < a.args.size() && ids == nullptr; ++k) {
      const CArg& arg = a.args[k];
      int v = arg.is_var ? env[arg.id] : arg.id;
      if (v < 0) continue;
      static const std::vector<int> kNone;
      ids = &kNone;
      if (index_[a.predicate].size() <= k) continue;
      auto it = index_[a.predicate][k].find(v);
      if (it != index_[a.predicate][k].end()) ids = &it->second;
    }
    size_t n = ids ? ids->size() : lists_[a.predicate].size();
    for (size_t i = 0; i < n; ++i) {
      size_t row = ids ? static_cast<size_t>((*ids)[i]) : i;
      Ids t = lists_[a.predicate][row];
      std::vector<int> saved = env;
      if (Bind(a, t, env)) Join(r, fixed, at + 1, env, next);
      env = saved;
    }
  }

  bool Insert(int predicate, const Ids& t) {
    if (!total_[predicate].emplace(t, 1).second) return false;
    std::vector<std::unordered_map<int, std::vector<int>>>& index =
        index_[predicate];
    if (index.size() < t.size()) index.resize(t.size());
    int row = static_cast<int>(lists_[predicate].size());
    for (size_t k = 0; k < t.size(); ++k) index[k][t[k]].push_back(row);
    lists_[predicate].push_back(t);
    return true;
  }

  std::vector<CRule> rules_;
  std::vector<std::string> predicates_;
  std::unordered_map<std::string, int> predicate_ids_;
  std::vector<std::string> constants_;
  std::unordered_map<std::string, int> constant_ids_;
  std::vector<Relation> total_;
  std::vector<std::vector<Ids>> lists_;
  std::vector<std::vector<std::unordered_map<int, std::vector<int>>>> index_;
};

}  // namespace

DlProgram ParseDatalog(const std::string& text) { return Parser(text).Parse(); }

const std::set<DlTuple>& DlModel::Facts(const std::string& predicate) const {
  static const std::set<DlTuple> kEmpty;
  auto it = facts_.find(predicate);
  return it == facts_.end() ? kEmpty : it->second;
}

bool DlModel::Has(const std::string& predicate, const DlTuple& tuple) const {
  return Facts(predicate).count(tuple) > 0;
}

std::vector<std::string> DlModel::Predicates() const {
  std::vector<std::string> out;
  for (const auto& [name, unused] : facts_) out.push_back(name);
  return out;
}

DlModel Evaluate(const DlProgram& program) {
  Engine engine(program);
  DlModel model;
  model.rounds_ = engine.Run();
  for (auto& [key, tuples] : engine.Facts()) {
    std::string name = key.substr(0, key.rfind('/'));
    model.facts_[name].insert(tuples.begin(), tuples.end());
  }
  return model;
}

}  // namespace amdlv::testing
