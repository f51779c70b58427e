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

// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "amdlv/datalog.h"
#include "amdlv/explorer.h"
#include "amdlv/generators.h"
#include "amdlv/lfp.h"
#include "amdlv/relation_semantics.h"
#include "amdlv/robust.h"
#include "amdlv/topology.h"
#include "support/checks.h"
#include "support/corpus.h"
#include "support/datalog_eval.h"
#include "support/random_program.h"

namespace amdlv {
namespace {

using Clock = std::chrono::steady_clock;

// Tolerances and budgets.
constexpr double kVerifySeconds = 1.0;
constexpr double kChainSeconds = 5.0;
constexpr int kFamilySize = 120;
constexpr double kFamilySeconds = 60.0;
constexpr int kOrderedCap = 2;
constexpr int kOrderedLength = 4;
constexpr size_t kOrderedMaxConfigs = 1000000;
constexpr int kCompletenessMaxCap = 3;
constexpr size_t kCompletenessMaxConfigs = 1000000;
constexpr double kCompletenessSeconds = 600.0;
constexpr int kLatticeSamples = 1000;
constexpr int kScalingSizes[] = {20, 40, 80, 160};
// Quartic growth per doubling, times two for measurement noise.
constexpr double kScalingRatio = 2.0 * 16.0;
constexpr double kScalingFloorSeconds = 0.020;
constexpr double kScalingLargestSeconds = 600.0;
constexpr int kRobustBound = 6;
constexpr double kRobustSeconds = 30.0;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Packet P(int s, int d, int t) {
  return Packet{static_cast<uint16_t>(s), static_cast<uint16_t>(d),
                static_cast<uint16_t>(t)};
}

std::string Rows(const std::set<Row>& rows, int width) {
  std::string out;
  for (Row r : rows) {
    if (!out.empty()) out += ",";
    for (int q = 0; q < width; ++q) out += (r >> q & 1) ? 'T' : 'F';
  }
  return "{" + out + "}";
}

std::string Fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::vector<Topology> SmallCorpus(size_t max_mboxes, size_t max_hosts,
                                  std::vector<std::string>* names) {
  std::vector<Topology> out;
  for (const std::string& name : testing::CorpusNames()) {
    Topology t = testing::LoadCorpus(name);
    if (t.middleboxes.size() > max_mboxes || t.hosts.size() > max_hosts) continue;
    out.push_back(std::move(t));
    names->push_back(name);
  }
  return out;
}

Outcome Ac1() {
  Topology t = testing::LoadCorpus("running");
  auto start = Clock::now();
  Verdict v = Lfp(t);
  double secs = Since(start);
  int e2rev = t.FindChannel("e2.rev");
  size_t on_e2 = e2rev >= 0 ? v.fixpoint.PacketCount(e2rev) : SIZE_MAX;
  bool pass = !v.unsafe && on_e2 == 0 && secs < kVerifySeconds;
  return {pass, std::string(v.unsafe ? "UNSAFE" : "SAFE") + ", |e2.rev| = " +
                    std::to_string(on_e2) + ", " + Fmt(secs) + " s"};
}

Outcome Ac2() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"running-no-fw1", "running-no-fw2"}) {
    Topology t = testing::LoadCorpus(name);
    auto start = Clock::now();
    Verdict v = Lfp(t);
    double secs = Since(start);
    pass = pass && v.unsafe && secs < kVerifySeconds;
    detail += std::string(detail.empty() ? "" : "; ") + name + " " +
              (v.unsafe ? "UNSAFE" : "SAFE") + " " + Fmt(secs) + " s";
  }
  return {pass, detail};
}

Outcome Ac3() {
  auto start = Clock::now();
  Topology buggy = testing::LoadCorpus("chain-buggy");
  Topology fixed = testing::LoadCorpus("chain-fixed");
  bool buggy_unsafe = Lfp(buggy).unsafe;
  bool fixed_unsafe = Lfp(fixed).unsafe;
  double secs = Since(start);
  std::set<std::string> programs;
  for (const Topology* t : {&buggy, &fixed}) {
    for (const MiddleboxInstance& m : t->middleboxes) programs.insert(m.program.name);
  }
  bool models = programs.count("cache") && programs.count("lb") &&
                (programs.count("acl") || programs.count("sfirewall"));
  bool pass = buggy_unsafe && !fixed_unsafe && models && secs < kChainSeconds;
  return {pass, std::string("buggy ") + (buggy_unsafe ? "UNSAFE" : "SAFE") +
                    ", fixed " + (fixed_unsafe ? "UNSAFE" : "SAFE") +
                    (models ? "" : ", missing cache/firewall/lb model") + ", " +
                    Fmt(secs) + " s"};
}

Outcome Ac4() {
  Topology t = testing::LoadCorpus("running");
  int fw1 = t.FindMiddlebox("fw1");
  int h1 = t.FindHost("h1");
  int h2 = t.FindHost("h2");
  PacketId request = t.space.Id(P(h1, h2, 0));
  bool seen = false;
  std::map<PacketId, std::set<Row>> snapshot;
  LfpOptions opts;
  opts.on_step = [&](const AbstractStep& s, const AbstractElement& a) {
    if (seen || s.mbox != fw1 || s.packet != request) return;
    seen = true;
    for (PacketId p = 0; p < t.space.size(); ++p) {
      for (Row r : a.Rows(fw1, p)) snapshot[p].insert(r);
    }
  };
  Lfp(t, opts);
  if (!seen) return {false, "fw1 never read (h1,h2,0)"};
  int width = t.middleboxes[fw1].program.query_count();
  // (F,F,T): only the third query of fw1 holds.
  const Row fft = Row{1} << 2;
  bool pass = width == 3;
  std::string detail;
  for (int tag = 0; tag < 3; ++tag) {
    const std::set<Row>& rows = snapshot[t.space.Id(P(h2, h1, tag))];
    pass = pass && rows == std::set<Row>{0, fft};
    detail += std::string(tag ? " " : "") + "p(h2,h1," + std::to_string(tag) + ")=" + Rows(rows, width);
  }
  return {pass, detail};
}

Outcome Family(bool locality) {
  auto start = Clock::now();
  std::vector<testing::RandomProgram> family = testing::RandomFamily(kFamilySize);
  testing::Report total;
  size_t shape_violations = 0;
  for (const testing::RandomProgram& rp : family) {
    if (rp.program.relations.size() > 2 || rp.program.query_count() > 3) ++shape_violations;
    total.Merge(locality ? testing::CheckLocality(rp) : testing::CheckBisimulation(rp));
  }
  double secs = Since(start);
  bool pass = family.size() >= 100 && shape_violations == 0 && total.ok() &&
              (locality || secs < kFamilySeconds);
  std::string detail = std::to_string(family.size()) + " programs, " +
                       std::to_string(total.cases) + " cases, " +
                       std::to_string(total.violations) + " violations, " + Fmt(secs) + " s";
  if (shape_violations) detail += ", " + std::to_string(shape_violations) + " oversized";
  if (!total.ok()) detail += ": " + total.Summary();
  return {pass, detail};
}

Outcome Ac7() {
  std::vector<std::string> names;
  std::vector<Topology> tops = SmallCorpus(3, SIZE_MAX, &names);
  ExplorationBounds bounds;
  bounds.multiplicity = kOrderedCap;
  bounds.length = kOrderedLength;
  bounds.max_configs = kOrderedMaxConfigs;
  testing::Report total;
  size_t truncated = 0;
  size_t configs = 0;
  std::vector<std::string> cut;
  for (size_t i = 0; i < tops.size(); ++i) {
    testing::SoundnessResult r = testing::CheckSoundness(tops[i], Variant::kOrdered, bounds);
    total.Merge(r.report);
    configs += r.configs;
    if (r.truncated) {
      ++truncated;
      cut.push_back(names[i]);
    }
  }
  std::string detail = std::to_string(tops.size()) + " topologies, " +
                       std::to_string(configs) + " configs, " +
                       std::to_string(total.violations) + " violations";
  if (truncated) {
    detail += ", truncated at " + std::to_string(kOrderedMaxConfigs) + " configs:";
    for (const std::string& n : cut) detail += " " + n;
  }
  if (!total.ok()) detail += ": " + total.Summary();
  return {total.ok() && !tops.empty(), detail};
}

struct CompletenessRun {
  Outcome completeness;
  Outcome sticky;
};

CompletenessRun Ac8And9() {
  auto start = Clock::now();
  std::vector<std::string> names;
  std::vector<Topology> tops = SmallCorpus(3, 2, &names);
  size_t stable = 0;
  size_t mismatched = 0;
  size_t not_sticky = 0;
  std::string stable_names;
  std::string unstable_names;
  std::string failures;
  for (size_t i = 0; i < tops.size(); ++i) {
    testing::CompletenessResult r =
        testing::CheckCompleteness(tops[i], kCompletenessMaxCap, kCompletenessMaxConfigs);
    if (!r.stabilized) {
      unstable_names += " " + names[i];
      continue;
    }
    ++stable;
    stable_names += " " + names[i] + "(k=" + std::to_string(r.cap) + ")";
    if (!r.equal) {
      ++mismatched;
      failures += " " + names[i] + ": " + r.difference;
    }
    if (!r.sticky.holds || !r.sticky.complete) {
      ++not_sticky;
      failures += " " + names[i] + " not sticky: " + r.sticky.counterexample;
    }
  }
  double secs = Since(start);
  std::string common = std::to_string(stable) + " stable closures:" + stable_names;
  if (!unstable_names.empty()) common += "; not stable within k<=3:" + unstable_names;
  CompletenessRun run;
  run.completeness = {stable > 0 && mismatched == 0 && secs < kCompletenessSeconds,
                      common + "; " + std::to_string(mismatched) + " mismatches, " +
                          Fmt(secs) + " s" + (mismatched ? failures : "")};
  run.sticky = {stable > 0 && not_sticky == 0,
                std::to_string(stable) + " closures, " + std::to_string(not_sticky) +
                    " counterexamples" + (not_sticky ? failures : "")};
  return run;
}

Outcome Ac10() {
  testing::Report laws;
  std::vector<std::string> names = testing::CorpusNames();
  int per = (kLatticeSamples + static_cast<int>(names.size()) - 1) /
            static_cast<int>(names.size());
  std::vector<Topology> tops;
  for (size_t i = 0; i < names.size(); ++i) {
    tops.push_back(testing::LoadCorpus(names[i]));
    laws.Merge(testing::CheckLatticeLaws(tops.back(), per, 1000 + i));
  }
  tops.push_back(EnterpriseNetwork(20).Build());
  tops.push_back(DatacenterNetwork(2).Build());
  size_t differing = 0;
  for (const Topology& t : tops) {
    LfpOptions base_opts;
    base_opts.batch = 64;
    Verdict base = Lfp(t, base_opts);
    for (int threads : {4, 8}) {
      LfpOptions o = base_opts;
      o.threads = threads;
      Verdict v = Lfp(t, o);
      if (!(v.fixpoint == base.fixpoint) || v.iterations != base.iterations ||
          v.unsafe != base.unsafe) {
        ++differing;
      }
    }
  }
  int samples = per * static_cast<int>(names.size());
  bool pass = samples >= kLatticeSamples && laws.ok() && differing == 0;
  std::string detail = std::to_string(samples) + " samples, " +
                       std::to_string(laws.violations) + " law violations, " +
                       std::to_string(differing) + " thread-count differences over " +
                       std::to_string(tops.size()) + " networks";
  if (!laws.ok()) detail += ": " + laws.Summary();
  return {pass, detail};
}

Outcome Ac11() {
  size_t checked = 0;
  size_t mismatches = 0;
  std::string failures;
  for (const std::string& name : testing::CorpusNames()) {
    Topology t = testing::LoadCorpus(name);
    bool unsafe = Lfp(t).unsafe;
    for (DatalogDialect d : {DatalogDialect::kGeneric, DatalogDialect::kSouffle}) {
      testing::DlModel model = testing::Evaluate(testing::ParseDatalog(EmitDatalog(t, d)));
      ++checked;
      if (model.Has("abort") != unsafe) {
        ++mismatches;
        failures += " " + name;
      }
    }
  }
  return {mismatches == 0, std::to_string(checked) + " programs, " +
                               std::to_string(mismatches) + " mismatches" + failures};
}

Outcome Ac12() {
  std::vector<double> secs;
  bool all_safe = true;
  for (int hosts : kScalingSizes) {
    Topology t = EnterpriseNetwork(hosts).Build();
    double best = 1e300;
    for (int rep = 0; rep < (hosts >= 160 ? 1 : 3); ++rep) {
      auto start = Clock::now();
      Verdict v = Lfp(t);
      best = std::min(best, Since(start));
      all_safe = all_safe && !v.unsafe;
    }
    secs.push_back(best);
  }
  bool pass = all_safe && secs.back() < kScalingLargestSeconds;
  std::string detail;
  for (size_t i = 0; i < secs.size(); ++i) {
    detail += std::to_string(kScalingSizes[i]) + " hosts " + Fmt(secs[i]) + " s";
    if (i > 0) {
      double ratio = secs[i] / std::max(secs[i - 1], kScalingFloorSeconds);
      pass = pass && ratio <= kScalingRatio;
      detail += " (x" + Fmt(ratio) + ")";
    }
    if (i + 1 < secs.size()) detail += ", ";
  }
  return {pass, detail + ", limit x" + Fmt(kScalingRatio)};
}

bool ErrFree(const CompiledProgram& prog, const std::vector<RobustInput>& seq, size_t from) {
  std::set<RelationState> states{RelationState::Initial(prog)};
  for (size_t i = from; i < seq.size(); ++i) {
    std::set<RelationState> next;
    for (const RelationState& s : states) {
      for (const RelationOutcome& o : StepRelation(prog, s, seq[i].packet, seq[i].channel)) {
        if (o.state.err()) return false;
        next.insert(o.state);
      }
    }
    states = std::move(next);
  }
  return true;
}

Outcome Ac13() {
  auto start = Clock::now();
  Topology iso = testing::LoadCorpus("robust-isolation");
  RobustResult a = CheckRevertRobust(iso, iso.FindMiddlebox("guard"), kRobustBound);
  Topology reply = testing::LoadCorpus("robust-reply-only");
  int guard = reply.FindMiddlebox("guard");
  RobustResult b = CheckRevertRobust(reply, guard, kRobustBound);
  double secs = Since(start);
  const CompiledProgram& prog = reply.middleboxes[guard].program;
  bool witness = !b.robust && !b.sequence.empty() && b.suffix_start < b.sequence.size() &&
                 ErrFree(prog, b.sequence, 0) && !ErrFree(prog, b.sequence, b.suffix_start);
  bool pass = a.robust && witness && secs < kRobustSeconds;
  std::string detail = std::string("isolation ") + (a.robust ? "robust" : "non-robust") +
                       ", handshake guard " + (b.robust ? "robust" : "non-robust");
  if (!b.robust) detail += " [" + DescribeRobustWitness(reply, guard, b) + "]";
  return {pass, detail + ", bound " + std::to_string(kRobustBound) + ", " + Fmt(secs) + " s"};
}

}  // namespace
}  // namespace amdlv

int main() {
  using amdlv::Outcome;
  int failed = 0;
  auto report = [&](int n, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("AC%d %s %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };
  report(1, amdlv::Ac1);
  report(2, amdlv::Ac2);
  report(3, amdlv::Ac3);
  report(4, amdlv::Ac4);
  report(5, [] { return amdlv::Family(false); });
  report(6, [] { return amdlv::Family(true); });
  report(7, amdlv::Ac7);
  amdlv::CompletenessRun run;
  report(8, [&] {
    run = amdlv::Ac8And9();
    return run.completeness;
  });
  report(9, [&] { return run.sticky; });
  report(10, amdlv::Ac10);
  report(11, amdlv::Ac11);
  report(12, amdlv::Ac12);
  report(13, amdlv::Ac13);
  return failed == 0 ? 0 : 1;
}
