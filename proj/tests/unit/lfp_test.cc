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

#include <map>
#include <set>
#include <string>

#include "amdlv/generators.h"
#include "amdlv/lfp.h"
#include "amdlv/packet_semantics.h"
#include "doctest.h"
#include "support/checks.h"
#include "support/corpus.h"

namespace amdlv {
namespace {

Packet P(int s, int d, int t) {
  return Packet{static_cast<uint16_t>(s), static_cast<uint16_t>(d),
                static_cast<uint16_t>(t)};
}

const std::map<std::string, bool>& ExpectedUnsafe() {
  static const std::map<std::string, bool> kVerdicts = {
      {"chain-buggy", true},        {"chain-fixed", false},
      {"echo", false},              {"empty", false},
      {"hole-punching", false},     {"hole-punching-leak", true},
      {"order-sensitive", true},    {"robust-isolation", true},
      {"robust-no-reply", true},    {"robust-reply-only", true},
      {"running", false},           {"running-no-fw1", true},
      {"running-no-fw2", true},
  };
  return kVerdicts;
}

// The fact is produced by one substate step from the premises it names.
bool Derivable(const Topology& t, const WitnessEntry& w) {
  const Justification& why = w.why;
  if (why.kind == Justification::Kind::kInitial) {
    AbstractElement init = InitialElement(t);
    return w.is_row ? init.HasRow(w.mbox, w.packet, w.row)
                    : init.HasPacket(w.channel, w.packet);
  }
  const AbstractStep& s = why.step;
  const MiddleboxInstance& m = t.middleboxes[s.mbox];
  int local = m.local_of_ingress.at(s.channel);
  Packet input = t.space.At(s.packet);
  Packet companion = input;
  Row companion_row = s.row;
  if (why.kind == Justification::Kind::kEffect) {
    companion = t.space.At(why.companion);
    companion_row = why.companion_row;
  }
  for (const SubstateOutcome& o : SubstateStep(
           m.program, MakeSubstate(input, s.row, companion, companion_row), local)) {
    switch (why.kind) {
      case Justification::Kind::kEmitted:
        for (const Send& send : o.emission) {
          if (m.egress[send.channel] == w.channel &&
              t.space.Id(send.packet) == w.packet) {
            return true;
          }
        }
        break;
      case Justification::Kind::kErr:
        if (o.sub.is_err) return true;
        break;
      default:
        if (!o.sub.is_err && o.sub.companion_row == w.row) return true;
    }
  }
  return false;
}

TEST_SUITE("lfp") {

TEST_CASE("corpus verdicts") {
  for (const auto& [name, unsafe] : ExpectedUnsafe()) {
    CAPTURE(name);
    Verdict v = Lfp(testing::LoadCorpus(name));
    CHECK(v.unsafe == unsafe);
    CHECK(v.aborting.empty() == !unsafe);
  }
  CHECK(testing::CorpusNames().size() == ExpectedUnsafe().size());
}

TEST_CASE("the worklist engine computes the Kleene fixpoint") {
  for (const std::string& name : testing::CorpusNames()) {
    CAPTURE(name);
    Topology t = testing::LoadCorpus(name);
    CHECK(Lfp(t).fixpoint == testing::KleeneLfp(t));
  }
  for (const GeneratedNetwork& g : {EnterpriseNetwork(8), DatacenterNetwork(1, 6)}) {
    Topology t = g.Build();
    CHECK(Lfp(t).fixpoint == testing::KleeneLfp(t));
  }
}

TEST_CASE("the fixpoint is closed under the transformer") {
  for (const std::string& name : testing::CorpusNames()) {
    CAPTURE(name);
    Topology t = testing::LoadCorpus(name);
    AbstractElement fix = Lfp(t).fixpoint;
    CHECK(AbstractTransform(t, fix) == fix);
    CHECK(Leq(InitialElement(t), fix));
  }
}

TEST_CASE("nothing reaches h1 through the isolation middlebox") {
  Topology t = testing::LoadCorpus("running");
  Verdict v = Lfp(t);
  CHECK_FALSE(v.unsafe);
  int e2rev = t.FindChannel("e2.rev");
  REQUIRE(e2rev >= 0);
  CHECK(v.fixpoint.PacketCount(e2rev) == 0);
  // Requests from h1 do pass fw1.
  int fw1 = t.FindMiddlebox("fw1");
  int fw2 = t.FindMiddlebox("fw2");
  int between = -1;
  for (size_t e = 0; e < t.channels.size(); ++e) {
    if (t.channels[e].from.node == fw1 && t.channels[e].to.node == fw2 &&
        !t.channels[e].from.is_host() && !t.channels[e].to.is_host()) {
      between = static_cast<int>(e);
    }
  }
  REQUIRE(between >= 0);
  CHECK(v.fixpoint.HasPacket(between, t.space.Id(P(0, 1, 0))));
}

TEST_CASE("fw1 rows right after it first reads (h1, h2, 0)") {
  Topology t = testing::LoadCorpus("running");
  int fw1 = t.FindMiddlebox("fw1");
  PacketId request = t.space.Id(P(0, 1, 0));
  bool seen = false;
  std::map<PacketId, std::set<std::string>> snapshot;
  LfpOptions opts;
  opts.on_step = [&](const AbstractStep& s, const AbstractElement& a) {
    if (seen || s.mbox != fw1 || s.packet != request) return;
    seen = true;
    for (PacketId p = 0; p < t.space.size(); ++p) {
      for (Row r : a.Rows(fw1, p)) snapshot[p].insert(RowString(r, 3));
    }
  };
  Lfp(t, opts);
  REQUIRE(seen);
  for (int tag = 0; tag < 3; ++tag) {
    CAPTURE(tag);
    CHECK(snapshot[t.space.Id(P(1, 0, tag))] == std::set<std::string>{"FFF", "FFT"});
    CHECK(snapshot[t.space.Id(P(0, 1, tag))] == std::set<std::string>{"FFF"});
  }
}

TEST_CASE("results do not depend on the thread count") {
  std::vector<Topology> tops;
  for (const std::string& name : testing::CorpusNames()) tops.push_back(testing::LoadCorpus(name));
  tops.push_back(EnterpriseNetwork(20).Build());
  tops.push_back(DatacenterNetwork(2).Build());
  for (const Topology& t : tops) {
    LfpOptions one;
    one.batch = 64;
    Verdict base = Lfp(t, one);
    for (int threads : {4, 8}) {
      LfpOptions many = one;
      many.threads = threads;
      Verdict v = Lfp(t, many);
      CHECK(v.fixpoint == base.fixpoint);
      CHECK(v.iterations == base.iterations);
      CHECK(v.growth == base.growth);
      CHECK(VerdictJson(t, v, true)["witness"] == VerdictJson(t, base, true)["witness"]);
    }
  }
}

TEST_CASE("iterations stay within the lattice height") {
  for (const std::string& name : testing::CorpusNames()) {
    CAPTURE(name);
    Topology t = testing::LoadCorpus(name);
    Verdict v = Lfp(t);
    CHECK(static_cast<double>(v.iterations) <= IterationBound(t));
    CHECK(static_cast<double>(v.growth) <= IterationBound(t));
    CHECK(static_cast<double>(v.iterations) <= IterationBound(t, false));
  }
}

TEST_CASE("witnesses are dependency ordered derivations of err") {
  for (const auto& [name, unsafe] : ExpectedUnsafe()) {
    if (!unsafe) continue;
    CAPTURE(name);
    Topology t = testing::LoadCorpus(name);
    Verdict v = Lfp(t);
    REQUIRE_FALSE(v.witness.empty());
    const WitnessEntry& last = v.witness.back();
    CHECK(last.is_row);
    CHECK(last.row == kErrRow);
    for (size_t i = 0; i < v.witness.size(); ++i) {
      const WitnessEntry& w = v.witness[i];
      CAPTURE(i);
      CHECK(Derivable(t, w));
      if (w.why.kind == Justification::Kind::kInitial) continue;
      const AbstractStep& s = w.why.step;
      bool packet_before = false;
      bool row_before = false;
      for (size_t j = 0; j < i; ++j) {
        const WitnessEntry& d = v.witness[j];
        packet_before |= !d.is_row && d.channel == s.channel && d.packet == s.packet;
        row_before |= d.is_row && d.mbox == s.mbox && d.packet == s.packet && d.row == s.row;
      }
      CHECK(packet_before);
      CHECK(row_before);
    }
  }
}

TEST_CASE("safe verdicts carry no witness") {
  Verdict v = Lfp(testing::LoadCorpus("running"));
  CHECK(v.witness.empty());
  nlohmann::ordered_json doc = VerdictJson(testing::LoadCorpus("running"), v);
  CHECK(doc["status"] == "SAFE");
  CHECK(doc["omega2"]["e2.rev"].empty());
}

}  // TEST_SUITE

}  // namespace
}  // namespace amdlv
