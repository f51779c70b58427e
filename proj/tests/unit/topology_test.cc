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

#include "amdlv/error.h"
#include "amdlv/topology.h"
#include "doctest.h"
#include "support/corpus.h"

namespace amdlv {
namespace {

using nlohmann::ordered_json;

const char kForward[] = "fwd = do a ? p => true => b ! p [] b ? p => true => a ! p od";

ProgramLoader Loader() {
  return [](const std::string& path) -> std::string {
    if (path == "fwd.amdl") return kForward;
    throw Error(ErrorKind::kMissingProgram, "no program '" + path + "'");
  };
}

// h0 - m.a, m.b - h1
ordered_json Line() {
  return ordered_json::parse(R"({
    "hosts": [{"id": "h0", "sendable": [["h0", "h1", "*"]]},
              {"id": "h1"}],
    "tags": ["x", "y"],
    "middleboxes": [{
      "id": "m", "program": "fwd.amdl",
      "ports": {"a": {"to": {"host": "h0"}, "from": {"host": "h0"}},
                "b": {"to": {"host": "h1"}, "from": {"host": "h1"},
                      "link": "out", "egress": "fwd"}}}]
  })");
}

ErrorKind KindOf(const ordered_json& doc) {
  try {
    LoadTopologyJson(doc, ".", Loader());
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("topology accepted: " << doc.dump());
  return ErrorKind::kUsage;
}

TEST_SUITE("topology") {

TEST_CASE("a line topology wires two links") {
  Topology t = LoadTopologyJson(Line(), ".", Loader());
  CHECK(t.hosts.size() == 2);
  CHECK(t.space.size() == 8);
  REQUIRE(t.channels.size() == 4);
  const MiddleboxInstance& m = t.middleboxes[0];
  int a = m.program.FindChannel("a");
  int b = m.program.FindChannel("b");
  // Host links default to the direction leaving the host.
  CHECK(t.channels[m.ingress[a]].from.is_host());
  CHECK(t.channels[m.ingress[a]].id.find(".fwd") != std::string::npos);
  CHECK(t.channels[m.egress[b]].id == "out.fwd");
  CHECK(t.hosts[0].egress.size() == 1);
  CHECK(t.hosts[1].ingress == std::vector<int>{m.egress[b]});
  CHECK(t.hosts[0].sendable.size() == 2);
  // Without a list, a host sends every packet it is the source of.
  CHECK(t.hosts[1].sendable.size() == 4);
  CHECK(t.FindChannel("out.rev") == m.ingress[b]);
}

TEST_CASE("the canonical document reloads to the same topology") {
  Topology t = LoadTopologyJson(Line(), ".", Loader());
  ordered_json doc = SerializeTopology(t);
  Topology u = LoadTopologyJson(doc, ".", Loader());
  CHECK(SerializeTopology(u) == doc);
  CHECK(TopologyHash(u) == TopologyHash(t));
  CHECK(u.channels.size() == t.channels.size());
  for (size_t c = 0; c < t.channels.size(); ++c) {
    CHECK(u.channels[c].id == t.channels[c].id);
  }
}

TEST_CASE("hashes change with the program text") {
  Topology t = LoadTopologyJson(Line(), ".", Loader());
  Topology u = LoadTopologyJson(Line(), ".", [](const std::string&) {
    return std::string("fwd = do a ? p => true => b ! p [] b ? p => true => skip od");
  });
  CHECK(TopologyHash(t) != TopologyHash(u));
}

TEST_CASE("schema violations are rejected with their kind") {
  ordered_json doc = Line();
  doc["middleboxes"][0]["ports"]["b"]["to"] = {{"host", "h9"}};
  CHECK(KindOf(doc) == ErrorKind::kDanglingEndpoint);

  doc = Line();
  doc["middleboxes"][0]["ports"]["b"]["to"] = {{"host", "h0"}};
  CHECK(KindOf(doc) == ErrorKind::kNonBidirected);

  doc = Line();
  doc["middleboxes"][0]["program"] = "other.amdl";
  CHECK(KindOf(doc) == ErrorKind::kMissingProgram);

  doc = Line();
  doc["middleboxes"][0]["ports"].erase("b");
  CHECK(KindOf(doc) == ErrorKind::kSchema);

  doc = Line();
  doc["hosts"][1]["id"] = "h0";
  CHECK(KindOf(doc) == ErrorKind::kSchema);

  doc = Line();
  doc["hosts"][0]["sendable"] = ordered_json::parse(R"([["h0", "h7", "*"]])");
  CHECK(KindOf(doc) == ErrorKind::kDanglingEndpoint);

  doc = Line();
  doc["bogus"] = 1;
  CHECK(KindOf(doc) == ErrorKind::kSchema);

  doc = Line();
  doc["middleboxes"][0]["ports"]["c"] = {{"to", {{"host", "h0"}}},
                                         {"from", {{"host", "h0"}}}};
  CHECK(KindOf(doc) == ErrorKind::kSchema);
}

TEST_CASE("an empty sendable list sends nothing") {
  ordered_json doc = Line();
  doc["hosts"][1]["sendable"] = ordered_json::array();
  Topology t = LoadTopologyJson(doc, ".", Loader());
  CHECK(t.hosts[1].sendable.empty());
}

TEST_CASE("constants resolve to hosts and tags") {
  ordered_json doc = Line();
  doc["constants"] = ordered_json::parse(R"({"bad": {"host": "h1"}})");
  Topology t = LoadTopologyJson(doc, ".", Loader());
  REQUIRE(t.ResolveConstant("bad").has_value());
  CHECK(*t.ResolveConstant("bad") == HostValue(1));
  CHECK(*t.ResolveConstant("y") == TagValue(1));
  CHECK(*t.ResolveConstant("h0") == HostValue(0));
  CHECK_FALSE(t.ResolveConstant("nope").has_value());
}

TEST_CASE("tags default to three") {
  ordered_json doc = Line();
  doc.erase("tags");
  Topology t = LoadTopologyJson(doc, ".", Loader());
  CHECK(t.tags.size() == 3);
}

TEST_CASE("every corpus topology loads") {
  for (const std::string& name : testing::CorpusNames()) {
    CAPTURE(name);
    Topology t = testing::LoadCorpus(name);
    CHECK(t.channels.size() % 2 == 0);
    for (const MiddleboxInstance& m : t.middleboxes) {
      for (size_t c = 0; c < m.program.channels.size(); ++c) {
        CHECK(m.ingress[c] >= 0);
        CHECK(m.egress[c] >= 0);
      }
    }
  }
}

TEST_CASE("running example shape") {
  Topology t = testing::LoadCorpus("running");
  CHECK(t.hosts.size() == 2);
  CHECK(t.tags.size() == 3);
  CHECK(t.middleboxes.size() == 3);
  CHECK(t.channels.size() == 8);
  CHECK(t.space.size() == 12);
  int is = t.FindMiddlebox("is");
  REQUIRE(is >= 0);
  CHECK(t.middleboxes[is].safety);
  CHECK(t.FindChannel("e2.rev") >= 0);
  CHECK(t.channels[t.FindChannel("e2.rev")].to.node == is);
}

TEST_CASE("missing topology files are io errors") {
  try {
    LoadTopology("/nonexistent/topology.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace amdlv
