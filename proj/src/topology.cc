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

#include "amdlv/topology.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "amdlv/amdl.h"
#include "amdlv/error.h"

namespace amdlv {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void Schema(const std::string& msg) {
  throw Error(ErrorKind::kSchema, msg);
}

std::string ReadFile(const std::string& path, ErrorKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(kind, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string ScalarName(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  Schema(where + ": expected a string or an integer");
}

const Json& Member(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) Schema(where + ": missing key '" + key + "'");
  return *it;
}

void CheckKeys(const Json& obj, std::initializer_list<const char*> allowed,
               const std::string& where) {
  if (!obj.is_object()) Schema(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) Schema(where + ": unexpected key '" + it.key() + "'");
  }
}

struct PortSpec {
  Json to;
  Json from;
  std::string link;
  std::string egress;
};

class Loader {
 public:
  Loader(const Json& doc, std::string base_dir, const ProgramLoader& load)
      : doc_(doc), load_(load) {
    topo_.base_dir = std::move(base_dir);
  }

  Topology Run() {
    CheckKeys(doc_, {"hosts", "tags", "constants", "middleboxes"}, "topology");
    LoadTags();
    LoadHostIds();
    topo_.space = PacketSpace(static_cast<int>(topo_.hosts.size()),
                              static_cast<int>(topo_.tags.size()));
    LoadSendable();
    LoadConstants();
    LoadMiddleboxes();
    WireChannels();
    topo_.document = SerializeTopology(topo_);
    return std::move(topo_);
  }

 private:
  void LoadTags() {
    if (!doc_.contains("tags")) {
      topo_.tags = {"0", "1", "2"};
      return;
    }
    const Json& tags = doc_["tags"];
    if (!tags.is_array() || tags.empty()) Schema("tags: expected a non-empty array");
    for (const Json& t : tags) {
      std::string name = ScalarName(t, "tags");
      if (topo_.FindTag(name) >= 0) Schema("tags: duplicate tag '" + name + "'");
      topo_.tags.push_back(name);
    }
  }

  void LoadHostIds() {
    const Json& hosts = Member(doc_, "hosts", "topology");
    if (!hosts.is_array()) Schema("hosts: expected an array");
    for (const Json& h : hosts) {
      CheckKeys(h, {"id", "sendable"}, "host");
      Host host;
      host.id = ScalarName(Member(h, "id", "host"), "host id");
      if (topo_.FindHost(host.id) >= 0) {
        Schema("hosts: duplicate host '" + host.id + "'");
      }
      topo_.hosts.push_back(std::move(host));
    }
    if (topo_.hosts.size() > 0x7fff) Schema("hosts: too many hosts");
  }

  std::vector<int> Pattern(const Json& v, bool tag, const std::string& where) {
    std::string name = ScalarName(v, where);
    int limit = tag ? static_cast<int>(topo_.tags.size())
                    : static_cast<int>(topo_.hosts.size());
    std::vector<int> out;
    if (name == "*") {
      for (int i = 0; i < limit; ++i) out.push_back(i);
      return out;
    }
    int idx = tag ? topo_.FindTag(name) : topo_.FindHost(name);
    if (idx < 0) {
      throw Error(ErrorKind::kDanglingEndpoint,
                  where + ": unknown " + (tag ? "tag '" : "host '") + name + "'");
    }
    out.push_back(idx);
    return out;
  }

  void LoadSendable() {
    const Json& hosts = doc_["hosts"];
    for (size_t h = 0; h < hosts.size(); ++h) {
      Host& host = topo_.hosts[h];
      std::set<PacketId> packets;
      if (!hosts[h].contains("sendable")) {
        for (int d = 0; d < topo_.space.hosts(); ++d) {
          for (int t = 0; t < topo_.space.tags(); ++t) {
            packets.insert(topo_.space.Id(Packet{static_cast<uint16_t>(h),
                                                 static_cast<uint16_t>(d),
                                                 static_cast<uint16_t>(t)}));
          }
        }
      } else {
        const Json& list = hosts[h]["sendable"];
        std::string where = "sendable of '" + host.id + "'";
        if (!list.is_array()) Schema(where + ": expected an array");
        for (const Json& entry : list) {
          if (!entry.is_array() || entry.size() != 3) {
            Schema(where + ": expected [src, dst, tag]");
          }
          for (int s : Pattern(entry[0], false, where)) {
            for (int d : Pattern(entry[1], false, where)) {
              for (int t : Pattern(entry[2], true, where)) {
                packets.insert(topo_.space.Id(
                    Packet{static_cast<uint16_t>(s), static_cast<uint16_t>(d),
                           static_cast<uint16_t>(t)}));
              }
            }
          }
        }
      }
      host.sendable.assign(packets.begin(), packets.end());
    }
  }

  void LoadConstants() {
    if (!doc_.contains("constants")) return;
    const Json& consts = doc_["constants"];
    if (!consts.is_object()) Schema("constants: expected an object");
    for (auto it = consts.begin(); it != consts.end(); ++it) {
      const Json& v = it.value();
      std::string where = "constant '" + it.key() + "'";
      ValueCode code;
      if (v.is_object()) {
        CheckKeys(v, {"host", "tag"}, where);
        if (v.size() != 1) Schema(where + ": expected one of 'host' or 'tag'");
        if (v.contains("host")) {
          int h = topo_.FindHost(ScalarName(v["host"], where));
          if (h < 0) {
            throw Error(ErrorKind::kUnresolvedConstant, where + ": unknown host");
          }
          code = HostValue(h);
        } else {
          int t = topo_.FindTag(ScalarName(v["tag"], where));
          if (t < 0) {
            throw Error(ErrorKind::kUnresolvedConstant, where + ": unknown tag");
          }
          code = TagValue(t);
        }
      } else {
        std::string name = ScalarName(v, where);
        int h = v.is_string() ? topo_.FindHost(name) : -1;
        int t = topo_.FindTag(name);
        if (h >= 0) {
          code = HostValue(h);
        } else if (t >= 0) {
          code = TagValue(t);
        } else {
          throw Error(ErrorKind::kUnresolvedConstant,
                      where + ": '" + name + "' is neither a host nor a tag");
        }
      }
      topo_.constants[it.key()] = code;
    }
  }

  void LoadMiddleboxes() {
    if (!doc_.contains("middleboxes")) return;
    const Json& list = doc_["middleboxes"];
    if (!list.is_array()) Schema("middleboxes: expected an array");
    ConstantResolver resolve = [this](const std::string& name) {
      return topo_.ResolveConstant(name);
    };
    for (const Json& m : list) {
      CheckKeys(m, {"id", "program", "ports", "safety"}, "middlebox");
      MiddleboxInstance inst;
      inst.id = ScalarName(Member(m, "id", "middlebox"), "middlebox id");
      if (topo_.FindMiddlebox(inst.id) >= 0 || topo_.FindHost(inst.id) >= 0) {
        Schema("middleboxes: duplicate node id '" + inst.id + "'");
      }
      std::string where = "middlebox '" + inst.id + "'";
      const Json& program = Member(m, "program", where);
      if (!program.is_string()) Schema(where + ": program must be a path");
      inst.program_path = program.get<std::string>();
      if (m.contains("safety")) {
        if (!m["safety"].is_boolean()) Schema(where + ": safety must be boolean");
        inst.safety = m["safety"].get<bool>();
      }
      std::string text;
      try {
        text = load_(inst.program_path);
      } catch (const Error& e) {
        throw Error(ErrorKind::kMissingProgram,
                    where + ": cannot read '" + inst.program_path + "'");
      }
      MiddleboxProgram parsed;
      try {
        parsed = MergePacketBlocks(ParseAmdl(text));
      } catch (const Error& e) {
        throw Error(e.kind(), inst.program_path + ": " + e.what(), e.line(),
                    e.column());
      }
      std::string stem = std::filesystem::path(inst.program_path).stem().string();
      if (parsed.name != stem) {
        throw Error(ErrorKind::kValidation,
                    inst.program_path + ": program is named '" + parsed.name +
                        "' but the file is '" + stem + "'");
      }
      try {
        inst.program = CompileProgram(parsed, resolve);
      } catch (const Error& e) {
        throw Error(e.kind(), inst.program_path + ": " + e.what(), e.line(),
                    e.column());
      }
      inst.source = std::make_shared<const MiddleboxProgram>(std::move(parsed));
      topo_.middleboxes.push_back(std::move(inst));

      const Json& ports = Member(m, "ports", where);
      if (!ports.is_object()) Schema(where + ": ports must be an object");
      std::vector<std::pair<int, PortSpec>> specs;
      for (auto it = ports.begin(); it != ports.end(); ++it) {
        std::string pwhere = where + " port '" + it.key() + "'";
        CheckKeys(it.value(), {"to", "from", "link", "egress"}, pwhere);
        int local = topo_.middleboxes.back().program.FindChannel(it.key());
        if (local < 0) {
          Schema(pwhere + ": not a channel of program '" +
                 topo_.middleboxes.back().program.name + "'");
        }
        PortSpec spec;
        spec.to = Member(it.value(), "to", pwhere);
        spec.from = Member(it.value(), "from", pwhere);
        if (it.value().contains("link")) {
          spec.link = ScalarName(it.value()["link"], pwhere);
        }
        if (it.value().contains("egress")) {
          spec.egress = ScalarName(it.value()["egress"], pwhere);
          if (spec.egress != "fwd" && spec.egress != "rev") {
            Schema(pwhere + ": egress must be \"fwd\" or \"rev\"");
          }
        }
        specs.emplace_back(local, std::move(spec));
      }
      ports_.push_back(std::move(specs));
    }
  }

  Endpoint ParseEndpoint(const Json& v, const std::string& where) {
    Endpoint e;
    if (!v.is_object()) Schema(where + ": endpoint must be an object");
    if (v.contains("host")) {
      CheckKeys(v, {"host"}, where);
      std::string id = ScalarName(v["host"], where);
      e.kind = Endpoint::Kind::kHost;
      e.node = topo_.FindHost(id);
      if (e.node < 0) {
        throw Error(ErrorKind::kDanglingEndpoint,
                    where + ": unknown host '" + id + "'");
      }
      return e;
    }
    CheckKeys(v, {"mbox", "port"}, where);
    std::string id = ScalarName(Member(v, "mbox", where), where);
    std::string port = ScalarName(Member(v, "port", where), where);
    e.kind = Endpoint::Kind::kMiddlebox;
    e.node = topo_.FindMiddlebox(id);
    if (e.node < 0) {
      throw Error(ErrorKind::kDanglingEndpoint,
                  where + ": unknown middlebox '" + id + "'");
    }
    e.port = topo_.middleboxes[e.node].program.FindChannel(port);
    if (e.port < 0) {
      throw Error(ErrorKind::kDanglingEndpoint,
                  where + ": middlebox '" + id + "' has no channel '" + port + "'");
    }
    return e;
  }

  const PortSpec* FindPort(int mbox, int local) const {
    for (const auto& [l, spec] : ports_[mbox]) {
      if (l == local) return &spec;
    }
    return nullptr;
  }

  void AddLink(const Endpoint& a, const Endpoint& b, std::string link,
               bool a_is_fwd) {
    const Endpoint& first = a_is_fwd ? a : b;
    const Endpoint& second = a_is_fwd ? b : a;
    if (link.empty()) {
      link = topo_.EndpointName(first) + "~" + topo_.EndpointName(second);
    }
    for (const Channel& c : topo_.channels) {
      if (c.id == link + ".fwd") Schema("duplicate link name '" + link + "'");
    }
    topo_.channels.push_back(Channel{link + ".fwd", first, second});
    topo_.channels.push_back(Channel{link + ".rev", second, first});
  }

  void WireChannels() {
    for (size_t m = 0; m < topo_.middleboxes.size(); ++m) {
      MiddleboxInstance& inst = topo_.middleboxes[m];
      inst.ingress.assign(inst.program.channels.size(), -1);
      inst.egress.assign(inst.program.channels.size(), -1);
    }
    std::set<std::pair<int, int>> done;
    for (size_t m = 0; m < topo_.middleboxes.size(); ++m) {
      const MiddleboxInstance& inst = topo_.middleboxes[m];
      for (const auto& [local, spec] : ports_[m]) {
        std::string where = "middlebox '" + inst.id + "' port '" +
                            inst.program.channels[local] + "'";
        Endpoint self{Endpoint::Kind::kMiddlebox, static_cast<int>(m), local};
        Endpoint to = ParseEndpoint(spec.to, where + " to");
        Endpoint from = ParseEndpoint(spec.from, where + " from");
        if (!(to == from)) {
          throw Error(ErrorKind::kNonBidirected,
                      where + ": 'to' and 'from' name different endpoints");
        }
        if (to == self) {
          throw Error(ErrorKind::kNonBidirected, where + ": port wired to itself");
        }
        std::string link = spec.link;
        bool self_fwd;
        if (to.is_host()) {
          self_fwd = spec.egress.empty() ? false : spec.egress == "fwd";
        } else {
          const PortSpec* peer = FindPort(to.node, to.port);
          std::string peer_where = "middlebox '" + topo_.middleboxes[to.node].id +
                                   "' port '" +
                                   topo_.middleboxes[to.node].program.channels[to.port] +
                                   "'";
          if (peer == nullptr) {
            throw Error(ErrorKind::kNonBidirected,
                        where + ": " + peer_where + " has no reverse wiring");
          }
          Endpoint back = ParseEndpoint(peer->to, peer_where + " to");
          Endpoint back_from = ParseEndpoint(peer->from, peer_where + " from");
          if (!(back == self) || !(back_from == self)) {
            throw Error(ErrorKind::kNonBidirected,
                        where + ": " + peer_where + " does not point back");
          }
          if (!peer->link.empty() && !link.empty() && peer->link != link) {
            Schema(where + ": link name disagrees with " + peer_where);
          }
          if (link.empty()) link = peer->link;
          if (!spec.egress.empty() && !peer->egress.empty() &&
              spec.egress == peer->egress) {
            Schema(where + ": both ends claim egress '" + spec.egress + "'");
          }
          if (!spec.egress.empty()) {
            self_fwd = spec.egress == "fwd";
          } else if (!peer->egress.empty()) {
            self_fwd = peer->egress == "rev";
          } else {
            self_fwd = to.node > static_cast<int>(m) ||
                       (to.node == static_cast<int>(m) && to.port > local);
          }
          int a = static_cast<int>(m) * 65536 + local;
          int b = to.node * 65536 + to.port;
          std::pair<int, int> key(std::min(a, b), std::max(a, b));
          if (!done.insert(key).second) continue;
        }
        AddLink(self, to, link, self_fwd);
      }
    }
    for (size_t c = 0; c < topo_.channels.size(); ++c) {
      const Channel& ch = topo_.channels[c];
      int id = static_cast<int>(c);
      if (ch.from.is_host()) {
        topo_.hosts[ch.from.node].egress.push_back(id);
      } else {
        topo_.middleboxes[ch.from.node].egress[ch.from.port] = id;
      }
      if (ch.to.is_host()) {
        topo_.hosts[ch.to.node].ingress.push_back(id);
      } else {
        MiddleboxInstance& inst = topo_.middleboxes[ch.to.node];
        inst.ingress[ch.to.port] = id;
        inst.local_of_ingress[id] = ch.to.port;
      }
    }
    for (const MiddleboxInstance& inst : topo_.middleboxes) {
      for (size_t c = 0; c < inst.program.channels.size(); ++c) {
        if (inst.ingress[c] < 0 || inst.egress[c] < 0) {
          Schema("middlebox '" + inst.id + "': channel '" +
                 inst.program.channels[c] + "' is not wired");
        }
      }
    }
  }

  const Json& doc_;
  const ProgramLoader& load_;
  Topology topo_;
  std::vector<std::vector<std::pair<int, PortSpec>>> ports_;
};

Json EndpointJson(const Topology& t, const Endpoint& e) {
  Json j = Json::object();
  if (e.is_host()) {
    j["host"] = t.hosts[e.node].id;
  } else {
    j["mbox"] = t.middleboxes[e.node].id;
    j["port"] = t.middleboxes[e.node].program.channels[e.port];
  }
  return j;
}

}  // namespace

int Topology::FindHost(const std::string& id) const {
  for (size_t i = 0; i < hosts.size(); ++i) {
    if (hosts[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int Topology::FindTag(const std::string& name) const {
  for (size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int Topology::FindMiddlebox(const std::string& id) const {
  for (size_t i = 0; i < middleboxes.size(); ++i) {
    if (middleboxes[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int Topology::FindChannel(const std::string& id) const {
  for (size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

std::optional<ValueCode> Topology::ResolveConstant(
    const std::string& name) const {
  auto it = constants.find(name);
  if (it != constants.end()) return it->second;
  int h = FindHost(name);
  if (h >= 0) return HostValue(h);
  int t = FindTag(name);
  if (t >= 0) return TagValue(t);
  return std::nullopt;
}

std::string Topology::ValueName(ValueCode v) const {
  return IsTagValue(v) ? tags[ValueIndex(v)] : hosts[ValueIndex(v)].id;
}

std::string Topology::PacketName(const Packet& p) const {
  return "(" + hosts[p.src].id + "," + hosts[p.dst].id + "," + tags[p.tag] +
         ")";
}

nlohmann::ordered_json Topology::PacketJson(const Packet& p) const {
  return nlohmann::ordered_json::array({hosts[p.src].id, hosts[p.dst].id, tags[p.tag]});
}

std::string Topology::EndpointName(const Endpoint& e) const {
  if (e.is_host()) return hosts[e.node].id;
  return middleboxes[e.node].id + "." +
         middleboxes[e.node].program.channels[e.port];
}

ProgramLoader FileProgramLoader(const std::string& base_dir) {
  return [base_dir](const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    return ReadFile(p.string(), ErrorKind::kMissingProgram);
  };
}

Topology LoadTopology(const std::string& path) {
  std::string text = ReadFile(path, ErrorKind::kIo);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kSchema, path + ": " + e.what());
  }
  std::string base = std::filesystem::path(path).parent_path().string();
  return LoadTopologyJson(doc, base, FileProgramLoader(base));
}

Topology LoadTopologyJson(const nlohmann::ordered_json& doc,
                          const std::string& base_dir,
                          const ProgramLoader& loader) {
  return Loader(doc, base_dir, loader).Run();
}

nlohmann::ordered_json SerializeTopology(const Topology& t) {
  Json doc = Json::object();
  Json hosts = Json::array();
  for (const Host& h : t.hosts) {
    Json host = Json::object();
    host["id"] = h.id;
    Json send = Json::array();
    for (PacketId id : h.sendable) {
      Packet p = t.space.At(id);
      send.push_back(Json::array(
          {t.hosts[p.src].id, t.hosts[p.dst].id, t.tags[p.tag]}));
    }
    host["sendable"] = send;
    hosts.push_back(host);
  }
  doc["hosts"] = hosts;
  doc["tags"] = t.tags;
  Json consts = Json::object();
  for (const auto& [name, v] : t.constants) {
    Json c = Json::object();
    c[IsTagValue(v) ? "tag" : "host"] = t.ValueName(v);
    consts[name] = c;
  }
  doc["constants"] = consts;
  Json mboxes = Json::array();
  for (size_t m = 0; m < t.middleboxes.size(); ++m) {
    const MiddleboxInstance& inst = t.middleboxes[m];
    Json j = Json::object();
    j["id"] = inst.id;
    j["program"] = inst.program_path;
    if (inst.safety) j["safety"] = true;
    Json ports = Json::object();
    for (size_t c = 0; c < inst.program.channels.size(); ++c) {
      if (inst.egress.empty() || inst.egress[c] < 0) continue;
      const Channel& out = t.channels[inst.egress[c]];
      Json port = Json::object();
      port["to"] = EndpointJson(t, out.to);
      port["from"] = EndpointJson(t, out.to);
      std::string id = out.id;
      size_t dot = id.rfind('.');
      port["link"] = id.substr(0, dot);
      port["egress"] = id.substr(dot + 1);
      ports[inst.program.channels[c]] = port;
    }
    j["ports"] = ports;
    mboxes.push_back(j);
  }
  doc["middleboxes"] = mboxes;
  return doc;
}

std::string TopologyHash(const Topology& t) {
  std::string text = SerializeTopology(t).dump();
  for (const MiddleboxInstance& m : t.middleboxes) {
    text += PrintAmdl(*m.source);
  }
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace amdlv
