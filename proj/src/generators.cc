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


#include "amdlv/generators.h"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "amdlv/error.h"

namespace amdlv {
namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> Names(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

Json HostEnd(const std::string& host) { return Json{{"host", host}}; }
Json MboxEnd(const std::string& mbox, const std::string& port) {
  return Json{{"mbox", mbox}, {"port", port}};
}
Json Port(const Json& end) { return Json{{"to", end}, {"from", end}}; }

Json Middlebox(const std::string& id, const std::string& program, Json ports) {
  return Json{{"id", id}, {"program", program + ".amdl"}, {"ports", ports}};
}

// Text of a program made of blocks, each a channel and a list of
// "guard => actions" alternatives.
class ProgramText {
 public:
  explicit ProgramText(std::string name) : name_(std::move(name)) {}

  void Block(const std::string& channel, const std::vector<std::string>& alts) {
    std::string text = (blocks_.empty() ? "   " : "[] ") + channel + " ? p =>";
    if (alts.size() == 1) {
      text += " " + alts[0] + "\n";
    } else {
      text += "\n     if " + alts[0] + "\n";
      for (size_t i = 1; i < alts.size(); ++i) text += "     [] " + alts[i] + "\n";
      text += "     fi\n";
    }
    blocks_.push_back(text);
  }

  std::string Text() const {
    std::string out = name_ + " = do\n";
    for (const std::string& b : blocks_) out += b;
    return out + "od\n";
  }

 private:
  std::string name_;
  std::vector<std::string> blocks_;
};

std::vector<std::string> RouteByDst(const std::vector<std::string>& hosts) {
  std::vector<std::string> alts;
  for (const std::string& h : hosts) alts.push_back("p.dst = " + h + " => h_" + h + " ! p");
  return alts;
}

std::string Forward(const std::string& name, const std::string& a,
                    const std::string& b) {
  ProgramText t(name);
  t.Block(a, {"true => " + b + " ! p"});
  t.Block(b, {"true => " + a + " ! p"});
  return t.Text();
}

const char kSessionFirewall[] =
    "sfirewall = do\n"
    "   internal_port ? p =>\n"
    "     if p.dst in trusted => external_port ! p\n"
    "     [] p.type = 0 => external_port ! p; requested(p.dst) := true\n"
    "     fi\n"
    "[] external_port ? p =>\n"
    "     if p.src in trusted => internal_port ! p\n"
    "     [] p.type = 1 and p.src in requested => trusted(p.src) := true\n"
    "     fi\n"
    "od\n";

Json HostList(const std::vector<std::string>& ids) {
  Json hosts = Json::array();
  for (const std::string& h : ids) hosts.push_back(Json{{"id", h}});
  return hosts;
}

// A switch serving `members` on per-host ports plus an uplink.
void SubnetSwitch(GeneratedNetwork& net, Json& mboxes, const std::string& id,
                  const std::vector<std::string>& members,
                  const Json& uplink, bool abort_from_uplink) {
  ProgramText t(id);
  Json ports = Json::object();
  for (const std::string& h : members) {
    std::vector<std::string> alts = RouteByDst(members);
    alts.push_back("true => up ! p");
    t.Block("h_" + h, alts);
    ports["h_" + h] = Port(HostEnd(h));
  }
  if (abort_from_uplink) {
    t.Block("up", {"true => abort"});
  } else {
    t.Block("up", RouteByDst(members));
  }
  ports["up"] = Port(uplink);
  net.programs[id + ".amdl"] = t.Text();
  mboxes.push_back(Middlebox(id, id, ports));
}

}  // namespace

Topology GeneratedNetwork::Build() const {
  const auto& progs = programs;
  return LoadTopologyJson(topology, ".", [&progs](const std::string& path) {
    auto it = progs.find(path);
    if (it == progs.end()) throw Error(ErrorKind::kIo, "no program '" + path + "'");
    return it->second;
  });
}

void GeneratedNetwork::Write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream(dir + "/topology.json") << topology.dump(2) << "\n";
  for (const auto& [path, text] : programs) {
    std::ofstream(dir + "/" + path) << text;
  }
}

GeneratedNetwork EnterpriseNetwork(int hosts) {
  if (hosts < 4) throw Error(ErrorKind::kUsage, "enterprise needs at least 4 hosts");
  int quarter = hosts / 4;
  std::vector<std::string> outside = Names("o", quarter);
  std::vector<std::string> pub = Names("pub", quarter);
  std::vector<std::string> quar = Names("q", quarter);
  std::vector<std::string> priv = Names("pr", hosts - 3 * quarter);
  GeneratedNetwork net;
  std::vector<std::string> all;
  for (const auto* group : {&outside, &pub, &quar, &priv}) {
    all.insert(all.end(), group->begin(), group->end());
  }
  Json mboxes = Json::array();

  ProgramText gw("gw");
  Json gw_ports = Json::object();
  for (const std::string& o : outside) {
    gw.Block("h_" + o, {"true => pub ! p", "true => quar ! p", "true => priv ! p"});
    gw_ports["h_" + o] = Port(HostEnd(o));
  }
  for (const char* side : {"pub", "quar", "priv"}) {
    gw.Block(side, RouteByDst(outside));
  }
  gw_ports["pub"] = Port(MboxEnd("fw_pub", "external"));
  gw_ports["quar"] = Port(MboxEnd("fw_quar", "external"));
  gw_ports["priv"] = Port(MboxEnd("fw_priv", "external_port"));
  net.programs["gw.amdl"] = gw.Text();
  mboxes.push_back(Middlebox("gw", "gw", gw_ports));

  net.programs["allow.amdl"] = Forward("allow", "internal", "external");
  ProgramText deny("deny");
  deny.Block("internal", {"true => skip"});
  deny.Block("external", {"true => skip"});
  net.programs["deny.amdl"] = deny.Text();
  net.programs["sfirewall.amdl"] = kSessionFirewall;
  mboxes.push_back(Middlebox(
      "fw_pub", "allow",
      Json{{"internal", Port(MboxEnd("sw_pub", "up"))},
           {"external", Port(MboxEnd("gw", "pub"))}}));
  mboxes.push_back(Middlebox(
      "fw_quar", "deny",
      Json{{"internal", Port(MboxEnd("sw_quar", "up"))},
           {"external", Port(MboxEnd("gw", "quar"))}}));
  mboxes.push_back(Middlebox(
      "fw_priv", "sfirewall",
      Json{{"internal_port", Port(MboxEnd("sw_priv", "up"))},
           {"external_port", Port(MboxEnd("gw", "priv"))}}));
  SubnetSwitch(net, mboxes, "sw_pub", pub, MboxEnd("fw_pub", "internal"), false);
  SubnetSwitch(net, mboxes, "sw_quar", quar, MboxEnd("fw_quar", "internal"),
               true);
  SubnetSwitch(net, mboxes, "sw_priv", priv, MboxEnd("fw_priv", "internal_port"),
               false);

  net.topology = Json{{"hosts", HostList(all)},
                      {"tags", Json::array({"0", "1", "2"})},
                      {"middleboxes", mboxes}};
  return net;
}

GeneratedNetwork DatacenterNetwork(int chains, int hosts) {
  if (chains < 1) throw Error(ErrorKind::kUsage, "datacenter needs at least 1 chain");
  if (hosts < 5) throw Error(ErrorKind::kUsage, "datacenter needs at least 5 hosts");
  int inet_count = std::max(1, hosts / 3);
  std::vector<std::string> inet = Names("i", inet_count);
  std::vector<std::string> servers = Names("s", hosts - inet_count - 2);
  std::vector<std::string> chain_ports = Names("c", chains);
  GeneratedNetwork net;
  Json mboxes = Json::array();

  ProgramText edge("edge");
  Json edge_ports = Json::object();
  std::vector<std::string> spray;
  for (const std::string& c : chain_ports) spray.push_back("true => " + c + " ! p");
  for (const std::string& i : inet) {
    edge.Block("h_" + i, spray);
    edge_ports["h_" + i] = Port(HostEnd(i));
  }
  for (int k = 0; k < chains; ++k) {
    edge.Block(chain_ports[k], RouteByDst(inet));
    edge_ports[chain_ports[k]] = Port(MboxEnd("fw" + std::to_string(k), "external_port"));
  }
  net.programs["edge.amdl"] = edge.Text();
  mboxes.push_back(Middlebox("edge", "edge", edge_ports));

  net.programs["sfirewall.amdl"] = kSessionFirewall;
  ProgramText ips("ips");
  ips.Block("outer", {"true => inner ! p", "true => skip"});
  ips.Block("inner", {"true => outer ! p", "true => skip"});
  net.programs["ips.amdl"] = ips.Text();
  ProgramText lb("lb");
  std::vector<std::string> rewrite;
  for (const std::string& s : servers) {
    rewrite.push_back("true => back ! (p.src, " + s + ", p.type)");
  }
  lb.Block("front", rewrite);
  lb.Block("back", {"true => front ! (vip, p.dst, p.type)"});
  net.programs["lb.amdl"] = lb.Text();

  for (int k = 0; k < chains; ++k) {
    std::string n = std::to_string(k);
    mboxes.push_back(Middlebox(
        "fw" + n, "sfirewall",
        Json{{"internal_port", Port(MboxEnd("ips" + n, "outer"))},
             {"external_port", Port(MboxEnd("edge", chain_ports[k]))}}));
    mboxes.push_back(Middlebox(
        "ips" + n, "ips",
        Json{{"outer", Port(MboxEnd("fw" + n, "internal_port"))},
             {"inner", Port(MboxEnd("lb" + n, "front"))}}));
    mboxes.push_back(Middlebox(
        "lb" + n, "lb",
        Json{{"front", Port(MboxEnd("ips" + n, "inner"))},
             {"back", Port(MboxEnd("agg", chain_ports[k]))}}));
  }

  ProgramText agg("agg");
  Json agg_ports = Json::object();
  std::vector<std::string> down = RouteByDst(servers);
  down.push_back("p.dst = sec => iso ! p");
  for (int k = 0; k < chains; ++k) {
    agg.Block(chain_ports[k], down);
    agg_ports[chain_ports[k]] = Port(MboxEnd("lb" + std::to_string(k), "back"));
  }
  for (const std::string& s : servers) {
    agg.Block("h_" + s, spray);
    agg_ports["h_" + s] = Port(HostEnd(s));
  }
  agg.Block("iso", spray);
  agg_ports["iso"] = Port(MboxEnd("iso", "outside"));
  net.programs["agg.amdl"] = agg.Text();
  mboxes.push_back(Middlebox("agg", "agg", agg_ports));

  ProgramText iso("iso");
  std::vector<std::string> guard;
  for (const std::string& i : inet) guard.push_back("p.src = " + i + " => abort");
  guard.push_back("true => inside ! p");
  iso.Block("outside", guard);
  iso.Block("inside", {"true => outside ! p"});
  net.programs["iso.amdl"] = iso.Text();
  Json iso_mbox = Middlebox("iso", "iso",
                            Json{{"outside", Port(MboxEnd("agg", "iso"))},
                                 {"inside", Port(HostEnd("sec"))}});
  iso_mbox["safety"] = true;
  mboxes.push_back(iso_mbox);

  Json host_list = Json::array();
  for (const std::string& i : inet) {
    host_list.push_back(Json{{"id", i}, {"sendable", Json::array({Json::array({i, "vip", "*"})})}});
  }
  for (const std::string& s : servers) host_list.push_back(Json{{"id", s}});
  host_list.push_back(Json{{"id", "vip"}, {"sendable", Json::array()}});
  host_list.push_back(Json{{"id", "sec"}});
  net.topology = Json{{"hosts", host_list},
                      {"tags", Json::array({"0", "1", "2"})},
                      {"middleboxes", mboxes}};
  return net;
}

}  // namespace amdlv
