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


// amdlv: command-line front end.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "amdlv/amdl.h"
#include "amdlv/datalog.h"
#include "amdlv/error.h"
#include "amdlv/explorer.h"
#include "amdlv/generators.h"
#include "amdlv/lfp.h"
#include "amdlv/robust.h"
#include "amdlv/topology.h"
#include "amdlv/version.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;
using amdlv::Error;
using amdlv::ErrorKind;

constexpr int kExitSafe = 0;
constexpr int kExitUnsafe = 1;
constexpr int kExitError = 2;
constexpr int kExitBound = 3;

int DefaultThreads() {
  const char* env = std::getenv("AMDLV_THREADS");
  if (env == nullptr) return 1;
  try {
    int n = std::stoi(env);
    return n >= 1 ? n : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
  out << text;
}

struct VerifyArgs {
  std::string topology;
  int threads = DefaultThreads();
  std::string output;
  bool brief = false;
};

int RunVerify(const VerifyArgs& a) {
  amdlv::Topology topo = amdlv::LoadTopology(a.topology);
  amdlv::LfpOptions options;
  options.threads = a.threads;
  amdlv::Verdict v = amdlv::Lfp(topo, options);
  Json report = amdlv::VerdictJson(topo, v, a.brief);
  WriteText(a.output, report.dump(2) + "\n");
  if (!a.output.empty() && a.output != "-") {
    std::cout << (v.unsafe ? "UNSAFE" : "SAFE") << "\n";
  }
  return v.unsafe ? kExitUnsafe : kExitSafe;
}

struct ExploreArgs {
  std::string topology;
  std::string variant = "u";
  std::string mode = "packet";
  int cap = 2;
  int len = 6;
  size_t max_configs = 500000;
  std::string trace;
};

int RunExplore(const ExploreArgs& a) {
  amdlv::Variant variant;
  if (!amdlv::ParseVariant(a.variant, &variant)) {
    throw Error(ErrorKind::kUsage, "unknown variant '" + a.variant + "'");
  }
  amdlv::StateMode mode;
  if (a.mode == "packet") {
    mode = amdlv::StateMode::kPacket;
  } else if (a.mode == "relation") {
    mode = amdlv::StateMode::kRelation;
  } else {
    throw Error(ErrorKind::kUsage, "unknown mode '" + a.mode + "'");
  }
  amdlv::Topology topo = amdlv::LoadTopology(a.topology);
  amdlv::ExplorationBounds bounds;
  bounds.multiplicity = a.cap;
  bounds.length = a.len;
  bounds.max_configs = a.max_configs;
  auto start = std::chrono::steady_clock::now();
  amdlv::Exploration x = amdlv::Explore(topo, variant, mode, bounds);
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  Json report = Json::object();
  report["status"] = amdlv::ExploreStatusName(x.status);
  report["variant"] = amdlv::VariantName(variant);
  report["mode"] = a.mode;
  report["configs"] = x.size();
  report["capped_transitions"] = x.capped;
  report["truncated"] = x.truncated;
  report["seconds"] = seconds;
  Json trace = Json::array();
  for (const amdlv::TraceEvent& ev : x.trace) {
    trace.push_back(amdlv::TraceEventJson(topo, ev));
  }
  report["trace"] = trace;
  if (!a.trace.empty()) {
    std::string lines;
    for (const Json& ev : trace) lines += ev.dump() + "\n";
    WriteText(a.trace, lines);
  }
  std::cout << report.dump(2) << "\n";
  switch (x.status) {
    case amdlv::ExploreStatus::kSafe:
      return kExitSafe;
    case amdlv::ExploreStatus::kUnsafe:
      return kExitUnsafe;
    case amdlv::ExploreStatus::kBoundExceeded:
      return kExitBound;
  }
  return kExitError;
}

struct EmitArgs {
  std::string topology;
  std::string dialect = "generic";
  std::string output;
};

int RunEmit(const EmitArgs& a) {
  amdlv::DatalogDialect dialect;
  if (!amdlv::ParseDialect(a.dialect, &dialect)) {
    throw Error(ErrorKind::kUsage, "unknown dialect '" + a.dialect + "'");
  }
  amdlv::Topology topo = amdlv::LoadTopology(a.topology);
  WriteText(a.output, amdlv::EmitDatalog(topo, dialect));
  return kExitSafe;
}

struct BenchArgs {
  std::string suite;
  std::vector<int> hosts;
  std::vector<int> chains;
  int datacenter_hosts = 12;
  std::string out;
  std::string dir;
  int threads = DefaultThreads();
};

// A suite is "enterprise", "datacenter" or a JSON file naming the generator
// and its sizes.
void ResolveSuite(BenchArgs& a, std::string* generator) {
  if (a.suite == "enterprise" || a.suite == "datacenter") {
    *generator = a.suite;
  } else {
    std::ifstream in(a.suite);
    if (!in) throw Error(ErrorKind::kIo, "cannot read suite '" + a.suite + "'");
    Json doc;
    try {
      doc = Json::parse(in);
      *generator = doc.at("generator").get<std::string>();
      if (a.hosts.empty() && doc.contains("hosts")) {
        a.hosts = doc["hosts"].get<std::vector<int>>();
      }
      if (a.chains.empty() && doc.contains("chains")) {
        a.chains = doc["chains"].get<std::vector<int>>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kSchema, "suite '" + a.suite + "': " + e.what());
    }
  }
  if (*generator != "enterprise" && *generator != "datacenter") {
    throw Error(ErrorKind::kUsage, "unknown generator '" + *generator + "'");
  }
  std::vector<int>& sizes = *generator == "enterprise" ? a.hosts : a.chains;
  if (sizes.empty()) {
    throw Error(ErrorKind::kUsage, *generator == "enterprise"
                                       ? "enterprise needs --hosts"
                                       : "datacenter needs --chains");
  }
  for (int n : sizes) {
    if (n <= 0) throw Error(ErrorKind::kUsage, "sizes must be positive");
  }
  if (*generator == "enterprise") {
    for (int n : sizes) {
      if (n < 4) throw Error(ErrorKind::kUsage, "enterprise needs at least 4 hosts");
    }
  } else if (a.datacenter_hosts < 5) {
    throw Error(ErrorKind::kUsage, "datacenter needs at least 5 hosts");
  }
}

int RunBench(BenchArgs a) {
  std::string generator;
  ResolveSuite(a, &generator);
  const std::vector<int>& sizes = generator == "enterprise" ? a.hosts : a.chains;
  std::ostringstream csv;
  csv << "generator,size,hosts,middleboxes,channels,packets,status,iterations,"
         "growth,seconds\n";
  bool any_unsafe = false;
  for (int n : sizes) {
    amdlv::GeneratedNetwork net =
        generator == "enterprise" ? amdlv::EnterpriseNetwork(n)
                                  : amdlv::DatacenterNetwork(n, a.datacenter_hosts);
    if (!a.dir.empty()) {
      net.Write(a.dir + "/" + generator + "-" + std::to_string(n));
    }
    amdlv::Topology topo = net.Build();
    amdlv::LfpOptions options;
    options.threads = a.threads;
    options.record_provenance = false;
    auto start = std::chrono::steady_clock::now();
    amdlv::Verdict v = amdlv::Lfp(topo, options);
    double seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    any_unsafe = any_unsafe || v.unsafe;
    csv << generator << "," << n << "," << topo.hosts.size() << ","
        << topo.middleboxes.size() << "," << topo.channels.size() << ","
        << topo.space.size() << "," << (v.unsafe ? "UNSAFE" : "SAFE") << ","
        << v.iterations << "," << v.growth << "," << seconds << "\n";
    std::cerr << generator << " " << n << ": " << seconds << " s\n";
  }
  WriteText(a.out, csv.str());
  return any_unsafe ? kExitUnsafe : kExitSafe;
}

struct FmtArgs {
  std::string file;
  bool in_place = false;
};

int RunFmt(const FmtArgs& a) {
  amdlv::MiddleboxProgram prog = amdlv::ParseAmdlFile(a.file);
  for (const std::string& w : prog.warnings) {
    std::cerr << a.file << ":" << w << "\n";
  }
  WriteText(a.in_place ? a.file : "", amdlv::PrintAmdl(prog));
  return kExitSafe;
}

struct RobustArgs {
  std::string topology;
  std::string mbox;
  int bound = 6;
};

int RunRobust(const RobustArgs& a) {
  amdlv::Topology topo = amdlv::LoadTopology(a.topology);
  int m = topo.FindMiddlebox(a.mbox);
  if (m < 0) throw Error(ErrorKind::kUsage, "no middlebox '" + a.mbox + "'");
  amdlv::RobustResult r = amdlv::CheckRevertRobust(topo, m, a.bound);
  Json report = Json::object();
  report["mbox"] = a.mbox;
  report["bound"] = a.bound;
  report["robust"] = r.robust;
  report["nodes"] = r.nodes;
  if (!r.robust) {
    Json seq = Json::array();
    const amdlv::CompiledProgram& prog = topo.middleboxes[m].program;
    for (const amdlv::RobustInput& in : r.sequence) {
      seq.push_back(Json{{"channel", prog.channels[in.channel]},
                         {"packet", topo.PacketJson(in.packet)}});
    }
    report["sequence"] = seq;
    report["suffix_start"] = r.suffix_start;
    report["witness"] = amdlv::DescribeRobustWitness(topo, m, r);
  }
  std::cout << report.dump(2) << "\n";
  return r.robust ? kExitSafe : kExitUnsafe;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safety verifier for networks of stateful middleboxes"};
  app.set_version_flag("--version", std::string(amdlv::kVersion));
  app.require_subcommand(1);

  VerifyArgs verify;
  CLI::App* cmd_verify =
      app.add_subcommand("verify", "Abstract fixpoint check; exit 0 SAFE, 1 UNSAFE");
  cmd_verify->add_option("topology", verify.topology, "Topology JSON")->required();
  cmd_verify->add_option("--threads", verify.threads,
                         "Worker threads (default: AMDLV_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  cmd_verify->add_option("--output,-o", verify.output, "Report file (default stdout)");
  cmd_verify->add_flag("--brief", verify.brief, "Omit the fixpoint from the report");

  ExploreArgs explore;
  CLI::App* cmd_explore = app.add_subcommand(
      "explore", "Bounded concrete exploration; exit 0 SAFE, 1 UNSAFE, 3 bound exceeded");
  cmd_explore->add_option("topology", explore.topology, "Topology JSON")->required();
  cmd_explore->add_option("--variant", explore.variant,
                          "o (ordered), u (unordered), or, ur (reverting)")
      ->check(CLI::IsMember({"o", "u", "or", "ur"}));
  cmd_explore->add_option("--mode", explore.mode, "packet or relation states")
      ->check(CLI::IsMember({"packet", "relation"}));
  cmd_explore->add_option("--cap", explore.cap, "Copies of one packet per channel")
      ->check(CLI::PositiveNumber);
  cmd_explore->add_option("--len", explore.len, "Packets per channel")
      ->check(CLI::PositiveNumber);
  cmd_explore->add_option("--max-configs", explore.max_configs,
                          "Stop after this many configurations")
      ->check(CLI::PositiveNumber);
  cmd_explore->add_option("--trace", explore.trace,
                          "Write the error trace as JSON lines");

  EmitArgs emit;
  CLI::App* cmd_emit =
      app.add_subcommand("emit-datalog", "Lower the network to a Datalog program");
  cmd_emit->add_option("topology", emit.topology, "Topology JSON")->required();
  cmd_emit->add_option("--dialect", emit.dialect, "generic or souffle");
  cmd_emit->add_option("--output,-o", emit.output, "Output .dl file (default stdout)");

  BenchArgs bench;
  CLI::App* cmd_bench = app.add_subcommand(
      "bench",
      "Generate enterprise (--hosts) or datacenter (--chains) networks, verify "
      "each and write wall times as CSV");
  cmd_bench->add_option("suite", bench.suite,
                        "enterprise, datacenter, or a JSON file "
                        "{\"generator\": ..., \"hosts\"|\"chains\": [...]}")
      ->required();
  cmd_bench->add_option("--hosts", bench.hosts,
                        "Enterprise sizes: total hosts, split evenly into "
                        "outside, public, quarantined and private groups")
      ->delimiter(',');
  cmd_bench->add_option("--chains", bench.chains,
                        "Datacenter sizes: firewall/IPS/load-balancer chains")
      ->delimiter(',');
  cmd_bench->add_option("--datacenter-hosts", bench.datacenter_hosts,
                        "Hosts in every datacenter network");
  cmd_bench->add_option("--out", bench.out, "CSV file (default stdout)");
  cmd_bench->add_option("--dir", bench.dir, "Also write the generated networks here");
  cmd_bench->add_option("--threads", bench.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  FmtArgs fmt;
  CLI::App* cmd_fmt = app.add_subcommand("fmt", "Print an AMDL program canonically");
  cmd_fmt->add_option("file", fmt.file, "AMDL file")->required();
  cmd_fmt->add_flag("--in-place,-i", fmt.in_place, "Rewrite the file");

  RobustArgs robust;
  CLI::App* cmd_robust = app.add_subcommand(
      "robust", "Bounded revert-robustness check of a safety middlebox");
  cmd_robust->add_option("topology", robust.topology, "Topology JSON")->required();
  cmd_robust->add_option("--mbox", robust.mbox, "Middlebox id")->required();
  cmd_robust->add_option("--bound", robust.bound, "Maximum input length")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*cmd_verify) return RunVerify(verify);
    if (*cmd_explore) return RunExplore(explore);
    if (*cmd_emit) return RunEmit(emit);
    if (*cmd_bench) return RunBench(bench);
    if (*cmd_fmt) return RunFmt(fmt);
    if (*cmd_robust) return RunRobust(robust);
  } catch (const Error& e) {
    std::cerr << "amdlv: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "amdlv: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
