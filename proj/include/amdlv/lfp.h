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

#ifndef AMDLV_LFP_H_
#define AMDLV_LFP_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "amdlv/abstract.h"
#include "amdlv/topology.h"
#include "json.hpp"

namespace amdlv {

// Middlebox `mbox` reading `packet` from network channel `channel` while its
// own row is `row`.
struct AbstractStep {
  int mbox = -1;
  int channel = -1;
  PacketId packet = 0;
  Row row = 0;
};

// Why a fact was first added to the element.
struct Justification {
  enum class Kind : uint8_t { kInitial, kEmitted, kStepped, kEffect, kErr };

  Kind kind = Kind::kInitial;
  AbstractStep step;
  // Companion packet and its previous row, for kEffect.
  PacketId companion = 0;
  Row companion_row = 0;
};

struct WitnessEntry {
  // "channel" facts carry a packet on `channel`; "row" facts a row of `mbox`.
  bool is_row = false;
  int mbox = -1;
  int channel = -1;
  PacketId packet = 0;
  Row row = 0;
  Justification why;
};

struct LfpOptions {
  int threads = 1;
  bool record_provenance = true;
  // Jobs whose kernels are evaluated together; independent of `threads`.
  size_t batch = 1 << 15;
  // Called after the outcomes of each step have been joined in.
  std::function<void(const AbstractStep&, const AbstractElement&)> on_step;
};

struct Verdict {
  bool unsafe = false;
  std::vector<int> aborting;
  AbstractElement fixpoint;
  // Rounds of the worklist engine.
  size_t iterations = 0;
  // Facts added beyond the initial element.
  size_t growth = 0;
  size_t steps = 0;
  std::vector<WitnessEntry> witness;
  double seconds = 0;
};

// mu# = lfp(Tr#) above the initial element.
Verdict Lfp(const Topology& topology, const LfpOptions& options = {});

// |E|*|P| + sum over middleboxes of |P|*(2^|Q(m)| + 1).
double IterationBound(const Topology& topology, bool count_err = true);

// The report document; `brief` omits the element.
nlohmann::ordered_json VerdictJson(const Topology& topology,
                                   const Verdict& verdict, bool brief = false);

}  // namespace amdlv

#endif  // AMDLV_LFP_H_
