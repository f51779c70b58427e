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


#ifndef AMDLV_ROBUST_H_
#define AMDLV_ROBUST_H_

#include <cstddef>
#include <string>
#include <vector>

#include "amdlv/packet.h"
#include "amdlv/program.h"
#include "amdlv/topology.h"

namespace amdlv {

struct RobustInput {
  Packet packet;
  // Local channel of the middlebox.
  int channel = 0;

  friend bool operator==(const RobustInput&, const RobustInput&) = default;
};

struct RobustResult {
  bool robust = true;
  // Err-free input sequence whose suffix starting at `suffix_start` errs.
  std::vector<RobustInput> sequence;
  size_t suffix_start = 0;
  size_t nodes = 0;
};

// Bounded check that err-free input sequences are suffix-closed. Throws a
// validation error unless every non-err step forwards the input packet
// unchanged, with one fixed output channel per input channel and packet.
RobustResult CheckRevertRobust(const CompiledProgram& program,
                               const PacketSpace& space, int bound);
RobustResult CheckRevertRobust(const Topology& topology, int mbox, int bound);

std::string DescribeRobustWitness(const Topology& topology, int mbox,
                                  const RobustResult& result);

}  // namespace amdlv

#endif  // AMDLV_ROBUST_H_
