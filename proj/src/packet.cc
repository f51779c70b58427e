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

#include "amdlv/packet.h"

#include <string>
#include <vector>

namespace amdlv {

std::vector<Packet> PacketSpace::Enumerate() const {
  std::vector<Packet> out;
  out.reserve(size());
  for (PacketId id = 0; id < size(); ++id) out.push_back(At(id));
  return out;
}

std::string RowString(Row row, int width) {
  if (row == kErrRow) return "err";
  std::string out;
  for (int q = 0; q < width; ++q) out += ((row >> q) & 1) ? 'T' : 'F';
  return out;
}

}  // namespace amdlv
