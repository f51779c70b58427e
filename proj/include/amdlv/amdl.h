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

#ifndef AMDLV_AMDL_H_
#define AMDLV_AMDL_H_

#include <string>
#include <string_view>
#include <vector>

#include "amdlv/ast.h"

namespace amdlv {

// Parses one AMDL program. Relation declarations are optional; when none is
// given, relations are inferred from their uses. Throws amdlv::Error with the
// offending line and column.
MiddleboxProgram ParseAmdl(std::string_view source);

// Reads and parses a `.amdl` file.
MiddleboxProgram ParseAmdlFile(const std::string& path);

// Merges blocks that read the same channel into a single block whose body is
// the choice of the original bodies, renaming fields positionally and padding
// shorter bindings with fresh dummy fields. Recomputes the query list.
MiddleboxProgram MergePacketBlocks(const MiddleboxProgram& program);

// Distinct membership queries in source order, identified by relation and
// positional atoms.
std::vector<Query> ExtractQueries(const MiddleboxProgram& program);

// Recomputes `queries` and the query index stored in every membership node.
void IndexQueries(MiddleboxProgram& program);

// Canonical source text; parsing it yields an equal program.
std::string PrintAmdl(const MiddleboxProgram& program);

// Renders an atom in the context of the block binding it belongs to.
std::string PrintAtom(const Atom& atom, const FieldBinding& binding);
std::string PrintQuery(const Query& query);

}  // namespace amdlv

#endif  // AMDLV_AMDL_H_
