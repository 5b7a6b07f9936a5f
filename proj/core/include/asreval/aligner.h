// asreval/aligner.h

// Copyright 2026  asreval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Word-level minimum-cost alignment of a reference against a hypothesis,
// and the time-based assignment of CTM words to STM segments.

#ifndef ASREVAL_ALIGNER_H_
#define ASREVAL_ALIGNER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asreval/corpus_io.h"
#include "asreval/textnorm.h"

namespace asreval {

enum class EditKind {
  kMatch,
  kSubstitution,
  kDeletion,
  kInsertion,
  kOptionalDeletion  // optional reference token skipped at zero cost
};

const char *EditKindName(EditKind kind);

struct AlignmentOp {
  EditKind kind;
  std::optional<std::string> ref_word;
  std::optional<std::string> hyp_word;

  bool operator==(const AlignmentOp &) const = default;
};

struct AlignCosts {
  std::int64_t sub_cost = 4;
  std::int64_t del_cost = 3;
  std::int64_t ins_cost = 3;

  static AlignCosts Nist() { return {4, 3, 3}; }
  static AlignCosts Unit() { return {1, 1, 1}; }

  /// Non-negative, and sub <= del + ins; throws Error(kValue).
  void Validate() const;
};

struct EditCounts {
  std::int64_t matches = 0;
  std::int64_t subs = 0;
  std::int64_t dels = 0;
  std::int64_t inss = 0;
  std::int64_t optional_dels = 0;

  std::int64_t errors() const { return subs + dels + inss; }
};

struct Alignment {
  std::vector<AlignmentOp> ops;  // in sequence order
  std::int64_t total_cost = 0;

  EditCounts Counts() const;
};

/// Global minimum-cost monotone alignment.  Reference tokens flagged
/// optional may be deleted for free.  Among equal-cost paths the backtrace
/// (from the end) prefers match, then substitution, then deletion, then
/// insertion.
Alignment Align(std::span<const NormToken> ref, std::span<const std::string> hyp,
                const AlignCosts &costs = AlignCosts::Nist());

/// Convenience overload: no reference token is optional.
Alignment Align(std::span<const std::string> ref,
                std::span<const std::string> hyp,
                const AlignCosts &costs = AlignCosts::Nist());

/// Minimum cost only, in O(min(|ref|,|hyp|)) memory.
std::int64_t AlignmentCost(std::span<const NormToken> ref,
                           std::span<const std::string> hyp,
                           const AlignCosts &costs = AlignCosts::Nist());

struct SegmentAssignment {
  /// Parallel to the STM list; non-scorable segments stay empty.
  std::vector<std::vector<CtmEntry>> words;
  /// Words whose midpoint lies in no scorable segment.
  std::vector<CtmEntry> unassigned;
};

/// A word belongs to the segment with tbeg <= midpoint < tend on the same
/// (recording, channel).  Overlapping segments on one stream raise
/// Error(kAmbiguity).
SegmentAssignment MapCtmToSegments(std::span<const CtmEntry> ctm,
                                   std::span<const StmSegment> stm);

std::vector<std::string> Words(std::span<const CtmEntry> entries);

}  // namespace asreval

#endif  // ASREVAL_ALIGNER_H_
