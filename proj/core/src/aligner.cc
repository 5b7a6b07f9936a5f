// core/src/aligner.cc

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

#include "asreval/aligner.h"

#include <algorithm>
#include <cstdint>
#include <map>

#include "asreval/error.h"
#include "asreval/strings.h"

namespace asreval {

const char *EditKindName(EditKind kind) {
  switch (kind) {
    case EditKind::kMatch: return "match";
    case EditKind::kSubstitution: return "sub";
    case EditKind::kDeletion: return "del";
    case EditKind::kInsertion: return "ins";
    case EditKind::kOptionalDeletion: return "optdel";
  }
  return "?";
}

void AlignCosts::Validate() const {
  if (sub_cost < 0 || del_cost < 0 || ins_cost < 0)
    throw Error(ErrorKind::kValue, "alignment costs must be non-negative");
  if (sub_cost > del_cost + ins_cost)
    throw Error(ErrorKind::kValue,
                "substitution cost exceeds deletion plus insertion cost");
}

EditCounts Alignment::Counts() const {
  EditCounts c;
  for (const AlignmentOp &op : ops) {
    switch (op.kind) {
      case EditKind::kMatch: ++c.matches; break;
      case EditKind::kSubstitution: ++c.subs; break;
      case EditKind::kDeletion: ++c.dels; break;
      case EditKind::kInsertion: ++c.inss; break;
      case EditKind::kOptionalDeletion: ++c.optional_dels; break;
    }
  }
  return c;
}

namespace {

// Bits recording which predecessor moves reach a cell at minimum cost.
constexpr std::uint8_t kFromDiag = 1;
constexpr std::uint8_t kFromUp = 2;    // deletion
constexpr std::uint8_t kFromLeft = 4;  // insertion

}  // namespace

Alignment Align(std::span<const NormToken> ref, std::span<const std::string> hyp,
                const AlignCosts &costs) {
  costs.Validate();
  const std::size_t n = ref.size(), m = hyp.size();
  const std::size_t width = m + 1;
  std::vector<std::uint8_t> moves((n + 1) * width, 0);
  std::vector<std::int64_t> prev(width), cur(width);

  auto del_cost = [&](std::size_t i) {
    return ref[i].optional ? std::int64_t{0} : costs.del_cost;
  };

  prev[0] = 0;
  for (std::size_t j = 1; j <= m; ++j) {
    prev[j] = prev[j - 1] + costs.ins_cost;
    moves[j] = kFromLeft;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = prev[0] + del_cost(i - 1);
    moves[i * width] = kFromUp;
    for (std::size_t j = 1; j <= m; ++j) {
      const bool same = ref[i - 1].text == hyp[j - 1];
      const std::int64_t diag = prev[j - 1] + (same ? 0 : costs.sub_cost);
      const std::int64_t up = prev[j] + del_cost(i - 1);
      const std::int64_t left = cur[j - 1] + costs.ins_cost;
      const std::int64_t best = std::min({diag, up, left});
      std::uint8_t mask = 0;
      if (diag == best) mask |= kFromDiag;
      if (up == best) mask |= kFromUp;
      if (left == best) mask |= kFromLeft;
      cur[j] = best;
      moves[i * width + j] = mask;
    }
    std::swap(prev, cur);
  }

  Alignment result;
  result.total_cost = prev[m];
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::uint8_t mask = moves[i * width + j];
    if (i > 0 && j > 0 && (mask & kFromDiag)) {
      const bool same = ref[i - 1].text == hyp[j - 1];
      result.ops.push_back({same ? EditKind::kMatch : EditKind::kSubstitution,
                            ref[i - 1].text, hyp[j - 1]});
      --i;
      --j;
    } else if (i > 0 && (mask & kFromUp)) {
      result.ops.push_back({ref[i - 1].optional ? EditKind::kOptionalDeletion
                                                : EditKind::kDeletion,
                            ref[i - 1].text, std::nullopt});
      --i;
    } else if (j > 0 && (mask & kFromLeft)) {
      result.ops.push_back({EditKind::kInsertion, std::nullopt, hyp[j - 1]});
      --j;
    } else {
      throw Error(ErrorKind::kInternal, "alignment backtrace lost its path");
    }
  }
  std::reverse(result.ops.begin(), result.ops.end());
  return result;
}

Alignment Align(std::span<const std::string> ref,
                std::span<const std::string> hyp, const AlignCosts &costs) {
  std::vector<NormToken> tokens;
  tokens.reserve(ref.size());
  for (const std::string &w : ref) tokens.push_back({w, false, false});
  return Align(tokens, hyp, costs);
}

std::int64_t AlignmentCost(std::span<const NormToken> ref,
                           std::span<const std::string> hyp,
                           const AlignCosts &costs) {
  costs.Validate();
  const std::size_t n = ref.size(), m = hyp.size();
  auto del_cost = [&](std::size_t i) {
    return ref[i].optional ? std::int64_t{0} : costs.del_cost;
  };
  auto cell = [&](std::size_t i, std::size_t j) {
    return ref[i].text == hyp[j] ? std::int64_t{0} : costs.sub_cost;
  };

  if (m <= n) {
    // Rows run over the hypothesis.
    std::vector<std::int64_t> row(m + 1);
    for (std::size_t j = 0; j <= m; ++j)
      row[j] = static_cast<std::int64_t>(j) * costs.ins_cost;
    for (std::size_t i = 1; i <= n; ++i) {
      std::int64_t diag = row[0];
      row[0] += del_cost(i - 1);
      for (std::size_t j = 1; j <= m; ++j) {
        const std::int64_t up = row[j];
        row[j] = std::min({diag + cell(i - 1, j - 1), up + del_cost(i - 1),
                           row[j - 1] + costs.ins_cost});
        diag = up;
      }
    }
    return row[m];
  }
  // Rows run over the reference.
  std::vector<std::int64_t> row(n + 1);
  row[0] = 0;
  for (std::size_t i = 1; i <= n; ++i) row[i] = row[i - 1] + del_cost(i - 1);
  for (std::size_t j = 1; j <= m; ++j) {
    std::int64_t diag = row[0];
    row[0] += costs.ins_cost;
    for (std::size_t i = 1; i <= n; ++i) {
      const std::int64_t left = row[i];
      row[i] = std::min({diag + cell(i - 1, j - 1), left + costs.ins_cost,
                         row[i - 1] + del_cost(i - 1)});
      diag = left;
    }
  }
  return row[n];
}

SegmentAssignment MapCtmToSegments(std::span<const CtmEntry> ctm,
                                   std::span<const StmSegment> stm) {
  using StreamKey = std::pair<std::string_view, std::string_view>;
  std::map<StreamKey, std::vector<std::size_t>> streams;
  for (std::size_t k = 0; k < stm.size(); ++k)
    streams[{stm[k].recording_id, stm[k].channel}].push_back(k);

  for (auto &[key, idx] : streams) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return stm[a].tbeg < stm[b].tbeg;
    });
    for (std::size_t k = 1; k < idx.size(); ++k) {
      const StmSegment &a = stm[idx[k - 1]], &b = stm[idx[k]];
      if (b.tbeg < a.tend)
        throw Error(ErrorKind::kAmbiguity,
                    "segments [" + FormatDouble(a.tbeg) + "," +
                        FormatDouble(a.tend) + ") and [" +
                        FormatDouble(b.tbeg) + "," + FormatDouble(b.tend) +
                        ") overlap on " + a.recording_id + " channel " +
                        a.channel);
    }
  }

  SegmentAssignment out;
  out.words.resize(stm.size());
  for (const CtmEntry &w : ctm) {
    auto it = streams.find({w.recording_id, w.channel});
    if (it == streams.end()) {
      out.unassigned.push_back(w);
      continue;
    }
    const std::vector<std::size_t> &idx = it->second;
    const double mid = w.midpoint();
    auto pos = std::upper_bound(
        idx.begin(), idx.end(), mid,
        [&](double t, std::size_t k) { return t < stm[k].tbeg; });
    if (pos == idx.begin()) {
      out.unassigned.push_back(w);
      continue;
    }
    const std::size_t k = *std::prev(pos);
    if (mid < stm[k].tend && stm[k].scorable)
      out.words[k].push_back(w);
    else
      out.unassigned.push_back(w);
  }
  return out;
}

std::vector<std::string> Words(std::span<const CtmEntry> entries) {
  std::vector<std::string> words;
  words.reserve(entries.size());
  for (const CtmEntry &e : entries) words.push_back(e.word);
  return words;
}

}  // namespace asreval
