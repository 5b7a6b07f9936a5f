// asreval/data_select.h

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

// Lightly supervised data selection from closed captions.
//
// Each caption segment is decoded by several systems (supplied as CTM).
// A segment's evidence is how well the decodes agree with each other, how
// well they agree with the caption, and how confident the decoders were.
// Two threshold sets split the segments into a strict tier and a larger
// relaxed tier; everything else is rejected.

#ifndef ASREVAL_DATA_SELECT_H_
#define ASREVAL_DATA_SELECT_H_

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "asreval/corpus_io.h"
#include "asreval/ngram_lm.h"
#include "asreval/textnorm.h"

namespace asreval {

inline constexpr double kDefaultBiasWeight = 0.9;

/// Caption n-gram model (same order and vocabulary as `background`) mixed
/// with the background at (bias_weight, 1 - bias_weight).  Component 0 is
/// the caption model.
InterpolatedLm BuildBiasedLm(std::span<const Sentence> captions,
                             std::shared_ptr<const NGramModel> background,
                             double bias_weight = kDefaultBiasWeight);

/// 1 - (S+D+I)/max(|caption|,1) under unit costs, clamped to [0,1].
double CaptionMatch(std::span<const std::string> caption,
                    std::span<const std::string> hypothesis);

/// Mean over unordered system pairs of the two-orientation average of
/// CaptionMatch.  Needs at least two hypotheses.
double CrossSystemAgreement(std::span<const std::vector<std::string>> hypotheses);

enum class Tier { kStrict, kRelaxed, kRejected };

const char *TierName(Tier tier);

struct SelectionRecord {
  std::string segment_id;
  std::vector<std::string> caption;
  std::map<std::string, std::vector<std::string>> hypotheses;
  std::map<std::string, std::optional<double>> confidences;
  double agreement = 0.0;
  double caption_match = 0.0;
  Tier decision = Tier::kRejected;

  /// Lowest per-system mean confidence; empty if any system has none.
  std::optional<double> MinConfidence() const;
};

/// Fills agreement (across systems) and caption_match (mean over systems).
void ComputeEvidence(SelectionRecord &record);

struct SelectionThresholds {
  double agreement = 0.0;
  double caption_match = 0.0;
  /// Empty disables the confidence gate; otherwise records without a
  /// confidence fail it.
  std::optional<double> min_confidence;

  bool Passes(const SelectionRecord &record) const;
};

struct TierSummary {
  std::size_t segments = 0;
  std::size_t words = 0;  // caption words, a proxy for retained hours
};

struct SelectionSummary {
  TierSummary strict;
  TierSummary relaxed;  // includes the strict tier
  TierSummary rejected;
};

/// Labels every record.  Throws Error(kThreshold) unless strict is at
/// least as demanding as relaxed in every component.
SelectionSummary Select(std::span<SelectionRecord> records,
                        const SelectionThresholds &strict,
                        const SelectionThresholds &relaxed);

/// Builds one record per scorable caption segment from per-system CTMs,
/// normalizing captions and hypotheses with `rules`.  Needs at least two
/// systems.
std::vector<SelectionRecord> BuildRecords(
    std::span<const StmSegment> captions,
    const std::map<std::string, std::vector<CtmEntry>> &system_ctms,
    const NormRules &rules);

/// segment_id, tier, agreement, caption_match, confidence ("NA" if none).
void WriteManifest(std::ostream &out, std::span<const SelectionRecord> records);

/// "segment_id<TAB>words" for every record at or above `tier`; the words
/// are the hypothesis of `system`.
void WriteSelectedTranscripts(std::ostream &out,
                              std::span<const SelectionRecord> records,
                              Tier tier, const std::string &system);

}  // namespace asreval

#endif  // ASREVAL_DATA_SELECT_H_
