// core/src/data_select.cc

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

#include "asreval/data_select.h"

#include <algorithm>
#include <cmath>

#include "asreval/aligner.h"
#include "asreval/error.h"
#include "asreval/strings.h"

namespace asreval {

InterpolatedLm BuildBiasedLm(std::span<const Sentence> captions,
                             std::shared_ptr<const NGramModel> background,
                             double bias_weight) {
  if (!background) throw Error(ErrorKind::kArgument, "no background model");
  if (!(bias_weight > 0.0 && bias_weight <= 1.0))
    throw Error(ErrorKind::kValue, "bias weight must lie in (0,1]");
  bool any_words = std::any_of(captions.begin(), captions.end(),
                               [](const Sentence &s) { return !s.empty(); });
  if (!any_words)
    throw Error(ErrorKind::kArgument, "no caption text to bias towards");
  // Counting over the background vocabulary makes both components spread
  // their mass over the same words, so the mixture stays normalized.
  const std::vector<std::string> words = background->PredictedVocabulary();
  const Vocabulary vocab(words.begin(), words.end());
  auto caption_model = std::make_shared<NGramModel>(
      Estimate(CountNGrams(captions, background->order(), &vocab)));
  return InterpolatedLm({caption_model, background},
                        {bias_weight, 1.0 - bias_weight});
}

double CaptionMatch(std::span<const std::string> caption,
                    std::span<const std::string> hypothesis) {
  EditCounts c = Align(caption, hypothesis, AlignCosts::Unit()).Counts();
  double denom = static_cast<double>(std::max<std::size_t>(caption.size(), 1));
  double score = 1.0 - static_cast<double>(c.errors()) / denom;
  return std::clamp(score, 0.0, 1.0);
}

double CrossSystemAgreement(std::span<const std::vector<std::string>> hyps) {
  if (hyps.size() < 2)
    throw Error(ErrorKind::kArgument, "agreement needs at least two systems");
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < hyps.size(); ++a)
    for (std::size_t b = a + 1; b < hyps.size(); ++b) {
      total += 0.5 * (CaptionMatch(hyps[a], hyps[b]) +
                      CaptionMatch(hyps[b], hyps[a]));
      ++pairs;
    }
  return total / static_cast<double>(pairs);
}

const char *TierName(Tier tier) {
  switch (tier) {
    case Tier::kStrict: return "strict";
    case Tier::kRelaxed: return "relaxed";
    case Tier::kRejected: return "rejected";
  }
  return "?";
}

std::optional<double> SelectionRecord::MinConfidence() const {
  if (confidences.empty()) return std::nullopt;
  double lowest = 1.0;
  for (const auto &[system, conf] : confidences) {
    if (!conf) return std::nullopt;
    lowest = std::min(lowest, *conf);
  }
  return lowest;
}

void ComputeEvidence(SelectionRecord &record) {
  std::vector<std::vector<std::string>> hyps;
  double match = 0.0;
  for (const auto &[system, words] : record.hypotheses) {
    hyps.push_back(words);
    match += CaptionMatch(record.caption, words);
  }
  record.agreement = CrossSystemAgreement(hyps);
  record.caption_match = match / static_cast<double>(hyps.size());
}

bool SelectionThresholds::Passes(const SelectionRecord &record) const {
  if (record.agreement < agreement) return false;
  if (record.caption_match < caption_match) return false;
  if (min_confidence) {
    std::optional<double> conf = record.MinConfidence();
    if (!conf || *conf < *min_confidence) return false;
  }
  return true;
}

SelectionSummary Select(std::span<SelectionRecord> records,
                        const SelectionThresholds &strict,
                        const SelectionThresholds &relaxed) {
  if (strict.agreement < relaxed.agreement ||
      strict.caption_match < relaxed.caption_match)
    throw Error(ErrorKind::kThreshold,
                "strict thresholds must not be below relaxed thresholds");
  if (relaxed.min_confidence &&
      (!strict.min_confidence || *strict.min_confidence < *relaxed.min_confidence))
    throw Error(ErrorKind::kThreshold,
                "strict confidence gate must be at least the relaxed one");

  SelectionSummary summary;
  for (SelectionRecord &r : records) {
    if (strict.Passes(r))
      r.decision = Tier::kStrict;
    else if (relaxed.Passes(r))
      r.decision = Tier::kRelaxed;
    else
      r.decision = Tier::kRejected;

    TierSummary *bucket = r.decision == Tier::kRejected ? &summary.rejected
                                                        : &summary.relaxed;
    ++bucket->segments;
    bucket->words += r.caption.size();
    if (r.decision == Tier::kStrict) {
      ++summary.strict.segments;
      summary.strict.words += r.caption.size();
    }
  }
  return summary;
}

std::vector<SelectionRecord> BuildRecords(
    std::span<const StmSegment> captions,
    const std::map<std::string, std::vector<CtmEntry>> &system_ctms,
    const NormRules &rules) {
  if (system_ctms.size() < 2)
    throw Error(ErrorKind::kArgument, "selection needs at least two systems");

  std::map<std::string, SegmentAssignment> assigned;
  for (const auto &[system, ctm] : system_ctms)
    assigned.emplace(system, MapCtmToSegments(ctm, captions));

  std::vector<SelectionRecord> records;
  for (std::size_t k = 0; k < captions.size(); ++k) {
    if (!captions[k].scorable) continue;
    SelectionRecord r;
    r.segment_id = SegmentId(captions[k]);
    r.caption = NormalizeWords(captions[k].tokens, rules);
    for (const auto &[system, a] : assigned) {
      const std::vector<CtmEntry> &words = a.words[k];
      r.hypotheses[system] = NormalizeWords(Words(words), rules);
      std::optional<double> conf;
      if (!words.empty()) {
        double sum = 0.0;
        bool complete = true;
        for (const CtmEntry &w : words) {
          if (!w.confidence) {
            complete = false;
            break;
          }
          sum += *w.confidence;
        }
        if (complete) conf = sum / static_cast<double>(words.size());
      }
      r.confidences[system] = conf;
    }
    ComputeEvidence(r);
    records.push_back(std::move(r));
  }
  return records;
}

void WriteManifest(std::ostream &out, std::span<const SelectionRecord> records) {
  out << "segment_id\ttier\tagreement\tcaption_match\tconfidence\n";
  for (const SelectionRecord &r : records) {
    std::optional<double> conf = r.MinConfidence();
    out << r.segment_id << '\t' << TierName(r.decision) << '\t'
        << FormatFixed(r.agreement, 4) << '\t' << FormatFixed(r.caption_match, 4)
        << '\t' << (conf ? FormatFixed(*conf, 4) : std::string("NA")) << '\n';
  }
}

void WriteSelectedTranscripts(std::ostream &out,
                              std::span<const SelectionRecord> records,
                              Tier tier, const std::string &system) {
  for (const SelectionRecord &r : records) {
    if (r.decision == Tier::kRejected) continue;
    if (tier == Tier::kStrict && r.decision != Tier::kStrict) continue;
    auto it = r.hypotheses.find(system);
    if (it == r.hypotheses.end())
      throw Error(ErrorKind::kArgument, "no system named '" + system + "'");
    out << r.segment_id << '\t' << Join(it->second) << '\n';
  }
}

}  // namespace asreval
