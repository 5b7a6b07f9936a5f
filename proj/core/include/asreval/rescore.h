// asreval/rescore.h

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

// N-best rescoring with an n-gram LM and externally computed neural LM
// scores.
//
//   p_mix = sum_m mix[m] * 10^s_m + (1 - sum_m mix[m]) * 10^s_ngram
//   total = am + lm_weight * log10(p_mix) + insertion_penalty * |words|
//
// All s are full-sequence log10 probabilities.  The mixture is evaluated
// in the log domain so long sentences do not underflow.

#ifndef ASREVAL_RESCORE_H_
#define ASREVAL_RESCORE_H_

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "asreval/corpus_io.h"
#include "asreval/ngram_lm.h"

namespace asreval {

/// Total weight given to side (neural) LM streams when none is specified;
/// it is split evenly across the streams and the rest goes to the n-gram.
inline constexpr double kDefaultNnMixWeight = 0.5;

enum class LmMixMode {
  kLinear,    // probability-domain interpolation
  kLogLinear  // weighted sum of log-probabilities
};

struct RescoreConfig {
  double lm_weight = 1.0;
  double word_insertion_penalty = 0.0;
  std::map<std::string, double> nn_mix;
  /// Scores the word sequence when set; otherwise the entry's lm_score is
  /// the n-gram stream.  Not owned.
  const LanguageModel *ngram_model = nullptr;
  LmMixMode mix_mode = LmMixMode::kLinear;

  /// Finite values, lm_weight >= 0, each nn_mix weight in [0,1] and their
  /// sum <= 1; throws Error(kValue).
  void Validate() const;
};

/// log10 p_mix for one entry.
double MixedLmScore(const NBestEntry &entry, const RescoreConfig &cfg);

double TotalScore(const NBestEntry &entry, const RescoreConfig &cfg);

struct ScoredEntry {
  NBestEntry entry;  // rank is the original rank
  double total = 0.0;
  double lm_mix = 0.0;  // log10 p_mix
};

struct RerankResult {
  std::map<std::string, std::vector<ScoredEntry>> lists;  // best first

  const ScoredEntry &Best(const std::string &utterance) const;
};

/// Sorts every list by total score descending; equal totals keep the
/// lower original rank first.  Empty lists raise Error(kArgument).
RerankResult Rerank(const NBestLists &nbest, const RescoreConfig &cfg,
                    unsigned jobs = 1);

enum class MergeNormalization {
  kNone,
  kPerUtteranceShift  // subtract each system's best am_score first
};

/// Union of two systems' lists.  Hypotheses with the same words collapse
/// to the instance with the higher am_score + lm_score (system a wins
/// ties).  The result is ordered by that score and re-ranked from 1.
NBestLists MergeNBest(const NBestLists &a, const NBestLists &b,
                      MergeNormalization normalization = MergeNormalization::kNone);

/// "utterance<TAB>words" for each list's best hypothesis.
void WriteOneBest(std::ostream &out, const RerankResult &result);
/// Reranked lists in n-best format with new ranks.
void WriteReranked(std::ostream &out, const RerankResult &result);

}  // namespace asreval

#endif  // ASREVAL_RESCORE_H_
