// asreval/textnorm.h

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

// LDC-style token filtering applied to both sides before scoring, and to
// LM training text.

#ifndef ASREVAL_TEXTNORM_H_
#define ASREVAL_TEXTNORM_H_

#include <functional>
#include <istream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asreval {

inline constexpr std::string_view kHesitation = "%hesitation";

struct NormRules {
  bool remove_non_speech = true;     // "<breath>", "<noise>", ...
  bool remove_partial_words = true;  // "cat-"
  bool strip_punctuation = true;     // leading/trailing ASCII punctuation
  bool optional_hesitation = false;  // reference hesitations deletable at 0 cost
  bool drop_hesitations = false;     // remove hesitations on both sides
  bool case_fold = true;
  /// Spellings treated as hesitations; all are rewritten to %hesitation,
  /// which is always a member.
  std::set<std::string, std::less<>> hesitation_lexicon{std::string(kHesitation)};

  /// Every rule off; the lexicon keeps only %hesitation.
  static NormRules None();

  /// Throws Error(kValue) when optional_hesitation and drop_hesitations are
  /// both set.
  void Validate() const;

  /// Sets one rule from a config key (e.g. "case-fold", "drop-hesitations",
  /// "hesitation-words") and a textual value.  Throws Error(kArgument) for
  /// an unknown key and Error(kValue) for a bad value.
  void Apply(std::string_view key, std::string_view value);
};

struct NormToken {
  std::string text;
  bool hesitation = false;
  bool optional = false;

  bool operator==(const NormToken &) const = default;
};

std::vector<NormToken> Normalize(std::span<const std::string> tokens,
                                 const NormRules &rules);

/// Same filtering, text only.
std::vector<std::string> NormalizeWords(std::span<const std::string> tokens,
                                       const NormRules &rules);

/// Streams `in` line by line; lines that normalize to nothing are skipped.
void ForEachNormalizedLine(
    std::istream &in, const NormRules &rules,
    const std::function<void(std::vector<std::string> &&)> &sink);

std::vector<std::vector<std::string>> NormalizeCorpus(std::istream &in,
                                                      const NormRules &rules);

}  // namespace asreval

#endif  // ASREVAL_TEXTNORM_H_
