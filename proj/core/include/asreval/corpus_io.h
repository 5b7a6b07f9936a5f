// asreval/corpus_io.h

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

// Readers and writers for the file formats the toolkit consumes:
//
//   CTM    recording channel tbeg tdur word [confidence]
//   STM    recording channel speaker tbeg tend [<label,...>] transcript...
//   n-best utterance rank am_score lm_score word...
//   side   utterance<TAB>rank<TAB>log10_score
//   ARPA   \data\ header, \N-grams: sections, \end\ trailer
//
// Fields are separated by any run of ASCII whitespace.  Lines starting with
// ";;" are comments in CTM and STM.  Blank lines are skipped everywhere.
// Every other line either parses or raises asreval::Error with its line
// number; nothing is dropped silently.

#ifndef ASREVAL_CORPUS_IO_H_
#define ASREVAL_CORPUS_IO_H_

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "asreval/ngram_lm.h"

namespace asreval {

/// Transcript token marking a reference region excluded from scoring.
inline constexpr std::string_view kIgnoreSegmentToken =
    "IGNORE_TIME_SEGMENT_IN_SCORING";

struct CtmEntry {
  std::string recording_id;
  std::string channel;
  double tbeg = 0.0;
  double tdur = 0.0;
  std::string word;
  std::optional<double> confidence;  // absent is not the same as 0

  double midpoint() const { return tbeg + tdur / 2.0; }
  bool operator==(const CtmEntry &) const = default;
};

struct StmSegment {
  std::string recording_id;
  std::string channel;
  std::string speaker_id;
  double tbeg = 0.0;
  double tend = 0.0;
  std::vector<std::string> labels;  // verbatim, without the angle brackets
  std::vector<std::string> tokens;
  bool scorable = true;

  bool operator==(const StmSegment &) const = default;
};

struct NBestEntry {
  std::string utterance_id;
  int rank = 1;
  double am_score = 0.0;
  double lm_score = 0.0;
  std::map<std::string, double> extra_lm_scores;
  std::vector<std::string> words;

  bool operator==(const NBestEntry &) const = default;
};

/// Utterance id -> entries ordered by rank.
using NBestLists = std::map<std::string, std::vector<NBestEntry>>;

std::vector<CtmEntry> ParseCtm(std::istream &in);
void WriteCtm(std::ostream &out, std::span<const CtmEntry> entries);

std::vector<StmSegment> ParseStm(std::istream &in);
void WriteStm(std::ostream &out, std::span<const StmSegment> segments);

NBestLists ParseNBest(std::istream &in);
void WriteNBest(std::ostream &out, const NBestLists &lists);

/// Joins a side score file onto `lists` under `model_name`.  A key with no
/// matching (utterance, rank) raises Error(kJoin).
void AttachSideScores(NBestLists &lists, const std::string &model_name,
                      std::istream &side);
void WriteSideScores(std::ostream &out, const NBestLists &lists,
                     const std::string &model_name);

NGramModel ReadArpa(std::istream &in);
/// N-grams are written in lexicographic order; values in shortest
/// round-trip decimal form.
void WriteArpa(std::ostream &out, const NGramModel &model);

/// Stable id "<recording>_<channel>_<tbeg in centiseconds, 7 digits>".
std::string SegmentId(const StmSegment &segment);

}  // namespace asreval

#endif  // ASREVAL_CORPUS_IO_H_
