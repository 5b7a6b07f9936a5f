// asreval/scorer.h

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

// WER reports, confusion tables and system comparisons.

#ifndef ASREVAL_SCORER_H_
#define ASREVAL_SCORER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "asreval/aligner.h"
#include "asreval/corpus_io.h"
#include "asreval/textnorm.h"

namespace asreval {

/// Error counts over some set of scored reference words.  Rates are exact
/// ratios; Displayed*() gives the one-decimal form used in reports.
struct WerCounts {
  std::int64_t n_ref = 0;
  std::int64_t matches = 0;
  std::int64_t subs = 0;
  std::int64_t dels = 0;
  std::int64_t inss = 0;

  std::int64_t errors() const { return subs + dels + inss; }

  /// Percentages; throw Error(kReport) when n_ref is 0.
  double Wer() const;
  double SubRate() const;
  double DelRate() const;
  double InsRate() const;

  WerCounts &operator+=(const WerCounts &other);
  bool operator==(const WerCounts &) const = default;

  static WerCounts FromEdits(const EditCounts &edits);
};

/// 100*count/n_ref rounded half away from zero to tenths, computed in
/// integers so ties never depend on binary floating point.  Returns tenths
/// of a percent.
std::int64_t RateTenths(std::int64_t count, std::int64_t n_ref);
/// "6.5" style rendering of RateTenths.
std::string DisplayRate(std::int64_t count, std::int64_t n_ref);

struct WerReport {
  std::string system;    // free-form labels carried into JSON output
  std::string test_set;
  WerCounts total;
  std::map<std::string, WerCounts> per_speaker;
  std::map<std::string, WerCounts> per_show;
  std::int64_t segments = 0;

  /// Adds counts from a report over a disjoint set of segments.
  void Merge(const WerReport &other);
};

struct ConfusionTable {
  std::map<std::pair<std::string, std::string>, std::int64_t> substitutions;
  std::map<std::string, std::int64_t> deletions;
  std::map<std::string, std::int64_t> insertions;

  void Add(const AlignmentOp &op);
  void Merge(const ConfusionTable &other);

  std::int64_t TotalSubstitutions() const;
  std::int64_t TotalDeletions() const;
  std::int64_t TotalInsertions() const;

  bool operator==(const ConfusionTable &) const = default;
};

struct ScoreOptions {
  NormRules rules;
  AlignCosts costs = AlignCosts::Nist();
  unsigned jobs = 1;  // worker threads; results do not depend on it
};

struct ScoreResult {
  WerReport report;
  ConfusionTable confusions;
  std::vector<CtmEntry> unassigned;
};

/// Normalizes both sides, aligns each scorable segment and accumulates.
/// Throws Error(kReport) when no reference word is scored.
ScoreResult Score(std::span<const StmSegment> stm, std::span<const CtmEntry> ctm,
                  const ScoreOptions &options = {});

/// Scores already assigned segments: `hyps[k]` is the hypothesis for
/// `stm[k]`.  Non-scorable segments are skipped.  Does not check n_ref.
ScoreResult ScoreSegments(std::span<const StmSegment> stm,
                          std::span<const std::vector<std::string>> hyps,
                          const ScoreOptions &options = {});

struct TopErrors {
  std::vector<std::string> substitutions;  // "count: ref / hyp"
  std::vector<std::string> deletions;      // "count: word"
  std::vector<std::string> insertions;
};

/// The k most frequent entries of each kind, by count descending and then
/// lexicographically.
TopErrors RankTopErrors(const ConfusionTable &table, std::size_t k);

struct ComparisonCell {
  std::optional<std::int64_t> wer_tenths;
  bool best = false;
};

struct ComparisonTable {
  std::vector<std::string> systems;    // rows, first-seen order
  std::vector<std::string> test_sets;  // columns, first-seen order
  std::vector<std::vector<ComparisonCell>> cells;  // [row][column]
};

/// Lays reports out as systems x test sets and flags the lowest WER in
/// every column (ties flag all).  Needs at least two reports; reports on
/// one test set must agree on n_ref or Error(kIncomparable) is raised.
ComparisonTable CompareSystems(std::span<const WerReport> reports);

struct HesitationAblation {
  WerReport baseline;
  WerReport dropped;
  double delta = 0.0;  // dropped WER minus baseline WER, absolute points
};

/// Scores twice, the second time with hesitations removed on both sides.
/// `options.rules.drop_hesitations` must be false on entry.
HesitationAblation RunHesitationAblation(std::span<const StmSegment> stm,
                                         std::span<const CtmEntry> ctm,
                                         const ScoreOptions &options = {});

enum class ReportFormat { kText, kTsv, kJson };

/// Throws Error(kArgument) for anything but text, tsv or json.
ReportFormat ParseReportFormat(std::string_view name);

void WriteReport(std::ostream &out, const WerReport &report,
                 ReportFormat format);
/// Inverse of the JSON form of WriteReport.
WerReport ReadJsonReport(std::istream &in);

/// "count<TAB>ref<TAB>hyp" lines; deletions leave hyp empty and
/// insertions leave ref empty.
void WriteConfusions(std::ostream &out, const ConfusionTable &table);

void WriteComparison(std::ostream &out, const ComparisonTable &table,
                     ReportFormat format);

}  // namespace asreval

#endif  // ASREVAL_SCORER_H_
