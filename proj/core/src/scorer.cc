// core/src/scorer.cc

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

#include "asreval/scorer.h"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <thread>

#include "json.hpp"

#include "asreval/error.h"
#include "asreval/strings.h"

namespace asreval {

// ----------------------------------------------------------------- WerCounts

namespace {

double Percent(std::int64_t count, std::int64_t n_ref) {
  if (n_ref <= 0)
    throw Error(ErrorKind::kReport, "WER is undefined with no reference words");
  return 100.0 * static_cast<double>(count) / static_cast<double>(n_ref);
}

}  // namespace

double WerCounts::Wer() const { return Percent(errors(), n_ref); }
double WerCounts::SubRate() const { return Percent(subs, n_ref); }
double WerCounts::DelRate() const { return Percent(dels, n_ref); }
double WerCounts::InsRate() const { return Percent(inss, n_ref); }

WerCounts &WerCounts::operator+=(const WerCounts &o) {
  n_ref += o.n_ref;
  matches += o.matches;
  subs += o.subs;
  dels += o.dels;
  inss += o.inss;
  return *this;
}

WerCounts WerCounts::FromEdits(const EditCounts &e) {
  WerCounts c;
  c.matches = e.matches;
  c.subs = e.subs;
  c.dels = e.dels;
  c.inss = e.inss;
  c.n_ref = e.matches + e.subs + e.dels;
  return c;
}

std::int64_t RateTenths(std::int64_t count, std::int64_t n_ref) {
  if (n_ref <= 0)
    throw Error(ErrorKind::kReport, "rate is undefined with no reference words");
  if (count < 0)
    throw Error(ErrorKind::kValue, "negative error count");
  // round(1000 * count / n_ref), ties away from zero.
  return (2000 * count + n_ref) / (2 * n_ref);
}

std::string DisplayRate(std::int64_t count, std::int64_t n_ref) {
  std::int64_t t = RateTenths(count, n_ref);
  return std::to_string(t / 10) + "." + std::to_string(t % 10);
}

void WerReport::Merge(const WerReport &other) {
  total += other.total;
  for (const auto &[k, c] : other.per_speaker) per_speaker[k] += c;
  for (const auto &[k, c] : other.per_show) per_show[k] += c;
  segments += other.segments;
}

// ------------------------------------------------------------ ConfusionTable

void ConfusionTable::Add(const AlignmentOp &op) {
  switch (op.kind) {
    case EditKind::kSubstitution:
      ++substitutions[{*op.ref_word, *op.hyp_word}];
      break;
    case EditKind::kDeletion:
      ++deletions[*op.ref_word];
      break;
    case EditKind::kInsertion:
      ++insertions[*op.hyp_word];
      break;
    default:
      break;
  }
}

void ConfusionTable::Merge(const ConfusionTable &o) {
  for (const auto &[k, c] : o.substitutions) substitutions[k] += c;
  for (const auto &[k, c] : o.deletions) deletions[k] += c;
  for (const auto &[k, c] : o.insertions) insertions[k] += c;
}

template <class Map>
static std::int64_t SumCounts(const Map &m) {
  std::int64_t total = 0;
  for (const auto &kv : m) total += kv.second;
  return total;
}

std::int64_t ConfusionTable::TotalSubstitutions() const {
  return SumCounts(substitutions);
}
std::int64_t ConfusionTable::TotalDeletions() const { return SumCounts(deletions); }
std::int64_t ConfusionTable::TotalInsertions() const {
  return SumCounts(insertions);
}

// ------------------------------------------------------------------- scoring

namespace {

void ScoreRange(std::span<const StmSegment> stm,
                std::span<const std::vector<std::string>> hyps,
                std::span<const std::size_t> indices,
                const ScoreOptions &options, ScoreResult &out) {
  for (std::size_t k : indices) {
    const StmSegment &seg = stm[k];
    std::vector<NormToken> ref = Normalize(seg.tokens, options.rules);
    std::vector<std::string> hyp = NormalizeWords(hyps[k], options.rules);
    Alignment a = Align(ref, hyp, options.costs);
    WerCounts c = WerCounts::FromEdits(a.Counts());
    out.report.total += c;
    out.report.per_speaker[seg.speaker_id] += c;
    out.report.per_show[seg.recording_id] += c;
    ++out.report.segments;
    for (const AlignmentOp &op : a.ops) out.confusions.Add(op);
  }
}

}  // namespace

ScoreResult ScoreSegments(std::span<const StmSegment> stm,
                          std::span<const std::vector<std::string>> hyps,
                          const ScoreOptions &options) {
  options.rules.Validate();
  options.costs.Validate();
  if (hyps.size() != stm.size())
    throw Error(ErrorKind::kArgument,
                "hypothesis list does not match the segment list");

  std::vector<std::size_t> scorable;
  for (std::size_t k = 0; k < stm.size(); ++k)
    if (stm[k].scorable) scorable.push_back(k);

  const std::size_t jobs = std::clamp<std::size_t>(
      options.jobs, 1, std::max<std::size_t>(1, scorable.size()));
  std::vector<ScoreResult> parts(jobs);
  std::span<const std::size_t> all(scorable);
  auto chunk = [&](std::size_t w) {
    std::size_t lo = all.size() * w / jobs, hi = all.size() * (w + 1) / jobs;
    return all.subspan(lo, hi - lo);
  };

  if (jobs == 1) {
    ScoreRange(stm, hyps, all, options, parts[0]);
  } else {
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        try {
          ScoreRange(stm, hyps, chunk(w), options, parts[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (std::thread &t : workers) t.join();
    for (const std::exception_ptr &e : errors)
      if (e) std::rethrow_exception(e);
  }

  ScoreResult result = std::move(parts[0]);
  for (std::size_t w = 1; w < jobs; ++w) {
    result.report.Merge(parts[w].report);
    result.confusions.Merge(parts[w].confusions);
  }
  return result;
}

ScoreResult Score(std::span<const StmSegment> stm, std::span<const CtmEntry> ctm,
                  const ScoreOptions &options) {
  SegmentAssignment assigned = MapCtmToSegments(ctm, stm);
  std::vector<std::vector<std::string>> hyps;
  hyps.reserve(stm.size());
  for (const auto &words : assigned.words) hyps.push_back(Words(words));
  ScoreResult result = ScoreSegments(stm, hyps, options);
  if (result.report.total.n_ref == 0)
    throw Error(ErrorKind::kReport, "no scored reference words");
  result.unassigned = std::move(assigned.unassigned);
  return result;
}

// ---------------------------------------------------------------- top errors

namespace {

template <class Key>
std::vector<std::pair<std::int64_t, Key>> Ranked(
    const std::map<Key, std::int64_t> &m, std::size_t k) {
  std::vector<std::pair<std::int64_t, Key>> v;
  v.reserve(m.size());
  for (const auto &[key, count] : m) v.emplace_back(count, key);
  std::stable_sort(v.begin(), v.end(), [](const auto &a, const auto &b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (v.size() > k) v.resize(k);
  return v;
}

}  // namespace

TopErrors RankTopErrors(const ConfusionTable &table, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::kArgument, "top-k needs k >= 1");
  TopErrors top;
  for (const auto &[count, pair] : Ranked(table.substitutions, k))
    top.substitutions.push_back(std::to_string(count) + ": " + pair.first +
                                " / " + pair.second);
  for (const auto &[count, word] : Ranked(table.deletions, k))
    top.deletions.push_back(std::to_string(count) + ": " + word);
  for (const auto &[count, word] : Ranked(table.insertions, k))
    top.insertions.push_back(std::to_string(count) + ": " + word);
  return top;
}

// ---------------------------------------------------------------- comparison

ComparisonTable CompareSystems(std::span<const WerReport> reports) {
  if (reports.size() < 2)
    throw Error(ErrorKind::kArgument, "comparison needs at least two reports");
  ComparisonTable table;
  auto index_of = [](std::vector<std::string> &names, const std::string &n) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
    names.push_back(n);
    return names.size() - 1;
  };
  std::vector<std::pair<std::size_t, std::size_t>> where;
  for (const WerReport &r : reports)
    where.emplace_back(index_of(table.systems, r.system),
                       index_of(table.test_sets, r.test_set));
  table.cells.assign(table.systems.size(),
                     std::vector<ComparisonCell>(table.test_sets.size()));

  for (std::size_t col = 0; col < table.test_sets.size(); ++col) {
    std::optional<std::int64_t> n_ref, best_errors;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (where[i].second != col) continue;
      const WerCounts &c = reports[i].total;
      if (n_ref && *n_ref != c.n_ref)
        throw Error(ErrorKind::kIncomparable,
                    "reports on '" + table.test_sets[col] +
                        "' score different references (" +
                        std::to_string(*n_ref) + " vs " +
                        std::to_string(c.n_ref) + " words)");
      n_ref = c.n_ref;
      ComparisonCell &cell = table.cells[where[i].first][col];
      if (cell.wer_tenths)
        throw Error(ErrorKind::kDuplicate,
                    "two reports for system '" + reports[i].system +
                        "' on '" + table.test_sets[col] + "'");
      cell.wer_tenths = RateTenths(c.errors(), c.n_ref);
      if (!best_errors || c.errors() < *best_errors) best_errors = c.errors();
    }
    for (std::size_t i = 0; i < reports.size(); ++i)
      if (where[i].second == col && reports[i].total.errors() == *best_errors)
        table.cells[where[i].first][col].best = true;
  }
  return table;
}

// ---------------------------------------------------------------- hesitation

HesitationAblation RunHesitationAblation(std::span<const StmSegment> stm,
                                         std::span<const CtmEntry> ctm,
                                         const ScoreOptions &options) {
  if (options.rules.drop_hesitations)
    throw Error(ErrorKind::kArgument,
                "hesitation ablation starts from rules that keep hesitations");
  HesitationAblation out;
  out.baseline = Score(stm, ctm, options).report;
  ScoreOptions dropped = options;
  dropped.rules.drop_hesitations = true;
  dropped.rules.optional_hesitation = false;
  out.dropped = Score(stm, ctm, dropped).report;
  out.delta = out.dropped.total.Wer() - out.baseline.total.Wer();
  return out;
}

// ------------------------------------------------------------------- writers

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "text") return ReportFormat::kText;
  if (name == "tsv") return ReportFormat::kTsv;
  if (name == "json") return ReportFormat::kJson;
  throw Error(ErrorKind::kArgument,
              "unknown format '" + std::string(name) + "' (text, tsv, json)");
}

namespace {

std::string RateOrNa(std::int64_t count, std::int64_t n_ref) {
  return n_ref > 0 ? DisplayRate(count, n_ref) : "n/a";
}

nlohmann::ordered_json CountsJson(const WerCounts &c) {
  nlohmann::ordered_json j;
  j["n_ref"] = c.n_ref;
  j["matches"] = c.matches;
  j["subs"] = c.subs;
  j["dels"] = c.dels;
  j["inss"] = c.inss;
  j["errors"] = c.errors();
  if (c.n_ref > 0) {
    j["sub_rate"] = DisplayRate(c.subs, c.n_ref);
    j["del_rate"] = DisplayRate(c.dels, c.n_ref);
    j["ins_rate"] = DisplayRate(c.inss, c.n_ref);
    j["wer"] = DisplayRate(c.errors(), c.n_ref);
  }
  return j;
}

WerCounts CountsFromJson(const nlohmann::json &j) {
  WerCounts c;
  c.n_ref = j.at("n_ref").get<std::int64_t>();
  c.matches = j.at("matches").get<std::int64_t>();
  c.subs = j.at("subs").get<std::int64_t>();
  c.dels = j.at("dels").get<std::int64_t>();
  c.inss = j.at("inss").get<std::int64_t>();
  return c;
}

void TsvRow(std::ostream &out, std::string_view scope, std::string_view key,
            const WerCounts &c) {
  out << scope << '\t' << key << '\t' << c.n_ref << '\t' << c.matches << '\t'
      << c.subs << '\t' << c.dels << '\t' << c.inss << '\t'
      << RateOrNa(c.subs, c.n_ref) << '\t' << RateOrNa(c.dels, c.n_ref) << '\t'
      << RateOrNa(c.inss, c.n_ref) << '\t' << RateOrNa(c.errors(), c.n_ref)
      << '\n';
}

void TextBreakdown(std::ostream &out, const char *title,
                   const std::map<std::string, WerCounts> &rows) {
  if (rows.empty()) return;
  std::size_t width = 8;
  for (const auto &[k, c] : rows) width = std::max(width, k.size());
  out << '\n' << title << '\n';
  out << std::left << std::setw(static_cast<int>(width)) << "" << std::right
      << std::setw(8) << "#ref" << std::setw(7) << "Sub" << std::setw(7)
      << "Del" << std::setw(7) << "Ins" << std::setw(7) << "All" << '\n';
  for (const auto &[k, c] : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << k << std::right
        << std::setw(8) << c.n_ref << std::setw(7) << RateOrNa(c.subs, c.n_ref)
        << std::setw(7) << RateOrNa(c.dels, c.n_ref) << std::setw(7)
        << RateOrNa(c.inss, c.n_ref) << std::setw(7)
        << RateOrNa(c.errors(), c.n_ref) << '\n';
  }
}

}  // namespace

void WriteReport(std::ostream &out, const WerReport &r, ReportFormat format) {
  const WerCounts &c = r.total;
  switch (format) {
    case ReportFormat::kText: {
      if (!r.system.empty()) out << "System:     " << r.system << '\n';
      if (!r.test_set.empty()) out << "Test set:   " << r.test_set << '\n';
      out << "Segments:   " << r.segments << '\n';
      out << "Ref words:  " << c.n_ref << '\n';
      out << "Correct:    " << c.matches << '\n';
      out << '\n' << std::left << std::setw(6) << "" << std::right
          << std::setw(7) << "%" << std::setw(9) << "count" << '\n';
      auto line = [&](const char *name, std::int64_t n) {
        out << std::left << std::setw(6) << name << std::right << std::setw(7)
            << RateOrNa(n, c.n_ref) << std::setw(9) << n << '\n';
      };
      line("Sub", c.subs);
      line("Del", c.dels);
      line("Ins", c.inss);
      line("All", c.errors());
      TextBreakdown(out, "Per speaker:", r.per_speaker);
      TextBreakdown(out, "Per show:", r.per_show);
      break;
    }
    case ReportFormat::kTsv: {
      out << "scope\tkey\tn_ref\tmatches\tsubs\tdels\tinss\tsub_rate\t"
             "del_rate\tins_rate\twer\n";
      TsvRow(out, "total", r.system.empty() ? "-" : r.system, c);
      for (const auto &[k, v] : r.per_speaker) TsvRow(out, "speaker", k, v);
      for (const auto &[k, v] : r.per_show) TsvRow(out, "show", k, v);
      break;
    }
    case ReportFormat::kJson: {
      nlohmann::ordered_json j;
      j["system"] = r.system;
      j["test_set"] = r.test_set;
      j["segments"] = r.segments;
      j["total"] = CountsJson(c);
      j["per_speaker"] = nlohmann::ordered_json::object();
      for (const auto &[k, v] : r.per_speaker) j["per_speaker"][k] = CountsJson(v);
      j["per_show"] = nlohmann::ordered_json::object();
      for (const auto &[k, v] : r.per_show) j["per_show"][k] = CountsJson(v);
      out << j.dump(2) << '\n';
      break;
    }
  }
}

WerReport ReadJsonReport(std::istream &in) {
  nlohmann::json j;
  try {
    in >> j;
    WerReport r;
    r.system = j.value("system", "");
    r.test_set = j.value("test_set", "");
    r.segments = j.value("segments", std::int64_t{0});
    r.total = CountsFromJson(j.at("total"));
    if (j.contains("per_speaker"))
      for (const auto &[k, v] : j["per_speaker"].items())
        r.per_speaker[k] = CountsFromJson(v);
    if (j.contains("per_show"))
      for (const auto &[k, v] : j["per_show"].items())
        r.per_show[k] = CountsFromJson(v);
    return r;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kParse, std::string("bad JSON report: ") + e.what());
  }
}

void WriteConfusions(std::ostream &out, const ConfusionTable &table) {
  for (const auto &[pair, count] : table.substitutions)
    out << count << '\t' << pair.first << '\t' << pair.second << '\n';
  for (const auto &[word, count] : table.deletions)
    out << count << '\t' << word << '\t' << '\n';
  for (const auto &[word, count] : table.insertions)
    out << count << '\t' << '\t' << word << '\n';
}

void WriteComparison(std::ostream &out, const ComparisonTable &table,
                     ReportFormat format) {
  auto cell_text = [](const ComparisonCell &cell) -> std::string {
    if (!cell.wer_tenths) return "-";
    return std::to_string(*cell.wer_tenths / 10) + "." +
           std::to_string(*cell.wer_tenths % 10);
  };
  switch (format) {
    case ReportFormat::kText: {
      std::size_t width = 6;
      for (const std::string &s : table.systems) width = std::max(width, s.size());
      out << std::left << std::setw(static_cast<int>(width)) << "" << std::right;
      for (const std::string &t : table.test_sets)
        out << std::setw(static_cast<int>(std::max<std::size_t>(t.size(), 6) + 2))
            << t;
      out << '\n';
      for (std::size_t r = 0; r < table.systems.size(); ++r) {
        out << std::left << std::setw(static_cast<int>(width))
            << table.systems[r] << std::right;
        for (std::size_t c = 0; c < table.test_sets.size(); ++c) {
          const ComparisonCell &cell = table.cells[r][c];
          out << std::setw(static_cast<int>(
                     std::max<std::size_t>(table.test_sets[c].size(), 6) + 2))
              << ((cell.best ? "*" : "") + cell_text(cell));
        }
        out << '\n';
      }
      out << "(* lowest WER in column)\n";
      break;
    }
    case ReportFormat::kTsv: {
      out << "system";
      for (const std::string &t : table.test_sets) out << '\t' << t << "\tbest";
      out << '\n';
      for (std::size_t r = 0; r < table.systems.size(); ++r) {
        out << table.systems[r];
        for (std::size_t c = 0; c < table.test_sets.size(); ++c)
          out << '\t' << cell_text(table.cells[r][c]) << '\t'
              << (table.cells[r][c].best ? 1 : 0);
        out << '\n';
      }
      break;
    }
    case ReportFormat::kJson: {
      nlohmann::ordered_json j;
      j["test_sets"] = table.test_sets;
      j["rows"] = nlohmann::ordered_json::array();
      for (std::size_t r = 0; r < table.systems.size(); ++r) {
        nlohmann::ordered_json row;
        row["system"] = table.systems[r];
        for (std::size_t c = 0; c < table.test_sets.size(); ++c) {
          const ComparisonCell &cell = table.cells[r][c];
          nlohmann::ordered_json v;
          v["wer"] = cell_text(cell);
          v["best"] = cell.best;
          row["results"][table.test_sets[c]] = v;
        }
        j["rows"].push_back(row);
      }
      out << j.dump(2) << '\n';
      break;
    }
  }
}

}  // namespace asreval
