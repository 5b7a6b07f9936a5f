// core/src/corpus_io.cc

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

#include "asreval/corpus_io.h"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <set>
#include <utility>

#include "asreval/error.h"
#include "asreval/strings.h"

namespace asreval {

namespace {

bool IsBlank(std::string_view line) {
  for (char c : line)
    if (!IsAsciiSpace(c)) return false;
  return true;
}

bool IsComment(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && IsAsciiSpace(line[i])) ++i;
  return line.substr(i).starts_with(";;");
}

double RequireDouble(std::string_view field, const char *what,
                     std::size_t line_no) {
  std::optional<double> v = ParseDouble(field);
  if (!v)
    throw Error(ErrorKind::kParse,
                std::string(what) + " '" + std::string(field) +
                    "' is not a number",
                line_no);
  return *v;
}

// Reads lines, counting them, and hands each non-blank one to `fn`.
template <class Fn>
void ForEachLine(std::istream &in, Fn &&fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    fn(std::string_view(line), line_no);
  }
  if (in.bad()) throw Error(ErrorKind::kIo, "read failure");
}

}  // namespace

// ----------------------------------------------------------------------- CTM

std::vector<CtmEntry> ParseCtm(std::istream &in) {
  std::vector<CtmEntry> entries;
  std::map<std::pair<std::string, std::string>, double> last_tbeg;
  ForEachLine(in, [&](std::string_view line, std::size_t line_no) {
    if (IsComment(line)) return;
    std::vector<std::string_view> f = SplitWhitespace(line);
    if (f.size() != 5 && f.size() != 6)
      throw Error(ErrorKind::kParse,
                  "CTM line needs 5 or 6 fields, found " +
                      std::to_string(f.size()),
                  line_no);
    CtmEntry e;
    e.recording_id = f[0];
    e.channel = f[1];
    e.tbeg = RequireDouble(f[2], "begin time", line_no);
    e.tdur = RequireDouble(f[3], "duration", line_no);
    e.word = f[4];
    if (e.tbeg < 0.0 || e.tdur < 0.0)
      throw Error(ErrorKind::kRange, "negative time in CTM", line_no);
    if (f.size() == 6) {
      double conf = RequireDouble(f[5], "confidence", line_no);
      if (conf < 0.0 || conf > 1.0)
        throw Error(ErrorKind::kRange,
                    "confidence " + std::string(f[5]) + " outside [0,1]",
                    line_no);
      e.confidence = conf;
    }
    auto key = std::make_pair(e.recording_id, e.channel);
    auto it = last_tbeg.find(key);
    if (it != last_tbeg.end() && e.tbeg < it->second)
      throw Error(ErrorKind::kOrdering,
                  "stream " + e.recording_id + " channel " + e.channel +
                      " goes back in time (" + std::string(f[2]) + " after " +
                      FormatDouble(it->second) + ")",
                  line_no);
    last_tbeg[key] = e.tbeg;
    entries.push_back(std::move(e));
  });
  return entries;
}

void WriteCtm(std::ostream &out, std::span<const CtmEntry> entries) {
  for (const CtmEntry &e : entries) {
    out << e.recording_id << ' ' << e.channel << ' ' << FormatDouble(e.tbeg)
        << ' ' << FormatDouble(e.tdur) << ' ' << e.word;
    if (e.confidence) out << ' ' << FormatDouble(*e.confidence);
    out << '\n';
  }
}

// ----------------------------------------------------------------------- STM

std::vector<StmSegment> ParseStm(std::istream &in) {
  std::vector<StmSegment> segments;
  ForEachLine(in, [&](std::string_view line, std::size_t line_no) {
    if (IsComment(line)) return;
    std::vector<std::string_view> f = SplitWhitespace(line);
    if (f.size() < 5)
      throw Error(ErrorKind::kParse,
                  "STM line needs at least 5 fields, found " +
                      std::to_string(f.size()),
                  line_no);
    StmSegment s;
    s.recording_id = f[0];
    s.channel = f[1];
    s.speaker_id = f[2];
    s.tbeg = RequireDouble(f[3], "begin time", line_no);
    s.tend = RequireDouble(f[4], "end time", line_no);
    if (s.tbeg < 0.0)
      throw Error(ErrorKind::kRange, "negative begin time in STM", line_no);
    if (!(s.tbeg < s.tend))
      throw Error(ErrorKind::kRange,
                  "segment begins at " + std::string(f[3]) +
                      " but ends at " + std::string(f[4]),
                  line_no);
    std::size_t next = 5;
    if (next < f.size() && f[next].size() >= 2 && f[next].front() == '<' &&
        f[next].back() == '>') {
      std::string_view inner = f[next].substr(1, f[next].size() - 2);
      if (!inner.empty())
        for (std::string_view label : SplitOn(inner, ','))
          s.labels.emplace_back(label);
      ++next;
    }
    if (f.size() == next + 1 && f[next] == kIgnoreSegmentToken) {
      s.scorable = false;
    } else {
      for (; next < f.size(); ++next) s.tokens.emplace_back(f[next]);
    }
    segments.push_back(std::move(s));
  });
  return segments;
}

void WriteStm(std::ostream &out, std::span<const StmSegment> segments) {
  for (const StmSegment &s : segments) {
    out << s.recording_id << ' ' << s.channel << ' ' << s.speaker_id << ' '
        << FormatDouble(s.tbeg) << ' ' << FormatDouble(s.tend);
    if (!s.labels.empty()) out << " <" << Join(s.labels, ",") << '>';
    if (!s.scorable) {
      out << ' ' << kIgnoreSegmentToken;
    } else {
      for (const std::string &t : s.tokens) out << ' ' << t;
    }
    out << '\n';
  }
}

std::string SegmentId(const StmSegment &segment) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%07lld",
                static_cast<long long>(std::llround(segment.tbeg * 100.0)));
  return segment.recording_id + "_" + segment.channel + "_" + buf;
}

// -------------------------------------------------------------------- n-best

NBestLists ParseNBest(std::istream &in) {
  NBestLists lists;
  std::map<std::string, std::set<int>> seen;
  ForEachLine(in, [&](std::string_view line, std::size_t line_no) {
    std::vector<std::string_view> f = SplitWhitespace(line);
    if (f.size() < 4)
      throw Error(ErrorKind::kParse,
                  "n-best line needs utterance, rank, am and lm scores",
                  line_no);
    NBestEntry e;
    e.utterance_id = f[0];
    std::optional<std::int64_t> rank = ParseInt(f[1]);
    if (!rank || *rank < 1 || *rank > 1000000000)
      throw Error(ErrorKind::kParse,
                  "rank '" + std::string(f[1]) + "' is not a positive integer",
                  line_no);
    e.rank = static_cast<int>(*rank);
    e.am_score = RequireDouble(f[2], "am score", line_no);
    e.lm_score = RequireDouble(f[3], "lm score", line_no);
    for (std::size_t i = 4; i < f.size(); ++i) e.words.emplace_back(f[i]);
    if (!seen[e.utterance_id].insert(e.rank).second)
      throw Error(ErrorKind::kDuplicate,
                  "utterance " + e.utterance_id + " repeats rank " +
                      std::to_string(e.rank),
                  line_no);
    lists[e.utterance_id].push_back(std::move(e));
  });
  for (auto &[utt, entries] : lists) {
    std::sort(entries.begin(), entries.end(),
              [](const NBestEntry &a, const NBestEntry &b) {
                return a.rank < b.rank;
              });
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (entries[i].rank != static_cast<int>(i + 1))
        throw Error(ErrorKind::kContiguity,
                    "utterance " + utt + " is missing rank " +
                        std::to_string(i + 1));
  }
  return lists;
}

void WriteNBest(std::ostream &out, const NBestLists &lists) {
  for (const auto &[utt, entries] : lists) {
    for (const NBestEntry &e : entries) {
      out << e.utterance_id << ' ' << e.rank << ' ' << FormatDouble(e.am_score)
          << ' ' << FormatDouble(e.lm_score);
      for (const std::string &w : e.words) out << ' ' << w;
      out << '\n';
    }
  }
}

void AttachSideScores(NBestLists &lists, const std::string &model_name,
                      std::istream &side) {
  std::set<std::pair<std::string, int>> seen;
  ForEachLine(side, [&](std::string_view line, std::size_t line_no) {
    std::vector<std::string_view> f = SplitWhitespace(line);
    if (f.size() != 3)
      throw Error(ErrorKind::kParse,
                  "side score line needs utterance, rank and score", line_no);
    std::string utt(f[0]);
    std::optional<std::int64_t> rank = ParseInt(f[1]);
    if (!rank || *rank < 1)
      throw Error(ErrorKind::kParse, "bad rank '" + std::string(f[1]) + "'",
                  line_no);
    double score = RequireDouble(f[2], "score", line_no);
    if (!seen.emplace(utt, static_cast<int>(*rank)).second)
      throw Error(ErrorKind::kDuplicate,
                  "side file '" + model_name + "' repeats (" + utt + ", " +
                      std::to_string(*rank) + ")",
                  line_no);
    auto it = lists.find(utt);
    if (it == lists.end() || *rank > static_cast<std::int64_t>(it->second.size()))
      throw Error(ErrorKind::kJoin,
                  "side file '" + model_name + "' scores (" + utt + ", " +
                      std::to_string(*rank) + ") which is not in the n-best",
                  line_no);
    it->second[*rank - 1].extra_lm_scores[model_name] = score;
  });
}

void WriteSideScores(std::ostream &out, const NBestLists &lists,
                     const std::string &model_name) {
  for (const auto &[utt, entries] : lists)
    for (const NBestEntry &e : entries) {
      auto it = e.extra_lm_scores.find(model_name);
      if (it == e.extra_lm_scores.end()) continue;
      out << utt << '\t' << e.rank << '\t' << FormatDouble(it->second) << '\n';
    }
}

// ---------------------------------------------------------------------- ARPA

NGramModel ReadArpa(std::istream &in) {
  std::string raw;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view &line) {
    while (std::getline(in, raw)) {
      ++line_no;
      if (!IsBlank(raw)) {
        line = raw;
        while (!line.empty() && IsAsciiSpace(line.back())) line.remove_suffix(1);
        while (!line.empty() && IsAsciiSpace(line.front())) line.remove_prefix(1);
        return true;
      }
    }
    return false;
  };

  std::string_view line;
  bool found = false;
  while (next_line(line))
    if (line == "\\data\\") {
      found = true;
      break;
    }
  if (!found) throw Error(ErrorKind::kFormat, "no \\data\\ section");

  std::vector<std::size_t> declared;
  bool have_line = next_line(line);
  while (have_line && line.starts_with("ngram ")) {
    std::string_view field = line.substr(6);
    std::size_t eq = field.find('=');
    std::optional<std::int64_t> n, count;
    if (eq != std::string_view::npos) {
      n = ParseInt(field.substr(0, eq));
      count = ParseInt(field.substr(eq + 1));
    }
    if (!n || !count || *count < 0)
      throw Error(ErrorKind::kFormat, "bad count line", line_no);
    if (*n != static_cast<std::int64_t>(declared.size()) + 1)
      throw Error(ErrorKind::kFormat, "n-gram counts out of order", line_no);
    declared.push_back(static_cast<std::size_t>(*count));
    have_line = next_line(line);
  }
  if (declared.empty() || declared.size() > kMaxNGramOrder)
    throw Error(ErrorKind::kFormat,
                "header declares " + std::to_string(declared.size()) +
                    " orders",
                line_no);

  const int order = static_cast<int>(declared.size());
  NGramModel model(order, "arpa");
  std::vector<bool> section_seen(order, false);
  bool ended = false;
  while (have_line) {
    if (line == "\\end\\") {
      ended = true;
      break;
    }
    int n = 0;
    if (line.size() >= 9 && line.front() == '\\' && line.ends_with("-grams:")) {
      std::optional<std::int64_t> parsed =
          ParseInt(line.substr(1, line.size() - 1 - 7));
      if (parsed) n = static_cast<int>(*parsed);
    }
    if (n < 1 || n > order)
      throw Error(ErrorKind::kFormat,
                  "expected an n-gram section header, got '" +
                      std::string(line) + "'",
                  line_no);
    if (section_seen[n - 1])
      throw Error(ErrorKind::kFormat, "repeated section", line_no);
    section_seen[n - 1] = true;
    std::size_t emitted = 0;
    while ((have_line = next_line(line)) && line.front() != '\\') {
      std::vector<std::string_view> f = SplitWhitespace(line);
      if (f.size() != static_cast<std::size_t>(n) + 1 &&
          f.size() != static_cast<std::size_t>(n) + 2)
        throw Error(ErrorKind::kFormat,
                    "a " + std::to_string(n) + "-gram line needs " +
                        std::to_string(n + 1) + " or " +
                        std::to_string(n + 2) + " fields",
                    line_no);
      NGramEntry entry;
      entry.log10_prob = RequireDouble(f[0], "log10 probability", line_no);
      if (entry.log10_prob > 0.0)
        throw Error(ErrorKind::kValue,
                    "log10 probability " + std::string(f[0]) + " is above 0",
                    line_no);
      if (f.size() == static_cast<std::size_t>(n) + 2)
        entry.log10_backoff = RequireDouble(f.back(), "backoff", line_no);
      NGram ngram(f.begin() + 1, f.begin() + 1 + n);
      if (model.Find(ngram))
        throw Error(ErrorKind::kDuplicate, "n-gram listed twice", line_no);
      model.Set(std::move(ngram), entry);
      ++emitted;
    }
    if (emitted != declared[n - 1])
      throw Error(ErrorKind::kFormat,
                  "header declares ngram " + std::to_string(n) + "=" +
                      std::to_string(declared[n - 1]) + " but the section has " +
                      std::to_string(emitted) + " entries");
  }
  if (!ended) throw Error(ErrorKind::kFormat, "missing \\end\\ marker");
  for (int n = 1; n <= order; ++n)
    if (!section_seen[n - 1] && declared[n - 1] != 0)
      throw Error(ErrorKind::kFormat,
                  "missing \\" + std::to_string(n) + "-grams: section");
  return model;
}

void WriteArpa(std::ostream &out, const NGramModel &model) {
  out << "\\data\\\n";
  for (int n = 1; n <= model.order(); ++n)
    out << "ngram " << n << '=' << model.size(n) << '\n';
  for (int n = 1; n <= model.order(); ++n) {
    out << "\n\\" << n << "-grams:\n";
    for (const auto &[ngram, entry] : model.table(n)) {
      out << FormatDouble(entry.log10_prob) << '\t' << Join(ngram);
      if (entry.log10_backoff)
        out << '\t' << FormatDouble(*entry.log10_backoff);
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

}  // namespace asreval
