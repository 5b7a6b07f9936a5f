// tests/scorer_test.cc

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

#include <random>
#include <sstream>

#include "asreval/error.h"
#include "asreval/scorer.h"
#include "asreval/strings.h"
#include "asreval/synth.h"
#include "doctest.h"

namespace asreval {

namespace {

StmSegment Seg(const std::string &rec, const std::string &spk, double b,
               double e, std::vector<std::string> tokens) {
  StmSegment s;
  s.recording_id = rec;
  s.channel = "1";
  s.speaker_id = spk;
  s.tbeg = b;
  s.tend = e;
  s.tokens = std::move(tokens);
  return s;
}

std::vector<CtmEntry> Spread(const std::string &rec, double b, double e,
                             const std::vector<std::string> &words) {
  std::vector<CtmEntry> out;
  const double slot = (e - b) / static_cast<double>(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    CtmEntry w;
    w.recording_id = rec;
    w.channel = "1";
    w.tbeg = b + slot * static_cast<double>(i);
    w.tdur = slot * 0.5;
    w.word = words[i];
    out.push_back(w);
  }
  return out;
}

// Exact decimal rendering of round-half-away(1000 * c / n) / 10, done with
// long division on strings of digits so it shares nothing with RateTenths.
std::string DisplayOracle(std::int64_t c, std::int64_t n) {
  std::int64_t scaled = c * 1000;
  std::int64_t q = scaled / n, r = scaled % n;
  if (2 * r >= n) ++q;
  std::string digits = std::to_string(q);
  if (digits.size() < 2) digits.insert(0, 2 - digits.size(), '0');
  return digits.substr(0, digits.size() - 1) + "." + digits.substr(digits.size() - 1);
}

}  // namespace

TEST_SUITE("scorer") {

TEST_CASE("rates and displayed rates") {
  WerCounts c;
  c.n_ref = 1000;
  c.subs = 32;
  c.dels = 22;
  c.inss = 11;
  CHECK(c.Wer() == doctest::Approx(6.5));
  CHECK(DisplayRate(c.subs, c.n_ref) == "3.2");
  CHECK(DisplayRate(c.dels, c.n_ref) == "2.2");
  CHECK(DisplayRate(c.inss, c.n_ref) == "1.1");
  CHECK(DisplayRate(c.errors(), c.n_ref) == "6.5");
  // Half-way cases round away from zero.
  CHECK(DisplayRate(1, 2000) == "0.1");
  CHECK(DisplayRate(1, 4000) == "0.0");
  CHECK(DisplayRate(3, 8) == "37.5");
  CHECK(DisplayRate(1, 3) == "33.3");
  CHECK(DisplayRate(2, 3) == "66.7");
  CHECK(DisplayRate(0, 5) == "0.0");
  CHECK(DisplayRate(250, 100) == "250.0");
  CHECK_THROWS_AS(WerCounts{}.Wer(), Error);
  CHECK_THROWS_AS(RateTenths(1, 0), Error);
}

TEST_CASE("displayed rates match an exact decimal oracle") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 5000; ++i) {
    std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 100000);
    std::int64_t c = static_cast<std::int64_t>(rng() % (2 * n));
    CHECK(DisplayRate(c, n) == DisplayOracle(c, n));
  }
}

TEST_CASE("displayed components sum to within 0.1 of displayed WER") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 5000; ++i) {
    std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 50000);
    std::int64_t s = rng() % (n + 1), d = rng() % (n + 1), ins = rng() % (n + 1);
    std::int64_t sum = RateTenths(s, n) + RateTenths(d, n) + RateTenths(ins, n);
    std::int64_t wer = RateTenths(s + d + ins, n);
    CHECK(std::llabs(sum - wer) <= 1);
  }
}

TEST_CASE("scoring a small corpus") {
  std::vector<StmSegment> stm{
      Seg("a", "s1", 0, 3, {"The", "cat", "sat."}),
      Seg("a", "s2", 3, 6, {"on", "the", "mat"}),
      Seg("b", "s1", 0, 2, {"hello"})};
  std::vector<CtmEntry> ctm = Spread("a", 0, 3, {"the", "bat", "sat"});
  auto more = Spread("a", 3, 6, {"on", "mat", "now"});
  ctm.insert(ctm.end(), more.begin(), more.end());
  auto b = Spread("b", 0, 2, {"hello"});
  ctm.insert(ctm.end(), b.begin(), b.end());

  ScoreResult r = Score(stm, ctm);
  const WerCounts &t = r.report.total;
  CHECK(t.n_ref == 7);
  CHECK(t.subs == 1);
  CHECK(t.dels == 1);
  CHECK(t.inss == 1);
  CHECK(t.matches == 5);
  CHECK(r.report.segments == 3);
  CHECK(r.report.per_speaker.at("s1").n_ref == 4);
  CHECK(r.report.per_show.at("b").errors() == 0);
  CHECK(r.confusions.substitutions.at({"cat", "bat"}) == 1);
  CHECK(r.confusions.deletions.at("the") == 1);
  CHECK(r.confusions.insertions.at("now") == 1);

  std::ostringstream conf;
  WriteConfusions(conf, r.confusions);
  CHECK(conf.str() == "1\tcat\tbat\n1\tthe\t\n1\t\tnow\n");
}

TEST_CASE("no reference words is a report error") {
  std::vector<StmSegment> stm{Seg("a", "s", 0, 1, {})};
  try {
    Score(stm, std::vector<CtmEntry>{});
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kReport);
  }
}

TEST_CASE("breakdowns and confusions agree with totals; jobs do not matter") {
  SynthConfig cfg;
  cfg.shows = 3;
  cfg.segments_per_show = 60;
  cfg.hesitation_rate = 0.05;
  SynthCorpus corpus = GenerateSynthCorpus(cfg);
  ScoreOptions one;
  one.jobs = 1;
  ScoreResult base = Score(corpus.truth, corpus.systems.at("sys1"), one);
  WerCounts by_spk, by_show;
  for (const auto &[k, c] : base.report.per_speaker) by_spk += c;
  for (const auto &[k, c] : base.report.per_show) by_show += c;
  CHECK(by_spk == base.report.total);
  CHECK(by_show == base.report.total);
  CHECK(base.confusions.TotalSubstitutions() == base.report.total.subs);
  CHECK(base.confusions.TotalDeletions() == base.report.total.dels);
  CHECK(base.confusions.TotalInsertions() == base.report.total.inss);

  for (unsigned jobs : {2u, 3u, 4u, 7u, 64u}) {
    ScoreOptions o;
    o.jobs = jobs;
    ScoreResult r = Score(corpus.truth, corpus.systems.at("sys1"), o);
    CHECK(r.report.total == base.report.total);
    CHECK(r.report.per_speaker == base.report.per_speaker);
    CHECK(r.confusions == base.confusions);
  }
}

TEST_CASE("report merge is associative and commutative") {
  std::mt19937_64 rng(2);
  auto random_report = [&] {
    WerReport r;
    for (int i = 0; i < 4; ++i) {
      WerCounts c;
      c.n_ref = rng() % 100;
      c.subs = rng() % 10;
      c.matches = rng() % 50;
      r.per_speaker["s" + std::to_string(rng() % 5)] += c;
      r.total += c;
    }
    r.segments = rng() % 10;
    return r;
  };
  for (int i = 0; i < 50; ++i) {
    WerReport a = random_report(), b = random_report(), c = random_report();
    WerReport ab_c = a;
    ab_c.Merge(b);
    ab_c.Merge(c);
    WerReport c_ba = c;
    c_ba.Merge(b);
    c_ba.Merge(a);
    CHECK(ab_c.total == c_ba.total);
    CHECK(ab_c.per_speaker == c_ba.per_speaker);
    CHECK(ab_c.segments == c_ba.segments);
  }
}

TEST_CASE("top errors use the count: ref / hyp layout") {
  ConfusionTable t;
  t.substitutions[{"the", "a"}] = 21;
  t.substitutions[{"a", "the"}] = 9;
  t.substitutions[{"in", "and"}] = 9;
  t.substitutions[{"is", "as"}] = 3;
  t.deletions["the"] = 12;
  t.deletions["%hesitation"] = 30;
  t.insertions["a"] = 4;
  TopErrors top = RankTopErrors(t, 3);
  REQUIRE(top.substitutions.size() == 3);
  CHECK(top.substitutions[0] == "21: the / a");
  CHECK(top.substitutions[1] == "9: a / the");  // ties broken by words
  CHECK(top.substitutions[2] == "9: in / and");
  CHECK(top.deletions == std::vector<std::string>{"30: %hesitation", "12: the"});
  CHECK(top.insertions == std::vector<std::string>{"4: a"});
  CHECK_THROWS_AS(RankTopErrors(t, 0), Error);
}

TEST_CASE("system comparison") {
  auto report = [](std::string sys, std::string set, std::int64_t n,
                   std::int64_t errs) {
    WerReport r;
    r.system = std::move(sys);
    r.test_set = std::move(set);
    r.total.n_ref = n;
    r.total.subs = errs;
    r.total.matches = n - errs;
    return r;
  };
  std::vector<WerReport> reports{report("asr", "dev", 1000, 65),
                                 report("human", "dev", 1000, 36),
                                 report("asr", "eval", 2000, 118),
                                 report("human", "eval", 2000, 56)};
  ComparisonTable t = CompareSystems(reports);
  REQUIRE(t.systems == std::vector<std::string>{"asr", "human"});
  REQUIRE(t.test_sets == std::vector<std::string>{"dev", "eval"});
  CHECK(t.cells[0][0].wer_tenths == 65);
  CHECK(t.cells[1][0].wer_tenths == 36);
  CHECK(t.cells[1][0].best);
  CHECK_FALSE(t.cells[0][0].best);
  CHECK(t.cells[0][1].wer_tenths == 59);
  CHECK(t.cells[1][1].wer_tenths == 28);

  std::ostringstream tsv;
  WriteComparison(tsv, t, ReportFormat::kTsv);
  CHECK(tsv.str().find("human\t3.6\t1\t2.8\t1\n") != std::string::npos);

  reports.push_back(report("other", "dev", 999, 1));
  try {
    CompareSystems(reports);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kIncomparable);
  }
  CHECK_THROWS_AS(CompareSystems(std::vector<WerReport>{reports[0]}), Error);
}

TEST_CASE("hesitation ablation") {
  std::vector<StmSegment> stm{
      Seg("a", "s", 0, 4, {"%hesitation", "we", "%hesitation", "go"})};
  std::vector<CtmEntry> ctm = Spread("a", 0, 4, {"we", "go"});
  HesitationAblation ab = RunHesitationAblation(stm, ctm);
  CHECK(ab.baseline.total.dels == 2);
  CHECK(ab.baseline.total.n_ref == 4);
  CHECK(ab.dropped.total.errors() == 0);
  CHECK(ab.dropped.total.n_ref == 2);
  CHECK(ab.delta == doctest::Approx(-50.0));

  // Optional scoring: deleting an optional token costs nothing and it
  // leaves the reference count.
  ScoreOptions opt;
  opt.rules.optional_hesitation = true;
  ScoreResult r = Score(stm, ctm, opt);
  CHECK(r.report.total.errors() == 0);
  CHECK(r.report.total.n_ref == 2);
}

TEST_CASE("report formats") {
  WerReport r;
  r.system = "sys";
  r.test_set = "dev";
  r.total = {1000, 935, 32, 22, 11};
  r.per_speaker["spk1"] = {600, 560, 20, 10, 5};
  r.per_show["show"] = r.total;
  r.segments = 12;

  std::ostringstream text;
  WriteReport(text, r, ReportFormat::kText);
  CHECK(text.str().find("Sub       3.2       32") != std::string::npos);
  CHECK(text.str().find("All       6.5       65") != std::string::npos);

  std::ostringstream tsv;
  WriteReport(tsv, r, ReportFormat::kTsv);
  CHECK(tsv.str().find("total\tsys\t1000\t935\t32\t22\t11\t3.2\t2.2\t1.1\t6.5") !=
        std::string::npos);

  std::ostringstream json;
  WriteReport(json, r, ReportFormat::kJson);
  std::istringstream in(json.str());
  WerReport back = ReadJsonReport(in);
  CHECK(back.system == r.system);
  CHECK(back.test_set == r.test_set);
  CHECK(back.total == r.total);
  CHECK(back.per_speaker == r.per_speaker);
  CHECK(back.per_show == r.per_show);
  CHECK(back.segments == r.segments);

  std::istringstream bad("{not json");
  CHECK_THROWS_AS(ReadJsonReport(bad), Error);
  CHECK(ParseReportFormat("json") == ReportFormat::kJson);
  CHECK_THROWS_AS(ParseReportFormat("xml"), Error);
}

}  // TEST_SUITE

}  // namespace asreval
