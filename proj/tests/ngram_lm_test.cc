// tests/ngram_lm_test.cc

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

#include <cmath>
#include <random>
#include <sstream>

#include "asreval/corpus_io.h"
#include "asreval/error.h"
#include "asreval/ngram_lm.h"
#include "doctest.h"
#include "support/oracles.h"

namespace asreval {

namespace {

using Words = std::vector<std::string>;

std::vector<Sentence> RandomCorpus(std::mt19937_64 &rng, int sentences,
                                   int vocab, int max_len) {
  std::vector<Sentence> corpus;
  for (int s = 0; s < sentences; ++s) {
    Sentence sent;
    int len = 1 + static_cast<int>(rng() % max_len);
    for (int i = 0; i < len; ++i) {
      // Skewed so some contexts see every word and others see few.
      int r = static_cast<int>(rng() % vocab);
      r = static_cast<int>(rng() % (r + 1));
      sent.push_back("w" + std::to_string(r));
    }
    corpus.push_back(sent);
  }
  return corpus;
}

double P(const LanguageModel &m, Words ctx, const std::string &w) {
  return std::pow(10.0, m.LogProb(ctx, w));
}

// Every context the model can distinguish: all stored histories of length
// < order, plus a few that were never seen.
std::vector<Words> Contexts(const NGramModel &m) {
  std::vector<Words> out{{}, {"<s>"}, {"never", "seen"}};
  for (int n = 1; n < m.order(); ++n)
    for (const auto &[ngram, e] : m.table(n))
      if (ngram.back() != "</s>") out.push_back(ngram);
  return out;
}

}  // namespace

TEST_SUITE("ngram_lm") {

TEST_CASE("hand-computed Witten-Bell bigram") {
  // Corpus: "a b", "a c", "b a".  Unigram N=9 over {a:3 b:2 c:1 </s>:3},
  // T=4, so p(a)=3/13, p(b)=2/13, p(c)=1/13, p(</s>)=3/13, p(<unk>)=4/13.
  std::vector<Sentence> corpus{{"a", "b"}, {"a", "c"}, {"b", "a"}};
  NGramModel m = Estimate(CountNGrams(corpus, 2));
  CHECK(P(m, {}, "a") == doctest::Approx(3.0 / 13).epsilon(1e-12));
  CHECK(P(m, {}, "<unk>") == doctest::Approx(4.0 / 13).epsilon(1e-12));
  CHECK(P(m, {}, "zzz") == doctest::Approx(4.0 / 13).epsilon(1e-12));
  // <s>: a(2) b(1), c=3 T=2; bow = (2/5) / (1 - 5/13) = 13/20.
  CHECK(P(m, {"<s>"}, "a") == doctest::Approx(2.0 / 5).epsilon(1e-12));
  CHECK(P(m, {"<s>"}, "c") == doctest::Approx(1.0 / 20).epsilon(1e-12));
  // a: b c </s> once each, c=3 T=3; bow = (1/2) / (7/13) = 13/14.
  CHECK(P(m, {"a"}, "b") == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(P(m, {"a"}, "a") == doctest::Approx(13.0 / 14 * 3 / 13).epsilon(1e-12));
  CHECK(m.Find(Words{"<s>"})->log10_prob == kStartLogProb);

  // Held-out "a b c" and "c a":
  //   2/5 * 1/6 * 1/14 * 1/2 * 1/20 * 3/20 * 1/6 = 1/336000 over 7 events.
  std::vector<Sentence> test{{"a", "b", "c"}, {"c", "a"}};
  PerplexityResult r = Perplexity(m, test);
  CHECK(r.events == 7);
  CHECK(r.words == 5);
  CHECK(r.oov == 0);
  CHECK(std::fabs(r.perplexity - std::pow(336000.0, 1.0 / 7.0)) < 1e-9);
  CHECK(std::fabs(r.log10_prob + std::log10(336000.0)) < 1e-12);
}

TEST_CASE("matches a count-based Witten-Bell oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 24; ++trial) {
    const int order = 1 + trial % 4;
    auto corpus = RandomCorpus(rng, 5 + static_cast<int>(rng() % 30),
                               2 + static_cast<int>(rng() % 6), 7);
    NGramModel m = Estimate(CountNGrams(corpus, order));
    oracle::WittenBell wb(corpus, order);
    for (const Words &ctx : Contexts(m))
      for (const std::string &w : wb.vocab()) {
        double want = wb.Prob(ctx, w);
        double got = P(m, ctx, w);
        INFO("order " << order << " word " << w);
        CHECK(std::fabs(got - want) <= 1e-9 * std::max(1.0, want));
      }
  }
}

TEST_CASE("every conditional distribution sums to one") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 12; ++trial) {
    const int order = 2 + trial % 5;
    auto corpus = RandomCorpus(rng, 40, 8, 10);
    NGramModel m = Estimate(CountNGrams(corpus, order));
    m.Validate();
    const auto vocab = m.PredictedVocabulary();
    for (const Words &ctx : Contexts(m)) {
      double sum = 0;
      for (const std::string &w : vocab) sum += P(m, ctx, w);
      CHECK(std::fabs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("contexts that saw every word use plain relative frequency") {
  // <unk> is itself predicted, so it must appear after "a" as well.
  std::vector<Sentence> closed{{"a", "a"}, {"a", "<unk>"}, {"a"}};
  NGramModel c = Estimate(CountNGrams(closed, 2));
  CHECK(P(c, {"a"}, "a") == doctest::Approx(1.0 / 4).epsilon(1e-12));
  CHECK_FALSE(c.Find(Words{"a"})->log10_backoff);
  double sum = 0;
  for (const std::string &w : c.PredictedVocabulary()) sum += P(c, {"a"}, w);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a fixed vocabulary shares the unseen mass") {
  std::vector<Sentence> corpus{{"a", "b"}, {"a"}};
  Vocabulary v{"a", "b", "c", "d"};
  NGramModel m = Estimate(CountNGrams(corpus, 2, &v));
  // N=5 (a:2 b:1 </s>:2), T=3; unseen c, d and <unk> share 3/8.
  CHECK(P(m, {}, "c") == doctest::Approx(1.0 / 8).epsilon(1e-12));
  CHECK(P(m, {}, "<unk>") == doctest::Approx(1.0 / 8).epsilon(1e-12));
  CHECK(P(m, {}, "a") == doctest::Approx(2.0 / 8).epsilon(1e-12));
  CHECK(m.InVocab("d"));
  CHECK_FALSE(m.InVocab("e"));
  for (const Words &ctx : Contexts(m)) {
    double sum = 0;
    for (const std::string &w : m.PredictedVocabulary()) sum += P(m, ctx, w);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("vocabulary selection and <unk> mapping") {
  std::vector<Sentence> corpus{{"a", "a", "a", "b", "b", "c", "d"}};
  NGramCounts counts = CountNGrams(corpus, 1);
  Vocabulary v = SelectVocabulary(counts, 3);
  CHECK(v == Vocabulary{"a", "b", "c"});  // c beats d lexicographically
  NGramCounts mapped = CountNGrams(corpus, 2, &v);
  CHECK(mapped.Count(Words{"<unk>"}) == 1);
  CHECK(mapped.Count(Words{"c", "<unk>"}) == 1);
  CHECK_THROWS_AS(SelectVocabulary(counts, 0), Error);
  CHECK_THROWS_AS(CountNGrams(corpus, 7), Error);
  CHECK_THROWS_AS(Estimate(NGramCounts(2)), Error);
}

TEST_CASE("counts merge like concatenated text") {
  std::mt19937_64 rng(41);
  auto a = RandomCorpus(rng, 10, 5, 6), b = RandomCorpus(rng, 10, 5, 6);
  NGramCounts ca = CountNGrams(a, 3);
  ca.Merge(CountNGrams(b, 3));
  std::vector<Sentence> both = a;
  both.insert(both.end(), b.begin(), b.end());
  NGramCounts cb = CountNGrams(both, 3);
  for (int n = 1; n <= 3; ++n) CHECK(ca.table(n) == cb.table(n));
}

TEST_CASE("perplexity bookkeeping") {
  std::vector<Sentence> corpus{{"a", "b"}};
  NGramModel m = Estimate(CountNGrams(corpus, 2));
  PerplexityResult r = Perplexity(m, std::vector<Sentence>{{"a", "zz"}});
  CHECK(r.oov == 1);
  CHECK(r.skipped == 0);
  CHECK(r.events == 3);
  CHECK_THROWS_AS(PerplexityAccumulator(m).Result(), Error);

  // A memorizing model is nearly certain of its own text.
  std::vector<Sentence> repeated(50, Sentence{"the", "cat", "sat"});
  NGramModel mem = Estimate(CountNGrams(repeated, 3));
  CHECK(Perplexity(mem, std::vector<Sentence>{repeated[0]}).perplexity < 1.1);
}

TEST_CASE("ARPA round trip preserves every probability") {
  std::mt19937_64 rng(43);
  for (int order = 1; order <= 6; ++order) {
    auto corpus = RandomCorpus(rng, 60, 12, 12);
    NGramModel m = Estimate(CountNGrams(corpus, order));
    std::stringstream buf;
    WriteArpa(buf, m);
    NGramModel back = ReadArpa(buf);
    REQUIRE(back.order() == order);
    for (int n = 1; n <= order; ++n) {
      REQUIRE(back.size(n) == m.size(n));
      for (const auto &[ngram, e] : m.table(n)) {
        const NGramEntry *b = back.Find(ngram);
        REQUIRE(b);
        CHECK(b->log10_prob == e.log10_prob);
        CHECK(b->log10_backoff == e.log10_backoff);
      }
    }
  }
}

TEST_CASE("model validation") {
  NGramModel m(2);
  m.Set({"a"}, {-0.5, {}});
  m.Set({"b", "a"}, {-0.1, {}});  // prefix "b" missing
  CHECK_THROWS_AS(m.Validate(), Error);
  NGramModel bad(1);
  bad.Set({"a"}, {0.5, {}});
  CHECK_THROWS_AS(bad.Validate(), Error);
  CHECK_THROWS_AS(NGramModel(0), Error);
  CHECK_THROWS_AS(NGramModel(7), Error);
}

TEST_CASE("interpolation mixes in the probability domain") {
  auto a = std::make_shared<oracle::TableLm>(
      std::map<std::string, double>{{"x", 0.5}, {"</s>", 0.5}});
  auto b = std::make_shared<oracle::TableLm>(
      std::map<std::string, double>{{"x", 0.1}, {"</s>", 0.9}});
  InterpolatedLm mix({a, b}, {0.25, 0.75});
  CHECK(P(mix, {}, "x") == doctest::Approx(0.25 * 0.5 + 0.75 * 0.1));
  // A zero-weight component does not contribute, even with p = 0.
  auto z = std::make_shared<oracle::TableLm>(std::map<std::string, double>{});
  InterpolatedLm with_zero({a, z}, {1.0, 0.0});
  CHECK(P(with_zero, {}, "x") == doctest::Approx(0.5));
  CHECK_THROWS_AS(InterpolatedLm({a, b}, {0.5, 0.6}), Error);
  CHECK_THROWS_AS(InterpolatedLm({a, b}, {1.5, -0.5}), Error);
  CHECK_THROWS_AS(InterpolatedLm({a}, {0.5, 0.5}), Error);
}

TEST_CASE("one EM step by hand") {
  oracle::TableLm a({{"a", 0.5}, {"b", 0.3}, {"</s>", 0.2}});
  oracle::TableLm b({{"a", 0.1}, {"b", 0.6}, {"</s>", 0.3}});
  const LanguageModel *models[] = {&a, &b};
  std::vector<Sentence> heldout{{"a"}};
  EmOptions opts;
  opts.max_iters = 1;
  EmResult r = TuneWeightsEm(models, heldout, opts);
  // Responsibilities of a: 0.25/0.30 for "a" and 0.10/0.25 for </s>.
  CHECK(r.weights[0] == doctest::Approx(37.0 / 60).epsilon(1e-12));
  CHECK(r.weights[1] == doctest::Approx(23.0 / 60).epsilon(1e-12));
  REQUIRE(r.log_likelihoods.size() == 2);
  CHECK(r.log_likelihoods[0] == doctest::Approx(std::log10(0.3 * 0.25)));
  CHECK(r.log_likelihoods[1] ==
        doctest::Approx(std::log10(20.8 / 60 * 14.3 / 60)));
  CHECK(r.iterations == 1);
}

TEST_CASE("EM never lowers the held-out likelihood") {
  std::mt19937_64 rng(47);
  const std::vector<std::string> vocab{"a", "b", "c", "d"};
  for (int trial = 0; trial < 30; ++trial) {
    oracle::RandomBigramLm x(vocab, rng), y(vocab, rng), z(vocab, rng);
    const LanguageModel *models[] = {&x, &y, &z};
    std::vector<Sentence> heldout;
    for (int s = 0; s < 20; ++s) {
      Sentence sent;
      for (int i = 0, n = 1 + static_cast<int>(rng() % 6); i < n; ++i)
        sent.push_back(vocab[rng() % vocab.size()]);
      heldout.push_back(sent);
    }
    EmOptions opts;
    opts.tol = 0;
    opts.max_iters = 40;
    EmResult r = TuneWeightsEm(models, heldout, opts);
    for (std::size_t i = 1; i < r.log_likelihoods.size(); ++i)
      CHECK(r.log_likelihoods[i] >= r.log_likelihoods[i - 1] - 1e-12);
    double sum = 0;
    for (double w : r.weights) sum += w;
    CHECK(sum == doctest::Approx(1.0));
  }
}

TEST_CASE("EM errors") {
  oracle::TableLm a({{"a", 1.0}});
  oracle::TableLm none({{"b", 1.0}});
  const LanguageModel *models[] = {&a, &none};
  std::vector<Sentence> heldout{{"a"}};
  try {
    TuneWeightsEm(models, heldout);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kDegenerate);
  }
  const LanguageModel *one[] = {&a};
  CHECK_THROWS_AS(TuneWeightsEm(one, heldout), Error);
  CHECK_THROWS_AS(TuneWeightsEm(models, std::vector<Sentence>{}), Error);
}

}  // TEST_SUITE

}  // namespace asreval
