// tests/support/oracles.h

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

// Slow, obviously-correct reference implementations used to check the
// library.  Nothing here shares code with core/.

#ifndef ASREVAL_TESTS_SUPPORT_ORACLES_H_
#define ASREVAL_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "asreval/ngram_lm.h"

namespace asreval {
namespace oracle {

using Words = std::vector<std::string>;

// ------------------------------------------------------------- alignment

/// Exhaustive enumeration of every edit script: at each step try a
/// diagonal move, a deletion and an insertion and keep the cheapest.  No
/// memoization, so only usable for short sequences.
inline std::int64_t ExhaustiveCost(const Words &ref, const Words &hyp,
                                   std::size_t i, std::size_t j,
                                   std::int64_t sub, std::int64_t del,
                                   std::int64_t ins) {
  if (i == ref.size()) return static_cast<std::int64_t>(hyp.size() - j) * ins;
  if (j == hyp.size()) return static_cast<std::int64_t>(ref.size() - i) * del;
  std::int64_t diag = (ref[i] == hyp[j] ? 0 : sub) +
                      ExhaustiveCost(ref, hyp, i + 1, j + 1, sub, del, ins);
  std::int64_t d = del + ExhaustiveCost(ref, hyp, i + 1, j, sub, del, ins);
  std::int64_t n = ins + ExhaustiveCost(ref, hyp, i, j + 1, sub, del, ins);
  return std::min({diag, d, n});
}

/// The same recursion with a memo table, so lengths up to a few dozen
/// are cheap.  Still top-down, unlike the library's row-based DP.
class RecursiveAligner {
 public:
  RecursiveAligner(const Words &ref, const Words &hyp, std::int64_t sub,
                   std::int64_t del, std::int64_t ins)
      : ref_(ref), hyp_(hyp), sub_(sub), del_(del), ins_(ins),
        memo_((ref.size() + 1) * (hyp.size() + 1), -1) {}

  std::int64_t Cost() { return Go(0, 0); }

 private:
  std::int64_t Go(std::size_t i, std::size_t j) {
    std::int64_t &slot = memo_[i * (hyp_.size() + 1) + j];
    if (slot >= 0) return slot;
    std::int64_t best;
    if (i == ref_.size())
      best = static_cast<std::int64_t>(hyp_.size() - j) * ins_;
    else if (j == hyp_.size())
      best = static_cast<std::int64_t>(ref_.size() - i) * del_;
    else
      best = std::min({(ref_[i] == hyp_[j] ? 0 : sub_) + Go(i + 1, j + 1),
                       del_ + Go(i + 1, j), ins_ + Go(i, j + 1)});
    return slot = best;
  }

  const Words &ref_;
  const Words &hyp_;
  std::int64_t sub_, del_, ins_;
  std::vector<std::int64_t> memo_;
};

inline std::int64_t RecursiveCost(const Words &ref, const Words &hyp,
                                  std::int64_t sub, std::int64_t del,
                                  std::int64_t ins) {
  return RecursiveAligner(ref, hyp, sub, del, ins).Cost();
}

inline Words RandomWords(std::mt19937_64 &rng, std::size_t max_len,
                         int vocab) {
  std::size_t len = rng() % (max_len + 1);
  Words w;
  for (std::size_t i = 0; i < len; ++i)
    w.push_back(std::string(1, static_cast<char>('a' + rng() % vocab)));
  return w;
}

// ------------------------------------------------------------ Witten-Bell

/// Direct Witten-Bell backoff probabilities computed from raw counts on
/// every query, without any ARPA tables.
class WittenBell {
 public:
  WittenBell(const std::vector<Words> &corpus, int order) : order_(order) {
    for (const Words &s : corpus) {
      Words padded{"<s>"};
      padded.insert(padded.end(), s.begin(), s.end());
      padded.push_back("</s>");
      for (std::size_t i = 1; i < padded.size(); ++i)
        for (int n = 1; n <= order && static_cast<std::size_t>(n) <= i + 1;
             ++n) {
          Words gram(padded.begin() + (i + 1 - n), padded.begin() + i + 1);
          Words ctx(gram.begin(), gram.end() - 1);
          followers_[ctx][gram.back()] += 1;
        }
    }
    for (const auto &[w, c] : followers_[{}]) vocab_.insert(w);
    vocab_.insert("<unk>");
  }

  /// Words p(.|h) ranges over.
  const std::set<std::string> &vocab() const { return vocab_; }

  double Prob(Words ctx, const std::string &word_in) const {
    const std::string word = vocab_.count(word_in) ? word_in : "<unk>";
    if (static_cast<int>(ctx.size()) > order_ - 1)
      ctx.erase(ctx.begin(), ctx.end() - (order_ - 1));
    return ProbRec(ctx, word);
  }

 private:
  double ProbRec(const Words &ctx, const std::string &w) const {
    auto it = followers_.find(ctx);
    if (ctx.empty()) {
      const auto &uni = it->second;
      double n = 0, t = static_cast<double>(uni.size());
      for (const auto &[x, c] : uni) n += c;
      double c = uni.count(w) ? uni.at(w) : 0.0;
      if (w == "<unk>") return (c + t) / (n + t);
      return c / (n + t);
    }
    Words shorter(ctx.begin() + 1, ctx.end());
    if (it == followers_.end()) return ProbRec(shorter, w);
    const auto &f = it->second;
    double c = 0, t = static_cast<double>(f.size());
    for (const auto &[x, k] : f) c += k;
    if (f.size() >= vocab_.size()) return f.count(w) ? f.at(w) / c : 0.0;
    if (f.count(w)) return f.at(w) / (c + t);
    double seen_lower = 0;
    for (const auto &[x, k] : f) seen_lower += ProbRec(shorter, x);
    return (t / (c + t)) * ProbRec(shorter, w) / (1.0 - seen_lower);
  }

  int order_;
  std::map<Words, std::map<std::string, double>> followers_;
  std::set<std::string> vocab_;
};

// --------------------------------------------------------- fixed-prob LMs

/// Context-free model over a fixed table, for EM tests.  Words outside the
/// table get probability 0.
class TableLm : public LanguageModel {
 public:
  explicit TableLm(std::map<std::string, double> probs)
      : probs_(std::move(probs)) {}
  int order() const override { return 1; }
  double LogProb(std::span<const std::string>,
                 std::string_view word) const override {
    auto it = probs_.find(std::string(word));
    if (it == probs_.end() || it->second <= 0.0)
      return -std::numeric_limits<double>::infinity();
    return std::log10(it->second);
  }
  bool InVocab(std::string_view word) const override {
    return probs_.count(std::string(word)) > 0;
  }

 private:
  std::map<std::string, double> probs_;
};

/// Bigram model with a random but normalized table, for EM tests where
/// context matters.
class RandomBigramLm : public LanguageModel {
 public:
  RandomBigramLm(const std::vector<std::string> &vocab, std::mt19937_64 &rng)
      : vocab_(vocab) {
    std::vector<std::string> contexts = vocab;
    contexts.push_back("<s>");
    std::vector<std::string> outcomes = vocab;
    outcomes.push_back("</s>");
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (const std::string &h : contexts) {
      double total = 0;
      for (const std::string &w : outcomes) total += table_[h][w] = u(rng);
      for (const std::string &w : outcomes) table_[h][w] /= total;
    }
  }
  int order() const override { return 2; }
  double LogProb(std::span<const std::string> ctx,
                 std::string_view word) const override {
    const std::string h = ctx.empty() ? "<s>" : ctx.back();
    return std::log10(table_.at(h).at(std::string(word)));
  }
  bool InVocab(std::string_view word) const override {
    return std::find(vocab_.begin(), vocab_.end(), word) != vocab_.end();
  }

 private:
  std::vector<std::string> vocab_;
  std::map<std::string, std::map<std::string, double>> table_;
};

}  // namespace oracle
}  // namespace asreval

#endif  // ASREVAL_TESTS_SUPPORT_ORACLES_H_
