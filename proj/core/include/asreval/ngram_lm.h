// asreval/ngram_lm.h

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

// Backoff word n-gram models: counting, Witten-Bell estimation, querying,
// linear interpolation of several models and EM tuning of the mixture
// weights on held-out text.
//
// Conventions: every sentence is padded as <s> w1 .. wn </s>.  <s> only
// conditions (it is stored as a unigram with log10 prob -99 and never
// predicted), </s> is predicted and counted.  Words outside the model's
// unigram table are mapped to <unk>.  All probabilities are log10.

#ifndef ASREVAL_NGRAM_LM_H_
#define ASREVAL_NGRAM_LM_H_

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asreval {

inline constexpr std::string_view kSentenceStart = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";
inline constexpr std::string_view kUnknownWord = "<unk>";
inline constexpr int kMaxNGramOrder = 6;
inline constexpr int kDefaultNGramOrder = 6;
// log10 probability written for <s>, which is never predicted.
inline constexpr double kStartLogProb = -99.0;

using Sentence = std::vector<std::string>;
using NGram = std::vector<std::string>;
using Vocabulary = std::set<std::string, std::less<>>;

// Lexicographic order over any two ranges of strings, so maps keyed by
// NGram can be probed with a std::span without copying.
struct NGramLess {
  using is_transparent = void;
  template <class A, class B>
  bool operator()(const A &a, const B &b) const {
    return std::lexicographical_compare(std::begin(a), std::end(a),
                                        std::begin(b), std::end(b));
  }
};

struct NGramEntry {
  double log10_prob = 0.0;
  std::optional<double> log10_backoff;
};

/// Anything that can assign log10 p(word | context).
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual int order() const = 0;

  /// `context` is in reading order (most recent word last); only the last
  /// order()-1 words are used.  Out-of-vocabulary words become <unk>.
  /// Returns -infinity when the word cannot be scored at all (closed
  /// vocabulary model without <unk>).
  virtual double LogProb(std::span<const std::string> context,
                         std::string_view word) const = 0;

  virtual bool InVocab(std::string_view word) const = 0;

  /// Sum of LogProb over w1..wn </s> starting from <s>.
  double SentenceLogProb(std::span<const std::string> words) const;
};

class NGramModel : public LanguageModel {
 public:
  using Table = std::map<NGram, NGramEntry, NGramLess>;

  explicit NGramModel(int order, std::string smoothing_tag = "");

  int order() const override { return order_; }
  const std::string &smoothing_tag() const { return smoothing_tag_; }

  /// Inserts or replaces; the n-gram length picks the table.
  void Set(NGram ngram, NGramEntry entry);
  const NGramEntry *Find(std::span<const std::string> ngram) const;
  NGramEntry *FindMutable(std::span<const std::string> ngram);

  /// n in [1, order()].
  const Table &table(int n) const { return tables_.at(n - 1); }
  std::size_t size(int n) const { return tables_.at(n - 1).size(); }

  double LogProb(std::span<const std::string> context,
                 std::string_view word) const override;
  bool InVocab(std::string_view word) const override;

  /// Unigrams except <s>: the outcomes every conditional distribution
  /// ranges over.
  std::vector<std::string> PredictedVocabulary() const;

  /// Checks probabilities are in (0,1] and every stored n-gram's prefix
  /// is stored; throws Error(kValue / kFormat).
  void Validate() const;

 private:
  int order_;
  std::string smoothing_tag_;
  std::vector<Table> tables_;
};

/// Raw n-gram counts for orders 1..order.  Counting is one pass over the
/// text and memory is proportional to the number of distinct n-grams.
class NGramCounts {
 public:
  using Table = std::map<NGram, std::uint64_t, NGramLess>;

  explicit NGramCounts(int order);

  /// Tokens outside `vocab` are counted as <unk> from now on.
  void SetVocabulary(Vocabulary vocab);
  const std::optional<Vocabulary> &vocabulary() const { return vocab_; }

  void AddSentence(std::span<const std::string> words);
  /// Adds every count of `other` (same order required).
  void Merge(const NGramCounts &other);

  int order() const { return order_; }
  const Table &table(int n) const { return tables_.at(n - 1); }
  std::uint64_t Count(std::span<const std::string> ngram) const;
  bool empty() const { return tables_.front().empty(); }

 private:
  int order_;
  std::optional<Vocabulary> vocab_;
  std::vector<Table> tables_;
};

/// Counts every sentence of `corpus`; order must lie in [1, 6].
NGramCounts CountNGrams(std::span<const Sentence> corpus, int order,
                        const Vocabulary *vocab = nullptr);

/// The `target_size` most frequent unigrams (ties broken lexicographically),
/// excluding the sentence and unknown symbols.
Vocabulary SelectVocabulary(const NGramCounts &counts, std::size_t target_size);

enum class Smoothing { kWittenBell };

const char *SmoothingName(Smoothing smoothing);

/// Builds a backoff model from counts.  Witten-Bell: a context h with
/// total count c(h) and T(h) distinct followers gives each seen word
/// c(h,w)/(c(h)+T(h)); the remaining T/(c+T) goes to the lower order
/// through the backoff weight.  At order 1 the leftover mass goes to <unk>,
/// shared evenly with any fixed-vocabulary words that never occurred.
NGramModel Estimate(const NGramCounts &counts,
                    Smoothing smoothing = Smoothing::kWittenBell);

/// Probability-domain mixture sum_i weight_i * p_i(word | context).
class InterpolatedLm : public LanguageModel {
 public:
  InterpolatedLm(std::vector<std::shared_ptr<const LanguageModel>> components,
                 std::vector<double> weights);

  int order() const override { return order_; }
  double LogProb(std::span<const std::string> context,
                 std::string_view word) const override;
  bool InVocab(std::string_view word) const override;

  std::size_t size() const { return components_.size(); }
  const std::vector<double> &weights() const { return weights_; }
  const LanguageModel &component(std::size_t i) const { return *components_[i]; }

 private:
  std::vector<std::shared_ptr<const LanguageModel>> components_;
  std::vector<double> weights_;
  int order_ = 1;
};

struct PerplexityResult {
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::size_t oov = 0;       // scored through <unk>
  std::size_t skipped = 0;   // unscorable (closed vocabulary), excluded
  std::size_t events = 0;    // words + sentence ends actually scored
  double log10_prob = 0.0;
  double perplexity = 0.0;
};

/// Streaming accumulator, so held-out text never has to be held in memory.
class PerplexityAccumulator {
 public:
  explicit PerplexityAccumulator(const LanguageModel &model) : model_(model) {}
  void Add(std::span<const std::string> sentence);
  /// Throws Error(kArgument) if nothing was scored.
  PerplexityResult Result() const;

 private:
  const LanguageModel &model_;
  PerplexityResult acc_;
};

PerplexityResult Perplexity(const LanguageModel &model,
                            std::span<const Sentence> text);

struct EmOptions {
  int max_iters = 50;
  double tol = 1e-6;
  /// Empty means uniform.
  std::vector<double> initial_weights;
};

struct EmResult {
  std::vector<double> weights;
  /// Held-out log10 likelihood before the first update and after each one.
  std::vector<double> log_likelihoods;
  int iterations = 0;
};

/// EM over mixture weights only.  Each held-out event (every word and
/// each sentence end) contributes its responsibilities; the new weight is
/// their mean.  Stops when the likelihood gain drops below `tol`.
EmResult TuneWeightsEm(std::span<const LanguageModel *const> components,
                       std::span<const Sentence> heldout,
                       const EmOptions &options = {});

}  // namespace asreval

#endif  // ASREVAL_NGRAM_LM_H_
