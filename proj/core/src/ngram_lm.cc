// core/src/ngram_lm.cc

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

#include "asreval/ngram_lm.h"

#include <cmath>
#include <limits>
#include <numeric>

#include "asreval/error.h"

namespace asreval {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void CheckOrder(int order) {
  if (order < 1 || order > kMaxNGramOrder)
    throw Error(ErrorKind::kRange, "n-gram order " + std::to_string(order) +
                                       " outside [1, " +
                                       std::to_string(kMaxNGramOrder) + "]");
}

// log10(sum_i 10^terms[i]) without underflow.
double LogSumExp10(std::span<const double> terms) {
  double best = kNegInf;
  for (double t : terms) best = std::max(best, t);
  if (best == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double t : terms) sum += std::pow(10.0, t - best);
  return best + std::log10(sum);
}

}  // namespace

double LanguageModel::SentenceLogProb(std::span<const std::string> words) const {
  std::vector<std::string> context{std::string(kSentenceStart)};
  double total = 0.0;
  for (const std::string &w : words) {
    total += LogProb(context, w);
    context.push_back(w);
  }
  total += LogProb(context, kSentenceEnd);
  return total;
}

// ---------------------------------------------------------------- NGramModel

NGramModel::NGramModel(int order, std::string smoothing_tag)
    : order_(order), smoothing_tag_(std::move(smoothing_tag)) {
  CheckOrder(order);
  tables_.resize(order);
}

void NGramModel::Set(NGram ngram, NGramEntry entry) {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_)
    throw Error(ErrorKind::kArgument,
                "n-gram of length " + std::to_string(ngram.size()) +
                    " does not fit a model of order " + std::to_string(order_));
  tables_[ngram.size() - 1].insert_or_assign(std::move(ngram), entry);
}

const NGramEntry *NGramModel::Find(std::span<const std::string> ngram) const {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_) return nullptr;
  const Table &t = tables_[ngram.size() - 1];
  auto it = t.find(ngram);
  return it == t.end() ? nullptr : &it->second;
}

NGramEntry *NGramModel::FindMutable(std::span<const std::string> ngram) {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_) return nullptr;
  Table &t = tables_[ngram.size() - 1];
  auto it = t.find(ngram);
  return it == t.end() ? nullptr : &it->second;
}

bool NGramModel::InVocab(std::string_view word) const {
  const Table &uni = tables_.front();
  return uni.find(std::span<const std::string_view>(&word, 1)) != uni.end();
}

double NGramModel::LogProb(std::span<const std::string> context,
                           std::string_view word) const {
  std::size_t keep = std::min<std::size_t>(context.size(), order_ - 1);
  std::vector<std::string> key;
  key.reserve(keep + 1);
  for (std::size_t i = context.size() - keep; i < context.size(); ++i)
    key.push_back(InVocab(context[i]) ? context[i]
                                      : std::string(kUnknownWord));
  key.push_back(InVocab(word) ? std::string(word) : std::string(kUnknownWord));

  std::span<const std::string> all(key);
  double backoff = 0.0;
  for (std::size_t start = 0; start < all.size(); ++start) {
    std::span<const std::string> ngram = all.subspan(start);
    if (const NGramEntry *e = Find(ngram)) return backoff + e->log10_prob;
    std::span<const std::string> ctx = ngram.first(ngram.size() - 1);
    if (const NGramEntry *c = Find(ctx); c && c->log10_backoff)
      backoff += *c->log10_backoff;
  }
  return kNegInf;
}

std::vector<std::string> NGramModel::PredictedVocabulary() const {
  std::vector<std::string> vocab;
  vocab.reserve(tables_.front().size());
  for (const auto &[ngram, entry] : tables_.front())
    if (ngram.front() != kSentenceStart) vocab.push_back(ngram.front());
  return vocab;
}

void NGramModel::Validate() const {
  for (int n = 1; n <= order_; ++n) {
    for (const auto &[ngram, entry] : tables_[n - 1]) {
      if (!std::isfinite(entry.log10_prob) || entry.log10_prob > 0.0)
        throw Error(ErrorKind::kValue,
                    "log10 probability " + std::to_string(entry.log10_prob) +
                        " for '" + ngram.back() + "' is not in (0,1]");
      if (entry.log10_backoff && !std::isfinite(*entry.log10_backoff))
        throw Error(ErrorKind::kValue, "non-finite backoff weight");
      if (n > 1) {
        std::span<const std::string> prefix(ngram.data(), ngram.size() - 1);
        if (!Find(prefix))
          throw Error(ErrorKind::kFormat,
                      "n-gram of order " + std::to_string(n) +
                          " has no stored prefix");
      }
    }
  }
}

// --------------------------------------------------------------- NGramCounts

NGramCounts::NGramCounts(int order) : order_(order) {
  CheckOrder(order);
  tables_.resize(order);
}

void NGramCounts::SetVocabulary(Vocabulary vocab) { vocab_ = std::move(vocab); }

void NGramCounts::AddSentence(std::span<const std::string> words) {
  std::vector<std::string> padded;
  padded.reserve(words.size() + 2);
  padded.emplace_back(kSentenceStart);
  for (const std::string &w : words) {
    if (vocab_ && !vocab_->contains(w))
      padded.emplace_back(kUnknownWord);
    else
      padded.push_back(w);
  }
  padded.emplace_back(kSentenceEnd);

  std::span<const std::string> all(padded);
  for (std::size_t i = 1; i < padded.size(); ++i) {
    for (int n = 1; n <= order_ && static_cast<std::size_t>(n) <= i + 1; ++n) {
      std::span<const std::string> ngram = all.subspan(i + 1 - n, n);
      Table &t = tables_[n - 1];
      auto it = t.find(ngram);
      if (it == t.end())
        t.emplace(NGram(ngram.begin(), ngram.end()), 1);
      else
        ++it->second;
    }
  }
}

void NGramCounts::Merge(const NGramCounts &other) {
  if (other.order_ != order_)
    throw Error(ErrorKind::kArgument, "cannot merge counts of different order");
  for (int n = 0; n < order_; ++n)
    for (const auto &[ngram, count] : other.tables_[n])
      tables_[n][ngram] += count;
}

std::uint64_t NGramCounts::Count(std::span<const std::string> ngram) const {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_) return 0;
  const Table &t = tables_[ngram.size() - 1];
  auto it = t.find(ngram);
  return it == t.end() ? 0 : it->second;
}

NGramCounts CountNGrams(std::span<const Sentence> corpus, int order,
                        const Vocabulary *vocab) {
  NGramCounts counts(order);
  if (vocab) counts.SetVocabulary(*vocab);
  for (const Sentence &s : corpus) counts.AddSentence(s);
  return counts;
}

Vocabulary SelectVocabulary(const NGramCounts &counts, std::size_t target_size) {
  if (target_size == 0)
    throw Error(ErrorKind::kArgument, "vocabulary size must be at least 1");
  std::vector<std::pair<std::uint64_t, const std::string *>> ranked;
  for (const auto &[ngram, count] : counts.table(1)) {
    const std::string &w = ngram.front();
    if (w == kSentenceStart || w == kSentenceEnd || w == kUnknownWord) continue;
    ranked.emplace_back(count, &w);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  });
  Vocabulary vocab;
  for (std::size_t i = 0; i < ranked.size() && i < target_size; ++i)
    vocab.insert(*ranked[i].second);
  return vocab;
}

// ---------------------------------------------------------------- estimation

const char *SmoothingName(Smoothing smoothing) {
  switch (smoothing) {
    case Smoothing::kWittenBell: return "witten-bell";
  }
  return "unknown";
}

namespace {

struct PendingBackoff {
  NGram context;
  double leftover;                 // mass this context hands to the lower order
  std::vector<std::string> seen;   // followers with explicit probabilities
};

// Sets log10 backoff weights so that every pending context's distribution
// sums to one.  The model must already hold every order <= |context|+1.
void FillBackoffWeights(NGramModel &model, std::vector<PendingBackoff> &pending,
                        const std::vector<std::string> &predicted) {
  for (PendingBackoff &p : pending) {
    std::span<const std::string> lower_ctx =
        std::span<const std::string>(p.context).subspan(1);
    double seen_lower = 0.0;
    for (const std::string &w : p.seen)
      seen_lower += std::pow(10.0, model.LogProb(lower_ctx, w));
    double denom = 1.0 - seen_lower;
    if (denom < 1e-4) {
      // Cancellation is severe here; add up the unseen words directly.
      std::set<std::string_view> seen(p.seen.begin(), p.seen.end());
      denom = 0.0;
      for (const std::string &w : predicted)
        if (!seen.contains(w))
          denom += std::pow(10.0, model.LogProb(lower_ctx, w));
    }
    if (!(denom > 0.0))
      throw Error(ErrorKind::kInternal,
                  "no lower-order mass left for a backoff context");
    NGramEntry *entry = model.FindMutable(p.context);
    if (!entry)
      throw Error(ErrorKind::kInternal, "backoff context missing from model");
    entry->log10_backoff = std::log10(p.leftover / denom);
  }
}

NGramModel EstimateWittenBell(const NGramCounts &counts) {
  NGramModel model(counts.order(), SmoothingName(Smoothing::kWittenBell));

  const NGramCounts::Table &uni = counts.table(1);
  double total = 0.0;
  for (const auto &[ngram, c] : uni) total += static_cast<double>(c);
  const double types = static_cast<double>(uni.size());
  std::uint64_t unk_count = 0;
  for (const auto &[ngram, c] : uni) {
    if (ngram.front() == kUnknownWord) {
      unk_count = c;
      continue;
    }
    model.Set(ngram, {std::log10(static_cast<double>(c) / (total + types)), {}});
  }
  // The unseen mass T/(N+T) is shared evenly by <unk> and any words of a
  // fixed vocabulary that never occurred, so the model covers that whole
  // vocabulary and mixes cleanly with others built on it.
  std::vector<std::string> unseen;
  if (counts.vocabulary()) {
    for (const std::string &w : *counts.vocabulary()) {
      if (w == kSentenceStart || w == kSentenceEnd || w == kUnknownWord)
        continue;
      if (!uni.contains(std::span<const std::string>(&w, 1)))
        unseen.push_back(w);
    }
  }
  const double share =
      types / (total + types) / static_cast<double>(unseen.size() + 1);
  for (const std::string &w : unseen) model.Set({w}, {std::log10(share), {}});
  model.Set({std::string(kUnknownWord)},
            {std::log10(static_cast<double>(unk_count) / (total + types) +
                        share),
             {}});
  model.Set({std::string(kSentenceStart)}, {kStartLogProb, {}});

  const std::vector<std::string> predicted = model.PredictedVocabulary();

  for (int n = 2; n <= counts.order(); ++n) {
    const NGramCounts::Table &table = counts.table(n);
    std::vector<PendingBackoff> pending;
    auto it = table.begin();
    while (it != table.end()) {
      // Entries sharing a context are adjacent in lexicographic order.
      std::span<const std::string> ctx(it->first.data(), n - 1);
      auto group_end = it;
      double ctx_total = 0.0;
      std::size_t followers = 0;
      while (group_end != table.end() &&
             std::equal(ctx.begin(), ctx.end(), group_end->first.begin())) {
        ctx_total += static_cast<double>(group_end->second);
        ++followers;
        ++group_end;
      }
      const bool closed = followers >= predicted.size();
      const double denom = closed ? ctx_total : ctx_total + followers;
      PendingBackoff p;
      if (!closed) {
        p.context.assign(ctx.begin(), ctx.end());
        p.leftover = static_cast<double>(followers) / denom;
      }
      for (auto e = it; e != group_end; ++e) {
        model.Set(e->first,
                  {std::log10(static_cast<double>(e->second) / denom), {}});
        if (!closed) p.seen.push_back(e->first.back());
      }
      if (!closed) pending.push_back(std::move(p));
      it = group_end;
    }
    FillBackoffWeights(model, pending, predicted);
  }
  return model;
}

}  // namespace

NGramModel Estimate(const NGramCounts &counts, Smoothing smoothing) {
  if (counts.empty())
    throw Error(ErrorKind::kArgument, "cannot estimate a model from no counts");
  switch (smoothing) {
    case Smoothing::kWittenBell: return EstimateWittenBell(counts);
  }
  throw Error(ErrorKind::kArgument, "unknown smoothing method");
}

// ------------------------------------------------------------ InterpolatedLm

InterpolatedLm::InterpolatedLm(
    std::vector<std::shared_ptr<const LanguageModel>> components,
    std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty())
    throw Error(ErrorKind::kArgument, "interpolation needs at least one model");
  if (components_.size() != weights_.size())
    throw Error(ErrorKind::kArgument,
                std::to_string(components_.size()) + " models but " +
                    std::to_string(weights_.size()) + " weights");
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0)
      throw Error(ErrorKind::kValue, "interpolation weights must be >= 0");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw Error(ErrorKind::kValue, "interpolation weights sum to " +
                                       std::to_string(sum) + ", not 1");
  for (const auto &c : components_) {
    if (!c) throw Error(ErrorKind::kArgument, "null interpolation component");
    order_ = std::max(order_, c->order());
  }
}

double InterpolatedLm::LogProb(std::span<const std::string> context,
                               std::string_view word) const {
  std::vector<double> terms;
  terms.reserve(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    terms.push_back(std::log10(weights_[i]) +
                    components_[i]->LogProb(context, word));
  }
  return LogSumExp10(terms);
}

bool InterpolatedLm::InVocab(std::string_view word) const {
  return std::any_of(components_.begin(), components_.end(),
                     [&](const auto &c) { return c->InVocab(word); });
}

// ---------------------------------------------------------------- perplexity

void PerplexityAccumulator::Add(std::span<const std::string> sentence) {
  std::vector<std::string> context{std::string(kSentenceStart)};
  auto score = [&](std::string_view word) {
    double lp = model_.LogProb(context, word);
    if (std::isinf(lp)) {
      ++acc_.skipped;
    } else {
      acc_.log10_prob += lp;
      ++acc_.events;
    }
  };
  for (const std::string &w : sentence) {
    if (!model_.InVocab(w)) ++acc_.oov;
    score(w);
    context.push_back(w);
  }
  score(kSentenceEnd);
  acc_.words += sentence.size();
  ++acc_.sentences;
}

PerplexityResult PerplexityAccumulator::Result() const {
  if (acc_.events == 0)
    throw Error(ErrorKind::kArgument, "perplexity of empty text is undefined");
  PerplexityResult r = acc_;
  r.perplexity = std::pow(10.0, -r.log10_prob / static_cast<double>(r.events));
  return r;
}

PerplexityResult Perplexity(const LanguageModel &model,
                            std::span<const Sentence> text) {
  PerplexityAccumulator acc(model);
  for (const Sentence &s : text) acc.Add(s);
  return acc.Result();
}

// ----------------------------------------------------------------------- EM

EmResult TuneWeightsEm(std::span<const LanguageModel *const> components,
                       std::span<const Sentence> heldout,
                       const EmOptions &options) {
  const std::size_t k = components.size();
  if (k < 2)
    throw Error(ErrorKind::kArgument, "EM tuning needs at least two models");
  if (heldout.empty())
    throw Error(ErrorKind::kArgument, "EM tuning needs held-out text");
  if (options.max_iters < 0)
    throw Error(ErrorKind::kArgument, "max_iters must be >= 0");

  // probs[e * k + i] = p_i(event e), probability domain.
  std::vector<double> probs;
  for (const Sentence &s : heldout) {
    std::vector<std::string> context{std::string(kSentenceStart)};
    auto add_event = [&](std::string_view word) {
      for (const LanguageModel *m : components)
        probs.push_back(std::pow(10.0, m->LogProb(context, word)));
    };
    for (const std::string &w : s) {
      add_event(w);
      context.push_back(w);
    }
    add_event(kSentenceEnd);
  }
  const std::size_t events = probs.size() / k;

  for (std::size_t i = 0; i < k; ++i) {
    bool any = false;
    for (std::size_t e = 0; e < events && !any; ++e) any = probs[e * k + i] > 0.0;
    if (!any)
      throw Error(ErrorKind::kDegenerate,
                  "component " + std::to_string(i) +
                      " assigns zero probability to every held-out event");
  }

  std::vector<double> w = options.initial_weights;
  if (w.empty()) w.assign(k, 1.0 / static_cast<double>(k));
  if (w.size() != k)
    throw Error(ErrorKind::kArgument, "initial weight count does not match");
  double wsum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw Error(ErrorKind::kValue, "negative initial weight");
    wsum += x;
  }
  if (!(wsum > 0.0)) throw Error(ErrorKind::kValue, "initial weights are all 0");
  for (double &x : w) x /= wsum;

  auto log_likelihood = [&](const std::vector<double> &weights) {
    double ll = 0.0;
    for (std::size_t e = 0; e < events; ++e) {
      double mix = 0.0;
      for (std::size_t i = 0; i < k; ++i) mix += weights[i] * probs[e * k + i];
      if (!(mix > 0.0))
        throw Error(ErrorKind::kDegenerate,
                    "held-out event " + std::to_string(e) +
                        " has zero probability under the mixture");
      ll += std::log10(mix);
    }
    return ll;
  };

  EmResult result;
  result.log_likelihoods.push_back(log_likelihood(w));
  std::vector<double> next(k);
  for (int iter = 0; iter < options.max_iters; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t e = 0; e < events; ++e) {
      double mix = 0.0;
      for (std::size_t i = 0; i < k; ++i) mix += w[i] * probs[e * k + i];
      for (std::size_t i = 0; i < k; ++i)
        next[i] += w[i] * probs[e * k + i] / mix;
    }
    double total = std::accumulate(next.begin(), next.end(), 0.0);
    for (double &x : next) x /= total;
    w = next;
    double ll = log_likelihood(w);
    double prev = result.log_likelihoods.back();
    if (ll < prev - 1e-9 * std::max(1.0, std::fabs(prev)))
      throw Error(ErrorKind::kInternal, "EM decreased held-out likelihood");
    result.log_likelihoods.push_back(ll);
    result.iterations = iter + 1;
    if (ll - prev < options.tol) break;
  }
  result.weights = w;
  return result;
}

}  // namespace asreval
