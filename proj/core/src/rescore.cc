// core/src/rescore.cc

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

#include "asreval/rescore.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "asreval/error.h"
#include "asreval/strings.h"

namespace asreval {

void RescoreConfig::Validate() const {
  if (!std::isfinite(lm_weight) || lm_weight < 0.0)
    throw Error(ErrorKind::kValue, "lm weight must be finite and >= 0");
  if (!std::isfinite(word_insertion_penalty))
    throw Error(ErrorKind::kValue, "insertion penalty must be finite");
  double sum = 0.0;
  for (const auto &[name, w] : nn_mix) {
    if (!std::isfinite(w) || w < 0.0 || w > 1.0)
      throw Error(ErrorKind::kValue,
                  "mixture weight for '" + name + "' must lie in [0,1]");
    sum += w;
  }
  if (sum > 1.0 + 1e-12)
    throw Error(ErrorKind::kValue, "neural LM mixture weights sum above 1");
}

double MixedLmScore(const NBestEntry &entry, const RescoreConfig &cfg) {
  const double ngram = cfg.ngram_model
                           ? cfg.ngram_model->SentenceLogProb(entry.words)
                           : entry.lm_score;
  double used = 0.0;
  std::vector<double> terms;
  double loglinear = 0.0;
  for (const auto &[name, w] : cfg.nn_mix) {
    auto it = entry.extra_lm_scores.find(name);
    if (it == entry.extra_lm_scores.end())
      throw Error(ErrorKind::kJoin, "no '" + name + "' score for (" +
                                        entry.utterance_id + ", " +
                                        std::to_string(entry.rank) + ")");
    used += w;
    loglinear += w * it->second;
    if (w > 0.0) terms.push_back(std::log10(w) + it->second);
  }
  const double rest = 1.0 - used;
  if (cfg.mix_mode == LmMixMode::kLogLinear)
    return loglinear + std::max(rest, 0.0) * ngram;
  if (rest > 0.0) terms.push_back(std::log10(rest) + ngram);

  double best = -std::numeric_limits<double>::infinity();
  for (double t : terms) best = std::max(best, t);
  if (std::isinf(best)) return best;
  double sum = 0.0;
  for (double t : terms) sum += std::pow(10.0, t - best);
  return best + std::log10(sum);
}

double TotalScore(const NBestEntry &entry, const RescoreConfig &cfg) {
  return entry.am_score + cfg.lm_weight * MixedLmScore(entry, cfg) +
         cfg.word_insertion_penalty * static_cast<double>(entry.words.size());
}

const ScoredEntry &RerankResult::Best(const std::string &utterance) const {
  auto it = lists.find(utterance);
  if (it == lists.end() || it->second.empty())
    throw Error(ErrorKind::kArgument, "no list for utterance " + utterance);
  return it->second.front();
}

namespace {

std::vector<ScoredEntry> RerankOne(const std::vector<NBestEntry> &entries,
                                   const RescoreConfig &cfg) {
  std::vector<ScoredEntry> scored;
  scored.reserve(entries.size());
  for (const NBestEntry &e : entries) {
    ScoredEntry s;
    s.entry = e;
    s.lm_mix = MixedLmScore(e, cfg);
    s.total = e.am_score + cfg.lm_weight * s.lm_mix +
              cfg.word_insertion_penalty * static_cast<double>(e.words.size());
    scored.push_back(std::move(s));
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredEntry &a, const ScoredEntry &b) {
                     if (a.total != b.total) return a.total > b.total;
                     return a.entry.rank < b.entry.rank;
                   });
  return scored;
}

}  // namespace

RerankResult Rerank(const NBestLists &nbest, const RescoreConfig &cfg,
                    unsigned jobs) {
  cfg.Validate();
  std::vector<const std::pair<const std::string, std::vector<NBestEntry>> *>
      items;
  for (const auto &kv : nbest) {
    if (kv.second.empty())
      throw Error(ErrorKind::kArgument, "empty n-best list for " + kv.first);
    items.push_back(&kv);
  }
  std::vector<std::vector<ScoredEntry>> out(items.size());
  const std::size_t workers =
      std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(items.size(), 1));
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < items.size(); i += workers)
      out[i] = RerankOne(items[i]->second, cfg);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w)
      threads.emplace_back([&, w] {
        try {
          run(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (std::thread &t : threads) t.join();
    for (const std::exception_ptr &e : errors)
      if (e) std::rethrow_exception(e);
  }
  RerankResult result;
  for (std::size_t i = 0; i < items.size(); ++i)
    result.lists.emplace(items[i]->first, std::move(out[i]));
  return result;
}

NBestLists MergeNBest(const NBestLists &a, const NBestLists &b,
                      MergeNormalization normalization) {
  auto best_am = [](const std::vector<NBestEntry> &entries) {
    double best = -std::numeric_limits<double>::infinity();
    for (const NBestEntry &e : entries) best = std::max(best, e.am_score);
    return std::isinf(best) ? 0.0 : best;
  };

  std::vector<std::string> utterances;
  for (const auto &kv : a) utterances.push_back(kv.first);
  for (const auto &kv : b)
    if (!a.contains(kv.first)) utterances.push_back(kv.first);

  NBestLists merged;
  static const std::vector<NBestEntry> kEmpty;
  for (const std::string &utt : utterances) {
    auto ia = a.find(utt);
    auto ib = b.find(utt);
    const std::vector<NBestEntry> &la = ia == a.end() ? kEmpty : ia->second;
    const std::vector<NBestEntry> &lb = ib == b.end() ? kEmpty : ib->second;

    std::vector<NBestEntry> pool;
    std::map<std::vector<std::string>, std::size_t> by_words;
    auto absorb = [&](const std::vector<NBestEntry> &list, double shift) {
      for (const NBestEntry &src : list) {
        NBestEntry e = src;
        e.am_score -= shift;
        auto [it, inserted] = by_words.emplace(e.words, pool.size());
        if (inserted) {
          pool.push_back(std::move(e));
        } else {
          NBestEntry &kept = pool[it->second];
          if (e.am_score + e.lm_score > kept.am_score + kept.lm_score)
            kept = std::move(e);
        }
      }
    };
    const bool shift = normalization == MergeNormalization::kPerUtteranceShift;
    absorb(la, shift ? best_am(la) : 0.0);
    absorb(lb, shift ? best_am(lb) : 0.0);

    std::stable_sort(pool.begin(), pool.end(),
                     [](const NBestEntry &x, const NBestEntry &y) {
                       return x.am_score + x.lm_score > y.am_score + y.lm_score;
                     });
    for (std::size_t i = 0; i < pool.size(); ++i) {
      pool[i].rank = static_cast<int>(i + 1);
      pool[i].utterance_id = utt;
    }
    merged.emplace(utt, std::move(pool));
  }
  return merged;
}

void WriteOneBest(std::ostream &out, const RerankResult &result) {
  for (const auto &[utt, list] : result.lists)
    out << utt << '\t' << Join(list.front().entry.words) << '\n';
}

void WriteReranked(std::ostream &out, const RerankResult &result) {
  for (const auto &[utt, list] : result.lists)
    for (std::size_t i = 0; i < list.size(); ++i) {
      const NBestEntry &e = list[i].entry;
      out << utt << ' ' << (i + 1) << ' ' << FormatDouble(e.am_score) << ' '
          << FormatDouble(e.lm_score);
      for (const std::string &w : e.words) out << ' ' << w;
      out << '\n';
    }
}

}  // namespace asreval
