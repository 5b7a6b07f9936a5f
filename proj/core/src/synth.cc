// core/src/synth.cc

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

#include "asreval/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "asreval/atomic_file.h"
#include "asreval/error.h"
#include "asreval/textnorm.h"

namespace asreval {

double SynthRng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t SynthRng::Range(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return lo + engine_();  // full 64-bit range
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
  std::uint64_t x;
  do x = engine_();
  while (x >= limit);
  return lo + x % span;
}

void SynthConfig::Validate() const {
  auto rate = [](double r, const char *what) {
    if (!(r >= 0.0 && r <= 1.0))
      throw Error(ErrorKind::kValue, std::string(what) + " must lie in [0,1]");
  };
  rate(corrupt_fraction, "corrupt fraction");
  rate(clean_caption_error, "clean caption error rate");
  rate(corrupt_caption_error, "corrupt caption error rate");
  rate(clean_system_error, "clean system error rate");
  rate(corrupt_system_error, "corrupt system error rate");
  rate(hesitation_rate, "hesitation rate");
  if (shows == 0 || segments_per_show == 0)
    throw Error(ErrorKind::kValue, "need at least one show and one segment");
  if (min_words == 0 || min_words > max_words)
    throw Error(ErrorKind::kValue, "segment length bounds are inconsistent");
  if (vocab_size < 2) throw Error(ErrorKind::kValue, "vocabulary too small");
  if (speakers_per_show == 0) throw Error(ErrorKind::kValue, "no speakers");
  if (systems < 2) throw Error(ErrorKind::kValue, "need at least two systems");
}

namespace {

constexpr double kWordPitch = 0.32;   // seconds per true word
constexpr double kSegmentPad = 0.1;
constexpr double kSegmentGap = 0.25;

double RoundTo(double x, double unit) { return std::round(x / unit) * unit; }

class WordSampler {
 public:
  explicit WordSampler(std::size_t vocab_size) {
    words_.reserve(vocab_size);
    cumulative_.reserve(vocab_size);
    double total = 0.0;
    for (std::size_t i = 0; i < vocab_size; ++i) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "w%04zu", i);
      words_.emplace_back(buf);
      total += 1.0 / static_cast<double>(i + 1);  // Zipf-like
      cumulative_.push_back(total);
    }
    for (double &c : cumulative_) c /= total;
  }

  const std::string &Draw(SynthRng &rng) const {
    double u = rng.Uniform();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t i = std::min<std::size_t>(it - cumulative_.begin(),
                                          words_.size() - 1);
    return words_[i];
  }

  const std::string &DrawOther(SynthRng &rng, const std::string &avoid) const {
    for (;;) {
      const std::string &w = words_[rng.Range(0, words_.size() - 1)];
      if (w != avoid) return w;
    }
  }

 private:
  std::vector<std::string> words_;
  std::vector<double> cumulative_;
};

struct Corrupted {
  std::vector<std::string> words;
  std::vector<bool> wrong;
};

Corrupted Corrupt(const std::vector<std::string> &truth, double error_rate,
                  const WordSampler &sampler, SynthRng &rng) {
  Corrupted out;
  for (const std::string &w : truth) {
    if (rng.Uniform() >= error_rate) {
      out.words.push_back(w);
      out.wrong.push_back(false);
      continue;
    }
    double kind = rng.Uniform();
    if (kind < 0.6) {
      out.words.push_back(sampler.DrawOther(rng, w));
      out.wrong.push_back(true);
    } else if (kind < 0.8) {
      // deletion
    } else {
      out.words.push_back(w);
      out.wrong.push_back(false);
      out.words.push_back(sampler.Draw(rng));
      out.wrong.push_back(true);
    }
  }
  return out;
}

}  // namespace

SynthCorpus GenerateSynthCorpus(const SynthConfig &config) {
  config.Validate();
  SynthRng rng(config.seed);
  WordSampler sampler(config.vocab_size);
  SynthCorpus corpus;
  for (std::size_t s = 1; s <= config.systems; ++s)
    corpus.systems["sys" + std::to_string(s)];

  for (std::size_t show = 0; show < config.shows; ++show) {
    char rec[32];
    std::snprintf(rec, sizeof(rec), "show%02zu", show + 1);
    double t = 0.5;
    for (std::size_t seg = 0; seg < config.segments_per_show; ++seg) {
      const std::size_t n = rng.Range(config.min_words, config.max_words);
      std::vector<std::string> spoken;  // what the audio contains
      std::vector<std::string> truth;   // the reference, with hesitations
      for (std::size_t i = 0; i < n; ++i) {
        if (config.hesitation_rate > 0.0 && rng.Uniform() < config.hesitation_rate)
          truth.emplace_back(kHesitation);
        const std::string &w = sampler.Draw(rng);
        spoken.push_back(w);
        truth.push_back(w);
      }
      const bool bad = rng.Uniform() < config.corrupt_fraction;

      StmSegment ref;
      ref.recording_id = rec;
      ref.channel = "1";
      ref.speaker_id = std::string(rec) + "_spk" +
                       std::to_string(rng.Range(1, config.speakers_per_show));
      ref.tbeg = RoundTo(t, 0.01);
      ref.tend = RoundTo(t + static_cast<double>(n) * kWordPitch + kSegmentPad,
                         0.01);
      ref.tokens = truth;

      StmSegment cap = ref;
      cap.tokens = Corrupt(truth, bad ? config.corrupt_caption_error
                                      : config.clean_caption_error,
                           sampler, rng)
                       .words;

      const double span = ref.tend - ref.tbeg;
      for (auto &[name, ctm] : corpus.systems) {
        Corrupted hyp = Corrupt(spoken, bad ? config.corrupt_system_error
                                            : config.clean_system_error,
                                sampler, rng);
        const std::size_t m = hyp.words.size();
        for (std::size_t j = 0; j < m; ++j) {
          const double slot = span / static_cast<double>(m);
          CtmEntry e;
          e.recording_id = rec;
          e.channel = "1";
          e.tbeg = RoundTo(ref.tbeg + (static_cast<double>(j) + 0.05) * slot,
                           0.001);
          e.tdur = RoundTo(0.9 * slot, 0.001);
          e.word = hyp.words[j];
          // Decodes of mismatched audio are uniformly less sure of
          // themselves; wrong words are least sure.
          double u = rng.Uniform();
          double conf = hyp.wrong[j] ? 0.2 + 0.4 * u
                        : bad        ? 0.5 + 0.45 * u
                                     : 0.9 + 0.1 * u;
          e.confidence = RoundTo(conf, 0.001);
          ctm.push_back(std::move(e));
        }
      }

      corpus.truth.push_back(std::move(ref));
      corpus.captions.push_back(std::move(cap));
      corpus.corrupted.push_back(bad);
      t = corpus.truth.back().tend + kSegmentGap;
    }
  }
  return corpus;
}

void WriteSynthCorpus(const SynthCorpus &corpus,
                      const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorKind::kIo, "cannot create " + dir.string() + ": " +
                                    ec.message());
  WriteFileAtomically(dir / "truth.stm", [&](std::ostream &out) {
    WriteStm(out, corpus.truth);
  });
  WriteFileAtomically(dir / "captions.stm", [&](std::ostream &out) {
    WriteStm(out, corpus.captions);
  });
  for (const auto &[name, ctm] : corpus.systems)
    WriteFileAtomically(dir / (name + ".ctm"),
                        [&](std::ostream &out) { WriteCtm(out, ctm); });
  WriteFileAtomically(dir / "labels.tsv", [&](std::ostream &out) {
    for (std::size_t k = 0; k < corpus.truth.size(); ++k)
      out << SegmentId(corpus.truth[k]) << '\t'
          << (corpus.corrupted[k] ? 1 : 0) << '\n';
  });
}

}  // namespace asreval
