// asreval/synth.h

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

// Seeded synthetic broadcast corpus: true transcripts, closed captions
// that are corrupted for a known subset of segments, and several
// independent "decodes" with word confidences.  Output depends only on
// the config (the RNG plumbing avoids std:: distributions, whose results
// differ between standard libraries).

#ifndef ASREVAL_SYNTH_H_
#define ASREVAL_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "asreval/corpus_io.h"

namespace asreval {

struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t shows = 12;
  std::size_t segments_per_show = 210;
  std::size_t min_words = 8;
  std::size_t max_words = 24;
  std::size_t vocab_size = 2000;
  std::size_t speakers_per_show = 20;
  std::size_t systems = 3;
  double corrupt_fraction = 0.3;
  double clean_caption_error = 0.01;
  double corrupt_caption_error = 0.4;
  double clean_system_error = 0.01;
  double corrupt_system_error = 0.2;
  /// Chance of a %hesitation before each true word; decodes never
  /// contain hesitations, captions keep them.
  double hesitation_rate = 0.0;

  void Validate() const;
};

struct SynthCorpus {
  std::vector<StmSegment> truth;
  std::vector<StmSegment> captions;                        // same timing
  std::map<std::string, std::vector<CtmEntry>> systems;    // "sys1", ...
  std::vector<bool> corrupted;                             // per segment
};

SynthCorpus GenerateSynthCorpus(const SynthConfig &config);

/// Writes truth.stm, captions.stm, sys<k>.ctm and labels.tsv
/// (segment_id<TAB>corrupted 0/1) under `dir`, creating it if needed.
void WriteSynthCorpus(const SynthCorpus &corpus,
                      const std::filesystem::path &dir);

/// Portable helpers over a 64-bit Mersenne twister.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1).
  double Uniform();
  /// Uniform integer in [lo, hi].
  std::uint64_t Range(std::uint64_t lo, std::uint64_t hi);
  std::mt19937_64 &engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace asreval

#endif  // ASREVAL_SYNTH_H_
