// core/src/textnorm.cc

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

#include "asreval/textnorm.h"

#include "asreval/error.h"
#include "asreval/strings.h"

namespace asreval {

namespace {

bool IsPunct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
         (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char &c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

// Internal apostrophes and hyphens survive because only the ends are cut.
std::string_view StripPunct(std::string_view s) {
  while (!s.empty() && IsPunct(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsPunct(s.back())) s.remove_suffix(1);
  return s;
}

bool IsPartialWord(std::string_view s) {
  while (!s.empty() && s.back() != '-' && IsPunct(s.back())) s.remove_suffix(1);
  return !s.empty() && s.back() == '-';
}

bool IsNonSpeech(std::string_view s) {
  return s.size() >= 2 && s.front() == '<' && s.back() == '>';
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on")
    return true;
  if (value == "0" || value == "false" || value == "no" || value == "off")
    return false;
  throw Error(ErrorKind::kValue, "'" + std::string(value) +
                                     "' is not a boolean for " +
                                     std::string(key));
}

}  // namespace

NormRules NormRules::None() {
  NormRules r;
  r.remove_non_speech = false;
  r.remove_partial_words = false;
  r.strip_punctuation = false;
  r.optional_hesitation = false;
  r.drop_hesitations = false;
  r.case_fold = false;
  return r;
}

void NormRules::Validate() const {
  if (optional_hesitation && drop_hesitations)
    throw Error(ErrorKind::kValue,
                "optional-hesitation and drop-hesitations are exclusive");
}

void NormRules::Apply(std::string_view key, std::string_view value) {
  if (key == "remove-non-speech") {
    remove_non_speech = ParseBool(key, value);
  } else if (key == "remove-partial-words") {
    remove_partial_words = ParseBool(key, value);
  } else if (key == "strip-punctuation") {
    strip_punctuation = ParseBool(key, value);
  } else if (key == "optional-hesitation") {
    optional_hesitation = ParseBool(key, value);
  } else if (key == "drop-hesitations") {
    drop_hesitations = ParseBool(key, value);
  } else if (key == "case-fold") {
    case_fold = ParseBool(key, value);
  } else if (key == "hesitation-words") {
    for (std::string_view w : SplitOn(value, ','))
      if (!w.empty()) hesitation_lexicon.emplace(w);
  } else {
    throw Error(ErrorKind::kArgument,
                "unknown normalization rule '" + std::string(key) + "'");
  }
}

std::vector<NormToken> Normalize(std::span<const std::string> tokens,
                                 const NormRules &rules) {
  rules.Validate();
  std::vector<NormToken> out;
  out.reserve(tokens.size());
  for (const std::string &raw : tokens) {
    if (rules.remove_non_speech && IsNonSpeech(raw)) continue;
    std::string s = rules.case_fold ? AsciiLower(raw) : raw;

    bool hesitation = s == kHesitation || rules.hesitation_lexicon.contains(s);
    if (!hesitation && rules.strip_punctuation)
      hesitation = rules.hesitation_lexicon.contains(StripPunct(s));
    if (hesitation) {
      if (rules.drop_hesitations) continue;
      out.push_back({std::string(kHesitation), true, rules.optional_hesitation});
      continue;
    }

    if (rules.remove_partial_words && IsPartialWord(s)) continue;
    if (rules.strip_punctuation) {
      std::string_view core = StripPunct(s);
      if (core.empty()) continue;
      s = std::string(core);
    }
    out.push_back({std::move(s), false, false});
  }
  return out;
}

std::vector<std::string> NormalizeWords(std::span<const std::string> tokens,
                                        const NormRules &rules) {
  std::vector<std::string> words;
  for (NormToken &t : Normalize(tokens, rules)) words.push_back(std::move(t.text));
  return words;
}

void ForEachNormalizedLine(
    std::istream &in, const NormRules &rules,
    const std::function<void(std::vector<std::string> &&)> &sink) {
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> raw;
    for (std::string_view f : SplitWhitespace(line)) raw.emplace_back(f);
    std::vector<std::string> words = NormalizeWords(raw, rules);
    if (!words.empty()) sink(std::move(words));
  }
  if (in.bad()) throw Error(ErrorKind::kIo, "read failure");
}

std::vector<std::vector<std::string>> NormalizeCorpus(std::istream &in,
                                                      const NormRules &rules) {
  std::vector<std::vector<std::string>> lines;
  ForEachNormalizedLine(in, rules, [&](std::vector<std::string> &&words) {
    lines.push_back(std::move(words));
  });
  return lines;
}

}  // namespace asreval
