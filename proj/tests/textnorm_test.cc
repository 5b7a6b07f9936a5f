// tests/textnorm_test.cc

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
#include "asreval/textnorm.h"
#include "doctest.h"

namespace asreval {

namespace {

using Words = std::vector<std::string>;

Words Norm(const Words &w, const NormRules &r = {}) { return NormalizeWords(w, r); }

// Tokens drawn from a pool that exercises every rule.
std::string RandomToken(std::mt19937_64 &rng) {
  static const char *const kPieces[] = {
      "the", "A", "cat", "Don't", "x-ray", "uh", "UM", "%hesitation",
      "%HESITATION", "<noise>", "<b>", "-", "'", "\"", ".", ",", "?", "(",
      ")", "<", ">", "ca-", "--", "a'", "'b"};
  constexpr std::size_t n = sizeof(kPieces) / sizeof(kPieces[0]);
  std::string t;
  const int parts = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < parts; ++i) t += kPieces[rng() % n];
  return t;
}

NormRules RandomRules(std::mt19937_64 &rng) {
  NormRules r;
  r.remove_non_speech = rng() & 1;
  r.remove_partial_words = rng() & 1;
  r.strip_punctuation = rng() & 1;
  r.case_fold = rng() & 1;
  switch (rng() % 3) {
    case 0: break;
    case 1: r.optional_hesitation = true; break;
    case 2: r.drop_hesitations = true; break;
  }
  if (rng() & 1) r.hesitation_lexicon.insert("uh");
  if (rng() & 1) r.hesitation_lexicon.insert("um");
  return r;
}

}  // namespace

TEST_SUITE("textnorm") {

TEST_CASE("default rules") {
  CHECK(Norm({"<breath>", "Hello,", "wor-", "WORLD.", "don't", "x-ray"}) ==
        Words{"hello", "world", "don't", "x-ray"});
  CHECK(Norm({"%HESITATION", "a"}) == Words{"%hesitation", "a"});
  CHECK(Norm({"...", "a"}) == Words{"a"});
}

TEST_CASE("all rules off is the identity") {
  Words in{"<noise>", "Cat-", "Hi!", "%hesitation", "UH"};
  CHECK(Norm(in, NormRules::None()) == in);
}

TEST_CASE("hesitation handling") {
  NormRules r;
  r.hesitation_lexicon.insert("uh");
  auto t = Normalize(Words{"uh", "UH,", "cat"}, r);
  REQUIRE(t.size() == 3);
  CHECK(t[0].text == "%hesitation");
  CHECK(t[0].hesitation);
  CHECK_FALSE(t[0].optional);
  CHECK(t[1].text == "%hesitation");
  CHECK_FALSE(t[2].hesitation);

  r.optional_hesitation = true;
  t = Normalize(Words{"uh", "cat"}, r);
  CHECK(t[0].optional);
  CHECK_FALSE(t[1].optional);

  r.optional_hesitation = false;
  r.drop_hesitations = true;
  CHECK(Norm({"uh", "%hesitation", "cat"}, r) == Words{"cat"});

  // Spelling variants are not mapped unless the lexicon says so.
  CHECK(Norm({"um"}) == Words{"um"});
}

TEST_CASE("rule configuration") {
  NormRules r;
  r.Apply("case-fold", "false");
  CHECK_FALSE(r.case_fold);
  r.Apply("hesitation-words", "uh,um");
  CHECK(r.hesitation_lexicon.count("um") == 1);
  r.Apply("optional-hesitation", "1");
  CHECK(r.optional_hesitation);
  CHECK_THROWS_AS(r.Apply("no-such-rule", "1"), Error);
  CHECK_THROWS_AS(r.Apply("case-fold", "maybe"), Error);
  r.drop_hesitations = true;
  CHECK_THROWS_AS(r.Validate(), Error);
  CHECK_THROWS_AS(Normalize(Words{"a"}, r), Error);
}

TEST_CASE("normalization is idempotent and never grows the text") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3000; ++trial) {
    NormRules r = RandomRules(rng);
    Words in;
    const int len = static_cast<int>(rng() % 12);
    for (int i = 0; i < len; ++i) in.push_back(RandomToken(rng));
    Words once = Norm(in, r);
    Words twice = Norm(once, r);
    std::string shown;
    for (const std::string &w : in) shown += w + " ";
    INFO("input: " << shown);
    CHECK(once == twice);
    CHECK(once.size() <= in.size());
    CHECK(Norm(in, NormRules::None()) == in);
  }
}

TEST_CASE("line streaming") {
  std::istringstream in("Hello World\n\n<noise>\nA b.\n");
  auto lines = NormalizeCorpus(in, NormRules{});
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == Words{"hello", "world"});
  CHECK(lines[1] == Words{"a", "b"});
}

}  // TEST_SUITE

}  // namespace asreval
