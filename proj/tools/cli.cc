// tools/cli.cc

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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "asreval/aligner.h"
#include "asreval/atomic_file.h"
#include "asreval/corpus_io.h"
#include "asreval/data_select.h"
#include "asreval/error.h"
#include "asreval/ngram_lm.h"
#include "asreval/rescore.h"
#include "asreval/scorer.h"
#include "asreval/strings.h"
#include "asreval/synth.h"
#include "asreval/textnorm.h"

namespace asreval {
namespace cli {

namespace fs = std::filesystem;

std::vector<std::string> ReadConfigArgs(const std::string &path) {
  std::ifstream in = OpenInput(path);
  std::vector<std::string> args;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos)
      s = s.substr(0, hash);
    auto trim = [](std::string_view v) {
      while (!v.empty() && IsAsciiSpace(v.front())) v.remove_prefix(1);
      while (!v.empty() && IsAsciiSpace(v.back())) v.remove_suffix(1);
      return v;
    };
    s = trim(s);
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::kParse, path + ": expected key=value", lineno);
    std::string_view key = trim(s.substr(0, eq));
    std::string_view value = trim(s.substr(eq + 1));
    if (key.empty())
      throw Error(ErrorKind::kParse, path + ": empty key", lineno);
    if (key == "config")
      throw Error(ErrorKind::kParse, path + ": config files do not nest",
                  lineno);
    args.push_back("--" + std::string(key) + "=" + std::string(value));
  }
  return args;
}

namespace {

// ------------------------------------------------------------------ helpers

unsigned DefaultJobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Writes through `writer` to `path`, or to `out` when path is empty or "-".
void Emit(const std::string &path, std::ostream &out,
          const std::function<void(std::ostream &)> &writer) {
  if (path.empty() || path == "-") {
    writer(out);
    out.flush();
  } else {
    WriteFileAtomically(path, writer);
  }
}

template <class T, class Parser>
T ReadFile(const std::string &path, Parser parse) {
  std::ifstream in = OpenInput(path);
  try {
    return parse(in);
  } catch (const Error &e) {
    throw Error(e.kind(), path + ": " + e.message(), e.line());
  }
}

std::vector<Sentence> ReadText(const std::string &path, const NormRules &rules) {
  std::ifstream in = OpenInput(path);
  return NormalizeCorpus(in, rules);
}

/// "name=value" → (name, value).
std::pair<std::string, std::string> SplitAssignment(const std::string &arg,
                                                    const char *what) {
  auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorKind::kArgument,
                std::string(what) + " expects name=value, got '" + arg + "'");
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

double ParseNumber(const std::string &text, const char *what) {
  std::optional<double> v = ParseDouble(text);
  if (!v)
    throw Error(ErrorKind::kValue,
                std::string(what) + ": not a number: '" + text + "'");
  return *v;
}

CLI::Option *Last(CLI::Option *opt) {
  return opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

// Options shared by the commands that normalize text.
struct NormFlags {
  std::vector<std::string> rules;
  bool optional_hesitation = false;
  bool drop_hesitations = false;
  bool raw = false;

  void Register(CLI::App *app, bool default_raw) {
    raw = default_raw;
    app->add_option("--rule", rules,
                    "Normalization rule as key=value (remove-non-speech, "
                    "remove-partial-words, strip-punctuation, case-fold, "
                    "optional-hesitation, drop-hesitations, hesitation-words)");
    Last(app->add_flag("--optional-hesitation", optional_hesitation,
                       "Reference hesitations may be deleted at no cost"));
    Last(app->add_flag("--drop-hesitations", drop_hesitations,
                       "Remove hesitations from both sides"));
    if (default_raw)
      Last(app->add_flag("!--normalize", raw,
                         "Apply the default normalization rules to text"));
    else
      Last(app->add_flag("--raw", raw, "Start from all rules off"));
  }

  NormRules Build() const {
    NormRules r = raw ? NormRules::None() : NormRules{};
    for (const std::string &kv : rules) {
      auto [key, value] = SplitAssignment(kv, "--rule");
      r.Apply(key, value);
    }
    if (optional_hesitation) r.optional_hesitation = true;
    if (drop_hesitations) r.drop_hesitations = true;
    r.Validate();
    return r;
  }
};

struct CostFlags {
  std::string preset = "nist";
  std::optional<std::int64_t> sub, del, ins;

  void Register(CLI::App *app) {
    Last(app->add_option("--costs", preset, "Cost preset: nist (4,3,3) or unit")
             ->check(CLI::IsMember({"nist", "unit"})));
    Last(app->add_option("--sub-cost", sub, "Substitution cost"));
    Last(app->add_option("--del-cost", del, "Deletion cost"));
    Last(app->add_option("--ins-cost", ins, "Insertion cost"));
  }

  AlignCosts Build() const {
    AlignCosts c = preset == "unit" ? AlignCosts::Unit() : AlignCosts::Nist();
    if (sub) c.sub_cost = *sub;
    if (del) c.del_cost = *del;
    if (ins) c.ins_cost = *ins;
    c.Validate();
    return c;
  }
};

// -------------------------------------------------------------- subcommands

struct ScoreArgs {
  std::string stm, ctm, out, confusions, system, test_set;
  std::string format = "text";
  bool ablation = false;
  unsigned jobs = DefaultJobs();
  NormFlags norm;
  CostFlags costs;
};

ScoreOptions MakeScoreOptions(const NormFlags &norm, const CostFlags &costs,
                              unsigned jobs) {
  ScoreOptions opts;
  opts.rules = norm.Build();
  opts.costs = costs.Build();
  opts.jobs = std::max(1u, jobs);
  return opts;
}

void RunScore(const ScoreArgs &a, std::ostream &out, std::ostream &err) {
  const ReportFormat format = ParseReportFormat(a.format);
  ScoreOptions opts = MakeScoreOptions(a.norm, a.costs, a.jobs);
  auto stm = ReadFile<std::vector<StmSegment>>(a.stm, ParseStm);
  auto ctm = ReadFile<std::vector<CtmEntry>>(a.ctm, ParseCtm);

  if (a.ablation) {
    if (opts.rules.drop_hesitations)
      throw Error(ErrorKind::kArgument,
                  "--hesitation-ablation already drops hesitations");
    HesitationAblation ab = RunHesitationAblation(stm, ctm, opts);
    ab.baseline.system = ab.dropped.system = a.system;
    ab.baseline.test_set = a.test_set;
    ab.dropped.test_set = a.test_set.empty() ? "no-hesitations"
                                             : a.test_set + "/no-hesitations";
    Emit(a.out, out, [&](std::ostream &os) {
      if (format == ReportFormat::kJson) {
        os << "[\n";
        WriteReport(os, ab.baseline, format);
        os << ",\n";
        WriteReport(os, ab.dropped, format);
        os << "]\n";
        return;
      }
      WriteReport(os, ab.baseline, format);
      os << '\n';
      WriteReport(os, ab.dropped, format);
      os << "\nHesitation delta (WER points): " << FormatFixed(ab.delta, 2)
         << '\n';
    });
    return;
  }

  ScoreResult result = Score(stm, ctm, opts);
  result.report.system = a.system;
  result.report.test_set = a.test_set;
  if (!result.unassigned.empty())
    err << "warning: " << result.unassigned.size()
        << " hypothesis words fall outside every scorable segment\n";
  Emit(a.out, out,
       [&](std::ostream &os) { WriteReport(os, result.report, format); });
  if (!a.confusions.empty())
    Emit(a.confusions, out,
         [&](std::ostream &os) { WriteConfusions(os, result.confusions); });
}

ConfusionTable ReadConfusions(std::istream &in) {
  ConfusionTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> f = SplitOn(line, '\t');
    std::optional<std::int64_t> n = f.size() == 3 ? ParseInt(f[0]) : std::nullopt;
    if (!n || *n <= 0 || (f[1].empty() && f[2].empty()))
      throw Error(ErrorKind::kParse, "expected count<TAB>ref<TAB>hyp", lineno);
    std::string ref(f[1]), hyp(f[2]);
    if (hyp.empty())
      table.deletions[ref] += *n;
    else if (ref.empty())
      table.insertions[hyp] += *n;
    else
      table.substitutions[{ref, hyp}] += *n;
  }
  return table;
}

struct AnalyzeArgs {
  std::string stm, ctm, confusions, out;
  std::size_t top = 10;
  unsigned jobs = DefaultJobs();
  NormFlags norm;
  CostFlags costs;
};

void RunAnalyze(const AnalyzeArgs &a, std::ostream &out) {
  ConfusionTable table;
  if (!a.confusions.empty()) {
    if (!a.stm.empty() || !a.ctm.empty())
      throw Error(ErrorKind::kArgument,
                  "give either --confusions or --stm/--ctm, not both");
    table = ReadFile<ConfusionTable>(a.confusions, ReadConfusions);
  } else {
    if (a.stm.empty() || a.ctm.empty())
      throw Error(ErrorKind::kArgument,
                  "analyze needs --confusions or both --stm and --ctm");
    auto stm = ReadFile<std::vector<StmSegment>>(a.stm, ParseStm);
    auto ctm = ReadFile<std::vector<CtmEntry>>(a.ctm, ParseCtm);
    table = Score(stm, ctm, MakeScoreOptions(a.norm, a.costs, a.jobs)).confusions;
  }
  TopErrors top = RankTopErrors(table, a.top);
  Emit(a.out, out, [&](std::ostream &os) {
    auto section = [&](const char *title, const std::vector<std::string> &rows) {
      os << title << '\n';
      for (const std::string &r : rows) os << r << '\n';
    };
    section("Substitutions", top.substitutions);
    os << '\n';
    section("Deletions", top.deletions);
    os << '\n';
    section("Insertions", top.insertions);
  });
}

struct CompareArgs {
  std::vector<std::string> reports;
  std::string format = "text", out;
};

WerReport ReadJsonReportFile(const std::string &path) {
  std::ifstream in = OpenInput(path);
  try {
    return ReadJsonReport(in);
  } catch (const Error &e) {
    throw Error(e.kind(), path + ": " + e.message(), e.line());
  }
}

void RunCompare(const CompareArgs &a, std::ostream &out) {
  const ReportFormat format = ParseReportFormat(a.format);
  std::vector<WerReport> reports;
  for (const std::string &p : a.reports) reports.push_back(ReadJsonReportFile(p));
  ComparisonTable table = CompareSystems(reports);
  Emit(a.out, out,
       [&](std::ostream &os) { WriteComparison(os, table, format); });
}

// Mixture files list "path<TAB>weight"; relative paths are taken
// from the mixture file's directory.
struct MixtureFile {
  std::vector<std::string> paths;
  std::vector<double> weights;
};

MixtureFile ReadMixtureFile(const std::string &path) {
  std::ifstream in = OpenInput(path);
  MixtureFile mix;
  const fs::path base = fs::path(path).parent_path();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string_view> f = SplitWhitespace(line);
    if (f.empty() || f[0].front() == '#') continue;
    std::optional<double> w = f.size() == 2 ? ParseDouble(f[1]) : std::nullopt;
    if (!w)
      throw Error(ErrorKind::kParse, path + ": expected path<TAB>weight",
                  lineno);
    fs::path p(f[0]);
    mix.paths.push_back((p.is_absolute() ? p : base / p).string());
    mix.weights.push_back(*w);
  }
  if (mix.paths.empty())
    throw Error(ErrorKind::kFormat, path + ": empty mixture");
  return mix;
}

void WriteMixtureFile(std::ostream &os, const std::vector<std::string> &paths,
                      const std::vector<double> &weights) {
  for (std::size_t i = 0; i < paths.size(); ++i)
    os << paths[i] << '\t' << FormatDouble(weights[i]) << '\n';
}

std::shared_ptr<const NGramModel> LoadArpa(const std::string &path) {
  return std::make_shared<const NGramModel>(
      ReadFile<NGramModel>(path, ReadArpa));
}

std::shared_ptr<const LanguageModel> LoadModel(const std::string &arpa,
                                               const std::string &mixture) {
  if (!arpa.empty() == !mixture.empty())
    throw Error(ErrorKind::kArgument, "give exactly one of --model or --mixture");
  if (!arpa.empty()) return LoadArpa(arpa);
  MixtureFile mix = ReadMixtureFile(mixture);
  std::vector<std::shared_ptr<const LanguageModel>> parts;
  for (const std::string &p : mix.paths) parts.push_back(LoadArpa(p));
  return std::make_shared<const InterpolatedLm>(std::move(parts), mix.weights);
}

struct LmTrainArgs {
  std::string text, out, background, mixture_out;
  int order = 3;
  std::optional<std::size_t> vocab_size;
  std::optional<double> bias_weight;
  NormFlags norm;
};

void RunLmTrain(const LmTrainArgs &a, std::ostream &out) {
  if (a.order < 1 || a.order > kMaxNGramOrder)
    throw Error(ErrorKind::kValue, "--order must lie in [1, 6]");
  const NormRules rules = a.norm.Build();
  std::vector<Sentence> text = ReadText(a.text, rules);
  if (text.empty()) throw Error(ErrorKind::kValue, a.text + ": no text");

  std::shared_ptr<const NGramModel> background;
  if (!a.background.empty()) background = LoadArpa(a.background);

  NGramCounts counts = CountNGrams(text, a.order);
  if (background) {
    // Share the background's vocabulary so both mixture components
    // distribute mass over the same words.
    if (a.vocab_size)
      throw Error(ErrorKind::kArgument,
                  "--vocab-size cannot be combined with --background");
    std::vector<std::string> pv = background->PredictedVocabulary();
    Vocabulary vocab(pv.begin(), pv.end());
    counts = CountNGrams(text, a.order, &vocab);
  } else if (a.vocab_size) {
    Vocabulary vocab = SelectVocabulary(counts, *a.vocab_size);
    counts = CountNGrams(text, a.order, &vocab);
  }
  NGramModel model = Estimate(counts);
  Emit(a.out, out, [&](std::ostream &os) { WriteArpa(os, model); });

  if (a.background.empty()) {
    if (a.bias_weight || !a.mixture_out.empty())
      throw Error(ErrorKind::kArgument,
                  "--bias-weight/--mixture-out need --background");
    return;
  }
  if (a.out.empty() || a.out == "-" || a.mixture_out.empty())
    throw Error(ErrorKind::kArgument,
                "a biased mixture needs --out and --mixture-out files");
  const double w = a.bias_weight.value_or(kDefaultBiasWeight);
  // Constructing the mixture validates the weights before anything is
  // written.
  InterpolatedLm check({std::make_shared<const NGramModel>(model), background},
                       {w, 1.0 - w});
  const fs::path mix_dir = fs::absolute(a.mixture_out).parent_path();
  std::vector<std::string> paths = {
      fs::relative(fs::absolute(a.out), mix_dir).string(),
      fs::relative(fs::absolute(a.background), mix_dir).string()};
  Emit(a.mixture_out, out, [&](std::ostream &os) {
    WriteMixtureFile(os, paths, check.weights());
  });
}

struct LmInterpArgs {
  std::vector<std::string> models;
  std::string heldout, out;
  int max_iters = 50;
  double tol = 1e-6;
  std::vector<double> initial;
  NormFlags norm;
};

void RunLmInterp(const LmInterpArgs &a, std::ostream &out) {
  std::vector<std::string> paths;
  for (const std::string &m : a.models)
    for (std::string_view p : SplitOn(m, ','))
      if (!p.empty()) paths.emplace_back(p);
  if (paths.size() < 2)
    throw Error(ErrorKind::kArgument, "--models needs at least two ARPA files");
  std::vector<std::shared_ptr<const NGramModel>> models;
  std::vector<const LanguageModel *> ptrs;
  for (const std::string &p : paths) {
    models.push_back(LoadArpa(p));
    ptrs.push_back(models.back().get());
  }
  std::vector<Sentence> heldout = ReadText(a.heldout, a.norm.Build());
  EmOptions opts;
  opts.max_iters = a.max_iters;
  opts.tol = a.tol;
  opts.initial_weights = a.initial;
  EmResult em = TuneWeightsEm(ptrs, heldout, opts);

  std::vector<std::shared_ptr<const LanguageModel>> parts(models.begin(),
                                                          models.end());
  InterpolatedLm mix(parts, em.weights);
  PerplexityResult ppl = Perplexity(mix, heldout);

  out << "iterations\t" << em.iterations << '\n';
  for (std::size_t i = 0; i < paths.size(); ++i)
    out << "weight\t" << paths[i] << '\t' << FormatFixed(em.weights[i], 6)
        << '\n';
  out << "heldout_log10\t" << FormatFixed(em.log_likelihoods.back(), 6) << '\n';
  out << "heldout_ppl\t" << FormatFixed(ppl.perplexity, 4) << '\n';
  if (!a.out.empty()) {
    const fs::path mix_dir = fs::absolute(a.out).parent_path();
    std::vector<std::string> rel;
    for (const std::string &p : paths)
      rel.push_back(fs::relative(fs::absolute(p), mix_dir).string());
    Emit(a.out, out,
         [&](std::ostream &os) { WriteMixtureFile(os, rel, em.weights); });
  }
}

struct LmPplArgs {
  std::string model, mixture, text, query;
  NormFlags norm;
};

void RunLmPpl(const LmPplArgs &a, std::ostream &out) {
  std::shared_ptr<const LanguageModel> lm = LoadModel(a.model, a.mixture);
  if (!a.query.empty()) {
    std::vector<std::string> words;
    for (std::string_view w : SplitWhitespace(a.query)) words.emplace_back(w);
    if (words.empty()) throw Error(ErrorKind::kArgument, "empty --query");
    std::span<const std::string> all(words);
    out << "log10p\t" << FormatDouble(lm->LogProb(all.first(all.size() - 1),
                                                  words.back()))
        << '\n';
    if (a.text.empty()) return;
  }
  if (a.text.empty()) throw Error(ErrorKind::kArgument, "need --text or --query");
  std::ifstream in = OpenInput(a.text);
  PerplexityAccumulator acc(*lm);
  ForEachNormalizedLine(in, a.norm.Build(),
                        [&](std::vector<std::string> &&s) { acc.Add(s); });
  PerplexityResult r = acc.Result();
  out << "sentences\t" << r.sentences << '\n'
      << "words\t" << r.words << '\n'
      << "oov\t" << r.oov << '\n'
      << "skipped\t" << r.skipped << '\n'
      << "log10prob\t" << FormatFixed(r.log10_prob, 6) << '\n'
      << "ppl\t" << FormatFixed(r.perplexity, 4) << '\n';
}

struct SelectArgs {
  std::string captions, manifest, transcripts, system;
  std::vector<std::string> ctms;
  double strict_agreement = 0.95, strict_caption = 0.95, strict_conf = 0.9;
  double relaxed_agreement = 0.8, relaxed_caption = 0.8, relaxed_conf = 0.7;
  bool no_conf_gate = false;
  std::string tier = "strict";
  NormFlags norm;
};

void RunSelect(const SelectArgs &a, std::ostream &out) {
  if (a.ctms.size() < 2)
    throw Error(ErrorKind::kArgument,
                "select needs at least two --ctm name=path systems");
  Tier tier;
  if (a.tier == "strict")
    tier = Tier::kStrict;
  else if (a.tier == "relaxed")
    tier = Tier::kRelaxed;
  else
    throw Error(ErrorKind::kArgument, "--tier must be strict or relaxed");

  const NormRules rules = a.norm.Build();
  SelectionThresholds strict{a.strict_agreement, a.strict_caption, std::nullopt};
  SelectionThresholds relaxed{a.relaxed_agreement, a.relaxed_caption,
                              std::nullopt};
  if (!a.no_conf_gate) {
    strict.min_confidence = a.strict_conf;
    relaxed.min_confidence = a.relaxed_conf;
  }
  auto captions = ReadFile<std::vector<StmSegment>>(a.captions, ParseStm);
  std::map<std::string, std::vector<CtmEntry>> systems;
  std::string first;
  for (const std::string &kv : a.ctms) {
    auto [name, path] = SplitAssignment(kv, "--ctm");
    if (systems.contains(name))
      throw Error(ErrorKind::kDuplicate, "system '" + name + "' given twice");
    if (first.empty()) first = name;
    systems.emplace(name, ReadFile<std::vector<CtmEntry>>(path, ParseCtm));
  }
  const std::string system = a.system.empty() ? first : a.system;
  if (!systems.contains(system))
    throw Error(ErrorKind::kArgument, "unknown --system '" + system + "'");

  std::vector<SelectionRecord> records = BuildRecords(captions, systems, rules);
  SelectionSummary sum = Select(records, strict, relaxed);

  out << "tier\tsegments\twords\n"
      << "strict\t" << sum.strict.segments << '\t' << sum.strict.words << '\n'
      << "relaxed\t" << sum.relaxed.segments << '\t' << sum.relaxed.words << '\n'
      << "rejected\t" << sum.rejected.segments << '\t' << sum.rejected.words
      << '\n';
  if (!a.manifest.empty())
    Emit(a.manifest, out,
         [&](std::ostream &os) { WriteManifest(os, records); });
  if (!a.transcripts.empty())
    Emit(a.transcripts, out, [&](std::ostream &os) {
      WriteSelectedTranscripts(os, records, tier, system);
    });
}

struct RescoreArgs {
  std::string nbest, merge, model, mixture, one_best, reranked;
  std::vector<std::string> sides, mix;
  double lm_weight = 1.0, wip = 0.0;
  bool log_linear = false, merge_shift = false;
  unsigned jobs = DefaultJobs();
};

void RunRescore(const RescoreArgs &a, std::ostream &out) {
  NBestLists lists = ReadFile<NBestLists>(a.nbest, ParseNBest);
  for (const std::string &kv : a.sides) {
    auto [name, path] = SplitAssignment(kv, "--side");
    std::ifstream in = OpenInput(path);
    AttachSideScores(lists, name, in);
  }
  if (!a.merge.empty()) {
    NBestLists other = ReadFile<NBestLists>(a.merge, ParseNBest);
    lists = MergeNBest(lists, other,
                       a.merge_shift ? MergeNormalization::kPerUtteranceShift
                                     : MergeNormalization::kNone);
  } else if (a.merge_shift) {
    throw Error(ErrorKind::kArgument, "--merge-shift needs --merge");
  }
  RescoreConfig cfg;
  cfg.lm_weight = a.lm_weight;
  cfg.word_insertion_penalty = a.wip;
  cfg.mix_mode = a.log_linear ? LmMixMode::kLogLinear : LmMixMode::kLinear;
  for (const std::string &kv : a.mix) {
    auto [name, value] = SplitAssignment(kv, "--mix");
    if (!cfg.nn_mix.emplace(name, ParseNumber(value, "--mix")).second)
      throw Error(ErrorKind::kDuplicate, "mixture weight for '" + name +
                                             "' given twice");
  }
  if (a.mix.empty() && !a.sides.empty())
    for (const std::string &kv : a.sides)
      cfg.nn_mix[SplitAssignment(kv, "--side").first] =
          kDefaultNnMixWeight / static_cast<double>(a.sides.size());
  std::shared_ptr<const LanguageModel> lm;
  if (!a.model.empty() || !a.mixture.empty()) {
    lm = LoadModel(a.model, a.mixture);
    cfg.ngram_model = lm.get();
  }
  RerankResult result = Rerank(lists, cfg, std::max(1u, a.jobs));
  Emit(a.one_best, out, [&](std::ostream &os) { WriteOneBest(os, result); });
  if (!a.reranked.empty())
    Emit(a.reranked, out, [&](std::ostream &os) { WriteReranked(os, result); });
}

struct GenSynthArgs {
  std::uint64_t seed = 0;
  std::string out;
  SynthConfig cfg;
};

void RunGenSynth(GenSynthArgs a, std::ostream &out) {
  a.cfg.seed = a.seed;
  SynthCorpus corpus = GenerateSynthCorpus(a.cfg);
  WriteSynthCorpus(corpus, a.out);
  std::size_t bad = std::count(corpus.corrupted.begin(), corpus.corrupted.end(),
                               true);
  out << "segments\t" << corpus.truth.size() << '\n'
      << "corrupted\t" << bad << '\n'
      << "systems\t" << corpus.systems.size() << '\n';
}

}  // namespace

int Run(const std::vector<std::string> &args_in, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Broadcast-news ASR evaluation and data-selection toolkit",
               "asreval"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto add_config = [](CLI::App *sub, std::string &sink) {
    sub->add_option("--config", sink,
                    "File of key=value lines; flags on the command line win");
  };
  std::string config_sink;

  // score
  ScoreArgs score;
  CLI::App *s = app.add_subcommand("score", "WER report for a CTM against an STM");
  Last(s->add_option("--stm", score.stm, "Reference STM")
           ->required()->check(CLI::ExistingFile));
  Last(s->add_option("--ctm", score.ctm, "Hypothesis CTM")
           ->required()->check(CLI::ExistingFile));
  Last(s->add_option("--format", score.format, "text, tsv or json"));
  Last(s->add_option("--out", score.out, "Report file (default stdout)"));
  Last(s->add_option("--confusions", score.confusions,
                     "Write count<TAB>ref<TAB>hyp confusion table here"));
  Last(s->add_option("--system", score.system, "System label for the report"));
  Last(s->add_option("--test-set", score.test_set, "Test-set label"));
  Last(s->add_flag("--hesitation-ablation", score.ablation,
                   "Also score with hesitations removed and report the delta"));
  Last(s->add_option("--jobs", score.jobs, "Worker threads")
           ->check(CLI::PositiveNumber));
  score.norm.Register(s, false);
  score.costs.Register(s);
  add_config(s, config_sink);

  // analyze
  AnalyzeArgs analyze;
  CLI::App *an = app.add_subcommand("analyze", "Most frequent errors");
  Last(an->add_option("--stm", analyze.stm, "Reference STM")
           ->check(CLI::ExistingFile));
  Last(an->add_option("--ctm", analyze.ctm, "Hypothesis CTM")
           ->check(CLI::ExistingFile));
  Last(an->add_option("--confusions", analyze.confusions,
                      "Confusion table written by score")
           ->check(CLI::ExistingFile));
  Last(an->add_option("--top", analyze.top, "Entries per error kind")
           ->check(CLI::PositiveNumber));
  Last(an->add_option("--out", analyze.out, "Output file (default stdout)"));
  Last(an->add_option("--jobs", analyze.jobs, "Worker threads")
           ->check(CLI::PositiveNumber));
  analyze.norm.Register(an, false);
  analyze.costs.Register(an);
  add_config(an, config_sink);

  // compare
  CompareArgs compare;
  CLI::App *cmp = app.add_subcommand("compare", "Systems x test sets WER table");
  cmp->add_option("reports", compare.reports, "JSON reports from score")
      ->required()->check(CLI::ExistingFile);
  Last(cmp->add_option("--format", compare.format, "text, tsv or json"));
  Last(cmp->add_option("--out", compare.out, "Output file (default stdout)"));
  add_config(cmp, config_sink);

  // lm-train
  LmTrainArgs train;
  CLI::App *lt = app.add_subcommand("lm-train", "Witten-Bell ARPA model from text");
  Last(lt->add_option("--text", train.text, "One sentence per line")
           ->required()->check(CLI::ExistingFile));
  Last(lt->add_option("--order", train.order, "N-gram order (1-6)"));
  Last(lt->add_option("--vocab-size", train.vocab_size,
                      "Keep the most frequent words; others become <unk>"));
  Last(lt->add_option("--out", train.out, "ARPA output (default stdout)"));
  Last(lt->add_option("--background", train.background,
                      "Background ARPA to mix the new model with")
           ->check(CLI::ExistingFile));
  Last(lt->add_option("--bias-weight", train.bias_weight,
                      "Weight of the new model in the mixture (default 0.9)"));
  Last(lt->add_option("--mixture-out", train.mixture_out,
                      "Mixture file (path<TAB>weight) to write"));
  train.norm.Register(lt, true);
  add_config(lt, config_sink);

  // lm-interp
  LmInterpArgs interp;
  CLI::App *li = app.add_subcommand("lm-interp", "EM-tune mixture weights");
  li->add_option("--models", interp.models, "Comma-separated ARPA files")
      ->required();
  Last(li->add_option("--heldout", interp.heldout, "Held-out text")
           ->required()->check(CLI::ExistingFile));
  Last(li->add_option("--max-iters", interp.max_iters, "EM iteration cap"));
  Last(li->add_option("--tol", interp.tol, "Stop below this log10 gain"));
  li->add_option("--init", interp.initial, "Initial weights")->delimiter(',');
  Last(li->add_option("--out", interp.out, "Write the tuned mixture file here"));
  interp.norm.Register(li, true);
  add_config(li, config_sink);

  // lm-ppl
  LmPplArgs ppl;
  CLI::App *lp = app.add_subcommand("lm-ppl", "Perplexity or single queries");
  Last(lp->add_option("--model", ppl.model, "ARPA model")
           ->check(CLI::ExistingFile));
  Last(lp->add_option("--mixture", ppl.mixture, "Mixture file")
           ->check(CLI::ExistingFile));
  Last(lp->add_option("--text", ppl.text, "Text to score")
           ->check(CLI::ExistingFile));
  Last(lp->add_option("--query", ppl.query,
                      "\"w1 ... wn\": print log10 p(wn | w1 ...)"));
  ppl.norm.Register(lp, true);
  add_config(lp, config_sink);

  // select
  SelectArgs sel;
  CLI::App *se = app.add_subcommand("select",
                                    "Tier caption segments for training");
  Last(se->add_option("--captions", sel.captions, "Caption STM")
           ->required()->check(CLI::ExistingFile));
  se->add_option("--ctm", sel.ctms, "System decode as name=path (repeat)")
      ->required();
  Last(se->add_option("--strict-agreement", sel.strict_agreement));
  Last(se->add_option("--strict-caption-match", sel.strict_caption));
  Last(se->add_option("--strict-confidence", sel.strict_conf));
  Last(se->add_option("--relaxed-agreement", sel.relaxed_agreement));
  Last(se->add_option("--relaxed-caption-match", sel.relaxed_caption));
  Last(se->add_option("--relaxed-confidence", sel.relaxed_conf));
  Last(se->add_flag("--no-confidence-gate", sel.no_conf_gate,
                    "Ignore word confidences"));
  Last(se->add_option("--manifest", sel.manifest, "Per-segment decisions (TSV)"));
  Last(se->add_option("--transcripts", sel.transcripts,
                      "Selected segment transcripts"));
  Last(se->add_option("--tier", sel.tier, "strict or relaxed, for --transcripts"));
  Last(se->add_option("--system", sel.system,
                      "System whose words are exported (default first --ctm)"));
  sel.norm.Register(se, false);
  add_config(se, config_sink);

  // rescore
  RescoreArgs rs;
  CLI::App *rc = app.add_subcommand("rescore", "Rerank n-best lists");
  Last(rc->add_option("--nbest", rs.nbest, "N-best lists")
           ->required()->check(CLI::ExistingFile));
  rc->add_option("--side", rs.sides, "Side scores as name=path (repeat)");
  rc->add_option("--mix", rs.mix, "Mixture weight as name=weight (repeat); without any, the side streams share 0.5");
  Last(rc->add_option("--lm-weight", rs.lm_weight, "LM scale"));
  Last(rc->add_option("--wip", rs.wip, "Word insertion penalty"));
  Last(rc->add_flag("--log-linear", rs.log_linear,
                    "Combine LM streams log-linearly"));
  Last(rc->add_option("--model", rs.model, "Rescore with this ARPA model")
           ->check(CLI::ExistingFile));
  Last(rc->add_option("--mixture", rs.mixture, "Rescore with this mixture")
           ->check(CLI::ExistingFile));
  Last(rc->add_option("--merge", rs.merge, "Second system's n-best to merge")
           ->check(CLI::ExistingFile));
  Last(rc->add_flag("--merge-shift", rs.merge_shift,
                    "Shift each system's AM scores to a common best"));
  Last(rc->add_option("--one-best", rs.one_best, "1-best file (default stdout)"));
  Last(rc->add_option("--reranked", rs.reranked, "Reranked n-best file"));
  Last(rc->add_option("--jobs", rs.jobs, "Worker threads")
           ->check(CLI::PositiveNumber));
  add_config(rc, config_sink);

  // gen-synth
  GenSynthArgs gen;
  CLI::App *gs = app.add_subcommand("gen-synth", "Seeded synthetic corpus");
  Last(gs->add_option("--seed", gen.seed, "RNG seed")->required());
  Last(gs->add_option("--out", gen.out, "Output directory")->required());
  Last(gs->add_option("--shows", gen.cfg.shows));
  Last(gs->add_option("--segments-per-show", gen.cfg.segments_per_show));
  Last(gs->add_option("--min-words", gen.cfg.min_words));
  Last(gs->add_option("--max-words", gen.cfg.max_words));
  Last(gs->add_option("--vocab-size", gen.cfg.vocab_size));
  Last(gs->add_option("--speakers", gen.cfg.speakers_per_show));
  Last(gs->add_option("--systems", gen.cfg.systems));
  Last(gs->add_option("--corrupt-fraction", gen.cfg.corrupt_fraction));
  Last(gs->add_option("--clean-caption-error", gen.cfg.clean_caption_error));
  Last(gs->add_option("--corrupt-caption-error", gen.cfg.corrupt_caption_error));
  Last(gs->add_option("--clean-system-error", gen.cfg.clean_system_error));
  Last(gs->add_option("--corrupt-system-error", gen.cfg.corrupt_system_error));
  Last(gs->add_option("--hesitation-rate", gen.cfg.hesitation_rate));
  add_config(gs, config_sink);

  try {
    // Config lines are spliced in right after the subcommand name, so any
    // later command-line flag overrides them.
    std::vector<std::string> args = args_in;
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      std::size_t consumed = 0;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
        consumed = 2;
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
        consumed = 1;
      } else {
        continue;
      }
      std::vector<std::string> extra = ReadConfigArgs(path);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + consumed));
      std::size_t at = args.empty() ? 0 : 1;  // after the subcommand
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(),
                  extra.end());
      i = at + extra.size() - 1;
    }
    // CLI11 consumes arguments from the back of the vector.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App *sub = nullptr;
    for (const CLI::App *c : app.get_subcommands()) sub = c;
    err << (sub ? sub->help() : app.help());
    return kExitInput;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::kInternal ? kExitInternal : kExitInput;
  }

  try {
    if (s->parsed()) RunScore(score, out, err);
    else if (an->parsed()) RunAnalyze(analyze, out);
    else if (cmp->parsed()) RunCompare(compare, out);
    else if (lt->parsed()) RunLmTrain(train, out);
    else if (li->parsed()) RunLmInterp(interp, out);
    else if (lp->parsed()) RunLmPpl(ppl, out);
    else if (se->parsed()) RunSelect(sel, out);
    else if (rc->parsed()) RunRescore(rs, out);
    else if (gs->parsed()) RunGenSynth(gen, out);
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::kInternal ? kExitInternal : kExitInput;
  } catch (const std::bad_alloc &) {
    err << "error: out of memory\n";
    return kExitInternal;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace cli
}  // namespace asreval
