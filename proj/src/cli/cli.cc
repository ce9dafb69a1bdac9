// Copyright 2026 The vground Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vground/cli/cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "vground/cli/run_config.h"
#include "vground/core/gradcheck.h"
#include "vground/dataset/sampling.h"
#include "vground/dataset/split.h"
#include "vground/dataset/synth.h"
#include "vground/eval/retrieval.h"
#include "vground/eval/sweep.h"
#include "vground/miner/pairs.h"
#include "vground/train/checkpoint.h"
#include "vground/util/binio.h"
#include "vground/util/error.h"
#include "vground/util/text.h"

namespace vground::cli {
namespace {

namespace fs = std::filesystem;

template <typename T>
std::string show(const T& v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// Flags bound to optionals so that only values given on the command line
// override the config file. The displayed default is the config default.
template <typename T>
CLI::Option* add_override(CLI::App* app, const std::string& name, std::optional<T>& target,
                          const std::string& help, const std::string& shown_default) {
  return app->add_option(name, target, help)->default_str(shown_default);
}

template <typename T>
void override_with(const std::optional<T>& flag, T& field) {
  if (flag) field = *flag;
}

RunConfig load_config(const std::optional<std::string>& path) {
  return path ? RunConfig::load(*path) : RunConfig{};
}

std::string templates_path(const RunConfig& c) {
  return c.dataset.templates_path.empty() ? default_templates_path() : c.dataset.templates_path;
}

std::vector<dataset::CommandTemplate> train_templates(const RunConfig& c) {
  auto all = dataset::load_templates(templates_path(c));
  if (!c.dataset.disjoint_templates) return all;
  return dataset::disjoint_template_split(all).train;
}

std::vector<dataset::CommandTemplate> eval_templates(const RunConfig& c) {
  auto all = dataset::load_templates(templates_path(c));
  if (!c.dataset.disjoint_templates) return all;
  return dataset::disjoint_template_split(all).eval;
}

std::vector<std::string> conllu_files(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(in)) {
        if (entry.is_regular_file() && entry.path().extension() == ".conllu") {
          found.push_back(entry.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(in)) {
      files.push_back(in);
    } else {
      throw DataError(in + ": no such file or directory");
    }
  }
  if (files.empty()) throw DataError("no .conllu files found");
  return files;
}

std::set<std::string> word_set(const std::string& path) {
  const auto words = read_word_list(path);
  return {words.begin(), words.end()};
}

void write_output(const std::string& path, std::string_view bytes, std::ostream& out) {
  if (path == "-") {
    out << bytes;
  } else {
    write_file(output_path(path), bytes);
  }
}

dataset::CommandMode mode_flag(const std::optional<std::string>& flag,
                               dataset::CommandMode fallback) {
  return flag ? dataset::parse_command_mode(*flag) : fallback;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const RunConfig defaults;
  CLI::App app{"Grounded object retrieval: mining, dataset building, training and evaluation",
               "vground"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::optional<std::string> config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run config; flags override its fields");
  };

  // mine
  auto* mine = app.add_subcommand("mine", "Extract verb-object pairs from CoNLL-U parses");
  std::vector<std::string> mine_inputs;
  std::string mine_out;
  std::optional<std::string> mine_objects, mine_verbs;
  std::optional<std::uint64_t> mine_min_freq;
  std::optional<std::vector<std::string>> mine_relations;
  bool mine_all_verbs = false;
  mine->add_option("--conllu", mine_inputs, "CoNLL-U files or directories of *.conllu")
      ->required();
  mine->add_option("--out", mine_out, "Pairs TSV to write ('-' for stdout)")->required();
  add_override(mine, "--objects", mine_objects, "Object whitelist, one lemma per line",
               "miner.object_whitelist (required)");
  add_override(mine, "--verbs", mine_verbs, "Verb whitelist, one lemma per line",
               "data/verbs.txt");
  mine->add_flag("--no-verb-whitelist", mine_all_verbs, "Keep every verb");
  add_override(mine, "--min-frequency", mine_min_freq, "Minimum pair frequency",
               show(defaults.miner.min_frequency));
  add_override(mine, "--relations", mine_relations, "Dependency relations of the object",
               "dobj,obj")
      ->delimiter(',');
  add_config(mine);

  // split
  auto* split = app.add_subcommand("split", "Hold out object classes for testing");
  std::string split_pairs, split_out;
  std::optional<double> split_holdout;
  std::optional<std::uint64_t> split_seed;
  split->add_option("--pairs", split_pairs, "Pairs TSV")->required();
  split->add_option("--out", split_out, "Split manifest JSON to write")->required();
  add_override(split, "--holdout", split_holdout, "Fraction of classes held out",
               show(defaults.dataset.holdout_fraction));
  add_override(split, "--seed", split_seed, "Shuffle seed", show(defaults.dataset.seed));
  add_config(split);

  // build
  auto* build = app.add_subcommand("build", "Generate balanced training samples");
  std::string build_manifest, build_features, build_out;
  std::optional<std::size_t> build_size;
  std::optional<std::uint64_t> build_seed;
  std::optional<std::string> build_mode, build_templates;
  build->add_option("--manifest", build_manifest, "Split manifest JSON")->required();
  build->add_option("--features", build_features, "FEAT feature store")->required();
  build->add_option("--out", build_out, "Samples file to write")->required();
  add_override(build, "--size", build_size, "Positive samples (negatives match)",
               show(defaults.dataset.size));
  add_override(build, "--seed", build_seed, "Generation seed", show(defaults.dataset.seed));
  add_override(build, "--mode", build_mode, "verb-only or verb+noun", "verb-only");
  add_override(build, "--templates", build_templates, "Templates file", "data/templates.txt");
  add_config(build);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a clustered synthetic feature store");
  std::optional<std::string> synth_spec, synth_pairs;
  std::optional<std::uint64_t> synth_seed;
  std::string synth_out;
  synth->add_option("--spec", synth_spec, "JSON synth spec (n_verbs, n_classes, ...)");
  synth->add_option("--out", synth_out, "FEAT file to write")->required();
  synth->add_option("--pairs-out", synth_pairs, "Also write the ground-truth pairs TSV");
  add_override(synth, "--seed", synth_seed, "Generator seed", "0");

  // train
  auto* trainc = app.add_subcommand("train", "Train the language encoder");
  std::string train_samples, train_out;
  std::optional<std::string> train_log;
  std::optional<std::uint64_t> train_seed;
  std::optional<std::size_t> train_epochs;
  std::optional<double> train_lr;
  trainc->add_option("--samples", train_samples, "Samples file from `build`")->required();
  trainc->add_option("--out", train_out, "Checkpoint to write")->required();
  trainc->add_option("--log", train_log, "Write JSON-lines epoch log here instead of stdout");
  add_override(trainc, "--seed", train_seed, "Training seed", show(defaults.train.seed));
  add_override(trainc, "--epochs", train_epochs, "Epochs", show(defaults.train.epochs));
  add_override(trainc, "--lr", train_lr, "Adam learning rate", show(defaults.train.lr));
  add_config(trainc);

  // eval
  auto* evalc = app.add_subcommand("eval", "Five-candidate retrieval evaluation");
  std::string eval_ckpt, eval_features;
  std::optional<std::string> eval_manifest, eval_pairs, eval_mode, eval_out, eval_tasks_out,
      eval_templates_flag;
  std::optional<std::size_t> eval_runs, eval_n_tasks;
  std::optional<std::uint64_t> eval_seed;
  evalc->add_option("--ckpt", eval_ckpt, "Checkpoint")->required();
  evalc->add_option("--features", eval_features, "FEAT feature store")->required();
  auto* m_opt = evalc->add_option("--manifest", eval_manifest,
                                  "Split manifest; tasks use its test classes");
  auto* p_opt = evalc->add_option("--pairs", eval_pairs,
                                  "External pairs TSV for cross-dataset evaluation");
  m_opt->excludes(p_opt);
  add_override(evalc, "--mode", eval_mode, "verb-only, verb+noun or verb+unknown-noun",
               "verb-only");
  add_override(evalc, "--runs", eval_runs, "Repeated runs", show(defaults.eval.runs));
  add_override(evalc, "--n-tasks", eval_n_tasks, "Tasks per run", show(defaults.eval.n_tasks));
  add_override(evalc, "--seed", eval_seed, "Task seed", show(defaults.eval.seed));
  add_override(evalc, "--templates", eval_templates_flag, "Templates file", "data/templates.txt");
  add_override(evalc, "--out", eval_out, "Report JSON to write", "- (stdout)");
  evalc->add_option("--tasks-out", eval_tasks_out, "Dump the first run's tasks as JSON lines");
  add_config(evalc);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Train and evaluate over several data sizes");
  std::string sweep_manifest, sweep_features;
  std::vector<std::size_t> sweep_sizes;
  std::optional<std::string> sweep_out, sweep_csv;
  sweep->add_option("--manifest", sweep_manifest, "Split manifest")->required();
  sweep->add_option("--features", sweep_features, "FEAT feature store")->required();
  sweep->add_option("--sizes", sweep_sizes, "Ascending positive-sample counts, comma separated")
      ->required()
      ->delimiter(',');
  add_override(sweep, "--out", sweep_out, "Sweep JSON to write", "- (stdout)");
  sweep->add_option("--csv", sweep_csv, "Also write a CSV table");
  add_config(sweep);

  // retrieve
  auto* retrieve = app.add_subcommand("retrieve", "Rank objects for one command");
  std::string ret_ckpt, ret_features, ret_command;
  std::size_t ret_k = 5;
  std::vector<std::string> ret_candidates;
  retrieve->add_option("--ckpt", ret_ckpt, "Checkpoint")->required();
  retrieve->add_option("--features", ret_features, "FEAT feature store")->required();
  retrieve->add_option("--command", ret_command, "Natural-language command")->required();
  retrieve->add_option("--k", ret_k, "Number of ranked candidates to print")
      ->capture_default_str();
  retrieve->add_option("--candidates", ret_candidates,
                       "class:instance refs to rank (default: every record)")
      ->delimiter(',');

  // gradcheck
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of the encoder");
  std::uint64_t gc_seed = 0;
  std::string gc_cell = "elman";
  double gc_epsilon = 1e-3;
  double gc_tolerance = 1e-3;
  gradcheck->add_option("--seed", gc_seed, "Configuration seed")->capture_default_str();
  gradcheck->add_option("--cell", gc_cell, "elman or gated")->capture_default_str();
  gradcheck->add_option("--epsilon", gc_epsilon, "Central-difference step")
      ->capture_default_str();
  gradcheck->add_option("--tolerance", gc_tolerance, "Largest accepted relative error")
      ->capture_default_str();

  auto fail = [&](ErrorCode code, const std::string& what) {
    err << "error_code: " << static_cast<int>(code) << " " << error_code_name(code) << ": "
        << what << "\n";
    return static_cast<int>(code);
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands()[0]->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail(ErrorCode::kUsage, e.what());
  }

  try {
    if (mine->parsed()) {
      RunConfig c = load_config(config_path);
      override_with(mine_objects, c.miner.object_whitelist);
      override_with(mine_verbs, c.miner.verb_whitelist);
      override_with(mine_min_freq, c.miner.min_frequency);
      override_with(mine_relations, c.miner.relations);
      if (mine_all_verbs) c.miner.use_verb_whitelist = false;
      if (c.miner.object_whitelist.empty()) {
        throw UsageError("mine needs an object whitelist (--objects or miner.object_whitelist)");
      }
      const std::set<std::string> relations(c.miner.relations.begin(), c.miner.relations.end());
      const auto raw = miner::mine_files(conllu_files(mine_inputs), relations);
      std::optional<std::set<std::string>> verbs;
      if (c.miner.use_verb_whitelist) {
        verbs = word_set(c.miner.verb_whitelist.empty() ? default_verbs_path()
                                                        : c.miner.verb_whitelist);
      }
      const auto kept =
          miner::filter_pairs(raw, verbs, word_set(c.miner.object_whitelist), c.miner.min_frequency);
      write_output(mine_out, miner::format_pairs_tsv(kept), out);
      err << "mined " << raw.size() << " distinct pairs, kept " << kept.size() << "\n";
    } else if (split->parsed()) {
      RunConfig c = load_config(config_path);
      override_with(split_holdout, c.dataset.holdout_fraction);
      override_with(split_seed, c.dataset.seed);
      const auto pairs = dataset::load_pairs(split_pairs);
      const auto m = dataset::split_by_object(pairs, c.dataset.holdout_fraction, c.dataset.seed);
      write_output(split_out, m.to_json(), out);
      err << m.train_classes.size() << " train classes (" << m.train_pairs.size() << " pairs), "
          << m.test_classes.size() << " test classes (" << m.test_pairs.size() << " pairs)\n";
    } else if (build->parsed()) {
      RunConfig c = load_config(config_path);
      override_with(build_size, c.dataset.size);
      override_with(build_seed, c.dataset.seed);
      override_with(build_templates, c.dataset.templates_path);
      c.dataset.mode = mode_flag(build_mode, c.dataset.mode);
      const auto m = dataset::SplitManifest::load(build_manifest);
      const auto store = dataset::FeatureStore::load(build_features);
      const auto samples = dataset::generate_training_set(m, train_templates(c), store,
                                                          c.dataset.size, c.dataset.seed,
                                                          c.dataset.mode);
      write_file(output_path(build_out), dataset::serialize_samples(samples));
      err << samples.size() << " samples\n";
    } else if (synth->parsed()) {
      dataset::SynthSpec spec =
          synth_spec ? dataset::SynthSpec::from_json(read_file(*synth_spec)) : dataset::SynthSpec{};
      override_with(synth_seed, spec.seed);
      const auto data = dataset::synth_features(spec);
      data.store.save(output_path(synth_out));
      if (synth_pairs) write_output(*synth_pairs, dataset::format_pairs(data.pairs), out);
      err << data.store.size() << " records, " << data.pairs.size() << " pairs\n";
    } else if (trainc->parsed()) {
      RunConfig c = load_config(config_path);
      override_with(train_seed, c.train.seed);
      override_with(train_epochs, c.train.epochs);
      override_with(train_lr, c.train.lr);
      const auto samples = dataset::load_samples(train_samples);
      std::ofstream log_file;
      if (train_log) {
        log_file.open(output_path(*train_log), std::ios::binary);
        if (!log_file) throw DataError(*train_log + ": cannot open for writing");
      }
      std::ostream& log = train_log ? static_cast<std::ostream&>(log_file) : out;
      const auto ckpt = train::train(c.train_config(), samples, [&](const train::EpochLog& e) {
        log << e.to_json_line() << "\n" << std::flush;
      });
      train::save_checkpoint(ckpt, output_path(train_out));
    } else if (evalc->parsed()) {
      if (!eval_manifest && !eval_pairs) throw UsageError("eval needs --manifest or --pairs");
      RunConfig c = load_config(config_path);
      override_with(eval_runs, c.eval.runs);
      override_with(eval_n_tasks, c.eval.n_tasks);
      override_with(eval_seed, c.eval.seed);
      override_with(eval_templates_flag, c.dataset.templates_path);
      c.eval.mode = mode_flag(eval_mode, c.eval.mode);
      const auto ckpt = train::load_checkpoint(eval_ckpt);
      const auto store = dataset::FeatureStore::load(eval_features);
      const auto templates = eval_templates(c);
      const eval::EvalConfig ec = c.eval_config();
      eval::EvalReport report;
      std::vector<dataset::VerbObjectPair> test_pairs;
      dataset::FeatureStore task_store;
      dataset::PairSet pair_set;
      if (eval_manifest) {
        const auto m = dataset::SplitManifest::load(*eval_manifest);
        task_store = store.subset(m.test_classes);
        test_pairs = m.test_pairs;
        pair_set = dataset::PairSet(m.all_pairs());
        report = eval::run_eval(ckpt, test_pairs, pair_set, task_store, templates, ec);
      } else {
        task_store = store;
        test_pairs = dataset::load_pairs(*eval_pairs);
        pair_set = dataset::PairSet(test_pairs);
        report = eval::cross_dataset_eval(ckpt, store, test_pairs, templates, ec);
      }
      if (eval_tasks_out) {
        eval::TaskConfig tc = ec.tasks;
        tc.seed = derive_seed(ec.tasks.seed, 0);
        const auto tasks = eval::generate_tasks(test_pairs, pair_set, task_store, templates, tc);
        write_output(*eval_tasks_out, eval::tasks_to_jsonl(tasks), out);
      }
      write_output(eval_out.value_or("-"), report.dump(), out);
    } else if (sweep->parsed()) {
      RunConfig c = load_config(config_path);
      const auto m = dataset::SplitManifest::load(sweep_manifest);
      const auto store = dataset::FeatureStore::load(sweep_features);
      eval::SweepConfig sc;
      sc.sizes = sweep_sizes;
      sc.build_seed = c.dataset.seed;
      sc.train_mode = c.dataset.mode;
      sc.train = c.train_config();
      sc.eval = c.eval_config();
      const auto report =
          eval::data_size_sweep(m, train_templates(c), eval_templates(c), store, sc,
                                [&](const eval::SweepRow& row) {
                                  char line[128];
                                  std::snprintf(line, sizeof line,
                                                "size %zu: top1 %.1f (%.2f) top2 %.1f (%.2f)\n",
                                                row.data_size, row.report.top1_mean,
                                                row.report.top1_se, row.report.top2_mean,
                                                row.report.top2_se);
                                  err << line;
                                });
      write_output(sweep_out.value_or("-"), report.to_json(), out);
      if (sweep_csv) write_output(*sweep_csv, report.to_csv(), out);
    } else if (retrieve->parsed()) {
      const auto ckpt = train::load_checkpoint(ret_ckpt);
      const auto store = dataset::FeatureStore::load(ret_features);
      if (store.dim() != ckpt.params.dims.output_dim) {
        throw DataError("feature dim " + std::to_string(store.dim()) +
                        " does not match model dim " +
                        std::to_string(ckpt.params.dims.output_dim));
      }
      std::vector<dataset::ObjectRef> refs;
      if (ret_candidates.empty()) {
        for (const auto& r : store.records()) refs.push_back(r.ref);
      } else {
        for (const auto& text : ret_candidates) {
          const auto colon = text.rfind(':');
          unsigned long long id = 0;
          if (colon == std::string::npos || !parse_uint(text.substr(colon + 1), id) ||
              id > UINT32_MAX) {
            throw UsageError("candidate '" + text + "' is not class:instance");
          }
          refs.push_back({text.substr(0, colon), static_cast<std::uint32_t>(id)});
        }
      }
      if (refs.empty()) throw DataError("no candidates to rank");
      std::vector<std::vector<float>> features;
      for (const auto& r : refs) features.push_back(store.at(r).values);
      const auto tokens = dataset::tokenize(ret_command);
      const auto embedding = ckpt.embed(tokens);
      std::vector<double> sims;
      const auto order = eval::rank_by_similarity(embedding, features, &sims);
      for (std::size_t i = 0; i < std::min(ret_k, order.size()); ++i) {
        const auto& r = refs[order[i]];
        char sim[32];
        std::snprintf(sim, sizeof sim, "%.3f", sims[order[i]]);
        out << (i + 1) << "\t" << r.object_class << "\t" << r.instance_id << "\t" << sim << "\n";
      }
    } else if (gradcheck->parsed()) {
      const auto gc = core::random_gradcheck_case(gc_seed, core::parse_cell_type(gc_cell));
      core::GradCheckOptions opts;
      opts.epsilon = gc_epsilon;
      opts.seed = gc_seed;
      const auto result = core::grad_check(gc.params, gc.sample, opts);
      char line[64];
      std::snprintf(line, sizeof line, "%.3e", result.max_relative_error);
      out << "max_relative_error " << line << " over " << result.coordinates
          << " coordinates (worst: " << result.worst_tensor << "[" << result.worst_index
          << "])\n";
      if (!(result.max_relative_error < gc_tolerance)) {
        throw NumericalError("gradient check exceeded tolerance " + show(gc_tolerance));
      }
    }
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(ErrorCode::kData, e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCode::kData, e.what());
  }
  return 0;
}

}  // namespace vground::cli
