// Copyright 2026 The hdspeech Authors.
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

// hdspeech: synthesize, extract, correlate, classify and report.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hdspeech/cli.hpp"

namespace cli = hdspeech::cli;

int main(int argc, char** argv) {
  CLI::App app{"Acoustic analysis of hypokinetic dysarthria: features, correlation and classification"};
  app.require_subcommand(1);

  cli::SynthOptions synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic two-class corpus");
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--seed", synth.seed, "Master seed")->capture_default_str();
  s->add_option("--n-per-class", synth.n_per_class, "Recordings per class")->capture_default_str();

  cli::ExtractOptions extract;
  auto* e = app.add_subcommand("extract", "Extract the 217 features of every manifest recording");
  e->add_option("--manifest", extract.manifest, "manifest.csv (id,path,label)")->required();
  e->add_option("--out", extract.out, "Output features CSV")->required();
  e->add_option("--frame-ms", extract.frame_ms, "Frame length in ms")->capture_default_str();
  e->add_option("--hop-ms", extract.hop_ms, "Hop in ms")->capture_default_str();
  e->add_option("--threads", extract.threads, "Worker threads (0 = all cores)")->capture_default_str();

  cli::CorrelateOptions correlate;
  auto* c = app.add_subcommand("correlate", "Pearson and Spearman correlation of each feature with the label");
  c->add_option("--features", correlate.features, "Features CSV")->required();
  c->add_option("--out", correlate.out, "Output JSON")->required();

  cli::ClassifyOptions classify;
  auto* k = app.add_subcommand("classify", "Cross-validated random-forest classification");
  k->add_option("--features", classify.features, "Features CSV")->required();
  k->add_option("--mode", classify.mode, "uni (one model per feature) or sffs (feature selection)")
      ->check(CLI::IsMember({"uni", "sffs"}))
      ->capture_default_str();
  k->add_option("--folds", classify.folds, "Folds per repetition")->capture_default_str();
  k->add_option("--repetitions", classify.repetitions, "Repetitions")->capture_default_str();
  k->add_option("--trees", classify.trees, "Trees per forest")->capture_default_str();
  k->add_option("--seed", classify.seed, "Master seed")->capture_default_str();
  k->add_option("--max-subset", classify.max_subset, "Largest SFFS subset")->capture_default_str();
  k->add_option("--patience", classify.patience, "SFFS rounds without improvement before stopping")
      ->capture_default_str();
  k->add_option("--threads", classify.threads, "Worker threads (0 = all cores)")->capture_default_str();
  k->add_option("--out", classify.out, "Output JSON")->required();

  cli::ReportOptions report;
  auto* r = app.add_subcommand("report", "Merge results into the per-dimension results table");
  r->add_option("--uni", report.uni, "Univariate classify JSON")->required();
  r->add_option("--multi", report.multi, "SFFS classify JSON");
  r->add_option("--corr", report.corr, "Correlation JSON")->required();
  r->add_option("--out", report.out, "Output markdown table")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  if (s->parsed()) return cli::cmd_synth(synth, std::cout, std::cerr);
  if (e->parsed()) return cli::cmd_extract(extract, std::cout, std::cerr);
  if (c->parsed()) return cli::cmd_correlate(correlate, std::cout, std::cerr);
  if (k->parsed()) return cli::cmd_classify(classify, std::cout, std::cerr);
  return cli::cmd_report(report, std::cout, std::cerr);
}
