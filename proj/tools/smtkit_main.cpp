// tools/smtkit_main.cpp
//
// Copyright 2026  smtkit authors
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

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smtkit/pipeline.hpp"

namespace {

void print_stage(const std::string& prefix, const smtkit::StageResult& result) {
  std::cout << prefix << smtkit::to_string(result.stage);
  if (result.skipped) {
    std::cout << ": skipped (manifest match)\n";
    return;
  }
  std::cout << ": wrote";
  for (const std::string& path : result.outputs) std::cout << ' ' << path;
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smtkit: a small phrase-based statistical machine translation toolkit"};
  app.require_subcommand(0, 1);

  std::string template_path;
  app.add_option("--write-config-template", template_path,
                 "write a commented config file with all defaults and exit");

  std::string config_path;
  const std::vector<std::string> stage_names = {"clean",     "extract-lexicon", "augment",
                                                "train",     "tune",            "translate",
                                                "evaluate"};
  const std::vector<std::string> stage_help = {
      "filter the training corpus and write a removal report",
      "build the bilingual lexicon from synsets and pair lists",
      "append lexicon entries to the (cleaned) training corpus",
      "run word alignment, phrase extraction and language model training",
      "optimize log-linear weights on the dev set",
      "decode the test input",
      "score translations against the reference"};
  for (size_t k = 0; k < stage_names.size(); ++k) {
    CLI::App* sub = app.add_subcommand(stage_names[k], stage_help[k]);
    sub->add_option("-c,--config", config_path, "experiment config file")->required();
  }
  CLI::App* ladder_cmd =
      app.add_subcommand("ladder", "run all five experiment configurations end to end");
  ladder_cmd->add_option("-c,--config", config_path, "experiment config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!template_path.empty()) {
      smtkit::write_file(template_path, smtkit::config_template());
      std::cout << "wrote " << template_path << '\n';
      return 0;
    }
    std::vector<CLI::App*> subs = app.get_subcommands();
    if (subs.empty()) {
      std::cerr << "error: a subcommand is required (see --help)\n";
      return 1;
    }
    smtkit::ExperimentConfig cfg = smtkit::parse_config(config_path);
    if (subs[0] == ladder_cmd) {
      std::string current_rung;
      std::vector<std::string> reports =
          smtkit::run_ladder(cfg, [&](const std::string& rung, const smtkit::StageResult& r) {
            if (rung != current_rung) {
              std::cout << "== " << rung << " ==\n";
              current_rung = rung;
            }
            print_stage("  ", r);
          });
      for (const std::string& path : reports) std::cout << "report: " << path << '\n';
    } else {
      smtkit::Stage stage = smtkit::stage_from_string(subs[0]->get_name());
      print_stage("", smtkit::run_stage(stage, cfg));
    }
    return 0;
  } catch (const smtkit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const smtkit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
