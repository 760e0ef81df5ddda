// Copyright 2026 The qpotts Authors
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

// qpotts: one subcommand per run mode.
//
//   qpotts meanfield --config run.cfg --set T=0.8 --set lambda=4.5
//
// Thread count comes from QPOTTS_THREADS unless `threads` is set.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qpotts/qpotts.h"

namespace {

constexpr int kExitConfig = 2;

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  bool print_config = false;
};

int run_mode(const std::string& mode, const Options& opts) {
  std::string text;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) {
      std::cerr << "qpotts: cannot read " << opts.config_path << "\n";
      return kExitConfig;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }

  qp_config* config = nullptr;
  if (qp_config_parse(text.c_str(), mode.c_str(), &config) != QP_OK) {
    std::cerr << "qpotts: " << opts.config_path << ": " << qp_last_error() << "\n";
    return kExitConfig;
  }
  for (const auto& assignment : opts.overrides) {
    if (qp_config_set(config, assignment.c_str()) != QP_OK) {
      std::cerr << "qpotts: --set " << assignment << ": " << qp_last_error() << "\n";
      qp_config_free(config);
      return kExitConfig;
    }
  }

  if (opts.print_config) {
    char* serialized = nullptr;
    if (qp_config_serialize(config, &serialized) == QP_OK) std::cout << serialized;
    qp_string_free(serialized);
    qp_config_free(config);
    return 0;
  }

  int exit_code = 0;
  char* summary = nullptr;
  const qp_status status = qp_config_run(config, &exit_code, &summary);
  if (status == QP_OK) {
    std::cout << summary << "\n";
  } else {
    std::cerr << "qpotts " << mode << ": " << qp_status_name(status) << ": "
              << (summary ? summary : qp_last_error()) << "\n";
  }
  qp_string_free(summary);
  qp_config_free(config);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven-dissipative quantum Potts associative memory"};
  app.set_version_flag("--version", std::string(qp_version()));
  app.require_subcommand(1);

  Options opts;
  std::string selected;
  for (int k = 0; k < qp_mode_count(); ++k) {
    const std::string mode = qp_mode_name(k);
    auto* sub = app.add_subcommand(mode, "run the " + mode + " mode");
    sub->add_option("-c,--config", opts.config_path, "key = value config file")
        ->check(CLI::ExistingFile);
    sub->add_option("-s,--set", opts.overrides, "override, key=value (repeatable)");
    sub->add_flag("--print-config", opts.print_config,
                  "print the resolved config with all defaults and exit");
    sub->callback([&selected, mode] { selected = mode; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  return run_mode(selected, opts);
}
