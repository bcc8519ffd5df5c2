// Copyright 2026 The decolab Authors
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

// decolab command-line tool.
//
// Exit codes: 0 analysis completed (any verdict), 2 input error,
// 3 numerical failure, 4 internal invariant violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "decolab/decoherence.hpp"
#include "decolab/error.hpp"
#include "decolab/examples.hpp"
#include "decolab/io.hpp"

namespace {

using namespace decolab;

struct CommonFlags {
  std::optional<double> tol_ph;
  std::optional<std::size_t> nodes;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_max;
  std::string format = "json";
  bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--tol-ph", f.tol_ph, "Peripheral classification tolerance")
      ->check(CLI::Range(0.0, 0.5));
  cmd->add_option("--nodes", f.nodes, "Initial contour quadrature nodes")
      ->check(CLI::Range(std::size_t{1}, kContourNodeCap));
  cmd->add_option("--seed", f.seed, "Seed for sampled estimates (default DECOLAB_SEED or 0)");
  cmd->add_option("--n-max", f.n_max, "Largest power in the decay profile")
      ->check(CLI::Range(std::size_t{6}, std::size_t{100000}));
  cmd->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"json", "md"}));
  cmd->add_flag("--no-timing", f.no_timing, "Omit wall-clock timing from JSON output");
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("DECOLAB_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string("DECOLAB_SEED is not a non-negative integer: ") + s);
  }
}

void apply(const CommonFlags& f, InputSpec& spec, bool seed_in_file) {
  if (f.tol_ph) spec.options.tol_ph = *f.tol_ph;
  if (f.nodes) spec.options.nodes = *f.nodes;
  if (f.n_max) spec.options.n_max = *f.n_max;
  if (f.seed) {
    spec.options.seed = *f.seed;
  } else if (!seed_in_file) {
    if (const auto s = env_seed()) spec.options.seed = *s;
  }
}

void emit(const RunReport& report, const CommonFlags& f) {
  if (f.format == "md") {
    std::cout << report_to_markdown(report);
  } else {
    std::cout << report_to_json(report, !f.no_timing).dump(2) << "\n";
  }
}

bool file_sets_seed(const std::string& path) {
  std::ifstream in(path);
  if (!in) return false;
  try {
    const Json j = Json::parse(in);
    return j.contains("options") && j.at("options").contains("seed");
  } catch (const std::exception&) {
    return false;
  }
}

Json probe_to_json(const ProbeReport& r) {
  Json j;
  j["trials"] = r.trials;
  j["dim"] = r.dim;
  j["seed"] = r.seed;
  j["survivors"] = r.survivors;
  j["survivors_automorphic"] = r.survivors_automorphic;
  j["controls"] = r.controls;
  j["controls_passed"] = r.controls_passed;
  Json ces = Json::array();
  for (const auto& t : r.counterexamples) {
    Json kraus = Json::array();
    for (const auto& k : t.kraus) kraus.push_back(matrix_to_json(k));
    ces.push_back({{"index", t.index},
                   {"seed", t.seed},
                   {"kraus_count", t.kraus_count},
                   {"min_modulus", t.min_modulus},
                   {"multiplicativity_residual", t.multiplicativity_residual},
                   {"kraus", kraus}});
  }
  j["counterexamples"] = ces;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral and decoherence analysis of unital completely positive maps"};
  app.require_subcommand(1);

  CommonFlags analyze_flags;
  std::string input_path;
  auto* analyze = app.add_subcommand("analyze", "Analyze a channel described by a JSON file");
  analyze->add_option("file", input_path, "Input JSON file")->required();
  add_common(analyze, analyze_flags);

  auto* examples = app.add_subcommand("examples", "Built-in example channels");
  examples->require_subcommand(1);
  examples->add_subcommand("list", "List example names");
  CommonFlags run_flags;
  std::string example_name;
  ExampleParams params;
  auto* run = examples->add_subcommand("run", "Analyze a built-in example");
  run->add_option("name", example_name, "Example name")->required();
  run->add_option("--a", params.a, "Parameter a of the Markov examples");
  run->add_option("--b", params.b, "Parameter b of markov1");
  run->add_option("--delta", params.delta, "Time step of csu-generator");
  add_common(run, run_flags);

  std::size_t trials = 1000;
  std::size_t dim = 2;
  std::optional<std::uint64_t> probe_seed;
  auto* probe = app.add_subcommand("probe", "Random search for non-automorphic unimodular channels");
  probe->add_option("--trials", trials, "Number of random channels")->check(CLI::PositiveNumber);
  probe->add_option("--dim", dim, "Matrix size n of M_n")->check(CLI::Range(1, 8));
  probe->add_option("--seed", probe_seed, "Master seed (default DECOLAB_SEED or 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) {
      InputSpec spec = parse_input_file(input_path);
      apply(analyze_flags, spec, file_sets_seed(input_path));
      emit(run_analysis(spec), analyze_flags);
    } else if (examples->parsed()) {
      if (run->parsed()) {
        InputSpec spec = builtin_example(example_name, params);
        apply(run_flags, spec, false);
        emit(run_analysis(spec), run_flags);
      } else {
        for (const auto& n : builtin_example_names()) std::cout << n << "\n";
      }
    } else if (probe->parsed()) {
      std::uint64_t seed = 0;
      if (probe_seed) {
        seed = *probe_seed;
      } else if (const auto s = env_seed()) {
        seed = *s;
      }
      const ProbeReport r = conjecture_probe(trials, AlgebraShape::full(dim), seed);
      std::cout << probe_to_json(r).dump(2) << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "decolab: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "decolab: internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
