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

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "doctest.h"
#include "decolab/io.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// stdout only; stderr is folded in when `merge` is set.
Run run_cmd(const std::string& command, bool merge) {
  const std::string cmd = command + (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

Run run(const std::string& args, bool merge = false) {
  return run_cmd(std::string(DECOLAB_CLI) + " " + args, merge);
}

std::string fixture(const char* name) { return std::string(DECOLAB_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("examples list prints seven names") {
  const Run r = run("examples list");
  CHECK(r.status == 0);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  CHECK(lines == 7);
  CHECK(r.out.find("csu-generator") != std::string::npos);
}

TEST_CASE("examples run markov1 reports gap 1/2") {
  const Run r = run("examples run markov1 --a 0.5 --b 0.25 --no-timing");
  REQUIRE(r.status == 0);
  const auto j = decolab::Json::parse(r.out);
  CHECK(j["verdict"] == "hamiltonian_persistent_part");
  CHECK(std::abs(j["spectrum"]["gap"].get<double>() - 0.5) <= 1e-10);
}

TEST_CASE("examples run csu-generator has S of dimension 4") {
  const Run r = run("examples run csu-generator --delta 1.0 --no-timing");
  REQUIRE(r.status == 0);
  const auto j = decolab::Json::parse(r.out);
  CHECK(j["persistent_system"]["dim"] == 4);
  CHECK(j["product_table"]["center_dimension"] == 1);
}

TEST_CASE("analyze is deterministic and honors the format flag") {
  const Run a = run("analyze " + fixture("kraus2.json") + " --seed 3 --no-timing");
  const Run b = run("analyze " + fixture("kraus2.json") + " --seed 3 --no-timing");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  const Run md = run("analyze " + fixture("kraus2.json") + " --format md");
  CHECK(md.status == 0);
  CHECK(md.out.find("hamiltonian_persistent_part") != std::string::npos);
}

TEST_CASE("verdicts are results: not gapped exits 0") {
  const Run r = run("analyze " + fixture("not_gapped.json") + " --no-timing");
  CHECK(r.status == 0);
  CHECK(decolab::Json::parse(r.out)["verdict"] == "not_gapped");
}

TEST_CASE("input errors exit 2") {
  const Run bad = run("analyze " + fixture("bad_row_sum.json"), true);
  CHECK(bad.status == 2);
  CHECK(bad.out.find("row 1") != std::string::npos);
  CHECK(run("analyze /nonexistent.json").status == 2);
  CHECK(run("examples run nosuch").status == 2);
  CHECK(run("analyze " + fixture("kraus2.json") + " --format xml").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run_cmd("DECOLAB_SEED=abc " + std::string(DECOLAB_CLI) + " examples run kraus2", false).status == 2);
}

TEST_CASE("probe emits a report") {
  const Run r = run("probe --trials 30 --dim 2 --seed 1");
  REQUIRE(r.status == 0);
  const auto j = decolab::Json::parse(r.out);
  CHECK(j["trials"] == 30);
  CHECK(j["controls"] == j["controls_passed"]);
  CHECK(j["counterexamples"].is_array());
}
