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

// JSON input specs, the analysis driver and its report.
//
// Input schema:
//   {"algebra": {"blocks": [n1, ...]},
//    "map": {"kind": "kraus", "operators": [M, ...]}
//         | {"kind": "stochastic" | "lifted", "matrix": R}
//         | {"kind": "koopman", "targets": [t0, ...]}
//         | {"kind": "generator", "time_step": dt,
//            "lindblad": {"hamiltonian": M, "jumps": [M, ...]}}
//         | {"kind": "generator", "time_step": dt, "matrix": G}
//         | {"kind": "superoperator", "matrix": S},
//    "options": {"tol_ph", "nodes", "seed", "n_max", "max_power"}}
// Matrices are row-major nested arrays; a complex entry is [re, im] or a
// bare real. G and S act on vec coordinates: blocks stacked column-major and
// concatenated. "algebra" may be omitted whenever the map determines it.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decolab/decoherence.hpp"
#include "decolab/koopman.hpp"
#include "json.hpp"

namespace decolab {

using Json = nlohmann::ordered_json;

enum class MapKind { kraus, stochastic, koopman, lifted, generator, superoperator };

std::string to_string(MapKind k);
MapKind map_kind_from_string(const std::string& s);

struct AnalysisOptions {
  double tol_ph = 1e-8;
  std::size_t nodes = 16;
  std::uint64_t seed = 0;
  std::size_t n_max = 25;
  std::size_t max_power = 720;

  bool operator==(const AnalysisOptions&) const = default;
};

struct InputSpec {
  AlgebraShape algebra{std::vector<std::size_t>{1}};
  MapKind kind = MapKind::superoperator;
  std::vector<CMatrix> kraus;
  RMatrix real_matrix;                ///< stochastic / lifted
  std::vector<std::size_t> targets;   ///< koopman
  CMatrix matrix;                     ///< generator (vec form) / superoperator
  double time_step = 1.0;             ///< generator
  bool lindblad = false;              ///< generator given as H and jumps
  CMatrix hamiltonian;
  std::vector<CMatrix> jumps;
  AnalysisOptions options;
};

/// Throws InputError with the offending field path (and line for syntax
/// errors) on any schema or dimension violation.
InputSpec parse_input_text(const std::string& text,
                           const std::string& origin = "<input>");
InputSpec parse_input_file(const std::string& path);

Json spec_to_json(const InputSpec& spec);

Channel build_channel(const InputSpec& spec);

// ---------------------------------------------------------------------------
// Report

/// Row-major dense matrix; keeps report equality well defined for any size.
using DenseRows = std::vector<std::vector<Complex>>;

DenseRows to_rows(const CMatrix& m);
CMatrix from_rows(const DenseRows& rows);

struct ChannelSummary {
  std::string provenance;
  std::vector<std::size_t> blocks;
  bool unital = false;
  bool completely_positive = false;
  double min_choi_eigenvalue = 0.0;
  double choi_norm = 0.0;
  double realness_residual = 0.0;
  bool operator==(const ChannelSummary&) const = default;
};

struct SpectrumSummary {
  std::vector<Complex> peripheral;
  std::vector<Complex> interior;
  double interior_radius = 0.0;
  double gap = 0.0;
  double epsilon_ph = 0.0;
  double contour_radius = 0.0;
  std::size_t rank_p = 0;
  std::size_t rank_q = 0;
  std::optional<double> cross_check_discrepancy;
  std::size_t contour_nodes = 0;
  std::string cross_check_note;
  bool operator==(const SpectrumSummary&) const = default;
};

struct PowerLimitSummary {
  std::size_t period = 0;
  std::size_t iterations = 0;
  double split_residual = 0.0;
  bool operator==(const PowerLimitSummary&) const = default;
};

struct SystemSummary {
  std::size_t dim = 0;
  std::vector<std::vector<DenseRows>> basis;  ///< blocks of each element
  double adjoint_residual = 0.0;
  double min_singular = 0.0;
  bool selfadjoint_basis = false;
  bool operator==(const SystemSummary&) const = default;
};

struct TableSummary {
  std::size_t dim = 0;
  double expansion_residual = 0.0;
  std::size_t center_dimension = 0;
  std::vector<Complex> structure_constants;  ///< c[(i d + j) d + k]
  bool operator==(const TableSummary&) const = default;
};

struct CstarSummary {
  bool passed = false;
  double associativity = 0.0;
  double unit = 0.0;
  double involution = 0.0;
  double cstar_identity = 0.0;
  double positivity = 0.0;
  std::optional<double> regular_norm_cstar_identity;
  std::string note;
  bool operator==(const CstarSummary&) const = default;
};

struct AutomorphismSummary {
  bool passed = false;
  bool invertible = false;
  std::optional<double> condition_number;  ///< absent when singular
  double invariance_residual = 0.0;
  double multiplicativity = 0.0;
  double involution = 0.0;
  bool isometry_ok = false;
  double isometry = 0.0;
  DenseRows restriction;
  bool operator==(const AutomorphismSummary&) const = default;
};

struct DomainSummary {
  std::size_t dim = 0;         ///< multiplicative domain of Phi
  std::size_t stable_dim = 0;  ///< common domain of all powers
  std::size_t stable_powers = 0;
  double validation_residual = 0.0;
  bool in_S = false;
  bool equals_S = false;
  bool operator==(const DomainSummary&) const = default;
};

struct DecaySummary {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> resolvent_bound;
  std::optional<double> slope;
  std::optional<double> slope_limit;  ///< absent for nilpotent interiors
  bool slope_ok = false;
  double radius = 0.0;
  double resolvent_constant = 0.0;
  bool bound_ok = false;
  std::size_t tail_start = 0;
  bool nilpotent_interior = false;
  bool operator==(const DecaySummary&) const = default;
};

struct EventualRangeSummary {
  std::size_t dim = 0;
  std::size_t stabilization_index = 0;
  std::vector<std::size_t> ranks;
  bool operator==(const EventualRangeSummary&) const = default;
};

struct KoopmanSummary {
  std::vector<std::size_t> cycles;
  std::vector<std::size_t> tail_lengths;
  std::vector<std::size_t> eventual_image;
  std::size_t stabilization_index = 0;
  std::vector<Complex> predicted_spectrum;
  bool spectrum_matches = false;
  bool operator==(const KoopmanSummary&) const = default;
};

struct RunReport {
  Json input;
  ChannelSummary channel;
  std::vector<Complex> eigenvalues;
  double spectral_radius = 0.0;
  std::optional<SpectrumSummary> spectrum;
  std::optional<PowerLimitSummary> power_limit;
  std::optional<SystemSummary> system;
  std::optional<bool> p_completely_positive;
  std::optional<double> p_min_choi_eigenvalue;
  std::optional<TableSummary> table;
  std::optional<CstarSummary> cstar;
  std::optional<AutomorphismSummary> automorphism;
  std::optional<DomainSummary> multiplicative_domain;
  std::optional<bool> faithful_invariant_state;
  std::optional<double> invariant_state_min_eigenvalue;
  std::optional<DecaySummary> decay;
  std::optional<EventualRangeSummary> eventual_range;
  std::optional<KoopmanSummary> koopman;
  std::string verdict;
  std::vector<std::string> notes;
  /// Wall-clock seconds; excluded from comparison and optional in output.
  std::optional<double> elapsed_seconds;

  /// Field-wise equality ignoring elapsed_seconds.
  bool operator==(const RunReport& other) const;
};

/// Deterministic given spec.options.seed.
RunReport run_analysis(const InputSpec& spec);

/// Also returns the full decoherence report for callers that need more
/// than the serialized summary.
RunReport run_analysis(const InputSpec& spec, DecoherenceReport* full);

Json report_to_json(const RunReport& report, bool include_timing = true);
RunReport report_from_json(const Json& j);
std::string report_to_markdown(const RunReport& report);

// Helpers shared with the CLI and bindings.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& path);
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, const std::string& path);

}  // namespace decolab
