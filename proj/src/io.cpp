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

#include "decolab/io.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "decolab/error.hpp"

namespace decolab {

using Index = Eigen::Index;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw InputError(path + ": " + msg);
}

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string child(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void check_keys(const Json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) {
      fail(child(path, item.key()), "unknown field");
    }
  }
}

const Json& require(const Json& obj, const std::string& path,
                    const std::string& key) {
  if (!obj.contains(key)) fail(child(path, key), "missing required field");
  return obj.at(key);
}

double real_from_json(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "number is not finite");
  return v;
}

std::size_t count_from_json(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::size_t>(j.get<std::int64_t>());
  }
  fail(path, "expected a non-negative integer");
}

std::uint64_t seed_from_json(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  fail(path, "expected a non-negative integer seed");
}

RMatrix real_matrix_from_json(const Json& j, const std::string& path) {
  const CMatrix m = matrix_from_json(j, path);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (m(r, c).imag() != 0.0) {
        fail(child(child(path, static_cast<std::size_t>(r)), static_cast<std::size_t>(c)),
             "expected a real entry");
      }
    }
  }
  return m.real();
}

std::vector<CMatrix> matrix_list_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty list of matrices");
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(matrix_from_json(j[i], child(path, i)));
  }
  return out;
}

void require_square_size(const CMatrix& m, Index n, const std::string& path) {
  if (m.rows() != n || m.cols() != n) {
    std::ostringstream os;
    os << "expected a " << n << "x" << n << " matrix, got " << m.rows() << "x"
       << m.cols();
    fail(path, os.str());
  }
}

void match_algebra(const std::optional<AlgebraShape>& given,
                   const AlgebraShape& implied, const std::string& what) {
  if (given && !(*given == implied)) {
    fail("algebra.blocks", "does not match the algebra implied by the " + what);
  }
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Json complex_list(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (const Complex z : v) a.push_back(complex_to_json(z));
  return a;
}

std::vector<Complex> complex_list_from(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of complex numbers");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(complex_from_json(j[i], child(path, i)));
  }
  return out;
}

Json rows_to_json(const DenseRows& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back(complex_list(r));
  return a;
}

DenseRows rows_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a matrix");
  DenseRows out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(complex_list_from(j[i], child(path, i)));
  }
  return out;
}

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get_optional(const Json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

// ---------------------------------------------------------------------------
// Primitive conversions

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {real_from_json(j, path), 0.0};
  if (j.is_array() && j.size() == 2) {
    return {real_from_json(j[0], child(path, 0)), real_from_json(j[1], child(path, 1))};
  }
  fail(path, "expected a number or a [re, im] pair");
}

Json matrix_to_json(const CMatrix& m) { return rows_to_json(to_rows(m)); }

CMatrix matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty matrix (list of rows)");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].empty()) fail(child(path, r), "expected a non-empty row");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) {
      std::ostringstream os;
      os << "row has " << j[r].size() << " entries, expected " << cols;
      fail(child(path, r), os.str());
    }
  }
  CMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          complex_from_json(j[r][c], child(child(path, r), c));
    }
  }
  return m;
}

DenseRows to_rows(const CMatrix& m) {
  DenseRows out(static_cast<std::size_t>(m.rows()));
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(r)].push_back(m(r, c));
  }
  return out;
}

CMatrix from_rows(const DenseRows& rows) {
  if (rows.empty()) return CMatrix(0, 0);
  CMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) {
      throw InputError("from_rows: ragged matrix");
    }
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return m;
}

std::string to_string(MapKind k) {
  switch (k) {
    case MapKind::kraus:
      return "kraus";
    case MapKind::stochastic:
      return "stochastic";
    case MapKind::koopman:
      return "koopman";
    case MapKind::lifted:
      return "lifted";
    case MapKind::generator:
      return "generator";
    case MapKind::superoperator:
      return "superoperator";
  }
  return "superoperator";
}

MapKind map_kind_from_string(const std::string& s) {
  for (const MapKind k : {MapKind::kraus, MapKind::stochastic, MapKind::koopman,
                          MapKind::lifted, MapKind::generator, MapKind::superoperator}) {
    if (to_string(k) == s) return k;
  }
  throw InputError("map.kind: unknown kind '" + s +
                   "' (expected kraus, stochastic, koopman, lifted, generator "
                   "or superoperator)");
}

// ---------------------------------------------------------------------------
// Parsing

InputSpec parse_input_text(const std::string& text, const std::string& origin) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::ostringstream os;
    os << origin << ":" << line << ":" << col << ": JSON syntax error: " << e.what();
    throw InputError(os.str());
  }
  try {
    if (!doc.is_object()) fail("(root)", "expected an object");
    check_keys(doc, "", {"algebra", "map", "options", "name", "description"});

    std::optional<AlgebraShape> given;
    if (doc.contains("algebra")) {
      const Json& alg = doc.at("algebra");
      if (!alg.is_object()) fail("algebra", "expected an object");
      check_keys(alg, "algebra", {"blocks"});
      const Json& blocks = require(alg, "algebra", "blocks");
      if (!blocks.is_array() || blocks.empty()) {
        fail("algebra.blocks", "expected a non-empty list of block sizes");
      }
      std::vector<std::size_t> dims;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::size_t n = count_from_json(blocks[i], child("algebra.blocks", i));
        if (n == 0) fail(child("algebra.blocks", i), "block size must be positive");
        dims.push_back(n);
      }
      given = AlgebraShape(std::move(dims));
    }

    InputSpec spec;
    const Json& map = require(doc, "", "map");
    if (!map.is_object()) fail("map", "expected an object");
    const Json& kind_json = require(map, "map", "kind");
    if (!kind_json.is_string()) fail("map.kind", "expected a string");
    spec.kind = map_kind_from_string(kind_json.get<std::string>());

    switch (spec.kind) {
      case MapKind::kraus: {
        check_keys(map, "map", {"kind", "operators"});
        spec.kraus = matrix_list_from_json(require(map, "map", "operators"), "map.operators");
        const Index n = spec.kraus.front().rows();
        for (std::size_t i = 0; i < spec.kraus.size(); ++i) {
          require_square_size(spec.kraus[i], n, child("map.operators", i));
        }
        spec.algebra = AlgebraShape::full(static_cast<std::size_t>(n));
        match_algebra(given, spec.algebra, "Kraus operators");
        break;
      }
      case MapKind::stochastic:
      case MapKind::lifted: {
        check_keys(map, "map", {"kind", "matrix"});
        spec.real_matrix = real_matrix_from_json(require(map, "map", "matrix"), "map.matrix");
        try {
          validate_stochastic(spec.real_matrix);
        } catch (const InputError& e) {
          fail("map.matrix", e.what());
        }
        const auto m = static_cast<std::size_t>(spec.real_matrix.rows());
        spec.algebra = spec.kind == MapKind::stochastic ? AlgebraShape::abelian(m)
                                                        : AlgebraShape::full(m);
        match_algebra(given, spec.algebra, "matrix");
        break;
      }
      case MapKind::koopman: {
        check_keys(map, "map", {"kind", "targets"});
        const Json& t = require(map, "map", "targets");
        if (!t.is_array() || t.empty()) fail("map.targets", "expected a non-empty list");
        for (std::size_t i = 0; i < t.size(); ++i) {
          const std::size_t v = count_from_json(t[i], child("map.targets", i));
          if (v >= t.size()) {
            std::ostringstream os;
            os << "target " << v << " is out of range [0, " << t.size() << ")";
            fail(child("map.targets", i), os.str());
          }
          spec.targets.push_back(v);
        }
        spec.algebra = AlgebraShape::abelian(spec.targets.size());
        match_algebra(given, spec.algebra, "target list");
        break;
      }
      case MapKind::generator: {
        check_keys(map, "map", {"kind", "time_step", "lindblad", "matrix"});
        if (map.contains("time_step")) {
          spec.time_step = real_from_json(map.at("time_step"), "map.time_step");
          if (!(spec.time_step > 0.0)) fail("map.time_step", "must be positive");
        }
        if (map.contains("lindblad") == map.contains("matrix")) {
          fail("map", "generator needs exactly one of 'lindblad' or 'matrix'");
        }
        if (map.contains("lindblad")) {
          spec.lindblad = true;
          const Json& lb = map.at("lindblad");
          if (!lb.is_object()) fail("map.lindblad", "expected an object");
          check_keys(lb, "map.lindblad", {"hamiltonian", "jumps"});
          spec.jumps = matrix_list_from_json(require(lb, "map.lindblad", "jumps"),
                                             "map.lindblad.jumps");
          const Index n = spec.jumps.front().rows();
          for (std::size_t i = 0; i < spec.jumps.size(); ++i) {
            require_square_size(spec.jumps[i], n, child("map.lindblad.jumps", i));
          }
          if (lb.contains("hamiltonian")) {
            spec.hamiltonian = matrix_from_json(lb.at("hamiltonian"), "map.lindblad.hamiltonian");
            require_square_size(spec.hamiltonian, n, "map.lindblad.hamiltonian");
            if ((spec.hamiltonian - spec.hamiltonian.adjoint()).norm() >
                tol::structural * std::max(1.0, spec.hamiltonian.norm())) {
              fail("map.lindblad.hamiltonian", "must be selfadjoint");
            }
          } else {
            spec.hamiltonian = CMatrix::Zero(n, n);
          }
          spec.algebra = AlgebraShape::full(static_cast<std::size_t>(n));
          match_algebra(given, spec.algebra, "Lindblad operators");
        } else {
          if (!given) fail("algebra", "required for a generator given as a matrix");
          spec.algebra = *given;
          spec.matrix = matrix_from_json(map.at("matrix"), "map.matrix");
          require_square_size(spec.matrix, static_cast<Index>(spec.algebra.element_dim()),
                              "map.matrix");
        }
        break;
      }
      case MapKind::superoperator: {
        check_keys(map, "map", {"kind", "matrix"});
        if (!given) fail("algebra", "required for a superoperator");
        spec.algebra = *given;
        spec.matrix = matrix_from_json(require(map, "map", "matrix"), "map.matrix");
        require_square_size(spec.matrix, static_cast<Index>(spec.algebra.element_dim()),
                            "map.matrix");
        break;
      }
    }

    if (doc.contains("options")) {
      const Json& opt = doc.at("options");
      if (!opt.is_object()) fail("options", "expected an object");
      check_keys(opt, "options", {"tol_ph", "nodes", "seed", "n_max", "max_power"});
      AnalysisOptions& o = spec.options;
      if (opt.contains("tol_ph")) {
        o.tol_ph = real_from_json(opt.at("tol_ph"), "options.tol_ph");
        if (!(o.tol_ph > 0.0 && o.tol_ph < 0.5)) fail("options.tol_ph", "must lie in (0, 0.5)");
      }
      if (opt.contains("nodes")) {
        o.nodes = count_from_json(opt.at("nodes"), "options.nodes");
        if (o.nodes == 0 || o.nodes > kContourNodeCap) {
          fail("options.nodes", "must lie in [1, 65536]");
        }
      }
      if (opt.contains("seed")) o.seed = seed_from_json(opt.at("seed"), "options.seed");
      if (opt.contains("n_max")) {
        o.n_max = count_from_json(opt.at("n_max"), "options.n_max");
        if (o.n_max < 6) fail("options.n_max", "must be at least 6");
      }
      if (opt.contains("max_power")) {
        o.max_power = count_from_json(opt.at("max_power"), "options.max_power");
        if (o.max_power == 0) fail("options.max_power", "must be positive");
      }
    }
    return spec;
  } catch (const InputError& e) {
    throw InputError(origin + ": " + e.what());
  } catch (const Json::exception& e) {
    throw InputError(origin + ": " + e.what());
  }
}

InputSpec parse_input_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_input_text(buf.str(), path);
}

Json spec_to_json(const InputSpec& spec) {
  Json j;
  j["algebra"]["blocks"] = spec.algebra.block_dims();
  Json map;
  map["kind"] = to_string(spec.kind);
  switch (spec.kind) {
    case MapKind::kraus: {
      Json ops = Json::array();
      for (const auto& k : spec.kraus) ops.push_back(matrix_to_json(k));
      map["operators"] = ops;
      break;
    }
    case MapKind::stochastic:
    case MapKind::lifted:
      map["matrix"] = matrix_to_json(spec.real_matrix.cast<Complex>());
      break;
    case MapKind::koopman:
      map["targets"] = spec.targets;
      break;
    case MapKind::generator:
      map["time_step"] = spec.time_step;
      if (spec.lindblad) {
        map["lindblad"]["hamiltonian"] = matrix_to_json(spec.hamiltonian);
        Json jumps = Json::array();
        for (const auto& k : spec.jumps) jumps.push_back(matrix_to_json(k));
        map["lindblad"]["jumps"] = jumps;
      } else {
        map["matrix"] = matrix_to_json(spec.matrix);
      }
      break;
    case MapKind::superoperator:
      map["matrix"] = matrix_to_json(spec.matrix);
      break;
  }
  j["map"] = map;
  const AnalysisOptions& o = spec.options;
  j["options"] = {{"tol_ph", o.tol_ph},
                  {"nodes", o.nodes},
                  {"seed", o.seed},
                  {"n_max", o.n_max},
                  {"max_power", o.max_power}};
  return j;
}

Channel build_channel(const InputSpec& spec) {
  switch (spec.kind) {
    case MapKind::kraus:
      return from_kraus(KrausFamily{spec.algebra.block_dim(0), spec.kraus});
    case MapKind::stochastic:
      return from_stochastic(spec.real_matrix);
    case MapKind::koopman:
      return koopman_channel(FiniteMap{spec.targets});
    case MapKind::lifted:
      return lift_via_conditional_expectation(spec.real_matrix);
    case MapKind::generator: {
      const CMatrix g = spec.lindblad
                            ? lindblad_generator(spec.algebra.block_dim(0),
                                                 spec.hamiltonian, spec.jumps)
                            : spec.matrix;
      return from_generator(GeneratorSpec{spec.algebra, g, spec.time_step});
    }
    case MapKind::superoperator:
      return Channel(spec.algebra, spec.matrix, Provenance::raw);
  }
  throw InvariantError("build_channel: unhandled map kind");
}

// ---------------------------------------------------------------------------
// Driver

bool RunReport::operator==(const RunReport& o) const {
  return input == o.input && channel == o.channel && eigenvalues == o.eigenvalues &&
         spectral_radius == o.spectral_radius && spectrum == o.spectrum &&
         power_limit == o.power_limit && system == o.system &&
         p_completely_positive == o.p_completely_positive &&
         p_min_choi_eigenvalue == o.p_min_choi_eigenvalue && table == o.table &&
         cstar == o.cstar && automorphism == o.automorphism &&
         multiplicative_domain == o.multiplicative_domain &&
         faithful_invariant_state == o.faithful_invariant_state &&
         invariant_state_min_eigenvalue == o.invariant_state_min_eigenvalue && decay == o.decay &&
         eventual_range == o.eventual_range && koopman == o.koopman &&
         verdict == o.verdict && notes == o.notes;
}

RunReport run_analysis(const InputSpec& spec) { return run_analysis(spec, nullptr); }

RunReport run_analysis(const InputSpec& spec, DecoherenceReport* full) {
  const auto start = std::chrono::steady_clock::now();
  const Channel ch = build_channel(spec);
  RunReport r;
  r.input = spec_to_json(spec);

  r.channel.provenance = to_string(ch.provenance());
  r.channel.blocks = ch.shape().block_dims();
  r.channel.unital = is_unital(ch, tol::agreement);
  const CpWitness cp = is_completely_positive(ch);
  r.channel.completely_positive = cp.completely_positive;
  r.channel.min_choi_eigenvalue = cp.min_eigenvalue;
  r.channel.choi_norm = cp.choi_norm;
  r.channel.realness_residual = ch.realness_residual();

  DecoherenceOptions opts;
  opts.spectral.epsilon_ph = spec.options.tol_ph;
  opts.spectral.contour_nodes = spec.options.nodes;
  opts.decay.n_max = spec.options.n_max;
  opts.decay.seed = spec.options.seed;
  opts.seed = spec.options.seed;
  DecoherenceReport d = decoherence_split(ch, opts);

  r.eigenvalues = d.eigenvalues;
  r.spectral_radius = d.spectral_radius;
  r.verdict = to_string(d.verdict);
  r.notes = d.notes;

  if (d.split) {
    const SpectralSplit& s = *d.split;
    SpectrumSummary sp;
    sp.peripheral = s.peripheral;
    sp.interior = s.interior;
    sp.interior_radius = s.interior_radius;
    sp.gap = s.gap;
    sp.epsilon_ph = s.epsilon_ph;
    sp.contour_radius = s.contour_radius;
    sp.rank_p = s.rank_p();
    sp.rank_q = s.rank_q();
    sp.cross_check_discrepancy = s.cross_check_discrepancy;
    sp.contour_nodes = s.contour_nodes;
    sp.cross_check_note = s.cross_check_note;
    r.spectrum = sp;
    try {
      const PowerLimit pl = power_limit_projection(ch, s, spec.options.max_power);
      r.power_limit = PowerLimitSummary{pl.period, pl.iterations, pl.split_residual};
    } catch (const Error& e) {
      r.notes.push_back(std::string("power limit: ") + e.what());
    }
  }
  if (d.system) {
    SystemSummary ss;
    ss.dim = d.system->dim();
    for (const auto& e : d.system->basis()) {
      std::vector<DenseRows> blocks;
      for (const auto& b : e.blocks()) blocks.push_back(to_rows(b));
      ss.basis.push_back(std::move(blocks));
    }
    ss.adjoint_residual = d.system->adjoint_residual();
    ss.min_singular = d.system->min_singular();
    ss.selfadjoint_basis = d.system->selfadjoint_basis();
    r.system = ss;
  }
  if (d.p_completely_positive) {
    r.p_completely_positive = d.p_completely_positive->completely_positive;
    r.p_min_choi_eigenvalue = d.p_completely_positive->min_eigenvalue;
  }
  if (d.table) {
    TableSummary t;
    t.dim = d.table->dim();
    t.expansion_residual = d.table->expansion_residual;
    t.center_dimension = center_dimension(*d.table);
    for (std::size_t i = 0; i < t.dim; ++i) {
      for (std::size_t j = 0; j < t.dim; ++j) {
        for (std::size_t k = 0; k < t.dim; ++k) {
          t.structure_constants.push_back(d.table->at(i, j, k));
        }
      }
    }
    r.table = t;
  }
  if (d.cstar) {
    const CstarCertificate& c = *d.cstar;
    r.cstar = CstarSummary{c.passed,         c.associativity, c.unit,
                           c.involution,     c.cstar_identity, c.positivity,
                           c.regular_norm_cstar_identity, c.note};
  }
  if (d.automorphism) {
    const AutomorphismCertificate& a = *d.automorphism;
    AutomorphismSummary as;
    as.passed = a.passed;
    as.invertible = a.invertible;
    if (std::isfinite(a.condition_number)) as.condition_number = a.condition_number;
    as.invariance_residual = a.invariance_residual;
    as.multiplicativity = a.multiplicativity;
    as.involution = a.involution;
    as.isometry_ok = a.isometry_ok;
    as.isometry = a.isometry;
    as.restriction = to_rows(a.restriction);
    r.automorphism = as;
  }
  if (d.domain && d.stable_domain) {
    r.multiplicative_domain = DomainSummary{
        d.domain->dim(), d.stable_domain->dim(), d.stable_domain->powers,
        std::max(d.domain->validation_residual, d.stable_domain->validation_residual),
        d.domain_in_S, d.domain_equals_S};
  }
  if (d.invariant_state) {
    r.faithful_invariant_state = d.invariant_state->faithful;
    r.invariant_state_min_eigenvalue = d.invariant_state->min_eigenvalue;
  }
  if (d.decay) {
    const DecayProfile& p = *d.decay;
    DecaySummary ds;
    ds.lower = p.lower;
    ds.upper = p.upper;
    ds.resolvent_bound = p.resolvent_bound;
    ds.slope = p.slope;
    if (std::isfinite(p.slope_limit)) ds.slope_limit = p.slope_limit;
    ds.slope_ok = p.slope_ok;
    ds.radius = p.radius;
    ds.resolvent_constant = p.resolvent_constant;
    ds.bound_ok = p.bound_ok;
    ds.tail_start = p.tail_start;
    ds.nilpotent_interior = p.nilpotent_interior;
    r.decay = ds;
  }
  try {
    const EventualRange er = eventual_range(ch);
    r.eventual_range = EventualRangeSummary{static_cast<std::size_t>(er.basis.cols()),
                                            er.stabilization_index, er.ranks};
  } catch (const Error& e) {
    r.notes.push_back(std::string("eventual range: ") + e.what());
  }
  if (spec.kind == MapKind::koopman) {
    const CycleStructure cs = cycle_structure(FiniteMap{spec.targets});
    KoopmanSummary ks{cs.cycles, cs.tail_lengths, cs.eventual_image,
                      cs.stabilization_index, cs.predicted_spectrum, false};
    ks.spectrum_matches = match_spectra(cs.predicted_spectrum, r.eigenvalues,
                                        tol::agreement).matched;
    r.koopman = ks;
  }
  if (full != nullptr) *full = std::move(d);
  r.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

Json report_to_json(const RunReport& r, bool include_timing) {
  Json j;
  j["input"] = r.input;
  j["channel"] = {{"provenance", r.channel.provenance},
                  {"blocks", r.channel.blocks},
                  {"unital", r.channel.unital},
                  {"completely_positive", r.channel.completely_positive},
                  {"min_choi_eigenvalue", r.channel.min_choi_eigenvalue},
                  {"choi_norm", r.channel.choi_norm},
                  {"realness_residual", r.channel.realness_residual}};
  j["eigenvalues"] = complex_list(r.eigenvalues);
  j["spectral_radius"] = r.spectral_radius;
  if (r.spectrum) {
    const SpectrumSummary& s = *r.spectrum;
    Json sj = {{"peripheral", complex_list(s.peripheral)},
               {"interior", complex_list(s.interior)},
               {"interior_radius", s.interior_radius},
               {"gap", s.gap},
               {"epsilon_ph", s.epsilon_ph},
               {"contour_radius", s.contour_radius},
               {"rank_p", s.rank_p},
               {"rank_q", s.rank_q}};
    put_optional(sj, "cross_check_discrepancy", s.cross_check_discrepancy);
    sj["contour_nodes"] = s.contour_nodes;
    sj["cross_check_note"] = s.cross_check_note;
    j["spectrum"] = sj;
  }
  if (r.power_limit) {
    j["power_limit"] = {{"period", r.power_limit->period},
                        {"iterations", r.power_limit->iterations},
                        {"split_residual", r.power_limit->split_residual}};
  }
  if (r.system) {
    Json basis = Json::array();
    for (const auto& e : r.system->basis) {
      Json blocks = Json::array();
      for (const auto& b : e) blocks.push_back(rows_to_json(b));
      basis.push_back(blocks);
    }
    j["persistent_system"] = {{"dim", r.system->dim},
                              {"basis", basis},
                              {"adjoint_residual", r.system->adjoint_residual},
                              {"min_singular", r.system->min_singular},
                              {"selfadjoint_basis", r.system->selfadjoint_basis}};
  }
  if (r.p_completely_positive) {
    j["p_completely_positive"] = {{"completely_positive", *r.p_completely_positive},
                                  {"min_choi_eigenvalue", *r.p_min_choi_eigenvalue}};
  }
  if (r.table) {
    j["product_table"] = {{"dim", r.table->dim},
                          {"expansion_residual", r.table->expansion_residual},
                          {"center_dimension", r.table->center_dimension},
                          {"structure_constants", complex_list(r.table->structure_constants)}};
  }
  if (r.cstar) {
    const CstarSummary& c = *r.cstar;
    Json cj = {{"passed", c.passed},
               {"associativity", c.associativity},
               {"unit", c.unit},
               {"involution", c.involution},
               {"cstar_identity", c.cstar_identity},
               {"positivity", c.positivity}};
    put_optional(cj, "regular_norm_cstar_identity", c.regular_norm_cstar_identity);
    cj["note"] = c.note;
    j["cstar"] = cj;
  }
  if (r.automorphism) {
    const AutomorphismSummary& a = *r.automorphism;
    Json aj = {{"passed", a.passed}, {"invertible", a.invertible}};
    put_optional(aj, "condition_number", a.condition_number);
    aj["invariance_residual"] = a.invariance_residual;
    aj["multiplicativity"] = a.multiplicativity;
    aj["involution"] = a.involution;
    aj["isometry_ok"] = a.isometry_ok;
    aj["isometry"] = a.isometry;
    aj["restriction"] = rows_to_json(a.restriction);
    j["automorphism"] = aj;
  }
  if (r.multiplicative_domain) {
    const DomainSummary& m = *r.multiplicative_domain;
    j["multiplicative_domain"] = {{"dim", m.dim},
                                  {"stable_dim", m.stable_dim},
                                  {"stable_powers", m.stable_powers},
                                  {"validation_residual", m.validation_residual},
                                  {"in_S", m.in_S},
                                  {"equals_S", m.equals_S}};
  }
  if (r.faithful_invariant_state) {
    j["invariant_state"] = {{"faithful", *r.faithful_invariant_state},
                            {"min_eigenvalue", *r.invariant_state_min_eigenvalue}};
  }
  if (r.decay) {
    const DecaySummary& p = *r.decay;
    Json dj = {{"lower", p.lower}, {"upper", p.upper}, {"resolvent_bound", p.resolvent_bound}};
    put_optional(dj, "slope", p.slope);
    put_optional(dj, "slope_limit", p.slope_limit);
    dj["slope_ok"] = p.slope_ok;
    dj["radius"] = p.radius;
    dj["resolvent_constant"] = p.resolvent_constant;
    dj["bound_ok"] = p.bound_ok;
    dj["tail_start"] = p.tail_start;
    dj["nilpotent_interior"] = p.nilpotent_interior;
    j["decay"] = dj;
  }
  if (r.eventual_range) {
    j["eventual_range"] = {{"dim", r.eventual_range->dim},
                           {"stabilization_index", r.eventual_range->stabilization_index},
                           {"ranks", r.eventual_range->ranks}};
  }
  if (r.koopman) {
    const KoopmanSummary& k = *r.koopman;
    j["koopman"] = {{"cycles", k.cycles},
                    {"tail_lengths", k.tail_lengths},
                    {"eventual_image", k.eventual_image},
                    {"stabilization_index", k.stabilization_index},
                    {"predicted_spectrum", complex_list(k.predicted_spectrum)},
                    {"spectrum_matches", k.spectrum_matches}};
  }
  j["verdict"] = r.verdict;
  j["notes"] = r.notes;
  if (include_timing && r.elapsed_seconds) {
    j["timing"] = {{"elapsed_seconds", *r.elapsed_seconds}};
  }
  return j;
}

RunReport report_from_json(const Json& j) {
  try {
    RunReport r;
    r.input = j.at("input");
    const Json& c = j.at("channel");
    r.channel.provenance = c.at("provenance").get<std::string>();
    r.channel.blocks = c.at("blocks").get<std::vector<std::size_t>>();
    r.channel.unital = c.at("unital").get<bool>();
    r.channel.completely_positive = c.at("completely_positive").get<bool>();
    r.channel.min_choi_eigenvalue = c.at("min_choi_eigenvalue").get<double>();
    r.channel.choi_norm = c.at("choi_norm").get<double>();
    r.channel.realness_residual = c.at("realness_residual").get<double>();
    r.eigenvalues = complex_list_from(j.at("eigenvalues"), "eigenvalues");
    r.spectral_radius = j.at("spectral_radius").get<double>();
    if (j.contains("spectrum")) {
      const Json& s = j.at("spectrum");
      SpectrumSummary sp;
      sp.peripheral = complex_list_from(s.at("peripheral"), "spectrum.peripheral");
      sp.interior = complex_list_from(s.at("interior"), "spectrum.interior");
      sp.interior_radius = s.at("interior_radius").get<double>();
      sp.gap = s.at("gap").get<double>();
      sp.epsilon_ph = s.at("epsilon_ph").get<double>();
      sp.contour_radius = s.at("contour_radius").get<double>();
      sp.rank_p = s.at("rank_p").get<std::size_t>();
      sp.rank_q = s.at("rank_q").get<std::size_t>();
      sp.cross_check_discrepancy = get_optional<double>(s, "cross_check_discrepancy");
      sp.contour_nodes = s.at("contour_nodes").get<std::size_t>();
      sp.cross_check_note = s.at("cross_check_note").get<std::string>();
      r.spectrum = sp;
    }
    if (j.contains("power_limit")) {
      const Json& p = j.at("power_limit");
      r.power_limit = PowerLimitSummary{p.at("period").get<std::size_t>(),
                                        p.at("iterations").get<std::size_t>(),
                                        p.at("split_residual").get<double>()};
    }
    if (j.contains("persistent_system")) {
      const Json& s = j.at("persistent_system");
      SystemSummary ss;
      ss.dim = s.at("dim").get<std::size_t>();
      for (const auto& e : s.at("basis")) {
        std::vector<DenseRows> blocks;
        for (const auto& b : e) blocks.push_back(rows_from_json(b, "persistent_system.basis"));
        ss.basis.push_back(std::move(blocks));
      }
      ss.adjoint_residual = s.at("adjoint_residual").get<double>();
      ss.min_singular = s.at("min_singular").get<double>();
      ss.selfadjoint_basis = s.at("selfadjoint_basis").get<bool>();
      r.system = ss;
    }
    if (j.contains("p_completely_positive")) {
      const Json& p = j.at("p_completely_positive");
      r.p_completely_positive = p.at("completely_positive").get<bool>();
      r.p_min_choi_eigenvalue = p.at("min_choi_eigenvalue").get<double>();
    }
    if (j.contains("product_table")) {
      const Json& t = j.at("product_table");
      TableSummary ts;
      ts.dim = t.at("dim").get<std::size_t>();
      ts.expansion_residual = t.at("expansion_residual").get<double>();
      ts.center_dimension = t.at("center_dimension").get<std::size_t>();
      ts.structure_constants =
          complex_list_from(t.at("structure_constants"), "product_table.structure_constants");
      r.table = ts;
    }
    if (j.contains("cstar")) {
      const Json& c2 = j.at("cstar");
      CstarSummary cs;
      cs.passed = c2.at("passed").get<bool>();
      cs.associativity = c2.at("associativity").get<double>();
      cs.unit = c2.at("unit").get<double>();
      cs.involution = c2.at("involution").get<double>();
      cs.cstar_identity = c2.at("cstar_identity").get<double>();
      cs.positivity = c2.at("positivity").get<double>();
      cs.regular_norm_cstar_identity = get_optional<double>(c2, "regular_norm_cstar_identity");
      cs.note = c2.at("note").get<std::string>();
      r.cstar = cs;
    }
    if (j.contains("automorphism")) {
      const Json& a = j.at("automorphism");
      AutomorphismSummary as;
      as.passed = a.at("passed").get<bool>();
      as.invertible = a.at("invertible").get<bool>();
      as.condition_number = get_optional<double>(a, "condition_number");
      as.invariance_residual = a.at("invariance_residual").get<double>();
      as.multiplicativity = a.at("multiplicativity").get<double>();
      as.involution = a.at("involution").get<double>();
      as.isometry_ok = a.at("isometry_ok").get<bool>();
      as.isometry = a.at("isometry").get<double>();
      as.restriction = rows_from_json(a.at("restriction"), "automorphism.restriction");
      r.automorphism = as;
    }
    if (j.contains("multiplicative_domain")) {
      const Json& m = j.at("multiplicative_domain");
      r.multiplicative_domain =
          DomainSummary{m.at("dim").get<std::size_t>(), m.at("stable_dim").get<std::size_t>(),
                        m.at("stable_powers").get<std::size_t>(),
                        m.at("validation_residual").get<double>(), m.at("in_S").get<bool>(),
                        m.at("equals_S").get<bool>()};
    }
    if (j.contains("invariant_state")) {
      r.faithful_invariant_state = j.at("invariant_state").at("faithful").get<bool>();
      r.invariant_state_min_eigenvalue =
          j.at("invariant_state").at("min_eigenvalue").get<double>();
    }
    if (j.contains("decay")) {
      const Json& p = j.at("decay");
      DecaySummary ds;
      ds.lower = p.at("lower").get<std::vector<double>>();
      ds.upper = p.at("upper").get<std::vector<double>>();
      ds.resolvent_bound = p.at("resolvent_bound").get<std::vector<double>>();
      ds.slope = get_optional<double>(p, "slope");
      ds.slope_limit = get_optional<double>(p, "slope_limit");
      ds.slope_ok = p.at("slope_ok").get<bool>();
      ds.radius = p.at("radius").get<double>();
      ds.resolvent_constant = p.at("resolvent_constant").get<double>();
      ds.bound_ok = p.at("bound_ok").get<bool>();
      ds.tail_start = p.at("tail_start").get<std::size_t>();
      ds.nilpotent_interior = p.at("nilpotent_interior").get<bool>();
      r.decay = ds;
    }
    if (j.contains("eventual_range")) {
      const Json& e = j.at("eventual_range");
      r.eventual_range = EventualRangeSummary{e.at("dim").get<std::size_t>(),
                                              e.at("stabilization_index").get<std::size_t>(),
                                              e.at("ranks").get<std::vector<std::size_t>>()};
    }
    if (j.contains("koopman")) {
      const Json& k = j.at("koopman");
      KoopmanSummary ks;
      ks.cycles = k.at("cycles").get<std::vector<std::size_t>>();
      ks.tail_lengths = k.at("tail_lengths").get<std::vector<std::size_t>>();
      ks.eventual_image = k.at("eventual_image").get<std::vector<std::size_t>>();
      ks.stabilization_index = k.at("stabilization_index").get<std::size_t>();
      ks.predicted_spectrum = complex_list_from(k.at("predicted_spectrum"), "koopman.predicted_spectrum");
      ks.spectrum_matches = k.at("spectrum_matches").get<bool>();
      r.koopman = ks;
    }
    r.verdict = j.at("verdict").get<std::string>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("timing")) {
      r.elapsed_seconds = j.at("timing").at("elapsed_seconds").get<double>();
    }
    return r;
  } catch (const Json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Markdown

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string fmt(Complex z) {
  std::ostringstream os;
  os << std::setprecision(6) << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string report_to_markdown(const RunReport& r) {
  std::ostringstream md;
  md << "# decolab report\n\n";
  md << "**Verdict: " << r.verdict << "**\n\n";
  md << "## Channel\n\n";
  md << "| property | value |\n|---|---|\n";
  md << "| provenance | " << r.channel.provenance << " |\n";
  md << "| blocks |";
  for (const auto b : r.channel.blocks) md << " " << b;
  md << " |\n";
  md << "| unital | " << yes_no(r.channel.unital) << " |\n";
  md << "| completely positive | " << yes_no(r.channel.completely_positive) << " |\n";
  md << "| min Choi eigenvalue | " << fmt(r.channel.min_choi_eigenvalue) << " |\n";
  md << "| spectral radius | " << fmt(r.spectral_radius) << " |\n\n";

  md << "## Spectrum\n\n";
  for (const Complex z : r.eigenvalues) md << "- " << fmt(z) << "\n";
  md << "\n";
  if (r.spectrum) {
    const SpectrumSummary& s = *r.spectrum;
    md << "| quantity | value |\n|---|---|\n";
    md << "| peripheral count | " << s.rank_p << " |\n";
    md << "| interior radius | " << fmt(s.interior_radius) << " |\n";
    md << "| gap | " << fmt(s.gap) << " |\n";
    md << "| contour radius | " << fmt(s.contour_radius) << " |\n";
    if (s.cross_check_discrepancy) {
      md << "| contour vs Schur | " << fmt(*s.cross_check_discrepancy) << " (" << s.contour_nodes
         << " nodes) |\n";
    }
    md << "\n";
  }

  md << "## Residuals\n\n| check | residual | pass |\n|---|---|---|\n";
  if (r.system) {
    md << "| adjoint closure of S (dim " << r.system->dim << ") | "
       << fmt(r.system->adjoint_residual) << " | "
       << yes_no(r.system->adjoint_residual <= tol::structural) << " |\n";
  }
  if (r.p_completely_positive) {
    md << "| P completely positive (min Choi eig) | " << fmt(*r.p_min_choi_eigenvalue) << " | "
       << yes_no(*r.p_completely_positive) << " |\n";
  }
  if (r.cstar) {
    const CstarSummary& c = *r.cstar;
    md << "| associativity | " << fmt(c.associativity) << " | "
       << yes_no(c.associativity <= tol::agreement) << " |\n";
    md << "| unit | " << fmt(c.unit) << " | " << yes_no(c.unit <= tol::agreement) << " |\n";
    md << "| involution | " << fmt(c.involution) << " | "
       << yes_no(c.involution <= tol::agreement) << " |\n";
    md << "| C*-identity | " << fmt(c.cstar_identity) << " | "
       << yes_no(c.cstar_identity <= tol::agreement) << " |\n";
    md << "| positivity | " << fmt(c.positivity) << " | "
       << yes_no(c.positivity <= tol::agreement) << " |\n";
  }
  if (r.automorphism) {
    const AutomorphismSummary& a = *r.automorphism;
    md << "| Phi(S) = S | " << fmt(a.invariance_residual) << " | " << yes_no(a.invertible)
       << " |\n";
    md << "| multiplicativity on S | " << fmt(a.multiplicativity) << " | "
       << yes_no(a.multiplicativity <= tol::agreement) << " |\n";
    md << "| isometry on S | " << fmt(a.isometry) << " | " << yes_no(a.isometry_ok) << " |\n";
  }
  if (r.multiplicative_domain) {
    const DomainSummary& m = *r.multiplicative_domain;
    md << "| multiplicative domain of Phi (dim " << m.dim << ") | "
       << fmt(m.validation_residual) << " | - |\n";
    md << "| common domain of all powers (dim " << m.stable_dim << ") | - | "
       << (m.equals_S ? "equals S" : (m.in_S ? "inside S" : "not inside S")) << " |\n";
  }
  if (r.faithful_invariant_state) {
    md << "| faithful invariant state (min eig) | " << fmt(*r.invariant_state_min_eigenvalue)
       << " | " << yes_no(*r.faithful_invariant_state) << " |\n";
  }
  if (r.decay) {
    md << "| decay slope | " << (r.decay->slope ? fmt(*r.decay->slope) : std::string("n/a"))
       << " | " << yes_no(r.decay->slope_ok) << " |\n";
    md << "| resolvent bound (C = " << fmt(r.decay->resolvent_constant) << ") | - | "
       << yes_no(r.decay->bound_ok) << " |\n";
  }
  md << "\n";
  if (!r.notes.empty()) {
    md << "## Notes\n\n";
    for (const auto& n : r.notes) md << "- " << n << "\n";
    md << "\n";
  }
  return md.str();
}

}  // namespace decolab
