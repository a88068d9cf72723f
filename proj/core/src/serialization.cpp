#include "smooth_sdp/serialization.hpp"

#include <fstream>
#include <sstream>

namespace smooth_sdp::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::kParse, what);
}

const Json& field_of(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    parse_error(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const char* key) {
  try {
    return field_of(j, key).get<T>();
  } catch (const Json::exception& e) {
    parse_error(std::string("field \"") + key + "\": " + e.what());
  }
}

Index get_dim(const Json& j, const char* key) {
  const auto v = get_as<std::int64_t>(j, key);
  if (v < 0) parse_error(std::string("field \"") + key + "\" must be nonnegative");
  return static_cast<Index>(v);
}

Complex entry_from_json(const Json& e, FieldTag field) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    const Complex z(e[0].get<double>(), e[1].get<double>());
    if (field == FieldTag::kReal && z.imag() != 0.0) {
      parse_error("complex entry in a real-field matrix");
    }
    return z;
  }
  parse_error("matrix entries must be numbers or [re, im] pairs");
}

Json complex_vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

CVector complex_vector_from_json(const Json& j, Index size) {
  if (!j.is_array() || static_cast<Index>(j.size()) != size) {
    parse_error("vector has the wrong length");
  }
  CVector v(size);
  for (Index i = 0; i < size; ++i) v(i) = entry_from_json(j[static_cast<std::size_t>(i)], FieldTag::kComplex);
  return v;
}

}  // namespace

Json matrix_to_json(const Matrix& m, FieldTag field) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (field == FieldTag::kReal) {
        out.push_back(m(i, j).real());
      } else {
        out.push_back({m(i, j).real(), m(i, j).imag()});
      }
    }
  }
  return out;
}

Matrix matrix_from_json(const Json& j, Index rows, Index cols, FieldTag field) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows * cols) {
    parse_error("matrix must be a flat row-major array of rows*cols entries");
  }
  Matrix m(rows, cols);
  std::size_t p = 0;
  for (Index i = 0; i < rows; ++i) {
    for (Index c = 0; c < cols; ++c) m(i, c) = entry_from_json(j[p++], field);
  }
  return m;
}

Json vector_to_json(const RealVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RealVector real_vector_from_json(const Json& j, Index size) {
  if (!j.is_array() || static_cast<Index>(j.size()) != size) {
    parse_error("vector has the wrong length");
  }
  RealVector v(size);
  for (Index i = 0; i < size; ++i) {
    const Json& e = j[static_cast<std::size_t>(i)];
    if (!e.is_number()) parse_error("vector entries must be numbers");
    v(i) = e.get<double>();
  }
  return v;
}

FieldTag field_from_string(const std::string& s) {
  if (s == "real") return FieldTag::kReal;
  if (s == "complex") return FieldTag::kComplex;
  parse_error("field must be \"real\" or \"complex\"");
}

std::string to_string(FieldTag field) {
  return field == FieldTag::kReal ? "real" : "complex";
}

Json problem_to_json(const SdpProblem& problem) {
  Json j;
  j["field"] = to_string(problem.field());
  j["n"] = problem.n();
  j["m"] = problem.m();
  j["C"] = matrix_to_json(problem.cost().matrix(), problem.field());
  Json a = Json::array();
  for (Index i = 0; i < problem.m(); ++i) {
    a.push_back(matrix_to_json(problem.constraints().matrix(i).matrix(), problem.field()));
  }
  j["A"] = std::move(a);
  j["b"] = vector_to_json(problem.b());
  j["R"] = problem.trace_bound();
  j["K"] = problem.projector_bound();
  return j;
}

SdpProblem problem_from_json(const Json& j) {
  const FieldTag field = field_from_string(get_as<std::string>(j, "field"));
  const Index n = get_dim(j, "n");
  const Index m = get_dim(j, "m");
  const Json& a = field_of(j, "A");
  if (!a.is_array() || static_cast<Index>(a.size()) != m) {
    parse_error("\"A\" must list m matrices");
  }
  try {
    SelfAdjointMatrix cost(matrix_from_json(field_of(j, "C"), n, n, field), field);
    std::vector<SelfAdjointMatrix> constraints;
    constraints.reserve(static_cast<std::size_t>(m));
    for (const Json& ai : a) {
      constraints.emplace_back(matrix_from_json(ai, n, n, field), field);
    }
    return SdpProblem(std::move(cost),
                      ConstraintOperator::from_matrices(std::move(constraints)),
                      real_vector_from_json(field_of(j, "b"), m),
                      get_as<double>(j, "R"), get_as<double>(j, "K"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    parse_error(e.what());
  }
}

Json instance_to_json(const phasecut::PhasecutInstance& inst) {
  Json j;
  j["d"] = inst.d;
  j["n"] = inst.n;
  j["noise_sigma"] = inst.noise_sigma;
  j["seed"] = inst.seed;
  j["A"] = matrix_to_json(inst.a, FieldTag::kComplex);
  j["b"] = vector_to_json(inst.b);
  if (inst.z_true) j["z_true"] = complex_vector_to_json(*inst.z_true);
  return j;
}

phasecut::PhasecutInstance instance_from_json(const Json& j) {
  phasecut::PhasecutInstance inst;
  inst.d = get_dim(j, "d");
  inst.n = get_dim(j, "n");
  if (inst.d < 1 || inst.n < inst.d) parse_error("instance needs 1 <= d <= n");
  inst.noise_sigma = get_as<double>(j, "noise_sigma");
  inst.seed = get_as<std::uint64_t>(j, "seed");
  inst.a = matrix_from_json(field_of(j, "A"), inst.n, inst.d, FieldTag::kComplex);
  inst.b = real_vector_from_json(field_of(j, "b"), inst.n);
  if ((inst.b.array() < 0.0).any()) parse_error("measurements must be nonnegative");
  if (j.contains("z_true") && !j.at("z_true").is_null()) {
    inst.z_true = complex_vector_from_json(j.at("z_true"), inst.d);
  }
  return inst;
}

Json factor_to_json(const Matrix& y) {
  Json j;
  j["n"] = y.rows();
  j["k"] = y.cols();
  j["Y"] = matrix_to_json(y, FieldTag::kComplex);
  return j;
}

Matrix factor_from_json(const Json& j) {
  const Index n = get_dim(j, "n");
  const Index k = get_dim(j, "k");
  if (k < 1) parse_error("\"k\" must be >= 1");
  return matrix_from_json(field_of(j, "Y"), n, k, FieldTag::kComplex);
}

Json solution_to_json(const phasecut::PhasecutSolution& sol) {
  Json j;
  j["u"] = complex_vector_to_json(sol.u);
  j["z_hat"] = complex_vector_to_json(sol.z_hat);
  j["objective"] = sol.objective;
  j["relative_error"] = sol.relative_error ? Json(*sol.relative_error) : Json(nullptr);
  return j;
}

Json sosp_to_json(const SospReport& r) {
  Json j;
  j["grad_norm"] = r.grad_norm;
  j["hess_lower_bound"] = r.hess_lower_bound;
  j["sigma_k"] = r.sigma_k;
  j["feas_residual"] = r.feas_residual;
  j["tangent_dim"] = r.tangent_dim;
  j["lanczos_residual"] = r.lanczos_residual;
  j["lanczos_converged"] = r.lanczos_converged;
  return j;
}

Json certificate_to_json(const Certificate& c) {
  Json j;
  j["objective"] = c.objective;
  j["lambda_min_S"] = c.lambda_min_S;
  j["dual_lower_bound"] = c.dual_lower_bound;
  j["gap_upper_bound"] = c.gap_upper_bound;
  j["zeta"] = c.zeta;
  j["eigenvalue_bound"] = c.eigenvalue_bound;
  j["inputs"] = {{"eps_g", c.inputs.eps_g},
                 {"eps_h", c.inputs.eps_h},
                 {"sigma_k", c.inputs.sigma_k},
                 {"R", c.inputs.trace_bound},
                 {"K", c.inputs.projector_bound},
                 {"cost_norm_op", c.inputs.cost_norm}};
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace smooth_sdp::io
