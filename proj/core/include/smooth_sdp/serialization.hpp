#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "smooth_sdp/certify.hpp"
#include "smooth_sdp/phasecut.hpp"
#include "smooth_sdp/solver.hpp"

namespace smooth_sdp::io {

using Json = nlohmann::json;

/// Flat row-major list of entries: numbers for the real field, [re, im]
/// pairs for the complex one.
Json matrix_to_json(const Matrix& m, FieldTag field);
/// Accepts numbers or [re, im] pairs; imaginary parts are rejected for the
/// real field.
Matrix matrix_from_json(const Json& j, Index rows, Index cols, FieldTag field);

Json vector_to_json(const RealVector& v);
RealVector real_vector_from_json(const Json& j, Index size);

FieldTag field_from_string(const std::string& s);
std::string to_string(FieldTag field);

/// {"field", "n", "m", "C", "A", "b", "R", "K"}; constraint matrices are
/// materialized even when stored implicitly.
Json problem_to_json(const SdpProblem& problem);
SdpProblem problem_from_json(const Json& j);

/// {"d", "n", "noise_sigma", "seed", "A", "b", "z_true"?}.
Json instance_to_json(const phasecut::PhasecutInstance& inst);
phasecut::PhasecutInstance instance_from_json(const Json& j);

/// {"n", "k", "Y"} with complex entries.
Json factor_to_json(const Matrix& y);
Matrix factor_from_json(const Json& j);

Json solution_to_json(const phasecut::PhasecutSolution& sol);
Json sosp_to_json(const SospReport& report);
Json certificate_to_json(const Certificate& cert);

Json read_json_file(const std::filesystem::path& path);
/// Writes `text` verbatim; throws kIo on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
/// Sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace smooth_sdp::io
