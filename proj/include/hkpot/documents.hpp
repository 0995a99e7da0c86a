#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hkpot/lie_classical.hpp"
#include "hkpot/potentials.hpp"

namespace hkpot {

/// On-disk matrix format:
///   {"n": 3, "algebra": "sl", "form": "identity",
///    "entries": [[[re, im], ...], ...], "jordan_type": [3]}
/// form is "identity", "antidiagonal" or "symplectic"; jordan_type is
/// optional and checked against the matrix when present.
struct MatrixDocument {
  int n = 0;
  std::string algebra;
  std::string form;
  CMatrix entries;
  std::optional<JordanType> jordan_type;
};

/// Throws InputError on malformed text or fields.
MatrixDocument parse_matrix_document(const std::string& text);
nlohmann::ordered_json to_json(const MatrixDocument& doc);

MatrixDocument document_from_element(const OrbitElement& elem, std::optional<JordanType> jt = std::nullopt);

/// Throws InputError for unknown names or a form that does not fit the
/// algebra, MembershipError when the matrix is not a nilpotent element of
/// the algebra or does not have the declared Jordan type.
OrbitElement document_to_element(const MatrixDocument& doc, const Tolerances& tol = {});

/// Machine-readable report; `input` is echoed verbatim.
nlohmann::ordered_json report_to_json(const PotentialReport& rep, const nlohmann::ordered_json& input);

std::string form_keyword(const BilinearForm& form);

}  // namespace hkpot
