#include "hkpot/documents.hpp"

namespace hkpot {

using nlohmann::ordered_json;

std::string form_keyword(const BilinearForm& form) {
  switch (form.kind()) {
    case FormKind::Identity:
      return "identity";
    case FormKind::AntiDiagonal:
      return "antidiagonal";
    case FormKind::StandardSymplectic:
      return "symplectic";
    case FormKind::Explicit:
      break;
  }
  throw InputError("explicit forms cannot be written to a matrix document");
}

MatrixDocument parse_matrix_document(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("matrix document: ") + e.what());
  }
  MatrixDocument doc;
  try {
    if (!j.is_object()) throw InputError("matrix document: top level must be an object");
    doc.n = j.at("n").get<int>();
    doc.algebra = j.at("algebra").get<std::string>();
    doc.form = j.contains("form") ? j.at("form").get<std::string>() : "identity";
    if (doc.n <= 0) throw InputError("matrix document: n must be positive");
    const auto& rows = j.at("entries");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(doc.n))
      throw InputError("matrix document: entries must have n rows");
    doc.entries.resize(doc.n, doc.n);
    for (int r = 0; r < doc.n; ++r) {
      const auto& row = rows[r];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(doc.n))
        throw InputError("matrix document: every row must have n entries");
      for (int c = 0; c < doc.n; ++c) {
        const auto& z = row[c];
        if (z.is_number()) {
          doc.entries(r, c) = Complex(z.get<double>(), 0.0);
        } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
          doc.entries(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
        } else {
          throw InputError("matrix document: entries must be [re, im] pairs");
        }
      }
    }
    if (j.contains("jordan_type") && !j.at("jordan_type").is_null())
      doc.jordan_type = JordanType(j.at("jordan_type").get<std::vector<int>>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("matrix document: ") + e.what());
  }
  return doc;
}

ordered_json to_json(const MatrixDocument& doc) {
  ordered_json j;
  j["n"] = doc.n;
  j["algebra"] = doc.algebra;
  j["form"] = doc.form;
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < doc.entries.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < doc.entries.cols(); ++c)
      row.push_back({doc.entries(r, c).real(), doc.entries(r, c).imag()});
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  if (doc.jordan_type) j["jordan_type"] = doc.jordan_type->parts;
  return j;
}

MatrixDocument document_from_element(const OrbitElement& elem, std::optional<JordanType> jt) {
  MatrixDocument doc;
  doc.n = static_cast<int>(elem.matrix.rows());
  doc.algebra = to_string(elem.algebra.family);
  doc.form = form_keyword(elem.form);
  doc.entries = elem.matrix;
  doc.jordan_type = std::move(jt);
  return doc;
}

OrbitElement document_to_element(const MatrixDocument& doc, const Tolerances& tol) {
  const AlgebraKind alg = AlgebraKind::make(parse_family(doc.algebra), doc.n);
  BilinearForm form;
  if (doc.form == "identity") {
    if (alg.family == Family::SP) throw InputError("sp needs the symplectic form");
    form = BilinearForm::identity(doc.n);
  } else if (doc.form == "antidiagonal") {
    if (alg.family != Family::SO) throw InputError("the anti-diagonal form is only used for so");
    form = BilinearForm::anti_diagonal(doc.n);
  } else if (doc.form == "symplectic") {
    if (alg.family != Family::SP) throw InputError("the symplectic form is only used for sp");
    form = BilinearForm::standard_symplectic(doc.n);
  } else {
    throw InputError("unknown form '" + doc.form + "'");
  }
  OrbitElement elem{doc.entries, alg, form};
  const ValidationReport vr = validate(elem, tol);
  if (!vr.ok()) throw MembershipError(vr.describe());
  if (doc.jordan_type) {
    const JordanType measured = jordan_type_of(elem.matrix, tol);
    if (!(measured == *doc.jordan_type))
      throw MembershipError("declared Jordan type (" + doc.jordan_type->str() + ") but the matrix has (" +
                            measured.str() + ")");
  }
  return elem;
}

namespace {

ordered_json spectrum_json(const std::vector<SpectrumGroup>& groups) {
  ordered_json out = ordered_json::array();
  for (const auto& g : groups) out.push_back({{"value", g.value}, {"multiplicity", g.multiplicity}});
  return out;
}

}  // namespace

ordered_json report_to_json(const PotentialReport& rep, const ordered_json& input) {
  ordered_json j;
  j["input"] = input;
  j["algebra"] = rep.algebra;
  j["jordan_type"] = rep.jordan_type.parts;
  ordered_json methods = ordered_json::object();
  for (const auto& [name, m] : rep.methods) {
    ordered_json e;
    e["status"] = m.status;
    if (m.status == "ok") e["rho"] = m.rho;
    if (!m.detail.empty()) e["detail"] = m.detail;
    methods[name] = std::move(e);
  }
  j["methods"] = std::move(methods);
  j["max_pairwise_deviation"] = rep.max_pairwise_deviation;
  j["invariants"] = {{"c1", rep.invariants.c1},
                     {"c2", rep.invariants.c2},
                     {"c21", rep.invariants.c21},
                     {"kappa", rep.invariants.kappa}};
  j["spectrum"] = spectrum_json(rep.spectrum);
  if (!rep.lift_spectrum.empty()) j["lift_spectrum"] = spectrum_json(rep.lift_spectrum);
  if (rep.oracle) {
    const auto& o = *rep.oracle;
    j["oracle"] = {{"r2", o.r2},
                   {"rho", o.rho},
                   {"residual", o.residual},
                   {"seed", o.seed},
                   {"iterations", o.iterations},
                   {"restarts", o.restarts},
                   {"boundary_stratum", o.boundary_stratum}};
  }
  j["flags"] = rep.flags;
  return j;
}

}  // namespace hkpot
