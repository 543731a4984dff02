#include "qcorr/io.hpp"

#include <fstream>

namespace qcorr {

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw DomainError("matrix: expected a non-empty array of rows");
  const auto rows = j.size();
  const auto cols = j.at(0).size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows; ++i) {
    const Json& row = j.at(i);
    if (row.size() != cols) throw DomainError("matrix: ragged rows");
    for (size_t k = 0; k < cols; ++k) {
      const Json& cell = row.at(k);
      if (!cell.is_array() || cell.size() != 2)
        throw DomainError("matrix: entries must be [re, im] pairs");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          Cplx(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  if (!m.allFinite()) throw DomainError("matrix: non-finite entries");
  return m;
}

Json state_to_json(const DensityOperator& rho) {
  Json j;
  j["dims"] = rho.dims;
  j["matrix"] = matrix_to_json(rho.mat);
  j["normalized"] = rho.trace_mode == TraceMode::normalized;
  return j;
}

DensityOperator state_from_json(const Json& j) {
  if (!j.contains("dims") || !j.contains("matrix"))
    throw DomainError("state: missing 'dims' or 'matrix' field");
  std::vector<int> dims = j.at("dims").get<std::vector<int>>();
  Mat m = matrix_from_json(j.at("matrix"));
  if (m.rows() != m.cols() || m.rows() != product(dims))
    throw DimMismatch("state: matrix size does not equal product of dims");
  bool normalized = j.value("normalized", true);
  return make_density(
      std::move(m), std::move(dims),
      normalized ? TraceMode::normalized : TraceMode::subnormalized);
}

void save_state(const DensityOperator& rho, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("save_state: cannot open " + path);
  out << state_to_json(rho).dump(2) << "\n";
}

DensityOperator load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("load_state: cannot open " + path);
  Json j = Json::parse(in);
  return state_from_json(j);
}

Json povm_to_json(const Povm& povm) {
  Json j;
  Json elems = Json::array();
  for (const Mat& e : povm.elements) elems.push_back(matrix_to_json(e));
  j["elements"] = std::move(elems);
  return j;
}

Povm povm_from_json(const Json& j) {
  if (!j.contains("elements"))
    throw DomainError("povm: missing 'elements' field");
  Povm povm;
  for (const Json& e : j.at("elements"))
    povm.elements.push_back(matrix_from_json(e));
  povm.validate();
  return povm;
}

Json measure_report_to_json(const MeasureReport& rep) {
  Json j;
  j["name"] = rep.name;
  j["unit"] = "bits";
  j["lower"] = rep.lower;
  j["upper"] = rep.upper;
  j["exact"] = rep.exact;
  j["computable"] = rep.computable;
  j["provenance"] = rep.provenance;
  if (rep.nonconvergence) j["nonconvergence"] = true;
  return j;
}

Json certificate_to_json(const CollapseCertificate& cert) {
  Json j;
  j["kind"] = cert.kind.name();
  j["unit"] = "bits";
  j["applicable"] = cert.applicable;
  j["lower"] = cert.lower;
  j["upper"] = cert.upper;
  j["gap"] = cert.gap;
  j["collapsed"] = cert.collapsed;
  j["tol"] = cert.tol;
  if (cert.applicable)
    j["collapsed_measures"] = cert.collapsed_measures;
  else
    j["delta_ac_gap"] = cert.delta_ac_gap;
  if (!cert.state_id.empty()) j["state_id"] = cert.state_id;
  return j;
}

Json eur_check_to_json(const EurCheck& check) {
  Json j;
  j["relation"] = check.relation;
  j["unit"] = "bits";
  j["lhs"] = check.lhs;
  j["rhs"] = check.rhs;
  j["slack"] = check.slack;
  j["pass"] = check.pass;
  j["tol"] = check.tol;
  return j;
}

Json game_record_to_json(const GameRecord& rec) {
  Json j;
  j["unit"] = "bits";
  switch (rec.layout) {
    case GameLayout::pure_system: j["layout"] = "pure_system"; break;
    case GameLayout::with_memory_split: j["layout"] = "with_memory_split"; break;
    case GameLayout::adversarial_env: j["layout"] = "adversarial_env"; break;
  }
  j["per_round_yield"] = rec.per_round_yield;
  j["rounds_per_pvm"] = rec.rounds_per_pvm;
  j["total_yield"] = rec.total_yield;
  j["bound"] = rec.bound;
  j["bound_kind"] = rec.bound_kind;
  j["bound_applicable"] = rec.bound_applicable;
  j["hypothesis_verified"] = rec.hypothesis_verified;
  if (!rec.notes.empty()) j["notes"] = rec.notes;
  return j;
}

Json smooth_result_to_json(const SmoothResult& res) {
  Json j;
  j["unit"] = "bits";
  j["value"] = res.value;
  j["epsilon"] = res.ball_used.epsilon;
  j["certified"] = res.certified == SmoothResult::Certified::exact_eps0
                       ? "exact_eps0"
                       : "local_optimum";
  if (res.has_bracket) j["bracket_lower"] = res.bracket_lower;
  return j;
}

}  // namespace qcorr
