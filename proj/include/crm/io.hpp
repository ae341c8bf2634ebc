#ifndef CRM_IO_HPP
#define CRM_IO_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "crm/classify.hpp"
#include "crm/mub.hpp"
#include "crm/reducibility.hpp"
#include "crm/schmidt.hpp"
#include "crm/symmetry.hpp"

namespace crm {

using Json = nlohmann::ordered_json;

namespace detail {

inline double finite_number(const Json& j, const std::string& where) {
  if (!j.is_number())
    throw ParseError("expected a number in " + where + ", got " + j.dump());
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError("non-finite value in " + where);
  return v;
}

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError("expected [re, im] in " + where + ", got " + j.dump());
  return {finite_number(j[0], where), finite_number(j[1], where)};
}

inline Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

} // namespace detail

inline Json cmatrix_to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back(detail::complex_to_json(m(i, j)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMatrix cmatrix_from_json(const Json& j, const std::string& where = "matrix") {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw ParseError(where + ": expected {rows, cols, data}");
  const auto rows = j["rows"].get<Eigen::Index>();
  const auto cols = j["cols"].get<Eigen::Index>();
  if (rows < 0 || cols < 0 || !j["data"].is_array() ||
      static_cast<Eigen::Index>(j["data"].size()) != rows * cols)
    throw DimensionMismatch(where + ": data length " + std::to_string(j["data"].size()) +
                            " does not match " + std::to_string(rows) + "x" +
                            std::to_string(cols));
  CMatrix m(rows, cols);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j2 = 0; j2 < cols; ++j2, ++idx)
      m(i, j2) = detail::complex_from_json(j["data"][static_cast<std::size_t>(idx)],
                                           where + ".data[" + std::to_string(idx) + "]");
  return m;
}

// ---------------------------------------------------------------------------
// Matrix files: {"dims": [k, m], "data": [[re, im] x (km)^2]} row-major.
// ---------------------------------------------------------------------------

inline Json operator_to_json(const BipartiteOperator& a) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < a.mat.rows(); ++i)
    for (Eigen::Index j = 0; j < a.mat.cols(); ++j)
      data.push_back(detail::complex_to_json(a.mat(i, j)));
  return Json{{"dims", Json::array({a.k, a.m})}, {"data", std::move(data)}};
}

inline BipartiteOperator operator_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("data"))
    throw ParseError("matrix file: expected {dims, data}");
  if (!j["dims"].is_array() || j["dims"].size() != 2)
    throw ParseError("matrix file: dims must be [k, m]");
  const auto k = j["dims"][0].get<Eigen::Index>();
  const auto m = j["dims"][1].get<Eigen::Index>();
  if (k < 1 || m < 1) throw ParseError("matrix file: dims must be positive");
  const Eigen::Index n = k * m;
  if (!j["data"].is_array() || static_cast<Eigen::Index>(j["data"].size()) != n * n)
    throw DimensionMismatch("matrix file: data length " +
                            std::to_string(j["data"].size()) + " != (km)^2 = " +
                            std::to_string(n * n));
  CMatrix mat(n, n);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index c = 0; c < n; ++c, ++idx)
      mat(i, c) = detail::complex_from_json(j["data"][static_cast<std::size_t>(idx)],
                                            "data[" + std::to_string(idx) + "]");
  return {k, m, std::move(mat)};
}

// ---------------------------------------------------------------------------
// Basis files: {"dim": k, "bases": [k x k complex arrays, vectors as columns]}.
// ---------------------------------------------------------------------------

inline Json mubset_to_json(const MubSet& ms) {
  Json bases = Json::array();
  for (const Basis& b : ms.bases) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < b.dim; ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < b.dim; ++c)
        row.push_back(detail::complex_to_json(b.vectors(r, c)));
      rows.push_back(std::move(row));
    }
    bases.push_back(std::move(rows));
  }
  return Json{{"dim", ms.dim}, {"bases", std::move(bases)}};
}

inline MubSet mubset_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("bases"))
    throw ParseError("basis file: expected {dim, bases}");
  MubSet ms;
  ms.dim = j["dim"].get<Eigen::Index>();
  if (ms.dim < 1) throw ParseError("basis file: dim must be positive");
  if (!j["bases"].is_array()) throw ParseError("basis file: bases must be an array");
  for (std::size_t b = 0; b < j["bases"].size(); ++b) {
    const Json& jb = j["bases"][b];
    const std::string where = "bases[" + std::to_string(b) + "]";
    if (!jb.is_array() || static_cast<Eigen::Index>(jb.size()) != ms.dim)
      throw DimensionMismatch(where + ": expected " + std::to_string(ms.dim) + " rows");
    CMatrix vecs(ms.dim, ms.dim);
    for (Eigen::Index r = 0; r < ms.dim; ++r) {
      const Json& jr = jb[static_cast<std::size_t>(r)];
      if (!jr.is_array() || static_cast<Eigen::Index>(jr.size()) != ms.dim)
        throw DimensionMismatch(where + ": row " + std::to_string(r) + " length " +
                                std::to_string(jr.size()));
      for (Eigen::Index c = 0; c < ms.dim; ++c)
        vecs(r, c) = detail::complex_from_json(
            jr[static_cast<std::size_t>(c)],
            where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    ms.bases.emplace_back(ms.dim, std::move(vecs));
  }
  return ms;
}

// ---------------------------------------------------------------------------
// File helpers.
// ---------------------------------------------------------------------------

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

inline void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

inline BipartiteOperator load_operator(const std::string& path) {
  return operator_from_json(load_json(path));
}

inline MubSet load_basis_set(const std::string& path) {
  return mubset_from_json(load_json(path));
}

// ---------------------------------------------------------------------------
// Structured reports.
// ---------------------------------------------------------------------------

inline Json classify_report_to_json(const ClassReport& r) {
  Json j{{"dims", Json::array({r.k, r.m})},
         {"is_psd", r.input_psd},
         {"ppt", r.ppt},
         {"min_eigenvalue", r.min_eigenvalue},
         {"min_eig_pt", r.min_eig_pt}};
  if (r.square) {
    j["spc"] = r.spc;
    j["spc_min_eig"] = r.spc_min_eig;
    j["spc_herm_residual"] = r.spc_herm_residual;
    j["invariant_realign"] = r.invariant_realign;
    j["invariance_residual"] = r.invariance_residual;
  } else {
    j["spc"] = nullptr;
    j["invariant_realign"] = nullptr;
  }
  return j;
}

inline Json reducibility_report_to_json(const ReducibilityReport& r) {
  Json blocks = Json::array();
  for (const Block& b : r.blocks) {
    blocks.push_back(Json{{"V", cmatrix_to_json(b.V)},
                          {"W", cmatrix_to_json(b.W)},
                          {"block_operator", operator_to_json(b.block_operator)},
                          {"top_eigenvalue", b.top_eigenvalue},
                          {"irreducible_certified", b.irreducible_certified}});
  }
  Json j{{"completely_reducible", r.completely_reducible},
         {"indeterminate", r.indeterminate},
         {"multiplicity_top", r.multiplicity_top},
         {"residual_norm", r.residual_norm},
         {"blocks", std::move(blocks)}};
  if (r.witness)
    j["witness"] = Json{{"gamma", cmatrix_to_json(r.witness->gamma)},
                        {"cross_norm", r.witness->cross_norm}};
  else
    j["witness"] = nullptr;
  return j;
}

inline Json schmidt_to_json(const SchmidtDecomposition& d) {
  Json gammas = Json::array(), deltas = Json::array(), lambdas = Json::array();
  for (std::size_t i = 0; i < d.rank(); ++i) {
    lambdas.push_back(d.lambdas[i]);
    gammas.push_back(cmatrix_to_json(d.gammas[i]));
    deltas.push_back(cmatrix_to_json(d.deltas[i]));
  }
  return Json{{"rank", d.rank()},
              {"hermitian", d.hermitian_flag},
              {"lambdas", std::move(lambdas)},
              {"gammas", std::move(gammas)},
              {"deltas", std::move(deltas)}};
}

inline Json sigma_table_to_json(const std::vector<SigmaEntry>& table) {
  Json rows = Json::array();
  for (const SigmaEntry& e : table) {
    Json images = Json::array();
    for (int v : e.sigma.images) images.push_back(v);
    rows.push_back(Json{{"sigma", std::move(images)},
                        {"cycles", e.sigma.cycle_notation()},
                        {"formula", e.formula},
                        {"base_index", e.base_index},
                        {"rho_after", e.rho_after},
                        {"mu_after", e.mu_after}});
  }
  return Json{{"entries", std::move(rows)}};
}

inline Json mub_verify_to_json(const MubVerifyReport& r) {
  Json pairs = Json::array();
  for (const auto& p : r.failed_pairs)
    pairs.push_back(Json{{"i", p.i},
                         {"j", p.j},
                         {"max_overlap_deviation", p.max_overlap_deviation},
                         {"operator_residual", p.operator_residual}});
  Json j{{"ok", r.ok},
         {"non_orthonormal", r.non_orthonormal},
         {"failed_pairs", std::move(pairs)}};
  if (r.resolution_checked) {
    j["resolution_residual"] = r.resolution_residual;
    j["resolution_ok"] = r.resolution_ok;
  }
  return j;
}

} // namespace crm

#endif // CRM_IO_HPP
