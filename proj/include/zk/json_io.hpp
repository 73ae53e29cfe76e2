#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "zk/algebra.hpp"
#include "zk/closure.hpp"
#include "zk/commpoly.hpp"
#include "zk/qpoly.hpp"

namespace zk {

using Json = nlohmann::json;

// A parsed input file: always carries the tower; exactly one of the payloads
// depending on its kind.
struct Input {
  TowerRef t;
  std::string kind;  // "algebra" | "parametrization" | "monoid"
  std::optional<AlgebraPresentation> algebra;
  std::optional<LinearParametrization> param;
  std::vector<std::vector<uint64_t>> monoid_points;
  bool monoid_without_unit = false;

  // both views when derivable: an algebra input gets its canonical
  // parametrization; a parametrization input gets the F-span algebra
  const AlgebraPresentation& as_algebra();
  const LinearParametrization& as_parametrization();
};

Input load_input(const std::string& path, std::optional<uint32_t> M_override);
Input parse_input(const Json& j, std::optional<uint32_t> M_override);

Json field_json(const Field& f);
Json tower_json(const Tower& t);
Json qpoly_json(const QPolynomial& f);
Json module_json(const RelationModule& m);
Json commpoly_json(const CommPoly& f);
Json mat_json(const Mat& m);
QPolynomial qpoly_from_json(TowerRef t, const Json& j);

}  // namespace zk
