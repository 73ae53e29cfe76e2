#include "zk/json_io.hpp"

#include <cmath>
#include <fstream>
#include <map>

namespace zk {

namespace {

uint32_t factor_prime_power(uint64_t q, uint32_t* exp) {
  for (uint32_t p = 2; uint64_t(p) * p <= q || q % p == 0; ++p) {
    if (q % p) continue;
    uint32_t e = 0;
    uint64_t r = q;
    while (r % p == 0) {
      r /= p;
      ++e;
    }
    if (r != 1) throw SchemaError("q must be a prime power");
    *exp = e;
    return p;
  }
  if (q >= 2) {
    *exp = 1;
    return uint32_t(q);
  }
  throw SchemaError("q must be a prime power");
}

TowerRef tower_from_json(const Json& j, std::optional<uint32_t> M_override) {
  uint32_t p = 0, q_exp = 1, M = 1;
  if (j.contains("field")) {
    const auto& f = j.at("field");
    p = f.at("p").get<uint32_t>();
    q_exp = f.value("q_exp", 1u);
    M = f.value("M", 1u);
    if (M_override) M = *M_override;
    if (f.contains("modulus")) {
      auto mod = f.at("modulus").get<std::vector<uint32_t>>();
      auto F = Field::make(p, q_exp);
      auto K0 = Field::make(p, q_exp * M, mod);
      return Tower::make(F, K0);
    }
    return Tower::make(p, q_exp, M);
  }
  if (j.contains("q")) {
    uint64_t q = j.at("q").get<uint64_t>();
    p = factor_prime_power(q, &q_exp);
    M = j.value("M", 1u);
    if (M_override) M = *M_override;
    return Tower::make(p, q_exp, M);
  }
  throw SchemaError("missing field description");
}

}  // namespace

Input parse_input(const Json& j, std::optional<uint32_t> M_override) {
  Input in;
  in.t = tower_from_json(j, M_override);
  in.kind = j.value("kind", j.contains("params") ? "parametrization"
                                                 : "algebra");
  if (in.kind == "algebra") {
    uint32_t n = j.at("n").get<uint32_t>();
    std::vector<Mat> gens;
    for (auto& g : j.at("generators")) {
      auto flat = g.get<std::vector<uint64_t>>();
      if (flat.size() != size_t(n) * n)
        throw SchemaError("generator entry count");
      for (auto v : flat)
        if (v >= in.t->K()->size()) throw SchemaError("entry encoding range");
      gens.push_back(mat_unflatten(in.t, n, flat));
    }
    in.algebra = close_algebra_gens(in.t, n, gens);
  } else if (in.kind == "parametrization") {
    LinearParametrization P;
    P.t = in.t;
    P.n = j.at("n").get<uint32_t>();
    std::map<std::string, uint32_t> by_name;
    for (auto& pj : j.at("params")) {
      LinearParametrization::Param p;
      p.name = pj.at("name").get<std::string>();
      p.d = pj.value("d", in.t->M());
      if (p.d < 1 || p.d > in.t->M() || in.t->M() % p.d)
        throw SchemaError("parameter level must divide M");
      by_name[p.name] = uint32_t(P.params.size());
      P.params.push_back(p);
    }
    for (auto& cj : j.at("coords")) {
      std::vector<ParamTerm> terms;
      for (auto& tj : cj) {
        ParamTerm tm;
        auto pname = tj.at("p").get<std::string>();
        if (!by_name.count(pname)) throw SchemaError("unknown parameter");
        tm.param = by_name[pname];
        tm.e = tj.value("e", 0u);
        tm.c = tj.value("c", uint64_t(1));
        if (tm.c >= in.t->K()->size()) throw SchemaError("coefficient range");
        terms.push_back(tm);
      }
      P.coords.push_back(std::move(terms));
    }
    if (P.coords.size() != P.n) throw SchemaError("coordinate count");
    in.param = std::move(P);
  } else if (in.kind == "monoid") {
    uint32_t n = j.at("n").get<uint32_t>();
    for (auto& pj : j.at("points")) {
      auto pt = pj.get<std::vector<uint64_t>>();
      if (pt.size() != n) throw SchemaError("point length");
      in.monoid_points.push_back(pt);
    }
    in.monoid_without_unit = !j.value("unit", true);
  } else {
    throw SchemaError("unknown input kind");
  }
  return in;
}

Input load_input(const std::string& path, std::optional<uint32_t> M_override) {
  std::ifstream f(path);
  if (!f) throw SchemaError("cannot open " + path);
  Json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw SchemaError(std::string("json parse: ") + e.what());
  }
  return parse_input(j, M_override);
}

const AlgebraPresentation& Input::as_algebra() {
  if (!algebra) {
    check(param.has_value(), "input convertible to an algebra");
    // F-span of the image, which must be multiplicatively closed
    std::vector<Mat> spanning;
    uint32_t n = uint32_t(std::lround(std::sqrt(double(param->n))));
    if (n * n != param->n)
      throw SchemaError("parametrization is not a square matrix space");
    for (auto& pt : param->spanning_points())
      spanning.push_back(mat_unflatten(t, n, pt));
    bool closed = false;
    algebra = algebra_from_span(t, n, spanning, &closed);
    if (!closed)
      throw SchemaError("parametrized set is not multiplicatively closed");
  }
  return *algebra;
}

const LinearParametrization& Input::as_parametrization() {
  if (!param) {
    check(algebra.has_value(), "input convertible to a parametrization");
    param = canonical_parametrization(algebra->space);
  }
  return *param;
}

Json field_json(const Field& f) {
  return Json{{"p", f.p()}, {"k", f.k()}, {"modulus", f.modulus()}};
}

Json tower_json(const Tower& t) {
  return Json{{"q", t.q()},
              {"M", t.M()},
              {"F", field_json(*t.F())},
              {"K0", field_json(*t.K())}};
}

Json qpoly_json(const QPolynomial& f) {
  Json terms = Json::array();
  for (auto& tm : f.terms)
    terms.push_back(Json{{"i", tm.var + 1}, {"e", tm.e}, {"c", tm.c}});
  return Json{{"n", f.n}, {"q", f.t->q()}, {"terms", terms},
              {"pretty", f.str()}};
}

Json module_json(const RelationModule& m) {
  Json gens = Json::array();
  for (auto& g : m.gens) gens.push_back(qpoly_json(g));
  return Json{{"n", m.n}, {"phi_period", m.t->M()}, {"generators", gens}};
}

Json commpoly_json(const CommPoly& f) {
  Json mons = Json::array();
  for (auto& [e, c] : f.monomials)
    mons.push_back(Json{{"deg", e}, {"c", c}});
  return Json{{"n", f.n}, {"monomials", mons}, {"pretty", f.str()}};
}

Json mat_json(const Mat& m) {
  Json rows = Json::array();
  for (size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  return rows;
}

QPolynomial qpoly_from_json(TowerRef t, const Json& j) {
  std::vector<QTerm> terms;
  for (auto& tj : j.at("terms")) {
    QTerm tm;
    tm.var = tj.at("i").get<uint32_t>() - 1;
    tm.e = tj.value("e", 0u);
    tm.c = tj.value("c", uint64_t(1));
    terms.push_back(tm);
  }
  return qp_make(std::move(t), j.at("n").get<uint32_t>(), terms);
}

}  // namespace zk
