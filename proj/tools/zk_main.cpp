// zk: exact computations with Zariski-closed matrix algebras over finite
// fields: closures and relation modules, Wedderburn block structure with
// Frobenius gluing, equivalence classes, identities, generic algebras.

#include <CLI11.hpp>
#include <iostream>

#include "zk/generic.hpp"
#include "zk/json_io.hpp"
#include "zk/oracle.hpp"
#include "zk/relations.hpp"
#include "zk/structure.hpp"

using namespace zk;

namespace {

struct Options {
  std::string input;
  std::optional<uint32_t> M;
  uint32_t E = 0;
  uint32_t degree = 3;
  uint32_t mu = 1;
  std::string sig = "1,1";
  uint32_t level = 0;
  uint64_t seed = 0;
  uint64_t budget = 1ull << 22;
  bool assume_infinite = false;
  bool refine = false;
  bool split = false;
  std::string poly;
  std::string task = "radical";
  bool serial = false;
};

std::vector<uint32_t> parse_sig(const std::string& s, uint32_t k) {
  std::vector<uint32_t> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    uint64_t v = 0;
    try {
      v = std::stoul(s.substr(pos, next - pos));
    } catch (const std::exception&) {
      throw SchemaError("signature entries must be numbers");
    }
    if (v < 1 || v > k)
      throw SchemaError("signature entries are 1-based component indices");
    out.push_back(uint32_t(v) - 1);
    pos = next + 1;
  }
  if (out.size() < 2) throw SchemaError("signature needs at least two entries");
  return out;
}

Json context_json(const Tower& t, const Options& opt) {
  return Json{{"q", t.q()},
              {"M", t.M()},
              {"E", opt.E ? opt.E : t.M()},
              {"seed", opt.seed}};
}

Json closed_space_json(const ClosedSpace& C, uint32_t level) {
  Json out;
  out["relations"] = module_json(C.relations);
  Json counts = Json::object();
  uint32_t top = C.t->M();
  for (uint32_t m = 1; m <= top; ++m) {
    if (top % m) continue;
    size_t e = point_count_exponent(C, m);
    std::string key = "GF(q^" + std::to_string(m) + ")";
    counts[key] = Json{{"exponent", e},
                       {"count", e < 63 ? Json(uint64_t(C.t->q()) << 0) : Json()}};
    counts[key]["count"] = "q^" + std::to_string(e);
  }
  if (level) {
    size_t e = point_count_exponent(C, level);
    out["level"] = Json{{"m", level}, {"exponent", e},
                        {"count", "q^" + std::to_string(e)}};
  }
  out["point_counts"] = counts;
  return out;
}

Json block_form_json(const BlockForm& BF) {
  Json out;
  out["m"] = BF.m;
  out["k"] = BF.k;
  out["conjugator"] = mat_json(BF.U);
  Json blocks = Json::array();
  for (uint32_t r = 0; r < BF.m; ++r)
    blocks.push_back(Json{{"size", BF.block_size[r]},
                          {"offset", BF.block_offset[r]},
                          {"component", BF.block_comp[r] + 1},
                          {"exponent", BF.block_exp[r]},
                          {"empty", BF.block_comp[r] < 0}});
  out["blocks"] = blocks;
  Json comps = Json::array();
  for (uint32_t u = 0; u < BF.k; ++u)
    comps.push_back(Json{{"n_u", BF.comp_n[u]}, {"d_u", BF.comp_d[u]}});
  out["components"] = comps;
  Json T = Json::array();
  for (auto& Tu : BF.gluing_partition()) {
    Json l = Json::array();
    for (auto r : Tu) l.push_back(r + 1);
    T.push_back(l);
  }
  out["gluing_partition"] = T;
  Json ident = Json::array();
  for (auto& Tu : BF.identical_partition()) {
    Json lu = Json::array();
    for (auto& cls : Tu) {
      Json l = Json::array();
      for (auto r : cls) l.push_back(r + 1);
      lu.push_back(l);
    }
    ident.push_back(lu);
  }
  out["identical_partition"] = ident;
  Json expm = Json::array();
  for (uint32_t r = 0; r < BF.m; ++r) {
    Json row = Json::array();
    for (uint32_t s = 0; s < BF.m; ++s) {
      if (BF.block_comp[r] < 0 || BF.block_comp[r] != BF.block_comp[s])
        row.push_back(nullptr);
      else
        row.push_back(BF.exp_between(r, s));
    }
    expm.push_back(row);
  }
  out["exponent_matrix"] = expm;
  return out;
}

Json wedderburn_json(const WedderburnData& wd) {
  Json out;
  out["dim_J"] = wd.J.size();
  out["dim_S"] = wd.S.size();
  out["nu"] = wd.nu;
  out["lifting_iterations"] = wd.lifting_iterations;
  Json fs = Json::array();
  for (auto& f : wd.factors)
    fs.push_back(Json{{"n_u", f.n_u},
                      {"d_u", f.d_u},
                      {"center_min_poly", f.field_min_poly}});
  out["factors"] = fs;
  Json jb = Json::array();
  for (auto& j : wd.J) jb.push_back(mat_json(j));
  out["J_basis"] = jb;
  Json sb = Json::array();
  for (auto& s : wd.S) sb.push_back(mat_json(s));
  out["S_basis"] = sb;
  return out;
}

Json class_json(const EquivClass& c) {
  Json members = Json::array();
  for (auto& mem : c.members) {
    Json m = Json::array();
    for (auto r : mem) m.push_back(r + 1);
    members.push_back(m);
  }
  Json out{{"members", members}, {"size", c.members.size()}};
  Json sig = Json::array();
  for (auto u : c.sig) sig.push_back(u + 1);
  out["signature"] = sig;
  if (c.refined) {
    std::string pat;
    for (auto t : c.types) pat += t ? '<' : '=';
    out["types"] = pat;
    out["weight"] = c.weight;
    out["flagged_zero"] = c.flagged_zero;
  }
  return out;
}

int run(const Options& opt, const std::string& cmd) {
  if (opt.serial) default_exec() = Exec::Serial;
  Json report;
  auto in = load_input(opt.input, opt.M);
  report["context"] = context_json(*in.t, opt);
  report["command"] = cmd;

  if (cmd == "closure") {
    auto& P = in.as_parametrization();
    auto C = opt.assume_infinite
                 ? closure_assume_infinite(P)
                 : (opt.E ? ClosedSpace{image_relations(P, opt.E), P.n, in.t, P}
                          : closure(P));
    report["closure"] = closed_space_json(C, opt.level);
    auto span = k_span(P);
    report["k_span_dim"] = span.dim();
    report["parametrization_rank"] = P.params.size();
  } else if (cmd == "points") {
    auto& P = in.as_parametrization();
    auto C = closure(P);
    uint32_t m = opt.level ? opt.level : in.t->M();
    report["level"] = m;
    report["exponent"] = point_count_exponent(C, m);
    report["count"] = "q^" + std::to_string(point_count_exponent(C, m));
  } else if (cmd == "structure") {
    auto& A = in.as_algebra();
    auto BF = block_form(A, opt.seed);
    report["dim_F"] = A.dimF();
    report["wedderburn"] = wedderburn_json(BF.wd);
    report["block_form"] = block_form_json(BF);
  } else if (cmd == "classes") {
    auto& A = in.as_algebra();
    auto BF = block_form(A, opt.seed);
    auto sig = parse_sig(opt.sig, BF.k);
    Json classes = Json::array();
    for (auto& c : equiv_classes(BF, sig)) {
      Json cj = class_json(c);
      if (opt.refine) {
        Json refined = Json::array();
        for (auto& rc : refine_classes(BF, c)) refined.push_back(class_json(rc));
        cj["refined"] = refined;
      }
      classes.push_back(cj);
    }
    report["classes"] = classes;
  } else if (cmd == "decompose") {
    auto& A = in.as_algebra();
    auto BF = block_form(A, opt.seed);
    auto sig = parse_sig(opt.sig, BF.k);
    Json classes = Json::array();
    for (auto& c : equiv_classes(BF, sig)) {
      Json cj = class_json(c);
      auto span = component_space(BF, c);
      cj["component_dim_K0"] = span.dim();
      Json basis = Json::array();
      for (auto& row : span.rows())
        basis.push_back(mat_json(mat_unflatten(in.t, A.n, row)));
      cj["component_basis"] = basis;
      if (opt.refine) {
        Json refined = Json::array();
        for (auto& rc : refine_classes(BF, c)) {
          Json rj = class_json(rc);
          auto rspan = component_space(BF, rc);
          rj["component_dim_K0"] = rspan.dim();
          Json rbasis = Json::array();
          for (auto& row : rspan.rows())
            rbasis.push_back(mat_json(mat_unflatten(in.t, A.n, row)));
          rj["component_basis"] = rbasis;
          refined.push_back(rj);
        }
        cj["refined"] = refined;
      }
      classes.push_back(cj);
    }
    report["components"] = classes;
  } else if (cmd == "relations") {
    if (in.kind == "monoid") {
      auto rel = monoid_relations(in.t, in.monoid_points,
                                  in.monoid_without_unit, opt.budget);
      Json polys = Json::array();
      uint32_t n = uint32_t(in.monoid_points[0].size());
      for (auto& f : rel.as_polys(in.t, n)) polys.push_back(commpoly_json(f));
      report["monoid_relations"] = polys;
    } else {
      auto& P = in.as_parametrization();
      auto mod = image_relations(P, opt.E ? opt.E : in.t->M());
      report["relations"] = module_json(mod);
    }
  } else if (cmd == "check-id") {
    auto& A = in.as_algebra();
    auto f = parse_ncpoly(opt.poly, in.t->F()->p());
    IdentityReport rep;
    if (opt.split) {
      auto wd = wedderburn_malcev(A, opt.seed);
      rep = check_identity_split(A, wd.S_space, wd.J_space, f, opt.budget);
    } else {
      rep = check_identity(A, f, opt.budget);
    }
    report["poly"] = opt.poly;
    report["holds"] = rep.holds;
    report["substitutions"] = rep.substitutions_checked;
    if (rep.witness) {
      Json w = Json::array();
      for (auto& m : rep.witness->matrices) w.push_back(mat_json(m));
      report["witness"] = w;
    }
  } else if (cmd == "generic") {
    auto& A = in.as_algebra();
    auto BF = block_form(A, opt.seed);
    auto G = build_generic(BF, opt.mu, opt.budget);
    report["mu"] = opt.mu;
    report["coefficient_ring"] =
        Json{{"variables", G.C.constraints}, {"size", G.C.table_size}};
    Json gens = Json::array();
    for (auto& g : G.gens) {
      Json parts = Json::array();
      for (auto& part : g.parts)
        parts.push_back(Json{{"var", part.var},
                             {"twist", part.e},
                             {"pattern", mat_json(part.pattern)}});
      gens.push_back(parts);
    }
    report["generators"] = gens;
    auto rep = verify_relatively_free(G, A, opt.degree, opt.budget);
    report["freeness"] = Json{{"degree", opt.degree},
                              {"identities_checked", rep.identities_checked},
                              {"identities_hold", rep.identities_hold},
                              {"specializations_onto", rep.specializations_onto},
                              {"pass", rep.pass()}};
    auto pr = pi_rank_bound(A, opt.seed, opt.budget);
    report["pi_rank_bound"] =
        Json{{"mu_S", pr.mu_S}, {"nu", pr.nu}, {"bound", pr.bound()}};
  } else if (cmd == "oracle") {
    if (opt.task == "radical") {
      auto& A = in.as_algebra();
      auto slow = radical_oracle(A);
      auto fast = radical(A);
      Json out;
      out["oracle_dim"] = slow.size();
      out["fast_dim"] = fast.size();
      FSubspace s1(in.t, A.n * A.n), s2(in.t, A.n * A.n);
      for (auto& m : slow) s1.insert(mat_flatten(m));
      for (auto& m : fast) s2.insert(mat_flatten(m));
      out["agree"] = s1.same(s2);
      report["radical"] = out;
    } else if (opt.task == "relations") {
      auto& P = in.as_parametrization();
      uint32_t E = opt.E ? opt.E : in.t->M();
      std::vector<std::vector<uint64_t>> pts;
      uint64_t count = P.assignment_count(opt.budget);
      for (uint64_t i = 0; i < count; ++i)
        pts.push_back(P.image_point(P.assignment_by_index(i)));
      auto slow = annihilator_points(in.t, P.n, pts, E);
      auto fast = image_relations(P, E);
      bool agree = true;
      for (uint32_t m = 1; m <= in.t->M(); ++m) {
        if (in.t->M() % m) continue;
        agree &= kernel(slow, m).same(kernel(fast, m));
      }
      report["relations"] = Json{{"oracle", module_json(slow)},
                                 {"fast", module_json(fast)},
                                 {"kernels_agree", agree}};
    } else if (opt.task == "identity") {
      auto& A = in.as_algebra();
      auto f = parse_ncpoly(opt.poly, in.t->F()->p());
      auto rep = check_identity(A, f, opt.budget, Exec::Serial);
      report["identity"] =
          Json{{"poly", opt.poly}, {"holds", rep.holds}};
    } else {
      throw SchemaError("unknown oracle task");
    }
  } else {
    throw SchemaError("unknown command");
  }
  std::cout << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact structure theory of Zariski-closed matrix algebras "
               "over finite fields"};
  app.require_subcommand(1);
  Options opt;

  std::vector<std::string> cmds = {"closure", "points",    "structure",
                                   "classes", "decompose", "relations",
                                   "check-id", "generic",  "oracle"};
  for (auto& name : cmds) {
    auto* sub = app.add_subcommand(name);
    auto* pos = sub->add_option("input", opt.input, "input JSON file");
    sub->add_option("--spec", opt.input, "input JSON file (alternative)")
        ->excludes(pos);
    sub->callback([sub, &opt]() {
      if (opt.input.empty())
        throw CLI::RequiredError(sub->get_name() + " input");
    });
    sub->add_option("--M", [&](const CLI::results_t& r) {
      opt.M = uint32_t(std::stoul(r[0]));
      return true;
    }, "override the field-of-definition level");
    sub->add_option("--E", opt.E, "phi-degree bound (default M)");
    sub->add_option("--degree", opt.degree, "identity degree bound");
    sub->add_option("--mu", opt.mu, "generator count");
    sub->add_option("--sig", opt.sig, "class signature, e.g. 1,1,1");
    sub->add_option("--level", opt.level, "rationality level m");
    sub->add_option("--seed", opt.seed, "seed for randomized searches");
    sub->add_option("--budget", opt.budget, "enumeration budget");
    sub->add_option("--poly", opt.poly, "polynomial expression");
    sub->add_option("--task", opt.task, "oracle task");
    sub->add_flag("--assume-infinite", opt.assume_infinite,
                  "closure of a space over an infinite base field");
    sub->add_flag("--refine", opt.refine, "emit fully refined classes");
    sub->add_flag("--split", opt.split, "split-substitution identity mode");
    sub->add_flag("--serial", opt.serial, "disable the parallel kernels");
  }

  CLI11_PARSE(app, argc, argv);
  std::string cmd = app.get_subcommands()[0]->get_name();
  try {
    return run(opt, cmd);
  } catch (const BudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
