#include "psodkit/io.hpp"

#include <limits>

#include "psodkit/error.hpp"

namespace psodkit::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object with field '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> strings(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(text(e, what));
  return out;
}

std::size_t count(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError(std::string(what) + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

// label -> label object into an assignment between two preorders.
std::vector<std::size_t> assignment_from_json(const Json& j, const FinitePreorder& from, const FinitePreorder& to) {
  if (!j.is_object()) throw ParseError("map must be an object from labels to labels");
  std::vector<std::size_t> out(from.size(), std::numeric_limits<std::size_t>::max());
  for (const auto& [k, v] : j.items()) {
    const auto x = from.find(k);
    const auto y = to.find(text(v, "map value"));
    if (!x || !y) throw InputError("map refers to unknown label '" + (x ? v.get<std::string>() : k) + "'");
    out[*x] = *y;
  }
  for (std::size_t x = 0; x < out.size(); ++x)
    if (out[x] == std::numeric_limits<std::size_t>::max()) throw InputError("map is not total: '" + from.label(x) + "' unassigned");
  return out;
}

Json assignment_to_json(std::span<const std::size_t> a, const FinitePreorder& from, const FinitePreorder& to) {
  Json m = Json::object();
  for (std::size_t x = 0; x < a.size(); ++x) m[from.label(x)] = to.label(a[x]);
  return m;
}

Json labels_of(const FinitePreorder& p, const std::vector<std::size_t>& positions) {
  Json out = Json::array();
  for (auto x : positions) out.push_back(p.label(x));
  return out;
}

}  // namespace

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

Json integer_to_json(const mpz_class& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

mpz_class integer_from_json(const Json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<unsigned long long>()));
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    mpz_class v;
    const bool neg = !s.empty() && s[0] == '-';
    if (s.size() == static_cast<std::size_t>(neg) || s.find_first_not_of("0123456789", neg ? 1 : 0) != std::string::npos)
      throw ParseError("malformed integer '" + s + "'");
    v.set_str(s, 10);
    return v;
  }
  throw ParseError("expected an integer");
}

Json to_json(const FinitePreorder& p) {
  Json leq = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < p.size(); ++j) row.push_back(p.leq(i, j));
    leq.push_back(std::move(row));
  }
  return Json{{"elements", p.labels()}, {"leq", std::move(leq)}};
}

FinitePreorder preorder_from_json(const Json& j) {
  return guarded([&] {
    auto labels = strings(field(j, "elements"), "elements");
    const auto& leq = field(j, "leq");
    if (!leq.is_array() || leq.size() != labels.size()) throw ParseError("leq must be a square boolean matrix");
    kernels::BitRelation rel(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!leq[i].is_array() || leq[i].size() != labels.size()) throw ParseError("leq must be a square boolean matrix");
      for (std::size_t k = 0; k < labels.size(); ++k) {
        if (!leq[i][k].is_boolean()) throw ParseError("leq entries must be booleans");
        if (leq[i][k].get<bool>()) rel.set(i, k);
      }
    }
    return FinitePreorder(std::move(labels), std::move(rel));
  });
}

Json to_json(const OrderReflectingMap& f) {
  return Json{{"source", to_json(f.source())},
              {"target", to_json(f.target())},
              {"map", assignment_to_json(f.assignment(), f.source(), f.target())}};
}

Json to_json(const LabelMap& f) {
  Json m = Json::object();
  for (const auto& [k, v] : f.assign) m[k] = v;
  return Json{{"source", to_json(f.source)}, {"target", to_json(f.target)}, {"map", std::move(m)}};
}

LabelMap label_map_from_json(const Json& j) {
  return guarded([&] {
    LabelMap out{preorder_from_json(field(j, "source")), preorder_from_json(field(j, "target")), {}};
    const auto& m = field(j, "map");
    if (!m.is_object()) throw ParseError("map must be an object from labels to labels");
    for (const auto& [k, v] : m.items()) out.assign[k] = text(v, "map value");
    return out;
  });
}

Json to_json(const PreorderDiagram& d) {
  Json vs = Json::array();
  for (const auto& v : d.vertices()) vs.push_back({{"id", v.id}, {"preorder", to_json(v.preorder)}});
  Json as = Json::array();
  for (const auto& a : d.arrows()) {
    const auto& dom = d.vertices()[a.domain()].preorder;
    const auto& cod = d.vertices()[a.codomain()].preorder;
    as.push_back({{"id", a.id},
                  {"source", d.vertices()[a.source].id},
                  {"target", d.vertices()[a.target].id},
                  {"orientation", a.orientation == Orientation::covariant ? "covariant" : "contravariant"},
                  {"map", assignment_to_json(a.map, dom, cod)}});
  }
  return Json{{"vertices", std::move(vs)}, {"arrows", std::move(as)}};
}

PreorderDiagram diagram_from_json(const Json& j) {
  return guarded([&] {
    std::vector<DiagramVertex> vs;
    const auto& jv = field(j, "vertices");
    if (!jv.is_array()) throw ParseError("vertices must be an array");
    for (const auto& v : jv) vs.push_back({text(field(v, "id"), "vertex id"), preorder_from_json(field(v, "preorder"))});
    auto vertex = [&](const Json& id) {
      const auto s = text(id, "arrow endpoint");
      for (std::size_t i = 0; i < vs.size(); ++i)
        if (vs[i].id == s) return i;
      throw InputError("arrow refers to unknown vertex '" + s + "'");
    };
    std::vector<DiagramArrow> as;
    if (j.contains("arrows")) {
      const auto& ja = j.at("arrows");
      if (!ja.is_array()) throw ParseError("arrows must be an array");
      for (const auto& a : ja) {
        DiagramArrow arrow;
        arrow.id = a.contains("id") ? text(a.at("id"), "arrow id") : "a" + std::to_string(as.size());
        arrow.source = vertex(field(a, "source"));
        arrow.target = vertex(field(a, "target"));
        const auto orient = a.contains("orientation") ? text(a.at("orientation"), "orientation") : "covariant";
        if (orient == "covariant") {
          arrow.orientation = Orientation::covariant;
        } else if (orient == "contravariant") {
          arrow.orientation = Orientation::contravariant;
        } else {
          throw ParseError("orientation must be 'covariant' or 'contravariant'");
        }
        arrow.map = assignment_from_json(field(a, "map"), vs[arrow.domain()].preorder, vs[arrow.codomain()].preorder);
        as.push_back(std::move(arrow));
      }
    }
    return PreorderDiagram(std::move(vs), std::move(as));
  });
}

Json to_json(const Cocone& c, const PreorderDiagram& d, const FinitePreorder& colimit) {
  Json out = Json::object();
  for (std::size_t i = 0; i < c.size(); ++i) out[d.vertices()[i].id] = assignment_to_json(c[i], d.vertices()[i].preorder, colimit);
  return out;
}

Cocone cocone_from_json(const Json& j, const PreorderDiagram& d, const FinitePreorder& colimit) {
  return guarded([&] {
    Cocone out;
    for (const auto& v : d.vertices()) out.push_back(assignment_from_json(field(j, v.id.c_str()), v.preorder, colimit));
    return out;
  });
}

Json to_json(const ColimitCertificate& c, const PreorderDiagram& d) {
  Json out{{"ok", c.ok}, {"reason", c.reason}, {"targets_checked", c.targets_checked}};
  if (c.witness_target) {
    Json cocone = Json::object();
    for (std::size_t i = 0; i < c.witness_cocone.size() && i < d.vertices().size(); ++i)
      cocone[d.vertices()[i].id] = assignment_to_json(c.witness_cocone[i], d.vertices()[i].preorder, *c.witness_target);
    out["witness"] = {{"target", to_json(*c.witness_target)}, {"cocone", cocone}, {"factorizations", c.factorizations}};
  }
  return out;
}

Json to_json(const Residue& r) { return r.to_string(); }

Residue residue_from_json(const Json& j) {
  if (!j.is_string()) throw ParseError("residues are written as strings such as \"-1/2\"");
  return Residue::parse(j.get<std::string>());
}

Json to_json(const CharTuple& chi) {
  Json out = Json::array();
  for (const auto& c : chi) out.push_back(to_json(c));
  return out;
}

CharTuple tuple_from_json(const Json& j) {
  if (j.is_string()) return parse_tuple(j.get<std::string>());
  if (!j.is_array()) throw ParseError("character tuple must be an array of residues");
  CharTuple out;
  for (const auto& e : j) out.push_back(residue_from_json(e));
  return out;
}

Json to_json(const FactorialForm& f) {
  Json nums = Json::array();
  for (const auto& p : f.numerators) nums.push_back(integer_to_json(p));
  return Json{{"level", f.level}, {"numerators", std::move(nums)}};
}

Json to_json(const Stratification& s) {
  Json strata = Json::array();
  for (const auto& st : s.strata)
    strata.push_back({{"id", st.id}, {"codim", st.codim}, {"norm_components", st.norm_components}});
  Json closure = Json::array();
  for (const auto& [a, b] : s.closure) closure.push_back(Json::array({a, b}));
  return Json{{"strata", std::move(strata)}, {"closure", std::move(closure)}};
}

Stratification stratification_from_json(const Json& j) {
  return guarded([&] {
    Stratification s;
    const auto& strata = field(j, "strata");
    if (!strata.is_array()) throw ParseError("strata must be an array");
    for (const auto& st : strata)
      s.strata.push_back({text(field(st, "id"), "stratum id"), static_cast<unsigned>(count(field(st, "codim"), "codim")),
                          strings(field(st, "norm_components"), "norm_components")});
    if (j.contains("closure")) {
      const auto& c = j.at("closure");
      if (!c.is_array()) throw ParseError("closure must be an array of pairs");
      for (const auto& p : c) {
        if (!p.is_array() || p.size() != 2) throw ParseError("closure entries must be pairs");
        s.closure.emplace_back(text(p[0], "closure entry"), text(p[1], "closure entry"));
      }
    }
    return s;
  });
}

Json to_json(const ChartAtlas& a) {
  Json charts = Json::array();
  for (const auto& c : a.charts) charts.push_back({{"id", c.id}, {"branches", c.branches}});
  Json overlaps = Json::array();
  for (const auto& o : a.overlaps) {
    Json pairs = Json::array();
    for (const auto& [x, y] : o.pairs) pairs.push_back(Json::array({x, y}));
    overlaps.push_back({{"from", o.from}, {"to", o.to}, {"pairs", std::move(pairs)}});
  }
  return Json{{"charts", std::move(charts)}, {"overlaps", std::move(overlaps)}};
}

ChartAtlas atlas_from_json(const Json& j) {
  return guarded([&] {
    ChartAtlas a;
    const auto& charts = field(j, "charts");
    if (!charts.is_array()) throw ParseError("charts must be an array");
    for (const auto& c : charts) a.charts.push_back({text(field(c, "id"), "chart id"), strings(field(c, "branches"), "branches")});
    if (j.contains("overlaps")) {
      for (const auto& o : j.at("overlaps")) {
        Overlap ov{text(field(o, "from"), "overlap from"), text(field(o, "to"), "overlap to"), {}};
        for (const auto& p : field(o, "pairs")) {
          if (!p.is_array() || p.size() != 2) throw ParseError("overlap pairs must be pairs of branch labels");
          ov.pairs.emplace_back(text(p[0], "branch"), text(p[1], "branch"));
        }
        a.overlaps.push_back(std::move(ov));
      }
    }
    return a;
  });
}

Json to_json(const IntMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(integer_to_json(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

IntMatrix matrix_from_json(const Json& j, std::size_t cols_if_empty) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  std::vector<std::vector<mpz_class>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw ParseError("matrix rows must be arrays");
    std::vector<mpz_class> row;
    for (const auto& e : r) row.push_back(integer_from_json(e));
    rows.push_back(std::move(row));
  }
  return IntMatrix::from_rows(rows, cols_if_empty);
}

Json to_json(const FgAbGroup& g) {
  Json t = Json::array();
  for (const auto& d : g.torsion) t.push_back(integer_to_json(d));
  return Json{{"rank", g.rank}, {"torsion", std::move(t)}};
}

FgAbGroup group_from_json(const Json& j) {
  return guarded([&] {
    FgAbGroup g;
    g.rank = count(field(j, "rank"), "rank");
    if (j.contains("torsion"))
      for (const auto& d : j.at("torsion")) g.torsion.push_back(integer_from_json(d));
    g.check();
    return g;
  });
}

namespace {

Json pieces_to_json(const GradedGroup& g) {
  Json out = Json::object();
  for (std::size_t x = 0; x < g.pieces.size(); ++x) out[g.index.label(x)] = to_json(g.pieces[x]);
  return out;
}

std::vector<FgAbGroup> pieces_from_json(const Json& j, const FinitePreorder& index) {
  if (!j.is_object()) throw ParseError("pieces must be an object from labels to groups");
  std::vector<FgAbGroup> out(index.size());
  for (const auto& [k, v] : j.items()) out[index.index_of(k)] = group_from_json(v);
  return out;
}

}  // namespace

Json to_json(const GradedGroup& g) { return Json{{"index", to_json(g.index)}, {"pieces", pieces_to_json(g)}}; }

GradedGroup graded_from_json(const Json& j) {
  return guarded([&] {
    GradedGroup g;
    g.index = preorder_from_json(field(j, "index"));
    g.pieces = pieces_from_json(field(j, "pieces"), g.index);
    return g;
  });
}

Json to_json(const PsodIndex& p) {
  Json factors = Json::array();
  for (std::size_t x = 0; x < p.factors.size(); ++x) {
    const auto& f = p.factors[x];
    Json e{{"element", p.index.label(x)},
           {"stratum", f.stratum_id},
           {"character", to_json(f.character)},
           {"target", f.target_label}};
    if (f.kdata) e["kdata"] = to_json(*f.kdata);
    factors.push_back(std::move(e));
  }
  return Json{{"index", to_json(p.index)},
              {"factors", std::move(factors)},
              {"directed", is_directed(p.index)},
              {"order", labels_of(p.index, p.order())},
              {"notes", p.notes}};
}

PsodIndex psod_from_json(const Json& j) {
  return guarded([&] {
    PsodIndex p;
    p.index = preorder_from_json(field(j, "index"));
    p.factors.resize(p.index.size());
    std::vector<bool> seen(p.index.size(), false);
    for (const auto& f : field(j, "factors")) {
      const auto x = p.index.index_of(text(field(f, "element"), "element"));
      seen[x] = true;
      auto& d = p.factors[x];
      d.stratum_id = f.contains("stratum") ? text(f.at("stratum"), "stratum") : "";
      d.character = f.contains("character") ? tuple_from_json(f.at("character")) : CharTuple{};
      d.target_label = f.contains("target") ? text(f.at("target"), "target") : p.index.label(x);
      if (f.contains("kdata")) d.kdata = group_from_json(f.at("kdata"));
    }
    for (std::size_t x = 0; x < seen.size(); ++x)
      if (!seen[x]) throw ParseError("no factor for element '" + p.index.label(x) + "'");
    if (j.contains("notes")) p.notes = strings(j.at("notes"), "notes");
    return p;
  });
}

namespace {

PsodIndex vertex_psod(const Json& v) {
  if (v.contains("psod")) return psod_from_json(v.at("psod"));
  PsodIndex p;
  p.index = preorder_from_json(field(v, "index"));
  for (const auto& l : p.index.labels()) p.factors.push_back({"", {}, l, {}});
  return p;
}

std::optional<GradedGroup> vertex_graded(const Json& v, const FinitePreorder& index) {
  if (!v.contains("pieces")) return std::nullopt;
  return GradedGroup{index, pieces_from_json(v.at("pieces"), index)};
}

}  // namespace

GluingScenario scenario_from_json(const Json& j) {
  return guarded([&] {
    if (j.contains("cech")) {
      const auto& c = j.at("cech");
      const auto psod = vertex_psod(c);
      const auto depth = c.contains("depth") ? count(c.at("depth"), "depth") : 2;
      return cech_scenario(psod, static_cast<unsigned>(depth), vertex_graded(c, psod.index));
    }
    GluingScenario sc;
    for (const auto& v : field(j, "vertices")) {
      GluingVertex gv{text(field(v, "id"), "vertex id"), vertex_psod(v), std::nullopt};
      gv.graded = vertex_graded(v, gv.psod.index);
      sc.vertices.push_back(std::move(gv));
    }
    auto vertex = [&](const Json& id) {
      const auto s = text(id, "arrow endpoint");
      for (std::size_t i = 0; i < sc.vertices.size(); ++i)
        if (sc.vertices[i].id == s) return i;
      throw InputError("arrow refers to unknown vertex '" + s + "'");
    };
    if (j.contains("arrows")) {
      for (const auto& a : j.at("arrows")) {
        GluingArrow ga;
        ga.id = a.contains("id") ? text(a.at("id"), "arrow id") : "a" + std::to_string(sc.arrows.size());
        ga.source = vertex(field(a, "source"));
        ga.target = vertex(field(a, "target"));
        const auto& src = sc.vertices[ga.source].psod.index;
        const auto& tgt = sc.vertices[ga.target].psod.index;
        ga.phi = assignment_from_json(field(a, "phi"), tgt, src);
        if (a.contains("blocks")) {
          for (const auto& b : a.at("blocks")) {
            const auto x = src.index_of(text(field(b, "from"), "block from"));
            const auto y = tgt.index_of(text(field(b, "to"), "block to"));
            std::size_t cols = 0;
            if (sc.vertices[ga.source].graded) cols = sc.vertices[ga.source].graded->pieces[x].generators();
            ga.blocks[{x, y}] = matrix_from_json(field(b, "matrix"), cols);
          }
        }
        sc.arrows.push_back(std::move(ga));
      }
    }
    return sc;
  });
}

Json to_json(const GluingResult& r) {
  Json out{{"verdict", r.verdict()}, {"label", r.label()}, {"directed", r.directed}};
  if (r.witness)
    out["witness"] = Json::array({r.psod.index.label(r.witness->first), r.psod.index.label(r.witness->second)});
  else
    out["witness"] = nullptr;
  out["psod"] = to_json(r.psod);
  if (r.graded) {
    out["graded"] = {{"pieces", pieces_to_json(r.graded->graded)},
                     {"total", to_json(r.graded->graded.total())},
                     {"ungraded", to_json(r.graded->ungraded)},
                     {"comparison_iso", r.graded->comparison_iso}};
  }
  return out;
}

Json to_json(const std::vector<FiltrationStep>& steps, const GradedGroup& g) {
  auto vec = [](const std::vector<mpz_class>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(integer_to_json(x));
    return a;
  };
  Json out = Json::array();
  for (const auto& s : steps) {
    Json residual = Json::object();
    for (std::size_t x = 0; x < s.residual.size(); ++x) residual[g.index.label(x)] = vec(s.residual[x]);
    out.push_back({{"grade", g.index.label(s.grade)}, {"component", vec(s.component[s.grade])}, {"residual", residual}});
  }
  return Json{{"steps", std::move(out)}};
}

std::vector<std::vector<mpz_class>> graded_object_from_json(const Json& j, const GradedGroup& g) {
  return guarded([&] {
    if (!j.is_object()) throw ParseError("object must map labels to coordinate arrays");
    std::vector<std::vector<mpz_class>> out(g.index.size());
    for (std::size_t x = 0; x < out.size(); ++x) out[x].assign(g.pieces[x].generators(), 0);
    for (const auto& [k, v] : j.items()) {
      const auto x = g.index.index_of(k);
      if (!v.is_array()) throw ParseError("object components must be arrays");
      out[x].clear();
      for (const auto& e : v) out[x].push_back(integer_from_json(e));
    }
    return out;
  });
}

Json to_json(const KReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"stratum", row.stratum_id},
                    {"codim", row.codim},
                    {"multiplicity", integer_to_json(row.multiplicity)},
                    {"multiplicity_text", row.multiplicity_text},
                    {"k", to_json(row.kgroup)},
                    {"contribution", to_json(row.contribution)}});
  return Json{{"mode", r.mode}, {"rows", std::move(rows)}, {"total", to_json(r.total)}, {"notes", r.notes}};
}

std::map<std::string, FgAbGroup> kdata_from_json(const Json& j) {
  return guarded([&] {
    if (!j.is_object()) throw ParseError("kdata must map component labels to groups");
    std::map<std::string, FgAbGroup> out;
    for (const auto& [k, v] : j.items()) out[k] = group_from_json(v);
    return out;
  });
}

}  // namespace psodkit::io
