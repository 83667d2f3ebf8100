#include "psodkit/psod.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include "psodkit/error.hpp"

namespace psodkit {

std::vector<std::size_t> PsodIndex::order() const {
  return is_directed(index) ? directed_numbering(index) : linear_extension(index);
}

std::vector<std::pair<std::string, std::vector<std::size_t>>> PsodIndex::by_stratum() const {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
  for (auto x : order()) {
    const auto& id = factors[x].stratum_id;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == id; });
    if (it == out.end()) {
      out.push_back({id, {}});
      it = std::prev(out.end());
    }
    it->second.push_back(x);
  }
  return out;
}

std::string perf_label(const std::vector<std::string>& components) {
  std::string inner;
  for (const auto& c : components) inner += (inner.empty() ? "" : " ⊔ ") + c;
  return "Perf(" + inner + ")";
}

namespace {

PsodIndex describe(const Stratification& strat, FinitePreorder index) {
  PsodIndex out{std::move(index), {}, {}};
  for (const auto& label : out.index.labels()) {
    const auto cut = label.rfind(":(");
    if (cut == std::string::npos) throw InputError("unexpected index label '" + label + "'");
    const auto id = label.substr(0, cut);
    const auto s = strat.find(id);
    if (!s) throw InputError("index label refers to unknown stratum '" + id + "'");
    out.factors.push_back({id, parse_tuple(label.substr(cut + 1)), perf_label(strat.strata[*s].norm_components), {}});
  }
  return out;
}

}  // namespace

PsodIndex build_root_psod(const Stratification& strat, unsigned long r, bool totalize, const Caps& caps) {
  if (r == 0) throw InputError("root psod: r must be at least 1");
  require_valid(strat);
  auto out = describe(strat, build_zsdr(strat.blocks(), r, totalize, caps));
  if (!is_directed(out.index)) out.notes.push_back("index is not directed; use --totalize for a directed variant");
  return out;
}

PsodIndex build_infinite_psod(const Stratification& strat, unsigned max_level, bool totalize, const Caps& caps,
                              unsigned long exclude_prime) {
  require_valid(strat);
  auto out = describe(strat, build_bang_index(strat.blocks(), max_level, totalize, caps, exclude_prime));
  for (const auto& s : strat.strata)
    if (s.codim > 0)
      out.notes.push_back("stratum " + s.id + ": untruncated index is countably infinite; listed up to level " +
                          std::to_string(max_level));
  if (exclude_prime != 0)
    out.notes.push_back("characters restricted to denominators coprime to " + std::to_string(exclude_prime));
  return out;
}

PreorderDiagram GluingScenario::index_diagram() const {
  std::vector<DiagramVertex> vs;
  for (const auto& v : vertices) vs.push_back({v.id, v.psod.index});
  std::vector<DiagramArrow> as;
  for (const auto& a : arrows) as.push_back({a.id, a.source, a.target, Orientation::contravariant, a.phi});
  return PreorderDiagram(std::move(vs), std::move(as));
}

namespace {

template <class T, class F>
std::vector<T> unique_values(const std::vector<const FactorDescriptor*>& members, F get) {
  std::vector<T> out;
  for (const auto* m : members) {
    T v = get(*m);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
  return out;
}

FactorDescriptor aggregate(const std::vector<const FactorDescriptor*>& members) {
  if (members.empty()) return {};
  const auto ids = unique_values<std::string>(members, [](const auto& f) { return f.stratum_id; });
  const auto targets = unique_values<std::string>(members, [](const auto& f) { return f.target_label; });
  const auto chars = unique_values<CharTuple>(members, [](const auto& f) { return f.character; });
  FactorDescriptor out;
  out.stratum_id = join(ids, "+");
  out.target_label = targets.size() == 1 ? targets.front() : "lim(" + join(targets, ", ") + ")";
  if (chars.size() == 1) out.character = chars.front();
  return out;
}

}  // namespace

GluingResult glue(const GluingScenario& scenario) {
  for (const auto& v : scenario.vertices)
    if (v.psod.factors.size() != v.psod.index.size())
      throw InputError("gluing vertex '" + v.id + "': factor count differs from index size");
  const auto diagram = scenario.index_diagram();
  auto col = colimit(diagram);

  GluingResult out;
  out.cocone = col.cocone;
  out.psod.index = col.colimit;
  for (std::size_t w = 0; w < col.colimit.size(); ++w) {
    std::vector<const FactorDescriptor*> members;
    for (std::size_t i = 0; i < scenario.vertices.size(); ++i)
      for (std::size_t z = 0; z < col.cocone[i].size(); ++z)
        if (col.cocone[i][z] == w) members.push_back(&scenario.vertices[i].psod.factors[z]);
    out.psod.factors.push_back(aggregate(members));
  }
  out.witness = directedness_witness(col.colimit);
  out.directed = !out.witness.has_value();

  const bool graded = !scenario.vertices.empty() &&
                      std::all_of(scenario.vertices.begin(), scenario.vertices.end(),
                                  [](const GluingVertex& v) { return v.graded.has_value(); });
  if (graded) {
    GradedDiagram gd;
    for (const auto& v : scenario.vertices) gd.vertices.push_back(*v.graded);
    for (const auto& a : scenario.arrows) {
      const auto& src = *scenario.vertices[a.source].graded;
      const auto& tgt = *scenario.vertices[a.target].graded;
      gd.arrows.push_back({a.source, a.target, GradedHom{src, tgt, OrderReflectingMap(tgt.index, src.index, a.phi), a.blocks}});
    }
    out.graded = graded_limit(gd, col.colimit, col.cocone);
    for (std::size_t w = 0; w < out.psod.factors.size(); ++w) out.psod.factors[w].kdata = out.graded->graded.pieces[w];
  }

  out.psod.notes.push_back(out.directed ? "glued index is finite and directed: psod"
                                        : "glued index is not directed: pre-psod only");
  return out;
}

GluingScenario cech_scenario(const PsodIndex& psod, unsigned depth, const std::optional<GradedGroup>& graded) {
  if (depth < 1) throw InputError("cech scenario: depth must be at least 1");
  if (graded && !(graded->index == psod.index)) throw InputError("cech scenario: graded data has a different index");
  GluingScenario sc;
  for (unsigned l = 1; l <= depth; ++l) sc.vertices.push_back({"U" + std::to_string(l), psod, graded});
  std::vector<std::size_t> id(psod.index.size());
  for (std::size_t x = 0; x < id.size(); ++x) id[x] = x;
  for (unsigned l = 1; l < depth; ++l) {
    for (unsigned j = 0; j <= l; ++j) {
      GluingArrow a{"p" + std::to_string(j) + "@" + std::to_string(l), l - 1, l, id, {}};
      if (graded)
        for (std::size_t x = 0; x < id.size(); ++x)
          a.blocks.emplace(std::make_pair(x, x), IntMatrix::identity(graded->pieces[x].generators()));
      sc.arrows.push_back(std::move(a));
    }
  }
  return sc;
}

std::vector<FiltrationStep> filtration(const GradedGroup& graded, const std::vector<std::vector<mpz_class>>& object) {
  const std::size_t n = graded.index.size();
  if (graded.pieces.size() != n) throw InputError("filtration: piece count differs from index size");
  if (object.size() != n) throw InputError("filtration: object has the wrong number of grades");
  for (std::size_t x = 0; x < n; ++x)
    if (object[x].size() != graded.pieces[x].generators())
      throw InputError("filtration: component at " + graded.index.label(x) + " has the wrong length");
  const auto numbering = directed_numbering(graded.index);

  std::vector<FiltrationStep> steps;
  auto residual = object;
  for (auto it = numbering.rbegin(); it != numbering.rend(); ++it) {
    FiltrationStep step;
    step.grade = *it;
    step.component.resize(n);
    for (std::size_t x = 0; x < n; ++x) step.component[x].assign(object[x].size(), 0);
    step.component[*it] = residual[*it];
    for (auto& c : residual[*it]) c = 0;
    step.residual = residual;
    steps.push_back(std::move(step));
  }
  return steps;
}

mpz_class truncated_character_count(unsigned k, unsigned level, unsigned long prime) {
  if (level < 2) throw InputError("truncation level must be at least 2");
  mpz_class m = factorial(level);
  if (prime != 0)
    while (m % prime == 0) m /= prime;
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), mpz_class(m - 1).get_mpz_t(), k);
  return out;
}

KReport ktheory_report(const Stratification& strat, const std::map<std::string, FgAbGroup>& kdata, const KMode& mode) {
  require_valid(strat);
  KReport rep;
  switch (mode.kind) {
    case KMode::Kind::finite:
      if (mode.r == 0) throw InputError("ktheory: r must be at least 1");
      rep.mode = "finite r=" + std::to_string(mode.r);
      rep.notes.push_back("a codimension-j stratum contributes (r-1)^j copies of K of its normalization");
      break;
    case KMode::Kind::infinite:
      rep.mode = "infinite, truncated at level " + std::to_string(mode.level);
      break;
    case KMode::Kind::kummer_etale:
      if (mode.prime < 2 || mpz_probab_prime_p(mpz_class(mode.prime).get_mpz_t(), 25) == 0)
        throw InputError("ktheory: kummer_etale mode needs a prime p");
      rep.mode = "kummer_etale p=" + std::to_string(mode.prime) + ", truncated at level " + std::to_string(mode.level);
      rep.notes.push_back("characters restricted to denominators coprime to " + std::to_string(mode.prime));
      break;
  }

  std::vector<std::size_t> order(strat.strata.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return strat.strata[a].codim < strat.strata[b].codim; });

  std::vector<FgAbGroup> contributions;
  for (auto i : order) {
    const auto& s = strat.strata[i];
    KReportRow row;
    row.stratum_id = s.id;
    row.codim = s.codim;
    std::vector<FgAbGroup> parts;
    for (const auto& c : s.norm_components) {
      const auto it = kdata.find(c);
      if (it == kdata.end()) throw InputError("ktheory: no K-data for normalization component '" + c + "'");
      it->second.check();
      parts.push_back(it->second);
    }
    row.kgroup = direct_sum(parts);
    if (mode.kind == KMode::Kind::finite) {
      mpz_pow_ui(row.multiplicity.get_mpz_t(), mpz_class(mode.r - 1).get_mpz_t(), s.codim);
      row.multiplicity_text = row.multiplicity.get_str();
    } else {
      row.multiplicity = truncated_character_count(s.codim, mode.level,
                                                   mode.kind == KMode::Kind::kummer_etale ? mode.prime : 0);
      row.multiplicity_text = s.codim == 0 ? "1" : "countably infinite (truncated: " + row.multiplicity.get_str() + ")";
    }
    row.contribution = multiple(row.kgroup, row.multiplicity);
    contributions.push_back(row.contribution);
    rep.rows.push_back(std::move(row));
  }
  rep.total = direct_sum(contributions);
  return rep;
}

}  // namespace psodkit
