#include "psodkit/stratification.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>

#include "psodkit/error.hpp"

namespace psodkit {

std::optional<std::size_t> Stratification::find(const std::string& id) const {
  for (std::size_t i = 0; i < strata.size(); ++i)
    if (strata[i].id == id) return i;
  return std::nullopt;
}

unsigned Stratification::max_codim() const noexcept {
  unsigned m = 0;
  for (const auto& s : strata) m = std::max(m, s.codim);
  return m;
}

kernels::BitRelation Stratification::closure_relation() const {
  kernels::BitRelation rel(strata.size());
  for (std::size_t i = 0; i < strata.size(); ++i) rel.set(i, i);
  for (const auto& [a, b] : closure) {
    const auto i = find(a);
    const auto j = find(b);
    if (i && j) rel.set(*i, *j);
  }
  return kernels::transitive_closure_serial(std::move(rel));
}

std::vector<StratumBlock> Stratification::blocks() const {
  std::vector<StratumBlock> out;
  for (const auto& s : strata) out.push_back({s.id, s.codim});
  return out;
}

std::vector<std::string> validate(const Stratification& strat) {
  std::vector<std::string> issues;
  std::set<std::string> seen;
  std::size_t ambient = 0;
  for (const auto& s : strat.strata) {
    if (!seen.insert(s.id).second) issues.push_back("duplicate stratum id '" + s.id + "'");
    if (s.norm_components.empty()) issues.push_back("stratum '" + s.id + "' has no normalization components");
    if (s.codim == 0) ++ambient;
  }
  if (ambient != 1) issues.push_back("expected exactly one codimension-0 stratum, found " + std::to_string(ambient));
  for (const auto& [a, b] : strat.closure) {
    if (!strat.find(a)) issues.push_back("closure refers to unknown stratum '" + a + "'");
    if (!strat.find(b)) issues.push_back("closure refers to unknown stratum '" + b + "'");
  }
  const auto rel = strat.closure_relation();
  const std::size_t n = strat.strata.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !rel.test(i, j)) continue;
      const auto& s = strat.strata[i];
      const auto& t = strat.strata[j];
      if (rel.test(j, i) && i < j) issues.push_back("closure is not antisymmetric on '" + s.id + "', '" + t.id + "'");
      if (s.codim <= t.codim)
        issues.push_back("closure '" + s.id + "' below '" + t.id + "' does not increase codimension");
    }
  }
  if (ambient == 1) {
    std::size_t top = 0;
    while (strat.strata[top].codim != 0) ++top;
    for (std::size_t i = 0; i < n; ++i)
      if (!rel.test(i, top))
        issues.push_back("stratum '" + strat.strata[i].id + "' is not below the ambient stratum");
  }
  return issues;
}

void require_valid(const Stratification& strat) {
  const auto issues = validate(strat);
  if (issues.empty()) return;
  std::string msg = "invalid stratification:";
  for (const auto& i : issues) msg += "\n  " + i;
  throw PreconditionError(msg);
}

std::vector<Stratum> skeleton(const Stratification& strat, unsigned k) {
  std::vector<Stratum> out;
  for (const auto& s : strat.strata)
    if (s.codim == k) out.push_back(s);
  return out;
}

std::vector<std::string> normalized_skeleton(const Stratification& strat, unsigned k) {
  std::vector<std::string> out;
  for (const auto& s : skeleton(strat, k)) out.insert(out.end(), s.norm_components.begin(), s.norm_components.end());
  return out;
}

FinitePreorder strata_preorder(const Stratification& strat) {
  require_valid(strat);
  auto rel = strat.closure_relation();
  const std::size_t n = strat.strata.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (strat.strata[i].codim == strat.strata[j].codim) rel.set(i, j);
  std::vector<std::string> labels;
  for (const auto& s : strat.strata) labels.push_back(s.id);
  return FinitePreorder(std::move(labels), kernels::transitive_closure_serial(std::move(rel)));
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// A local stratum: a nonempty set of branches of one chart.
struct LocalStratum {
  std::size_t chart;
  std::vector<std::size_t> branches;  // sorted positions in the chart
};

}  // namespace

Stratification strata_from_atlas(const ChartAtlas& atlas, unsigned depth) {
  if (depth < 1) throw InputError("atlas: depth must be at least 1");
  std::map<std::string, std::size_t> chart_pos;
  std::vector<std::map<std::string, std::size_t>> branch_pos(atlas.charts.size());
  for (std::size_t c = 0; c < atlas.charts.size(); ++c) {
    const auto& chart = atlas.charts[c];
    if (!chart_pos.emplace(chart.id, c).second) throw InputError("atlas: duplicate chart '" + chart.id + "'");
    if (chart.branches.size() > 16) throw ResourceError("atlas: chart '" + chart.id + "' has more than 16 branches");
    for (std::size_t b = 0; b < chart.branches.size(); ++b)
      if (!branch_pos[c].emplace(chart.branches[b], b).second)
        throw InputError("atlas: duplicate branch '" + chart.branches[b] + "' in chart '" + chart.id + "'");
  }

  // Resolved overlaps as maps between branch positions.
  struct Resolved {
    std::size_t from;
    std::size_t to;
    std::map<std::size_t, std::size_t> forward;
  };
  std::vector<Resolved> overlaps;
  for (const auto& ov : atlas.overlaps) {
    const auto f = chart_pos.find(ov.from);
    const auto t = chart_pos.find(ov.to);
    if (f == chart_pos.end() || t == chart_pos.end())
      throw InputError("atlas: overlap refers to unknown chart '" + (f == chart_pos.end() ? ov.from : ov.to) + "'");
    Resolved r{f->second, t->second, {}};
    std::set<std::size_t> images;
    for (const auto& [a, b] : ov.pairs) {
      const auto ia = branch_pos[r.from].find(a);
      const auto ib = branch_pos[r.to].find(b);
      if (ia == branch_pos[r.from].end() || ib == branch_pos[r.to].end())
        throw InputError("atlas: overlap " + ov.from + "->" + ov.to + " refers to an unknown branch");
      if (!r.forward.emplace(ia->second, ib->second).second || !images.insert(ib->second).second)
        throw InputError("atlas: overlap " + ov.from + "->" + ov.to + " is not a partial bijection");
    }
    if (depth >= 2) overlaps.push_back(std::move(r));
  }

  std::vector<LocalStratum> locals;
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> local_pos;
  for (std::size_t c = 0; c < atlas.charts.size(); ++c) {
    const std::size_t nb = atlas.charts[c].branches.size();
    std::vector<std::uint32_t> masks(std::size_t{1} << nb);
    std::iota(masks.begin(), masks.end(), 0U);
    std::stable_sort(masks.begin(), masks.end(),
                     [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
    for (auto m : masks) {
      if (m == 0) continue;
      LocalStratum ls{c, {}};
      for (std::size_t b = 0; b < nb; ++b)
        if ((m >> b) & 1U) ls.branches.push_back(b);
      local_pos.emplace(std::make_pair(c, ls.branches), locals.size());
      locals.push_back(std::move(ls));
    }
  }

  UnionFind uf(locals.size());
  for (std::size_t i = 0; i < locals.size(); ++i) {
    for (const auto& ov : overlaps) {
      if (ov.from != locals[i].chart) continue;
      std::vector<std::size_t> image;
      bool covered = true;
      for (auto b : locals[i].branches) {
        const auto it = ov.forward.find(b);
        if (it == ov.forward.end()) {
          covered = false;
          break;
        }
        image.push_back(it->second);
      }
      if (!covered) continue;
      std::sort(image.begin(), image.end());
      uf.unite(i, local_pos.at({ov.to, image}));
    }
  }

  // Global strata in order of first local representative.
  std::map<std::size_t, std::size_t> class_index;
  std::vector<std::size_t> rep;
  for (std::size_t i = 0; i < locals.size(); ++i)
    if (class_index.emplace(uf.find(i), rep.size()).second) rep.push_back(i);

  auto base_name = [&](const LocalStratum& ls) {
    std::string name;
    for (auto b : ls.branches) name += (name.empty() ? "" : "&") + atlas.charts[ls.chart].branches[b];
    return name;
  };
  std::vector<std::string> names;
  std::map<std::string, std::size_t> name_count;
  for (auto r : rep) ++name_count[base_name(locals[r])];
  name_count["X"] += 1;
  for (auto r : rep) {
    auto name = base_name(locals[r]);
    if (name_count[name] > 1) name = atlas.charts[locals[r].chart].id + ":" + name;
    names.push_back(name);
  }

  Stratification strat;
  strat.strata.push_back({"X", 0, {"X"}});
  for (std::size_t g = 0; g < rep.size(); ++g)
    strat.strata.push_back({names[g], static_cast<unsigned>(locals[rep[g]].branches.size()), {names[g] + "~"}});

  std::set<std::pair<std::size_t, std::size_t>> below;
  for (std::size_t i = 0; i < locals.size(); ++i) {
    const auto gi = class_index.at(uf.find(i));
    below.emplace(gi, rep.size());
    for (std::size_t j = 0; j < locals.size(); ++j) {
      if (i == j || locals[i].chart != locals[j].chart) continue;
      const auto& big = locals[i].branches;
      const auto& small = locals[j].branches;
      if (small.size() < big.size() && std::includes(big.begin(), big.end(), small.begin(), small.end()))
        below.emplace(gi, class_index.at(uf.find(j)));
    }
  }
  for (const auto& [a, b] : below) {
    const auto& lhs = strat.strata[a + 1].id;
    const auto& rhs = b == rep.size() ? strat.strata[0].id : strat.strata[b + 1].id;
    strat.closure.emplace_back(lhs, rhs);
  }
  return strat;
}

}  // namespace psodkit
