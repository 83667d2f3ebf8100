#include "psodkit/colimit.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "psodkit/error.hpp"

namespace psodkit {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Member {
  std::size_t vertex;
  std::size_t element;
};

// Set-theoretic colimit of the underlying carriers.
struct SetColimit {
  std::vector<std::vector<Member>> classes;  // ordered by first appearance
  Cocone maps;                               // vertex element -> class
};

SetColimit set_colimit(const PreorderDiagram& d) {
  const auto& vs = d.vertices();
  std::vector<std::size_t> offset(vs.size() + 1, 0);
  for (std::size_t i = 0; i < vs.size(); ++i) offset[i + 1] = offset[i] + vs[i].preorder.size();
  UnionFind uf(offset.back());
  for (const auto& a : d.arrows())
    for (std::size_t x = 0; x < a.map.size(); ++x) uf.unite(offset[a.domain()] + x, offset[a.codomain()] + a.map[x]);

  SetColimit out;
  out.maps.resize(vs.size());
  std::map<std::size_t, std::size_t> class_of_root;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    out.maps[i].resize(vs[i].preorder.size());
    for (std::size_t x = 0; x < vs[i].preorder.size(); ++x) {
      const auto root = uf.find(offset[i] + x);
      auto [it, inserted] = class_of_root.emplace(root, out.classes.size());
      if (inserted) out.classes.emplace_back();
      out.classes[it->second].push_back({i, x});
      out.maps[i][x] = it->second;
    }
  }
  return out;
}

std::string join_labels(std::vector<std::string> parts) {
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "=" : "") + parts[i];
  return out;
}

std::vector<std::string> class_labels(const PreorderDiagram& d, const SetColimit& sc) {
  const auto& vs = d.vertices();
  std::vector<std::string> labels;
  labels.reserve(sc.classes.size());
  for (const auto& cls : sc.classes) {
    std::vector<std::string> raw;
    for (const auto& m : cls) raw.push_back(vs[m.vertex].preorder.label(m.element));
    labels.push_back(join_labels(std::move(raw)));
  }
  std::map<std::string, std::size_t> uses;
  for (const auto& l : labels) ++uses[l];
  for (std::size_t c = 0; c < labels.size(); ++c) {
    if (uses[labels[c]] < 2) continue;
    std::vector<std::string> qualified;
    for (const auto& m : sc.classes[c]) qualified.push_back(vs[m.vertex].id + "." + vs[m.vertex].preorder.label(m.element));
    labels[c] = join_labels(std::move(qualified));
  }
  return labels;
}

// forbid[a] has bit b when a <= b in a colimit candidate would break reflection
// of some cocone map.
std::vector<std::uint64_t> forbidden_pairs(const PreorderDiagram& d, const Cocone& s, std::size_t n) {
  std::vector<std::uint64_t> forbid(n, 0);
  const auto& vs = d.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& p = vs[i].preorder;
    for (std::size_t x = 0; x < p.size(); ++x)
      for (std::size_t y = 0; y < p.size(); ++y)
        if (!p.leq(x, y)) forbid[s[i][x]] |= std::uint64_t{1} << s[i][y];
  }
  return forbid;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

// Restricted growth strings of length n with values below m.
void for_each_rgs(std::size_t n, std::size_t m, const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> v(n, 0);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t blocks) -> bool {
    if (pos == n) return visit(v);
    for (std::size_t b = 0; b <= blocks && b < m; ++b) {
      v[pos] = b;
      if (!rec(pos + 1, std::max(blocks, b + 1))) return false;
    }
    return true;
  };
  if (n == 0 || m > 0) rec(0, 0);
}

std::uint64_t rgs_count(std::size_t n, std::size_t m) {
  // Sum of Stirling numbers S(n, j), j <= m.
  std::vector<std::vector<std::uint64_t>> st(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  st[0][0] = 1;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= i; ++j) st[i][j] = saturating_mul(j, st[i - 1][j]) + st[i - 1][j - 1];
  std::uint64_t total = 0;
  for (std::size_t j = 0; j <= std::min(n, m); ++j) total += st[n][j];
  return total;
}

FinitePreorder small_preorder(const kernels::SmallRelation& q) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < q.size(); ++i) labels.push_back("q" + std::to_string(i));
  return FinitePreorder::from_predicate(std::move(labels),
                                        [&](std::size_t i, std::size_t j) { return (q[i] >> j) & 1U; });
}

}  // namespace

ColimitRule colimit_rule(const PreorderDiagram& diagram) {
  const auto sc = set_colimit(diagram);
  ColimitRule out;
  out.labels = class_labels(diagram, sc);
  out.cocone = sc.maps;
  out.relation = kernels::BitRelation(sc.classes.size());
  out.relation.fill(true);
  const auto& vs = diagram.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& p = vs[i].preorder;
    for (std::size_t x = 0; x < p.size(); ++x)
      for (std::size_t y = 0; y < p.size(); ++y)
        if (!p.leq(x, y)) out.relation.set(sc.maps[i][x], sc.maps[i][y], false);
  }
  return out;
}

ColimitResult colimit(const PreorderDiagram& diagram) {
  auto rule = colimit_rule(diagram);
  if (auto z = kernels::find_reflexivity_violation(rule.relation))
    throw NoColimitError("no colimit: the class '" + rule.labels[*z] +
                         "' identifies elements that are not mutually related in one vertex");
  if (auto t = kernels::find_transitivity_violation_omp(rule.relation))
    throw NoColimitError("no colimit: the induced relation is not transitive (" + rule.labels[t->x] + " <= " +
                         rule.labels[t->y] + " <= " + rule.labels[t->z] + " but not " + rule.labels[t->x] +
                         " <= " + rule.labels[t->z] + ")");
  return {FinitePreorder(std::move(rule.labels), std::move(rule.relation)), std::move(rule.cocone)};
}

OrderReflectingMap ColimitResult::cocone_map(const PreorderDiagram& diagram, std::size_t vertex) const {
  return OrderReflectingMap(diagram.vertices().at(vertex).preorder, colimit, cocone.at(vertex));
}

CoproductResult coproduct(std::span<const FinitePreorder> parts) {
  const auto d = PreorderDiagram::discrete({parts.begin(), parts.end()});
  auto c = colimit(d);
  CoproductResult out{c.colimit, {}};
  for (std::size_t i = 0; i < parts.size(); ++i) out.injections.push_back(c.cocone_map(d, i));
  return out;
}

PushoutResult pushout(const OrderReflectingMap& left, const OrderReflectingMap& right) {
  const auto d = PreorderDiagram::span(left, right);
  auto c = colimit(d);
  return {c.colimit, c.cocone_map(d, 0), c.cocone_map(d, 1)};
}

ColimitCertificate verify_colimit(const PreorderDiagram& diagram, const FinitePreorder& candidate,
                                  const Cocone& cocone, const VerifyOptions& options) {
  if (diagram.total_size() > options.max_total)
    throw ResourceError("verify_colimit: diagram has " + std::to_string(diagram.total_size()) +
                        " elements, cap is " + std::to_string(options.max_total));
  const auto& vs = diagram.vertices();
  ColimitCertificate cert;
  if (cocone.size() != vs.size()) {
    cert.reason = "cocone has the wrong number of legs";
    return cert;
  }
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (cocone[i].size() != vs[i].preorder.size()) {
      cert.reason = "cocone leg '" + vs[i].id + "' is not total";
      return cert;
    }
    if (!is_order_reflecting(vs[i].preorder, candidate, cocone[i])) {
      cert.reason = "cocone leg '" + vs[i].id + "' is not order-reflecting";
      return cert;
    }
  }
  for (const auto& a : diagram.arrows())
    for (std::size_t x = 0; x < a.map.size(); ++x)
      if (cocone[a.codomain()][a.map[x]] != cocone[a.domain()][x]) {
        cert.reason = "cocone does not commute over arrow '" + a.id + "'";
        return cert;
      }

  const auto sc = set_colimit(diagram);
  const std::size_t n = sc.classes.size();
  const std::size_t c = candidate.size();
  if (n > 16 || c + 1 > 16) throw ResourceError("verify_colimit: carrier too large for exhaustive search");
  std::vector<std::size_t> k(n);  // set colimit -> candidate
  for (std::size_t z = 0; z < n; ++z) k[z] = cocone[sc.classes[z][0].vertex][sc.classes[z][0].element];
  const auto forbid = forbidden_pairs(diagram, sc.maps, n);

  std::vector<bool> hit(c, false);
  for (auto x : k) hit[x] = true;
  const bool bijective = n == c && std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });

  auto search = [&](std::size_t m, const std::function<bool(const kernels::SmallRelation&)>& fails) {
    return options.parallel ? kernels::find_first_preorder_omp(m, fails)
                            : kernels::find_first_preorder_serial(m, fails);
  };

  if (bijective) {
    if (kernels::preorder_count(n) > options.max_work)
      throw ResourceError("verify_colimit: enumeration exceeds the work cap");
    // Every cocone factors through the set colimit; relabeling the target
    // reduces the search to preorders R on the carrier itself.
    std::vector<std::uint64_t> allowed(n, 0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (candidate.leq(k[a], k[b])) allowed[a] |= std::uint64_t{1} << b;
    auto fails = [&](const kernels::SmallRelation& r) {
      bool escapes = false;
      for (std::size_t a = 0; a < n; ++a) {
        if (r[a] & forbid[a]) return false;
        if (r[a] & ~allowed[a]) escapes = true;
      }
      return escapes;
    };
    cert.targets_checked = kernels::preorder_count(n);
    if (auto q = search(n, fails)) {
      cert.reason = "a cocone has no order-reflecting factorization";
      cert.witness_target = small_preorder(*q);
      cert.witness_cocone = sc.maps;
      return cert;
    }
    cert.ok = true;
    return cert;
  }

  // General case: enumerate targets on up to c + 1 points, cocones as
  // restricted growth strings on the set colimit, and count factorizations.
  std::vector<std::size_t> free_points;
  for (std::size_t x = 0; x < c; ++x)
    if (!hit[x]) free_points.push_back(x);
  std::uint64_t work = 0;
  for (std::size_t m = 0; m <= c + 1; ++m)
    work += saturating_mul(saturating_mul(kernels::preorder_count(m), rgs_count(n, m)),
                           saturating_pow(m, free_points.size()));
  if (work > options.max_work) throw ResourceError("verify_colimit: enumeration exceeds the work cap");

  struct Found {
    std::vector<std::size_t> v;
    std::size_t count;
  };
  auto examine = [&](const kernels::SmallRelation& q) -> std::optional<Found> {
    const std::size_t m = q.size();
    std::optional<Found> found;
    for_each_rgs(n, m, [&](const std::vector<std::size_t>& v) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (((forbid[a] >> b) & 1U) && ((q[v[a]] >> v[b]) & 1U)) return true;  // not a cocone
      std::vector<std::size_t> u(c, m);
      for (std::size_t a = 0; a < n; ++a) {
        if (u[k[a]] != m && u[k[a]] != v[a]) {
          found = Found{v, 0};
          return false;
        }
        u[k[a]] = v[a];
      }
      std::size_t count = 0;
      std::function<void(std::size_t)> assign = [&](std::size_t idx) {
        if (count >= 2) return;
        if (idx == free_points.size()) {
          for (std::size_t x = 0; x < c; ++x)
            for (std::size_t y = 0; y < c; ++y)
              if (((q[u[x]] >> u[y]) & 1U) && !candidate.leq(x, y)) return;
          ++count;
          return;
        }
        for (std::size_t val = 0; val < m; ++val) {
          u[free_points[idx]] = val;
          assign(idx + 1);
        }
      };
      assign(0);
      if (count != 1) {
        found = Found{v, count};
        return false;
      }
      return true;
    });
    return found;
  };

  for (std::size_t m = 0; m <= c + 1; ++m) {
    cert.targets_checked += kernels::preorder_count(m);
    if (auto q = search(m, [&](const kernels::SmallRelation& r) { return examine(r).has_value(); })) {
      const auto f = *examine(*q);
      cert.reason = f.count == 0 ? "a cocone has no order-reflecting factorization"
                                 : "a cocone has more than one order-reflecting factorization";
      cert.factorizations = f.count;
      cert.witness_target = small_preorder(*q);
      cert.witness_cocone = sc.maps;
      for (auto& leg : cert.witness_cocone)
        for (auto& x : leg) x = f.v[x];
      return cert;
    }
  }
  cert.ok = true;
  return cert;
}

std::optional<ColimitResult> search_colimit_on_set_carrier(const PreorderDiagram& diagram,
                                                           const VerifyOptions& options) {
  if (diagram.total_size() > options.max_total)
    throw ResourceError("search_colimit_on_set_carrier: diagram exceeds the carrier cap");
  const auto sc = set_colimit(diagram);
  const std::size_t n = sc.classes.size();
  if (n > 16 || kernels::preorder_count(n) > options.max_work)
    throw ResourceError("search_colimit_on_set_carrier: enumeration exceeds the work cap");
  const auto forbid = forbidden_pairs(diagram, sc.maps, n);

  // A colimit on this carrier must contain every admissible preorder, so it
  // exists iff the union of all admissible preorders is itself a preorder.
  kernels::SmallRelation join(n, 0);
  kernels::for_each_preorder(n, [&](const kernels::SmallRelation& r) {
    for (std::size_t a = 0; a < n; ++a)
      if (r[a] & forbid[a]) return true;
    for (std::size_t a = 0; a < n; ++a) join[a] |= r[a];
    return true;
  });
  kernels::BitRelation rel(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if ((join[a] >> b) & 1U) rel.set(a, b);
  if (kernels::find_reflexivity_violation(rel) || kernels::find_transitivity_violation_serial(rel))
    return std::nullopt;
  return ColimitResult{FinitePreorder(class_labels(diagram, sc), std::move(rel)), sc.maps};
}

}  // namespace psodkit
