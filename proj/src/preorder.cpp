#include "psodkit/preorder.hpp"

#include <queue>
#include <set>

#include "psodkit/error.hpp"

namespace psodkit {

FinitePreorder::FinitePreorder(std::vector<std::string> labels, kernels::BitRelation relation)
    : labels_(std::move(labels)), rel_(std::move(relation)) {
  if (rel_.size() != labels_.size())
    throw InputError("preorder: relation size " + std::to_string(rel_.size()) + " does not match " +
                     std::to_string(labels_.size()) + " labels");
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) throw InputError("preorder: duplicate label '" + labels_[i] + "'");
  }
  if (auto x = kernels::find_reflexivity_violation(rel_))
    throw InputError("preorder: not reflexive at '" + labels_[*x] + "'");
  if (auto t = kernels::find_transitivity_violation_omp(rel_))
    throw InputError("preorder: not transitive: " + labels_[t->x] + " <= " + labels_[t->y] + " <= " +
                     labels_[t->z] + " but not " + labels_[t->x] + " <= " + labels_[t->z]);
}

std::optional<std::size_t> FinitePreorder::find(const std::string& label) const {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  return std::nullopt;
}

std::size_t FinitePreorder::index_of(const std::string& label) const {
  if (auto i = find(label)) return *i;
  throw InputError("unknown element '" + label + "'");
}

FinitePreorder FinitePreorder::restrict_to(std::span<const std::size_t> positions) const {
  std::vector<std::string> sub;
  sub.reserve(positions.size());
  for (auto p : positions) sub.push_back(labels_.at(p));
  return from_predicate(std::move(sub),
                        [&](std::size_t i, std::size_t j) { return leq(positions[i], positions[j]); });
}

FinitePreorder complete_preorder(std::vector<std::string> labels) {
  return FinitePreorder::from_predicate(std::move(labels), [](std::size_t, std::size_t) { return true; });
}

FinitePreorder discrete_preorder(std::vector<std::string> labels) {
  return FinitePreorder::from_predicate(std::move(labels), [](std::size_t i, std::size_t j) { return i == j; });
}

FinitePreorder chain_preorder(std::vector<std::string> labels) {
  return FinitePreorder::from_predicate(std::move(labels), [](std::size_t i, std::size_t j) { return i <= j; });
}

bool is_order_reflecting(const FinitePreorder& source, const FinitePreorder& target,
                         std::span<const std::size_t> assignment) {
  if (assignment.size() != source.size()) throw InputError("map is not total on its source");
  for (auto y : assignment)
    if (y >= target.size()) throw InputError("map value out of range");
  for (std::size_t x = 0; x < source.size(); ++x)
    for (std::size_t y = 0; y < source.size(); ++y)
      if (target.leq(assignment[x], assignment[y]) && !source.leq(x, y)) return false;
  return true;
}

namespace {

std::vector<std::size_t> positions_of(const LabelMap& candidate) {
  std::vector<std::size_t> assignment(candidate.source.size());
  std::vector<bool> seen(candidate.source.size(), false);
  for (const auto& [from, to] : candidate.assign) {
    const auto x = candidate.source.find(from);
    if (!x) throw InputError("map refers to unknown source element '" + from + "'");
    const auto y = candidate.target.find(to);
    if (!y) throw InputError("map refers to unknown target element '" + to + "'");
    assignment[*x] = *y;
    seen[*x] = true;
  }
  for (std::size_t x = 0; x < seen.size(); ++x)
    if (!seen[x]) throw InputError("map is not total: no image for '" + candidate.source.label(x) + "'");
  return assignment;
}

}  // namespace

bool is_order_reflecting(const LabelMap& candidate) {
  const auto assignment = positions_of(candidate);
  return is_order_reflecting(candidate.source, candidate.target, assignment);
}

OrderReflectingMap to_map(const LabelMap& candidate) {
  return OrderReflectingMap(candidate.source, candidate.target, positions_of(candidate));
}

OrderReflectingMap::OrderReflectingMap(FinitePreorder source, FinitePreorder target,
                                       std::vector<std::size_t> assignment)
    : source_(std::move(source)), target_(std::move(target)), assignment_(std::move(assignment)) {
  if (!is_order_reflecting(source_, target_, assignment_)) throw PreconditionError("map is not order-reflecting");
}

OrderReflectingMap OrderReflectingMap::identity(const FinitePreorder& p) {
  std::vector<std::size_t> id(p.size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
  return OrderReflectingMap(p, p, std::move(id));
}

std::vector<std::size_t> OrderReflectingMap::fiber(std::size_t y) const {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < assignment_.size(); ++x)
    if (assignment_[x] == y) out.push_back(x);
  return out;
}

OrderReflectingMap compose(const OrderReflectingMap& second, const OrderReflectingMap& first) {
  if (!(first.target() == second.source())) throw PreconditionError("compose: maps are not composable");
  std::vector<std::size_t> a(first.source().size());
  for (std::size_t x = 0; x < a.size(); ++x) a[x] = second(first(x));
  return OrderReflectingMap(first.source(), second.target(), std::move(a));
}

PreorderDiagram::PreorderDiagram(std::vector<DiagramVertex> vertices, std::vector<DiagramArrow> arrows)
    : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
  std::set<std::string> ids;
  for (const auto& v : vertices_)
    if (!ids.insert(v.id).second) throw InputError("diagram: duplicate vertex id '" + v.id + "'");
  for (const auto& a : arrows_) {
    if (a.source >= vertices_.size() || a.target >= vertices_.size())
      throw InputError("diagram: arrow '" + a.id + "' has an unknown endpoint");
    const auto& dom = vertices_[a.domain()].preorder;
    const auto& cod = vertices_[a.codomain()].preorder;
    if (!is_order_reflecting(dom, cod, a.map))
      throw PreconditionError("diagram: arrow '" + a.id + "' is not order-reflecting");
  }
}

std::size_t PreorderDiagram::vertex_index(const std::string& id) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].id == id) return i;
  throw InputError("diagram: unknown vertex '" + id + "'");
}

std::size_t PreorderDiagram::total_size() const noexcept {
  std::size_t n = 0;
  for (const auto& v : vertices_) n += v.preorder.size();
  return n;
}

PreorderDiagram PreorderDiagram::discrete(std::vector<FinitePreorder> parts) {
  std::vector<DiagramVertex> vs;
  for (std::size_t i = 0; i < parts.size(); ++i) vs.push_back({std::to_string(i), std::move(parts[i])});
  return PreorderDiagram(std::move(vs), {});
}

PreorderDiagram PreorderDiagram::span(const OrderReflectingMap& left, const OrderReflectingMap& right) {
  if (!(left.source() == right.source())) throw PreconditionError("span: legs do not share a source");
  std::vector<DiagramVertex> vs{{"1", left.target()}, {"2", right.target()}, {"3", left.source()}};
  std::vector<DiagramArrow> as{{"left", 2, 0, Orientation::covariant, left.assignment()},
                               {"right", 2, 1, Orientation::covariant, right.assignment()}};
  return PreorderDiagram(std::move(vs), std::move(as));
}

std::optional<std::pair<std::size_t, std::size_t>> directedness_witness(const FinitePreorder& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (!p.comparable(i, j)) return std::pair{i, j};
  return std::nullopt;
}

bool is_directed(const FinitePreorder& p) { return !directedness_witness(p).has_value(); }

std::vector<std::size_t> linear_extension(const FinitePreorder& p) {
  const std::size_t n = p.size();
  std::vector<std::size_t> blockers(n, 0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (p.leq(y, x) && !p.leq(x, y)) ++blockers[x];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t x = 0; x < n; ++x)
    if (blockers[x] == 0) ready.push(x);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const auto x = ready.top();
    ready.pop();
    order.push_back(x);
    for (std::size_t z = 0; z < n; ++z)
      if (p.leq(x, z) && !p.leq(z, x) && --blockers[z] == 0) ready.push(z);
  }
  return order;
}

std::vector<std::size_t> directed_numbering(const FinitePreorder& p) {
  if (auto w = directedness_witness(p))
    throw PreconditionError("preorder is not directed: '" + p.label(w->first) + "' and '" + p.label(w->second) +
                            "' are incomparable");
  return linear_extension(p);
}

}  // namespace psodkit
