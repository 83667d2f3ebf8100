#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "psodkit/kernels.hpp"

namespace psodkit {

/// A finite set of distinct labels with a reflexive, transitive relation.
///
/// Elements are addressed by position; `leq(i, j)` means element i <= element j.
/// Instances are immutable and always satisfy the preorder axioms.
class FinitePreorder {
 public:
  FinitePreorder() = default;

  /// Validates the relation; throws InputError on duplicate labels, a size
  /// mismatch, or a relation that is not reflexive and transitive.
  FinitePreorder(std::vector<std::string> labels, kernels::BitRelation relation);

  /// Builds the preorder from a predicate on positions.
  template <class Leq>
  static FinitePreorder from_predicate(std::vector<std::string> labels, Leq&& leq) {
    kernels::BitRelation rel(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = 0; j < labels.size(); ++j)
        if (leq(i, j)) rel.set(i, j);
    return FinitePreorder(std::move(labels), std::move(rel));
  }

  [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
  [[nodiscard]] bool empty() const noexcept { return labels_.empty(); }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
  [[nodiscard]] const std::string& label(std::size_t i) const { return labels_.at(i); }
  [[nodiscard]] std::optional<std::size_t> find(const std::string& label) const;
  /// Throws InputError for an unknown label.
  [[nodiscard]] std::size_t index_of(const std::string& label) const;

  [[nodiscard]] bool leq(std::size_t i, std::size_t j) const noexcept { return rel_.test(i, j); }
  /// Strict relation in the psod sense: i <= j and i != j.
  [[nodiscard]] bool lt(std::size_t i, std::size_t j) const noexcept { return i != j && rel_.test(i, j); }
  [[nodiscard]] bool comparable(std::size_t i, std::size_t j) const noexcept {
    return rel_.test(i, j) || rel_.test(j, i);
  }
  [[nodiscard]] const kernels::BitRelation& relation() const noexcept { return rel_; }

  /// Restriction to the given positions, in the given order.
  [[nodiscard]] FinitePreorder restrict_to(std::span<const std::size_t> positions) const;

  friend bool operator==(const FinitePreorder&, const FinitePreorder&) = default;

 private:
  std::vector<std::string> labels_;
  kernels::BitRelation rel_;
  std::unordered_map<std::string, std::size_t> index_;
};

FinitePreorder complete_preorder(std::vector<std::string> labels);
FinitePreorder discrete_preorder(std::vector<std::string> labels);
/// Chain labels[0] < labels[1] < ... .
FinitePreorder chain_preorder(std::vector<std::string> labels);

/// A total function between carriers satisfying f(x) <= f(y) => x <= y.
class OrderReflectingMap {
 public:
  OrderReflectingMap() = default;
  /// Throws PreconditionError if the assignment is not order-reflecting and
  /// InputError if it is out of range.
  OrderReflectingMap(FinitePreorder source, FinitePreorder target, std::vector<std::size_t> assignment);

  static OrderReflectingMap identity(const FinitePreorder& p);

  [[nodiscard]] const FinitePreorder& source() const noexcept { return source_; }
  [[nodiscard]] const FinitePreorder& target() const noexcept { return target_; }
  [[nodiscard]] std::size_t operator()(std::size_t x) const { return assignment_.at(x); }
  [[nodiscard]] const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }
  /// Positions of the source mapping to target position y.
  [[nodiscard]] std::vector<std::size_t> fiber(std::size_t y) const;

  friend bool operator==(const OrderReflectingMap&, const OrderReflectingMap&) = default;

 private:
  FinitePreorder source_;
  FinitePreorder target_;
  std::vector<std::size_t> assignment_;
};

/// Candidate map given by labels, possibly partial or not reflecting.
struct LabelMap {
  FinitePreorder source;
  FinitePreorder target;
  std::map<std::string, std::string> assign;
};

/// True iff the reflection law holds. Throws InputError if the map is not
/// total or refers to unknown labels.
bool is_order_reflecting(const LabelMap& candidate);
bool is_order_reflecting(const FinitePreorder& source, const FinitePreorder& target,
                         std::span<const std::size_t> assignment);

OrderReflectingMap to_map(const LabelMap& candidate);
OrderReflectingMap compose(const OrderReflectingMap& second, const OrderReflectingMap& first);

/// Whether an arrow's map runs along the quiver arrow or against it.
enum class Orientation { covariant, contravariant };

struct DiagramVertex {
  std::string id;
  FinitePreorder preorder;
};

struct DiagramArrow {
  std::string id;
  std::size_t source = 0;  // quiver endpoints (vertex positions)
  std::size_t target = 0;
  Orientation orientation = Orientation::covariant;
  std::vector<std::size_t> map;  // domain carrier -> codomain carrier

  [[nodiscard]] std::size_t domain() const noexcept {
    return orientation == Orientation::covariant ? source : target;
  }
  [[nodiscard]] std::size_t codomain() const noexcept {
    return orientation == Orientation::covariant ? target : source;
  }
};

/// Finite quiver of preorders with order-reflecting maps on the arrows.
class PreorderDiagram {
 public:
  PreorderDiagram() = default;
  /// Validates arrow endpoints and that every arrow map is total and
  /// order-reflecting between the recorded endpoints.
  PreorderDiagram(std::vector<DiagramVertex> vertices, std::vector<DiagramArrow> arrows);

  [[nodiscard]] const std::vector<DiagramVertex>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] const std::vector<DiagramArrow>& arrows() const noexcept { return arrows_; }
  [[nodiscard]] std::size_t vertex_index(const std::string& id) const;
  [[nodiscard]] std::size_t total_size() const noexcept;

  /// Discrete diagram on the given parts, vertex ids "0", "1", ...
  static PreorderDiagram discrete(std::vector<FinitePreorder> parts);
  /// Span P1 <- P3 -> P2 with covariant arrows out of the apex (vertex "3").
  static PreorderDiagram span(const OrderReflectingMap& left, const OrderReflectingMap& right);

 private:
  std::vector<DiagramVertex> vertices_;
  std::vector<DiagramArrow> arrows_;
};

/// Totality test; equivalent to admitting an order-reflecting map to (N, <=).
bool is_directed(const FinitePreorder& p);
/// An incomparable pair if p is not directed.
std::optional<std::pair<std::size_t, std::size_t>> directedness_witness(const FinitePreorder& p);
/// Enumeration p_0, ..., p_m with n < n' => p_n <= p_n'; ties keep label order.
/// Throws PreconditionError if p is not directed.
std::vector<std::size_t> directed_numbering(const FinitePreorder& p);
/// A linear extension of any preorder (stable topological order of classes).
std::vector<std::size_t> linear_extension(const FinitePreorder& p);

}  // namespace psodkit
