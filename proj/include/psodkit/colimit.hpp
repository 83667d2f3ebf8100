#pragma once

// Colimits in the category of preorders and order-reflecting maps, plus an
// exhaustive universal-property checker.
//
// The carrier of every constructed colimit is the set-theoretic colimit; the
// order is z <= z' iff every pair of preimages in every vertex is related.
// When that relation fails to be a preorder no colimit exists and the
// constructors throw NoColimitError.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psodkit/caps.hpp"
#include "psodkit/preorder.hpp"

namespace psodkit {

/// cocone[i][x] = position of element x of vertex i in the colimit carrier.
using Cocone = std::vector<std::vector<std::size_t>>;

/// Set colimit with the candidate relation, before any validation.
struct ColimitRule {
  std::vector<std::string> labels;
  kernels::BitRelation relation;
  Cocone cocone;
};

ColimitRule colimit_rule(const PreorderDiagram& diagram);

struct ColimitResult {
  FinitePreorder colimit;
  Cocone cocone;
  [[nodiscard]] OrderReflectingMap cocone_map(const PreorderDiagram& diagram, std::size_t vertex) const;
};

ColimitResult colimit(const PreorderDiagram& diagram);

struct CoproductResult {
  FinitePreorder coproduct;
  std::vector<OrderReflectingMap> injections;
};

CoproductResult coproduct(std::span<const FinitePreorder> parts);

struct PushoutResult {
  FinitePreorder pushout;
  OrderReflectingMap first;   // P1 -> P
  OrderReflectingMap second;  // P2 -> P
};

/// Pushout of P1 <- P3 -> P2; both legs must share their source.
PushoutResult pushout(const OrderReflectingMap& left, const OrderReflectingMap& right);

struct VerifyOptions {
  std::size_t max_total = 12;
  std::size_t max_work = 50000000;
  bool parallel = true;
};

/// Outcome of verify_colimit. On failure `witness_target` and
/// `witness_cocone` describe a cocone without a unique order-reflecting
/// factorization (absent when the candidate cocone itself is broken).
struct ColimitCertificate {
  bool ok = false;
  std::string reason;
  std::optional<FinitePreorder> witness_target;
  Cocone witness_cocone;
  std::size_t factorizations = 0;  // reflecting factorizations of the witness (0 or >= 2)
  std::size_t targets_checked = 0;
};

/// Exhaustive check of the colimit universal property against every preorder Q
/// with |Q| <= |candidate| + 1. Throws ResourceError when the diagram exceeds
/// `max_total` elements or the enumeration would exceed `max_work`.
ColimitCertificate verify_colimit(const PreorderDiagram& diagram, const FinitePreorder& candidate,
                                  const Cocone& cocone, const VerifyOptions& options = {});

/// Searches every preorder on the set-colimit carrier for a colimit. Returns
/// it when one exists; nullopt certifies that no order on that carrier works.
std::optional<ColimitResult> search_colimit_on_set_carrier(const PreorderDiagram& diagram,
                                                           const VerifyOptions& options = {});

}  // namespace psodkit
