#pragma once

// Combinatorial model of a normal crossing pair (X, D): strata with
// codimension, closure order and normalization components.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psodkit/preorder.hpp"
#include "psodkit/root_index.hpp"

namespace psodkit {

struct Stratum {
  std::string id;
  unsigned codim = 0;
  std::vector<std::string> norm_components;

  friend bool operator==(const Stratum&, const Stratum&) = default;
};

/// Strata plus generating pairs (S, S') of the closure relation S ⊆ closure(S').
/// Reflexive and transitive consequences are implied.
struct Stratification {
  std::vector<Stratum> strata;
  std::vector<std::pair<std::string, std::string>> closure;

  [[nodiscard]] std::optional<std::size_t> find(const std::string& id) const;
  [[nodiscard]] unsigned max_codim() const noexcept;
  /// Reflexive-transitive closure of the generating pairs over `strata`
  /// positions. Unknown ids are ignored.
  [[nodiscard]] kernels::BitRelation closure_relation() const;
  /// Blocks for the index builders, in stratum order.
  [[nodiscard]] std::vector<StratumBlock> blocks() const;

  friend bool operator==(const Stratification&, const Stratification&) = default;
};

/// All invariant violations, empty when the stratification is valid.
std::vector<std::string> validate(const Stratification& strat);
/// Throws PreconditionError listing the violations.
void require_valid(const Stratification& strat);

/// Strata of codimension exactly k.
std::vector<Stratum> skeleton(const Stratification& strat, unsigned k);
/// Disjoint union of the normalization components of the k-skeleton.
std::vector<std::string> normalized_skeleton(const Stratification& strat, unsigned k);

/// Coarsest preorder containing the closure relation with every codimension
/// layer made complete.
FinitePreorder strata_preorder(const Stratification& strat);

struct Chart {
  std::string id;
  std::vector<std::string> branches;
};

/// Partial bijection from branches of chart `from` to branches of chart `to`.
struct Overlap {
  std::string from;
  std::string to;
  std::vector<std::pair<std::string, std::string>> pairs;
};

struct ChartAtlas {
  std::vector<Chart> charts;
  std::vector<Overlap> overlaps;
};

/// Global strata as orbits of local branch subsets under the overlap
/// identifications. Throws InputError for unknown labels or identifications
/// that are not partial bijections.
Stratification strata_from_atlas(const ChartAtlas& atlas, unsigned depth = 3);

}  // namespace psodkit
