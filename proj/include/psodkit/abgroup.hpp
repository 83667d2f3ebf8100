#pragma once

// Finitely generated abelian groups, finite limits of group diagrams, and
// preorder-graded groups with fiber-supported homomorphisms.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "psodkit/intmatrix.hpp"
#include "psodkit/preorder.hpp"

namespace psodkit {

/// Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_s with d_1 | ... | d_s and d_i >= 2.
struct FgAbGroup {
  std::size_t rank = 0;
  std::vector<mpz_class> torsion;

  /// Throws InputError if the torsion list is not a divisibility chain of
  /// integers >= 2.
  void check() const;
  [[nodiscard]] bool is_zero() const noexcept { return rank == 0 && torsion.empty(); }
  /// Canonical generators: torsion generators first, then free ones.
  [[nodiscard]] std::size_t generators() const noexcept { return torsion.size() + rank; }
  [[nodiscard]] std::string to_string() const;

  static FgAbGroup free(std::size_t rank) { return {rank, {}}; }
  /// Z^g / image(relations), relations given as columns.
  static FgAbGroup from_presentation(const IntMatrix& relations);

  friend bool operator==(const FgAbGroup&, const FgAbGroup&) = default;
};

FgAbGroup direct_sum(const std::vector<FgAbGroup>& parts);
/// n copies of g.
FgAbGroup multiple(const FgAbGroup& g, const mpz_class& n);

/// Z^generators / image(relations); relations has `generators` rows.
struct GroupPresentation {
  std::size_t generators = 0;
  IntMatrix relations;

  static GroupPresentation of(const FgAbGroup& g);
  /// Whether v (a column of length `generators`) lies in image(relations).
  [[nodiscard]] bool contains(const IntMatrix& v) const;
};

/// True iff the matrix (target.generators x source.generators) induces a
/// homomorphism between the presented groups.
bool is_well_defined(const IntMatrix& map, const GroupPresentation& source, const GroupPresentation& target);

struct GroupArrow {
  std::size_t source = 0;
  std::size_t target = 0;
  IntMatrix map;  // target.generators x source.generators
};

struct GroupDiagram {
  std::vector<GroupPresentation> vertices;
  std::vector<GroupArrow> arrows;
};

struct LimitResult {
  FgAbGroup group;
  /// Per vertex: matrix from the canonical generators of `group` to the
  /// vertex generators.
  std::vector<IntMatrix> projections;
};

/// Tuples (x_i) in the product of the vertex groups with f_a(x_src) = x_tgt
/// for every arrow. Throws PreconditionError for ill-defined arrow maps.
LimitResult limit_of_groups(const GroupDiagram& diagram);

struct GradedGroup {
  FinitePreorder index;
  std::vector<FgAbGroup> pieces;  // one per index position

  [[nodiscard]] FgAbGroup total() const { return direct_sum(pieces); }
  [[nodiscard]] GroupPresentation presentation() const;
  /// Offset of each piece's generators in the total presentation.
  [[nodiscard]] std::vector<std::size_t> offsets() const;
};

/// Fiber-supported map of graded groups. `reindex` runs from target.index to
/// source.index; the block (x, y) maps piece x of the source to piece y of
/// the target and may be nonzero only when reindex(y) = x.
struct GradedHom {
  GradedGroup source;
  GradedGroup target;
  OrderReflectingMap reindex;
  std::map<std::pair<std::size_t, std::size_t>, IntMatrix> blocks;

  /// Throws PreconditionError on support violations, size mismatches or
  /// ill-defined blocks.
  void check() const;
  /// The map on total groups.
  [[nodiscard]] IntMatrix total_matrix() const;
};

struct GradedArrow {
  std::size_t source = 0;
  std::size_t target = 0;
  GradedHom hom;
};

struct GradedDiagram {
  std::vector<GradedGroup> vertices;
  std::vector<GradedArrow> arrows;

  /// Index diagram: vertex preorders with the reindex maps (contravariant).
  [[nodiscard]] PreorderDiagram index_diagram() const;
};

struct GradedLimitResult {
  GradedGroup graded;
  FgAbGroup ungraded;
  /// Invariant factors of the ungraded limit equal those of the direct sum of
  /// the graded pieces.
  bool comparison_iso = false;
};

/// Piece at w is the limit of the fiber-restricted diagram; `cocone[i]` maps
/// vertex i's index into `colimit_index`. Throws PreconditionError if the
/// index or cocone differs from the computed colimit.
GradedLimitResult graded_limit(const GradedDiagram& diagram, const FinitePreorder& colimit_index,
                               const std::vector<std::vector<std::size_t>>& cocone);

}  // namespace psodkit
