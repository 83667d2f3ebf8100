#pragma once

// psod index structures: root-stack builders, gluing over diagrams, the
// projection filtration and K-theory decomposition reports.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psodkit/abgroup.hpp"
#include "psodkit/caps.hpp"
#include "psodkit/colimit.hpp"
#include "psodkit/preorder.hpp"
#include "psodkit/root_index.hpp"
#include "psodkit/stratification.hpp"

namespace psodkit {

struct FactorDescriptor {
  std::string stratum_id;
  CharTuple character;
  std::string target_label;  // e.g. "Perf(D~)"
  std::optional<FgAbGroup> kdata;

  friend bool operator==(const FactorDescriptor&, const FactorDescriptor&) = default;
};

struct PsodIndex {
  FinitePreorder index;
  std::vector<FactorDescriptor> factors;  // one per index position
  std::vector<std::string> notes;

  /// directed_numbering when the index is directed, else a linear extension.
  [[nodiscard]] std::vector<std::size_t> order() const;
  /// Coarse view: index positions grouped by stratum, in order of appearance.
  [[nodiscard]] std::vector<std::pair<std::string, std::vector<std::size_t>>> by_stratum() const;
};

/// "Perf(a ⊔ b)" for the given normalization components.
std::string perf_label(const std::vector<std::string>& components);

/// Factors indexed by Z_{S(D),r}: (r-1)^codim characters per stratum.
PsodIndex build_root_psod(const Stratification& strat, unsigned long r, bool totalize = false, const Caps& caps = {});

/// Truncation at factorial level n of the index ordered by <=!. A nonzero
/// `exclude_prime` keeps only characters with denominators coprime to it.
PsodIndex build_infinite_psod(const Stratification& strat, unsigned max_level, bool totalize = false,
                              const Caps& caps = {}, unsigned long exclude_prime = 0);

struct GluingVertex {
  std::string id;
  PsodIndex psod;
  std::optional<GradedGroup> graded;
};

/// Ordered functor from vertex `source` to vertex `target`; `phi` maps the
/// target index to the source index. `blocks` are used with graded data.
struct GluingArrow {
  std::string id;
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<std::size_t> phi;
  std::map<std::pair<std::size_t, std::size_t>, IntMatrix> blocks;
};

struct GluingScenario {
  std::vector<GluingVertex> vertices;
  std::vector<GluingArrow> arrows;

  [[nodiscard]] PreorderDiagram index_diagram() const;
};

struct GluingResult {
  PsodIndex psod;
  Cocone cocone;
  bool directed = false;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // incomparable pair
  std::optional<GradedLimitResult> graded;

  [[nodiscard]] std::string verdict() const { return directed ? "ok" : "violated"; }
  [[nodiscard]] std::string label() const { return directed ? "psod" : "pre-psod only"; }
};

/// Throws PreconditionError for non-reflecting arrows or a missing colimit.
GluingResult glue(const GluingScenario& scenario);

/// Constant index over nerve levels 1..depth with identity reindex maps and
/// l+1 face maps from level l to level l+1.
GluingScenario cech_scenario(const PsodIndex& psod, unsigned depth, const std::optional<GradedGroup>& graded = {});

struct FiltrationStep {
  std::size_t grade = 0;
  std::vector<std::vector<mpz_class>> component;  // supported in `grade` only
  std::vector<std::vector<mpz_class>> residual;
};

/// Peels off graded components from the last element of the numbering to the
/// first. `object[x]` lists the coordinates of the piece at x.
std::vector<FiltrationStep> filtration(const GradedGroup& graded, const std::vector<std::vector<mpz_class>>& object);

struct KMode {
  enum class Kind { finite, infinite, kummer_etale };
  Kind kind = Kind::finite;
  unsigned long r = 2;       // finite
  unsigned level = 2;        // infinite / kummer_etale truncation
  unsigned long prime = 0;   // kummer_etale
};

struct KReportRow {
  std::string stratum_id;
  unsigned codim = 0;
  mpz_class multiplicity;     // exact (truncated) count of characters
  std::string multiplicity_text;
  FgAbGroup kgroup;           // K of the normalization
  FgAbGroup contribution;
};

struct KReport {
  std::string mode;
  std::vector<KReportRow> rows;
  FgAbGroup total;
  std::vector<std::string> notes;
};

/// Number of k-tuples of nonzero characters of level <= n whose denominators
/// are coprime to `prime` (0 keeps all): (m-1)^k with m the prime-free part of n!.
mpz_class truncated_character_count(unsigned k, unsigned level, unsigned long prime = 0);

/// Throws InputError when a normalization component has no K-data.
KReport ktheory_report(const Stratification& strat, const std::map<std::string, FgAbGroup>& kdata, const KMode& mode);

}  // namespace psodkit
