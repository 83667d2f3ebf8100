#include "scenarios.hpp"

#include <fstream>
#include <iterator>
#include <bit>
#include <numeric>

#include "psodkit/error.hpp"

#ifndef PSODKIT_FIXTURES
#define PSODKIT_FIXTURES "tests/fixtures"
#endif

namespace scenarios {

using namespace psodkit;

std::string fixture_path(const std::string& name) { return std::string(PSODKIT_FIXTURES) + "/" + name; }

io::Json load_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw ParseError("missing fixture " + name);
  return io::parse_document({std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
}

Stratification coordinate_crossing(unsigned k) {
  Stratification s;
  auto name = [](unsigned mask) {
    if (mask == 0) return std::string("X");
    std::string out;
    for (unsigned b = 0; b < 32; ++b)
      if ((mask >> b) & 1U) out += (out.empty() ? "H" : "&H") + std::to_string(b + 1);
    return out;
  };
  for (unsigned mask = 0; mask < (1U << k); ++mask)
    s.strata.push_back({name(mask), static_cast<unsigned>(std::popcount(mask)), {name(mask)}});
  for (unsigned a = 0; a < (1U << k); ++a)
    for (unsigned b = 0; b < (1U << k); ++b)
      if (a != b && (a & b) == b && std::popcount(a) == std::popcount(b) + 1) s.closure.emplace_back(name(a), name(b));
  return s;
}

FgAbGroup random_group(std::mt19937_64& rng, std::size_t max_generators) {
  static const long orders[] = {2, 3, 4, 6};
  std::uniform_int_distribution<std::size_t> gens(0, max_generators);
  const std::size_t g = gens(rng);
  std::uniform_int_distribution<std::size_t> tors(0, g);
  const std::size_t t = tors(rng);
  std::vector<mpz_class> ds;
  std::uniform_int_distribution<int> pick(0, 3);
  for (std::size_t i = 0; i < t; ++i) ds.emplace_back(orders[pick(rng)]);
  // Normalize to invariant factors; trivial factors would drop generators.
  FgAbGroup out = direct_sum({FgAbGroup{g - t, {}}, FgAbGroup::from_presentation(IntMatrix::diagonal(ds, t, t))});
  return out;
}

FinitePreorder random_preorder(std::mt19937_64& rng, std::size_t n, const std::string& prefix) {
  std::bernoulli_distribution coin(0.35);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  kernels::BitRelation rel(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i == j || coin(rng)) rel.set(i, j);
  return FinitePreorder(std::move(labels), kernels::transitive_closure_serial(std::move(rel)));
}

FinitePreorder random_total_preorder(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> level(0, n == 0 ? 0 : n - 1);
  std::vector<std::size_t> rank(n);
  for (auto& r : rank) r = level(rng);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i));
  return FinitePreorder::from_predicate(std::move(labels), [&](std::size_t i, std::size_t j) { return rank[i] <= rank[j]; });
}

IntMatrix random_hom(std::mt19937_64& rng, const FgAbGroup& source, const FgAbGroup& target) {
  std::uniform_int_distribution<long> coeff(-3, 3);
  auto order = [](const FgAbGroup& g, std::size_t k) { return k < g.torsion.size() ? g.torsion[k] : mpz_class(0); };
  IntMatrix m(target.generators(), source.generators());
  for (std::size_t t = 0; t < m.rows(); ++t) {
    for (std::size_t s = 0; s < m.cols(); ++s) {
      const mpz_class ds = order(source, s);
      const mpz_class dt = order(target, t);
      mpz_class unit = 1;
      if (dt == 0 && ds != 0) {
        unit = 0;
      } else if (dt != 0 && ds != 0) {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), ds.get_mpz_t(), dt.get_mpz_t());
        unit = dt / g;
      }
      m(t, s) = unit * coeff(rng);
    }
  }
  return m;
}

std::optional<GradedScenario> random_graded_scenario(std::mt19937_64& rng) {
  static const char* shapes[] = {"vertex", "arrow", "span", "parallel", "cospan"};
  std::uniform_int_distribution<int> pick_shape(0, 4);
  std::uniform_int_distribution<std::size_t> size(1, 3);
  GradedScenario sc;
  sc.shape = shapes[pick_shape(rng)];
  std::vector<std::pair<std::size_t, std::size_t>> arrows;
  std::size_t vertices = 1;
  if (sc.shape == "arrow") {
    vertices = 2;
    arrows = {{0, 1}};
  } else if (sc.shape == "span") {
    vertices = 3;
    arrows = {{0, 1}, {0, 2}};
  } else if (sc.shape == "parallel") {
    vertices = 2;
    arrows = {{0, 1}, {0, 1}};
  } else if (sc.shape == "cospan") {
    vertices = 3;
    arrows = {{1, 0}, {2, 0}};
  }
  for (std::size_t v = 0; v < vertices; ++v) {
    GradedGroup g;
    g.index = random_preorder(rng, size(rng), "v" + std::to_string(v) + "_");
    for (std::size_t x = 0; x < g.index.size(); ++x) g.pieces.push_back(random_group(rng));
    sc.diagram.vertices.push_back(std::move(g));
  }
  for (const auto& [s, t] : arrows) {
    const auto& src = sc.diagram.vertices[s];
    const auto& tgt = sc.diagram.vertices[t];
    std::uniform_int_distribution<std::size_t> target_of(0, src.index.size() - 1);
    std::vector<std::size_t> phi(tgt.index.size());
    for (auto& y : phi) y = target_of(rng);
    if (!is_order_reflecting(tgt.index, src.index, phi)) return std::nullopt;
    GradedHom hom{src, tgt, OrderReflectingMap(tgt.index, src.index, phi), {}};
    for (std::size_t y = 0; y < phi.size(); ++y)
      hom.blocks.emplace(std::make_pair(phi[y], y), random_hom(rng, src.pieces[phi[y]], tgt.pieces[y]));
    sc.diagram.arrows.push_back({s, t, std::move(hom)});
  }
  try {
    sc.colimit = colimit(sc.diagram.index_diagram());
  } catch (const NoColimitError&) {
    return std::nullopt;
  }
  return sc;
}

}  // namespace scenarios
