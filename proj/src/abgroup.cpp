#include "psodkit/abgroup.hpp"

#include <algorithm>
#include <cstdint>

#include "psodkit/colimit.hpp"
#include "psodkit/error.hpp"

namespace psodkit {

namespace {

constexpr std::size_t kMaxTorsionEntries = 1000000;

std::vector<mpz_class> invariant_factors(const std::vector<mpz_class>& orders) {
  if (orders.empty()) return {};
  const auto res = snf(IntMatrix::diagonal(orders, orders.size(), orders.size()));
  std::vector<mpz_class> out;
  for (const auto& d : res.diagonal())
    if (d > 1) out.push_back(d);
  return out;
}

}  // namespace

void FgAbGroup::check() const {
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    if (torsion[i] < 2) throw InputError("torsion coefficients must be at least 2");
    if (i > 0 && torsion[i] % torsion[i - 1] != 0) throw InputError("torsion coefficients must form a divisibility chain");
  }
}

std::string FgAbGroup::to_string() const {
  std::string out;
  if (rank > 0) out = rank == 1 ? "Z" : "Z^" + std::to_string(rank);
  for (const auto& d : torsion) out += (out.empty() ? "" : " + ") + ("Z/" + d.get_str());
  return out.empty() ? "0" : out;
}

FgAbGroup FgAbGroup::from_presentation(const IntMatrix& relations) {
  const auto res = snf(relations);
  FgAbGroup g;
  g.rank = relations.rows() - res.rank;
  for (const auto& d : res.diagonal())
    if (d > 1) g.torsion.push_back(d);
  return g;
}

FgAbGroup direct_sum(const std::vector<FgAbGroup>& parts) {
  FgAbGroup out;
  std::vector<mpz_class> orders;
  for (const auto& p : parts) {
    out.rank += p.rank;
    orders.insert(orders.end(), p.torsion.begin(), p.torsion.end());
  }
  out.torsion = invariant_factors(orders);
  return out;
}

FgAbGroup multiple(const FgAbGroup& g, const mpz_class& n) {
  if (n < 0) throw InputError("multiplicity must be nonnegative");
  if (!n.fits_ulong_p() || (g.rank > 0 && n.get_ui() > SIZE_MAX / g.rank) ||
      (!g.torsion.empty() && n.get_ui() * g.torsion.size() > kMaxTorsionEntries))
    throw ResourceError("multiplicity " + n.get_str() + " is too large to materialize");
  const std::size_t k = n.get_ui();
  FgAbGroup out{g.rank * k, {}};
  for (const auto& d : g.torsion) out.torsion.insert(out.torsion.end(), k, d);
  return out;
}

GroupPresentation GroupPresentation::of(const FgAbGroup& g) {
  GroupPresentation p{g.generators(), IntMatrix::diagonal(g.torsion, g.generators(), g.torsion.size())};
  return p;
}

bool GroupPresentation::contains(const IntMatrix& v) const {
  if (v.rows() != generators || v.cols() != 1) throw InputError("presentation membership: vector has wrong shape");
  if (relations.cols() == 0) return v.is_zero();
  const auto res = snf(relations);
  const IntMatrix w = res.u * v;
  for (std::size_t i = 0; i < generators; ++i) {
    if (i < res.rank) {
      if (w(i, 0) % res.s(i, i) != 0) return false;
    } else if (w(i, 0) != 0) {
      return false;
    }
  }
  return true;
}

bool is_well_defined(const IntMatrix& map, const GroupPresentation& source, const GroupPresentation& target) {
  if (map.rows() != target.generators || map.cols() != source.generators) return false;
  const IntMatrix images = map * source.relations;
  for (std::size_t j = 0; j < images.cols(); ++j)
    if (!target.contains(images.block(0, images.rows(), j, j + 1))) return false;
  return true;
}

namespace {

// Columns of `gens` span a sublattice; returns a basis of it (as columns).
IntMatrix lattice_basis(const IntMatrix& gens) {
  const auto h = hnf(gens.transpose());
  return h.h.block(0, h.rank, 0, gens.rows()).transpose();
}

}  // namespace

LimitResult limit_of_groups(const GroupDiagram& diagram) {
  const auto& vs = diagram.vertices;
  std::vector<std::size_t> offset(vs.size() + 1, 0);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].relations.rows() != vs[i].generators)
      throw InputError("group presentation: relation matrix has the wrong number of rows");
    offset[i + 1] = offset[i] + vs[i].generators;
  }
  const std::size_t g = offset.back();

  std::size_t eq_rows = 0;
  std::vector<IntMatrix> target_relations;
  std::vector<IntMatrix> all_relations;
  for (const auto& v : vs) all_relations.push_back(v.relations);
  for (const auto& a : diagram.arrows) {
    if (a.source >= vs.size() || a.target >= vs.size()) throw InputError("group diagram: arrow endpoint out of range");
    if (!is_well_defined(a.map, vs[a.source], vs[a.target]))
      throw PreconditionError("group diagram: arrow map is not a well-defined homomorphism");
    eq_rows += vs[a.target].generators;
    target_relations.push_back(vs[a.target].relations);
  }

  // Phi x = (f_a(x_src) - x_tgt)_a; x lies in the limit iff Phi x is in the
  // image of the stacked target relations.
  IntMatrix phi(eq_rows, g);
  std::size_t row = 0;
  for (const auto& a : diagram.arrows) {
    const std::size_t gt = vs[a.target].generators;
    for (std::size_t i = 0; i < gt; ++i) {
      for (std::size_t j = 0; j < vs[a.source].generators; ++j) phi(row + i, offset[a.source] + j) += a.map(i, j);
      phi(row + i, offset[a.target] + i) -= 1;
    }
    row += gt;
  }
  IntMatrix rt = block_diagonal(target_relations);
  for (std::size_t i = 0; i < rt.rows(); ++i)
    for (std::size_t j = 0; j < rt.cols(); ++j) rt(i, j) = -rt(i, j);
  const IntMatrix lifted = kernel(hconcat(phi, rt));
  const IntMatrix basis = lattice_basis(lifted.block(0, g, 0, lifted.cols()));
  const std::size_t ell = basis.cols();

  // Relations of the limit in basis coordinates: c with basis * c in image(R).
  IntMatrix rall = block_diagonal(all_relations);
  for (std::size_t i = 0; i < rall.rows(); ++i)
    for (std::size_t j = 0; j < rall.cols(); ++j) rall(i, j) = -rall(i, j);
  const IntMatrix coords = kernel(hconcat(basis, rall));
  const IntMatrix rel = coords.block(0, ell, 0, coords.cols());

  const auto res = snf(rel);
  LimitResult out;
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < ell; ++k) {
    if (k < res.rank) {
      if (res.s(k, k) == 1) continue;
      out.group.torsion.push_back(res.s(k, k));
    } else {
      ++out.group.rank;
    }
    kept.push_back(k);
  }
  const IntMatrix gens = basis * res.uinv.select_cols(kept);
  for (std::size_t i = 0; i < vs.size(); ++i) out.projections.push_back(gens.block(offset[i], offset[i + 1], 0, gens.cols()));
  return out;
}

GroupPresentation GradedGroup::presentation() const {
  std::vector<IntMatrix> blocks;
  std::size_t gens = 0;
  for (const auto& p : pieces) {
    auto pp = GroupPresentation::of(p);
    gens += pp.generators;
    blocks.push_back(std::move(pp.relations));
  }
  return {gens, block_diagonal(blocks)};
}

std::vector<std::size_t> GradedGroup::offsets() const {
  std::vector<std::size_t> out(pieces.size() + 1, 0);
  for (std::size_t i = 0; i < pieces.size(); ++i) out[i + 1] = out[i] + pieces[i].generators();
  return out;
}

void GradedHom::check() const {
  if (source.pieces.size() != source.index.size() || target.pieces.size() != target.index.size())
    throw PreconditionError("graded group: piece count differs from index size");
  if (!(reindex.source() == target.index) || !(reindex.target() == source.index))
    throw PreconditionError("graded hom: reindex map must run from the target index to the source index");
  for (const auto& [key, m] : blocks) {
    const auto [x, y] = key;
    if (x >= source.pieces.size() || y >= target.pieces.size())
      throw PreconditionError("graded hom: block refers to a grade out of range");
    if (reindex(y) != x && !m.is_zero())
      throw PreconditionError("graded hom: block " + source.index.label(x) + " -> " + target.index.label(y) +
                              " lies outside the reindex fiber");
    const auto ps = GroupPresentation::of(source.pieces[x]);
    const auto pt = GroupPresentation::of(target.pieces[y]);
    if (m.rows() != pt.generators || m.cols() != ps.generators)
      throw PreconditionError("graded hom: block has the wrong shape");
    if (!is_well_defined(m, ps, pt)) throw PreconditionError("graded hom: block is not a well-defined homomorphism");
  }
}

IntMatrix GradedHom::total_matrix() const {
  const auto so = source.offsets();
  const auto to = target.offsets();
  IntMatrix m(to.back(), so.back());
  for (const auto& [key, b] : blocks) m.set_block(to[key.second], so[key.first], b);
  return m;
}

PreorderDiagram GradedDiagram::index_diagram() const {
  std::vector<DiagramVertex> vs;
  for (std::size_t i = 0; i < vertices.size(); ++i) vs.push_back({std::to_string(i), vertices[i].index});
  std::vector<DiagramArrow> as;
  for (std::size_t k = 0; k < arrows.size(); ++k) {
    const auto& a = arrows[k];
    as.push_back({"a" + std::to_string(k), a.source, a.target, Orientation::contravariant, a.hom.reindex.assignment()});
  }
  return PreorderDiagram(std::move(vs), std::move(as));
}

namespace {

bool same_graded(const GradedGroup& a, const GradedGroup& b) { return a.index == b.index && a.pieces == b.pieces; }

}  // namespace

GradedLimitResult graded_limit(const GradedDiagram& diagram, const FinitePreorder& colimit_index,
                               const std::vector<std::vector<std::size_t>>& cocone) {
  for (const auto& v : diagram.vertices)
    if (v.pieces.size() != v.index.size()) throw PreconditionError("graded group: piece count differs from index size");
  for (const auto& a : diagram.arrows) {
    if (a.source >= diagram.vertices.size() || a.target >= diagram.vertices.size())
      throw InputError("graded diagram: arrow endpoint out of range");
    if (!same_graded(a.hom.source, diagram.vertices[a.source]) || !same_graded(a.hom.target, diagram.vertices[a.target]))
      throw PreconditionError("graded diagram: arrow hom does not match its endpoints");
    a.hom.check();
  }
  const auto computed = colimit(diagram.index_diagram());
  if (!(computed.colimit == colimit_index) || computed.cocone != cocone)
    throw PreconditionError("graded limit: supplied index is not the colimit of the index diagram");

  GradedLimitResult out;
  out.graded.index = colimit_index;
  const std::size_t nv = diagram.vertices.size();
  for (std::size_t w = 0; w < colimit_index.size(); ++w) {
    std::vector<std::vector<std::size_t>> fiber(nv);
    GroupDiagram gd;
    std::vector<std::vector<std::size_t>> local_offset(nv);
    for (std::size_t i = 0; i < nv; ++i) {
      std::vector<FgAbGroup> parts;
      std::size_t off = 0;
      local_offset[i].assign(diagram.vertices[i].pieces.size(), 0);
      for (std::size_t z = 0; z < cocone[i].size(); ++z) {
        if (cocone[i][z] != w) continue;
        fiber[i].push_back(z);
        local_offset[i][z] = off;
        off += diagram.vertices[i].pieces[z].generators();
        parts.push_back(diagram.vertices[i].pieces[z]);
      }
      std::vector<IntMatrix> rels;
      for (const auto& p : parts) rels.push_back(GroupPresentation::of(p).relations);
      gd.vertices.push_back({off, block_diagonal(rels)});
    }
    for (const auto& a : diagram.arrows) {
      IntMatrix m(gd.vertices[a.target].generators, gd.vertices[a.source].generators);
      for (const auto& [key, b] : a.hom.blocks) {
        const bool in_src = cocone[a.source][key.first] == w;
        const bool in_tgt = cocone[a.target][key.second] == w;
        if (in_src != in_tgt && !b.is_zero())
          throw PreconditionError("graded limit: arrow block crosses colimit fibers");
        if (in_src && in_tgt) m.set_block(local_offset[a.target][key.second], local_offset[a.source][key.first], b);
      }
      gd.arrows.push_back({a.source, a.target, std::move(m)});
    }
    out.graded.pieces.push_back(limit_of_groups(gd).group);
  }

  GroupDiagram total;
  for (const auto& v : diagram.vertices) total.vertices.push_back(v.presentation());
  for (const auto& a : diagram.arrows) total.arrows.push_back({a.source, a.target, a.hom.total_matrix()});
  out.ungraded = limit_of_groups(total).group;
  out.comparison_iso = out.ungraded == out.graded.total();
  return out;
}

}  // namespace psodkit
