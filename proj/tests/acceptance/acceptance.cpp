// Acceptance suite: one pass/fail line per criterion. With no arguments every
// criterion runs; otherwise only the numbered ones.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "psodkit/abgroup.hpp"
#include "psodkit/colimit.hpp"
#include "psodkit/error.hpp"
#include "psodkit/intmatrix.hpp"
#include "psodkit/io.hpp"
#include "psodkit/psod.hpp"
#include "psodkit/root_index.hpp"
#include "scenarios.hpp"

using namespace psodkit;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) detail << what;
    pass = pass && cond;
  }
};

Stratification fixture_strat(const std::string& name) {
  return io::stratification_from_json(scenarios::load_fixture(name));
}

mpz_class power(unsigned long base, unsigned long exp) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
  return out;
}

// <=! order suite on Z_{n!}, n = 2..5.
void bang_order(Outcome& o) {
  for (unsigned n = 2; n <= 5; ++n) {
    const std::size_t size = factorial(n).get_ui();
    const auto pos = oracle::bang_positions(n);
    std::vector<Ordering> table(size * size);
    for (std::size_t p = 0; p < size; ++p)
      for (std::size_t q = 0; q < size; ++q) table[p * size + q] = cmp_bang_znfact(p, q, n);
    auto le = [&](std::size_t p, std::size_t q) {
      const auto c = table[p * size + q];
      return c == Ordering::less || c == Ordering::equal;
    };
    for (std::size_t p = 0; p < size; ++p)
      for (std::size_t q = 0; q < size; ++q) {
        const auto c = table[p * size + q];
        o.require(c != Ordering::incomparable, "not total at level " + std::to_string(n));
        o.require(!(le(p, q) && le(q, p)) || p == q, "not antisymmetric at level " + std::to_string(n));
        const auto expect = pos[p] < pos[q] ? Ordering::less : pos[p] > pos[q] ? Ordering::greater : Ordering::equal;
        o.require(c == expect, "disagrees with the oracle at level " + std::to_string(n));
        if (n > 2 && p < size / n && q < size / n)
          o.require(cmp_bang_znfact(p * n, q * n, n) == cmp_bang_znfact(p, q, n - 1),
                    "restriction to the previous level differs at level " + std::to_string(n));
      }
    for (std::size_t p = 0; p < size; ++p)
      for (std::size_t q = 0; q < size; ++q) {
        if (!le(p, q)) continue;
        for (std::size_t r = 0; r < size; ++r)
          if (le(q, r)) o.require(le(p, r), "not transitive at level " + std::to_string(n));
      }
  }
  std::vector<CharTuple> chain;
  for (const char* s : {"-5/6", "-1/3", "-2/3", "-1/6", "-1/2", "0"}) chain.push_back(parse_tuple(s));
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    o.require(cmp_bang(chain[i], chain[i + 1]) == Ordering::less, "level-3 chain differs");
  o.detail << "levels 2..5 checked";
}

// Universal property of coproduct, pushout and colimit outputs on fixtures.
void colimits(Outcome& o) {
  std::vector<std::string> verified;
  std::vector<std::string> failures;
  std::vector<std::string> skipped;
  auto check = [&](const std::string& name, const PreorderDiagram& d, const std::function<ColimitResult()>& build) {
    std::size_t total = 0;
    for (const auto& v : d.vertices()) total += v.preorder.size();
    if (total > 8) {
      skipped.push_back(name);
      return;
    }
    try {
      const auto res = build();
      const auto cert = verify_colimit(d, res.colimit, res.cocone);
      if (cert.ok) {
        verified.push_back(name);
      } else {
        failures.push_back(name + " (" + cert.reason + ")");
      }
    } catch (const NoColimitError&) {
      const bool none = !search_colimit_on_set_carrier(d).has_value();
      failures.push_back(name + (none ? " (no colimit; no order on the set colimit works)" : " (no colimit)"));
    }
  };

  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(scenarios::fixture_path("")))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const auto name = path.filename().string();
    io::Json doc;
    try {
      doc = scenarios::load_fixture(name);
    } catch (const ParseError&) {
      continue;
    }
    if (doc.is_object() && doc.contains("left") && doc.contains("right")) {
      const auto left = to_map(io::label_map_from_json(doc["left"]));
      const auto right = to_map(io::label_map_from_json(doc["right"]));
      const auto d = PreorderDiagram::span(left, right);
      check(name + " pushout", d, [&] {
        const auto p = pushout(left, right);
        return ColimitResult{p.pushout, {p.first.assignment(), p.second.assignment(),
                                         compose(p.first, left).assignment()}};
      });
      continue;
    }
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("arrows")) continue;
    if (doc["vertices"].empty() || !doc["vertices"][0].contains("preorder")) continue;
    PreorderDiagram d;
    try {
      d = io::diagram_from_json(doc);
    } catch (const std::exception&) {
      continue;
    }
    if (d.arrows().empty()) {
      check(name + " coproduct", d, [&] {
        std::vector<FinitePreorder> parts;
        for (const auto& v : d.vertices()) parts.push_back(v.preorder);
        const auto c = coproduct(parts);
        Cocone cocone;
        for (const auto& inj : c.injections) cocone.push_back(inj.assignment());
        return ColimitResult{c.coproduct, cocone};
      });
    }
    check(name + " colimit", d, [&] { return colimit(d); });
  }
  o.detail << verified.size() << " verified:";
  for (const auto& v : verified) o.detail << " " << v << ";";
  for (const auto& f : failures) o.detail << " FAILED " << f << ";";
  for (const auto& s : skipped) o.detail << " skipped (carrier > 8) " << s << ";";
  o.pass = failures.empty() && !verified.empty();
}

void nodal_cubic(Outcome& o) {
  const auto p = build_root_psod(fixture_strat("nodal_cubic.json"), 2);
  std::vector<std::string> targets;
  for (auto x : p.order()) targets.push_back(p.factors[x].target_label);
  o.require(is_directed(p.index), "index not directed");
  o.require(targets == std::vector<std::string>{"Perf(o)", "Perf(D~)", "Perf(A²)"}, "factor list differs");
  for (const auto& t : targets) o.detail << t << " ";
}

void count_law(Outcome& o) {
  for (unsigned k = 1; k <= 3; ++k) {
    const auto strat = scenarios::coordinate_crossing(k);
    std::map<std::string, FgAbGroup> kdata;
    for (const auto& s : strat.strata)
      for (const auto& c : s.norm_components) kdata[c] = FgAbGroup::free(1);
    for (unsigned long r = 1; r <= 5; ++r) {
      const auto p = build_root_psod(strat, r);
      const std::string at = " (k=" + std::to_string(k) + ", r=" + std::to_string(r) + ")";
      o.require(p.index.size() == power(r, k), "total count" + at);
      for (const auto& [id, members] : p.by_stratum())
        o.require(members.size() == power(r - 1, strat.strata[*strat.find(id)].codim), "stratum count" + at);
      const auto rep = ktheory_report(strat, kdata, {KMode::Kind::finite, r, 2, 0});
      o.require(rep.total.torsion.empty() && rep.total.rank == power(r, k), "K rank" + at);
    }
  }
  o.detail << "k <= 3, r <= 5";
}

void decategorified(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::map<std::string, int> shapes;
  int done = 0;
  int attempts = 0;
  while (done < 50 && attempts < 100000) {
    ++attempts;
    const auto sc = scenarios::random_graded_scenario(rng);
    if (!sc) continue;
    const auto res = graded_limit(sc->diagram, sc->colimit.colimit, sc->colimit.cocone);
    // The ungraded limit is recomputed from the total matrices.
    GroupDiagram total;
    for (const auto& v : sc->diagram.vertices) total.vertices.push_back(v.presentation());
    for (const auto& a : sc->diagram.arrows) total.arrows.push_back({a.source, a.target, a.hom.total_matrix()});
    const auto ungraded = limit_of_groups(total).group;
    o.require(ungraded == res.graded.total(), "invariant factors differ for a " + sc->shape + " scenario");
    o.require(res.comparison_iso, "comparison flag unset");
    ++shapes[sc->shape];
    ++done;
  }
  o.require(done == 50, "could not sample 50 scenarios");
  o.detail << done << " scenarios (";
  for (const auto& [s, n] : shapes) o.detail << s << " " << n << " ";
  o.detail << ")";
}

void descent_shape(Outcome& o) {
  const auto p = build_root_psod(fixture_strat("nodal_cubic.json"), 2);
  for (unsigned depth = 1; depth <= 3; ++depth) {
    const auto res = glue(cech_scenario(p, depth));
    o.require(res.directed && res.psod.index == p.index && res.psod.factors == p.factors,
              "Cech depth " + std::to_string(depth) + " changed the index");
  }
  const auto res = glue(io::scenario_from_json(scenarios::load_fixture("discrete2.json")));
  o.require(!res.directed && res.witness.has_value(), "discrete index was not flagged");
  if (res.witness)
    o.detail << "witness " << res.psod.index.label(res.witness->first) << ", "
             << res.psod.index.label(res.witness->second);
}

void truncation(Outcome& o) {
  const auto strat = fixture_strat("smooth_divisor.json");
  const auto inf = build_infinite_psod(strat, 3);
  std::vector<std::size_t> keep;
  for (std::size_t x = 0; x < inf.factors.size(); ++x) {
    bool ok = true;
    for (const auto& c : inf.factors[x].character) ok = ok && 2 % c.den() == 0;
    if (ok) keep.push_back(x);
  }
  const auto restricted = inf.index.restrict_to(keep);
  const auto root = build_root_psod(strat, 2);
  o.require(restricted == root.index, "restricted index differs from r = 2");
  for (std::size_t i = 0; i < keep.size() && i < root.factors.size(); ++i)
    o.require(inf.factors[keep[i]] == root.factors[i], "factor descriptors differ");

  std::vector<CharTuple> block;
  for (auto x : inf.order())
    if (inf.factors[x].stratum_id == "D") block.push_back(inf.factors[x].character);
  const auto chain = oracle::bang_chain(3);
  std::vector<CharTuple> expect;
  for (const auto& q : chain)
    if (q != 0) expect.push_back({Residue(q.get_num(), q.get_den())});
  o.require(block == expect, "divisor block differs from the oracle chain");
  o.detail << block.size() << " divisor factors";
}

void normal_forms(Outcome& o) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> e(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix a(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) a(i, j) = e(rng);
    const auto x = snf(a, PivotStrategy::smallest);
    const auto y = snf(a, PivotStrategy::first_nonzero);
    for (const auto* s : {&x, &y}) {
      o.require(s->u * a * s->v == s->s, "U A V != S");
      o.require(abs(oracle::cofactor_determinant(s->u)) == 1 && abs(oracle::cofactor_determinant(s->v)) == 1,
                "transform not unimodular");
      o.require(oracle::is_snf(s->s), "not a divisibility chain");
    }
    o.require(x.s == y.s, "invariant factors depend on the pivot path");
    const auto h = hnf(a);
    o.require(h.u * a == h.h && oracle::is_row_hnf(h.h), "hnf check failed");
  }
  o.detail << "100 matrices";
}

void kummer(Outcome& o) {
  const auto chars = enumerate_characters_coprime(1, 3, 2);
  auto has = [&](const char* s) { return std::find(chars.begin(), chars.end(), parse_tuple(s)) != chars.end(); };
  for (const auto& chi : chars)
    for (const auto& c : chi) o.require(c.den() % 2 != 0, "even denominator " + c.to_string());
  o.require(has("-1/3") && has("-2/3"), "-1/3 or -2/3 missing");
  o.require(!has("-1/2"), "-1/2 present");
  const auto p = build_infinite_psod(fixture_strat("smooth_divisor.json"), 3, false, {}, 2);
  for (const auto& f : p.factors)
    for (const auto& c : f.character) o.require(c.den() % 2 != 0, "psod keeps an even denominator");
  for (const auto& chi : chars) o.detail << to_string(chi) << " ";
}

void filtrations(Outcome& o) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> coord(-50, 50);
  int objects = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 6;
    GradedGroup g{scenarios::random_total_preorder(rng, n), {}};
    std::vector<std::vector<mpz_class>> obj;
    for (std::size_t x = 0; x < n; ++x) {
      g.pieces.push_back(scenarios::random_group(rng, 2));
      obj.emplace_back();
      for (std::size_t c = 0; c < g.pieces.back().generators(); ++c) obj.back().emplace_back(coord(rng));
    }
    const auto steps = filtration(g, obj);
    std::vector<std::vector<mpz_class>> sum(n);
    for (std::size_t x = 0; x < n; ++x) sum[x].assign(obj[x].size(), 0);
    for (const auto& s : steps)
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t c = 0; c < s.component[x].size(); ++c) {
          if (x != s.grade) o.require(s.component[x][c] == 0, "component not single-grade");
          sum[x][c] += s.component[x][c];
        }
    o.require(sum == obj, "components do not sum to the input");
    for (const auto& piece : steps.back().residual)
      for (const auto& v : piece) o.require(v == 0, "nonzero residual");
    ++objects;
  }
  o.detail << objects << " objects";
}

struct Criterion {
  int number;
  double limit_seconds;
  void (*run)(Outcome&);
};

const Criterion kCriteria[] = {
    {1, 10, bang_order},     {2, 60, colimits},      {3, 1, nodal_cubic}, {4, 5, count_law},
    {5, 60, decategorified}, {6, 1, descent_shape},  {7, 1, truncation},  {8, 10, normal_forms},
    {9, 1, kummer},          {10, 5, filtrations},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  bool all_pass = true;
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.number) == wanted.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail << "; over the " << c.limit_seconds << " s limit";
    }
    all_pass = all_pass && o.pass;
    std::cout << "criterion " << c.number << ": " << (o.pass ? "PASS" : "FAIL") << " (" << secs << " s) "
              << o.detail.str() << '\n';
  }
  return all_pass ? 0 : 1;
}
