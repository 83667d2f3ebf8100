// Command-line front end for the psodkit library.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include "psodkit/colimit.hpp"
#include "psodkit/error.hpp"
#include "psodkit/io.hpp"
#include "psodkit/psod.hpp"
#include "psodkit/stratification.hpp"

namespace {

using psodkit::io::Json;
using namespace psodkit;

struct Config {
  Caps caps;
  bool machine = false;
  bool totalize = false;
  std::uint64_t seed = 1;
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json load(const std::string& path) { return io::parse_document(read_input(path)); }

void parse_caps(const std::string& spec, Caps& caps) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("--caps expects key=value pairs");
    const auto key = item.substr(0, eq);
    unsigned long long v = 0;
    try {
      v = std::stoull(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParseError("--caps: bad value for '" + key + "'");
    }
    if (v == 0) throw ParseError("--caps: '" + key + "' must be positive");
    if (key == "enumeration") caps.max_enumeration = v;
    else if (key == "preorder") caps.max_preorder = v;
    else if (key == "level") caps.max_level = static_cast<unsigned>(v);
    else if (key == "depth") caps.nerve_depth = static_cast<unsigned>(v);
    else if (key == "verify") caps.max_verify_carrier = v;
    else if (key == "work") caps.max_verify_work = v;
    else throw ParseError("--caps: unknown key '" + key + "'");
  }
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

void print_preorder(std::ostream& os, const FinitePreorder& p) {
  os << "elements: " << join(p.labels(), ", ") << "\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<std::string> up;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (i != j && p.leq(i, j)) up.push_back(p.label(j));
    os << "  " << p.label(i) << " <= {" << join(up, ", ") << "}\n";
  }
}

void print_psod(std::ostream& os, const PsodIndex& p) {
  const auto order = p.order();
  os << (is_directed(p.index) ? "directed index" : "index is not directed (linear extension shown)") << ", "
     << p.index.size() << " factors\n";
  const bool with_k = std::any_of(p.factors.begin(), p.factors.end(), [](const auto& f) { return f.kdata.has_value(); });
  std::vector<std::array<std::string, 5>> rows{{"#", "stratum", "character", "target", with_k ? "K" : ""}};
  for (std::size_t n = 0; n < order.size(); ++n) {
    const auto& f = p.factors[order[n]];
    rows.push_back({std::to_string(n), f.stratum_id, to_string(f.character), f.target_label,
                    f.kdata ? f.kdata->to_string() : ""});
  }
  std::array<std::size_t, 5> width{};
  for (const auto& r : rows)
    for (std::size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], r[c].size());
  for (const auto& r : rows) {
    std::string line = " ";
    for (std::size_t c = 0; c < 5; ++c) {
      if (c == 4 && r[4].empty()) break;
      line += " " + r[c] + std::string(width[c] - r[c].size(), ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << "\n";
  }
  for (const auto& note : p.notes) os << "note: " << note << "\n";
}

void emit(const Config& cfg, const Json& machine, const std::function<void(std::ostream&)>& human) {
  if (cfg.machine) {
    std::cout << machine.dump(2) << "\n";
  } else {
    human(std::cout);
  }
}

// preorder -----------------------------------------------------------------

void cmd_coproduct(const Config& cfg, const std::vector<std::string>& files) {
  std::vector<FinitePreorder> parts;
  for (const auto& f : files) parts.push_back(io::preorder_from_json(load(f)));
  const auto res = coproduct(parts);
  Json inj = Json::array();
  for (const auto& m : res.injections) inj.push_back(io::to_json(m)["map"]);
  emit(cfg, Json{{"coproduct", io::to_json(res.coproduct)}, {"injections", inj}},
       [&](std::ostream& os) { print_preorder(os, res.coproduct); });
}

void cmd_pushout(const Config& cfg, const std::string& file) {
  const auto doc = load(file);
  if (!doc.contains("left") || !doc.contains("right")) throw ParseError("pushout expects {\"left\": map, \"right\": map}");
  const auto left = to_map(io::label_map_from_json(doc["left"]));
  const auto right = to_map(io::label_map_from_json(doc["right"]));
  const auto res = pushout(left, right);
  emit(cfg,
       Json{{"pushout", io::to_json(res.pushout)},
            {"first", io::to_json(res.first)["map"]},
            {"second", io::to_json(res.second)["map"]}},
       [&](std::ostream& os) { print_preorder(os, res.pushout); });
}

void cmd_colimit(const Config& cfg, const std::string& file, bool verify) {
  const auto diagram = io::diagram_from_json(load(file));
  const auto res = colimit(diagram);
  Json out{{"colimit", io::to_json(res.colimit)}, {"cocone", io::to_json(res.cocone, diagram, res.colimit)}};
  std::optional<ColimitCertificate> cert;
  if (verify) {
    cert = verify_colimit(diagram, res.colimit, res.cocone,
                          {cfg.caps.max_verify_carrier, cfg.caps.max_verify_work, true});
    out["verified"] = io::to_json(*cert, diagram);
  }
  emit(cfg, out, [&](std::ostream& os) {
    print_preorder(os, res.colimit);
    if (cert) os << (cert->ok ? "verified" : "NOT a colimit: " + cert->reason) << "\n";
  });
}

void cmd_verify(const Config& cfg, const std::string& file) {
  const auto doc = load(file);
  const bool wrapped = doc.contains("diagram");
  const auto diagram = io::diagram_from_json(wrapped ? doc["diagram"] : doc);
  FinitePreorder candidate;
  Cocone cocone;
  if (wrapped && doc.contains("candidate")) {
    candidate = io::preorder_from_json(doc["candidate"]);
    if (!doc.contains("cocone")) throw ParseError("verify: a candidate needs a cocone");
    cocone = io::cocone_from_json(doc["cocone"], diagram, candidate);
  } else {
    auto res = colimit(diagram);
    candidate = std::move(res.colimit);
    cocone = std::move(res.cocone);
  }
  const auto cert = verify_colimit(diagram, candidate, cocone,
                                   {cfg.caps.max_verify_carrier, cfg.caps.max_verify_work, true});
  emit(cfg, io::to_json(cert, diagram), [&](std::ostream& os) {
    os << (cert.ok ? "verified" : "not verified: " + cert.reason) << " (" << cert.targets_checked
       << " targets checked)\n";
  });
}

void cmd_directed(const Config& cfg, const std::string& file) {
  const auto p = io::preorder_from_json(load(file));
  const auto w = directedness_witness(p);
  Json out{{"directed", !w}};
  if (w) out["witness"] = Json::array({p.label(w->first), p.label(w->second)});
  emit(cfg, out, [&](std::ostream& os) {
    os << (w ? "false" : "true") << "\n";
    if (w) os << "incomparable: " << p.label(w->first) << ", " << p.label(w->second) << "\n";
  });
}

void cmd_number(const Config& cfg, const std::string& file) {
  const auto p = io::preorder_from_json(load(file));
  const auto order = directed_numbering(p);
  Json out = Json::array();
  for (auto x : order) out.push_back(p.label(x));
  emit(cfg, Json{{"numbering", out}}, [&](std::ostream& os) {
    for (std::size_t n = 0; n < order.size(); ++n) os << n << "  " << p.label(order[n]) << "\n";
  });
}

void cmd_random(const Config& cfg, std::size_t size) {
  if (size > cfg.caps.max_preorder) throw ResourceError("random preorder larger than the preorder cap");
  std::mt19937_64 rng(cfg.seed);
  std::bernoulli_distribution coin(0.3);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < size; ++i) labels.push_back("x" + std::to_string(i));
  kernels::BitRelation rel(size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      if (i == j || coin(rng)) rel.set(i, j);
  const FinitePreorder p(std::move(labels), kernels::transitive_closure_omp(std::move(rel)));
  emit(cfg, io::to_json(p), [&](std::ostream& os) { print_preorder(os, p); });
}

// order --------------------------------------------------------------------

void cmd_factform(const Config& cfg, const std::string& tuple) {
  const auto f = to_factorial_form(parse_tuple(tuple));
  emit(cfg, io::to_json(f), [&](std::ostream& os) {
    std::vector<std::string> nums;
    for (const auto& p : f.numerators) nums.push_back(p.get_str());
    os << "level " << f.level << ", numerators (" << join(nums, ", ") << ")\n";
  });
}

void cmd_cmp(const Config& cfg, const std::string& a, const std::string& b) {
  const auto o = cmp_bang(parse_tuple(a), parse_tuple(b));
  emit(cfg, Json{{"ordering", std::string(to_string(o))}}, [&](std::ostream& os) { os << to_string(o) << "\n"; });
}

void cmd_enumerate(const Config& cfg, unsigned k, unsigned level, unsigned long prime) {
  const auto chars = prime ? enumerate_characters_coprime(k, level, prime, cfg.caps)
                           : enumerate_characters(k, level, cfg.caps);
  Json out = Json::array();
  for (const auto& c : chars) out.push_back(io::to_json(c));
  emit(cfg, Json{{"characters", out}}, [&](std::ostream& os) {
    for (const auto& c : chars) os << to_string(c) << "\n";
  });
}

// psod ---------------------------------------------------------------------

Stratification load_stratification(const Json& doc, const Config& cfg) {
  if (doc.contains("charts")) return strata_from_atlas(io::atlas_from_json(doc), cfg.caps.nerve_depth);
  return io::stratification_from_json(doc.contains("stratification") ? doc["stratification"] : doc);
}

void cmd_strata(const Config& cfg, const std::string& file) {
  const auto strat = load_stratification(load(file), cfg);
  const auto issues = validate(strat);
  Json out = io::to_json(strat);
  out["violations"] = issues;
  emit(cfg, out, [&](std::ostream& os) {
    for (const auto& s : strat.strata)
      os << s.id << "  codim " << s.codim << "  normalization " << join(s.norm_components, ", ") << "\n";
    os << (issues.empty() ? "valid" : "violations:\n  " + join(issues, "\n  ")) << "\n";
  });
}

void cmd_build(const Config& cfg, const std::string& file, unsigned long r) {
  const auto p = build_root_psod(load_stratification(load(file), cfg), r, cfg.totalize, cfg.caps);
  emit(cfg, io::to_json(p), [&](std::ostream& os) { print_psod(os, p); });
}

void cmd_infinite(const Config& cfg, const std::string& file, unsigned level, unsigned long prime) {
  const auto p = build_infinite_psod(load_stratification(load(file), cfg), level, cfg.totalize, cfg.caps, prime);
  emit(cfg, io::to_json(p), [&](std::ostream& os) { print_psod(os, p); });
}

void cmd_glue(const Config& cfg, const std::string& file) {
  const auto sc = io::scenario_from_json(load(file));
  const auto res = glue(sc);
  bool preserved = !sc.vertices.empty();
  for (const auto& v : sc.vertices) preserved = preserved && v.psod.index == res.psod.index;
  auto out = io::to_json(res);
  out["index_preserved"] = preserved;
  emit(cfg, out, [&](std::ostream& os) {
    print_psod(os, res.psod);
    os << "directedness: " << res.verdict();
    if (res.witness)
      os << " (incomparable " << res.psod.index.label(res.witness->first) << ", "
         << res.psod.index.label(res.witness->second) << ")";
    os << "\nresult: " << res.label() << "\n";
    if (preserved) os << "index preserved\n";
    if (res.graded)
      os << "graded limit: " << res.graded->graded.total().to_string() << " (ungraded "
         << res.graded->ungraded.to_string() << ", " << (res.graded->comparison_iso ? "isomorphic" : "MISMATCH") << ")\n";
  });
}

void cmd_filtrate(const Config& cfg, const std::string& file) {
  const auto doc = load(file);
  if (!doc.contains("graded") || !doc.contains("object")) throw ParseError("filtrate expects {\"graded\", \"object\"}");
  const auto g = io::graded_from_json(doc["graded"]);
  const auto obj = io::graded_object_from_json(doc["object"], g);
  const auto steps = filtration(g, obj);
  emit(cfg, io::to_json(steps, g), [&](std::ostream& os) {
    for (std::size_t t = 0; t < steps.size(); ++t) {
      std::vector<std::string> c;
      for (const auto& x : steps[t].component[steps[t].grade]) c.push_back(x.get_str());
      os << "step " << t << ": grade " << g.index.label(steps[t].grade) << " component (" << join(c, ", ") << ")\n";
    }
    os << "residual zero\n";
  });
}

void cmd_ktheory(const Config& cfg, const std::string& file, const std::string& mode, unsigned long r, unsigned level,
                 unsigned long prime) {
  const auto doc = load(file);
  if (!doc.contains("kdata")) throw ParseError("ktheory expects {\"stratification\", \"kdata\"}");
  KMode m;
  m.r = r;
  m.level = level;
  m.prime = prime;
  if (mode == "finite") m.kind = KMode::Kind::finite;
  else if (mode == "infinite") m.kind = KMode::Kind::infinite;
  else if (mode == "kummer") m.kind = KMode::Kind::kummer_etale;
  else throw ParseError("--mode must be finite, infinite or kummer");
  const auto rep = ktheory_report(load_stratification(doc, cfg), io::kdata_from_json(doc["kdata"]), m);
  emit(cfg, io::to_json(rep), [&](std::ostream& os) {
    os << "mode: " << rep.mode << "\n";
    for (const auto& row : rep.rows)
      os << "  " << row.stratum_id << " (codim " << row.codim << "): " << row.multiplicity_text << " x "
         << row.kgroup.to_string() << " = " << row.contribution.to_string() << "\n";
    os << "total: " << rep.total.to_string() << " (rank " << rep.total.rank << ")\n";
    for (const auto& n : rep.notes) os << "note: " << n << "\n";
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psodkit: preorders, root-stack psod indices and K-theory bookkeeping"};
  app.require_subcommand(1);
  Config cfg;
  std::string caps_spec;
  std::string output = "human";
  app.add_option("--caps", caps_spec, "limits, e.g. preorder=4096,enumeration=100000,level=8,depth=3,verify=12");
  app.add_option("--output", output, "human or machine")->check(CLI::IsMember({"human", "machine"}));
  app.add_flag("--totalize", cfg.totalize, "use graded total orders inside character blocks");
  app.add_option("--seed", cfg.seed, "seed for randomized commands");

  std::function<void()> action;
  std::string file;
  std::vector<std::string> files;

  auto* pre = app.add_subcommand("preorder", "finite preorders and colimits")->require_subcommand(1);
  pre->add_subcommand("coproduct", "coproduct of preorder documents")
      ->callback([&] { action = [&] { cmd_coproduct(cfg, files); }; })
      ->add_option("files", files, "preorder documents")->required();
  pre->add_subcommand("pushout", "pushout of {left, right} maps")
      ->callback([&] { action = [&] { cmd_pushout(cfg, file); }; })
      ->add_option("file", file);
  bool verify_flag = false;
  auto* col = pre->add_subcommand("colimit", "colimit of a diagram");
  col->add_option("file", file);
  col->add_flag("--verify", verify_flag, "also check the universal property");
  col->callback([&] { action = [&] { cmd_colimit(cfg, file, verify_flag); }; });
  pre->add_subcommand("verify", "exhaustive universal-property check")
      ->callback([&] { action = [&] { cmd_verify(cfg, file); }; })
      ->add_option("file", file);
  pre->add_subcommand("directed", "directedness test")
      ->callback([&] { action = [&] { cmd_directed(cfg, file); }; })
      ->add_option("file", file);
  pre->add_subcommand("number", "numbering of a directed preorder")
      ->callback([&] { action = [&] { cmd_number(cfg, file); }; })
      ->add_option("file", file);
  std::size_t random_size = 5;
  pre->add_subcommand("random", "random preorder from --seed")
      ->callback([&] { action = [&] { cmd_random(cfg, random_size); }; })
      ->add_option("size", random_size);

  auto* ord = app.add_subcommand("order", "characters and the factorial order")->require_subcommand(1);
  std::string tuple_a;
  std::string tuple_b;
  ord->add_subcommand("factform", "normal factorial form")
      ->callback([&] { action = [&] { cmd_factform(cfg, tuple_a); }; })
      ->add_option("tuple", tuple_a)->required();
  auto* cmp = ord->add_subcommand("cmp", "compare two tuples");
  cmp->add_option("a", tuple_a)->required();
  cmp->add_option("b", tuple_b)->required();
  cmp->callback([&] { action = [&] { cmd_cmp(cfg, tuple_a, tuple_b); }; });
  unsigned k = 1;
  unsigned level = 2;
  unsigned long prime = 0;
  auto* en = ord->add_subcommand("enumerate", "sorted characters up to a level");
  en->add_option("--k", k, "tuple length");
  en->add_option("--level", level, "factorial level");
  en->add_option("--coprime", prime, "keep denominators coprime to this prime");
  en->callback([&] { action = [&] { cmd_enumerate(cfg, k, level, prime); }; });

  auto* ps = app.add_subcommand("psod", "psod indices, gluing and K-theory")->require_subcommand(1);
  unsigned long r = 2;
  std::string mode = "finite";
  ps->add_subcommand("strata", "stratification from a document or atlas")
      ->callback([&] { action = [&] { cmd_strata(cfg, file); }; })
      ->add_option("file", file);
  auto* build = ps->add_subcommand("build", "root-stack psod");
  build->add_option("file", file);
  build->add_option("--r", r, "root order");
  build->callback([&] { action = [&] { cmd_build(cfg, file, r); }; });
  auto* inf = ps->add_subcommand("infinite", "truncated infinite root-stack psod");
  inf->add_option("file", file);
  inf->add_option("--level", level, "factorial level");
  inf->add_option("--coprime", prime, "keep denominators coprime to this prime");
  inf->callback([&] { action = [&] { cmd_infinite(cfg, file, level, prime); }; });
  ps->add_subcommand("glue", "glue a scenario")
      ->callback([&] { action = [&] { cmd_glue(cfg, file); }; })
      ->add_option("file", file);
  ps->add_subcommand("filtrate", "projection filtration of a graded object")
      ->callback([&] { action = [&] { cmd_filtrate(cfg, file); }; })
      ->add_option("file", file);
  auto* kt = ps->add_subcommand("ktheory", "K-theory decomposition report");
  kt->add_option("file", file);
  kt->add_option("--mode", mode, "finite, infinite or kummer");
  kt->add_option("--r", r, "root order (finite mode)");
  kt->add_option("--level", level, "truncation level");
  kt->add_option("--prime", prime, "prime p (kummer mode)");
  kt->callback([&] { action = [&] { cmd_ktheory(cfg, file, mode, r, level, prime); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (!caps_spec.empty()) parse_caps(caps_spec, cfg.caps);
    cfg.machine = output == "machine";
    if (action) action();
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  }
}
