#pragma once

// Batch driver behind the mfol tool. Every verb reads one model file and
// prints a block of "key: value" lines. Exit status: 0 success, 1 domain
// error (bad model, failed check), 2 usage error.

#include "mfol/classification.hpp"
#include "mfol/entropy.hpp"
#include "mfol/filtration.hpp"
#include "mfol/filtration_io.hpp"
#include "mfol/foliation_io.hpp"
#include "mfol/markov_io.hpp"
#include "mfol/models.hpp"
#include "mfol/surface_io.hpp"
#include "mfol/surgery.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace mfol::cli {

inline const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v{"validate", "eu",           "classify",  "surgery",  "reduce",
                                          "decompose", "entropy",     "product-check", "roundtrip", "generate"};
  return v;
}

enum class Kind { Surface, Foliation, Exhaustion, Markov };

inline std::string to_string(Kind k) {
  switch (k) {
    case Kind::Surface: return "surface";
    case Kind::Foliation: return "foliation";
    case Kind::Exhaustion: return "exhaustion";
    case Kind::Markov: return "markov";
  }
  return "?";
}

using mfol::to_string;

inline Kind detect_kind(std::string_view text) {
  bool surface = false;
  for (const auto& line : io::tokenize(text)) {
    const auto& kw = line.tokens[0];
    if (kw == "foliation") return Kind::Foliation;
    if (kw == "markov") return Kind::Markov;
    if (kw == "exhaust") return Kind::Exhaustion;
    if (kw == "surface") surface = true;
  }
  if (!surface) throw ParseError(1, "not a surface, foliation, exhaustion or markov file");
  return Kind::Surface;
}

struct Input {
  std::string path;
  std::string text;
  Kind kind;
};

inline Input read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Input i{path, buf.str(), Kind::Surface};
  i.kind = detect_kind(i.text);
  return i;
}

inline void require_kind(const Input& in, std::initializer_list<Kind> kinds) {
  for (auto k : kinds)
    if (in.kind == k) return;
  std::string want;
  for (auto k : kinds) want += (want.empty() ? "" : " or ") + to_string(k);
  throw Error("'" + in.path + "' is a " + to_string(in.kind) + " file; expected " + want);
}

inline std::string decimal(const Rational& r) { return format_real(to_double(r)); }

inline void print_rational(std::ostream& out, const std::string& key, const Rational& r) {
  out << key << ": " << to_string(r);
  if (denominator(r) != 1) out << " (" << decimal(r) << ")";
  out << "\n";
}

inline std::string describe(const TransversalSpec& T, const PrismaticFoliation& F) {
  if (T.empty()) return "∅";
  std::string s = "{";
  for (std::size_t i = 0; i < T.points.size(); ++i) {
    const auto& p = T.points[i];
    s += (i ? ", " : "") + F.piles.at(p.pile).name + ":" + std::to_string(p.vertex) + " " + to_string(p.measure);
  }
  return s + "}";
}

inline double default_tolerance() {
  if (const char* env = std::getenv("MFOL_TOLERANCE")) {
    char* end = nullptr;
    double t = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(t > 0)) throw Error("MFOL_TOLERANCE must be a positive number, got '" + std::string(env) + "'");
    return t;
  }
  return 1e-9;
}

struct Options {
  std::string file;
  std::string output;
  int depth = 12;
  int twist = 0;
  std::size_t exact_limit = 30;
  int max_return = 64;
  std::vector<std::string> induce;
  int block = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  std::optional<double> tolerance;
  std::string family;
  int size = 3;
  int ends = 1;
};

inline void write_output(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) return;
  if (o.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw Error("cannot write '" + o.output + "'");
  f << text;
  out << "written: " << o.output << "\n";
}

// ---- verbs -----------------------------------------------------------------

inline int do_validate(const Options& o, std::ostream& out) {
  auto in = read_input(o.file);
  out << "kind: " << to_string(in.kind) << "\n";
  std::vector<std::string> problems;
  switch (in.kind) {
    case Kind::Surface: {
      auto S = parse_surface(in.text);
      problems = validation_errors(S);
      if (problems.empty()) out << "class: " << to_string(classify_surface(S)) << "\n";
      break;
    }
    case Kind::Foliation: {
      auto F = parse_foliation(in.text);
      problems = validate_foliation(F.foliation).violations;
      out << "piles: " << F.foliation.piles.size() << "\n" << "gluings: " << F.foliation.gluings.size() << "\n";
      break;
    }
    case Kind::Exhaustion: {
      auto E = parse_exhaustion(in.text);
      problems = exhaustion_errors(E);
      out << "stages: " << E.domains.size() << "\n" << "ends: " << E.ends << "\n";
      break;
    }
    case Kind::Markov: {
      auto M = parse_markov(in.text).system;
      out << "states: " << M.size() << "\n" << "exact: " << (M.exact ? "yes" : "no") << "\n";
      out << "irreducible: " << (is_irreducible(M.P) ? "yes" : "no") << "\n";
      break;
    }
  }
  out << "valid: " << (problems.empty() ? "yes" : "no") << "\n";
  for (const auto& p : problems) out << "violation: " << p << "\n";
  return problems.empty() ? 0 : 1;
}

inline int do_eu(const Options& o, std::ostream& out) {
  auto in = read_input(o.file);
  require_kind(in, {Kind::Foliation, Kind::Surface});
  if (in.kind == Kind::Surface) {
    out << "chi = " << classify_surface(parse_surface(in.text)).chi << "\n";
    return 0;
  }
  auto F = parse_foliation(in.text).foliation;
  require_valid(F);
  auto eu = foliated_euler(F);
  out << "Eu = " << to_string(eu) << "\n";
  if (denominator(eu) != 1) out << "Eu ≈ " << decimal(eu) << "\n";
  return 0;
}

inline int do_classify(const Options& o, std::ostream& out) {
  auto in = read_input(o.file);
  require_kind(in, {Kind::Foliation, Kind::Surface});
  if (in.kind == Kind::Surface) {
    auto c = classify_surface(parse_surface(in.text));
    out << "orientable: " << (c.orientable ? "yes" : "no") << "\n"
        << "genus: " << c.genus << "\n"
        << "boundary: " << c.boundary_count << "\n"
        << "chi: " << c.chi << "\n";
    return 0;
  }
  auto F = parse_foliation(in.text).foliation;
  require_valid(F);
  auto eu = foliated_euler(F);
  print_rational(out, "Eu", eu);
  out << "sign: " << to_char(sign_of(eu)) << "\n";
  std::optional<Ends> ends = F.declared_ends;
  if (ends) {
    out << "ends: " << to_string(*ends) << "\n" << "ends-source: declared\n";
  } else {
    auto est = end_count_estimate(F, o.depth);
    out << "ends: " << to_string(est) << "\n" << "ends-source: estimated (depth " << o.depth << ")\n";
    if (est != EndEstimate::Undetermined) ends = parse_ends(to_string(est));
  }
  if (!ends) {
    out << "cell: undetermined\n";
    return 0;
  }
  auto cell = classify_cell(sign_of(eu), *ends);
  out << "cell: " << cell.label << "\n" << "amenability: " << to_string(cell.amenability) << "\n";
  return 0;
}

inline int do_surgery(const Options& o, std::ostream& out) {
  auto in = read_input(o.file);
  require_kind(in, {Kind::Foliation});
  auto file = parse_foliation(in.text);
  if (file.transversal.empty()) throw Error("no transversal points to graft at; add 'point <pile> <vertex> <measure>' lines");
  const auto& F = file.foliation;
  require_valid(F);
  auto G = graft_handles(F, file.transversal, o.twist);
  auto before = foliated_euler(F), after = foliated_euler(G), mu = transverse_measure(file.transversal);
  out << "T = " << describe(file.transversal, F) << "\n";
  print_rational(out, "mu(T)", mu);
  print_rational(out, "Eu(F)", before);
  print_rational(out, "Eu(F#T)", after);
  bool holds = after == before - 2 * mu;
  out << "graft identity: " << (holds ? "holds" : "fails") << "\n";
  write_output(o, serialize_foliation({G, {}}), out);
  return holds ? 0 : 1;
}

inline void print_reduction(std::ostream& out, const std::string& prefix, const Reduction& r) {
  out << prefix << "volume: " << r.curves.edges.size() << "\n"
      << prefix << "intersection: " << r.intersection << "\n"
      << prefix << "candidates: " << r.candidates << "\n"
      << prefix << "optimal: " << to_string(r.optimal) << "\n"
      << prefix << "edges:";
  for (const auto& [a, b] : r.curves.edges) out << " " << a << "-" << b;
  out << "\n";
}

inline int do_reduce(const Options& o, std::ostream& out) {
  auto in = read_input(o.file);
  require_kind(in, {Kind::Exhaustion, Kind::Surface});
  ReductionOptions opts;
  opts.exact_limit = o.exact_limit;
  if (in.kind == Kind::Surface) {
    auto S = parse_surface(in.text);
    auto r = minimal_reducing_system(S, 1, opts);
    out << "boundary: " << classify_surface(S).boundary_count << "\n";
    print_reduction(out, "", r);
    return 0;
  }
  auto E = parse_exhaustion(in.text);
  require_valid(E);
  auto R = build_reduction_sequence(E, opts);
  auto simple = build_simple_filtration(E, R);
  out << "stages: " << E.domains.size() << "\n" << "ends: " << E.ends << "\n";
  for (std::size_t n = 0; n < R.stages.size(); ++n) {
    std::string p = "stage " + std::to_string(n) + " ";
    print_reduction(out, p, R.stages[n].reduction);
    auto c = classify_surface(simple.surface(n));
    out << p << "simple: genus " << c.genus << ", boundary " << c.boundary_count << "\n";
  }
  out << "nested: " << (is_nested(simple.domains) ? "yes" : "no") << "\n";
  out << "optimal: " << (R.exact() ? "yes" : "heuristic") << "\n";
  return 0;
}

inline int do_decompose(const Options& o, std::ostream& out) {
  auto in = read_input(o.file);
  require_kind(in, {Kind::Foliation});
  auto F = parse_foliation(in.text).foliation;
  require_valid(F);
  auto D = theorem_A_decompose(F);
  auto eu0 = foliated_euler(D.planar);
  out << "T = " << describe(D.transversal, D.planar) << ", Eu(F0) = " << to_string(eu0) << "\n";
  print_rational(out, "mu(T)", transverse_measure(D.transversal));
  print_rational(out, "Eu(F)", foliated_euler(F));
  print_rational(out, "Eu(F0)", eu0);
  bool planar = true;
  for (const auto& p : D.planar.piles) planar = planar && classify_surface(p.base).genus == 0;
  out << "planar: " << (planar ? "yes" : "no") << "\n";
  write_output(o, serialize_foliation({D.planar, D.transversal}), out);
  return 0;
}

inline InduceConfig parse_induce_flag(const std::string& s, int R) {
  if (s.rfind("A=", 0) != 0) throw CLI::ValidationError("--induce", "expected A=<state,...>, got '" + s + "'");
  InduceConfig c;
  c.max_return = R;
  for (const auto& t : io::split(s.substr(2), ',')) {
    try {
      std::size_t used = 0;
      c.subset.push_back(std::stoi(t, &used));
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--induce", "bad state '" + t + "'");
    }
  }
  return c;
}

inline int do_entropy(const Options& o, std::ostream& out, double tol) {
  auto in = read_input(o.file);
  require_kind(in, {Kind::Markov});
  auto file = parse_markov(in.text);
  const auto& M = file.system;
  double h = ks_entropy(M);
  out << "system: " << M.name << "\n" << "states: " << M.size() << "\n" << "h: " << format_real(h) << "\n";
  if (o.block > 0) {
    std::size_t n = o.samples ? o.samples : required_sample(M, o.block);
    out << "block estimate (n=" << o.block << ", samples=" << n << ", seed=" << o.seed
        << "): " << format_real(block_entropy_estimate(M, o.block, n, o.seed)) << "\n";
  }
  std::vector<InduceConfig> runs;
  for (const auto& s : o.induce) runs.push_back(parse_induce_flag(s, o.max_return));
  if (runs.empty()) runs = file.experiments;
  bool ok = true;
  for (const auto& c : runs) {
    auto I = induce(M, c.subset, c.max_return);
    std::string A;
    for (int a : I.subset) A += (A.empty() ? "" : ",") + std::to_string(a);
    double product = I.entropy() * I.measure, bound = I.measure * I.entropy_tail_bound();
    bool within = std::abs(product - h) <= tol + bound;
    ok = ok && within;
    out << "induce A={" << A << "} R=" << c.max_return << "\n"
        << "  mu(A): " << format_real(I.measure) << "\n"
        << "  expected return: " << format_real(I.expected_return()) << "\n"
        << "  1/mu(A): " << format_real(1 / I.measure) << "\n";
    if (M.exact) {
      Rational left;
      auto e = expected_return_exact(M, c.subset, c.max_return, &left);
      print_rational(out, "  expected return (exact)", e);
    }
    out << "  leftover: " << format_real(I.leftover()) << "\n"
        << "  h(gamma_A): " << format_real(I.entropy()) << "\n"
        << "  abramov: " << format_real(product) << "\n"
        << "  truncation bound: " << format_real(bound) << "\n"
        << "  within tolerance: " << (within ? "yes" : "no") << "\n";
  }
  return ok ? 0 : 1;
}

inline int do_product_check(const Options& o, std::ostream& out) {
  auto in = read_input(o.file);
  require_kind(in, {Kind::Foliation});
  auto F = parse_foliation(in.text).foliation;
  auto ps = verify_product_structure(F);
  out << "product: " << (ps.product ? "yes" : "no") << "\n";
  if (!ps.product) {
    out << "reason: " << ps.reason << "\n";
    return 0;
  }
  out << "piles: " << F.piles.size() << "\n";
  for (std::size_t p = 0; p < F.piles.size(); ++p)
    out << "pile " << F.piles[p].name << ": measure " << to_string(F.piles[p].measure) << ", incoming side "
        << (ps.cycle0_incoming[p] ? 0 : 1) << "\n";
  for (const auto& l : ps.links)
    out << "link: " << to_string(l.from, F) << " -> " << to_string(l.to, F) << " measure " << to_string(l.measure)
        << "\n";
  return 0;
}

inline int do_roundtrip(const Options& o, std::ostream& out) {
  auto in = read_input(o.file);
  std::string once, twice;
  bool same = false;
  switch (in.kind) {
    case Kind::Surface: {
      auto a = parse_surface(in.text);
      once = serialize_surface(a);
      auto b = parse_surface(once);
      twice = serialize_surface(b);
      same = a == b;
      break;
    }
    case Kind::Foliation: {
      auto a = parse_foliation(in.text);
      once = serialize_foliation(a);
      auto b = parse_foliation(once);
      twice = serialize_foliation(b);
      same = a == b;
      break;
    }
    case Kind::Exhaustion: {
      auto a = parse_exhaustion(in.text);
      once = serialize_exhaustion(a);
      auto b = parse_exhaustion(once);
      twice = serialize_exhaustion(b);
      same = a.ambient == b.ambient && a.domains == b.domains && a.ends == b.ends;
      break;
    }
    case Kind::Markov: {
      auto a = parse_markov(in.text);
      once = serialize_markov(a);
      auto b = parse_markov(once);
      twice = serialize_markov(b);
      same = a.system.P == b.system.P && a.system.exact == b.system.exact && a.experiments == b.experiments;
      break;
    }
  }
  same = same && once == twice;
  out << "kind: " << to_string(in.kind) << "\n" << "roundtrip: " << (same ? "yes" : "no") << "\n";
  return same ? 0 : 1;
}

inline int do_generate(const Options& o, std::ostream& out) {
  std::string text;
  const auto& f = o.family;
  if (f == "sphere") {
    text = serialize_foliation({sphere_foliation(), {}});
  } else if (f == "annulus-chain") {
    text = serialize_foliation({annulus_chain(o.size, 1, Rational(1, 3), 4, 2), {}});
  } else if (f == "graft") {
    auto F = annulus_chain(o.size, 1, Rational(1, 3), 4, 2);
    TransversalSpec T;
    for (std::size_t p = 0; p < F.piles.size(); ++p) T.points.push_back({p, 4, Rational(1, 2)});
    text = serialize_foliation({F, T});
  } else if (f == "grid") {
    text = serialize_foliation({four_holed_grid(1, Rational(1, 3), Rational(1, 5)), {}});
  } else if (f == "exhaustion") {
    text = serialize_exhaustion(genus_growing_exhaustion(o.size, o.ends));
  } else if (f == "golden") {
    text = serialize_markov({golden_mean(), {{{1}, 64}}});
  } else if (f == "coin") {
    text = serialize_markov({bernoulli({Rational(1, 2), Rational(1, 2)}), {{{0}, 64}}});
  } else if (f == "tower") {
    text = serialize_markov({alternating_tower(Rational(1, 2)), {{{0}, 64}, {{0, 2}, 64}}});
  } else {
    throw CLI::ValidationError("family", "unknown family '" + f +
                                             "'; expected sphere, annulus-chain, graft, grid, exhaustion, golden, "
                                             "coin or tower");
  }
  if (o.output.empty() || o.output == "-") {
    out << text;
  } else {
    write_output(o, text, out);
  }
  return 0;
}

// ---- driver ----------------------------------------------------------------

inline std::string verb_list() {
  std::string s;
  for (const auto& v : verbs()) s += (s.empty() ? "" : ", ") + v;
  return s;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << "usage: mfol <verb> [options] <file>\nverbs: " << verb_list() << "\n";
    return 2;
  }
  if (args[0] != "-h" && args[0] != "--help" &&
      std::find(verbs().begin(), verbs().end(), args[0]) == verbs().end()) {
    err << "unknown verb '" << args[0] << "'; valid verbs: " << verb_list() << "\n";
    return 2;
  }
  CLI::App app{"Measured foliations by surfaces on finite triangulated models", "mfol"};
  app.require_subcommand(1);
  Options o;
  auto file_arg = [&](CLI::App* sub) { sub->add_option("file", o.file, "input model file")->required(); };
  auto out_arg = [&](CLI::App* sub) { sub->add_option("-o,--output", o.output, "write the resulting model ('-' for stdout)"); };

  auto* validate = app.add_subcommand("validate", "check a model file and list violations");
  file_arg(validate);
  auto* eu = app.add_subcommand("eu", "foliated Euler characteristic");
  file_arg(eu);
  auto* classify = app.add_subcommand("classify", "surface type, or table cell of a foliation");
  file_arg(classify);
  classify->add_option("--depth", o.depth, "leaf exploration depth for end estimates")->check(CLI::Range(3, 200));
  auto* surgery = app.add_subcommand("surgery", "graft handles at the transversal points of a foliation");
  file_arg(surgery);
  out_arg(surgery);
  surgery->add_option("--twist", o.twist, "rotation of each handle gluing")->check(CLI::Range(0, 64));
  auto* reduce = app.add_subcommand("reduce", "minimal reducing systems and simple filtration");
  file_arg(reduce);
  reduce->add_option("--exact-limit", o.exact_limit, "largest candidate count searched exactly")
      ->check(CLI::Range(0, 200));
  auto* decompose = app.add_subcommand("decompose", "planar foliation plus transversal");
  file_arg(decompose);
  out_arg(decompose);
  auto* entropy = app.add_subcommand("entropy", "entropy, induced maps and the Abramov product");
  file_arg(entropy);
  entropy->add_option("--induce", o.induce, "subset to induce on, A=<state,...> (repeatable)");
  entropy->add_option("--R", o.max_return, "maximum return time")->check(CLI::Range(1, 100000));
  entropy->add_option("--block", o.block, "block length for the sampled estimate")->check(CLI::Range(1, 24));
  entropy->add_option("--samples", o.samples, "sample length for the block estimate");
  entropy->add_option("--seed", o.seed, "seed for the block estimate");
  entropy->add_option("--tolerance", o.tolerance, "absolute tolerance")->check(CLI::PositiveNumber);
  auto* product = app.add_subcommand("product-check", "product structure of a foliation by annuli");
  file_arg(product);
  auto* roundtrip = app.add_subcommand("roundtrip", "parse, serialize and parse again");
  file_arg(roundtrip);
  auto* generate = app.add_subcommand("generate", "write a sample model");
  generate->add_option("family", o.family, "sphere, annulus-chain, graft, grid, exhaustion, golden, coin, tower")
      ->required();
  generate->add_option("--size", o.size, "piles or stages")->check(CLI::Range(1, 12));
  generate->add_option("--ends", o.ends, "ends of an exhaustion")->check(CLI::IsMember({1, 2}));
  out_arg(generate);

  std::vector<const char*> argv{"mfol"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  try {
    auto* sub = app.get_subcommands().front();
    const auto& v = sub->get_name();
    if (v == "validate") return do_validate(o, out);
    if (v == "eu") return do_eu(o, out);
    if (v == "classify") return do_classify(o, out);
    if (v == "surgery") return do_surgery(o, out);
    if (v == "reduce") return do_reduce(o, out);
    if (v == "decompose") return do_decompose(o, out);
    if (v == "entropy") return do_entropy(o, out, o.tolerance ? *o.tolerance : default_tolerance());
    if (v == "product-check") return do_product_check(o, out);
    if (v == "roundtrip") return do_roundtrip(o, out);
    if (v == "generate") return do_generate(o, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mfol::cli
