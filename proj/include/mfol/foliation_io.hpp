#pragma once

// Foliation files extend the surface format:
//
//   foliation <name>
//   ends <0|1|2|inf>                        optional
//   surface <sname>  + tri/glue lines       one section per distinct base
//   pile <name> <measure> <sname>
//   blocks <pile>.<cycle> <id>=<measure> ... cycles without a line hold one block "a"
//   match <pile>.<cycle>.<id> <pile>.<cycle>.<id> twist=<k>
//   point <pile> <vertex> <measure>         transversal entries, optional
//
// Pile names may contain dots; references are split from the right.

#include "mfol/foliation.hpp"
#include "mfol/surface_io.hpp"

namespace mfol {

struct FoliationFile {
  PrismaticFoliation foliation;
  TransversalSpec transversal;
  bool operator==(const FoliationFile& o) const {
    return foliation == o.foliation && transversal.points == o.transversal.points;
  }
};

namespace io {

inline std::pair<std::string, std::size_t> parse_cycle_ref(const Line& line, std::string_view tok) {
  auto dot = tok.rfind('.');
  if (dot == std::string_view::npos || dot == 0)
    throw ParseError(line.number, "expected '<pile>.<cycle>', got '" + std::string(tok) + "'");
  return {std::string(tok.substr(0, dot)), parse_int<std::size_t>(line, tok.substr(dot + 1))};
}

inline std::tuple<std::string, std::size_t, std::string> parse_block_ref(const Line& line, std::string_view tok) {
  auto dot = tok.rfind('.');
  if (dot == std::string_view::npos || dot == 0)
    throw ParseError(line.number, "expected '<pile>.<cycle>.<block>', got '" + std::string(tok) + "'");
  auto [pile, cycle] = parse_cycle_ref(line, tok.substr(0, dot));
  return {pile, cycle, std::string(tok.substr(dot + 1))};
}

inline Rational parse_measure(const Line& line, std::string_view tok) {
  try {
    return parse_rational(tok);
  } catch (const std::exception&) {
    throw ParseError(line.number, "bad rational '" + std::string(tok) + "'");
  }
}

}  // namespace io

inline void write_foliation(std::ostream& out, const FoliationFile& file) {
  const auto& F = file.foliation;
  out << "foliation " << F.name << "\n";
  if (F.declared_ends) out << "ends " << to_string(*F.declared_ends) << "\n";
  // Distinct bases in first-use order; clashing names get a numeric suffix.
  std::vector<const TriangulatedSurface*> bases;
  std::vector<std::string> base_names;
  std::vector<std::size_t> base_of(F.piles.size());
  std::set<std::string> used_names;
  for (std::size_t p = 0; p < F.piles.size(); ++p) {
    const auto& b = F.piles[p].base;
    auto it = std::find_if(bases.begin(), bases.end(), [&](const TriangulatedSurface* x) { return *x == b; });
    if (it != bases.end()) {
      base_of[p] = static_cast<std::size_t>(it - bases.begin());
      continue;
    }
    std::string name = b.name.empty() ? "base" : b.name;
    for (int k = 2; used_names.count(name); ++k) name = b.name + "_" + std::to_string(k);
    used_names.insert(name);
    base_of[p] = bases.size();
    bases.push_back(&b);
    base_names.push_back(name);
  }
  for (std::size_t i = 0; i < bases.size(); ++i) {
    auto S = *bases[i];
    S.name = base_names[i];
    write_surface(out, S);
  }
  for (std::size_t p = 0; p < F.piles.size(); ++p)
    out << "pile " << F.piles[p].name << " " << to_string(F.piles[p].measure) << " " << base_names[base_of[p]] << "\n";
  for (std::size_t p = 0; p < F.piles.size(); ++p)
    for (std::size_t c = 0; c < F.piles[p].blocks.size(); ++c) {
      const auto& bl = F.piles[p].blocks[c];
      if (bl.size() == 1 && bl[0].id == "a" && bl[0].measure == F.piles[p].measure) continue;
      out << "blocks " << F.piles[p].name << "." << c;
      for (const auto& b : bl) out << " " << b.id << "=" << to_string(b.measure);
      out << "\n";
    }
  for (const auto& g : F.gluings)
    out << "match " << to_string(g.a, F) << " " << to_string(g.b, F) << " twist=" << g.twist << "\n";
  for (const auto& pt : file.transversal.points)
    out << "point " << F.piles.at(pt.pile).name << " " << pt.vertex << " " << to_string(pt.measure) << "\n";
}

inline std::string serialize_foliation(const FoliationFile& file) {
  std::ostringstream out;
  write_foliation(out, file);
  return out.str();
}

inline FoliationFile parse_foliation(std::string_view text) {
  auto lines = io::tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty foliation file");
  if (lines[0].tokens[0] != "foliation") throw ParseError(lines[0].number, "expected 'foliation <name>' header");
  io::expect_arity(lines[0], 2);
  FoliationFile file;
  auto& F = file.foliation;
  F.name = lines[0].tokens[1];
  std::map<std::string, TriangulatedSurface> surfaces;
  std::optional<io::SurfaceSection> section;
  auto close_section = [&] {
    if (!section) return;
    surfaces[section->name()] = section->finish();
    section.reset();
  };
  std::vector<io::Line> piles, blocks, matches, points;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto& kw = line.tokens[0];
    if (section && section->accept(line)) continue;
    if (kw == "tri" || kw == "glue") throw ParseError(line.number, "'" + kw + "' outside a surface section");
    close_section();
    if (kw == "surface") {
      io::expect_arity(line, 2);
      if (surfaces.count(line.tokens[1])) throw ParseError(line.number, "duplicate surface '" + line.tokens[1] + "'");
      section.emplace(line.tokens[1], line.number);
    } else if (kw == "ends") {
      io::expect_arity(line, 2);
      const auto& v = line.tokens[1];
      if (v == "0") F.declared_ends = Ends::Zero;
      else if (v == "1") F.declared_ends = Ends::One;
      else if (v == "2") F.declared_ends = Ends::Two;
      else if (v == "inf") F.declared_ends = Ends::Infinite;
      else throw ParseError(line.number, "ends must be 0, 1, 2 or inf");
    } else if (kw == "pile") {
      piles.push_back(line);
    } else if (kw == "blocks") {
      blocks.push_back(line);
    } else if (kw == "match") {
      matches.push_back(line);
    } else if (kw == "point") {
      points.push_back(line);
    } else {
      throw ParseError(line.number, "unknown keyword '" + kw + "'");
    }
  }
  close_section();
  std::map<std::string, std::size_t> pile_index;
  for (const auto& line : piles) {
    io::expect_arity(line, 4);
    auto it = surfaces.find(line.tokens[3]);
    if (it == surfaces.end()) throw ParseError(line.number, "unknown surface '" + line.tokens[3] + "'");
    if (pile_index.count(line.tokens[1])) throw ParseError(line.number, "duplicate pile '" + line.tokens[1] + "'");
    auto m = io::parse_measure(line, line.tokens[2]);
    if (m <= 0) throw ParseError(line.number, "pile measure must be positive");
    try {
      pile_index[line.tokens[1]] = F.piles.size();
      F.piles.push_back(make_pile(line.tokens[1], it->second, m));
    } catch (const Error& e) {
      throw ParseError(line.number, e.what());
    }
  }
  auto pile_of = [&](const io::Line& line, const std::string& name) {
    auto it = pile_index.find(name);
    if (it == pile_index.end()) throw ParseError(line.number, "unknown pile '" + name + "'");
    return it->second;
  };
  for (const auto& line : blocks) {
    if (line.tokens.size() < 3) throw ParseError(line.number, "'blocks' needs a cycle and at least one block");
    auto [pname, c] = io::parse_cycle_ref(line, line.tokens[1]);
    auto p = pile_of(line, pname);
    if (c >= F.piles[p].blocks.size()) throw ParseError(line.number, "pile '" + pname + "' has no cycle " + std::to_string(c));
    std::vector<Block> bl;
    for (std::size_t k = 2; k < line.tokens.size(); ++k) {
      auto eq = line.tokens[k].find('=');
      if (eq == std::string::npos || eq == 0) throw ParseError(line.number, "expected '<id>=<measure>', got '" + line.tokens[k] + "'");
      bl.push_back({line.tokens[k].substr(0, eq), io::parse_measure(line, std::string_view(line.tokens[k]).substr(eq + 1))});
    }
    F.piles[p].blocks[c] = std::move(bl);
  }
  for (const auto& line : matches) {
    if (line.tokens.size() != 3 && line.tokens.size() != 4) throw ParseError(line.number, "'match' expects two blocks and an optional twist");
    auto ref = [&](std::string_view tok) {
      auto [pname, c, id] = io::parse_block_ref(line, tok);
      return BlockRef{pile_of(line, pname), c, id};
    };
    int twist = line.tokens.size() == 4 ? io::parse_int<int>(line, io::keyed(line, line.tokens[3], "twist")) : 0;
    F.gluings.push_back({ref(line.tokens[1]), ref(line.tokens[2]), twist});
  }
  for (const auto& line : points) {
    io::expect_arity(line, 4);
    file.transversal.points.push_back(
        {pile_of(line, line.tokens[1]), io::parse_int<VertexId>(line, line.tokens[2]), io::parse_measure(line, line.tokens[3])});
  }
  return file;
}

}  // namespace mfol
