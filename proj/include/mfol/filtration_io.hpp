#pragma once

// Exhaustion files: one surface section for the ambient surface, then
//
//   exhaust <surface> ends=<1|2>
//   stage <n> tris=<id>,<id>,...
//
// Stages are numbered from 0 without gaps.

#include "mfol/filtration.hpp"
#include "mfol/surface_io.hpp"

namespace mfol {

inline void write_exhaustion(std::ostream& out, const Exhaustion& E) {
  write_surface(out, E.ambient);
  out << "exhaust " << E.ambient.name << " ends=" << E.ends << "\n";
  for (std::size_t n = 0; n < E.domains.size(); ++n) {
    out << "stage " << n << " tris=";
    for (std::size_t i = 0; i < E.domains[n].size(); ++i) out << (i ? "," : "") << E.domains[n][i];
    out << "\n";
  }
}

inline std::string serialize_exhaustion(const Exhaustion& E) {
  std::ostringstream out;
  write_exhaustion(out, E);
  return out.str();
}

inline Exhaustion parse_exhaustion(std::string_view text) {
  auto lines = io::tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty exhaustion file");
  std::map<std::string, TriangulatedSurface> surfaces;
  std::optional<io::SurfaceSection> section;
  auto close_section = [&] {
    if (!section) return;
    surfaces[section->name()] = section->finish();
    section.reset();
  };
  std::optional<io::Line> header;
  std::map<std::size_t, std::pair<std::vector<std::size_t>, std::size_t>> stages;
  for (const auto& line : lines) {
    const auto& kw = line.tokens[0];
    if (section && section->accept(line)) continue;
    if (kw == "tri" || kw == "glue") throw ParseError(line.number, "'" + kw + "' outside a surface section");
    close_section();
    if (kw == "surface") {
      io::expect_arity(line, 2);
      if (surfaces.count(line.tokens[1])) throw ParseError(line.number, "duplicate surface '" + line.tokens[1] + "'");
      section.emplace(line.tokens[1], line.number);
    } else if (kw == "exhaust") {
      io::expect_arity(line, 3);
      if (header) throw ParseError(line.number, "second 'exhaust' line");
      header = line;
    } else if (kw == "stage") {
      io::expect_arity(line, 3);
      auto n = io::parse_int<std::size_t>(line, line.tokens[1]);
      std::vector<std::size_t> tris;
      for (const auto& t : io::split(io::keyed(line, line.tokens[2], "tris"), ','))
        tris.push_back(io::parse_int<std::size_t>(line, t));
      std::sort(tris.begin(), tris.end());
      if (!stages.emplace(n, std::make_pair(std::move(tris), line.number)).second)
        throw ParseError(line.number, "duplicate stage " + std::to_string(n));
    } else {
      throw ParseError(line.number, "unknown keyword '" + kw + "'");
    }
  }
  close_section();
  if (!header) throw ParseError(lines.back().number, "missing 'exhaust <surface> ends=<1|2>' line");
  Exhaustion E;
  auto it = surfaces.find(header->tokens[1]);
  if (it == surfaces.end()) throw ParseError(header->number, "unknown surface '" + header->tokens[1] + "'");
  E.ambient = it->second;
  E.ends = io::parse_int<int>(*header, io::keyed(*header, header->tokens[2], "ends"));
  if (E.ends != 1 && E.ends != 2) throw ParseError(header->number, "ends must be 1 or 2");
  std::size_t expected = 0;
  for (auto& [n, st] : stages) {
    if (n != expected++) throw ParseError(st.second, "stages must be numbered 0.." + std::to_string(stages.size() - 1));
    for (auto t : st.first)
      if (t >= E.ambient.triangles.size()) throw ParseError(st.second, "stage refers to missing triangle " + std::to_string(t));
    E.domains.push_back(st.first);
  }
  if (E.domains.empty()) throw ParseError(header->number, "no stages");
  return E;
}

}  // namespace mfol
