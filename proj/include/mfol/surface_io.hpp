#pragma once

// Line-oriented text formats. A surface section is
//
//   surface <name>
//   tri <id> <v0> <v1> <v2>
//   glue <t,s> <t',s'>
//
// Lines are whitespace separated and may come in any order after the
// header; '#' starts a comment. Serialization is canonical: triangles by id,
// gluings by their smaller side.

#include "mfol/surface.hpp"

#include <charconv>
#include <sstream>
#include <string_view>

namespace mfol {

namespace io {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    for (std::string tok; ls >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

template <typename Int>
Int parse_int(const Line& line, std::string_view tok) {
  Int value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line.number, "expected an integer, got '" + std::string(tok) + "'");
  return value;
}

inline void expect_arity(const Line& line, std::size_t n) {
  if (line.tokens.size() != n)
    throw ParseError(line.number, "'" + line.tokens[0] + "' expects " + std::to_string(n - 1) + " fields, got " +
                                      std::to_string(line.tokens.size() - 1));
}

/// Splits "key=value"; throws if the key does not match.
inline std::string keyed(const Line& line, std::string_view tok, std::string_view key) {
  auto eq = tok.find('=');
  if (eq == std::string_view::npos || tok.substr(0, eq) != key)
    throw ParseError(line.number, "expected '" + std::string(key) + "=...', got '" + std::string(tok) + "'");
  return std::string(tok.substr(eq + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline SideRef parse_side(const Line& line, std::string_view tok) {
  auto parts = split(tok, ',');
  if (parts.size() != 2) throw ParseError(line.number, "expected side '<t,s>', got '" + std::string(tok) + "'");
  SideRef r{parse_int<std::size_t>(line, parts[0]), parse_int<int>(line, parts[1])};
  if (r.side < 0 || r.side > 2) throw ParseError(line.number, "side index must be 0, 1 or 2");
  return r;
}

/// Accumulates tri/glue lines for one surface section.
class SurfaceSection {
 public:
  SurfaceSection(std::string name, std::size_t header_line) : name_(std::move(name)), header_(header_line) {}

  const std::string& name() const { return name_; }

  bool accept(const Line& line) {
    const auto& kw = line.tokens[0];
    if (kw == "tri") {
      expect_arity(line, 5);
      auto id = parse_int<std::size_t>(line, line.tokens[1]);
      std::array<VertexId, 3> tri{parse_int<VertexId>(line, line.tokens[2]), parse_int<VertexId>(line, line.tokens[3]),
                                  parse_int<VertexId>(line, line.tokens[4])};
      if (!tris_.emplace(id, std::make_pair(tri, line.number)).second)
        throw ParseError(line.number, "duplicate triangle id " + std::to_string(id));
      return true;
    }
    if (kw == "glue") {
      expect_arity(line, 3);
      glues_.push_back({parse_side(line, line.tokens[1]), parse_side(line, line.tokens[2]), line.number});
      return true;
    }
    return false;
  }

  TriangulatedSurface finish() const {
    TriangulatedSurface S;
    S.name = name_;
    std::size_t expected = 0;
    for (const auto& [id, tri] : tris_) {
      if (id != expected)
        throw ParseError(tri.second, "triangle ids of '" + name_ + "' must be 0.." + std::to_string(tris_.size() - 1));
      S.triangles.push_back(tri.first);
      ++expected;
    }
    if (S.triangles.empty()) throw ParseError(header_, "surface '" + name_ + "' has no triangles");
    S.gluing.assign(S.triangles.size(), {});
    for (const auto& g : glues_) {
      for (auto r : {g.a, g.b})
        if (r.tri >= S.triangles.size())
          throw ParseError(g.line, "glue refers to missing triangle " + std::to_string(r.tri));
      if (S.gluing[g.a.tri][g.a.side] || S.gluing[g.b.tri][g.b.side])
        throw ParseError(g.line, "side glued twice");
      if (g.a == g.b) throw ParseError(g.line, "side glued to itself");
      glue_sides(S, g.a, g.b);
    }
    return S;
  }

 private:
  struct Glue {
    SideRef a, b;
    std::size_t line;
  };
  std::string name_;
  std::size_t header_;
  std::map<std::size_t, std::pair<std::array<VertexId, 3>, std::size_t>> tris_;
  std::vector<Glue> glues_;
};

}  // namespace io

inline void write_surface(std::ostream& out, const TriangulatedSurface& S) {
  out << "surface " << S.name << "\n";
  for (std::size_t t = 0; t < S.triangles.size(); ++t) {
    const auto& v = S.triangles[t];
    out << "tri " << t << " " << v[0] << " " << v[1] << " " << v[2] << "\n";
  }
  for (std::size_t t = 0; t < S.triangles.size(); ++t)
    for (int s = 0; s < 3; ++s)
      if (auto g = S.gluing[t][s]; g && SideRef{t, s} < *g)
        out << "glue " << t << "," << s << " " << g->tri << "," << g->side << "\n";
}

inline std::string serialize_surface(const TriangulatedSurface& S) {
  std::ostringstream out;
  write_surface(out, S);
  return out.str();
}

/// Parses a file holding exactly one surface section.
inline TriangulatedSurface parse_surface(std::string_view text) {
  auto lines = io::tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty surface file");
  if (lines[0].tokens[0] != "surface") throw ParseError(lines[0].number, "expected 'surface <name>' header");
  io::expect_arity(lines[0], 2);
  io::SurfaceSection sec(lines[0].tokens[1], lines[0].number);
  for (std::size_t i = 1; i < lines.size(); ++i)
    if (!sec.accept(lines[i])) throw ParseError(lines[i].number, "unknown keyword '" + lines[i].tokens[0] + "'");
  return sec.finish();
}

}  // namespace mfol
