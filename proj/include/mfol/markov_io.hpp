#pragma once

// Markov files:
//
//   markov <name>
//   row <state> <p0> <p1> ...        rationals ("1/3") or decimals ("0.25")
//   induce A=<s,s,...> R=<int>       optional experiment lines
//
// A system whose entries are all rationals keeps its exact matrix.

#include "mfol/entropy.hpp"
#include "mfol/surface_io.hpp"

#include <cstdio>
#include <cstdlib>

namespace mfol {

struct InduceConfig {
  std::vector<int> subset;
  int max_return = 0;
  bool operator==(const InduceConfig&) const = default;
};

struct MarkovFile {
  MarkovSystem system;
  std::vector<InduceConfig> experiments;
};

inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_markov(std::ostream& out, const MarkovFile& file) {
  const auto& M = file.system;
  out << "markov " << M.name << "\n";
  for (int i = 0; i < M.size(); ++i) {
    out << "row " << i;
    for (int j = 0; j < M.size(); ++j) out << " " << (M.exact ? to_string((*M.exact)[i][j]) : format_real(M.P(i, j)));
    out << "\n";
  }
  for (const auto& e : file.experiments) {
    out << "induce A=";
    for (std::size_t k = 0; k < e.subset.size(); ++k) out << (k ? "," : "") << e.subset[k];
    out << " R=" << e.max_return << "\n";
  }
}

inline std::string serialize_markov(const MarkovFile& file) {
  std::ostringstream out;
  write_markov(out, file);
  return out.str();
}

inline MarkovFile parse_markov(std::string_view text) {
  auto lines = io::tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty markov file");
  if (lines[0].tokens[0] != "markov") throw ParseError(lines[0].number, "expected 'markov <name>'");
  io::expect_arity(lines[0], 2);
  std::string name = lines[0].tokens[1];
  std::map<int, std::pair<std::vector<std::string>, std::size_t>> rows;
  std::vector<std::pair<InduceConfig, std::size_t>> experiments;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& line = lines[k];
    const auto& kw = line.tokens[0];
    if (kw == "row") {
      if (line.tokens.size() < 3) throw ParseError(line.number, "'row' needs a state and at least one entry");
      int s = io::parse_int<int>(line, line.tokens[1]);
      if (!rows.emplace(s, std::make_pair(std::vector<std::string>(line.tokens.begin() + 2, line.tokens.end()), line.number))
               .second)
        throw ParseError(line.number, "duplicate row " + std::to_string(s));
    } else if (kw == "induce") {
      io::expect_arity(line, 3);
      InduceConfig c;
      for (const auto& t : io::split(io::keyed(line, line.tokens[1], "A"), ','))
        c.subset.push_back(io::parse_int<int>(line, t));
      c.max_return = io::parse_int<int>(line, io::keyed(line, line.tokens[2], "R"));
      if (c.max_return < 1) throw ParseError(line.number, "R must be at least 1");
      experiments.emplace_back(std::move(c), line.number);
    } else if (kw == "markov") {
      throw ParseError(line.number, "second 'markov' line");
    } else {
      throw ParseError(line.number, "unknown keyword '" + kw + "'");
    }
  }
  if (rows.empty()) throw ParseError(lines.back().number, "no rows");
  const int n = static_cast<int>(rows.size());
  int expected = 0;
  bool exact = true;
  for (auto& [s, row] : rows) {
    if (s != expected++) throw ParseError(row.second, "states must be numbered 0.." + std::to_string(n - 1));
    if (static_cast<int>(row.first.size()) != n)
      throw ParseError(row.second, "row " + std::to_string(s) + " has " + std::to_string(row.first.size()) +
                                       " entries for " + std::to_string(n) + " states");
    for (const auto& tok : row.first)
      if (tok.find_first_of(".eE") != std::string::npos) exact = false;
  }
  MarkovFile file;
  try {
    if (exact) {
      std::vector<std::vector<Rational>> P;
      for (auto& [s, row] : rows) {
        P.emplace_back();
        for (const auto& tok : row.first) {
          try {
            P.back().push_back(parse_rational(tok));
          } catch (const std::invalid_argument&) {
            throw ParseError(row.second, "bad probability '" + tok + "'");
          }
        }
      }
      file.system = make_markov(name, P);
    } else {
      Eigen::MatrixXd P(n, n);
      for (auto& [s, row] : rows)
        for (int j = 0; j < n; ++j) {
          const auto& tok = row.first[j];
          char* end = nullptr;
          P(s, j) = std::strtod(tok.c_str(), &end);
          if (end != tok.c_str() + tok.size()) throw ParseError(row.second, "bad probability '" + tok + "'");
        }
      file.system = make_markov(name, P);
    }
  } catch (const ValidationError& e) {
    throw ParseError(lines[0].number, e.what());
  }
  for (auto& [c, number] : experiments) {
    for (int a : c.subset)
      if (a < 0 || a >= n) throw ParseError(number, "state " + std::to_string(a) + " out of range");
    file.experiments.push_back(std::move(c));
  }
  return file;
}

}  // namespace mfol
