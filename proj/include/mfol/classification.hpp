#pragma once

// The table of ergodic measured foliations by surfaces, indexed by the sign
// of the foliated Euler characteristic and the number of ends of a generic leaf.

#include "mfol/foliation.hpp"

namespace mfol {

enum class Sign { Positive, Zero, Negative };

inline Sign sign_of(const Rational& x) { return x > 0 ? Sign::Positive : x < 0 ? Sign::Negative : Sign::Zero; }

inline char to_char(Sign s) { return s == Sign::Positive ? '+' : s == Sign::Zero ? '0' : '-'; }

enum class Amenability { Amenable, NonAmenable, Both, Empty };

inline std::string to_string(Amenability a) {
  switch (a) {
    case Amenability::Amenable: return "amenable";
    case Amenability::NonAmenable: return "non-amenable";
    case Amenability::Both: return "amenable or non-amenable";
    case Amenability::Empty: return "empty";
  }
  return "?";
}

struct Cell {
  std::string label;
  Amenability amenability;
  bool empty() const { return amenability == Amenability::Empty; }
  bool operator==(const Cell&) const = default;
};

inline Cell classify_cell(Sign eu, Ends ends) {
  static const std::string empty = "∅";
  switch (ends) {
    case Ends::Zero:
      if (eu == Sign::Positive) return {"Σ⁰ (sphere)", Amenability::Amenable};
      if (eu == Sign::Zero) return {"Σ¹ (torus)", Amenability::Amenable};
      return {"Σ^g (g ≥ 2)", Amenability::Amenable};
    case Ends::One:
      if (eu == Sign::Positive) return {empty, Amenability::Empty};
      if (eu == Sign::Zero) return {"Φ(ℂ)", Amenability::Amenable};
      return {"Φ(ℂ)#_T | N.M. (non-amenable)", Amenability::Both};
    case Ends::Two:
      if (eu == Sign::Positive) return {empty, Amenability::Empty};
      if (eu == Sign::Zero) return {"Φ(ℝ)×ℝ/ℤ", Amenability::Amenable};
      return {"(Φ(ℝ)×ℝ/ℤ)#_T", Amenability::Amenable};
    case Ends::Infinite:
      if (eu == Sign::Negative) return {"N.M. (non-amenable)", Amenability::NonAmenable};
      return {empty, Amenability::Empty};
  }
  return {empty, Amenability::Empty};
}

inline std::optional<Ends> parse_ends(std::string_view s) {
  if (s == "0") return Ends::Zero;
  if (s == "1") return Ends::One;
  if (s == "2") return Ends::Two;
  if (s == "inf" || s == "∞") return Ends::Infinite;
  return std::nullopt;
}

inline std::optional<Sign> parse_sign(std::string_view s) {
  if (s == "+" || s == "pos") return Sign::Positive;
  if (s == "0" || s == "zero") return Sign::Zero;
  if (s == "-" || s == "neg" || s == "−") return Sign::Negative;
  return std::nullopt;
}

}  // namespace mfol
