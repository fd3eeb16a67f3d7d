#pragma once

// Ready-made prismatic foliations: closed piles, rotation chains of annuli and
// planar grids of four-holed spheres. Gluings by a rotation of the vertical
// use two blocks per glued circle.

#include "mfol/builders.hpp"
#include "mfol/foliation.hpp"

namespace mfol {

/// Glues cycle ca of pile a to cycle cb of pile b so that height t leaves a
/// and enters b at t + alpha (mod m). Both cycles must still be one full block.
inline void add_rotation(PrismaticFoliation& F, std::size_t a, std::size_t ca, std::size_t b, std::size_t cb,
                         const Rational& alpha) {
  const Rational m = F.piles.at(a).measure;
  if (F.piles.at(b).measure != m) throw PreconditionError("add_rotation: piles have different measures");
  if (alpha <= 0 || alpha >= m) throw PreconditionError("add_rotation: shift must lie strictly inside (0, m)");
  auto& A = F.piles[a].blocks.at(ca);
  auto& B = F.piles[b].blocks.at(cb);
  if (A.size() != 1 || B.size() != 1) throw PreconditionError("add_rotation: cycle already split");
  A = {Block{"x", m - alpha}, Block{"y", alpha}};
  B = {Block{"p", alpha}, Block{"q", m - alpha}};
  F.gluings.push_back({{a, ca, "x"}, {b, cb, "q"}, 0});
  F.gluings.push_back({{a, ca, "y"}, {b, cb, "p"}, 0});
}

/// Glues two full blocks directly: height t goes to height t.
inline void add_identity(PrismaticFoliation& F, std::size_t a, std::size_t ca, std::size_t b, std::size_t cb) {
  const auto& A = F.piles.at(a).blocks.at(ca);
  const auto& B = F.piles.at(b).blocks.at(cb);
  if (A.size() != 1 || B.size() != 1) throw PreconditionError("add_identity: cycle already split");
  F.gluings.push_back({{a, ca, A[0].id}, {b, cb, B[0].id}, 0});
}

inline PrismaticFoliation closed_foliation(std::string name, TriangulatedSurface base, Rational m) {
  PrismaticFoliation F{std::move(name), {}, {}, Ends::Zero};
  F.piles.push_back(make_pile("P0", std::move(base), std::move(m)));
  return F;
}

inline PrismaticFoliation sphere_foliation(Rational m = 1) { return closed_foliation("sphere", tetrahedron_boundary(), m); }

/// A chain of n annulus piles, each outer circle glued to the next inner
/// circle; the last link closes up through a rotation by alpha. Leaves are
/// long cylinders: two ends at any depth below half the orbit length.
inline PrismaticFoliation annulus_chain(int n, Rational m, Rational alpha, int circumference = 4, int rows = 1) {
  if (n < 1) throw PreconditionError("annulus_chain: need at least one pile");
  PrismaticFoliation F{"annulus-chain", {}, {}, Ends::Two};
  for (int i = 0; i < n; ++i) {
    auto base = grid_annulus(circumference, rows);
    base.name = "annulus";
    F.piles.push_back(make_pile("A" + std::to_string(i), base, m));
  }
  for (int i = 0; i + 1 < n; ++i) add_identity(F, i, 1, i + 1, 0);
  add_rotation(F, n - 1, 1, 0, 0, alpha);
  return F;
}

/// One four-holed sphere pile whose opposite circles are glued by two
/// independent rotations: generic leaves are grids of four-holed spheres (one end).
inline PrismaticFoliation four_holed_grid(Rational m, Rational alpha, Rational beta) {
  PrismaticFoliation F{"four-holed-grid", {}, {}, Ends::One};
  F.piles.push_back(make_pile("Q", orientable_surface(0, 4), m));
  add_rotation(F, 0, 0, 0, 1, alpha);
  add_rotation(F, 0, 2, 0, 3, beta);
  return F;
}

}  // namespace mfol
