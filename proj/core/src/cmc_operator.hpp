#pragma once

// Staggered-face discretization of Div(grad u / W) shared by the residual
// evaluation and the Newton Jacobian.
//
// Face fluxes use the normal difference across the face and the average of
// the two adjacent central differences along it, so a face flux is the same
// seen from either side and the operator telescopes over any node set.

#include <cmath>
#include <cstddef>
#include <type_traits>

#include "cmclab/grid.hpp"

namespace cmclab::detail {

struct StencilTap {
  int di;
  int dj;
  double weight;  // in units of 1/h
};

struct FaceStencil {
  double sign;  // contribution of the face flux to the divergence, units of 1/h
  StencilTap normal[2];
  StencilTap tangential[4];
};

inline constexpr FaceStencil kFaces[4] = {
    // east
    {+1.0, {{1, 0, 1.0}, {0, 0, -1.0}}, {{0, 1, 0.25}, {1, 1, 0.25}, {0, -1, -0.25}, {1, -1, -0.25}}},
    // west
    {-1.0, {{0, 0, 1.0}, {-1, 0, -1.0}}, {{-1, 1, 0.25}, {0, 1, 0.25}, {-1, -1, -0.25}, {0, -1, -0.25}}},
    // north
    {+1.0, {{0, 1, 1.0}, {0, 0, -1.0}}, {{1, 0, 0.25}, {1, 1, 0.25}, {-1, 0, -0.25}, {-1, 1, -0.25}}},
    // south
    {-1.0, {{0, 0, 1.0}, {0, -1, -1.0}}, {{1, -1, 0.25}, {1, 0, 0.25}, {-1, -1, -0.25}, {-1, 0, -0.25}}},
};

/// Residual (Div(grad u/W) - 2H) at interior node (i, j). `sink(idx, d)` is
/// called with dR/du for each of the nine stencil nodes when non-null.
template <class Sink>
double node_residual(const Grid& g, const double* u, int i, int j, double H, Sink&& sink) {
  const double h = g.h();
  double div = 0.0;
  for (const FaceStencil& face : kFaces) {
    double pn = 0.0;
    double pt = 0.0;
    for (const StencilTap& t : face.normal) pn += t.weight * u[g.index(i + t.di, j + t.dj)];
    for (const StencilTap& t : face.tangential) pt += t.weight * u[g.index(i + t.di, j + t.dj)];
    pn /= h;
    pt /= h;
    const double w2 = 1.0 + pn * pn + pt * pt;
    const double w = std::sqrt(w2);
    const double w3 = w2 * w;
    div += face.sign * (pn / w);
    if constexpr (!std::is_same_v<std::decay_t<Sink>, std::nullptr_t>) {
      const double d_pn = (1.0 + pt * pt) / w3;
      const double d_pt = -pn * pt / w3;
      const double scale = face.sign / (h * h);
      for (const StencilTap& t : face.normal) {
        sink(g.index(i + t.di, j + t.dj), scale * d_pn * t.weight);
      }
      for (const StencilTap& t : face.tangential) {
        sink(g.index(i + t.di, j + t.dj), scale * d_pt * t.weight);
      }
    }
  }
  return div / h - 2.0 * H;
}

}  // namespace cmclab::detail
