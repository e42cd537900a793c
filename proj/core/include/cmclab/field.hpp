#pragma once

// Flux calculus of discrete solutions: gradients, slope W, graph normals,
// the 1-form  w_u = (u_x/W) dy - (u_y/W) dx, its line integrals, Stokes
// checks, and the conservative residual of Div(grad u / W) = 2H.

#include <iosfwd>

#include "cmclab/geometry.hpp"
#include "cmclab/grid.hpp"

namespace cmclab {

/// Central differences where both neighbors are active, second-order
/// one-sided differences next to the mask edge. Nodes with no usable stencil
/// in some direction are flagged and invalid.
VectorField gradient(const ScalarField& f);

/// W = sqrt(1 + |grad u|^2).
RealField slope_w(const ScalarField& f);
RealField slope_w(const VectorField& grad);

NormalMap normal_map(const ScalarField& f);
NormalMap normal_map(const VectorField& grad);

FluxForm flux_form(const ScalarField& f);
FluxForm flux_form(const VectorField& grad);

/// Trapezoid accumulation of (p/W) dy - (q/W) dx along the curve with bilinear
/// interpolation. Throws PartialCoverageError listing samples that fall in
/// cells with invalid nodes.
double line_integral(const FluxForm& w, const Curve& c);

/// | integral of w over the boundary of dom_sub  -  2H area(dom_sub) |.
/// Boundary loops are sampled at half the grid spacing.
double stokes_defect(const FluxForm& w, const Domain& dom_sub, double H);

/// Conservative staggered-face divergence of grad u / W minus 2H, valid on
/// interior nodes; boundary-ring nodes are not part of the operator.
RealField residual_cmc(const ScalarField& f, double H);

/// CSV export with columns i,j,x,y,u,p,q,W,N1,N2,N3 for every non-exterior
/// node. A leading comment line records the grid:
///   # grid origin_x=... origin_y=... h=... nx=... ny=...
void write_field_csv(std::ostream& os, const ScalarField& f);
/// Reads back a field written by write_field_csv. Node classes are rebuilt
/// from the set of listed nodes. Returns the stored W column alongside.
struct FieldCsv {
  ScalarField field;
  std::vector<double> stored_w;  ///< per grid node, NaN where absent
};
FieldCsv read_field_csv(std::istream& is);

}  // namespace cmclab
