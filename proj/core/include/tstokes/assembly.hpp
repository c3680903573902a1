#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <vector>

#include "tstokes/linalg.hpp"
#include "tstokes/mesh.hpp"
#include "tstokes/spaces.hpp"

namespace tstokes {

/// Barycentric quadrature point; weights over a triangle sum to 1.
struct TriQuadPoint {
    std::array<double, 3> bary;
    double weight;
};

/// 7-point rule, exact through polynomial degree 5.
const std::vector<TriQuadPoint>& tri_quadrature_d5();

/// Gauss point on the unit interval; weights sum to 1.
struct EdgeQuadPoint {
    double s;
    double weight;
};

/// 3-point Gauss rule, exact through degree 5.
const std::vector<EdgeQuadPoint>& edge_quadrature_d5();

using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat3x8 = Eigen::Matrix<double, 3, 8>;
using Vec8 = Eigen::Matrix<double, 8, 1>;

/// Viscous element matrix for the P1+bubble pair on triangle t, local dof
/// order (v0x, v0y, v1x, v1y, v2x, v2y, bx, by):
///   A[(i,a),(j,b)] = strain_factor * nu * int 1/2 (d_ab grad(phi_i).grad(phi_j)
///                                                 + d_b phi_i d_a phi_j)
/// strain_factor 2 gives the symmetric-gradient stress 2 nu eps(u), 1 gives nu eps(u).
Mat8 element_stiffness(const Mesh& mesh, int t, double nu, int strain_factor);

/// Divergence coupling, B[j,(i,a)] = -int psi_j d_a phi_i over triangle t.
Mat3x8 element_divergence(const Mesh& mesh, int t);

/// P1 mass matrix of an edge of length L, (L/6) [[2,1],[1,2]].
Eigen::Matrix2d edge_tangential_mass(const Mesh& mesh, const BoundaryEdge& e);

/// Body-force element load, l[(i,a)] = int f_a phi_i.
Vec8 element_load(const Mesh& mesh, int t, const std::function<Vec2(Vec2)>& f);

struct SystemOptions {
    double nu = 0.1;        // viscosity, Pa s
    double r = 10.0;        // augmentation weight of the boundary term
    int strain_factor = 2;  // 2: stress 2 nu eps(u) - p I, 1: nu eps(u) - p I
};

/// Assembles the reduced saddle system (Dirichlet dofs eliminated, their
/// values lifted to the right-hand side):
///   [[A + r M_Gamma, B^T, 0], [B, 0, m^T], [0, m, 0]]
/// with m the pressure-mean row. `body_force` may be null for f = 0.
SparseSystem assemble_system(const Mesh& mesh, const DofMap& dofmap,
                             const SystemOptions& opts,
                             const std::function<Vec2(Vec2)>& body_force);

/// System-sized load vector of the boundary term (xi, v_t)_Gamma, with xi a
/// P1 trace given by one value per multiplier dof (zero at vertices without one).
Eigen::VectorXd assemble_boundary_load(const Mesh& mesh, const DofMap& dofmap,
                                       const Eigen::VectorXd& xi);

/// B u for a full velocity vector: entry j is -int psi_j div(u_h).
Eigen::VectorXd weak_divergence(const Mesh& mesh, const DofMap& dofmap,
                                const Eigen::VectorXd& velocity);

/// int_Omega p_h dx for a P1 pressure.
double integrate_pressure(const Mesh& mesh, const Eigen::VectorXd& pressure);

}  // namespace tstokes
