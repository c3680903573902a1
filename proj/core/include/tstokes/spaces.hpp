#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "tstokes/mesh.hpp"

namespace tstokes {

/// Numbering and constraint status for the MINI velocity space
/// (P1 + cubic bubble per triangle, two components), P1 pressure, and the
/// P1 multiplier trace space on Gamma.
///
/// Velocity dofs: 2 per vertex (x,y interleaved), then 2 per triangle for the
/// bubbles. Constrained dofs: both components at Gamma0 vertices (Dirichlet),
/// the normal component at Gamma vertices (impermeability). A vertex shared
/// by a Gamma0 and a Gamma side is Dirichlet; a corner where two Gamma sides
/// meet is pinned to zero by both normal constraints and carries no
/// multiplier dof. Bubbles are never constrained.
struct DofMap {
    int n_vertices = 0;
    int n_triangles = 0;
    int n_velocity = 0;  // 2*(n_vertices + n_triangles)
    int n_pressure = 0;  // n_vertices

    std::vector<std::uint8_t> velocity_constrained;  // per velocity dof
    std::vector<double> constraint_value;            // prescribed value (0 if free)
    std::vector<int> velocity_eq;                    // dof -> reduced index, -1 if constrained
    int n_free_velocity = 0;

    std::vector<int> multiplier_vertex;    // multiplier dof -> vertex
    std::vector<int> vertex_multiplier;    // vertex -> multiplier dof, -1 if none
    std::vector<Vec2> multiplier_tangent;  // unit tangent t = (n_y, -n_x) of the side

    static int vdof(int vertex, int comp) { return 2 * vertex + comp; }
    int bdof(int tri, int comp) const { return 2 * n_vertices + 2 * tri + comp; }
    int n_multipliers() const { return static_cast<int>(multiplier_vertex.size()); }

    // reduced saddle system layout: [free velocity | pressure | mean multiplier]
    int pressure_eq(int vertex) const { return n_free_velocity + vertex; }
    int mean_eq() const { return n_free_velocity + n_pressure; }
    int n_system() const { return n_free_velocity + n_pressure + 1; }
};

/// Builds the dof map for a tagged mesh. `dirichlet` supplies the prescribed
/// velocity on Gamma0; it must be finite at every Gamma0 vertex.
DofMap build_dofmap(const Mesh& mesh,
                    const std::function<Vec2(Vec2)>& dirichlet = nullptr);

/// Tangent of a boundary edge, t = (n_y, -n_x).
Vec2 edge_tangent(const BoundaryEdge& e);

/// Sign relating the tangential trace to the free Cartesian component on an
/// axis-aligned Gamma side: u_t = sign * u_{tangential component}.
double tangential_trace_sign(const BoundaryEdge& e);

/// Discrete fields of one solve.
struct FieldSolution {
    Eigen::VectorXd velocity;    // all velocity dofs, m/s
    Eigen::VectorXd pressure;    // per vertex, Pa
    Eigen::VectorXd multiplier;  // lambda per multiplier dof, Pa
    Eigen::VectorXd slip;        // slip iterate per multiplier dof, m/s
};

/// Lagrange interpolation: vertex dofs take point values, bubble dofs are 0.
Eigen::VectorXd interpolate_velocity(const Mesh& mesh,
                                     const std::function<Vec2(Vec2)>& f);
Eigen::VectorXd interpolate_pressure(const Mesh& mesh,
                                     const std::function<double(Vec2)>& f);

/// Barycentric coordinates of p in triangle t.
std::array<double, 3> barycentric(const Mesh& mesh, int t, Vec2 p);

/// Gradients of the three barycentric coordinates (constant on the triangle).
std::array<Vec2, 3> barycentric_gradients(const Mesh& mesh, int t);

/// P1+bubble velocity evaluation inside triangle t.
Vec2 eval_velocity(const Mesh& mesh, const DofMap& dofmap,
                   const Eigen::VectorXd& velocity, int t, Vec2 p);

/// Velocity gradient G(i,j) = du_i/dx_j inside triangle t.
Eigen::Matrix2d eval_velocity_gradient(const Mesh& mesh, const DofMap& dofmap,
                                       const Eigen::VectorXd& velocity, int t, Vec2 p);

double eval_pressure(const Mesh& mesh, const Eigen::VectorXd& pressure, int t, Vec2 p);

/// Tangential velocity t·u at each multiplier dof.
Eigen::VectorXd tangential_values(const Mesh& mesh, const DofMap& dofmap,
                                  const Eigen::VectorXd& velocity);

/// Full velocity vector from the reduced unknowns (constraints filled in).
Eigen::VectorXd expand_velocity(const DofMap& dofmap, const Eigen::VectorXd& reduced);

}  // namespace tstokes
