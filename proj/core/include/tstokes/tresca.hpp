#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "tstokes/mesh.hpp"
#include "tstokes/spaces.hpp"

namespace tstokes {

/// Parameters of one slip-threshold Stokes solve.
struct TrescaConfig {
    double nu = 0.1;        // viscosity
    double r = 10.0;        // augmentation weight
    double rho = 10.0;      // multiplier step, usually equal to r
    double tol = 1e-6;      // relative-change stopping threshold
    int max_iters = 1000;
    int strain_factor = 2;

    std::function<double(Vec2)> g;          // slip threshold on Gamma, >= 0
    std::function<Vec2(Vec2)> dirichlet;    // velocity data on Gamma0 (null: 0)
    std::function<Vec2(Vec2)> body_force;   // null: f = 0

    void validate() const;  // throws std::invalid_argument on bad parameters
};

/// Pointwise projection behind the slip update:
///   P(xi) = 0 if |xi| <= g, else sign(xi) (|xi| - g) / r.
double slip_projection(double xi, double g, double r);
Eigen::VectorXd slip_projection(const Eigen::VectorXd& xi, const Eigen::VectorXd& g,
                                double r);

/// lambda + rho (u_t - slip), applied per multiplier dof.
Eigen::VectorXd multiplier_update(const Eigen::VectorXd& lambda,
                                  const Eigen::VectorXd& ut,
                                  const Eigen::VectorXd& slip, double rho);

/// ||(u,s) - (u_prev,s_prev)|| / ||(u,s)|| on the stacked coefficient
/// vectors; 0 if both are zero, +inf if only the denominator vanishes.
double relative_change(const Eigen::VectorXd& u, const Eigen::VectorXd& s,
                       const Eigen::VectorXd& u_prev, const Eigen::VectorXd& s_prev);

struct IterationRecord {
    int k = 0;
    double rel_change = 0.0;
    double max_slip_mismatch = 0.0;   // max |u_t - slip|
    double complementarity = 0.0;     // max |lambda u_t - g |u_t||
};

struct Alg2Result {
    FieldSolution fields;
    DofMap dofmap;
    int iterations = 0;
    bool converged = false;
    double system_residual = 0.0;  // relative residual of the last linear solve
    std::vector<IterationRecord> history;
};

/// Augmented-Lagrangian Uzawa iteration for Stokes flow with a slip
/// threshold on Gamma. Each iteration solves the (factorized once) saddle
/// system with the boundary load (r slip - lambda, v_t)_Gamma, projects
/// xi = lambda + r u_t onto the slip law, and advances the multiplier.
/// Meshes without Gamma sides collapse to a single no-slip solve.
Alg2Result alg2_solve(const Mesh& mesh, const TrescaConfig& cfg);

}  // namespace tstokes
