#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "tstokes/mesh.hpp"
#include "tstokes/spaces.hpp"
#include "tstokes/tresca.hpp"

namespace tstokes {

/// Analytic benchmark problem with a known solution.
struct ManufacturedCase {
    double lx = 0.1, ly = 0.1;
    double nu = 0.1;
    double tol = 1e-6;
    int strain_factor = 2;
    BoundarySpec boundary;  // slip on every side for the friction runs
    std::function<Vec2(Vec2)> velocity;
    std::function<Eigen::Matrix2d(Vec2)> velocity_gradient;  // G(i,j) = du_i/dx_j
    std::function<double(Vec2)> pressure;
    std::function<Vec2(Vec2)> body_force;
};

/// Vortex-array benchmark on [0,0.1]^2: u = curl of
/// (1/a)(1-cos(ax))(1-cos(ay)) with a = 20 pi, p = a (cos(ay) - cos(ax)).
/// The velocity is divergence-free and vanishes on the whole boundary, so
/// the problem doubles as a no-slip case and as a stick-regime slip case.
/// Friction runs allow slip on the horizontal walls and keep Dirichlet data
/// on the vertical ones.
/// `legacy_u2` swaps in the variant u2 = -sin(ax)cos(ay) - sin(ay) (kept for
/// comparison; it is neither divergence-free nor zero on the boundary).
ManufacturedCase test1_case(int strain_factor = 2, bool legacy_u2 = false);

/// Flow-through benchmark without an exact solution: parabolic-profile
/// Dirichlet data on left and right, slip threshold g on top and bottom.
/// Lives on the unit square so the profile y(1-y) vanishes exactly where
/// the inflow walls meet the slip walls; truncating the square would leave
/// a velocity jump at the upper corners and an infinite-energy solution.
struct FrictionCase {
    double lx = 1.0, ly = 1.0;
    double nu = 0.1;
    double g = 0.015;
    BoundarySpec boundary;
    std::function<Vec2(Vec2)> dirichlet;
};

FrictionCase test2_case();

struct ErrorNorms {
    double e0 = 0.0;  // velocity L2
    double e1 = 0.0;  // velocity H1 (full norm)
    double ep = 0.0;  // pressure L2
};

/// Quadrature-evaluated norms of (solution - exact) with the degree-5 rule.
ErrorNorms error_norms(const Mesh& mesh, const DofMap& dofmap,
                       const FieldSolution& fields, const ManufacturedCase& exact);

/// Norms of (solution - reference) where the reference lives on a nested
/// structured refinement of `mesh`; rejects non-nested pairs.
ErrorNorms error_norms_vs_reference(const Mesh& mesh, const DofMap& dofmap,
                                    const FieldSolution& fields, const Mesh& ref_mesh,
                                    const DofMap& ref_dofmap, const FieldSolution& ref);

/// Diagnostic surrogate for the multiplier error:
/// sqrt(h) * || lambda_H - lambda_ref ||_{L2(Gamma)}.
double multiplier_gap_vs_reference(const Mesh& mesh, const DofMap& dofmap,
                                   const Eigen::VectorXd& lambda, const Mesh& ref_mesh,
                                   const DofMap& ref_dofmap,
                                   const Eigen::VectorXd& ref_lambda);

/// Pairwise rates log(e_i/e_{i+1}) / log(h_i/h_{i+1}); output has size
/// errors.size()-1. Non-positive errors yield NaN entries. Requires
/// matching sizes >= 2 and strictly decreasing hs.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs);

struct StudyRow {
    int n = 0;
    double h = 0.0;
    double e0 = 0.0, e1 = 0.0, ep = 0.0;
    double alpha0 = 0.0, alpha1 = 0.0, alphap = 0.0;  // NaN on the first row
    int iters = 0;
    bool converged = true;
    double seconds = 0.0;
};

struct StudyReport {
    std::vector<StudyRow> rows;                 // ordered coarse to fine
    std::vector<double> multiplier_gap;         // per row, reference studies only
    int ref_n = 0;
    int ref_iterations = 0;
    double ref_seconds = 0.0;
};

struct StudyConfig {
    double g = 0.015;
    double r = 10.0;
    double rho = 10.0;
    double tol = 1e-6;
    int max_iters = 1000;
    int strain_factor = 2;
    int ref_n = 512;
};

/// Dirichlet convergence study of the vortex benchmark: one plain Stokes
/// solve per mesh against the exact solution.
StudyReport run_test1_study(const std::vector<int>& ns, int strain_factor = 2,
                            bool legacy_u2 = false);

/// Slip-threshold study of the flow-through benchmark against a reference
/// solution on a nested fine mesh. Throws if the reference fails to converge.
StudyReport run_test2_study(const std::vector<int>& ns, const StudyConfig& cfg = {});

/// One friction solve of the vortex benchmark (slip on the horizontal walls)
/// per threshold value, errors measured against the exact solution.
struct GSweepRow {
    double g = 0.0;
    ErrorNorms errors;
    int iterations = 0;
    bool converged = false;
};

std::vector<GSweepRow> run_g_sweep(int n, const std::vector<double>& gs,
                                   const StudyConfig& cfg = {});

}  // namespace tstokes
