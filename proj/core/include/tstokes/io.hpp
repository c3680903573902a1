#pragma once

#include <Eigen/SparseCore>
#include <iosfwd>
#include <string>
#include <vector>

#include "tstokes/mesh.hpp"
#include "tstokes/spaces.hpp"
#include "tstokes/tresca.hpp"
#include "tstokes/verification.hpp"

namespace tstokes {

/// Study table with the fixed column set
///   h,e0,e1,ep,alpha0,alpha1,alphap,iters,seconds
/// Doubles are %.12e; NaN rates print as empty fields. Output is
/// deterministic apart from the measured seconds column.
void write_report_csv(const StudyReport& report, std::ostream& os);
void write_report_csv(const StudyReport& report, const std::string& path);

/// Fields on the mesh as a legacy-VTK unstructured grid (point data:
/// velocity vectors from the vertex dofs, pressure scalars).
void write_solution_vtk(const Mesh& mesh, const DofMap& dofmap,
                        const FieldSolution& fields, const std::string& path);

/// Mesh geometry with boundary edges as line cells; cell data carries
/// 0 for triangles, 1 for Gamma0 edges, 2 for Gamma edges.
void write_mesh_vtk(const Mesh& mesh, const std::string& path);

/// Per-multiplier-dof profile along Gamma: arclength,u_t,slip,lambda.
/// Sides are walked in the order bottom, right, top, left; the arclength
/// is cumulative over the Gamma sides only, ascending within each side.
void write_boundary_profile_csv(const Mesh& mesh, const DofMap& dofmap,
                                const FieldSolution& fields, const std::string& path);

/// Iteration trace: k,rel_change,slip_mismatch,complementarity.
void write_iteration_trace_csv(const std::vector<IterationRecord>& history,
                               const std::string& path);

/// MatrixMarket coordinate format (1-based, %.17g values).
void write_matrix_market(const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix,
                         const std::string& path);

}  // namespace tstokes
