#include "tstokes/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace tstokes {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

std::ofstream open_file(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    return os;
}

}  // namespace

void write_report_csv(const StudyReport& report, std::ostream& os) {
    os << "h,e0,e1,ep,alpha0,alpha1,alphap,iters,seconds\n";
    for (const auto& row : report.rows) {
        os << fmt(row.h) << ',' << fmt(row.e0) << ',' << fmt(row.e1) << ',' << fmt(row.ep)
           << ',';
        os << (std::isnan(row.alpha0) ? "" : fmt(row.alpha0)) << ',';
        os << (std::isnan(row.alpha1) ? "" : fmt(row.alpha1)) << ',';
        os << (std::isnan(row.alphap) ? "" : fmt(row.alphap)) << ',';
        os << row.iters << ',' << fmt(row.seconds) << '\n';
    }
}

void write_report_csv(const StudyReport& report, const std::string& path) {
    auto os = open_file(path);
    write_report_csv(report, os);
}

void write_solution_vtk(const Mesh& mesh, const DofMap& dofmap,
                        const FieldSolution& fields, const std::string& path) {
    auto os = open_file(path);
    const int nv = mesh.n_vertices();
    os << "# vtk DataFile Version 3.0\nstokes fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << nv << " double\n";
    for (const auto& p : mesh.vertices) os << fmt(p.x) << ' ' << fmt(p.y) << " 0\n";
    os << "CELLS " << mesh.n_triangles() << ' ' << 4 * mesh.n_triangles() << '\n';
    for (const auto& t : mesh.triangles)
        os << "3 " << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << '\n';
    os << "CELL_TYPES " << mesh.n_triangles() << '\n';
    for (int t = 0; t < mesh.n_triangles(); ++t) os << "5\n";
    os << "POINT_DATA " << nv << '\n';
    os << "VECTORS velocity double\n";
    for (int v = 0; v < nv; ++v)
        os << fmt(fields.velocity[DofMap::vdof(v, 0)]) << ' '
           << fmt(fields.velocity[DofMap::vdof(v, 1)]) << " 0\n";
    os << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < nv; ++v) os << fmt(fields.pressure[v]) << '\n';
    (void)dofmap;
}

void write_mesh_vtk(const Mesh& mesh, const std::string& path) {
    auto os = open_file(path);
    const int nt = mesh.n_triangles();
    const int ne = static_cast<int>(mesh.boundary_edges.size());
    os << "# vtk DataFile Version 3.0\nmesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.n_vertices() << " double\n";
    for (const auto& p : mesh.vertices) os << fmt(p.x) << ' ' << fmt(p.y) << " 0\n";
    os << "CELLS " << nt + ne << ' ' << 4 * nt + 3 * ne << '\n';
    for (const auto& t : mesh.triangles)
        os << "3 " << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << '\n';
    for (const auto& e : mesh.boundary_edges) os << "2 " << e.v[0] << ' ' << e.v[1] << '\n';
    os << "CELL_TYPES " << nt + ne << '\n';
    for (int t = 0; t < nt; ++t) os << "5\n";
    for (int e = 0; e < ne; ++e) os << "3\n";
    os << "CELL_DATA " << nt + ne << "\nSCALARS label int 1\nLOOKUP_TABLE default\n";
    for (int t = 0; t < nt; ++t) os << "0\n";
    for (const auto& e : mesh.boundary_edges)
        os << (e.label == BoundaryLabel::Gamma0 ? "1\n" : "2\n");
}

void write_boundary_profile_csv(const Mesh& mesh, const DofMap& dofmap,
                                const FieldSolution& fields, const std::string& path) {
    auto os = open_file(path);
    os << "arclength,u_t,slip,lambda\n";
    const Eigen::VectorXd ut = tangential_values(mesh, dofmap, fields.velocity);

    const std::array<Side, 4> order{Side::Bottom, Side::Right, Side::Top, Side::Left};
    double offset = 0.0;
    for (Side s : order) {
        const bool horizontal = (s == Side::Bottom || s == Side::Top);
        const int cells = horizontal ? mesh.nx : mesh.ny;
        const double len = horizontal ? mesh.lx : mesh.ly;
        bool is_gamma = false;
        for (const auto& e : mesh.boundary_edges)
            if (e.side == s) {
                is_gamma = (e.label == BoundaryLabel::Gamma);
                break;
            }
        if (!is_gamma) continue;
        for (int i = 0; i <= cells; ++i) {
            int v;
            switch (s) {
                case Side::Bottom: v = i; break;
                case Side::Top: v = mesh.ny * (mesh.nx + 1) + i; break;
                case Side::Left: v = i * (mesh.nx + 1); break;
                default: v = i * (mesh.nx + 1) + mesh.nx; break;
            }
            const int m = dofmap.vertex_multiplier[v];
            if (m < 0) continue;
            const double coord =
                horizontal ? mesh.vertices[v].x : mesh.vertices[v].y;
            os << fmt(offset + coord) << ',' << fmt(ut[m]) << ',' << fmt(fields.slip[m])
               << ',' << fmt(fields.multiplier[m]) << '\n';
        }
        offset += len;
    }
}

void write_iteration_trace_csv(const std::vector<IterationRecord>& history,
                               const std::string& path) {
    auto os = open_file(path);
    os << "k,rel_change,slip_mismatch,complementarity\n";
    for (const auto& rec : history)
        os << rec.k << ',' << fmt(rec.rel_change) << ',' << fmt(rec.max_slip_mismatch)
           << ',' << fmt(rec.complementarity) << '\n';
}

void write_matrix_market(const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix,
                         const std::string& path) {
    auto os = open_file(path);
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
    char buf[64];
    for (int k = 0; k < matrix.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(matrix, k); it;
             ++it) {
            std::snprintf(buf, sizeof(buf), "%d %d %.17g\n",
                          static_cast<int>(it.row()) + 1, static_cast<int>(it.col()) + 1,
                          it.value());
            os << buf;
        }
    }
}

}  // namespace tstokes
