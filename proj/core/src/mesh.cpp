#include "tstokes/mesh.hpp"

#include <algorithm>
#include <stdexcept>

namespace tstokes {

namespace {

int vertex_id(int i, int j, int nx) { return j * (nx + 1) + i; }

}  // namespace

Mesh structured_rect_mesh(int nx, int ny, double lx, double ly) {
    if (nx < 1 || ny < 1) {
        throw std::invalid_argument("structured_rect_mesh: cell counts must be >= 1");
    }
    if (!(lx > 0.0) || !(ly > 0.0)) {
        throw std::invalid_argument("structured_rect_mesh: side lengths must be > 0");
    }

    Mesh mesh;
    mesh.nx = nx;
    mesh.ny = ny;
    mesh.lx = lx;
    mesh.ly = ly;

    const double hx = lx / nx;
    const double hy = ly / ny;

    mesh.vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            // endpoints exact so refinement-level meshes nest bit-for-bit
            const double x = (i == nx) ? lx : i * hx;
            const double y = (j == ny) ? ly : j * hy;
            mesh.vertices.push_back({x, y});
        }
    }

    mesh.triangles.reserve(static_cast<std::size_t>(2) * nx * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int v00 = vertex_id(i, j, nx);
            const int v10 = vertex_id(i + 1, j, nx);
            const int v01 = vertex_id(i, j + 1, nx);
            const int v11 = vertex_id(i + 1, j + 1, nx);
            mesh.triangles.push_back({{v00, v10, v11}});  // below the diagonal
            mesh.triangles.push_back({{v00, v11, v01}});  // above the diagonal
        }
    }

    const auto lower_tri = [&](int i, int j) { return 2 * (j * nx + i); };
    const auto upper_tri = [&](int i, int j) { return 2 * (j * nx + i) + 1; };

    mesh.boundary_edges.reserve(static_cast<std::size_t>(2) * (nx + ny));
    for (int i = 0; i < nx; ++i) {
        BoundaryEdge e;
        e.v = {vertex_id(i, 0, nx), vertex_id(i + 1, 0, nx)};
        e.triangle = lower_tri(i, 0);
        e.side = Side::Bottom;
        e.normal = {0.0, -1.0};
        mesh.boundary_edges.push_back(e);
    }
    for (int j = 0; j < ny; ++j) {
        BoundaryEdge e;
        e.v = {vertex_id(nx, j, nx), vertex_id(nx, j + 1, nx)};
        e.triangle = lower_tri(nx - 1, j);
        e.side = Side::Right;
        e.normal = {1.0, 0.0};
        mesh.boundary_edges.push_back(e);
    }
    for (int i = 0; i < nx; ++i) {
        BoundaryEdge e;
        e.v = {vertex_id(i, ny, nx), vertex_id(i + 1, ny, nx)};
        e.triangle = upper_tri(i, ny - 1);
        e.side = Side::Top;
        e.normal = {0.0, 1.0};
        mesh.boundary_edges.push_back(e);
    }
    for (int j = 0; j < ny; ++j) {
        BoundaryEdge e;
        e.v = {vertex_id(0, j, nx), vertex_id(0, j + 1, nx)};
        e.triangle = upper_tri(0, j);
        e.side = Side::Left;
        e.normal = {-1.0, 0.0};
        mesh.boundary_edges.push_back(e);
    }

    mesh.h = std::hypot(hx, hy);
    return mesh;
}

Mesh tag_boundary(Mesh mesh, const BoundarySpec& spec) {
    // all-Gamma (slip everywhere) and all-Gamma0 (no slip) are both legal;
    // corner pinning plus the mean-pressure row keep the system nonsingular
    for (auto& e : mesh.boundary_edges) {
        e.label = spec.label(e.side);
    }
    return mesh;
}

double boundary_arclength(const Mesh& mesh, BoundaryLabel label) {
    double total = 0.0;
    for (const auto& e : mesh.boundary_edges) {
        if (e.label == label) total += mesh.edge_length(e);
    }
    return total;
}

int Mesh::locate_triangle(Vec2 p) const {
    const double hx = lx / nx;
    const double hy = ly / ny;
    int i = static_cast<int>(std::floor(p.x / hx));
    int j = static_cast<int>(std::floor(p.y / hy));
    i = std::clamp(i, 0, nx - 1);
    j = std::clamp(j, 0, ny - 1);
    const double xl = (p.x - i * hx) / hx;
    const double yl = (p.y - j * hy) / hy;
    const int cell = 2 * (j * nx + i);
    return (xl >= yl) ? cell : cell + 1;
}

}  // namespace tstokes
