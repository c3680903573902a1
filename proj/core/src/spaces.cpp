#include "tstokes/spaces.hpp"

#include <cmath>
#include <stdexcept>

namespace tstokes {

namespace {

bool same_normal(Vec2 a, Vec2 b) {
    return a.x == b.x && a.y == b.y;  // normals are exact axis vectors
}

}  // namespace

DofMap build_dofmap(const Mesh& mesh, const std::function<Vec2(Vec2)>& dirichlet) {
    DofMap dm;
    dm.n_vertices = mesh.n_vertices();
    dm.n_triangles = mesh.n_triangles();
    dm.n_velocity = 2 * (dm.n_vertices + dm.n_triangles);
    dm.n_pressure = dm.n_vertices;

    std::vector<std::uint8_t> on_gamma0(dm.n_vertices, 0);
    std::vector<std::vector<Vec2>> gamma_normals(dm.n_vertices);
    for (const auto& e : mesh.boundary_edges) {
        for (int k = 0; k < 2; ++k) {
            int v = e.v[k];
            if (e.label == BoundaryLabel::Gamma0) {
                on_gamma0[v] = 1;
            } else {
                auto& ns = gamma_normals[v];
                bool seen = false;
                for (auto n : ns) seen = seen || same_normal(n, e.normal);
                if (!seen) ns.push_back(e.normal);
            }
        }
    }

    dm.velocity_constrained.assign(dm.n_velocity, 0);
    dm.constraint_value.assign(dm.n_velocity, 0.0);
    dm.vertex_multiplier.assign(dm.n_vertices, -1);

    for (int v = 0; v < dm.n_vertices; ++v) {
        if (on_gamma0[v]) {
            Vec2 val{0.0, 0.0};
            if (dirichlet) val = dirichlet(mesh.vertices[v]);
            if (!std::isfinite(val.x) || !std::isfinite(val.y))
                throw std::domain_error("dirichlet data not finite at a boundary vertex");
            for (int c = 0; c < 2; ++c) {
                int d = DofMap::vdof(v, c);
                dm.velocity_constrained[d] = 1;
                dm.constraint_value[d] = (c == 0) ? val.x : val.y;
            }
        } else if (gamma_normals[v].size() >= 2) {
            // corner of two slip sides: both normal constraints pin the vertex
            for (int c = 0; c < 2; ++c) dm.velocity_constrained[DofMap::vdof(v, c)] = 1;
        } else if (gamma_normals[v].size() == 1) {
            Vec2 n = gamma_normals[v][0];
            int normal_comp = (n.x != 0.0) ? 0 : 1;
            dm.velocity_constrained[DofMap::vdof(v, normal_comp)] = 1;
            dm.vertex_multiplier[v] = static_cast<int>(dm.multiplier_vertex.size());
            dm.multiplier_vertex.push_back(v);
            dm.multiplier_tangent.push_back(Vec2{n.y, -n.x});
        }
    }

    dm.velocity_eq.assign(dm.n_velocity, -1);
    int next = 0;
    for (int d = 0; d < dm.n_velocity; ++d)
        if (!dm.velocity_constrained[d]) dm.velocity_eq[d] = next++;
    dm.n_free_velocity = next;
    return dm;
}

Vec2 edge_tangent(const BoundaryEdge& e) { return Vec2{e.normal.y, -e.normal.x}; }

double tangential_trace_sign(const BoundaryEdge& e) {
    Vec2 t = edge_tangent(e);
    return t.x + t.y;  // one component is 0, the other is +-1
}

Eigen::VectorXd interpolate_velocity(const Mesh& mesh, const std::function<Vec2(Vec2)>& f) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * (mesh.n_vertices() + mesh.n_triangles()));
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        Vec2 val = f(mesh.vertices[v]);
        if (!std::isfinite(val.x) || !std::isfinite(val.y))
            throw std::domain_error("velocity interpolant not finite at a vertex");
        u[2 * v] = val.x;
        u[2 * v + 1] = val.y;
    }
    return u;
}

Eigen::VectorXd interpolate_pressure(const Mesh& mesh, const std::function<double(Vec2)>& f) {
    Eigen::VectorXd p(mesh.n_vertices());
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        double val = f(mesh.vertices[v]);
        if (!std::isfinite(val))
            throw std::domain_error("pressure interpolant not finite at a vertex");
        p[v] = val;
    }
    return p;
}

std::array<double, 3> barycentric(const Mesh& mesh, int t, Vec2 p) {
    const auto& tri = mesh.triangles[t];
    Vec2 a = mesh.vertices[tri.v[0]];
    Vec2 b = mesh.vertices[tri.v[1]];
    Vec2 c = mesh.vertices[tri.v[2]];
    double inv2A = 1.0 / (2.0 * mesh.signed_area(t));
    auto cross = [](Vec2 u, Vec2 w) { return u.x * w.y - u.y * w.x; };
    double l0 = cross(b - p, c - p) * inv2A;
    double l1 = cross(c - p, a - p) * inv2A;
    return {l0, l1, 1.0 - l0 - l1};
}

std::array<Vec2, 3> barycentric_gradients(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    Vec2 a = mesh.vertices[tri.v[0]];
    Vec2 b = mesh.vertices[tri.v[1]];
    Vec2 c = mesh.vertices[tri.v[2]];
    double inv2A = 1.0 / (2.0 * mesh.signed_area(t));
    return {Vec2{(b.y - c.y) * inv2A, (c.x - b.x) * inv2A},
            Vec2{(c.y - a.y) * inv2A, (a.x - c.x) * inv2A},
            Vec2{(a.y - b.y) * inv2A, (b.x - a.x) * inv2A}};
}

Vec2 eval_velocity(const Mesh& mesh, const DofMap& dofmap,
                   const Eigen::VectorXd& velocity, int t, Vec2 p) {
    auto l = barycentric(mesh, t, p);
    double bub = 27.0 * l[0] * l[1] * l[2];
    Vec2 u{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        int v = mesh.triangles[t].v[i];
        u.x += l[i] * velocity[DofMap::vdof(v, 0)];
        u.y += l[i] * velocity[DofMap::vdof(v, 1)];
    }
    u.x += bub * velocity[dofmap.bdof(t, 0)];
    u.y += bub * velocity[dofmap.bdof(t, 1)];
    return u;
}

Eigen::Matrix2d eval_velocity_gradient(const Mesh& mesh, const DofMap& dofmap,
                                       const Eigen::VectorXd& velocity, int t, Vec2 p) {
    auto l = barycentric(mesh, t, p);
    auto g = barycentric_gradients(mesh, t);
    Vec2 gb{0.0, 0.0};
    gb = gb + (l[1] * l[2]) * g[0];
    gb = gb + (l[0] * l[2]) * g[1];
    gb = gb + (l[0] * l[1]) * g[2];
    gb = 27.0 * gb;

    Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
    for (int i = 0; i < 3; ++i) {
        int v = mesh.triangles[t].v[i];
        for (int c = 0; c < 2; ++c) {
            double coef = velocity[DofMap::vdof(v, c)];
            G(c, 0) += coef * g[i].x;
            G(c, 1) += coef * g[i].y;
        }
    }
    for (int c = 0; c < 2; ++c) {
        double coef = velocity[dofmap.bdof(t, c)];
        G(c, 0) += coef * gb.x;
        G(c, 1) += coef * gb.y;
    }
    return G;
}

double eval_pressure(const Mesh& mesh, const Eigen::VectorXd& pressure, int t, Vec2 p) {
    auto l = barycentric(mesh, t, p);
    double val = 0.0;
    for (int i = 0; i < 3; ++i) val += l[i] * pressure[mesh.triangles[t].v[i]];
    return val;
}

Eigen::VectorXd tangential_values(const Mesh& mesh, const DofMap& dofmap,
                                  const Eigen::VectorXd& velocity) {
    (void)mesh;
    Eigen::VectorXd ut(dofmap.n_multipliers());
    for (int m = 0; m < dofmap.n_multipliers(); ++m) {
        int v = dofmap.multiplier_vertex[m];
        Vec2 t = dofmap.multiplier_tangent[m];
        ut[m] = t.x * velocity[DofMap::vdof(v, 0)] + t.y * velocity[DofMap::vdof(v, 1)];
    }
    return ut;
}

Eigen::VectorXd expand_velocity(const DofMap& dofmap, const Eigen::VectorXd& reduced) {
    if (reduced.size() < dofmap.n_free_velocity)
        throw std::invalid_argument("reduced velocity vector too short");
    Eigen::VectorXd full(dofmap.n_velocity);
    for (int d = 0; d < dofmap.n_velocity; ++d)
        full[d] = dofmap.velocity_constrained[d] ? dofmap.constraint_value[d]
                                                 : reduced[dofmap.velocity_eq[d]];
    return full;
}

}  // namespace tstokes
