#include "tstokes/assembly.hpp"

#include <Eigen/SparseCore>
#include <cmath>
#include <stdexcept>

namespace tstokes {

const std::vector<TriQuadPoint>& tri_quadrature_d5() {
    static const std::vector<TriQuadPoint> rule = [] {
        const double s15 = std::sqrt(15.0);
        const double b1 = (6.0 + s15) / 21.0, a1 = 1.0 - 2.0 * b1;
        const double b2 = (6.0 - s15) / 21.0, a2 = 1.0 - 2.0 * b2;
        const double w1 = (155.0 + s15) / 1200.0;
        const double w2 = (155.0 - s15) / 1200.0;
        std::vector<TriQuadPoint> r;
        r.push_back({{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 9.0 / 40.0});
        r.push_back({{a1, b1, b1}, w1});
        r.push_back({{b1, a1, b1}, w1});
        r.push_back({{b1, b1, a1}, w1});
        r.push_back({{a2, b2, b2}, w2});
        r.push_back({{b2, a2, b2}, w2});
        r.push_back({{b2, b2, a2}, w2});
        return r;
    }();
    return rule;
}

const std::vector<EdgeQuadPoint>& edge_quadrature_d5() {
    static const std::vector<EdgeQuadPoint> rule = [] {
        const double d = 0.5 * std::sqrt(3.0 / 5.0);
        return std::vector<EdgeQuadPoint>{
            {0.5 - d, 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 + d, 5.0 / 18.0}};
    }();
    return rule;
}

namespace {

// gradients of the four scalar shape functions (3 hats + bubble) at a point
std::array<Vec2, 4> shape_gradients(const std::array<Vec2, 3>& g,
                                    const std::array<double, 3>& l) {
    Vec2 gb = 27.0 * ((l[1] * l[2]) * g[0] + (l[0] * l[2]) * g[1] + (l[0] * l[1]) * g[2]);
    return {g[0], g[1], g[2], gb};
}

std::array<int, 8> global_velocity_dofs(const Mesh& mesh, const DofMap& dofmap, int t) {
    const auto& tri = mesh.triangles[t];
    std::array<int, 8> dofs{};
    for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 2; ++c) dofs[2 * i + c] = DofMap::vdof(tri.v[i], c);
    dofs[6] = dofmap.bdof(t, 0);
    dofs[7] = dofmap.bdof(t, 1);
    return dofs;
}

}  // namespace

Mat8 element_stiffness(const Mesh& mesh, int t, double nu, int strain_factor) {
    if (strain_factor != 1 && strain_factor != 2)
        throw std::invalid_argument("strain_factor must be 1 or 2");
    const double area = mesh.signed_area(t);
    const auto g = barycentric_gradients(mesh, t);
    Mat8 A = Mat8::Zero();
    for (const auto& qp : tri_quadrature_d5()) {
        auto G = shape_gradients(g, qp.bary);
        const double c = 0.5 * strain_factor * nu * qp.weight * area;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const double dot = G[i].x * G[j].x + G[i].y * G[j].y;
                const double gi[2] = {G[i].x, G[i].y};
                const double gj[2] = {G[j].x, G[j].y};
                const int row0 = (i < 3) ? 2 * i : 6;
                const int col0 = (j < 3) ? 2 * j : 6;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        A(row0 + a, col0 + b) += c * ((a == b ? dot : 0.0) + gi[b] * gj[a]);
            }
        }
    }
    return A;
}

Mat3x8 element_divergence(const Mesh& mesh, int t) {
    const double area = mesh.signed_area(t);
    const auto g = barycentric_gradients(mesh, t);
    Mat3x8 B = Mat3x8::Zero();
    for (const auto& qp : tri_quadrature_d5()) {
        auto G = shape_gradients(g, qp.bary);
        const double c = qp.weight * area;
        for (int j = 0; j < 3; ++j) {
            const double psi = qp.bary[j];
            for (int i = 0; i < 4; ++i) {
                const int col0 = (i < 3) ? 2 * i : 6;
                B(j, col0 + 0) -= c * psi * G[i].x;
                B(j, col0 + 1) -= c * psi * G[i].y;
            }
        }
    }
    return B;
}

Eigen::Matrix2d edge_tangential_mass(const Mesh& mesh, const BoundaryEdge& e) {
    const double L = mesh.edge_length(e);
    Eigen::Matrix2d M;
    M << 2.0, 1.0, 1.0, 2.0;
    return (L / 6.0) * M;
}

Vec8 element_load(const Mesh& mesh, int t, const std::function<Vec2(Vec2)>& f) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.signed_area(t);
    Vec8 l = Vec8::Zero();
    for (const auto& qp : tri_quadrature_d5()) {
        Vec2 x = qp.bary[0] * mesh.vertices[tri.v[0]] + qp.bary[1] * mesh.vertices[tri.v[1]] +
                 qp.bary[2] * mesh.vertices[tri.v[2]];
        Vec2 fx = f(x);
        const double c = qp.weight * area;
        const double bub = 27.0 * qp.bary[0] * qp.bary[1] * qp.bary[2];
        for (int i = 0; i < 3; ++i) {
            l[2 * i + 0] += c * qp.bary[i] * fx.x;
            l[2 * i + 1] += c * qp.bary[i] * fx.y;
        }
        l[6] += c * bub * fx.x;
        l[7] += c * bub * fx.y;
    }
    return l;
}

SparseSystem assemble_system(const Mesh& mesh, const DofMap& dofmap,
                             const SystemOptions& opts,
                             const std::function<Vec2(Vec2)>& body_force) {
    SparseSystem sys;
    sys.partition = DofPartition{dofmap.n_free_velocity, dofmap.n_pressure, 1,
                                 2 * static_cast<int>(mesh.n_triangles())};
    const int n = dofmap.n_system();
    sys.rhs = Eigen::VectorXd::Zero(n);

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 90);

    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const Mat8 A = element_stiffness(mesh, t, opts.nu, opts.strain_factor);
        const Mat3x8 B = element_divergence(mesh, t);
        const auto gdof = global_velocity_dofs(mesh, dofmap, t);

        for (int a = 0; a < 8; ++a) {
            if (dofmap.velocity_constrained[gdof[a]]) continue;
            const int row = dofmap.velocity_eq[gdof[a]];
            for (int b = 0; b < 8; ++b) {
                if (dofmap.velocity_constrained[gdof[b]])
                    sys.rhs[row] -= A(a, b) * dofmap.constraint_value[gdof[b]];
                else
                    trips.emplace_back(row, dofmap.velocity_eq[gdof[b]], A(a, b));
            }
        }
        for (int j = 0; j < 3; ++j) {
            const int prow = dofmap.pressure_eq(mesh.triangles[t].v[j]);
            for (int b = 0; b < 8; ++b) {
                if (dofmap.velocity_constrained[gdof[b]]) {
                    sys.rhs[prow] -= B(j, b) * dofmap.constraint_value[gdof[b]];
                } else {
                    const int col = dofmap.velocity_eq[gdof[b]];
                    trips.emplace_back(prow, col, B(j, b));
                    trips.emplace_back(col, prow, B(j, b));
                }
            }
        }
        const double third = mesh.signed_area(t) / 3.0;
        for (int j = 0; j < 3; ++j) {
            const int pcol = dofmap.pressure_eq(mesh.triangles[t].v[j]);
            trips.emplace_back(dofmap.mean_eq(), pcol, third);
            trips.emplace_back(pcol, dofmap.mean_eq(), third);
        }
        if (body_force) {
            const Vec8 l = element_load(mesh, t, body_force);
            for (int a = 0; a < 8; ++a)
                if (!dofmap.velocity_constrained[gdof[a]])
                    sys.rhs[dofmap.velocity_eq[gdof[a]]] += l[a];
        }
    }

    for (const auto& e : mesh.boundary_edges) {
        if (e.label != BoundaryLabel::Gamma) continue;
        const Eigen::Matrix2d M = edge_tangential_mass(mesh, e);
        Vec2 tan = edge_tangent(e);
        const int c = (tan.x != 0.0) ? 0 : 1;
        for (int k = 0; k < 2; ++k) {
            const int rdof = DofMap::vdof(e.v[k], c);
            if (dofmap.velocity_constrained[rdof]) continue;
            const int row = dofmap.velocity_eq[rdof];
            for (int l = 0; l < 2; ++l) {
                const int cdof = DofMap::vdof(e.v[l], c);
                if (dofmap.velocity_constrained[cdof])
                    sys.rhs[row] -= opts.r * M(k, l) * dofmap.constraint_value[cdof];
                else
                    trips.emplace_back(row, dofmap.velocity_eq[cdof], opts.r * M(k, l));
            }
        }
    }

    sys.matrix.resize(n, n);
    sys.matrix.setFromTriplets(trips.begin(), trips.end());
    sys.matrix.makeCompressed();
    return sys;
}

Eigen::VectorXd assemble_boundary_load(const Mesh& mesh, const DofMap& dofmap,
                                       const Eigen::VectorXd& xi) {
    if (xi.size() != dofmap.n_multipliers())
        throw std::invalid_argument("boundary load needs one value per multiplier dof");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofmap.n_system());
    for (const auto& e : mesh.boundary_edges) {
        if (e.label != BoundaryLabel::Gamma) continue;
        const Eigen::Matrix2d M = edge_tangential_mass(mesh, e);
        const double sign = tangential_trace_sign(e);
        Vec2 tan = edge_tangent(e);
        const int c = (tan.x != 0.0) ? 0 : 1;
        for (int k = 0; k < 2; ++k) {
            const int rdof = DofMap::vdof(e.v[k], c);
            if (dofmap.velocity_constrained[rdof]) continue;
            const int row = dofmap.velocity_eq[rdof];
            for (int l = 0; l < 2; ++l) {
                const int m = dofmap.vertex_multiplier[e.v[l]];
                if (m >= 0) rhs[row] += sign * M(k, l) * xi[m];
            }
        }
    }
    return rhs;
}

Eigen::VectorXd weak_divergence(const Mesh& mesh, const DofMap& dofmap,
                                const Eigen::VectorXd& velocity) {
    if (velocity.size() != dofmap.n_velocity)
        throw std::invalid_argument("weak divergence needs the full velocity vector");
    Eigen::VectorXd div = Eigen::VectorXd::Zero(dofmap.n_pressure);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const Mat3x8 B = element_divergence(mesh, t);
        const auto gdof = global_velocity_dofs(mesh, dofmap, t);
        Vec8 u;
        for (int b = 0; b < 8; ++b) u[b] = velocity[gdof[b]];
        const Eigen::Vector3d local = B * u;
        for (int j = 0; j < 3; ++j) div[mesh.triangles[t].v[j]] += local[j];
    }
    return div;
}

double integrate_pressure(const Mesh& mesh, const Eigen::VectorXd& pressure) {
    if (pressure.size() != mesh.n_vertices())
        throw std::invalid_argument("pressure vector size mismatch");
    double total = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const double third = mesh.signed_area(t) / 3.0;
        for (int j = 0; j < 3; ++j) total += third * pressure[mesh.triangles[t].v[j]];
    }
    return total;
}

}  // namespace tstokes
