#include "tstokes/verification.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tstokes/assembly.hpp"

namespace tstokes {

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

int side_cells(const Mesh& m, Side s) {
    return (s == Side::Bottom || s == Side::Top) ? m.nx : m.ny;
}

double side_step(const Mesh& m, Side s) {
    return (s == Side::Bottom || s == Side::Top) ? m.lx / m.nx : m.ly / m.ny;
}

int side_vertex(const Mesh& m, Side s, int i) {
    switch (s) {
        case Side::Bottom: return i;
        case Side::Top: return m.ny * (m.nx + 1) + i;
        case Side::Left: return i * (m.nx + 1);
        case Side::Right: return i * (m.nx + 1) + m.nx;
    }
    return -1;
}

double multiplier_at_vertex(const DofMap& dm, const Eigen::VectorXd& lambda, int v) {
    const int m = dm.vertex_multiplier[v];
    return m >= 0 ? lambda[m] : 0.0;
}

// P1 multiplier trace of a structured mesh at arc coordinate `coord` along a side
double multiplier_trace(const Mesh& m, const DofMap& dm, const Eigen::VectorXd& lambda,
                        Side s, double coord) {
    const int cells = side_cells(m, s);
    const double step = side_step(m, s);
    int i = static_cast<int>(std::floor(coord / step));
    i = std::max(0, std::min(cells - 1, i));
    double th = coord / step - i;
    th = std::max(0.0, std::min(1.0, th));
    const double v0 = multiplier_at_vertex(dm, lambda, side_vertex(m, s, i));
    const double v1 = multiplier_at_vertex(dm, lambda, side_vertex(m, s, i + 1));
    return (1.0 - th) * v0 + th * v1;
}

void require_nested(const Mesh& mesh, const Mesh& ref) {
    if (mesh.lx != ref.lx || mesh.ly != ref.ly)
        throw std::invalid_argument("reference comparison requires the same domain");
    if (ref.nx % mesh.nx != 0 || ref.ny % mesh.ny != 0)
        throw std::invalid_argument("reference mesh must be a nested refinement");
}

}  // namespace

ManufacturedCase test1_case(int strain_factor, bool legacy_u2) {
    if (strain_factor != 1 && strain_factor != 2)
        throw std::invalid_argument("strain_factor must be 1 or 2");
    ManufacturedCase mc;
    mc.strain_factor = strain_factor;
    // friction runs: slip allowed on the horizontal walls, Dirichlet on the vertical ones
    mc.boundary = BoundarySpec{BoundaryLabel::Gamma0, BoundaryLabel::Gamma0,
                               BoundaryLabel::Gamma, BoundaryLabel::Gamma};

    const double a = 20.0 * std::numbers::pi;
    const double c = 0.5 * strain_factor * mc.nu;  // -div(s nu eps(u)) = -(s nu / 2) lap(u)

    mc.velocity = [a, legacy_u2](Vec2 q) {
        const double u1 = std::sin(a * q.y) * (1.0 - std::cos(a * q.x));
        const double u2 = legacy_u2
                              ? -std::sin(a * q.x) * std::cos(a * q.y) - std::sin(a * q.y)
                              : -std::sin(a * q.x) * (1.0 - std::cos(a * q.y));
        return Vec2{u1, u2};
    };
    mc.velocity_gradient = [a, legacy_u2](Vec2 q) {
        Eigen::Matrix2d G;
        G(0, 0) = a * std::sin(a * q.x) * std::sin(a * q.y);
        G(0, 1) = a * std::cos(a * q.y) * (1.0 - std::cos(a * q.x));
        if (legacy_u2) {
            G(1, 0) = -a * std::cos(a * q.x) * std::cos(a * q.y);
            G(1, 1) = a * std::sin(a * q.x) * std::sin(a * q.y) - a * std::cos(a * q.y);
        } else {
            G(1, 0) = -a * std::cos(a * q.x) * (1.0 - std::cos(a * q.y));
            G(1, 1) = -a * std::sin(a * q.x) * std::sin(a * q.y);
        }
        return G;
    };
    mc.pressure = [a](Vec2 q) { return a * (std::cos(a * q.y) - std::cos(a * q.x)); };
    mc.body_force = [a, c, legacy_u2](Vec2 q) {
        const double sx = std::sin(a * q.x), cx = std::cos(a * q.x);
        const double sy = std::sin(a * q.y), cy = std::cos(a * q.y);
        const double lap1 = a * a * sy * (2.0 * cx - 1.0);
        const double lap2 = legacy_u2 ? a * a * (2.0 * sx * cy + sy)
                                      : a * a * sx * (1.0 - 2.0 * cy);
        return Vec2{-c * lap1 + a * a * sx, -c * lap2 - a * a * sy};
    };
    return mc;
}

FrictionCase test2_case() {
    FrictionCase fc;
    fc.lx = fc.ly = 1.0;  // profile zeros must sit on the slip walls
    fc.boundary = BoundarySpec{BoundaryLabel::Gamma0, BoundaryLabel::Gamma0,
                               BoundaryLabel::Gamma, BoundaryLabel::Gamma};
    fc.dirichlet = [](Vec2 q) {
        const double w = q.y * (1.0 - q.y);
        return Vec2{w, -w};
    };
    return fc;
}

ErrorNorms error_norms(const Mesh& mesh, const DofMap& dofmap,
                       const FieldSolution& fields, const ManufacturedCase& exact) {
    if (fields.velocity.size() != dofmap.n_velocity ||
        fields.pressure.size() != dofmap.n_pressure)
        throw std::invalid_argument("field sizes do not match the dof map");
    double s0 = 0.0, s1 = 0.0, sp = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area = mesh.signed_area(t);
        for (const auto& qp : tri_quadrature_d5()) {
            const Vec2 x = qp.bary[0] * mesh.vertices[tri.v[0]] +
                           qp.bary[1] * mesh.vertices[tri.v[1]] +
                           qp.bary[2] * mesh.vertices[tri.v[2]];
            const Vec2 du = eval_velocity(mesh, dofmap, fields.velocity, t, x) -
                            exact.velocity(x);
            const Eigen::Matrix2d dG =
                eval_velocity_gradient(mesh, dofmap, fields.velocity, t, x) -
                exact.velocity_gradient(x);
            const double dp = eval_pressure(mesh, fields.pressure, t, x) - exact.pressure(x);
            const double w = qp.weight * area;
            s0 += w * (du.x * du.x + du.y * du.y);
            s1 += w * dG.squaredNorm();
            sp += w * dp * dp;
        }
    }
    return ErrorNorms{std::sqrt(s0), std::sqrt(s0 + s1), std::sqrt(sp)};
}

ErrorNorms error_norms_vs_reference(const Mesh& mesh, const DofMap& dofmap,
                                    const FieldSolution& fields, const Mesh& ref_mesh,
                                    const DofMap& ref_dofmap, const FieldSolution& ref) {
    require_nested(mesh, ref_mesh);
    if (fields.velocity.size() != dofmap.n_velocity ||
        ref.velocity.size() != ref_dofmap.n_velocity)
        throw std::invalid_argument("field sizes do not match the dof maps");
    double s0 = 0.0, s1 = 0.0, sp = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area = mesh.signed_area(t);
        for (const auto& qp : tri_quadrature_d5()) {
            const Vec2 x = qp.bary[0] * mesh.vertices[tri.v[0]] +
                           qp.bary[1] * mesh.vertices[tri.v[1]] +
                           qp.bary[2] * mesh.vertices[tri.v[2]];
            const int tf = ref_mesh.locate_triangle(x);
            const Vec2 du = eval_velocity(mesh, dofmap, fields.velocity, t, x) -
                            eval_velocity(ref_mesh, ref_dofmap, ref.velocity, tf, x);
            const Eigen::Matrix2d dG =
                eval_velocity_gradient(mesh, dofmap, fields.velocity, t, x) -
                eval_velocity_gradient(ref_mesh, ref_dofmap, ref.velocity, tf, x);
            const double dp = eval_pressure(mesh, fields.pressure, t, x) -
                              eval_pressure(ref_mesh, ref.pressure, tf, x);
            const double w = qp.weight * area;
            s0 += w * (du.x * du.x + du.y * du.y);
            s1 += w * dG.squaredNorm();
            sp += w * dp * dp;
        }
    }
    return ErrorNorms{std::sqrt(s0), std::sqrt(s0 + s1), std::sqrt(sp)};
}

double multiplier_gap_vs_reference(const Mesh& mesh, const DofMap& dofmap,
                                   const Eigen::VectorXd& lambda, const Mesh& ref_mesh,
                                   const DofMap& ref_dofmap,
                                   const Eigen::VectorXd& ref_lambda) {
    require_nested(mesh, ref_mesh);
    double sum = 0.0;
    for (const auto& e : mesh.boundary_edges) {
        if (e.label != BoundaryLabel::Gamma) continue;
        const double len = mesh.edge_length(e);
        const bool horizontal = (e.side == Side::Bottom || e.side == Side::Top);
        const double c0 = horizontal ? mesh.vertices[e.v[0]].x : mesh.vertices[e.v[0]].y;
        const double c1 = horizontal ? mesh.vertices[e.v[1]].x : mesh.vertices[e.v[1]].y;
        const double l0 = multiplier_at_vertex(dofmap, lambda, e.v[0]);
        const double l1 = multiplier_at_vertex(dofmap, lambda, e.v[1]);
        for (const auto& qp : edge_quadrature_d5()) {
            const double coord = (1.0 - qp.s) * c0 + qp.s * c1;
            const double coarse = (1.0 - qp.s) * l0 + qp.s * l1;
            const double fine =
                multiplier_trace(ref_mesh, ref_dofmap, ref_lambda, e.side, coord);
            sum += qp.weight * len * (coarse - fine) * (coarse - fine);
        }
    }
    return std::sqrt(mesh.h) * std::sqrt(sum);
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs) {
    if (errors.size() != hs.size() || errors.size() < 2)
        throw std::invalid_argument("eoc needs matching lists of length >= 2");
    for (std::size_t i = 1; i < hs.size(); ++i)
        if (!(hs[i] < hs[i - 1]))
            throw std::invalid_argument("eoc needs strictly decreasing mesh sizes");
    std::vector<double> rates(errors.size() - 1);
    for (std::size_t i = 1; i < errors.size(); ++i) {
        if (errors[i - 1] > 0.0 && errors[i] > 0.0)
            rates[i - 1] = std::log(errors[i - 1] / errors[i]) / std::log(hs[i - 1] / hs[i]);
        else
            rates[i - 1] = std::numeric_limits<double>::quiet_NaN();
    }
    return rates;
}

namespace {

void fill_alphas(StudyReport& rep) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> hs, e0s, e1s, eps_;
    for (const auto& row : rep.rows) {
        hs.push_back(row.h);
        e0s.push_back(row.e0);
        e1s.push_back(row.e1);
        eps_.push_back(row.ep);
    }
    for (auto& row : rep.rows) row.alpha0 = row.alpha1 = row.alphap = nan;
    if (rep.rows.size() < 2) return;
    const auto a0 = eoc(e0s, hs), a1 = eoc(e1s, hs), ap = eoc(eps_, hs);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        rep.rows[i].alpha0 = a0[i - 1];
        rep.rows[i].alpha1 = a1[i - 1];
        rep.rows[i].alphap = ap[i - 1];
    }
}

}  // namespace

StudyReport run_test1_study(const std::vector<int>& ns, int strain_factor, bool legacy_u2) {
    const ManufacturedCase mc = test1_case(strain_factor, legacy_u2);
    const BoundarySpec dirichlet_everywhere{BoundaryLabel::Gamma0, BoundaryLabel::Gamma0,
                                            BoundaryLabel::Gamma0, BoundaryLabel::Gamma0};
    StudyReport rep;
    for (int n : ns) {
        const Mesh mesh =
            tag_boundary(structured_rect_mesh(n, n, mc.lx, mc.ly), dirichlet_everywhere);
        TrescaConfig cfg;
        cfg.nu = mc.nu;
        cfg.tol = mc.tol;
        cfg.strain_factor = strain_factor;
        cfg.dirichlet = mc.velocity;
        cfg.body_force = mc.body_force;
        const double t0 = now_seconds();
        const Alg2Result res = alg2_solve(mesh, cfg);
        const double t1 = now_seconds();
        const ErrorNorms err = error_norms(mesh, res.dofmap, res.fields, mc);
        StudyRow row;
        row.n = n;
        row.h = mesh.h;
        row.e0 = err.e0;
        row.e1 = err.e1;
        row.ep = err.ep;
        row.iters = res.iterations;
        row.converged = res.converged;
        row.seconds = t1 - t0;
        rep.rows.push_back(row);
    }
    fill_alphas(rep);
    return rep;
}

StudyReport run_test2_study(const std::vector<int>& ns, const StudyConfig& cfg) {
    const FrictionCase fc = test2_case();
    TrescaConfig tc;
    tc.nu = fc.nu;
    tc.r = cfg.r;
    tc.rho = cfg.rho;
    tc.tol = cfg.tol;
    tc.max_iters = cfg.max_iters;
    tc.strain_factor = cfg.strain_factor;
    tc.g = [g = cfg.g](Vec2) { return g; };
    tc.dirichlet = fc.dirichlet;

    StudyReport rep;
    rep.ref_n = cfg.ref_n;
    const Mesh ref_mesh =
        tag_boundary(structured_rect_mesh(cfg.ref_n, cfg.ref_n, fc.lx, fc.ly), fc.boundary);
    const double tr0 = now_seconds();
    const Alg2Result ref = alg2_solve(ref_mesh, tc);
    rep.ref_seconds = now_seconds() - tr0;
    rep.ref_iterations = ref.iterations;
    if (!ref.converged)
        throw std::runtime_error("reference solve did not converge; study aborted");

    for (int n : ns) {
        const Mesh mesh =
            tag_boundary(structured_rect_mesh(n, n, fc.lx, fc.ly), fc.boundary);
        const double t0 = now_seconds();
        const Alg2Result res = alg2_solve(mesh, tc);
        const double t1 = now_seconds();
        const ErrorNorms err = error_norms_vs_reference(mesh, res.dofmap, res.fields,
                                                        ref_mesh, ref.dofmap, ref.fields);
        StudyRow row;
        row.n = n;
        row.h = mesh.h;
        row.e0 = err.e0;
        row.e1 = err.e1;
        row.ep = err.ep;
        row.iters = res.iterations;
        row.converged = res.converged;
        row.seconds = t1 - t0;
        rep.rows.push_back(row);
        rep.multiplier_gap.push_back(
            multiplier_gap_vs_reference(mesh, res.dofmap, res.fields.multiplier, ref_mesh,
                                        ref.dofmap, ref.fields.multiplier));
    }
    fill_alphas(rep);
    return rep;
}

std::vector<GSweepRow> run_g_sweep(int n, const std::vector<double>& gs,
                                   const StudyConfig& cfg) {
    const ManufacturedCase mc = test1_case(cfg.strain_factor);
    const Mesh mesh = tag_boundary(structured_rect_mesh(n, n, mc.lx, mc.ly), mc.boundary);
    std::vector<GSweepRow> rows;
    for (double g : gs) {
        TrescaConfig tc;
        tc.nu = mc.nu;
        tc.r = cfg.r;
        tc.rho = cfg.rho;
        tc.tol = cfg.tol;
        tc.max_iters = cfg.max_iters;
        tc.strain_factor = cfg.strain_factor;
        tc.g = [g](Vec2) { return g; };
        tc.dirichlet = mc.velocity;
        tc.body_force = mc.body_force;
        const Alg2Result res = alg2_solve(mesh, tc);
        GSweepRow row;
        row.g = g;
        row.errors = error_norms(mesh, res.dofmap, res.fields, mc);
        row.iterations = res.iterations;
        row.converged = res.converged;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace tstokes
