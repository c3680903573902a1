#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "tstokes/assembly.hpp"
#include "tstokes/linalg.hpp"
#include "tstokes/mesh.hpp"
#include "tstokes/spaces.hpp"

using namespace tstokes;

namespace {

// single-triangle mesh wrapping arbitrary ccw vertices
Mesh make_tri_mesh(Vec2 a, Vec2 b, Vec2 c) {
    Mesh m;
    m.vertices = {a, b, c};
    m.triangles = {Triangle{{0, 1, 2}}};
    m.h = std::max({norm(b - a), norm(c - b), norm(a - c)});
    m.nx = m.ny = 1;
    m.lx = m.ly = 1.0;
    return m;
}

struct RandomTri {
    Vec2 a, b, c;
};

RandomTri random_triangle(std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        Vec2 a{unit(rng), unit(rng)}, b{unit(rng), unit(rng)}, c{unit(rng), unit(rng)};
        const double twice_area =
            (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        if (std::abs(twice_area) < 0.05) continue;
        if (twice_area < 0.0) std::swap(b, c);
        return {a, b, c};
    }
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("triangle rule integrates barycentric monomials through degree 5") {
    const auto& rule = tri_quadrature_d5();
    double wsum = 0.0;
    for (const auto& qp : rule) {
        wsum += qp.weight;
        for (double l : qp.bary) {
            CHECK(l >= 0.0);
            CHECK(l <= 1.0);
        }
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));

    // int_T l1^i l2^j l3^k = 2|T| i! j! k! / (i+j+k+2)!
    const double area = 0.37;
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; i + j <= 5; ++j) {
            const int k = 5 - i - j;
            double quad = 0.0;
            for (const auto& qp : rule)
                quad += qp.weight * std::pow(qp.bary[0], i) * std::pow(qp.bary[1], j) *
                        std::pow(qp.bary[2], k);
            const double exact = 2.0 * factorial(i) * factorial(j) * factorial(k) /
                                 factorial(i + j + k + 2);
            CHECK(quad * area == doctest::Approx(exact * area).epsilon(1e-13));
        }
}

TEST_CASE("edge rule integrates polynomials through degree 5") {
    const auto& rule = edge_quadrature_d5();
    for (int k = 0; k <= 5; ++k) {
        double quad = 0.0, wsum = 0.0;
        for (const auto& qp : rule) {
            quad += qp.weight * std::pow(qp.s, k);
            wsum += qp.weight;
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(quad == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
}

TEST_CASE("element stiffness matches the independent quadrature oracle") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const RandomTri tri = random_triangle(rng);
        const Mesh m = make_tri_mesh(tri.a, tri.b, tri.c);
        for (int sf : {1, 2}) {
            const Mat8 A = element_stiffness(m, 0, 0.1, sf);
            const auto ref = oracle::stiffness({tri.a.x, tri.a.y}, {tri.b.x, tri.b.y},
                                               {tri.c.x, tri.c.y}, 0.1, sf);
            double scale = 0.0;
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) scale = std::max(scale, std::abs(ref[i][j]));
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j)
                    CHECK(std::abs(A(i, j) - ref[i][j]) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("element divergence matches the independent quadrature oracle") {
    std::mt19937 rng(102);
    for (int trial = 0; trial < 20; ++trial) {
        const RandomTri tri = random_triangle(rng);
        const Mesh m = make_tri_mesh(tri.a, tri.b, tri.c);
        const Mat3x8 B = element_divergence(m, 0);
        const auto ref = oracle::divergence({tri.a.x, tri.a.y}, {tri.b.x, tri.b.y},
                                            {tri.c.x, tri.c.y});
        double scale = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 8; ++i) scale = std::max(scale, std::abs(ref[j][i]));
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 8; ++i) CHECK(std::abs(B(j, i) - ref[j][i]) <= 1e-10 * scale);
    }
}

TEST_CASE("stiffness kernel is exactly the rigid motions") {
    std::mt19937 rng(103);
    const RandomTri tri = random_triangle(rng);
    const Mesh m = make_tri_mesh(tri.a, tri.b, tri.c);
    const Mat8 A = element_stiffness(m, 0, 1.0, 2);

    const auto motion = [&](Vec2 (*f)(Vec2)) {
        Vec8 u = Vec8::Zero();
        for (int i = 0; i < 3; ++i) {
            const Vec2 v = f(m.vertices[i]);
            u[2 * i] = v.x;
            u[2 * i + 1] = v.y;
        }
        return u;
    };
    const Vec8 tx = motion([](Vec2) { return Vec2{1.0, 0.0}; });
    const Vec8 ty = motion([](Vec2) { return Vec2{0.0, 1.0}; });
    const Vec8 rot = motion([](Vec2 q) { return Vec2{-q.y, q.x}; });
    const double scale = A.cwiseAbs().maxCoeff();
    CHECK((A * tx).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    CHECK((A * ty).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    CHECK((A * rot).cwiseAbs().maxCoeff() <= 1e-12 * scale);

    // a pure shear is not in the kernel
    const Vec8 shear = motion([](Vec2 q) { return Vec2{q.y, 0.0}; });
    CHECK((A * shear).cwiseAbs().maxCoeff() > 1e-6 * scale);
}

TEST_CASE("strain factor scales the viscous form linearly") {
    std::mt19937 rng(104);
    const RandomTri tri = random_triangle(rng);
    const Mesh m = make_tri_mesh(tri.a, tri.b, tri.c);
    const Mat8 A1 = element_stiffness(m, 0, 0.1, 1);
    const Mat8 A2 = element_stiffness(m, 0, 0.1, 2);
    CHECK((A2 - 2.0 * A1).cwiseAbs().maxCoeff() <= 1e-14 * A2.cwiseAbs().maxCoeff());
}

TEST_CASE("divergence annihilates constants and pairs v=(x,0) with -area") {
    std::mt19937 rng(105);
    const RandomTri tri = random_triangle(rng);
    const Mesh m = make_tri_mesh(tri.a, tri.b, tri.c);
    const Mat3x8 B = element_divergence(m, 0);
    const double area = m.signed_area(0);

    Vec8 cx = Vec8::Zero();
    for (int i = 0; i < 3; ++i) cx[2 * i] = 1.0;
    CHECK((B * cx).cwiseAbs().maxCoeff() <= 1e-13);

    // div (x,0) = 1, so each pressure row integrates -psi_j and their sum is -area
    Vec8 vx = Vec8::Zero();
    for (int i = 0; i < 3; ++i) vx[2 * i] = m.vertices[i].x;
    const Eigen::Vector3d rows = B * vx;
    CHECK(rows.sum() == doctest::Approx(-area).epsilon(1e-12));
    for (int j = 0; j < 3; ++j)
        CHECK(rows[j] == doctest::Approx(-area / 3.0).epsilon(1e-12));
}

TEST_CASE("edge mass is (L/6)[[2,1],[1,2]] and matches the oracle") {
    const Mesh m = tag_boundary(structured_rect_mesh(2, 2, 0.1, 0.1),
                                BoundarySpec{BoundaryLabel::Gamma0, BoundaryLabel::Gamma0,
                                             BoundaryLabel::Gamma, BoundaryLabel::Gamma});
    for (const auto& e : m.boundary_edges) {
        if (e.label != BoundaryLabel::Gamma) continue;
        const Eigen::Matrix2d M = edge_tangential_mass(m, e);
        const double L = m.edge_length(e);
        CHECK(L == doctest::Approx(0.05).epsilon(1e-15));
        CHECK(M(0, 0) == doctest::Approx(L / 3.0).epsilon(1e-13));
        CHECK(M(1, 1) == doctest::Approx(L / 3.0).epsilon(1e-13));
        CHECK(M(0, 1) == doctest::Approx(L / 6.0).epsilon(1e-13));
        CHECK(M(1, 0) == doctest::Approx(L / 6.0).epsilon(1e-13));

        const Vec2 p = m.vertices[e.v[0]], q = m.vertices[e.v[1]];
        const auto ref = oracle::segment_mass({p.x, p.y}, {q.x, q.y});
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(M(i, j) == doctest::Approx(ref[i][j]).epsilon(1e-12));
    }
}

TEST_CASE("element load matches the independent quadrature oracle") {
    std::mt19937 rng(106);
    // quadratic forcing keeps even the bubble-row integrand within both
    // rules' exactness degree, so the comparison is quadrature-error free
    const auto f = [](Vec2 q) {
        return Vec2{3.0 * q.x * q.x - q.y + 1.0, q.x * q.y - 2.0 * q.y * q.y};
    };
    for (int trial = 0; trial < 10; ++trial) {
        const RandomTri tri = random_triangle(rng);
        const Mesh m = make_tri_mesh(tri.a, tri.b, tri.c);
        const Vec8 l = element_load(m, 0, f);
        const auto ref = oracle::load(
            {tri.a.x, tri.a.y}, {tri.b.x, tri.b.y}, {tri.c.x, tri.c.y},
            [&](double x, double y) {
                const Vec2 v = f({x, y});
                return std::array<double, 2>{v.x, v.y};
            });
        for (int i = 0; i < 8; ++i)
            CHECK(l[i] == doctest::Approx(ref[i]).epsilon(1e-10));
    }
}

TEST_CASE("boundary load vanishes for xi = 0 and integrates xi = 1 to L - 4h/3") {
    const auto wall_sums = [](int n, double& bottom, double& top) {
        const Mesh m = tag_boundary(
            structured_rect_mesh(n, n, 0.1, 0.1),
            BoundarySpec{BoundaryLabel::Gamma0, BoundaryLabel::Gamma0,
                         BoundaryLabel::Gamma, BoundaryLabel::Gamma});
        const DofMap dm = build_dofmap(m);
        const Eigen::VectorXd zero =
            assemble_boundary_load(m, dm, Eigen::VectorXd::Zero(dm.n_multipliers()));
        CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
        const Eigen::VectorXd load =
            assemble_boundary_load(m, dm, Eigen::VectorXd::Ones(dm.n_multipliers()));
        bottom = top = 0.0;
        for (int k = 0; k < dm.n_multipliers(); ++k) {
            const int v = dm.multiplier_vertex[k];
            const int comp_dof = DofMap::vdof(v, 0);  // horizontal walls: x component
            REQUIRE(dm.velocity_eq[comp_dof] >= 0);
            const double entry = load[dm.velocity_eq[comp_dof]];
            if (m.vertices[v].y == 0.0)
                bottom += entry;
            else
                top += entry;
        }
    };

    // xi = 1 at every multiplier dof is the P1 trace ramping to 0 at the corners;
    // summing a wall's load entries gives int xi (1 - hat_c0 - hat_c1) = L - 4h/3,
    // signed by the tangential trace (-1 bottom, +1 top)
    double b8, t8, b16, t16;
    wall_sums(8, b8, t8);
    wall_sums(16, b16, t16);
    const double h8 = 0.1 / 8, h16 = 0.1 / 16;
    CHECK(b8 == doctest::Approx(-(0.1 - 4.0 * h8 / 3.0)).epsilon(1e-13));
    CHECK(t8 == doctest::Approx(0.1 - 4.0 * h8 / 3.0).epsilon(1e-13));
    CHECK(b16 == doctest::Approx(-(0.1 - 4.0 * h16 / 3.0)).epsilon(1e-13));
    CHECK(t16 == doctest::Approx(0.1 - 4.0 * h16 / 3.0).epsilon(1e-13));
    // refinement drives the sum toward the full wall length
    CHECK(std::abs(t16 - 0.1) < std::abs(t8 - 0.1));
}

TEST_CASE("boundary load is the L2 pairing with the tangential trace") {
    const Mesh m = tag_boundary(structured_rect_mesh(5, 3, 0.1, 0.1),
                                BoundarySpec{BoundaryLabel::Gamma0, BoundaryLabel::Gamma0,
                                             BoundaryLabel::Gamma, BoundaryLabel::Gamma});
    const DofMap dm = build_dofmap(m);
    std::mt19937 rng(107);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);

    Eigen::VectorXd xi(dm.n_multipliers());
    for (int k = 0; k < xi.size(); ++k) xi[k] = coef(rng);
    Eigen::VectorXd reduced = Eigen::VectorXd::Zero(dm.n_free_velocity);
    for (int i = 0; i < reduced.size(); ++i) reduced[i] = coef(rng);
    const Eigen::VectorXd u = expand_velocity(dm, reduced);

    const Eigen::VectorXd load = assemble_boundary_load(m, dm, xi);
    const double lhs = load.head(dm.n_free_velocity).dot(reduced);

    const auto xi_at = [&](int v) {
        const int k = dm.vertex_multiplier[v];
        return k >= 0 ? xi[k] : 0.0;
    };
    double rhs = 0.0;
    for (const auto& e : m.boundary_edges) {
        if (e.label != BoundaryLabel::Gamma) continue;
        const double sign = tangential_trace_sign(e);
        const int comp = (e.side == Side::Bottom || e.side == Side::Top) ? 0 : 1;
        const double ut0 = sign * u[DofMap::vdof(e.v[0], comp)];
        const double ut1 = sign * u[DofMap::vdof(e.v[1], comp)];
        const double x0 = xi_at(e.v[0]), x1 = xi_at(e.v[1]);
        const Vec2 p = m.vertices[e.v[0]], q = m.vertices[e.v[1]];
        const double len = norm(q - p);
        rhs += oracle::integrate_segment(
            {p.x, p.y}, {q.x, q.y}, [&](double x, double y) {
                const double s =
                    std::hypot(x - p.x, y - p.y) / len;
                return ((1.0 - s) * x0 + s * x1) * ((1.0 - s) * ut0 + s * ut1);
            });
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("assembled system is symmetric with the saddle layout") {
    const Mesh m = tag_boundary(structured_rect_mesh(4, 4, 0.1, 0.1),
                                BoundarySpec{BoundaryLabel::Gamma0, BoundaryLabel::Gamma0,
                                             BoundaryLabel::Gamma, BoundaryLabel::Gamma});
    const DofMap dm = build_dofmap(m);
    const SparseSystem sys = assemble_system(m, dm, SystemOptions{}, nullptr);

    CHECK(sys.partition.n_velocity == dm.n_free_velocity);
    CHECK(sys.partition.n_pressure == dm.n_pressure);
    CHECK(sys.partition.n_mean == 1);
    CHECK(sys.partition.n_bubble == 2 * m.n_triangles());
    CHECK(sys.size() == dm.n_system());

    const Eigen::SparseMatrix<double, Eigen::RowMajor> diff =
        sys.matrix - Eigen::SparseMatrix<double, Eigen::RowMajor>(sys.matrix.transpose());
    double scale = 0.0, asym = 0.0;
    for (int k = 0; k < sys.matrix.outerSize(); ++k)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.matrix, k);
             it; ++it)
            scale = std::max(scale, std::abs(it.value()));
    for (int k = 0; k < diff.outerSize(); ++k)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(diff, k); it;
             ++it)
            asym = std::max(asym, std::abs(it.value()));
    CHECK(asym <= 1e-12 * scale);
}

TEST_CASE("weak divergence vanishes on a divergence-free linear field") {
    const Mesh m = structured_rect_mesh(6, 6, 0.1, 0.1);
    const DofMap dm = build_dofmap(m);
    const Eigen::VectorXd u =
        interpolate_velocity(m, [](Vec2 q) { return Vec2{3.0 * q.x, -3.0 * q.y}; });
    const Eigen::VectorXd bu = weak_divergence(m, dm, u);
    CHECK(bu.cwiseAbs().maxCoeff() <= 1e-13);

    const Eigen::VectorXd v =
        interpolate_velocity(m, [](Vec2 q) { return Vec2{q.x, q.y}; });
    CHECK(weak_divergence(m, dm, v).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("zero body force with zero Dirichlet data gives a zero right-hand side") {
    const Mesh m = structured_rect_mesh(4, 4, 0.1, 0.1);
    const DofMap dm = build_dofmap(m);
    const SparseSystem sys = assemble_system(m, dm, SystemOptions{}, nullptr);
    CHECK(sys.rhs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constant Dirichlet data is reproduced exactly by the solve") {
    // the lift pushes boundary couplings onto the rhs; solving must recover
    // the rigid motion with idle bubbles and zero pressure
    const Mesh m = tag_boundary(structured_rect_mesh(4, 4, 0.1, 0.1), BoundarySpec{});
    const DofMap dm = build_dofmap(m, [](Vec2) { return Vec2{1.0, 0.0}; });
    const SparseSystem sys = assemble_system(m, dm, SystemOptions{}, nullptr);
    const SaddleSolver solver(sys);
    const Eigen::VectorXd x = solver.solve(sys.rhs);
    const Eigen::VectorXd u = expand_velocity(dm, x.head(dm.n_free_velocity));
    for (int v = 0; v < m.n_vertices(); ++v) {
        CHECK(u[DofMap::vdof(v, 0)] == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(std::abs(u[DofMap::vdof(v, 1)]) <= 1e-11);
    }
    for (int t = 0; t < m.n_triangles(); ++t) {
        CHECK(std::abs(u[dm.bdof(t, 0)]) <= 1e-11);
        CHECK(std::abs(u[dm.bdof(t, 1)]) <= 1e-11);
    }
    CHECK(x.segment(dm.n_free_velocity, dm.n_pressure).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("integrate_pressure is exact on linear fields") {
    const Mesh m = structured_rect_mesh(5, 4, 0.1, 0.2);
    const Eigen::VectorXd p =
        interpolate_pressure(m, [](Vec2 q) { return 2.0 * q.x - 3.0 * q.y + 0.7; });
    const double exact = 0.1 * 0.2 * (2.0 * 0.05 - 3.0 * 0.1 + 0.7);
    CHECK(integrate_pressure(m, p) == doctest::Approx(exact).epsilon(1e-13));
}
