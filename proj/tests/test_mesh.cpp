#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "tstokes/mesh.hpp"

using namespace tstokes;

namespace {

const BoundarySpec kSlipTopBottom{BoundaryLabel::Gamma0, BoundaryLabel::Gamma0,
                                  BoundaryLabel::Gamma, BoundaryLabel::Gamma};

Vec2 centroid(const Mesh& m, int t) {
    const auto& tr = m.triangles[t];
    return (1.0 / 3.0) *
           (m.vertices[tr.v[0]] + m.vertices[tr.v[1]] + m.vertices[tr.v[2]]);
}

}  // namespace

TEST_CASE("structured mesh entity counts") {
    const Mesh m = structured_rect_mesh(4, 3, 2.0, 1.5);
    CHECK(m.n_vertices() == 5 * 4);
    CHECK(m.n_triangles() == 2 * 4 * 3);
    CHECK(m.boundary_edges.size() == 2 * (4 + 3));
    CHECK(m.nx == 4);
    CHECK(m.ny == 3);
    CHECK(m.lx == 2.0);
    CHECK(m.ly == 1.5);
}

TEST_CASE("triangles are counter-clockwise and tile the rectangle") {
    const Mesh m = structured_rect_mesh(5, 7, 0.1, 0.1);
    double total = 0.0;
    for (int t = 0; t < m.n_triangles(); ++t) {
        const double area = m.signed_area(t);
        CHECK(area > 0.0);
        total += area;
    }
    CHECK(total == doctest::Approx(0.1 * 0.1).epsilon(1e-14));
}

TEST_CASE("h is the longest edge") {
    const Mesh m = structured_rect_mesh(4, 3, 2.0, 1.5);
    double longest = 0.0;
    for (const auto& tr : m.triangles)
        for (int e = 0; e < 3; ++e) {
            const Vec2 d = m.vertices[tr.v[(e + 1) % 3]] - m.vertices[tr.v[e]];
            longest = std::max(longest, norm(d));
        }
    CHECK(m.h == doctest::Approx(longest).epsilon(1e-15));
    CHECK(m.h == doctest::Approx(std::hypot(2.0 / 4, 1.5 / 3)).epsilon(1e-15));
}

TEST_CASE("halving the cells halves h") {
    const Mesh coarse = structured_rect_mesh(16, 16, 0.1, 0.1);
    const Mesh fine = structured_rect_mesh(32, 32, 0.1, 0.1);
    CHECK(fine.h == doctest::Approx(coarse.h / 2).epsilon(1e-15));
}

TEST_CASE("coarse vertices reappear bitwise in a nested refinement") {
    const Mesh coarse = structured_rect_mesh(4, 4, 0.1, 0.1);
    const Mesh fine = structured_rect_mesh(8, 8, 0.1, 0.1);
    for (int j = 0; j <= 4; ++j)
        for (int i = 0; i <= 4; ++i) {
            const Vec2 pc = coarse.vertices[j * 5 + i];
            const Vec2 pf = fine.vertices[2 * j * 9 + 2 * i];
            CHECK(pc.x == pf.x);
            CHECK(pc.y == pf.y);
        }
}

TEST_CASE("boundary edge normals are outward unit vectors orthogonal to the edge") {
    const Mesh m = structured_rect_mesh(3, 4, 1.0, 2.0);
    for (const auto& e : m.boundary_edges) {
        CHECK(norm(e.normal) == doctest::Approx(1.0).epsilon(1e-14));
        const Vec2 along = m.vertices[e.v[1]] - m.vertices[e.v[0]];
        CHECK(std::abs(dot(e.normal, along)) < 1e-14);
        const Vec2 mid = 0.5 * (m.vertices[e.v[0]] + m.vertices[e.v[1]]);
        const Vec2 inward = centroid(m, e.triangle) - mid;
        CHECK(dot(e.normal, inward) < 0.0);
    }
}

TEST_CASE("every boundary edge knows its owning triangle") {
    const Mesh m = structured_rect_mesh(3, 3, 1.0, 1.0);
    for (const auto& e : m.boundary_edges) {
        const auto& tv = m.triangles[e.triangle].v;
        const std::set<int> verts(tv.begin(), tv.end());
        CHECK(verts.count(e.v[0]) == 1);
        CHECK(verts.count(e.v[1]) == 1);
    }
}

TEST_CASE("locate_triangle inverts the centroid map") {
    const Mesh m = structured_rect_mesh(6, 5, 0.1, 0.1);
    for (int t = 0; t < m.n_triangles(); ++t) CHECK(m.locate_triangle(centroid(m, t)) == t);
}

TEST_CASE("locate_triangle clamps points outside the domain") {
    const Mesh m = structured_rect_mesh(4, 4, 1.0, 1.0);
    CHECK(m.locate_triangle({-0.3, -0.3}) == m.locate_triangle({1e-12, 1e-13}));
    const int t = m.locate_triangle({2.0, 2.0});
    CHECK(t >= 0);
    CHECK(t < m.n_triangles());
}

TEST_CASE("tagging relabels whole sides") {
    const Mesh m = tag_boundary(structured_rect_mesh(4, 4, 0.1, 0.1), kSlipTopBottom);
    for (const auto& e : m.boundary_edges) {
        const bool horizontal = (e.side == Side::Bottom || e.side == Side::Top);
        CHECK(e.label == (horizontal ? BoundaryLabel::Gamma : BoundaryLabel::Gamma0));
    }
}

TEST_CASE("gamma arclength of the slip walls is 0.2 and refinement-invariant") {
    for (int n : {2, 4, 16}) {
        const Mesh m = tag_boundary(structured_rect_mesh(n, n, 0.1, 0.1), kSlipTopBottom);
        CHECK(boundary_arclength(m, BoundaryLabel::Gamma) ==
              doctest::Approx(0.2).epsilon(1e-14));
        CHECK(boundary_arclength(m, BoundaryLabel::Gamma0) ==
              doctest::Approx(0.2).epsilon(1e-14));
    }
}

TEST_CASE("arclength is zero without gamma sides") {
    const Mesh m = structured_rect_mesh(4, 4, 0.1, 0.1);
    CHECK(boundary_arclength(m, BoundaryLabel::Gamma) == 0.0);
    CHECK(boundary_arclength(m, BoundaryLabel::Gamma0) ==
          doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("invalid construction arguments throw") {
    CHECK_THROWS_AS(structured_rect_mesh(0, 4, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(structured_rect_mesh(4, -1, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(structured_rect_mesh(4, 4, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(structured_rect_mesh(4, 4, 1.0, -2.0), std::invalid_argument);
}
