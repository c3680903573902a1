#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace tstokes {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

enum class BoundaryLabel : std::uint8_t { Gamma0 = 0, Gamma = 1 };

enum class Side : std::uint8_t { Left = 0, Right = 1, Bottom = 2, Top = 3 };

/// Per-side boundary labels; any mix of Gamma0 and Gamma sides is legal.
struct BoundarySpec {
    BoundaryLabel left = BoundaryLabel::Gamma0;
    BoundaryLabel right = BoundaryLabel::Gamma0;
    BoundaryLabel bottom = BoundaryLabel::Gamma0;
    BoundaryLabel top = BoundaryLabel::Gamma0;

    BoundaryLabel label(Side s) const {
        switch (s) {
            case Side::Left: return left;
            case Side::Right: return right;
            case Side::Bottom: return bottom;
            case Side::Top: return top;
        }
        return BoundaryLabel::Gamma0;
    }
    bool has_gamma0() const {
        return left == BoundaryLabel::Gamma0 || right == BoundaryLabel::Gamma0 ||
               bottom == BoundaryLabel::Gamma0 || top == BoundaryLabel::Gamma0;
    }
};

struct Triangle {
    std::array<int, 3> v = {-1, -1, -1};  // counter-clockwise
};

struct BoundaryEdge {
    std::array<int, 2> v = {-1, -1};  // endpoints, ascending along the side
    int triangle = -1;                // the unique owning triangle
    Side side = Side::Bottom;
    BoundaryLabel label = BoundaryLabel::Gamma0;
    Vec2 normal;                      // outward unit normal
};

/// Structured triangulation of [0,Lx] x [0,Ly]. Immutable after construction;
/// tag_boundary returns a relabeled copy.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<Triangle> triangles;
    std::vector<BoundaryEdge> boundary_edges;
    double h = 0.0;  // max edge length

    // structured layout (used for nested point location)
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }

    double signed_area(int t) const {
        const Vec2 a = vertices[triangles[t].v[0]];
        const Vec2 b = vertices[triangles[t].v[1]];
        const Vec2 c = vertices[triangles[t].v[2]];
        return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
    }

    double edge_length(const BoundaryEdge& e) const {
        return norm(vertices[e.v[1]] - vertices[e.v[0]]);
    }

    /// Index of the triangle containing p (clamped to the domain). Uses the
    /// fixed cell/diagonal structure, so it is exact for nested meshes.
    int locate_triangle(Vec2 p) const;
};

/// nx-by-ny cell grid, every cell split along the bottom-left -> top-right
/// diagonal. All boundary edges start out labeled Gamma0.
Mesh structured_rect_mesh(int nx, int ny, double lx, double ly);

/// Relabel the boundary per side.
Mesh tag_boundary(Mesh mesh, const BoundarySpec& spec);

/// Total length of the boundary edges carrying the given label.
double boundary_arclength(const Mesh& mesh, BoundaryLabel label);

}  // namespace tstokes
