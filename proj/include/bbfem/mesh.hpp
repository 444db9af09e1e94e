#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace bbfem {

enum class BoundaryTag { interior, wall };

/// An edge shared by cell[0] ("minus") and cell[1] ("plus"), or a boundary
/// edge with cell[1] = -1. local[s] is the local vertex of cell[s] opposite
/// the edge. The facet's canonical direction runs from its lower to its
/// higher global vertex id; flip[s] is set when cell[s]'s local traversal
/// (lower to higher local vertex) runs the other way.
struct Facet {
    std::array<int, 2> cell{-1, -1};
    std::array<int, 2> local{-1, -1};
    std::array<bool, 2> flip{false, false};
    BoundaryTag tag = BoundaryTag::interior;

    bool boundary() const { return cell[1] < 0; }
};

/// Affine triangulation in the plane.
struct SimplexMesh {
    std::vector<std::array<double, 2>> vertices;
    std::vector<std::array<int, 3>> cells;
    std::vector<Facet> facets;
    std::vector<std::array<int, 3>> cell_facets; // facet id opposite each local vertex
    bool periodic = false;

    std::size_t num_cells() const { return cells.size(); }
    std::size_t num_facets() const { return facets.size(); }
};

/// Unit square cut into m x m squares, each split along its (i,j)-(i+1,j+1)
/// diagonal, 2m^2 triangles. With `periodic` opposite boundary edges are
/// identified; otherwise they become wall facets.
SimplexMesh build_structured_mesh(int m, bool periodic);

struct CellGeometry {
    double area = 0.0;
    std::array<std::array<double, 2>, 3> x{};      // vertex coordinates
    std::array<std::array<double, 2>, 3> grad_b{}; // gradients of the barycentric coordinates
};

CellGeometry cell_geometry(const SimplexMesh& mesh, std::size_t c);

struct FacetGeometry {
    double length = 0.0;
    std::array<double, 2> normal{}; // unit, outward from cell[0]
};

FacetGeometry facet_geometry(const SimplexMesh& mesh, std::size_t f);

/// Shortest edge length over the mesh.
double min_edge_length(const SimplexMesh& mesh);

// Text format, one table per section:
//   vertices,<count>          then rows  x,y
//   cells,<count>             then rows  v0,v1,v2
//   facets,<count>,<periodic> then rows  cell0,local0,flip0,cell1,local1,flip1,tag
// Rows are listed in id order; tag is 0 (interior) or 1 (wall).
void write_mesh(std::ostream& out, const SimplexMesh& mesh);
SimplexMesh read_mesh(std::istream& in);

} // namespace bbfem
