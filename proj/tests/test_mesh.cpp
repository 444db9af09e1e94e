#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bbfem/mesh.hpp"

using namespace bbfem;

namespace {

std::array<double, 2> edge_point(const SimplexMesh& mesh, int cell, int v, double s, bool flip)
{
    // point at parameter s along the facet in its global orientation
    static const int locals[3][2] = {{1, 2}, {0, 2}, {0, 1}};
    int a = locals[v][0], b = locals[v][1];
    if (flip)
        std::swap(a, b);
    const auto& xa = mesh.vertices[mesh.cells[cell][a]];
    const auto& xb = mesh.vertices[mesh.cells[cell][b]];
    return {(1 - s) * xa[0] + s * xb[0], (1 - s) * xa[1] + s * xb[1]};
}

double wrap(double x)
{
    return x - std::floor(x + 1e-12);
}

} // namespace

TEST_CASE("structured mesh sizes")
{
    CHECK(build_structured_mesh(32, true).num_cells() == 2048);
    const SimplexMesh a = build_structured_mesh(1, false);
    CHECK(a.num_cells() == 2);
    CHECK(a.num_facets() == 5);
    int interior = 0;
    for (const auto& f : a.facets)
        interior += !f.boundary();
    CHECK(interior == 1);

    const SimplexMesh b = build_structured_mesh(1, true);
    CHECK(b.num_cells() == 2);
    CHECK(b.num_facets() == 3);
    for (const auto& f : b.facets)
        CHECK_FALSE(f.boundary());

    const SimplexMesh c = build_structured_mesh(5, false);
    CHECK(c.num_facets() == 3 * 25 + 10);
    CHECK_THROWS_AS(build_structured_mesh(0, true), std::invalid_argument);
}

TEST_CASE("facets are conforming and consistently oriented")
{
    for (bool periodic : {false, true})
        for (int m : {1, 2, 3, 6}) {
            const SimplexMesh mesh = build_structured_mesh(m, periodic);
            std::vector<int> refs(mesh.num_facets(), 0);
            for (const auto& cf : mesh.cell_facets)
                for (int f : cf)
                    ++refs[f];
            for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
                const Facet& fc = mesh.facets[f];
                CHECK(refs[f] == (fc.boundary() ? 1 : 2));
                CHECK((fc.tag == BoundaryTag::wall) == fc.boundary());
                if (fc.boundary())
                    continue;
                for (double s : {0.0, 0.3, 1.0}) {
                    const auto p = edge_point(mesh, fc.cell[0], fc.local[0], s, fc.flip[0]);
                    const auto q = edge_point(mesh, fc.cell[1], fc.local[1], s, fc.flip[1]);
                    if (periodic) {
                        CHECK(std::abs(wrap(p[0]) - wrap(q[0])) <= 1e-14);
                        CHECK(std::abs(wrap(p[1]) - wrap(q[1])) <= 1e-14);
                    } else {
                        CHECK(p == q);
                    }
                }
            }
        }
}

TEST_CASE("cell and facet geometry")
{
    const SimplexMesh mesh = build_structured_mesh(4, false);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        CHECK(g.area == doctest::Approx(1.0 / 32).epsilon(1e-14));
        for (int k = 0; k < 2; ++k)
            CHECK(std::abs(g.grad_b[0][k] + g.grad_b[1][k] + g.grad_b[2][k]) <= 1e-13);
        // b_i is affine with b_i(x_0) = delta_i0, so b_i(x_j) follows from the gradients
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double bij = (i == 0 ? 1.0 : 0.0) + g.grad_b[i][0] * (g.x[j][0] - g.x[0][0]) +
                                   g.grad_b[i][1] * (g.x[j][1] - g.x[0][1]);
                CHECK(std::abs(bij - (i == j ? 1.0 : 0.0)) <= 1e-13);
            }
    }
    for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
        const Facet& fc = mesh.facets[f];
        const FacetGeometry g = facet_geometry(mesh, f);
        CHECK(std::hypot(g.normal[0], g.normal[1]) == doctest::Approx(1.0));
        // outward: points away from the opposite vertex of cell[0]
        const auto& xo = mesh.vertices[mesh.cells[fc.cell[0]][fc.local[0]]];
        const auto xm = edge_point(mesh, fc.cell[0], fc.local[0], 0.5, false);
        CHECK(g.normal[0] * (xm[0] - xo[0]) + g.normal[1] * (xm[1] - xo[1]) > 0.0);
        if (fc.boundary()) {
            // boundary normals point out of the unit square
            CHECK(g.normal[0] * (xm[0] - 0.5) + g.normal[1] * (xm[1] - 0.5) > 0.0);
        }
    }
    CHECK(min_edge_length(mesh) == doctest::Approx(0.25));
}

TEST_CASE("mesh text round trip")
{
    for (bool periodic : {false, true}) {
        const SimplexMesh mesh = build_structured_mesh(3, periodic);
        std::stringstream ss;
        write_mesh(ss, mesh);
        const SimplexMesh back = read_mesh(ss);
        CHECK(back.vertices == mesh.vertices);
        CHECK(back.cells == mesh.cells);
        CHECK(back.cell_facets == mesh.cell_facets);
        CHECK(back.periodic == periodic);
        REQUIRE(back.facets.size() == mesh.facets.size());
        for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
            CHECK(back.facets[f].cell == mesh.facets[f].cell);
            CHECK(back.facets[f].local == mesh.facets[f].local);
            CHECK(back.facets[f].flip == mesh.facets[f].flip);
            CHECK(back.facets[f].tag == mesh.facets[f].tag);
        }
    }
    std::stringstream bad("vertices,1\n0,0\ncells,0\nfacets,1,0\n0,0,0,-1,-1,0,7\n");
    CHECK_THROWS_AS(read_mesh(bad), std::runtime_error);
}
