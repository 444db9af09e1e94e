#include "bbfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace bbfem {

namespace {

// Local vertices of the edge opposite local vertex v, in increasing order.
std::array<int, 2> edge_locals(int v)
{
    switch (v) {
    case 0:
        return {1, 2};
    case 1:
        return {0, 2};
    default:
        return {0, 1};
    }
}

void fill_cell_facets(SimplexMesh& mesh)
{
    mesh.cell_facets.assign(mesh.cells.size(), {-1, -1, -1});
    for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
        const Facet& fc = mesh.facets[f];
        for (int s = 0; s < (fc.boundary() ? 1 : 2); ++s)
            mesh.cell_facets[fc.cell[s]][fc.local[s]] = static_cast<int>(f);
    }
    for (const auto& cf : mesh.cell_facets)
        for (int f : cf)
            if (f < 0)
                throw std::runtime_error("mesh: cell with an unassigned facet");
}

bool local_flip(const SimplexMesh& mesh, int cell, int v)
{
    const auto [a, b] = edge_locals(v);
    return mesh.cells[cell][a] > mesh.cells[cell][b];
}

} // namespace

SimplexMesh build_structured_mesh(int m, bool periodic)
{
    if (m < 1)
        throw std::invalid_argument("build_structured_mesh: need m >= 1");
    SimplexMesh mesh;
    mesh.periodic = periodic;
    auto vid = [m](int i, int j) { return j * (m + 1) + i; };
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= m; ++i)
            mesh.vertices.push_back({double(i) / m, double(j) / m});
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            mesh.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            mesh.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }

    // Edges are matched by twice their midpoint, reduced modulo 2m when
    // periodic. In this triangulation the midpoint determines the edge.
    std::map<std::pair<int, int>, int> seen;
    for (std::size_t c = 0; c < mesh.cells.size(); ++c)
        for (int v = 0; v < 3; ++v) {
            const auto [a, b] = edge_locals(v);
            const int ga = mesh.cells[c][a], gb = mesh.cells[c][b];
            int kx = ga % (m + 1) + gb % (m + 1);
            int ky = ga / (m + 1) + gb / (m + 1);
            if (periodic) {
                kx %= 2 * m;
                ky %= 2 * m;
            }
            const auto key = std::make_pair(kx, ky);
            const auto it = seen.find(key);
            if (it == seen.end()) {
                Facet f;
                f.cell[0] = static_cast<int>(c);
                f.local[0] = v;
                f.flip[0] = local_flip(mesh, static_cast<int>(c), v);
                seen.emplace(key, static_cast<int>(mesh.facets.size()));
                mesh.facets.push_back(f);
            } else {
                Facet& f = mesh.facets[it->second];
                if (!f.boundary())
                    throw std::logic_error("build_structured_mesh: edge shared by more than two cells");
                f.cell[1] = static_cast<int>(c);
                f.local[1] = v;
                f.flip[1] = local_flip(mesh, static_cast<int>(c), v);
            }
        }
    for (auto& f : mesh.facets)
        f.tag = f.boundary() ? BoundaryTag::wall : BoundaryTag::interior;
    fill_cell_facets(mesh);
    return mesh;
}

CellGeometry cell_geometry(const SimplexMesh& mesh, std::size_t c)
{
    CellGeometry g;
    for (int i = 0; i < 3; ++i)
        g.x[i] = mesh.vertices[mesh.cells[c][i]];
    const double j00 = g.x[1][0] - g.x[0][0], j01 = g.x[2][0] - g.x[0][0];
    const double j10 = g.x[1][1] - g.x[0][1], j11 = g.x[2][1] - g.x[0][1];
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0)
        throw std::runtime_error("cell_geometry: degenerate cell " + std::to_string(c));
    g.area = 0.5 * std::abs(det);
    // rows of J^{-1} are grad b_1 and grad b_2
    g.grad_b[1] = {j11 / det, -j01 / det};
    g.grad_b[2] = {-j10 / det, j00 / det};
    g.grad_b[0] = {-g.grad_b[1][0] - g.grad_b[2][0], -g.grad_b[1][1] - g.grad_b[2][1]};
    return g;
}

FacetGeometry facet_geometry(const SimplexMesh& mesh, std::size_t f)
{
    const Facet& fc = mesh.facets[f];
    const auto& cell = mesh.cells[fc.cell[0]];
    const auto [a, b] = edge_locals(fc.local[0]);
    const auto& xa = mesh.vertices[cell[a]];
    const auto& xb = mesh.vertices[cell[b]];
    const auto& xo = mesh.vertices[cell[fc.local[0]]];
    const double ex = xb[0] - xa[0], ey = xb[1] - xa[1];
    FacetGeometry g;
    g.length = std::hypot(ex, ey);
    g.normal = {ey / g.length, -ex / g.length};
    if (g.normal[0] * (xo[0] - xa[0]) + g.normal[1] * (xo[1] - xa[1]) > 0.0)
        g.normal = {-g.normal[0], -g.normal[1]};
    return g;
}

double min_edge_length(const SimplexMesh& mesh)
{
    double h = std::numeric_limits<double>::infinity();
    for (const auto& c : mesh.cells)
        for (int v = 0; v < 3; ++v) {
            const auto& p = mesh.vertices[c[v]];
            const auto& q = mesh.vertices[c[(v + 1) % 3]];
            h = std::min(h, std::hypot(q[0] - p[0], q[1] - p[1]));
        }
    return h;
}

void write_mesh(std::ostream& out, const SimplexMesh& mesh)
{
    const auto old = out.precision(17);
    out << "vertices," << mesh.vertices.size() << '\n';
    for (const auto& v : mesh.vertices)
        out << v[0] << ',' << v[1] << '\n';
    out << "cells," << mesh.cells.size() << '\n';
    for (const auto& c : mesh.cells)
        out << c[0] << ',' << c[1] << ',' << c[2] << '\n';
    out << "facets," << mesh.facets.size() << ',' << (mesh.periodic ? 1 : 0) << '\n';
    for (const auto& f : mesh.facets)
        out << f.cell[0] << ',' << f.local[0] << ',' << f.flip[0] << ',' << f.cell[1] << ',' << f.local[1]
            << ',' << f.flip[1] << ',' << static_cast<int>(f.tag) << '\n';
    out.precision(old);
}

namespace {

std::vector<std::string> split_line(std::istream& in, const char* what)
{
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(std::string("read_mesh: unexpected end of input in ") + what);
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ','))
        fields.push_back(tok);
    return fields;
}

std::vector<std::string> section(std::istream& in, const std::string& name)
{
    auto head = split_line(in, name.c_str());
    if (head.size() < 2 || head[0] != name)
        throw std::runtime_error("read_mesh: expected section '" + name + "'");
    return head;
}

} // namespace

SimplexMesh read_mesh(std::istream& in)
{
    SimplexMesh mesh;
    const auto vh = section(in, "vertices");
    for (std::size_t k = 0, count = std::stoul(vh[1]); k < count; ++k) {
        const auto r = split_line(in, "vertices");
        mesh.vertices.push_back({std::stod(r.at(0)), std::stod(r.at(1))});
    }
    const auto ch = section(in, "cells");
    for (std::size_t k = 0, count = std::stoul(ch[1]); k < count; ++k) {
        const auto r = split_line(in, "cells");
        mesh.cells.push_back({std::stoi(r.at(0)), std::stoi(r.at(1)), std::stoi(r.at(2))});
    }
    const auto fh = section(in, "facets");
    mesh.periodic = fh.size() > 2 && fh[2] == "1";
    for (std::size_t k = 0, count = std::stoul(fh[1]); k < count; ++k) {
        const auto r = split_line(in, "facets");
        Facet f;
        f.cell = {std::stoi(r.at(0)), std::stoi(r.at(3))};
        f.local = {std::stoi(r.at(1)), std::stoi(r.at(4))};
        f.flip = {r.at(2) == "1", r.at(5) == "1"};
        const int tag = std::stoi(r.at(6));
        if (tag != 0 && tag != 1)
            throw std::runtime_error("read_mesh: unknown boundary tag " + r.at(6));
        f.tag = static_cast<BoundaryTag>(tag);
        mesh.facets.push_back(f);
    }
    fill_cell_facets(mesh);
    return mesh;
}

} // namespace bbfem
