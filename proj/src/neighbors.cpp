#include "mmsph/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmsph {

namespace {

inline int clamp_cell(int c, int n) { return c < 0 ? 0 : (c >= n ? n - 1 : c); }

inline int cell_of(const CellIndex& idx, const Vec3& p, int& cx, int& cy, int& cz) {
    cx = clamp_cell(static_cast<int>((p.x - idx.origin.x) / idx.cell_size), idx.nx);
    cy = clamp_cell(static_cast<int>((p.y - idx.origin.y) / idx.cell_size), idx.ny);
    cz = clamp_cell(static_cast<int>((p.z - idx.origin.z) / idx.cell_size), idx.nz);
    return (cz * idx.ny + cy) * idx.nx + cx;
}

}  // namespace

CellIndex build_index(std::span<const Vec3> positions, double cutoff) {
    if (positions.empty())
        throw std::invalid_argument("build_index: empty particle set");
    if (!(cutoff > 0.0) || !std::isfinite(cutoff))
        throw std::invalid_argument("build_index: cutoff must be positive");

    Vec3 lo = positions[0], hi = positions[0];
    for (const Vec3& p : positions) {
        if (!is_finite(p)) throw std::invalid_argument("build_index: non-finite position");
        lo.x = std::min(lo.x, p.x); hi.x = std::max(hi.x, p.x);
        lo.y = std::min(lo.y, p.y); hi.y = std::max(hi.y, p.y);
        lo.z = std::min(lo.z, p.z); hi.z = std::max(hi.z, p.z);
    }

    CellIndex idx;
    idx.cell_size = cutoff;
    idx.origin = lo;
    idx.count = positions.size();
    idx.nx = std::max(1, static_cast<int>((hi.x - lo.x) / cutoff) + 1);
    idx.ny = std::max(1, static_cast<int>((hi.y - lo.y) / cutoff) + 1);
    idx.nz = std::max(1, static_cast<int>((hi.z - lo.z) / cutoff) + 1);

    const std::size_t ncells = static_cast<std::size_t>(idx.nx) * idx.ny * idx.nz;
    std::vector<int> counts(ncells, 0);
    std::vector<int> cell_id(positions.size());
    int cx, cy, cz;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        cell_id[i] = cell_of(idx, positions[i], cx, cy, cz);
        ++counts[cell_id[i]];
    }
    idx.cell_offsets.assign(ncells + 1, 0);
    for (std::size_t c = 0; c < ncells; ++c)
        idx.cell_offsets[c + 1] = idx.cell_offsets[c] + counts[c];
    idx.ids.resize(positions.size());
    std::vector<int> cursor(idx.cell_offsets.begin(), idx.cell_offsets.end() - 1);
    for (std::size_t i = 0; i < positions.size(); ++i)
        idx.ids[cursor[cell_id[i]]++] = static_cast<int>(i);  // stable: ids ascending per cell
    return idx;
}

NeighborList query(const CellIndex& index, std::span<const Vec3> positions, double cutoff) {
    if (positions.size() != index.count)
        throw std::invalid_argument("query: index is stale (particle count mismatch)");
    if (cutoff > index.cell_size * (1.0 + 1e-12))
        throw std::invalid_argument("query: cutoff exceeds cell size");

    const double cut2 = cutoff * cutoff;
    NeighborList nl;
    nl.offsets.assign(positions.size() + 1, 0);
    nl.ids.reserve(positions.size() * 32);

    std::vector<int> scratch;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        scratch.clear();
        const Vec3& pi = positions[i];
        int cx, cy, cz;
        cell_of(index, pi, cx, cy, cz);
        for (int dz = -1; dz <= 1; ++dz) {
            const int z = cz + dz;
            if (z < 0 || z >= index.nz) continue;
            for (int dy = -1; dy <= 1; ++dy) {
                const int y = cy + dy;
                if (y < 0 || y >= index.ny) continue;
                for (int dx = -1; dx <= 1; ++dx) {
                    const int x = cx + dx;
                    if (x < 0 || x >= index.nx) continue;
                    const int c = (z * index.ny + y) * index.nx + x;
                    for (int k = index.cell_offsets[c]; k < index.cell_offsets[c + 1]; ++k) {
                        const int j = index.ids[k];
                        if (static_cast<std::size_t>(j) == i) continue;
                        if (norm2(positions[j] - pi) < cut2) scratch.push_back(j);
                    }
                }
            }
        }
        std::sort(scratch.begin(), scratch.end());
        nl.ids.insert(nl.ids.end(), scratch.begin(), scratch.end());
        nl.offsets[i + 1] = static_cast<int>(nl.ids.size());
    }
    return nl;
}

std::vector<int> query_point(const CellIndex& index, std::span<const Vec3> positions,
                             const Vec3& point, double cutoff) {
    if (positions.size() != index.count)
        throw std::invalid_argument("query_point: index is stale");
    const double cut2 = cutoff * cutoff;
    std::vector<int> out;
    int cx, cy, cz;
    cell_of(index, point, cx, cy, cz);
    // the point may lie outside the indexed bounding box; widen the stencil
    // enough to cover cells within one cutoff of it
    const int reach = std::max(1, static_cast<int>(std::ceil(cutoff / index.cell_size))) + 1;
    for (int dz = -reach; dz <= reach; ++dz) {
        const int z = cz + dz;
        if (z < 0 || z >= index.nz) continue;
        for (int dy = -reach; dy <= reach; ++dy) {
            const int y = cy + dy;
            if (y < 0 || y >= index.ny) continue;
            for (int dx = -reach; dx <= reach; ++dx) {
                const int x = cx + dx;
                if (x < 0 || x >= index.nx) continue;
                const int c = (z * index.ny + y) * index.nx + x;
                for (int k = index.cell_offsets[c]; k < index.cell_offsets[c + 1]; ++k) {
                    const int j = index.ids[k];
                    if (norm2(positions[j] - point) < cut2) out.push_back(j);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace mmsph
