#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mmsph/math.hpp"

namespace mmsph {

// Uniform-grid cell list over particle positions. Cell size equals the
// search cutoff, so a 3^dim stencil covers all candidate pairs.
struct CellIndex {
    double cell_size = 0.0;
    Vec3 origin;
    int nx = 0, ny = 0, nz = 0;
    std::size_t count = 0;
    // counting-sort layout: particle ids grouped by cell
    std::vector<int> cell_offsets;
    std::vector<int> ids;
};

// Per-particle neighbour ids in CSR layout, sorted ascending, symmetric,
// self excluded, strict |x_ij| < cutoff.
struct NeighborList {
    std::vector<int> offsets;  // size N+1
    std::vector<int> ids;

    std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
    std::span<const int> neighbors(std::size_t i) const {
        return {ids.data() + offsets[i], ids.data() + offsets[i + 1]};
    }
};

CellIndex build_index(std::span<const Vec3> positions, double cutoff);

NeighborList query(const CellIndex& index, std::span<const Vec3> positions, double cutoff);

// Candidate tool neighbours of a single point (used for cross-body contact
// pairs); returns ids into the indexed position set, sorted.
std::vector<int> query_point(const CellIndex& index, std::span<const Vec3> positions,
                             const Vec3& point, double cutoff);

}  // namespace mmsph
