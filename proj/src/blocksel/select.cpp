#include "panoblock/blocksel/select.hpp"

#include <limits>
#include <numeric>

#include "panoblock/error.hpp"

namespace panoblock {

BlockSelection select_block(const Eigen::Vector3d& p, const std::vector<SplinePath>& paths,
                            const std::vector<int>& block_ids, double hysteresis,
                            int current_block) {
    if (paths.empty()) throw ArgumentError("no spline paths given");
    if (paths.size() != block_ids.size())
        throw ArgumentError("paths and block_ids length mismatch");

    BlockSelection sel;
    sel.distances.resize(paths.size());
    std::vector<double> params(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const SplineDistance d = distance_to_spline(paths[i], p);
        sel.distances[i] = d.distance;
        params[i] = d.u;
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < paths.size(); ++i) {
        const double di = sel.distances[i];
        const double db = sel.distances[best];
        if (di < db - 1e-9 || (di < db + 1e-9 && block_ids[i] < block_ids[best])) best = i;
    }

    if (hysteresis > 0.0 && current_block >= 0) {
        for (std::size_t i = 0; i < paths.size(); ++i) {
            if (block_ids[i] == current_block &&
                sel.distances[i] <= sel.distances[best] + hysteresis) {
                best = i;
                break;
            }
        }
    }

    sel.block_id = block_ids[best];
    sel.distance = sel.distances[best];
    sel.u = params[best];
    return sel;
}

BlockSelection select_block(const Eigen::Vector3d& p, const std::vector<SplinePath>& paths) {
    std::vector<int> ids(paths.size());
    std::iota(ids.begin(), ids.end(), 0);
    return select_block(p, paths, ids);
}

}  // namespace panoblock
