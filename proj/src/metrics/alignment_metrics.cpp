#include "panoblock/metrics/alignment_metrics.hpp"

#include <cmath>

#include "panoblock/error.hpp"

namespace panoblock {

AlignmentError alignment_error(const Trajectory& est, const Trajectory& gt) {
    if (est.poses.size() != gt.poses.size())
        throw ArgumentError("trajectories have different pose counts");
    if (gt.poses.size() < 2) throw ArgumentError("need at least 2 poses");

    AlignmentError out;
    out.per_frame.reserve(est.poses.size());
    double sq = 0.0;
    for (std::size_t i = 0; i < est.poses.size(); ++i) {
        if (est.poses[i].frame_id != gt.poses[i].frame_id)
            throw ArgumentError("trajectory frame ids do not match");
        const double e = (est.poses[i].center() - gt.poses[i].center()).norm();
        out.per_frame.push_back(e);
        sq += e * e;
    }
    out.rmse = std::sqrt(sq / double(est.poses.size()));

    double step = 0.0;
    for (std::size_t i = 0; i + 1 < gt.poses.size(); ++i)
        step += (gt.poses[i + 1].center() - gt.poses[i].center()).norm();
    out.avg_step = step / double(gt.poses.size() - 1);
    out.avg_ratio = out.avg_step > 0 ? out.rmse / out.avg_step : 0.0;
    return out;
}

}  // namespace panoblock
