#pragma once

#include <json.hpp>
#include <vector>

#include "panoblock/features/sift.hpp"

namespace panoblock {

struct FaceCandidate {
    long frame = 0;
    int count = 0;
};

struct SimilarityResult {
    std::vector<long> per_face_estimate;             // one per face
    std::vector<std::vector<FaceCandidate>> top3;    // per face, sorted by rank
    long final_frame = 0;                            // median of the per-face estimates
    int median_best_count = 0;                       // median over faces of the best match count
};

// Softmax-weighted frame estimate from the top-3 (frame, count) rows.
long face_frame_estimate(const std::vector<FaceCandidate>& top3, double temperature);

// Median with even counts resolved as the mean of the two middle order
// statistics, rounded half away from zero.
long median_frame(std::vector<long> values);

// For each face: match the query face against the same face of every
// candidate, keep the top 3 counts (ties to the lower frame), softmax-weight
// their frame numbers; the final frame is the median across faces.
SimilarityResult most_similar_frame(const std::vector<KeypointSet>& query_faces,
                                    const std::vector<std::vector<KeypointSet>>& candidate_faces,
                                    const std::vector<long>& candidate_frames,
                                    double temperature = 1.0);

// Convenience overload running detection on images (query_faces[f], candidates[c][f]).
SimilarityResult most_similar_frame(const std::vector<Image8>& query_faces,
                                    const std::vector<std::vector<Image8>>& candidate_faces,
                                    const std::vector<long>& candidate_frames,
                                    double temperature = 1.0,
                                    const FeatureParams& params = {});

void to_json(nlohmann::json& j, const SimilarityResult& r);

}  // namespace panoblock
