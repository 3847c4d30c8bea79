#include "panoblock/features/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "panoblock/error.hpp"

namespace panoblock {

long face_frame_estimate(const std::vector<FaceCandidate>& top3, double temperature) {
    if (top3.empty()) throw ArgumentError("no candidates for frame estimate");
    if (temperature <= 0) throw ArgumentError("softmax temperature must be positive");

    double cmax = top3[0].count;
    for (const auto& c : top3) cmax = std::max(cmax, double(c.count));
    double wsum = 0.0;
    double fsum = 0.0;
    for (const auto& c : top3) {
        const double w = std::exp((c.count - cmax) / temperature);
        wsum += w;
        fsum += w * double(c.frame);
    }
    return std::llround(fsum / wsum);
}

long median_frame(std::vector<long> values) {
    if (values.empty()) throw ArgumentError("median of empty list");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    const double mid = 0.5 * (double(values[n / 2 - 1]) + double(values[n / 2]));
    return std::llround(mid);  // rounds half away from zero
}

SimilarityResult most_similar_frame(const std::vector<KeypointSet>& query_faces,
                                    const std::vector<std::vector<KeypointSet>>& candidate_faces,
                                    const std::vector<long>& candidate_frames,
                                    double temperature) {
    if (candidate_faces.size() < 3)
        throw ArgumentError("similarity search needs at least 3 candidate frames");
    if (candidate_faces.size() != candidate_frames.size())
        throw ArgumentError("candidate faces and frame ids length mismatch");
    const std::size_t n_faces = query_faces.size();
    if (n_faces == 0) throw ArgumentError("query has no faces");
    for (const auto& c : candidate_faces)
        if (c.size() != n_faces) throw ArgumentError("candidate face count differs from query");

    SimilarityResult result;
    result.per_face_estimate.reserve(n_faces);
    result.top3.reserve(n_faces);
    std::vector<int> best_counts;
    best_counts.reserve(n_faces);

    for (std::size_t f = 0; f < n_faces; ++f) {
        std::vector<FaceCandidate> all;
        all.reserve(candidate_faces.size());
        for (std::size_t c = 0; c < candidate_faces.size(); ++c)
            all.push_back({candidate_frames[c],
                           match_count(query_faces[f], candidate_faces[c][f])});
        std::stable_sort(all.begin(), all.end(), [](const FaceCandidate& a,
                                                    const FaceCandidate& b) {
            if (a.count != b.count) return a.count > b.count;
            return a.frame < b.frame;
        });
        all.resize(std::min<std::size_t>(3, all.size()));
        result.per_face_estimate.push_back(face_frame_estimate(all, temperature));
        best_counts.push_back(all[0].count);
        result.top3.push_back(std::move(all));
    }

    result.final_frame = median_frame(result.per_face_estimate);
    {
        std::vector<long> counts(best_counts.begin(), best_counts.end());
        result.median_best_count = int(median_frame(counts));
    }
    return result;
}

SimilarityResult most_similar_frame(const std::vector<Image8>& query_faces,
                                    const std::vector<std::vector<Image8>>& candidate_faces,
                                    const std::vector<long>& candidate_frames,
                                    double temperature, const FeatureParams& params) {
    std::vector<KeypointSet> q;
    q.reserve(query_faces.size());
    for (const auto& img : query_faces) q.push_back(detect_and_describe(img, params));
    std::vector<std::vector<KeypointSet>> c;
    c.reserve(candidate_faces.size());
    for (const auto& frame : candidate_faces) {
        std::vector<KeypointSet> sets;
        sets.reserve(frame.size());
        for (const auto& img : frame) sets.push_back(detect_and_describe(img, params));
        c.push_back(std::move(sets));
    }
    return most_similar_frame(q, c, candidate_frames, temperature);
}

void to_json(nlohmann::json& j, const SimilarityResult& r) {
    j = nlohmann::json::object();
    j["final_frame"] = r.final_frame;
    j["median_best_count"] = r.median_best_count;
    j["per_face_estimate"] = r.per_face_estimate;
    auto faces = nlohmann::json::array();
    for (const auto& face : r.top3) {
        auto rows = nlohmann::json::array();
        for (const auto& c : face) rows.push_back({{"frame", c.frame}, {"count", c.count}});
        faces.push_back(rows);
    }
    j["top3"] = faces;
}

}  // namespace panoblock
