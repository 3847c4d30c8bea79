#include "panoblock/features/sift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "panoblock/error.hpp"

namespace panoblock {

namespace {

constexpr float kPi = 3.14159265358979323846f;
constexpr int kBorder = 5;
constexpr int kOriBins = 36;
constexpr int kDescWidth = 4;
constexpr int kDescBins = 8;

ImageF gaussian_blur(const ImageF& in, float sigma) {
    if (sigma <= 0.f) return in;
    const int radius = std::max(1, int(std::ceil(4.f * sigma)));
    std::vector<float> kernel(2 * radius + 1);
    float sum = 0.f;
    for (int k = -radius; k <= radius; ++k) {
        kernel[k + radius] = std::exp(-(k * k) / (2.f * sigma * sigma));
        sum += kernel[k + radius];
    }
    for (float& v : kernel) v /= sum;

    const int w = in.width;
    const int h = in.height;
    ImageF tmp = ImageF::create(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            float s = 0.f;
            for (int k = -radius; k <= radius; ++k) {
                const int xx = std::clamp(x + k, 0, w - 1);
                s += kernel[k + radius] * in.at(xx, y);
            }
            tmp.at(x, y) = s;
        }
    ImageF out = ImageF::create(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            float s = 0.f;
            for (int k = -radius; k <= radius; ++k) {
                const int yy = std::clamp(y + k, 0, h - 1);
                s += kernel[k + radius] * tmp.at(x, yy);
            }
            out.at(x, y) = s;
        }
    return out;
}

ImageF downsample2(const ImageF& in) {
    ImageF out = ImageF::create(in.width / 2, in.height / 2);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) out.at(x, y) = in.at(2 * x, 2 * y);
    return out;
}

struct Pyramid {
    std::vector<std::vector<ImageF>> gauss;  // per octave: layers + 3 images
    std::vector<std::vector<ImageF>> dog;    // per octave: layers + 2 images
};

Pyramid build_pyramid(const ImageF& gray, const FeatureParams& p) {
    const int n_levels = p.octave_layers + 3;
    int n_octaves = 1;
    {
        int dim = std::min(gray.width, gray.height);
        while (n_octaves < p.max_octaves && dim / 2 >= 16) {
            dim /= 2;
            ++n_octaves;
        }
    }

    // per-level incremental blurs reaching sigma0 * 2^(i/layers)
    std::vector<float> inc(n_levels);
    inc[0] = 0.f;
    for (int i = 1; i < n_levels; ++i) {
        const float prev = p.sigma0 * std::pow(2.f, float(i - 1) / p.octave_layers);
        const float cur = p.sigma0 * std::pow(2.f, float(i) / p.octave_layers);
        inc[i] = std::sqrt(cur * cur - prev * prev);
    }

    Pyramid pyr;
    pyr.gauss.resize(n_octaves);
    pyr.dog.resize(n_octaves);

    // assume ~0.5 sigma in the input; lift it to sigma0
    const float base_blur = std::sqrt(std::max(p.sigma0 * p.sigma0 - 0.25f, 0.01f));
    ImageF base = gaussian_blur(gray, base_blur);
    for (int o = 0; o < n_octaves; ++o) {
        pyr.gauss[o].reserve(n_levels);
        pyr.gauss[o].push_back(o == 0 ? std::move(base)
                                      : downsample2(pyr.gauss[o - 1][p.octave_layers]));
        for (int i = 1; i < n_levels; ++i)
            pyr.gauss[o].push_back(gaussian_blur(pyr.gauss[o].back(), inc[i]));
        pyr.dog[o].reserve(n_levels - 1);
        for (int i = 0; i + 1 < n_levels; ++i) {
            ImageF d = ImageF::create(pyr.gauss[o][i].width, pyr.gauss[o][i].height);
            for (std::size_t k = 0; k < d.data.size(); ++k)
                d.data[k] = pyr.gauss[o][i + 1].data[k] - pyr.gauss[o][i].data[k];
            pyr.dog[o].push_back(std::move(d));
        }
    }
    return pyr;
}

struct Candidate {
    int octave = 0;
    int layer = 0;       // refined DoG layer
    float x = 0.f, y = 0.f;   // octave-resolution coords
    float delta_s = 0.f;      // subpixel layer offset
};

bool is_extremum(const std::vector<ImageF>& dog, int l, int x, int y) {
    const float v = dog[l].at(x, y);
    const bool maxi = v > 0;
    for (int dl = -1; dl <= 1; ++dl)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dl == 0 && dy == 0 && dx == 0) continue;
                const float n = dog[l + dl].at(x + dx, y + dy);
                if (maxi ? n >= v : n <= v) return false;
            }
    return true;
}

// 3-d quadratic refinement; returns false to reject the candidate
bool refine(const std::vector<ImageF>& dog, int& l, int& x, int& y, float& dxo, float& dyo,
            float& dso, float& contrast, const FeatureParams& p) {
    const int w = dog[0].width;
    const int h = dog[0].height;
    for (int attempt = 0; attempt < 5; ++attempt) {
        const ImageF& d0 = dog[l - 1];
        const ImageF& d1 = dog[l];
        const ImageF& d2 = dog[l + 1];
        const float gx = 0.5f * (d1.at(x + 1, y) - d1.at(x - 1, y));
        const float gy = 0.5f * (d1.at(x, y + 1) - d1.at(x, y - 1));
        const float gs = 0.5f * (d2.at(x, y) - d0.at(x, y));
        const float hxx = d1.at(x + 1, y) + d1.at(x - 1, y) - 2 * d1.at(x, y);
        const float hyy = d1.at(x, y + 1) + d1.at(x, y - 1) - 2 * d1.at(x, y);
        const float hss = d2.at(x, y) + d0.at(x, y) - 2 * d1.at(x, y);
        const float hxy = 0.25f * (d1.at(x + 1, y + 1) - d1.at(x - 1, y + 1) -
                                   d1.at(x + 1, y - 1) + d1.at(x - 1, y - 1));
        const float hxs = 0.25f * (d2.at(x + 1, y) - d2.at(x - 1, y) - d0.at(x + 1, y) +
                                   d0.at(x - 1, y));
        const float hys = 0.25f * (d2.at(x, y + 1) - d2.at(x, y - 1) - d0.at(x, y + 1) +
                                   d0.at(x, y - 1));

        // solve H * delta = -g by Cramer's rule
        const float det = hxx * (hyy * hss - hys * hys) - hxy * (hxy * hss - hys * hxs) +
                          hxs * (hxy * hys - hyy * hxs);
        if (std::abs(det) < 1e-20f) return false;
        const float dx = -(gx * (hyy * hss - hys * hys) - hxy * (gy * hss - hys * gs) +
                           hxs * (gy * hys - hyy * gs)) / det;
        const float dy = -(hxx * (gy * hss - hys * gs) - gx * (hxy * hss - hys * hxs) +
                           hxs * (hxy * gs - gy * hxs)) / det;
        const float ds = -(hxx * (hyy * gs - gy * hys) - hxy * (hxy * gs - gy * hxs) +
                           gx * (hxy * hys - hyy * hxs)) / det;

        if (std::abs(dx) < 0.5f && std::abs(dy) < 0.5f && std::abs(ds) < 0.5f) {
            contrast = d1.at(x, y) + 0.5f * (gx * dx + gy * dy + gs * ds);
            if (std::abs(contrast) * p.octave_layers < p.contrast_threshold) return false;
            // edge response from the spatial Hessian
            const float tr = hxx + hyy;
            const float det2 = hxx * hyy - hxy * hxy;
            const float r = p.edge_ratio;
            if (det2 <= 0 || tr * tr * r >= (r + 1) * (r + 1) * det2) return false;
            dxo = dx;
            dyo = dy;
            dso = ds;
            return true;
        }
        x += int(std::lround(dx));
        y += int(std::lround(dy));
        l += int(std::lround(ds));
        if (l < 1 || l > int(dog.size()) - 2 || x < kBorder || x >= w - kBorder ||
            y < kBorder || y >= h - kBorder)
            return false;
    }
    return false;
}

// orientation histogram peaks (>= 0.8 max) around the keypoint
void orientations(const ImageF& img, float x, float y, float sigma_rel,
                  std::vector<float>& out) {
    out.clear();
    const float sigma_w = 1.5f * sigma_rel;
    const int radius = std::max(1, int(std::lround(3.f * sigma_w)));
    const int cx = int(std::lround(x));
    const int cy = int(std::lround(y));

    float hist[kOriBins] = {0};
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const int px = cx + dx;
            const int py = cy + dy;
            if (px < 1 || px >= img.width - 1 || py < 1 || py >= img.height - 1) continue;
            const float gx = 0.5f * (img.at(px + 1, py) - img.at(px - 1, py));
            const float gy = 0.5f * (img.at(px, py + 1) - img.at(px, py - 1));
            const float mag = std::sqrt(gx * gx + gy * gy);
            const float ang = std::atan2(gy, gx);
            const float wgt = std::exp(-(dx * dx + dy * dy) / (2.f * sigma_w * sigma_w));
            int bin = int(std::floor((ang + kPi) / (2 * kPi) * kOriBins));
            bin = std::clamp(bin, 0, kOriBins - 1);
            hist[bin] += wgt * mag;
        }
    }

    // circular smoothing
    for (int pass = 0; pass < 2; ++pass) {
        float tmp[kOriBins];
        for (int i = 0; i < kOriBins; ++i)
            tmp[i] = 0.25f * hist[(i + kOriBins - 1) % kOriBins] + 0.5f * hist[i] +
                     0.25f * hist[(i + 1) % kOriBins];
        std::copy(tmp, tmp + kOriBins, hist);
    }

    float peak = 0.f;
    for (float v : hist) peak = std::max(peak, v);
    if (peak <= 0.f) return;
    for (int i = 0; i < kOriBins; ++i) {
        const float l = hist[(i + kOriBins - 1) % kOriBins];
        const float r = hist[(i + 1) % kOriBins];
        if (hist[i] > l && hist[i] > r && hist[i] >= 0.8f * peak) {
            // parabolic interpolation of the peak bin
            float di = 0.5f * (l - r) / (l - 2 * hist[i] + r);
            float bin = i + di;
            if (bin < 0) bin += kOriBins;
            if (bin >= kOriBins) bin -= kOriBins;
            out.push_back(bin / kOriBins * 2 * kPi - kPi);
        }
    }
}

bool describe(const ImageF& img, float x, float y, float sigma_rel, float angle,
              std::array<float, 128>& desc) {
    const float cos_a = std::cos(-angle);
    const float sin_a = std::sin(-angle);
    const float bin_size = 3.f * sigma_rel;
    const float radius_f = bin_size * (kDescWidth + 1) * 0.5f * std::sqrt(2.f);
    const int radius = std::min(int(std::lround(radius_f)),
                                int(std::hypot(float(img.width), float(img.height))));
    const int cx = int(std::lround(x));
    const int cy = int(std::lround(y));
    const float denom = 2.f * (0.5f * kDescWidth) * (0.5f * kDescWidth);

    float hist[kDescWidth][kDescWidth][kDescBins] = {};
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const int px = cx + dx;
            const int py = cy + dy;
            if (px < 1 || px >= img.width - 1 || py < 1 || py >= img.height - 1) continue;
            // rotated, scale-normalized offsets in descriptor bins
            const float rx = (cos_a * dx - sin_a * dy) / bin_size;
            const float ry = (sin_a * dx + cos_a * dy) / bin_size;
            const float cbin = rx + kDescWidth / 2.f - 0.5f;
            const float rbin = ry + kDescWidth / 2.f - 0.5f;
            if (cbin <= -1.f || cbin >= kDescWidth || rbin <= -1.f || rbin >= kDescWidth)
                continue;
            const float gx = 0.5f * (img.at(px + 1, py) - img.at(px - 1, py));
            const float gy = 0.5f * (img.at(px, py + 1) - img.at(px, py - 1));
            const float mag = std::sqrt(gx * gx + gy * gy);
            float ang = std::atan2(gy, gx) + angle;  // gradient relative to keypoint frame
            while (ang < 0) ang += 2 * kPi;
            while (ang >= 2 * kPi) ang -= 2 * kPi;
            const float obin = ang / (2 * kPi) * kDescBins;
            const float wgt = std::exp(-(rx * rx + ry * ry) / denom) * mag;

            // trilinear scatter
            const int r0 = int(std::floor(rbin));
            const int c0 = int(std::floor(cbin));
            const int o0 = int(std::floor(obin));
            const float fr = rbin - r0;
            const float fc = cbin - c0;
            const float fo = obin - o0;
            for (int ir = 0; ir <= 1; ++ir) {
                const int rr = r0 + ir;
                if (rr < 0 || rr >= kDescWidth) continue;
                const float wr = wgt * (ir ? fr : 1.f - fr);
                for (int ic = 0; ic <= 1; ++ic) {
                    const int cc = c0 + ic;
                    if (cc < 0 || cc >= kDescWidth) continue;
                    const float wc = wr * (ic ? fc : 1.f - fc);
                    for (int io = 0; io <= 1; ++io) {
                        const int oo = (o0 + io) % kDescBins;
                        hist[rr][cc][oo] += wc * (io ? fo : 1.f - fo);
                    }
                }
            }
        }
    }

    float* flat = &hist[0][0][0];
    float norm = 0.f;
    for (int i = 0; i < 128; ++i) norm += flat[i] * flat[i];
    if (norm < 1e-12f) return false;
    norm = 1.f / std::sqrt(norm);
    for (int i = 0; i < 128; ++i) flat[i] = std::min(flat[i] * norm, 0.2f);
    norm = 0.f;
    for (int i = 0; i < 128; ++i) norm += flat[i] * flat[i];
    norm = 1.f / std::sqrt(norm);
    for (int i = 0; i < 128; ++i) desc[i] = flat[i] * norm;
    return true;
}

}  // namespace

KeypointSet detect_and_describe(const ImageF& gray, const FeatureParams& params) {
    if (std::min(gray.width, gray.height) < 32)
        throw ArgumentError("image too small for feature detection (min dimension 32)");

    const Pyramid pyr = build_pyramid(gray, params);
    KeypointSet set;
    std::vector<float> angles;

    for (int o = 0; o < int(pyr.dog.size()); ++o) {
        const auto& dog = pyr.dog[o];
        const int w = dog[0].width;
        const int h = dog[0].height;
        const float pre_thresh = 0.5f * params.contrast_threshold / params.octave_layers;
        for (int l = 1; l + 1 < int(dog.size()); ++l) {
            for (int y = kBorder; y < h - kBorder; ++y) {
                for (int x = kBorder; x < w - kBorder; ++x) {
                    if (std::abs(dog[l].at(x, y)) < pre_thresh) continue;
                    if (!is_extremum(dog, l, x, y)) continue;
                    int rl = l, rx = x, ry = y;
                    float dx, dy, ds, contrast;
                    if (!refine(dog, rl, rx, ry, dx, dy, ds, contrast, params)) continue;

                    const float sigma_rel =
                        params.sigma0 * std::pow(2.f, (rl + ds) / params.octave_layers);
                    const float fx = rx + dx;
                    const float fy = ry + dy;
                    const ImageF& gimg = pyr.gauss[o][rl];
                    orientations(gimg, fx, fy, sigma_rel, angles);
                    for (float ang : angles) {
                        std::array<float, 128> desc;
                        if (!describe(gimg, fx, fy, sigma_rel, ang, desc)) continue;
                        Keypoint kp;
                        kp.x = fx * float(1 << o);
                        kp.y = fy * float(1 << o);
                        kp.scale = sigma_rel * float(1 << o);
                        kp.orientation = ang;
                        set.keypoints.push_back(kp);
                        set.descriptors.push_back(desc);
                    }
                }
            }
        }
    }

    // canonical ordering, independent of scan details
    std::vector<std::size_t> order(set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Keypoint& ka = set.keypoints[a];
        const Keypoint& kb = set.keypoints[b];
        if (ka.y != kb.y) return ka.y < kb.y;
        if (ka.x != kb.x) return ka.x < kb.x;
        if (ka.scale != kb.scale) return ka.scale < kb.scale;
        return ka.orientation < kb.orientation;
    });
    KeypointSet sorted;
    sorted.keypoints.reserve(set.size());
    sorted.descriptors.reserve(set.size());
    for (std::size_t i : order) {
        sorted.keypoints.push_back(set.keypoints[i]);
        sorted.descriptors.push_back(set.descriptors[i]);
    }
    return sorted;
}

KeypointSet detect_and_describe(const Image8& image, const FeatureParams& params) {
    return detect_and_describe(to_gray(image), params);
}

namespace {

void nearest_two(const std::array<float, 128>& d, const std::vector<std::array<float, 128>>& set,
                 int& best, float& d1, float& d2) {
    best = -1;
    d1 = d2 = std::numeric_limits<float>::infinity();
    for (int j = 0; j < int(set.size()); ++j) {
        float dist = 0.f;
        for (int k = 0; k < 128; ++k) {
            const float diff = d[k] - set[j][k];
            dist += diff * diff;
        }
        if (dist < d1) {
            d2 = d1;
            d1 = dist;
            best = j;
        } else if (dist < d2) {
            d2 = dist;
        }
    }
}

}  // namespace

int match_count(const KeypointSet& a, const KeypointSet& b, float ratio) {
    if (a.size() == 0 || b.size() == 0) return 0;
    const float r2 = ratio * ratio;

    std::vector<int> best_ab(a.size());
    std::vector<bool> pass_ab(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        int best;
        float d1, d2;
        nearest_two(a.descriptors[i], b.descriptors, best, d1, d2);
        best_ab[i] = best;
        pass_ab[i] = d1 < r2 * d2;
    }
    std::vector<int> best_ba(b.size());
    std::vector<bool> pass_ba(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
        int best;
        float d1, d2;
        nearest_two(b.descriptors[j], a.descriptors, best, d1, d2);
        best_ba[j] = best;
        pass_ba[j] = d1 < r2 * d2;
    }

    int count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int j = best_ab[i];
        if (j >= 0 && pass_ab[i] && pass_ba[j] && best_ba[j] == int(i)) ++count;
    }
    return count;
}

}  // namespace panoblock
