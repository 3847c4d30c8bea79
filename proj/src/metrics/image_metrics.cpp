#include "panoblock/metrics/image_metrics.hpp"

#include <cmath>
#include <limits>

#include "panoblock/error.hpp"

namespace panoblock {

namespace {

void require_same_shape(const Image8& a, const Image8& b) {
    if (!a.same_shape(b)) throw ArgumentError("images must share dimensions and channel count");
    if (a.empty()) throw ArgumentError("images must be non-empty");
}

double mse_to_psnr(double mse) {
    if (mse <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace

double psnr(const Image8& a, const Image8& b) {
    require_same_shape(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = double(a.data[i]) - double(b.data[i]);
        sum += d * d;
    }
    return mse_to_psnr(sum / double(a.data.size()));
}

std::vector<double> psnr_per_channel(const Image8& a, const Image8& b) {
    require_same_shape(a, b);
    std::vector<double> out(a.channels);
    const std::size_t n = a.pixel_count();
    for (int c = 0; c < a.channels; ++c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d =
                double(a.data[i * a.channels + c]) - double(b.data[i * a.channels + c]);
            sum += d * d;
        }
        out[c] = mse_to_psnr(sum / double(n));
    }
    return out;
}

namespace {

// luma in [0, 255] as doubles
std::vector<double> luma255(const Image8& img) {
    std::vector<double> out(img.pixel_count());
    if (img.channels == 1) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = img.data[i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const std::uint8_t* p = &img.data[i * 3];
            out[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
        }
    }
    return out;
}

// separable Gaussian filter, valid region only: output is (w-10) x (h-10)
std::vector<double> gauss_valid(const std::vector<double>& in, int w, int h,
                                const double* kernel, int radius) {
    const int ow = w - 2 * radius;
    const int oh = h - 2 * radius;
    std::vector<double> tmp(std::size_t(ow) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int k = -radius; k <= radius; ++k)
                s += kernel[k + radius] * in[std::size_t(y) * w + x + radius + k];
            tmp[std::size_t(y) * ow + x] = s;
        }
    std::vector<double> out(std::size_t(ow) * oh);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int k = -radius; k <= radius; ++k)
                s += kernel[k + radius] * tmp[std::size_t(y + radius + k) * ow + x];
            out[std::size_t(y) * ow + x] = s;
        }
    return out;
}

}  // namespace

double ssim(const Image8& a, const Image8& b) {
    require_same_shape(a, b);
    constexpr int kRadius = 5;  // 11x11 window
    if (a.width < 2 * kRadius + 1 || a.height < 2 * kRadius + 1)
        throw ArgumentError("images smaller than the 11x11 ssim window");

    double kernel[2 * kRadius + 1];
    double ksum = 0.0;
    for (int k = -kRadius; k <= kRadius; ++k) {
        kernel[k + kRadius] = std::exp(-(k * k) / (2.0 * 1.5 * 1.5));
        ksum += kernel[k + kRadius];
    }
    for (double& v : kernel) v /= ksum;

    const std::vector<double> la = luma255(a);
    const std::vector<double> lb = luma255(b);
    const std::size_t n = la.size();
    std::vector<double> aa(n), bb(n), ab(n);
    for (std::size_t i = 0; i < n; ++i) {
        aa[i] = la[i] * la[i];
        bb[i] = lb[i] * lb[i];
        ab[i] = la[i] * lb[i];
    }

    const int w = a.width;
    const int h = a.height;
    const auto mu_a = gauss_valid(la, w, h, kernel, kRadius);
    const auto mu_b = gauss_valid(lb, w, h, kernel, kRadius);
    const auto m_aa = gauss_valid(aa, w, h, kernel, kRadius);
    const auto m_bb = gauss_valid(bb, w, h, kernel, kRadius);
    const auto m_ab = gauss_valid(ab, w, h, kernel, kRadius);

    constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
    constexpr double kC2 = (0.03 * 255) * (0.03 * 255);

    double total = 0.0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
        const double va = m_aa[i] - mu_a[i] * mu_a[i];
        const double vb = m_bb[i] - mu_b[i] * mu_b[i];
        const double cab = m_ab[i] - mu_a[i] * mu_b[i];
        total += ((2 * mu_a[i] * mu_b[i] + kC1) * (2 * cab + kC2)) /
                 ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + kC1) * (va + vb + kC2));
    }
    return total / double(mu_a.size());
}

}  // namespace panoblock
