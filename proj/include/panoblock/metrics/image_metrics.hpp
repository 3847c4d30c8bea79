#pragma once

#include <vector>

#include "panoblock/image/image.hpp"

namespace panoblock {

// 10*log10(255^2 / MSE) with MSE pooled over all channels.
// Identical images give +infinity.
double psnr(const Image8& a, const Image8& b);

std::vector<double> psnr_per_channel(const Image8& a, const Image8& b);

// Mean SSIM over the valid region, 11x11 Gaussian window sigma 1.5,
// K1 = 0.01, K2 = 0.03, L = 255, computed on Rec.601 luma.
double ssim(const Image8& a, const Image8& b);

}  // namespace panoblock
