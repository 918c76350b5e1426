#include "fcot/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fcot {

Image::Image(int height_, int width_) : height(height_), width(width_) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("Image: non-positive dimensions");
    }
    data.assign(static_cast<size_t>(3) * height * width, 0.0);
}

void Image::validate(const char* context) const {
    if (height < 1 || width < 1) {
        throw std::invalid_argument(std::string(context) + ": invalid dimensions");
    }
    if (data.size() != static_cast<size_t>(3) * height * width) {
        throw std::invalid_argument(std::string(context) + ": data length mismatch");
    }
    for (double v : data) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(context) + ": non-finite value");
        }
    }
}

std::array<double, 3> channel_means(const Image& img) {
    std::array<double, 3> m{0.0, 0.0, 0.0};
    const size_t plane = static_cast<size_t>(img.height) * img.width;
    for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (size_t i = 0; i < plane; ++i) acc += img.data[c * plane + i];
        m[c] = acc / static_cast<double>(plane);
    }
    return m;
}

double sample_image(const Image& img, int c, double y, double x) {
    int y0 = static_cast<int>(std::floor(y));
    int x0 = static_cast<int>(std::floor(x));
    double fy = y - y0;
    double fx = x - x0;
    if (y0 < 0) { y0 = 0; fy = 0.0; }
    if (y0 >= img.height - 1) { y0 = img.height - 1; fy = 0.0; }
    if (x0 < 0) { x0 = 0; fx = 0.0; }
    if (x0 >= img.width - 1) { x0 = img.width - 1; fx = 0.0; }
    const int y1 = std::min(y0 + 1, img.height - 1);
    const int x1 = std::min(x0 + 1, img.width - 1);
    const double v00 = img.at(c, y0, x0);
    double top = v00;
    if (fx != 0.0) top += fx * (img.at(c, y0, x1) - v00);
    double v = top;
    if (fy != 0.0) {
        double bot = img.at(c, y1, x0);
        if (fx != 0.0) bot += fx * (img.at(c, y1, x1) - bot);
        v = top + fy * (bot - top);
    }
    return v;
}

Image warp_affine(const Image& img, const double m[6], int out_h, int out_w) {
    Image out(out_h, out_w);
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            const double sx = m[0] * x + m[1] * y + m[2];
            const double sy = m[3] * x + m[4] * y + m[5];
            for (int c = 0; c < 3; ++c) {
                out.at(c, y, x) = sample_image(img, c, sy, sx);
            }
        }
    }
    return out;
}

Image gaussian_blur(const Image& img, double sigma) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("gaussian_blur: sigma must be positive");
    }
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double& k : kernel) k /= sum;

    Image tmp(img.height, img.width);
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    const int sx = std::clamp(x + i, 0, img.width - 1);
                    acc += kernel[i + radius] * img.at(c, y, sx);
                }
                tmp.at(c, y, x) = acc;
            }
        }
    }
    Image out(img.height, img.width);
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    const int sy = std::clamp(y + i, 0, img.height - 1);
                    acc += kernel[i + radius] * tmp.at(c, sy, x);
                }
                out.at(c, y, x) = acc;
            }
        }
    }
    return out;
}

}  // namespace fcot
