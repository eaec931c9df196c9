#ifndef ROF_IMAGING_HPP
#define ROF_IMAGING_HPP

#include "rof/grid.hpp"

#include <cstdint>
#include <string>

namespace rof {

/// Malformed or unsupported image data.
class ImageParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grayscale image; pixel values are doubles and may leave [0,255] during
/// processing, clamping happens only when encoding.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> pixels; ///< row-major

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, 0.0) {}

    double operator()(int i, int j) const { return pixels[static_cast<std::size_t>(j) * width + i]; }
    double& operator()(int i, int j) { return pixels[static_cast<std::size_t>(j) * width + i]; }
};

/// Parse a P2 or P5 PGM with maxval <= 255.
Image read_pgm(const std::string& bytes);

/// Encode as binary P5, maxval 255; values rounded half-to-even, then clamped.
std::string write_pgm(const Image& img);

Image read_pgm_file(const std::string& path);
void write_pgm_file(const Image& img, const std::string& path);

/// Pixels become cell values one-to-one; the image must be square.
GridFunction image_to_grid(const Image& img);
Image grid_to_image(const GridFunction& u);

/// Adds i.i.d. N(0, sigma^2) noise from a counter-based seeded generator;
/// identical seeds reproduce identical output on any platform.
Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed);

/// 10 log10(255^2 / MSE) in dB; +infinity when the images are identical.
double psnr(const Image& a, const Image& b);

/// Synthetic test scene: flat background, large polygonal shapes, a disc
/// and a low-amplitude wave band. Values in [0, 255].
Image synthetic_shapes(int size);

} // namespace rof

#endif
