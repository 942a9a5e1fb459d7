#ifndef VIZPLAN_IMAGE_H_
#define VIZPLAN_IMAGE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vizplan {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }

double squared_distance(Point2 a, Point2 b);
double distance(Point2 a, Point2 b);

// Row-major binary raster, bit-packed over the flattened pixel index
// (index = y * width + x). Pixel (x, y) covers [x, x+1) x [y, y+1); its
// center is (x + 0.5, y + 0.5).
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  bool get(int x, int y) const { return test(index(x, y)); }
  void set(int x, int y, bool value = true) { set_index(index(x, y), value); }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set_index(std::size_t i, bool value = true) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  // Sets the flattened index range [lb, ub).
  void fill_range(std::size_t lb, std::size_t ub);
  // Sets pixels [x0, x1) of row y; the range is clipped to the image.
  void fill_span(int y, int x0, int x1);

  std::size_t popcount() const;
  bool any() const;
  bool in_bounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  BinaryImage& operator|=(const BinaryImage& other);
  BinaryImage& operator&=(const BinaryImage& other);

  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint64_t> words_;
};

// Number of pixels set in exactly one of the two images. Throws DomainError
// on a dimension mismatch.
std::size_t hamming_distance(const BinaryImage& a, const BinaryImage& b);

// Number of pixels set in both images.
std::size_t and_popcount(const BinaryImage& a, const BinaryImage& b);

// Rasterizes the segment a-b with Bresenham's algorithm (endpoints are
// rounded to the containing pixel). `thickness` > 1 stamps a square brush.
// Pixels outside the image are clipped.
void draw_line(BinaryImage& image, Point2 a, Point2 b, int thickness = 1);

// 8-bit grayscale raster used for composite frames.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  // Paints every set pixel of `mask` with `value` (max-blend).
  void paint(const BinaryImage& mask, std::uint8_t value);

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

}  // namespace vizplan

#endif  // VIZPLAN_IMAGE_H_
