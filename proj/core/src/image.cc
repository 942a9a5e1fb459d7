#include "vizplan/image.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "vizplan/errors.h"

namespace vizplan {

double squared_distance(Point2 a, Point2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(Point2 a, Point2 b) { return std::sqrt(squared_distance(a, b)); }

BinaryImage::BinaryImage(int width, int height) : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw DomainError("image dimensions must be non-negative");
  }
  words_.assign((pixel_count() + 63) / 64, 0);
}

void BinaryImage::fill_range(std::size_t lb, std::size_t ub) {
  if (lb >= ub) return;
  std::size_t first = lb >> 6;
  const std::size_t last = (ub - 1) >> 6;
  const std::uint64_t head = ~std::uint64_t{0} << (lb & 63);
  const std::uint64_t tail = ~std::uint64_t{0} >> (63 - ((ub - 1) & 63));
  if (first == last) {
    words_[first] |= head & tail;
    return;
  }
  words_[first] |= head;
  for (++first; first < last; ++first) words_[first] = ~std::uint64_t{0};
  words_[last] |= tail;
}

void BinaryImage::fill_span(int y, int x0, int x1) {
  if (y < 0 || y >= height_) return;
  x0 = std::max(x0, 0);
  x1 = std::min(x1, width_);
  if (x0 >= x1) return;
  fill_range(index(x0, y), index(x0, y) + static_cast<std::size_t>(x1 - x0));
}

std::size_t BinaryImage::popcount() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BinaryImage::any() const {
  return std::any_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w != 0; });
}

namespace {

void require_same_shape(const BinaryImage& a, const BinaryImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DomainError("image dimension mismatch");
  }
}

}  // namespace

BinaryImage& BinaryImage::operator|=(const BinaryImage& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

BinaryImage& BinaryImage::operator&=(const BinaryImage& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

std::size_t hamming_distance(const BinaryImage& a, const BinaryImage& b) {
  require_same_shape(a, b);
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t total = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    total += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  }
  return total;
}

std::size_t and_popcount(const BinaryImage& a, const BinaryImage& b) {
  require_same_shape(a, b);
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t total = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    total += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
  }
  return total;
}

void draw_line(BinaryImage& image, Point2 a, Point2 b, int thickness) {
  int x0 = static_cast<int>(std::floor(a.x));
  int y0 = static_cast<int>(std::floor(a.y));
  const int x1 = static_cast<int>(std::floor(b.x));
  const int y1 = static_cast<int>(std::floor(b.y));
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  const int lo = -((thickness - 1) / 2);
  const int hi = thickness / 2;
  int err = dx + dy;
  for (;;) {
    for (int oy = lo; oy <= hi; ++oy) {
      for (int ox = lo; ox <= hi; ++ox) {
        if (image.in_bounds(x0 + ox, y0 + oy)) image.set(x0 + ox, y0 + oy);
      }
    }
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void GrayImage::paint(const BinaryImage& mask, std::uint8_t value) {
  if (mask.width() != width || mask.height() != height) {
    throw DomainError("image dimension mismatch");
  }
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (mask.test(i)) pixels[i] = std::max(pixels[i], value);
  }
}

}  // namespace vizplan
