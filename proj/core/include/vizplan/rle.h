#ifndef VIZPLAN_RLE_H_
#define VIZPLAN_RLE_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vizplan/image.h"

namespace vizplan::rle {

// Half-open run of set pixels [lb, ub) over the flattened row-major index.
struct Interval {
  std::uint32_t lb = 0;
  std::uint32_t ub = 0;

  std::uint64_t length() const { return ub - lb; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Interval run-length encoding of a binary image.
//
// Always held in normal form: intervals are non-empty, strictly increasing,
// non-overlapping and never adjacent (touching runs are merged), so two
// encodings of the same image compare equal.
class IntervalRle {
 public:
  IntervalRle() = default;
  IntervalRle(int width, int height);
  // Validates and normalizes. Throws FormatError when an interval is empty,
  // out of bounds, or overlaps / precedes its predecessor.
  IntervalRle(int width, int height, std::vector<Interval> intervals);

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint64_t pixel_count() const {
    return static_cast<std::uint64_t>(width_) * static_cast<std::uint64_t>(height_);
  }
  std::span<const Interval> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  std::uint64_t popcount() const;

  friend bool operator==(const IntervalRle&, const IntervalRle&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Interval> intervals_;
};

IntervalRle encode(const BinaryImage& image);
BinaryImage decode(const IntervalRle& rle);

// True iff some interval of `r` overlaps some interval of `o`. Two-pointer
// sweep; when `comparisons` is non-null it receives the number of overlap
// tests performed (never more than r.size() + o.size()).
// Throws DomainError when the dimensions differ.
bool collide(const IntervalRle& r, const IntervalRle& o,
             std::uint64_t* comparisons = nullptr);

// Number of pixels set in both images (sum of positive interval overlaps).
std::uint64_t penetration(const IntervalRle& r, const IntervalRle& o);

// Pixelwise AND / OR in interval form.
IntervalRle intersect(const IntervalRle& a, const IntervalRle& b);
IntervalRle unite(const IntervalRle& a, const IntervalRle& b);

// Text form used in dataset manifests: "W H; lb0 ub0 lb1 ub1 ...".
std::string to_text(const IntervalRle& rle);
IntervalRle from_text(std::string_view text);

// Compact cache form: little-endian u32 width, height, count, then (lb, ub)
// u32 pairs.
std::vector<std::uint8_t> to_binary(const IntervalRle& rle);
IntervalRle from_binary(std::span<const std::uint8_t> bytes);

namespace internal {

// Plain binary run lengths: alternating runs starting with a (possibly
// empty) run of zeros.
std::vector<std::uint64_t> run_lengths(std::span<const bool> bits);
std::vector<std::uint64_t> run_lengths(std::string_view bits);  // '0'/'1'

// Row-wise runs, each row restarting with a zero run; concatenated.
std::vector<std::uint64_t> row_run_lengths(const BinaryImage& image);

// Runs over the flattened image.
std::vector<std::uint64_t> flat_run_lengths(const BinaryImage& image);

// Rebuilds an image from row-wise runs.
BinaryImage decode_row_runs(int width, int height,
                            std::span<const std::uint64_t> runs);

// Converts flattened alternating runs to intervals.
IntervalRle intervals_from_runs(int width, int height,
                                std::span<const std::uint64_t> runs);

}  // namespace internal

}  // namespace vizplan::rle

#endif  // VIZPLAN_RLE_H_
