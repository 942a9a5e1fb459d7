#include "vizplan/rle.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <memory>

#include "vizplan/errors.h"

namespace vizplan::rle {

IntervalRle::IntervalRle(int width, int height) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw FormatError("negative RLE dimensions");
}

IntervalRle::IntervalRle(int width, int height, std::vector<Interval> intervals)
    : IntervalRle(width, height) {
  const std::uint64_t limit = pixel_count();
  intervals_.reserve(intervals.size());
  for (const Interval& iv : intervals) {
    if (iv.lb >= iv.ub) throw FormatError("empty or inverted RLE interval");
    if (iv.ub > limit) throw FormatError("RLE interval out of bounds");
    if (!intervals_.empty()) {
      Interval& last = intervals_.back();
      if (iv.lb < last.ub) throw FormatError("RLE intervals overlap or are unordered");
      if (iv.lb == last.ub) {
        last.ub = iv.ub;
        continue;
      }
    }
    intervals_.push_back(iv);
  }
}

std::uint64_t IntervalRle::popcount() const {
  std::uint64_t total = 0;
  for (const Interval& iv : intervals_) total += iv.length();
  return total;
}

namespace {

std::size_t next_with_value(std::span<const std::uint64_t> words, std::size_t pos,
                            std::size_t limit, bool value) {
  if (pos >= limit) return limit;
  std::size_t idx = pos >> 6;
  std::uint64_t w = value ? words[idx] : ~words[idx];
  w &= ~std::uint64_t{0} << (pos & 63);
  while (w == 0) {
    if (++idx >= words.size()) return limit;
    w = value ? words[idx] : ~words[idx];
  }
  return std::min(limit, idx * 64 + static_cast<std::size_t>(std::countr_zero(w)));
}

void require_same_shape(const IntervalRle& a, const IntervalRle& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DomainError("RLE dimension mismatch");
  }
}

}  // namespace

IntervalRle encode(const BinaryImage& image) {
  const auto words = image.words();
  const std::size_t n = image.pixel_count();
  std::vector<Interval> out;
  std::size_t pos = 0;
  while (pos < n) {
    const std::size_t start = next_with_value(words, pos, n, true);
    if (start >= n) break;
    const std::size_t stop = next_with_value(words, start, n, false);
    out.push_back({static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(stop)});
    pos = stop;
  }
  return IntervalRle(image.width(), image.height(), std::move(out));
}

BinaryImage decode(const IntervalRle& rle) {
  BinaryImage image(rle.width(), rle.height());
  for (const Interval& iv : rle.intervals()) image.fill_range(iv.lb, iv.ub);
  return image;
}

bool collide(const IntervalRle& r, const IntervalRle& o, std::uint64_t* comparisons) {
  require_same_shape(r, o);
  const auto ri = r.intervals();
  const auto oi = o.intervals();
  std::size_t i = 0;
  std::size_t j = 0;
  std::uint64_t count = 0;
  bool hit = false;
  while (i < ri.size() && j < oi.size()) {
    ++count;
    if (std::min(ri[i].ub, oi[j].ub) > std::max(ri[i].lb, oi[j].lb)) {
      hit = true;
      break;
    }
    if (ri[i].ub <= oi[j].ub) {
      ++i;
    } else {
      ++j;
    }
  }
  if (comparisons != nullptr) *comparisons = count;
  return hit;
}

std::uint64_t penetration(const IntervalRle& r, const IntervalRle& o) {
  require_same_shape(r, o);
  const auto ri = r.intervals();
  const auto oi = o.intervals();
  std::size_t i = 0;
  std::size_t j = 0;
  std::uint64_t total = 0;
  while (i < ri.size() && j < oi.size()) {
    const std::uint32_t hi = std::min(ri[i].ub, oi[j].ub);
    const std::uint32_t lo = std::max(ri[i].lb, oi[j].lb);
    // Disjoint pairs would contribute a negative amount; skip them.
    if (hi > lo) total += hi - lo;
    if (ri[i].ub <= oi[j].ub) {
      ++i;
    } else {
      ++j;
    }
  }
  return total;
}

IntervalRle intersect(const IntervalRle& a, const IntervalRle& b) {
  require_same_shape(a, b);
  const auto ai = a.intervals();
  const auto bi = b.intervals();
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ai.size() && j < bi.size()) {
    const std::uint32_t hi = std::min(ai[i].ub, bi[j].ub);
    const std::uint32_t lo = std::max(ai[i].lb, bi[j].lb);
    if (hi > lo) out.push_back({lo, hi});
    if (ai[i].ub <= bi[j].ub) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalRle(a.width(), a.height(), std::move(out));
}

IntervalRle unite(const IntervalRle& a, const IntervalRle& b) {
  require_same_shape(a, b);
  std::vector<Interval> merged;
  merged.reserve(a.size() + b.size());
  std::merge(a.intervals().begin(), a.intervals().end(), b.intervals().begin(),
             b.intervals().end(), std::back_inserter(merged),
             [](const Interval& x, const Interval& y) { return x.lb < y.lb; });
  std::vector<Interval> out;
  for (const Interval& iv : merged) {
    if (!out.empty() && iv.lb <= out.back().ub) {
      out.back().ub = std::max(out.back().ub, iv.ub);
    } else {
      out.push_back(iv);
    }
  }
  return IntervalRle(a.width(), a.height(), std::move(out));
}

std::string to_text(const IntervalRle& rle) {
  std::string s = std::to_string(rle.width()) + " " + std::to_string(rle.height()) + ";";
  for (const Interval& iv : rle.intervals()) {
    s += " ";
    s += std::to_string(iv.lb);
    s += " ";
    s += std::to_string(iv.ub);
  }
  return s;
}

namespace {

std::vector<std::uint64_t> parse_numbers(std::string_view text) {
  std::vector<std::uint64_t> values;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos >= text.size()) break;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc()) throw FormatError("malformed RLE text");
    values.push_back(v);
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  return values;
}

}  // namespace

IntervalRle from_text(std::string_view text) {
  const std::size_t semi = text.find(';');
  if (semi == std::string_view::npos) throw FormatError("RLE text lacks ';'");
  const auto dims = parse_numbers(text.substr(0, semi));
  if (dims.size() != 2) throw FormatError("RLE text needs width and height");
  const auto bounds = parse_numbers(text.substr(semi + 1));
  if (bounds.size() % 2 != 0) throw FormatError("RLE text has an odd bound count");
  std::vector<Interval> intervals;
  for (std::size_t i = 0; i < bounds.size(); i += 2) {
    if (bounds[i] > UINT32_MAX || bounds[i + 1] > UINT32_MAX) {
      throw FormatError("RLE bound exceeds 32 bits");
    }
    intervals.push_back({static_cast<std::uint32_t>(bounds[i]),
                         static_cast<std::uint32_t>(bounds[i + 1])});
  }
  if (dims[0] > INT32_MAX || dims[1] > INT32_MAX) throw FormatError("RLE dimensions too large");
  return IntervalRle(static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                     std::move(intervals));
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(bytes[offset + b]) << (8 * b);
  return v;
}

}  // namespace

std::vector<std::uint8_t> to_binary(const IntervalRle& rle) {
  std::vector<std::uint8_t> out;
  out.reserve(12 + 8 * rle.size());
  put_u32(out, static_cast<std::uint32_t>(rle.width()));
  put_u32(out, static_cast<std::uint32_t>(rle.height()));
  put_u32(out, static_cast<std::uint32_t>(rle.size()));
  for (const Interval& iv : rle.intervals()) {
    put_u32(out, iv.lb);
    put_u32(out, iv.ub);
  }
  return out;
}

IntervalRle from_binary(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) throw FormatError("truncated binary RLE header");
  const std::uint32_t w = get_u32(bytes, 0);
  const std::uint32_t h = get_u32(bytes, 4);
  const std::uint32_t count = get_u32(bytes, 8);
  if (bytes.size() != 12 + 8 * static_cast<std::size_t>(count)) {
    throw FormatError("binary RLE length does not match interval count");
  }
  if (w > INT32_MAX || h > INT32_MAX) throw FormatError("RLE dimensions too large");
  std::vector<Interval> intervals(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    intervals[k] = {get_u32(bytes, 12 + 8 * k), get_u32(bytes, 16 + 8 * k)};
  }
  return IntervalRle(static_cast<int>(w), static_cast<int>(h), std::move(intervals));
}

namespace internal {

std::vector<std::uint64_t> run_lengths(std::span<const bool> bits) {
  std::vector<std::uint64_t> runs;
  bool current = false;
  std::uint64_t length = 0;
  for (bool b : bits) {
    if (b != current) {
      runs.push_back(length);
      current = b;
      length = 0;
    }
    ++length;
  }
  if (length > 0) runs.push_back(length);
  return runs;
}

std::vector<std::uint64_t> run_lengths(std::string_view bits) {
  std::unique_ptr<bool[]> plain(new bool[bits.size()]);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw FormatError("bit string may only contain 0 and 1");
    }
    plain[i] = bits[i] == '1';
  }
  return run_lengths(std::span<const bool>(plain.get(), bits.size()));
}

std::vector<std::uint64_t> row_run_lengths(const BinaryImage& image) {
  std::vector<std::uint64_t> runs;
  std::unique_ptr<bool[]> row(new bool[static_cast<std::size_t>(image.width())]);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) row[x] = image.get(x, y);
    const auto r = run_lengths(
        std::span<const bool>(row.get(), static_cast<std::size_t>(image.width())));
    runs.insert(runs.end(), r.begin(), r.end());
  }
  return runs;
}

std::vector<std::uint64_t> flat_run_lengths(const BinaryImage& image) {
  std::unique_ptr<bool[]> flat(new bool[image.pixel_count()]);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) flat[i] = image.test(i);
  return run_lengths(std::span<const bool>(flat.get(), image.pixel_count()));
}

BinaryImage decode_row_runs(int width, int height, std::span<const std::uint64_t> runs) {
  BinaryImage image(width, height);
  int y = 0;
  std::uint64_t x = 0;
  bool value = false;
  for (std::uint64_t len : runs) {
    if (y >= height) throw FormatError("row runs exceed image height");
    if (x + len > static_cast<std::uint64_t>(width)) throw FormatError("row run crosses row end");
    if (value) image.fill_span(y, static_cast<int>(x), static_cast<int>(x + len));
    x += len;
    value = !value;
    if (x == static_cast<std::uint64_t>(width)) {
      ++y;
      x = 0;
      value = false;
    }
  }
  if (y != height || x != 0) throw FormatError("row runs do not cover the image");
  return image;
}

IntervalRle intervals_from_runs(int width, int height, std::span<const std::uint64_t> runs) {
  std::vector<Interval> out;
  std::uint64_t pos = 0;
  bool value = false;
  for (std::uint64_t len : runs) {
    if (value && len > 0) {
      out.push_back({static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(pos + len)});
    }
    pos += len;
    value = !value;
  }
  return IntervalRle(width, height, std::move(out));
}

}  // namespace internal

}  // namespace vizplan::rle
