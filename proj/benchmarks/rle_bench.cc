#include <benchmark/benchmark.h>

#include "vizplan/random.h"
#include "vizplan/rle.h"

namespace {

using vizplan::BinaryImage;
using vizplan::Rng;
namespace rle = vizplan::rle;

BinaryImage noise(int side, double density, std::uint64_t seed) {
  Rng rng(seed);
  BinaryImage img(side, side);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    if (rng.uniform() < density) img.set_index(i);
  }
  return img;
}

// A filled disc, closer to a rendered robot than noise is.
BinaryImage blob(int side, double cx, double cy, double r) {
  BinaryImage img(side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      if (dx * dx + dy * dy <= r * r) img.set(x, y);
    }
  }
  return img;
}

void BM_Encode(benchmark::State& state) {
  const BinaryImage img = noise(static_cast<int>(state.range(0)), 0.3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rle::encode(img));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.pixel_count()));
}
BENCHMARK(BM_Encode)->Arg(64)->Arg(128)->Arg(256);

void BM_CollideDisjointBlobs(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto a = rle::encode(blob(side, side * 0.3, side * 0.5, side * 0.2));
  const auto b = rle::encode(blob(side, side * 0.75, side * 0.5, side * 0.2));
  for (auto _ : state) benchmark::DoNotOptimize(rle::collide(a, b));
}
BENCHMARK(BM_CollideDisjointBlobs)->Arg(64)->Arg(128)->Arg(256);

void BM_CollideVsBitwiseAnd(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const BinaryImage a = blob(side, side * 0.3, side * 0.5, side * 0.2);
  const BinaryImage b = blob(side, side * 0.75, side * 0.5, side * 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(vizplan::and_popcount(a, b));
}
BENCHMARK(BM_CollideVsBitwiseAnd)->Arg(64)->Arg(128)->Arg(256);

void BM_PenetrationNoise(benchmark::State& state) {
  const auto a = rle::encode(noise(128, state.range(0) / 100.0, 2));
  const auto b = rle::encode(noise(128, state.range(0) / 100.0, 3));
  for (auto _ : state) benchmark::DoNotOptimize(rle::penetration(a, b));
  state.counters["intervals"] = static_cast<double>(a.size() + b.size());
}
BENCHMARK(BM_PenetrationNoise)->Arg(1)->Arg(10)->Arg(50);

}  // namespace
