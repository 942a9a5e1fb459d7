#include <benchmark/benchmark.h>

// The distro's libbenchmark_main.a carries LTO bytecode from another compiler
// build, so the entry point is defined here instead.
BENCHMARK_MAIN();
