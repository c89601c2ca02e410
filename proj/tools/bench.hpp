#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bu::cli {

inline constexpr int kMinBenchReps = 10;
inline constexpr int kBenchWarmups = 3;

struct BenchRecord {
  std::string method;  // "sl", "bu" or "dpt"
  int image_size = 0;
  int reps = 0;
  double median_ns = 0.0;
};

/// Times each ground-truth transform on one synthetic mask per size: sl
/// (0.9/0.1), bu (square3, n=1, 0.9/0.1) and dpt. Each figure is the median of
/// `reps` monotonic-clock runs after kBenchWarmups untimed runs.
std::vector<BenchRecord> run_transform_bench(std::span<const int> sizes, int reps,
                                             std::uint64_t seed);

/// "method,size,reps,median_ns" plus one line per record.
std::string bench_csv(std::span<const BenchRecord> records);

}  // namespace bu::cli
