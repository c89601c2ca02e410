#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

#include "bu/synthesis.hpp"
#include "bu/transforms.hpp"

namespace bu::cli {

namespace {

// Keeps the timed results observable so the calls cannot be elided.
volatile double g_sink = 0.0;

double median(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const auto n = samples.size();
  return n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

double time_median_ns(const std::function<double()>& run, int reps) {
  for (int i = 0; i < kBenchWarmups; ++i) g_sink = g_sink + run();
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(reps));
  for (int i = 0; i < reps; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const double value = run();
    const auto stop = std::chrono::steady_clock::now();
    g_sink = g_sink + value;
    samples.push_back(std::chrono::duration<double, std::nano>(stop - start).count());
  }
  return median(std::move(samples));
}

}  // namespace

std::vector<BenchRecord> run_transform_bench(std::span<const int> sizes, int reps,
                                             std::uint64_t seed) {
  if (reps < kMinBenchReps) {
    throw Error(ErrorCode::ConstraintViolation,
                "reps must be >= " + std::to_string(kMinBenchReps));
  }
  if (sizes.empty()) throw Error(ErrorCode::ConstraintViolation, "sizes must be nonempty");

  const BUParams bu_params;  // square3, n=1, 0.9/0.1 balanced
  std::vector<BenchRecord> records;
  for (const int size : sizes) {
    SynthConfig config;
    config.seed = seed;
    config.count = 1;
    config.width = size;
    config.height = size;
    const auto mask = generate(config).items.front().mask;

    const std::pair<const char*, std::function<double()>> methods[] = {
        {"sl", [&] { return soft_label(mask, 0.9, 0.1)[0]; }},
        {"bu", [&] { return boundary_uncertainty(mask, bu_params)[0]; }},
        {"dpt", [&] { return dpt_transform(mask).sdm[0]; }},
    };
    for (const auto& [name, run] : methods) {
      records.push_back({name, size, reps, time_median_ns(run, reps)});
    }
  }
  return records;
}

std::string bench_csv(std::span<const BenchRecord> records) {
  std::string out = "method,size,reps,median_ns\n";
  for (const auto& r : records) {
    out += r.method + "," + std::to_string(r.image_size) + "," + std::to_string(r.reps) + "," +
           std::to_string(static_cast<long long>(r.median_ns + 0.5)) + "\n";
  }
  return out;
}

}  // namespace bu::cli
