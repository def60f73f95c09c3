// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Usage: jamsim_acceptance [preset] [threads]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "jamsim/validation.hpp"

int main(int argc, char** argv) {
  const std::string preset = argc > 1 ? argv[1] : "full";
  const int threads = argc > 2 ? std::atoi(argv[2]) : 0;  // 0 = hardware

  std::vector<jamsim::CriterionResult> results;
  try {
    results =
        jamsim::run_acceptance(preset, jamsim::kValidationSeed, threads);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance suite error: %s\n", e.what());
    return 2;
  }

  int failed = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    std::printf("[%zu/%zu] %-26s %s  (%.2fs)  %s\n", i + 1, results.size(),
                r.id.c_str(), r.pass ? "PASS" : "FAIL", r.seconds,
                r.detail.c_str());
    if (!r.pass) ++failed;
  }
  if (failed > 0) {
    std::printf("%d criterion(s) FAILED\n", failed);
    return 1;
  }
  std::printf("all %zu criteria passed (preset=%s)\n", results.size(),
              preset.c_str());
  return 0;
}
