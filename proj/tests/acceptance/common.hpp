#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace properad::acceptance {

// Outcome of one criterion: pass/fail plus a short detail line.
struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void fail(std::string why) {
    pass = false;
    if (failures.size() < 10) failures.push_back(std::move(why));
  }
};

// Collects failures from worker threads.
class SharedOutcome {
 public:
  void fail(std::string why) {
    std::lock_guard<std::mutex> lock(mutex_);
    outcome_.fail(std::move(why));
  }
  Outcome take() { return std::move(outcome_); }

 private:
  std::mutex mutex_;
  Outcome outcome_;
};

// Runs body(i) for i in [0, n) on all hardware threads.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Outcome criterion_worked_examples();
Outcome criterion_substitution_laws();
// Criteria 3 and 4 share one exhaustive pass over the same corpus.
void criterion_reedy(Outcome& factorization, Outcome& axioms);
Outcome criterion_simplicial_cofaces();
Outcome criterion_free_properads();
Outcome criterion_nerve_segal();
Outcome criterion_cli_contract();

}  // namespace properad::acceptance
