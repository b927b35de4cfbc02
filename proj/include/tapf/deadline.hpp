#ifndef TAPF_DEADLINE_HPP
#define TAPF_DEADLINE_HPP

#include <chrono>
#include <stdexcept>

namespace tapf {

class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("time limit reached") {}
};

/// Cooperative wall-clock limit, polled by the search loop and the flow
/// solvers.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;

  static Deadline after(double seconds) {
    Deadline d;
    if (seconds > 0) {
      d.bounded_ = true;
      d.end_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(seconds));
    }
    return d;
  }

  bool expired() const { return bounded_ && Clock::now() >= end_; }
  void check() const {
    if (expired()) throw TimeoutError();
  }

 private:
  bool bounded_ = false;
  Clock::time_point end_{};
};

}  // namespace tapf

#endif  // TAPF_DEADLINE_HPP
