#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace pulsefield {

using Index = Eigen::Index;

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model constant violates its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of an operation (NaN, bad delta, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The grid is too coarse for the requested operation.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A level or level window lies outside the materialized range 0..j_max.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// Too few samples to run a regression.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing an artifact failed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Inclusive range of dyadic levels.
struct LevelRange {
  int lo = 0;
  int hi = 0;

  [[nodiscard]] bool contains(int j) const noexcept { return lo <= j && j <= hi; }
  [[nodiscard]] int count() const noexcept { return hi >= lo ? hi - lo + 1 : 0; }
  friend bool operator==(const LevelRange&, const LevelRange&) = default;
};

/// Half-open range [begin, end) of pulse indices.
struct IndexRange {
  Index begin = 0;
  Index end = 0;

  [[nodiscard]] Index size() const noexcept { return end - begin; }
  [[nodiscard]] bool empty() const noexcept { return end <= begin; }
  [[nodiscard]] bool contains(Index n) const noexcept { return begin <= n && n < end; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Sentinel used for undefined epsilons and empty spectrum bins.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kNegInfinity = -std::numeric_limits<double>::infinity();

/// Number of worker threads: PULSEFIELD_THREADS when set and positive,
/// otherwise hardware concurrency.
[[nodiscard]] unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunk
/// boundaries depend only on count and chunk, never on the thread count, so
/// any per-chunk reduction is reproducible.
void parallel_for(Index count, Index chunk,
                  const std::function<void(Index, Index)>& body);

}  // namespace pulsefield
