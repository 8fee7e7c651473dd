#pragma once

#include <stdexcept>
#include <string>

namespace metastab {

// Base class for all domain errors thrown by the library.
struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyGraphError : SimError {
  EmptyGraphError() : SimError("graph has no vertices") {}
};

struct UnknownVertexError : SimError {
  explicit UnknownVertexError(std::size_t id)
      : SimError("unknown vertex id " + std::to_string(id)) {}
};

struct NoEmbeddingError : SimError {
  NoEmbeddingError() : SimError("graph has no embedding") {}
  explicit NoEmbeddingError(const std::string& what) : SimError(what) {}
};

struct BadDimensionError : SimError {
  explicit BadDimensionError(const std::string& what) : SimError(what) {}
};

struct TooLargeError : SimError {
  explicit TooLargeError(const std::string& what) : SimError(what) {}
};

struct KillRadiusTooSmallError : SimError {
  KillRadiusTooSmallError(long m, long n)
      : SimError("kill radius " + std::to_string(m) + " must be >= 4n = " +
                 std::to_string(4 * n)) {}
};

struct ImpossibleConditioningError : SimError {
  ImpossibleConditioningError()
      : SimError("offspring law puts all mass on 0: survival conditioning impossible") {}
};

struct RejectionCapExceededError : SimError {
  RejectionCapExceededError()
      : SimError("survival conditioning: rejection cap of 1e6 attempts exceeded") {}
};

struct TooManyVerticesError : SimError {
  explicit TooManyVerticesError(std::size_t nv)
      : SimError("exact solver limited to 20 vertices, got " + std::to_string(nv)) {}
};

struct NonpositiveMeanError : SimError {
  NonpositiveMeanError() : SimError("mean extinction time must be positive") {}
};

struct InsufficientSamplesError : SimError {
  explicit InsufficientSamplesError(const std::string& what) : SimError(what) {}
};

struct TooFewScalesError : SimError {
  TooFewScalesError() : SimError("rate trend needs records at >= 3 scales") {}
};

struct CensoringTooHighError : SimError {
  explicit CensoringTooHighError(long n)
      : SimError("censored fraction >= 50% at scale n=" + std::to_string(n)) {}
};

struct AllCensoredError : SimError {
  AllCensoredError() : SimError("every trial hit the time cap") {}
};

struct NotDisjointError : SimError {
  NotDisjointError() : SimError("subgraphs are not pairwise vertex-disjoint") {}
};

struct NotSubgraphError : SimError {
  NotSubgraphError() : SimError("vertex set is not contained in the parent graph") {}
};

struct NotConnectedError : SimError {
  NotConnectedError() : SimError("graph is not connected") {}
};

struct BadEpsilonError : SimError {
  BadEpsilonError() : SimError("epsilon must lie in (0,1)") {}
};

struct BadParameterError : SimError {
  explicit BadParameterError(const std::string& what) : SimError(what) {}
};

struct NumericalError : SimError {
  explicit NumericalError(const std::string& what) : SimError(what) {}
};

struct ConfigError : SimError {
  ConfigError(int line, const std::string& what)
      : SimError("config line " + std::to_string(line) + ": " + what), line_no(line) {}
  explicit ConfigError(const std::string& what) : SimError(what), line_no(0) {}
  int line_no;
};

}  // namespace metastab
