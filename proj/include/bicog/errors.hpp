#pragma once

#include <stdexcept>
#include <string>

namespace bicog {

struct InsufficientClassSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoPrototype : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyTrainSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PeerCountMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConsensus : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidErrorRatio : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoiseTooHigh : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptySubset : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownId : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingColumn : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidParams : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bicog
