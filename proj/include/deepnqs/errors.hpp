#pragma once

#include <stdexcept>

namespace deepnqs {

/// A realization produced a non-representable state (vanishing sum of
/// exponentials, underflowed norm, non-finite amplitudes). Ensemble drivers
/// count these instead of aborting.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace deepnqs
