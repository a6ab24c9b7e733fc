#pragma once

#include <stdexcept>

namespace eprsim {

// Base class for every error thrown by the simulator.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParamsError : SimError { using SimError::SimError; };
struct UnknownModeError : SimError { using SimError::SimError; };
struct NonUnitaryError : SimError { using SimError::SimError; };
struct ZeroProbabilityError : SimError { using SimError::SimError; };
struct DimensionMismatchError : SimError { using SimError::SimError; };
struct InvalidTransmissivityError : SimError { using SimError::SimError; };
struct PhotonCapError : SimError { using SimError::SimError; };

}  // namespace eprsim
