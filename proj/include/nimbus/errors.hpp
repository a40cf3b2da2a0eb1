#pragma once

#include <stdexcept>
#include <string>

namespace nimbus {

// Error taxonomy shared across the library. The CLI maps ConfigError to
// exit code 1 and everything else to exit code 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };       // bad flags / config document
struct ShapeError : Error { using Error::Error; };        // tensor shape mismatch
struct LayoutError : Error { using Error::Error; };       // missing variable/level channel
struct DomainError : Error { using Error::Error; };       // formula evaluated outside its domain
struct ContractError : Error { using Error::Error; };     // precondition violated
struct ValidationError : Error { using Error::Error; };   // data fails type invariants
struct FormatError : Error { using Error::Error; };       // unrecognized file format
struct CorruptionError : Error { using Error::Error; };   // truncated or inconsistent file
struct PersistenceError : Error { using Error::Error; };  // filesystem I/O failure
struct DivergenceError : Error { using Error::Error; };   // non-finite state in rollout/training
struct UndefinedMetricError : Error { using Error::Error; };  // e.g. ACC with zero anomaly variance
struct NumericError : Error { using Error::Error; };      // non-finite intermediate value

}  // namespace nimbus
