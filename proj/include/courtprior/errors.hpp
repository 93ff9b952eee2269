#ifndef COURTPRIOR_ERRORS_HPP
#define COURTPRIOR_ERRORS_HPP

#include <stdexcept>

namespace courtprior {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raster / codec
struct MalformedImage : Error { using Error::Error; };
struct UnsupportedFormat : Error { using Error::Error; };
struct EmptyCrop : Error { using Error::Error; };
struct ImageTooSmall : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// Geometry
struct DegenerateInput : Error { using Error::Error; };
struct InvalidFactor : Error { using Error::Error; };

// Dataset
struct SchemaError : Error { using Error::Error; };
struct EmptyMask : Error { using Error::Error; };
struct MissingRegion : Error { using Error::Error; };

// Augmentation
struct RegionTooSmall : Error { using Error::Error; };
struct OutOfFrame : Error { using Error::Error; };

// Tooling
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace courtprior

#endif
