#pragma once

#include <stdexcept>
#include <string>

namespace alphaseq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// pixel space
struct DimensionMismatch : Error { using Error::Error; };
struct AreaTooSmall      : Error { using Error::Error; };
struct IoError           : Error { using Error::Error; };
struct DecodeError       : Error { using Error::Error; };

// condition synthesis
struct DegenerateAlpha   : Error { using Error::Error; };

// triplet pipeline
struct EmptyForeground   : Error { using Error::Error; };
struct TooFewRecords     : Error { using Error::Error; };

// rotary embedding / position grid
struct OddAxisDim        : Error { using Error::Error; };
struct LengthMismatch    : Error { using Error::Error; };
struct NoTargets         : Error { using Error::Error; };
struct OffsetTooSmall    : Error { using Error::Error; };

// latent codec
struct OddSpatialDim     : Error { using Error::Error; };
struct ShapeMismatch     : Error { using Error::Error; };

// autoencoder
struct BadChannelCount   : Error { using Error::Error; };
struct ShapeError        : Error { using Error::Error; };

// denoiser
struct GridMismatch      : Error { using Error::Error; };
struct NonFiniteLoss     : Error { using Error::Error; };

// task registry
struct UnknownTask       : Error { using Error::Error; };

// evaluation
struct UnknownTemplate   : Error { using Error::Error; };
struct EmptyList         : Error { using Error::Error; };

}  // namespace alphaseq
