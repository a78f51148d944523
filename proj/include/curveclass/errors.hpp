#pragma once

#include <stdexcept>
#include <string>

namespace curveclass {

// Base for all library errors so callers can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define CURVECLASS_ERROR(Name)                                    \
    struct Name : Error {                                         \
        explicit Name(const std::string& msg = #Name) : Error(msg) {} \
    }

// field
CURVECLASS_ERROR(EmptyMask);
CURVECLASS_ERROR(GridTooSmall);
CURVECLASS_ERROR(OutOfBounds);
CURVECLASS_ERROR(NoIsocontour);
CURVECLASS_ERROR(DegenerateIsocontour);

// contour
CURVECLASS_ERROR(EmptyImage);
CURVECLASS_ERROR(TooSmall);
CURVECLASS_ERROR(TooFewPoints);

// registration
CURVECLASS_ERROR(NonFiniteObjective);
CURVECLASS_ERROR(AllSamplesInvalid);
CURVECLASS_ERROR(InvalidSample);
CURVECLASS_ERROR(DegenerateScale);
CURVECLASS_ERROR(NotUnit);

// similarity
CURVECLASS_ERROR(DegenerateReference);
CURVECLASS_ERROR(DegenerateLength);
CURVECLASS_ERROR(BadRho);
CURVECLASS_ERROR(InsufficientSample);

// stats
CURVECLASS_ERROR(TooFewValues);
CURVECLASS_ERROR(ZeroVariance);
CURVECLASS_ERROR(BadDof);
CURVECLASS_ERROR(BadN);

// classify
CURVECLASS_ERROR(TooFewInstances);
CURVECLASS_ERROR(TooFewPairs);
CURVECLASS_ERROR(IncompleteTable);
CURVECLASS_ERROR(NoCommonSymbols);

// store
CURVECLASS_ERROR(ConflictingRecord);
CURVECLASS_ERROR(IoFailure);

#undef CURVECLASS_ERROR

}  // namespace curveclass
