#pragma once

#include <stdexcept>
#include <string>

namespace ehdl {

#define EHDL_ERROR(NAME)                                               \
    struct NAME : std::runtime_error {                                \
        explicit NAME(const std::string& msg) : std::runtime_error(std::string(#NAME ": ") + msg) {} \
    }

EHDL_ERROR(OutOfBounds);
EHDL_ERROR(RangeOutOfBounds);
EHDL_ERROR(NotPowerOfTwo);
EHDL_ERROR(BufferTooLarge);
EHDL_ERROR(LengthMismatch);
EHDL_ERROR(BadMagic);
EHDL_ERROR(VersionMismatch);
EHDL_ERROR(TruncatedBlob);
EHDL_ERROR(ShapeArithmeticMismatch);
EHDL_ERROR(ExceedsFram);
EHDL_ERROR(ShapeMismatch);
EHDL_ERROR(KernelTooLargeForAccelBuffer);
EHDL_ERROR(OddDimension);
EHDL_ERROR(FramFull);
EHDL_ERROR(DidNotFinish);
EHDL_ERROR(DatasetMissing);
EHDL_ERROR(Diverged);
EHDL_ERROR(InfeasibleTarget);
EHDL_ERROR(RangeViolation);

#undef EHDL_ERROR

}  // namespace ehdl
