#pragma once

#include <stdexcept>
#include <string>

namespace beamlab {

enum class ErrorCode {
    InvalidArgument,
    OutOfRange,
    DegeneratePotential,
    IllConditioned,
    NearSingular,
    EmptyProjection,
    QuadratureFailure,
    NotConverged,
    NoRoot,
    Io
};

const char* errorName(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(errorName(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace beamlab
