#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace siwkit {

enum class ErrorKind {
    InvalidArgument,
    MissingFrequency,
    DegenerateCavity,
    InvalidTarget,
    UnknownParameter,
    NoResonance,
    BandEdgeClipped,
    FullTransmission,
    InvalidQ,
    ResolutionTooCoarse,
    NoConvergence,
    UnsupportedFamily,
    SingularMatrix,
    MalformedOptionLine,
    NonMonotonicFrequency,
    BadRowArity,
    SingularConversion,
    DesignFileError,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Domain error raised by every siwkit operation. The kind is stable and
/// machine-checkable; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    /// Message without the kind prefix.
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

}  // namespace siwkit
