#include "siwkit/error.hpp"

namespace siwkit {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::MissingFrequency: return "MissingFrequency";
        case ErrorKind::DegenerateCavity: return "DegenerateCavity";
        case ErrorKind::InvalidTarget: return "InvalidTarget";
        case ErrorKind::UnknownParameter: return "UnknownParameter";
        case ErrorKind::NoResonance: return "NoResonance";
        case ErrorKind::BandEdgeClipped: return "BandEdgeClipped";
        case ErrorKind::FullTransmission: return "FullTransmission";
        case ErrorKind::InvalidQ: return "InvalidQ";
        case ErrorKind::ResolutionTooCoarse: return "ResolutionTooCoarse";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::MalformedOptionLine: return "MalformedOptionLine";
        case ErrorKind::NonMonotonicFrequency: return "NonMonotonicFrequency";
        case ErrorKind::BadRowArity: return "BadRowArity";
        case ErrorKind::SingularConversion: return "SingularConversion";
        case ErrorKind::DesignFileError: return "DesignFileError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace siwkit
