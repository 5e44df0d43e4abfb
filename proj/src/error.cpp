#include "frd/error.hpp"

namespace frd {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::FileError: return "FileError";
        case ErrorKind::ChannelError: return "ChannelError";
        case ErrorKind::KernelError: return "KernelError";
        case ErrorKind::SampleSizeError: return "SampleSizeError";
        case ErrorKind::DimError: return "DimError";
        case ErrorKind::NumericError: return "NumericError";
        case ErrorKind::CatalogError: return "CatalogError";
        case ErrorKind::PairingError: return "PairingError";
        case ErrorKind::ParamError: return "ParamError";
        case ErrorKind::InternalError: return "InternalError";
    }
    return "Error";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

}  // namespace frd
