/**
 * @file error.hpp
 * @brief Error kinds raised by the library.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frd {

enum class ErrorKind {
    EmptyInput,
    FileError,
    ChannelError,
    KernelError,
    SampleSizeError,
    DimError,
    NumericError,
    CatalogError,
    PairingError,
    ParamError,
    InternalError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure surfaced by the library. what() is "<Kind>: <detail>".
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

}  // namespace frd
