#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace xorcode {

// Every library failure derives from Error. The CLI maps ParseError and
// InvalidArgument to exit status 2 and everything else to 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class SearchFailure : public Error {
public:
    SearchFailure(const std::string& what, std::size_t attempts)
        : Error(what), attempts_(attempts) {}

    [[nodiscard]] std::size_t attempts() const noexcept { return attempts_; }

private:
    std::size_t attempts_;
};

// Raised when the received coding vectors do not span the full space.
// recoverable() lists the 1-based source indexes that are still decodable.
class PartialDecodeError : public Error {
public:
    PartialDecodeError(const std::string& what, std::vector<std::size_t> recoverable)
        : Error(what), recoverable_(std::move(recoverable)) {}

    [[nodiscard]] const std::vector<std::size_t>& recoverable() const noexcept { return recoverable_; }

private:
    std::vector<std::size_t> recoverable_;
};

class IntegrityError : public Error {
public:
    using Error::Error;
};

class UnsupportedTopology : public Error {
public:
    using Error::Error;
};

class InfeasibleSchedule : public Error {
public:
    using Error::Error;
};

}  // namespace xorcode
