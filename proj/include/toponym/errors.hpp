#pragma once

#include <stdexcept>
#include <string>

namespace toponym {

// Base class for all library errors. `kind()` is a stable machine-readable
// tag; `what()` carries the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Input document could not be read or parsed at all.
class IoError : public Error {
public:
    using Error::Error;
};

// Input parsed but violates the data model (schema, invariants, ranges).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Nomenclature string rejected; `position` is a 0-based character offset.
class NameParseError : public Error {
public:
    NameParseError(std::string kind, const std::string& msg, std::size_t position)
        : Error(std::move(kind), msg), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

[[noreturn]] inline void throw_validation(const std::string& kind, const std::string& msg) {
    throw ValidationError(kind, msg);
}

}  // namespace toponym
