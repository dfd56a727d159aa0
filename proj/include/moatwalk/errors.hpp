#pragma once

#include <stdexcept>
#include <string>

namespace moatwalk {

// Domain errors map to CLI exit code 1; CLI11 usage errors map to 2.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CapacityError : DomainError {
    explicit CapacityError(const std::string& msg) : DomainError(msg) {}
};

struct InvalidStartError : DomainError {
    explicit InvalidStartError(const std::string& msg) : DomainError(msg) {}
};

struct RegionError : DomainError {
    explicit RegionError(const std::string& msg) : DomainError(msg) {}
};

struct SpecMismatchError : DomainError {
    explicit SpecMismatchError(const std::string& msg) : DomainError(msg) {}
};

struct ParseError : DomainError {
    explicit ParseError(const std::string& msg) : DomainError(msg) {}
};

struct CacheError : DomainError {
    explicit CacheError(const std::string& msg) : DomainError(msg) {}
};

}  // namespace moatwalk
