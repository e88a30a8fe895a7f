#pragma once

#include <stdexcept>
#include <string>

namespace toa {

/// Base class of every failure raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define TOA_DEFINE_ERROR(Name, tag)                                            \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(tag, what) {}           \
    }

TOA_DEFINE_ERROR(InvalidArgument, "InvalidArgument");
TOA_DEFINE_ERROR(NonConvergence, "NonConvergence");
TOA_DEFINE_ERROR(DomainError, "DomainError");
TOA_DEFINE_ERROR(QuadratureFailure, "QuadratureFailure");
TOA_DEFINE_ERROR(MissingDependency, "MissingDependency");
TOA_DEFINE_ERROR(NonRealResult, "NonRealResult");
TOA_DEFINE_ERROR(NonRealExpectation, "NonRealExpectation");
TOA_DEFINE_ERROR(ClassicallyForbidden, "ClassicallyForbidden");
TOA_DEFINE_ERROR(DegenerateSignal, "DegenerateSignal");

#undef TOA_DEFINE_ERROR

} // namespace toa
