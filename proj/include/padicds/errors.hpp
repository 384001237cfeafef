#pragma once

#include <stdexcept>
#include <string>

namespace padicds {

// Base class for all domain errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& what) : Error(what) {}
};

struct NotPAdicInteger : Error {
    explicit NotPAdicInteger(const std::string& what) : Error(what) {}
};

struct InvalidRadius : Error {
    explicit InvalidRadius(const std::string& what) : Error(what) {}
};

struct NotInvertible : Error {
    explicit NotInvertible(const std::string& what) : Error(what) {}
};

struct DegenerateBall : Error {
    explicit DegenerateBall(const std::string& what) : Error(what) {}
};

struct NotAUnitBall : Error {
    explicit NotAUnitBall(const std::string& what) : Error(what) {}
};

struct NotAUnit : Error {
    explicit NotAUnit(const std::string& what) : Error(what) {}
};

struct PrimeMismatch : Error {
    explicit PrimeMismatch(const std::string& what) : Error(what) {}
};

struct SearchCapExceeded : Error {
    explicit SearchCapExceeded(const std::string& what) : Error(what) {}
};

struct InvalidDigits : Error {
    explicit InvalidDigits(const std::string& what) : Error(what) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& what) : Error(what) {}
};

struct RepresentsOne : Error {
    explicit RepresentsOne(const std::string& what) : Error(what) {}
};

struct InvalidResidue : Error {
    explicit InvalidResidue(const std::string& what) : Error(what) {}
};

struct PreconditionFailed : Error {
    explicit PreconditionFailed(const std::string& what) : Error(what) {}
};

} // namespace padicds
