// Error types shared across the library.

#ifndef PERBIF_ERRORS_HPP
#define PERBIF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace perbif {

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByNearZero : NumericError {
    explicit DivisionByNearZero(const std::string& what) : NumericError(what) {}
};

struct TanPole : NumericError {
    explicit TanPole(const std::string& what) : NumericError(what) {}
};

struct UnsupportedInRationalMode : NumericError {
    explicit UnsupportedInRationalMode(const std::string& what) : NumericError(what) {}
};

struct ExpansionPointMismatch : NumericError {
    explicit ExpansionPointMismatch(const std::string& what) : NumericError(what) {}
};

struct InsufficientOrder : NumericError {
    explicit InsufficientOrder(const std::string& what) : NumericError(what) {}
};

struct CriticalPoint : NumericError {
    explicit CriticalPoint(const std::string& what) : NumericError(what) {}
};

// Parsing.
struct SyntaxError : std::runtime_error {
    SyntaxError(std::size_t pos, const std::string& what)
        : std::runtime_error("syntax error at position " + std::to_string(pos) + ": " + what),
          position(pos) {}
    std::size_t position;
};

struct UnknownIdentifier : std::runtime_error {
    explicit UnknownIdentifier(const std::string& name)
        : std::runtime_error("unknown identifier: " + name) {}
};

struct ParamIndexOutOfRange : std::runtime_error {
    ParamIndexOutOfRange(int index, int mu)
        : std::runtime_error("parameter index l" + std::to_string(index) +
                             " exceeds mu=" + std::to_string(mu)) {}
};

// System / solver.
struct IndexOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct ClosureDefectExceeded : NumericError {
    explicit ClosureDefectExceeded(const std::string& what) : NumericError(what) {}
};

struct NotAFixedPoint : NumericError {
    explicit NotAFixedPoint(const std::string& what) : NumericError(what) {}
};

struct SingularJacobian : NumericError {
    explicit SingularJacobian(const std::string& what) : NumericError(what) {}
};

struct NoConvergence : NumericError {
    explicit NoConvergence(const std::string& what) : NumericError(what) {}
};

struct Ambiguous : NumericError {
    explicit Ambiguous(const std::string& what) : NumericError(what) {}
};

struct WrongArity : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct WrongClass : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyRegion : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace perbif

#endif
