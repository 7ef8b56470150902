#ifndef COLLMEM_ERROR_HPP
#define COLLMEM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collmem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A coupling profile (or density grid) with zero rms.
class DegenerateProfileError : public Error {
public:
    using Error::Error;
};

/// Two modes too close to parallel for Gram-Schmidt.
class DegeneracyError : public Error {
public:
    DegeneracyError(const std::string& what, double overlap)
        : Error(what), overlap_(overlap) {}
    double overlap() const noexcept { return overlap_; }

private:
    double overlap_;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class BasisMismatch : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

/// Herald probability too small to condition on.
class DegenerateConditioning : public Error {
public:
    using Error::Error;
};

/// No cycle count up to the search limit reached the target fidelity.
class NotFound : public Error {
public:
    NotFound(const std::string& what, int best_cycles, double best_fidelity)
        : Error(what), best_cycles_(best_cycles), best_fidelity_(best_fidelity) {}
    int best_cycles() const noexcept { return best_cycles_; }
    double best_fidelity() const noexcept { return best_fidelity_; }

private:
    int best_cycles_;
    double best_fidelity_;
};

/// Malformed input file. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(format(what, line, column)), line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        if (line == 0) return what;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
    }
    std::size_t line_;
    std::size_t column_;
};

}  // namespace collmem

#endif  // COLLMEM_ERROR_HPP
