#ifndef GCHMM_ERROR_HPP
#define GCHMM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gchmm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Departure mass of a transition row exceeds one.
class ProbabilityOverflow : public Error {
public:
    using Error::Error;
};

// A transition was observed whose probability under the current parameters is zero.
class ImpossibleEvent : public Error {
public:
    using Error::Error;
};

// Both unnormalized weights of a full conditional vanished.
class NumericalDegeneracy : public Error {
public:
    using Error::Error;
};

// Exhaustive enumeration requested above the tractability bound.
class Intractable : public Error {
public:
    using Error::Error;
};

// Nonpositive Beta shape parameter produced by inconsistent counts.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

} // namespace gchmm

#endif
