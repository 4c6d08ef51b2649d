#ifndef GRAPHFORMS_ERRORS_HPP
#define GRAPHFORMS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace graphforms {

/// An input document or value could not be parsed.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A caller-supplied value violates an operation's precondition.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// A well-formed problem instance admits no solution.
class SolvabilityError : public std::runtime_error {
public:
    explicit SolvabilityError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace graphforms

#endif
