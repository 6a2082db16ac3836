#ifndef DFLOW_ERROR_HPP
#define DFLOW_ERROR_HPP

// Exception hierarchy shared by all dflow components.
//
// Every error thrown by the library derives from dflow::Error, so callers can
// catch one type at the boundary. The subclasses distinguish the only cases
// the command-line front end treats differently: malformed input documents
// (ParseError), invalid domain objects (ValidationError), violated operation
// preconditions (PreconditionError) and exhausted search budgets or caps
// (BudgetError).

#include <stdexcept>
#include <string>

namespace dflow {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

/// Malformed textual input (documents, rationals, command arguments).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what_arg) : Error(what_arg) {}
};

/// A domain object violates its construction invariants.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what_arg) : Error(what_arg) {}
};

/// An operation was called on inputs outside its stated precondition.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what_arg) : Error(what_arg) {}
};

/// A configurable cap or search budget was exceeded.
class BudgetError : public Error {
public:
    explicit BudgetError(const std::string& what_arg) : Error(what_arg) {}
};

}  // namespace dflow

#endif  // DFLOW_ERROR_HPP
