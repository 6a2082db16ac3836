#ifndef DFLOW_CLI_HPP
#define DFLOW_CLI_HPP

// Command-line front end.  run() owns the whole program behavior so that
// tests can drive it in-process with captured streams; the installed binary
// is a thin main() around it.
//
// Exit codes: 0 for success and affirmative verdicts, 1 for negative
// verdicts (not feasible, not extremal, not a cactus, no witness, not
// certified, not degenerate), 2 for input errors (malformed documents,
// invalid domain objects, violated preconditions, exhausted budgets).

#include <ostream>
#include <string>
#include <vector>

namespace dflow {

/// Executes one command; `args` excludes the program name.  All regular
/// output goes to `out` as a JSON document, error messages to `err`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace dflow

#endif  // DFLOW_CLI_HPP
