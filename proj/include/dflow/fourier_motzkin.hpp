#ifndef DFLOW_FOURIER_MOTZKIN_HPP
#define DFLOW_FOURIER_MOTZKIN_HPP

// Exact feasibility of small systems of linear inequalities over rationals,
// by Fourier-Motzkin elimination.  Supports mixed strict and non-strict
// inequalities, which makes it usable both for plain membership and for
// relative-interior probing (is some inequality satisfiable strictly?).

#include <optional>
#include <vector>

#include "dflow/rational.hpp"

namespace dflow {

/// coef . y <= rhs, or coef . y < rhs when strict.
struct LinearConstraint {
    std::vector<Rational> coef;
    Rational rhs;
    bool strict = false;
};

/// Returns a rational point satisfying every constraint, or nullopt when the
/// system is infeasible.  All coefficient vectors must have length dim.
/// Throws BudgetError when elimination materializes more than work_cap
/// constraints (Fourier-Motzkin can blow up quadratically per stage).
std::optional<std::vector<Rational>> find_point(const std::vector<LinearConstraint>& constraints,
                                                std::size_t dim, std::size_t work_cap = 200000);

}  // namespace dflow

#endif  // DFLOW_FOURIER_MOTZKIN_HPP
