#include "dflow/fourier_motzkin.hpp"

#include <map>
#include <utility>

#include "dflow/error.hpp"

namespace dflow {

namespace {

/// A constraint over the first `arity` variables, in canonical scale.
using Key = std::vector<Rational>;

/// Canonicalizes in place (first nonzero coefficient scaled to magnitude 1)
/// and merges into `pool`, keeping the tighter right-hand side.  Constraints
/// with all-zero coefficients are decided immediately: returns false when one
/// of them is unsatisfiable, true otherwise.
bool absorb(std::map<Key, std::pair<Rational, bool>>& pool, std::vector<Rational> coef,
            Rational rhs, bool strict) {
    const Rational* lead = nullptr;
    for (const auto& c : coef) {
        if (!c.is_zero()) {
            lead = &c;
            break;
        }
    }
    if (lead == nullptr) {
        // 0 <= rhs (or 0 < rhs).
        const int s = rhs.sign();
        return strict ? s > 0 : s >= 0;
    }
    const Rational scale = lead->abs();
    for (auto& c : coef) c = c / scale;
    rhs = rhs / scale;

    auto it = pool.find(coef);
    if (it == pool.end()) {
        pool.emplace(std::move(coef), std::make_pair(std::move(rhs), strict));
    } else {
        auto& [old_rhs, old_strict] = it->second;
        if (rhs < old_rhs || (rhs == old_rhs && strict && !old_strict)) {
            old_rhs = std::move(rhs);
            old_strict = strict;
        }
    }
    return true;
}

struct Stage {
    // Bounds on variable y_{arity-1} in terms of y_0..y_{arity-2}:
    // for uppers  y <= (rhs - rest . y') / c   with c > 0,
    // for lowers  y >= (rest . y' - rhs) / |c| with c < 0.
    std::vector<LinearConstraint> uppers;
    std::vector<LinearConstraint> lowers;
};

Rational eval_rest(const LinearConstraint& c, const std::vector<Rational>& point,
                   std::size_t arity) {
    Rational acc(0);
    for (std::size_t i = 0; i + 1 < arity; ++i) acc = acc + c.coef[i] * point[i];
    return acc;
}

}  // namespace

std::optional<std::vector<Rational>> find_point(const std::vector<LinearConstraint>& constraints,
                                                std::size_t dim, std::size_t work_cap) {
    for (const auto& c : constraints) {
        if (c.coef.size() != dim) {
            throw ValidationError("constraint arity " + std::to_string(c.coef.size()) +
                                  " does not match dimension " + std::to_string(dim));
        }
    }

    // Canonical pool at the current arity.
    std::map<Key, std::pair<Rational, bool>> pool;
    for (const auto& c : constraints) {
        if (!absorb(pool, c.coef, c.rhs, c.strict)) return std::nullopt;
    }

    std::vector<Stage> stages(dim);
    std::size_t work = constraints.size();

    for (std::size_t arity = dim; arity > 0; --arity) {
        Stage& stage = stages[arity - 1];
        std::map<Key, std::pair<Rational, bool>> next;
        for (auto& [coef, tail] : pool) {
            const Rational& c = coef[arity - 1];
            LinearConstraint full{coef, tail.first, tail.second};
            if (c.sign() > 0) {
                stage.uppers.push_back(std::move(full));
            } else if (c.sign() < 0) {
                stage.lowers.push_back(std::move(full));
            } else {
                std::vector<Rational> shorter(coef.begin(), coef.end() - 1);
                if (!absorb(next, std::move(shorter), tail.first, tail.second)) {
                    return std::nullopt;
                }
            }
        }
        // Combine every lower with every upper; the eliminated coefficient
        // cancels after scaling both sides to unit magnitude.
        for (const auto& lo : stage.lowers) {
            const Rational ls = lo.coef[arity - 1].abs();
            for (const auto& up : stage.uppers) {
                if (++work > work_cap) {
                    throw BudgetError("inequality elimination exceeded its work budget of " +
                                      std::to_string(work_cap) + " constraints");
                }
                const Rational us = up.coef[arity - 1];
                std::vector<Rational> coef(arity - 1);
                for (std::size_t i = 0; i + 1 < arity; ++i) {
                    coef[i] = lo.coef[i] / ls + up.coef[i] / us;
                }
                if (!absorb(next, std::move(coef), lo.rhs / ls + up.rhs / us,
                            lo.strict || up.strict)) {
                    return std::nullopt;
                }
            }
        }
        pool = std::move(next);
    }

    // Feasible; back-substitute a witness.
    std::vector<Rational> point(dim, Rational(0));
    for (std::size_t arity = 1; arity <= dim; ++arity) {
        const Stage& stage = stages[arity - 1];
        std::optional<Rational> lo, hi;
        bool lo_strict = false, hi_strict = false;
        for (const auto& c : stage.lowers) {
            const Rational bound = (eval_rest(c, point, arity) - c.rhs) / c.coef[arity - 1].abs();
            if (!lo || bound > *lo) {
                lo = bound;
                lo_strict = c.strict;
            } else if (bound == *lo) {
                lo_strict = lo_strict || c.strict;
            }
        }
        for (const auto& c : stage.uppers) {
            const Rational bound = (c.rhs - eval_rest(c, point, arity)) / c.coef[arity - 1];
            if (!hi || bound < *hi) {
                hi = bound;
                hi_strict = c.strict;
            } else if (bound == *hi) {
                hi_strict = hi_strict || c.strict;
            }
        }

        Rational value(0);
        if (lo && hi) {
            // Elimination guarantees lo < hi, or lo == hi with both weak.
            value = (*lo + *hi) / Rational(2);
        } else if (lo) {
            value = lo_strict ? *lo + Rational(1) : *lo;
        } else if (hi) {
            value = hi_strict ? *hi - Rational(1) : *hi;
        }
        point[arity - 1] = value;
    }
    return point;
}

}  // namespace dflow
