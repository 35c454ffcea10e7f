#pragma once

#include <optional>
#include <vector>

#include "moat/rational.hpp"

namespace moat {

enum class Sense { kLe, kGe, kEq };

struct LpRow {
  std::vector<Rational> coeffs;
  Sense sense = Sense::kLe;
  Rational rhs;
};

// Variables are nonnegative, with optional upper bounds.
struct LinearProgram {
  bool maximize = true;
  std::vector<Rational> objective;
  std::vector<LpRow> rows;
  std::vector<std::optional<Rational>> upper;  // empty or one entry per variable
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Rational value;
  std::vector<Rational> x;
  int pivots = 0;
};

// Two-phase dense simplex in exact arithmetic, Bland's rule.
// Throws InvalidInput on dimension mismatch.
LpResult solve_lp(const LinearProgram& lp);

}  // namespace moat
