#include "moat/lp.hpp"

#include "moat/instance.hpp"

namespace moat {

namespace {

struct Tableau {
  // rows_ x (cols_ + 1); last column is the right-hand side.
  std::vector<std::vector<Rational>> a;
  std::vector<int> basis;
  int cols = 0;
  int pivots = 0;

  // Reduced costs of the objective being optimized, updated by pivot().
  std::vector<Rational> d;

  void eliminate(std::vector<Rational>& row, int r, int c) {
    if (row[c].is_zero()) return;
    Rational f = row[c];
    for (int j = 0; j <= cols; ++j)
      if (!a[r][j].is_zero()) row[j] -= f * a[r][j];
  }

  void pivot(int r, int c) {
    ++pivots;
    Rational p = a[r][c];
    for (auto& v : a[r])
      if (!v.is_zero()) v /= p;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (int(i) != r) eliminate(a[i], r, c);
    if (!d.empty()) eliminate(d, r, c);
    basis[r] = c;
  }

  // Maximizes obj . x over the current basis; columns with allowed[j] == 0
  // never enter. Returns false if unbounded.
  bool optimize(const std::vector<Rational>& obj, const std::vector<char>& allowed) {
    d.assign(cols + 1, Rational(0));
    for (int j = 0; j < cols; ++j) d[j] = obj[j];
    for (std::size_t i = 0; i < a.size(); ++i) {
      Rational f = obj[basis[i]];
      if (f.is_zero()) continue;
      for (int j = 0; j <= cols; ++j)
        if (!a[i][j].is_zero()) d[j] -= f * a[i][j];
    }
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols && enter < 0; ++j)
        if (allowed[j] && d[j].sign() > 0) enter = j;
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i][enter].sign() <= 0) continue;
        Rational ratio = a[i][cols] / a[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = int(i);
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void drop_objective() { d.clear(); }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  if (!lp.upper.empty() && lp.upper.size() != n) throw InvalidInput("upper bounds do not match the variable count");
  std::vector<LpRow> rows;
  for (const auto& r : lp.rows) {
    if (r.coeffs.size() != n) throw InvalidInput("constraint row does not match the variable count");
    rows.push_back(r);
  }
  for (std::size_t j = 0; j < lp.upper.size(); ++j)
    if (lp.upper[j]) {
      LpRow r;
      r.coeffs.assign(n, Rational(0));
      r.coeffs[j] = Rational(1);
      r.rhs = *lp.upper[j];
      rows.push_back(std::move(r));
    }
  for (auto& r : rows)
    if (r.rhs.sign() < 0) {
      for (auto& v : r.coeffs) v = -v;
      r.rhs = -r.rhs;
      if (r.sense == Sense::kLe)
        r.sense = Sense::kGe;
      else if (r.sense == Sense::kGe)
        r.sense = Sense::kLe;
    }

  // Columns: structural, then one slack or surplus per inequality, then artificials.
  int m = int(rows.size());
  int slack = 0, art = 0;
  for (const auto& r : rows) {
    if (r.sense != Sense::kEq) ++slack;
    if (r.sense != Sense::kLe) ++art;
  }
  Tableau t;
  t.cols = int(n) + slack + art;
  t.a.assign(m, std::vector<Rational>(t.cols + 1));
  t.basis.assign(m, -1);
  int next_slack = int(n), next_art = int(n) + slack;
  for (int i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.a[i][j] = rows[i].coeffs[j];
    t.a[i][t.cols] = rows[i].rhs;
    if (rows[i].sense == Sense::kLe) {
      t.a[i][next_slack] = Rational(1);
      t.basis[i] = next_slack++;
    } else {
      if (rows[i].sense == Sense::kGe) t.a[i][next_slack++] = Rational(-1);
      t.a[i][next_art] = Rational(1);
      t.basis[i] = next_art++;
    }
  }
  const int first_art = int(n) + slack;

  LpResult out;
  if (art > 0) {
    std::vector<Rational> phase1(t.cols);
    for (int j = first_art; j < t.cols; ++j) phase1[j] = Rational(-1);
    std::vector<char> all(t.cols, 1);
    t.optimize(phase1, all);
    t.drop_objective();
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= first_art && t.a[i][t.cols].sign() != 0) {
        out.status = LpStatus::kInfeasible;
        out.pivots = t.pivots;
        return out;
      }
    // Drive zero-level artificials out; rows that cannot be cleared are redundant.
    for (int i = 0; i < int(t.a.size());) {
      if (t.basis[i] < first_art) {
        ++i;
        continue;
      }
      int c = -1;
      for (int j = 0; j < first_art && c < 0; ++j)
        if (!t.a[i][j].is_zero()) c = j;
      if (c >= 0) {
        t.pivot(i, c);
        ++i;
      } else {
        t.a.erase(t.a.begin() + i);
        t.basis.erase(t.basis.begin() + i);
      }
    }
  }
  std::vector<Rational> obj(t.cols);
  for (std::size_t j = 0; j < n; ++j) obj[j] = lp.maximize ? lp.objective[j] : -lp.objective[j];
  std::vector<char> allowed(t.cols, 1);
  for (int j = first_art; j < t.cols; ++j) allowed[j] = 0;
  bool bounded = t.optimize(obj, allowed);
  out.pivots = t.pivots;
  if (!bounded) {
    out.status = LpStatus::kUnbounded;
    return out;
  }
  out.status = LpStatus::kOptimal;
  out.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < t.a.size(); ++i)
    if (t.basis[i] < int(n)) out.x[t.basis[i]] = t.a[i][t.cols];
  for (std::size_t j = 0; j < n; ++j) out.value += lp.objective[j] * out.x[j];
  return out;
}

}  // namespace moat
