#include "mrtest/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mrtest {

namespace {

// Dense tableau: m constraint rows plus one objective row; columns are n
// structural variables, m artificials and the right-hand side.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& a, const std::vector<double>& b, double pivot_tol)
      : m_(b.size()), pivot_tol_(pivot_tol) {
    if (a.size() != m_) throw std::invalid_argument("simplex: row count mismatch");
    n_ = m_ == 0 ? 0 : a.front().size();
    for (const auto& row : a)
      if (row.size() != n_) throw std::invalid_argument("simplex: ragged constraint matrix");
    width_ = n_ + m_ + 1;
    rhs_ = n_ + m_;
    t_.assign(m_ + 1, std::vector<double>(width_, 0.0));
    basis_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      const double flip = b[r] < 0.0 ? -1.0 : 1.0;
      for (std::size_t c = 0; c < n_; ++c) t_[r][c] = flip * a[r][c];
      t_[r][n_ + r] = 1.0;
      t_[r][rhs_] = flip * b[r];
      basis_[r] = n_ + r;
    }
    // Reduced costs for min sum(artificials): subtract every row.
    auto& z = t_[m_];
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t c = 0; c < n_; ++c) z[c] -= t_[r][c];
    for (std::size_t r = 0; r < m_; ++r) z[rhs_] -= t_[r][rhs_];
  }

  // Iterates until optimal over the first `columns` columns. Returns false
  // when the objective is unbounded below.
  bool optimize(std::size_t columns) {
    const int max_iterations = 50 * static_cast<int>(width_ + 1);
    auto& z = t_[m_];
    for (;;) {
      std::size_t enter = width_;
      for (std::size_t c = 0; c < columns; ++c) {
        if (z[c] < -pivot_tol_) {
          enter = c;
          break;
        }
      }
      if (enter == width_) return true;

      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        if (t_[r][enter] <= pivot_tol_) continue;
        const double ratio = t_[r][rhs_] / t_[r][enter];
        if (ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
      if (++iterations_ > max_iterations) throw std::runtime_error("simplex: iteration limit exceeded");
    }
  }

  void pivot(std::size_t leave, std::size_t enter) {
    const double piv = t_[leave][enter];
    for (auto& v : t_[leave]) v /= piv;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == leave) continue;
      const double f = t_[r][enter];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width_; ++c) t_[r][c] -= f * t_[leave][c];
    }
    basis_[leave] = enter;
  }

  // Pivots basic artificials (at zero level) out on any usable structural
  // column; rows with no such column are redundant and left alone.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      for (std::size_t c = 0; c < n_; ++c) {
        if (std::abs(t_[r][c]) > pivot_tol_) {
          pivot(r, c);
          break;
        }
      }
    }
  }

  void set_objective(const std::vector<double>& cost) {
    auto& z = t_[m_];
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t c = 0; c < n_; ++c) z[c] = cost[c];
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = basis_[r] < n_ ? cost[basis_[r]] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t c = 0; c < width_; ++c) z[c] -= cb * t_[r][c];
    }
  }

  double objective() const { return -t_[m_][rhs_]; }
  std::size_t structural() const { return n_; }
  int iterations() const { return iterations_; }

  std::vector<double> solution() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = t_[r][rhs_];
    return x;
  }

 private:
  std::size_t m_;
  std::size_t n_ = 0;
  std::size_t width_ = 0;
  std::size_t rhs_ = 0;
  double pivot_tol_;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
  int iterations_ = 0;
};

}  // namespace

PhaseOneResult simplex_phase_one(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                                 double pivot_tolerance) {
  Tableau t(a, b, pivot_tolerance);
  t.optimize(t.structural() + b.size());
  return {t.objective(), t.solution(), t.iterations()};
}

LinearProgramResult simplex_minimize(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                                     const std::vector<double>& c, double feasibility_tolerance,
                                     double pivot_tolerance) {
  Tableau t(a, b, pivot_tolerance);
  if (c.size() != t.structural()) throw std::invalid_argument("simplex: cost vector has the wrong length");
  t.optimize(t.structural() + b.size());
  LinearProgramResult out;
  out.phase_one = {t.objective(), t.solution(), t.iterations()};
  if (out.phase_one.objective > feasibility_tolerance) return out;

  t.drive_out_artificials();
  t.set_objective(c);
  out.unbounded = !t.optimize(t.structural());
  out.x = t.solution();
  out.objective = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) out.objective += c[k] * (*out.x)[k];
  return out;
}

}  // namespace mrtest
