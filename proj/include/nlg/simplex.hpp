#pragma once

#include <cstddef>
#include <vector>

namespace nlg {

struct SimplexTolerances {
    double pivot = 1e-10;
    double feasibility = 1e-7;
    double optimality = 1e-9;
};

// Dense tableau simplex for
//     maximize c.x  subject to  A x <= b,  x >= 0.
// Pivots pick the most negative reduced cost (primal) or right-hand side
// (dual); after kStallLimit degenerate pivots in a row both phases switch to
// Bland's smallest-index rule until the objective moves again.
// Rows may be appended after a solve; the next solve() restores primal
// feasibility with dual simplex pivots from the current basis.
class DenseSimplex {
public:
    explicit DenseSimplex(std::vector<double> objective, SimplexTolerances tol = {});

    // Initial rows must have b >= 0 so the slack basis is feasible; rows added
    // after a solve may have any sign.
    void add_row(const std::vector<double>& a, double b);

    // Removes constraints with index >= first whose slack is basic and larger
    // than min_slack; returns how many were dropped.
    std::size_t drop_inactive(std::size_t first, double min_slack);

    // Throws SolverError when infeasible, unbounded or out of iterations.
    void solve(long max_pivots = 1'000'000);

    std::vector<double> solution() const;
    double objective_value() const noexcept { return objective_; }
    std::size_t rows() const noexcept { return rhs_.size(); }
    std::size_t variables() const noexcept { return n_; }
    long pivots() const noexcept { return pivots_; }

    static constexpr int kStallLimit = 50;

private:
    void pivot(std::size_t row, std::size_t col);
    bool primal_step();
    bool dual_step();
    void add_column();

    std::size_t n_;
    SimplexTolerances tol_;
    std::vector<std::vector<double>> tab_;  // rows x columns
    std::vector<double> rhs_;
    std::vector<double> reduced_;  // z_j - c_j
    std::vector<std::size_t> basis_;
    double objective_ = 0.0;
    long pivots_ = 0;
    bool solved_once_ = false;
    double last_objective_ = 0.0;
    int stalled_ = 0;
    bool bland_ = false;
};

}  // namespace nlg
