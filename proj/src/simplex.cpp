#include "nlg/simplex.hpp"

#include "nlg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nlg {

namespace {
constexpr double kRatioSlack = 1e-9;
}  // namespace

DenseSimplex::DenseSimplex(std::vector<double> objective, SimplexTolerances tol)
    : n_(objective.size()), tol_(tol), reduced_(objective.size()) {
    if (n_ == 0) throw ArgumentError("linear program has no variables");
    for (std::size_t j = 0; j < n_; ++j) reduced_[j] = -objective[j];
}

void DenseSimplex::add_column() {
    for (auto& row : tab_) row.push_back(0.0);
    reduced_.push_back(0.0);
}

void DenseSimplex::add_row(const std::vector<double>& a, double b) {
    if (a.size() != n_)
        throw DimensionError("constraint has " + std::to_string(a.size()) + " coefficients, expected " +
                            std::to_string(n_));
    if (!solved_once_ && b < 0.0)
        throw ArgumentError("initial constraints need a non-negative right-hand side");

    add_column();
    const std::size_t slack = reduced_.size() - 1;
    std::vector<double> row(reduced_.size(), 0.0);
    for (std::size_t j = 0; j < n_; ++j) row[j] = a[j];
    row[slack] = 1.0;
    double r = b;
    // express in the current basis
    for (std::size_t i = 0; i < tab_.size(); ++i) {
        const double v = row[basis_[i]];
        if (v == 0.0) continue;
        const auto& src = tab_[i];
        for (std::size_t j = 0; j < row.size(); ++j) row[j] -= v * src[j];
        r -= v * rhs_[i];
    }
    tab_.push_back(std::move(row));
    rhs_.push_back(r);
    basis_.push_back(slack);
}

void DenseSimplex::pivot(std::size_t row, std::size_t col) {
    auto& pr = tab_[row];
    const double inv = 1.0 / pr[col];
    for (double& v : pr) v *= inv;
    rhs_[row] *= inv;
    pr[col] = 1.0;
    const std::size_t width = pr.size();
    for (std::size_t i = 0; i < tab_.size(); ++i) {
        if (i == row) continue;
        auto& r = tab_[i];
        const double f = r[col];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < width; ++j) r[j] -= f * pr[j];
        r[col] = 0.0;
        rhs_[i] -= f * rhs_[row];
    }
    const double f = reduced_[col];
    if (f != 0.0) {
        for (std::size_t j = 0; j < width; ++j) reduced_[j] -= f * pr[j];
        reduced_[col] = 0.0;
        objective_ -= f * rhs_[row];
    }
    basis_[row] = col;
    ++pivots_;

    // fall back to Bland's rule while the objective stalls
    if (std::abs(objective_ - last_objective_) > 1e-9) {
        last_objective_ = objective_;
        stalled_ = 0;
        bland_ = false;
    } else if (++stalled_ >= kStallLimit) {
        bland_ = true;
    }
}

bool DenseSimplex::primal_step() {
    std::size_t enter = reduced_.size();
    double most = -tol_.optimality;
    for (std::size_t j = 0; j < reduced_.size(); ++j) {
        if (reduced_[j] >= -tol_.optimality) continue;
        if (bland_) {
            enter = j;
            break;
        }
        if (reduced_[j] < most) {
            most = reduced_[j];
            enter = j;
        }
    }
    if (enter == reduced_.size()) return false;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tab_.size(); ++i) {
        const double a = tab_[i][enter];
        if (a > tol_.pivot) best = std::min(best, (std::max(rhs_[i], 0.0) + kRatioSlack) / a);
    }
    std::size_t leave = tab_.size();
    double size = 0.0;
    for (std::size_t i = 0; i < tab_.size(); ++i) {
        const double a = tab_[i][enter];
        if (a <= tol_.pivot) continue;
        if (std::max(rhs_[i], 0.0) / a <= best && a > size) {
            size = a;
            leave = i;
        }
    }
    if (leave == tab_.size()) throw SolverError("linear program is unbounded", pivots_, 0.0);
    pivot(leave, enter);
    return true;
}

bool DenseSimplex::dual_step() {
    std::size_t leave = tab_.size();
    double most = -tol_.feasibility;
    for (std::size_t i = 0; i < tab_.size(); ++i) {
        if (rhs_[i] >= -tol_.feasibility) continue;
        if (bland_ ? (leave == tab_.size() || basis_[i] < basis_[leave]) : rhs_[i] < most) {
            most = rhs_[i];
            leave = i;
        }
    }
    if (leave == tab_.size()) return false;

    // two-pass ratio test: smallest ratio up to a tolerance, then the largest
    // pivot magnitude among the near-ties for stability
    const auto& row = tab_[leave];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j] < -tol_.pivot) best = std::min(best, (std::max(reduced_[j], 0.0) + kRatioSlack) / -row[j]);
    std::size_t enter = row.size();
    double size = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] >= -tol_.pivot) continue;
        if (std::max(reduced_[j], 0.0) / -row[j] <= best && -row[j] > size) {
            size = -row[j];
            enter = j;
        }
    }
    if (enter == row.size())
        throw SolverError("linear program is infeasible", pivots_, -rhs_[leave]);
    pivot(leave, enter);
    return true;
}

void DenseSimplex::solve(long max_pivots) {
    const long limit = pivots_ + max_pivots;
    auto guard = [&] {
        if (pivots_ >= limit) {
            double worst = 0.0;
            for (double r : rhs_) worst = std::max(worst, -r);
            throw SolverError("simplex pivot limit reached", pivots_, worst);
        }
    };
    for (;;) {
        while (dual_step()) guard();
        if (!primal_step()) break;
        guard();
        while (primal_step()) guard();
    }
    solved_once_ = true;
}

std::size_t DenseSimplex::drop_inactive(std::size_t first, double min_slack) {
    // slack of constraint k lives in column n_ + k; earlier columns never move
    std::vector<std::size_t> doomed_cols;
    std::vector<bool> drop_row(tab_.size(), false);
    for (std::size_t i = 0; i < tab_.size(); ++i) {
        const std::size_t col = basis_[i];
        if (col >= n_ + first && rhs_[i] > min_slack) {
            drop_row[i] = true;
            doomed_cols.push_back(col);
        }
    }
    if (doomed_cols.empty()) return 0;
    std::sort(doomed_cols.begin(), doomed_cols.end());

    std::vector<std::size_t> remap(reduced_.size());
    std::vector<bool> keep_col(reduced_.size(), true);
    for (std::size_t c : doomed_cols) keep_col[c] = false;
    std::size_t next = 0;
    for (std::size_t j = 0; j < reduced_.size(); ++j)
        if (keep_col[j]) remap[j] = next++;

    auto compact = [&](std::vector<double>& v) {
        std::size_t w = 0;
        for (std::size_t j = 0; j < v.size(); ++j)
            if (keep_col[j]) v[w++] = v[j];
        v.resize(w);
    };
    std::size_t w = 0;
    for (std::size_t i = 0; i < tab_.size(); ++i) {
        if (drop_row[i]) continue;
        compact(tab_[i]);
        if (w != i) {
            tab_[w] = std::move(tab_[i]);
            rhs_[w] = rhs_[i];
        }
        basis_[w] = remap[basis_[i]];
        ++w;
    }
    tab_.resize(w);
    rhs_.resize(w);
    basis_.resize(w);
    compact(reduced_);
    return doomed_cols.size();
}

std::vector<double> DenseSimplex::solution() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i] < n_) x[basis_[i]] = rhs_[i];
    return x;
}

}  // namespace nlg
