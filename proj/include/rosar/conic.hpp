// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rosar::conic {

/// Sparse row: list of (variable index, coefficient).
using SparseRow = std::vector<std::pair<int, double>>;

enum class ConeKind { NonNeg, Soc };

struct ConeBlock {
    ConeKind kind;
    int offset; ///< first row of the block in G/h
    int dim;    ///< number of rows (1 per NonNeg row, >= 2 per SOC)
};

/// A cone program  min c'x  s.t.  G x + s = h,  s in K,
/// assembled from linear inequalities, second-order cone memberships and convex
/// quadratic inequalities. Quadratics are rewritten as second-order cones at insertion
/// so the solver handles a single cone family.
class ConicProblem {
public:
    explicit ConicProblem(int nvar);

    int num_vars() const { return nvar_; }
    int num_rows() const { return static_cast<int>(h_.size()); }
    const std::vector<ConeBlock>& blocks() const { return blocks_; }
    const std::vector<SparseRow>& rows() const { return g_rows_; }
    const std::vector<double>& rhs() const { return h_; }
    const std::vector<double>& cost() const { return cost_; }

    void set_cost(int var, double coeff);

    /// a'x <= b
    void add_linear(SparseRow a, double b);

    /// ||F x + g|| <= f'x + h  (F given row-wise; may have zero rows)
    void add_soc(std::vector<SparseRow> f_rows, std::vector<double> g, SparseRow f, double h);

    /// ||F x + g||^2 <= f'x + h  (convex quadratic in factored standard form);
    /// emitted as the rotated-cone equivalent ||(Fx+g, (y-1)/2)|| <= (y+1)/2 with y = f'x+h.
    void add_quadratic(std::vector<SparseRow> f_rows, std::vector<double> g, SparseRow f, double h);

    /// Variable bookkeeping: named, disjoint index ranges covering the decision vector.
    void name_range(const std::string& name, int offset, int length);
    const std::map<std::string, std::pair<int, int>>& names() const { return names_; }

    /// Self-describing text dump, one constraint per line, for external cross-checks.
    void dump(std::ostream& os) const;

private:
    int nvar_;
    std::vector<double> cost_;
    std::vector<SparseRow> g_rows_;
    std::vector<double> h_;
    std::vector<ConeBlock> blocks_;
    std::map<std::string, std::pair<int, int>> names_;
};

enum class SolveStatus { Optimal, MaxIter, NumericalFailure };

struct SolverOptions {
    double gap_tol = 1e-8;
    double feas_tol = 1e-8;
    int max_iter = 100;
};

struct ConicSolution {
    std::vector<double> x; ///< primal variables
    std::vector<double> s; ///< cone slacks
    std::vector<double> z; ///< dual variables, one per row
    double objective = 0.0;
    SolveStatus status = SolveStatus::NumericalFailure;
    double duality_gap = 0.0;   ///< s'z at exit
    double max_violation = 0.0; ///< worst constraint violation of x
    int iterations = 0;
    std::vector<double> residual_history; ///< max(pres, dres, relgap) per iteration
};

/// Primal-dual interior-point solve with Nesterov-Todd scaling and Mehrotra
/// predictor-corrector steps. Deterministic for fixed inputs.
ConicSolution solve(const ConicProblem& problem, const SolverOptions& opts = {});

struct KktResiduals {
    double stationarity = 0.0;
    double primal_feasibility = 0.0;
    double dual_feasibility = 0.0;
    double complementarity = 0.0;
};

/// Residual norms of the KKT system at (x, z): ||c + G'z|| / (1 + ||c||),
/// worst cone violation of h - Gx, worst cone violation of z, and |s'z| / (1 + |c'x|).
KktResiduals kkt_residuals(const ConicProblem& problem, const ConicSolution& solution);

} // namespace rosar::conic
