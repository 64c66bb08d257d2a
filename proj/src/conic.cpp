// SPDX-License-Identifier: Apache-2.0
#include "rosar/conic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rosar::conic {

using Eigen::MatrixXd;
using Eigen::VectorXd;

ConicProblem::ConicProblem(int nvar) : nvar_(nvar), cost_(static_cast<std::size_t>(nvar), 0.0) {
    if (nvar < 1) throw std::invalid_argument("ConicProblem: need at least one variable");
}

void ConicProblem::set_cost(int var, double coeff) {
    cost_.at(static_cast<std::size_t>(var)) = coeff;
}

void ConicProblem::add_linear(SparseRow a, double b) {
    blocks_.push_back({ConeKind::NonNeg, num_rows(), 1});
    g_rows_.push_back(std::move(a));
    h_.push_back(b);
}

void ConicProblem::add_soc(std::vector<SparseRow> f_rows, std::vector<double> g, SparseRow f,
                           double h) {
    if (f_rows.size() != g.size()) throw std::invalid_argument("add_soc: F/g size mismatch");
    const int dim = static_cast<int>(f_rows.size()) + 1;
    if (dim < 1) throw std::invalid_argument("add_soc: empty cone");
    blocks_.push_back({ConeKind::Soc, num_rows(), dim});
    // slack layout: s0 = f'x + h, s_i = F_i x + g_i; stored as s = h_blk - G_blk x.
    SparseRow head = std::move(f);
    for (auto& [idx, val] : head) val = -val;
    g_rows_.push_back(std::move(head));
    h_.push_back(h);
    for (std::size_t i = 0; i < f_rows.size(); ++i) {
        SparseRow row = std::move(f_rows[i]);
        for (auto& [idx, val] : row) val = -val;
        g_rows_.push_back(std::move(row));
        h_.push_back(g[i]);
    }
}

void ConicProblem::add_quadratic(std::vector<SparseRow> f_rows, std::vector<double> g, SparseRow f,
                                 double h) {
    // ||Fx+g||^2 <= y  <=>  ||(Fx+g, (y-1)/2)|| <= (y+1)/2
    SparseRow half_f;
    half_f.reserve(f.size());
    for (const auto& [idx, val] : f) half_f.emplace_back(idx, 0.5 * val);
    f_rows.push_back(half_f);
    g.push_back(0.5 * (h - 1.0));
    add_soc(std::move(f_rows), std::move(g), std::move(half_f), 0.5 * (h + 1.0));
}

void ConicProblem::name_range(const std::string& name, int offset, int length) {
    if (offset < 0 || length < 0 || offset + length > nvar_)
        throw std::invalid_argument("name_range: range outside variable vector");
    for (const auto& [other, span] : names_) {
        const bool disjoint = offset + length <= span.first || span.first + span.second <= offset;
        if (!disjoint)
            throw std::invalid_argument("name_range: '" + name + "' overlaps '" + other + "'");
    }
    names_[name] = {offset, length};
}

void ConicProblem::dump(std::ostream& os) const {
    os << "conic nvar=" << nvar_ << " rows=" << num_rows() << " blocks=" << blocks_.size() << "\n";
    os << "min";
    for (int j = 0; j < nvar_; ++j)
        if (cost_[static_cast<std::size_t>(j)] != 0.0)
            os << " " << cost_[static_cast<std::size_t>(j)] << "*x" << j;
    os << "\n";
    for (const auto& [name, span] : names_)
        os << "vars " << name << " = x" << span.first << "..x" << span.first + span.second - 1
           << "\n";
    auto print_row = [&](int r) {
        for (const auto& [idx, val] : g_rows_[static_cast<std::size_t>(r)])
            os << " " << -val << "*x" << idx;
        os << " + " << h_[static_cast<std::size_t>(r)];
    };
    for (const auto& blk : blocks_) {
        if (blk.kind == ConeKind::NonNeg) {
            os << "lin:";
            print_row(blk.offset);
            os << " >= 0\n";
        } else {
            os << "soc dim=" << blk.dim << ": head";
            print_row(blk.offset);
            for (int i = 1; i < blk.dim; ++i) {
                os << " ; row";
                print_row(blk.offset + i);
            }
            os << "\n";
        }
    }
}

namespace {

// ---- cone helpers over contiguous segments ---------------------------------

double soc_residual(const double* u, int dim) {
    double nrm = 0.0;
    for (int i = 1; i < dim; ++i) nrm += u[i] * u[i];
    return u[0] - std::sqrt(nrm);
}

// Largest step t >= 0 with u + t*du staying in the cone; infinity when unbounded.
double soc_max_step(const double* u, const double* du, int dim) {
    double a = du[0] * du[0], b = u[0] * du[0], c = u[0] * u[0];
    for (int i = 1; i < dim; ++i) {
        a -= du[i] * du[i];
        b -= u[i] * du[i];
        c -= u[i] * u[i];
    }
    const double inf = std::numeric_limits<double>::infinity();
    // f(t) = a t^2 + 2 b t + c, f(0) = c > 0 for interior u; first positive root.
    if (std::abs(a) < 1e-300) return b < 0.0 ? -c / (2.0 * b) : inf;
    const double disc = b * b - a * c;
    if (a > 0.0) {
        if (disc <= 0.0) return inf;
        const double sq = std::sqrt(disc);
        const double root = (-b - sq) / a; // smaller root
        return root > 0.0 ? root : inf;    // both roots <= 0 -> f stays positive
    }
    const double sq = std::sqrt(std::max(disc, 0.0));
    return (b + sq) / (-a); // a < 0: unique positive root
}

struct BlockLayout {
    std::vector<ConeBlock> blocks;
    int rows = 0;
    int degree = 0; // barrier degree: #lin rows + #soc blocks
};

class Cone {
public:
    explicit Cone(const BlockLayout& layout) : layout_(layout) {}

    double min_margin(const VectorXd& u) const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& blk : layout_.blocks) {
            const double v = blk.kind == ConeKind::NonNeg ? u[blk.offset]
                                                          : soc_residual(u.data() + blk.offset, blk.dim);
            m = std::min(m, v);
        }
        return m;
    }

    double max_step(const VectorXd& u, const VectorXd& du) const {
        double t = std::numeric_limits<double>::infinity();
        for (const auto& blk : layout_.blocks) {
            if (blk.kind == ConeKind::NonNeg) {
                if (du[blk.offset] < 0.0) t = std::min(t, -u[blk.offset] / du[blk.offset]);
            } else {
                t = std::min(t, soc_max_step(u.data() + blk.offset, du.data() + blk.offset, blk.dim));
            }
        }
        return t;
    }

    VectorXd identity() const {
        VectorXd e = VectorXd::Zero(layout_.rows);
        for (const auto& blk : layout_.blocks) e[blk.offset] = 1.0;
        return e;
    }

    // Jordan product u o v.
    void product(const VectorXd& u, const VectorXd& v, VectorXd& out) const {
        for (const auto& blk : layout_.blocks) {
            if (blk.kind == ConeKind::NonNeg) {
                out[blk.offset] = u[blk.offset] * v[blk.offset];
            } else {
                double dot = 0.0;
                for (int i = 0; i < blk.dim; ++i) dot += u[blk.offset + i] * v[blk.offset + i];
                const double u0 = u[blk.offset], v0 = v[blk.offset];
                for (int i = 1; i < blk.dim; ++i)
                    out[blk.offset + i] = u0 * v[blk.offset + i] + v0 * u[blk.offset + i];
                out[blk.offset] = dot;
            }
        }
    }

    // Solve arrow(lam) d = v.
    void arrow_solve(const VectorXd& lam, const VectorXd& v, VectorXd& out) const {
        for (const auto& blk : layout_.blocks) {
            if (blk.kind == ConeKind::NonNeg) {
                out[blk.offset] = v[blk.offset] / lam[blk.offset];
            } else {
                const double l0 = lam[blk.offset];
                double l1v1 = 0.0, l1l1 = 0.0;
                for (int i = 1; i < blk.dim; ++i) {
                    l1v1 += lam[blk.offset + i] * v[blk.offset + i];
                    l1l1 += lam[blk.offset + i] * lam[blk.offset + i];
                }
                const double d0 = (l0 * v[blk.offset] - l1v1) / (l0 * l0 - l1l1);
                out[blk.offset] = d0;
                for (int i = 1; i < blk.dim; ++i)
                    out[blk.offset + i] = (v[blk.offset + i] - d0 * lam[blk.offset + i]) / l0;
            }
        }
    }

private:
    const BlockLayout& layout_;
};

// Nesterov-Todd scaling state. For linear rows W = diag(w); for each SOC block
// W = eta * H(wbar) with H(wbar) = [[w0, w1'], [w1, I + w1 w1'/(1+w0)]] and
// H^{-1} = H with w1 negated.
class Scaling {
public:
    Scaling(const BlockLayout& layout) : layout_(layout), lin_w_(layout.rows) {}

    bool compute(const VectorXd& s, const VectorXd& z) {
        soc_.clear();
        for (const auto& blk : layout_.blocks) {
            if (blk.kind == ConeKind::NonNeg) {
                const double si = s[blk.offset], zi = z[blk.offset];
                if (!(si > 0.0) || !(zi > 0.0)) return false;
                lin_w_[blk.offset] = std::sqrt(si / zi);
            } else {
                const double sres = soc_jnorm(s, blk), zres = soc_jnorm(z, blk);
                if (!(sres > 0.0) || !(zres > 0.0)) return false;
                SocScale sc;
                sc.offset = blk.offset;
                sc.dim = blk.dim;
                sc.eta = std::sqrt(sres / zres);
                sc.wbar.resize(blk.dim);
                double dot = 0.0;
                for (int i = 0; i < blk.dim; ++i)
                    dot += (s[blk.offset + i] / sres) * (z[blk.offset + i] / zres);
                const double gamma = std::sqrt((1.0 + dot) / 2.0);
                if (!(gamma > 0.0)) return false;
                sc.wbar[0] = (s[blk.offset] / sres + z[blk.offset] / zres) / (2.0 * gamma);
                for (int i = 1; i < blk.dim; ++i)
                    sc.wbar[i] =
                        (s[blk.offset + i] / sres - z[blk.offset + i] / zres) / (2.0 * gamma);
                soc_.push_back(std::move(sc));
            }
        }
        return true;
    }

    // out = W^{-1} u  (in place allowed when &u == &out)
    void apply_winv(const VectorXd& u, VectorXd& out) const {
        apply_vec(u, out, true);
    }
    void apply_w(const VectorXd& u, VectorXd& out) const {
        apply_vec(u, out, false);
    }

    // Gt = W^{-1} G applied blockwise to a dense matrix.
    void scale_matrix(const MatrixXd& g, MatrixXd& gt) const {
        gt = g;
        for (const auto& blk : layout_.blocks)
            if (blk.kind == ConeKind::NonNeg) gt.row(blk.offset) /= lin_w_[blk.offset];
        for (const auto& sc : soc_) {
            const auto a0 = gt.row(sc.offset);
            auto a1 = gt.middleRows(sc.offset + 1, sc.dim - 1);
            Eigen::RowVectorXd t = sc.wbar.tail(sc.dim - 1).transpose() * a1;
            Eigen::RowVectorXd head = sc.wbar[0] * a0 - t;
            a1.noalias() += sc.wbar.tail(sc.dim - 1) * (t / (1.0 + sc.wbar[0]) - a0);
            gt.row(sc.offset) = head;
            gt.middleRows(sc.offset, sc.dim) /= sc.eta;
        }
    }

private:
    struct SocScale {
        int offset = 0, dim = 0;
        double eta = 1.0;
        VectorXd wbar;
    };

    static double soc_jnorm(const VectorXd& u, const ConeBlock& blk) {
        double q = u[blk.offset] * u[blk.offset];
        for (int i = 1; i < blk.dim; ++i) q -= u[blk.offset + i] * u[blk.offset + i];
        return q > 0.0 ? std::sqrt(q) : -1.0;
    }

    void apply_vec(const VectorXd& u, VectorXd& out, bool inverse) const {
        if (&out != &u) out = u;
        for (const auto& blk : layout_.blocks)
            if (blk.kind == ConeKind::NonNeg) {
                if (inverse)
                    out[blk.offset] /= lin_w_[blk.offset];
                else
                    out[blk.offset] *= lin_w_[blk.offset];
            }
        for (const auto& sc : soc_) {
            const double sign = inverse ? -1.0 : 1.0;
            double t = 0.0;
            for (int i = 1; i < sc.dim; ++i) t += sign * sc.wbar[i] * out[sc.offset + i];
            const double u0 = out[sc.offset];
            const double head = sc.wbar[0] * u0 + t;
            const double coef = t / (1.0 + sc.wbar[0]) + u0;
            for (int i = 1; i < sc.dim; ++i) out[sc.offset + i] += sign * coef * sc.wbar[i];
            out[sc.offset] = head;
            const double fac = inverse ? 1.0 / sc.eta : sc.eta;
            for (int i = 0; i < sc.dim; ++i) out[sc.offset + i] *= fac;
        }
    }

    const BlockLayout& layout_;
    std::vector<double> lin_w_;
    std::vector<SocScale> soc_;
};

double cone_violation(const ConicProblem& problem, const std::vector<double>& x) {
    const auto& rows = problem.rows();
    const auto& rhs = problem.rhs();
    auto row_dot = [&](int r) {
        double v = 0.0;
        for (const auto& [idx, val] : rows[static_cast<std::size_t>(r)])
            v += val * x[static_cast<std::size_t>(idx)];
        return v;
    };
    double worst = 0.0;
    for (const auto& blk : problem.blocks()) {
        if (blk.kind == ConeKind::NonNeg) {
            worst = std::max(worst, row_dot(blk.offset) - rhs[static_cast<std::size_t>(blk.offset)]);
        } else {
            const double head = rhs[static_cast<std::size_t>(blk.offset)] - row_dot(blk.offset);
            double nrm = 0.0;
            for (int i = 1; i < blk.dim; ++i) {
                const double v = rhs[static_cast<std::size_t>(blk.offset + i)] - row_dot(blk.offset + i);
                nrm += v * v;
            }
            worst = std::max(worst, std::sqrt(nrm) - head);
        }
    }
    return worst;
}

} // namespace

ConicSolution solve(const ConicProblem& problem, const SolverOptions& opts) {
    const int nvar = problem.num_vars();
    const int nrows = problem.num_rows();
    ConicSolution sol;
    if (nrows == 0) throw std::invalid_argument("solve: problem has no constraints");

    BlockLayout layout;
    layout.blocks = problem.blocks();
    layout.rows = nrows;
    for (const auto& blk : layout.blocks)
        layout.degree += blk.kind == ConeKind::NonNeg ? blk.dim : 1;

    // Dense assembly.
    MatrixXd G = MatrixXd::Zero(nrows, nvar);
    VectorXd h(nrows), c(nvar);
    for (int r = 0; r < nrows; ++r) {
        for (const auto& [idx, val] : problem.rows()[static_cast<std::size_t>(r)]) G(r, idx) += val;
        h[r] = problem.rhs()[static_cast<std::size_t>(r)];
    }
    for (int j = 0; j < nvar; ++j) c[j] = problem.cost()[static_cast<std::size_t>(j)];

    const Cone cone(layout);
    Scaling scaling(layout);
    const VectorXd e = cone.identity();

    MatrixXd Gt(nrows, nvar);
    MatrixXd Hbase(nvar, nvar);
    MatrixXd Hfac(nvar, nvar);
    Eigen::LLT<MatrixXd> llt;

    // LLT reads the lower triangle only, so Hbase holds just the rankUpdate result.
    auto factor = [&]() -> bool {
        double reg = 1e-13 * std::max(1.0, Hbase.diagonal().maxCoeff());
        for (int attempt = 0; attempt < 4; ++attempt) {
            Hfac = Hbase;
            Hfac.diagonal().array() += reg;
            llt.compute(Hfac);
            if (llt.info() == Eigen::Success) return true;
            reg *= 1e3;
        }
        return false;
    };
    // One refinement pass against the unregularized normal matrix Gt'Gt.
    auto solve_normal = [&](const VectorXd& rhs) -> VectorXd {
        VectorXd x = llt.solve(rhs);
        VectorXd resid = rhs - Gt.transpose() * (Gt * x);
        x += llt.solve(resid);
        return x;
    };

    // --- initialization: least-squares primal/dual shifted into the cone interior ---
    Gt = G;
    Hbase.setZero();
    Hbase.selfadjointView<Eigen::Lower>().rankUpdate(G.transpose());
    if (!factor()) {
        sol.status = SolveStatus::NumericalFailure;
        return sol;
    }
    VectorXd x = solve_normal(G.transpose() * h);
    VectorXd s = h - G * x;
    {
        const double margin = cone.min_margin(s);
        const double bump = 1e-8 * (1.0 + s.norm());
        if (margin <= bump) s += (1.0 + bump - margin) * e;
    }
    VectorXd z = G * solve_normal(-c); // G'z + c = 0 exactly since G has full column rank
    {
        const double margin = cone.min_margin(z);
        const double bump = 1e-8 * (1.0 + z.norm());
        if (margin <= bump) z += (1.0 + bump - margin) * e;
    }

    VectorXd res_x(nvar), res_z(nrows), lam(nrows), ds(nrows), dz(nrows), dx(nvar);
    VectorXd rhs_s(nrows), big_l(nrows), ltil(nrows), tmp(nrows), wds(nrows), wdz(nrows), corr(nrows);

    const double hnorm = std::max(1.0, h.norm());
    const double cnorm = std::max(1.0, c.norm());

    for (int iter = 0; iter <= opts.max_iter; ++iter) {
        res_x = G.transpose() * z + c;
        res_z = G * x + s - h;
        const double gap = s.dot(z);
        const double pcost = c.dot(x);
        const double pres = res_z.norm() / hnorm;
        const double dres = res_x.norm() / cnorm;
        const double relgap = std::abs(gap) / std::max(1.0, std::abs(pcost));
        sol.residual_history.push_back(std::max({pres, dres, relgap}));
        sol.iterations = iter;

        if (pres <= opts.feas_tol && dres <= opts.feas_tol &&
            (std::abs(gap) <= opts.gap_tol || relgap <= opts.gap_tol)) {
            sol.status = SolveStatus::Optimal;
            break;
        }
        if (iter == opts.max_iter) {
            sol.status = SolveStatus::MaxIter;
            break;
        }

        if (!scaling.compute(s, z)) {
            sol.status = SolveStatus::NumericalFailure;
            break;
        }
        scaling.apply_w(z, lam); // lambda = W z = W^{-1} s
        const double mu = gap / layout.degree;

        scaling.scale_matrix(G, Gt);
        Hbase.setZero();
        Hbase.selfadjointView<Eigen::Lower>().rankUpdate(Gt.transpose());
        if (!factor()) {
            sol.status = SolveStatus::NumericalFailure;
            break;
        }

        auto direction = [&](const VectorXd& rs) {
            cone.arrow_solve(lam, rs, big_l);
            scaling.apply_winv(res_z, tmp);
            ltil = big_l + tmp;
            dx = solve_normal(-res_x - Gt.transpose() * ltil);
            tmp = Gt * dx + ltil;
            scaling.apply_winv(tmp, dz);
            ds = -res_z - G * dx;
        };

        // predictor
        cone.product(lam, lam, rhs_s);
        rhs_s = -rhs_s;
        direction(rhs_s);
        const double alpha_aff =
            std::min({1.0, cone.max_step(s, ds), cone.max_step(z, dz)});
        const double gap_aff = (s + alpha_aff * ds).dot(z + alpha_aff * dz);
        double sigma = gap_aff / gap;
        sigma = std::clamp(sigma * sigma * sigma, 0.0, 1.0);

        // corrector: rhs = -lam o lam - (W^{-1} ds_aff) o (W dz_aff) + sigma mu e
        scaling.apply_winv(ds, wds);
        scaling.apply_w(dz, wdz);
        cone.product(wds, wdz, corr);
        cone.product(lam, lam, rhs_s);
        rhs_s = -rhs_s - corr + sigma * mu * e;
        direction(rhs_s);

        double alpha = std::min({1.0, cone.max_step(s, ds), cone.max_step(z, dz)});
        alpha = std::min(1.0, 0.99 * alpha);
        if (!(alpha > 1e-13) || !std::isfinite(alpha)) {
            sol.status = SolveStatus::NumericalFailure;
            break;
        }
        x += alpha * dx;
        s += alpha * ds;
        z += alpha * dz;
        if (!x.allFinite() || !s.allFinite() || !z.allFinite()) {
            sol.status = SolveStatus::NumericalFailure;
            break;
        }
    }

    sol.x.assign(x.data(), x.data() + nvar);
    sol.s.assign(s.data(), s.data() + nrows);
    sol.z.assign(z.data(), z.data() + nrows);
    sol.objective = c.dot(x);
    sol.duality_gap = s.dot(z);
    sol.max_violation = cone_violation(problem, sol.x);
    return sol;
}

KktResiduals kkt_residuals(const ConicProblem& problem, const ConicSolution& solution) {
    if (solution.status == SolveStatus::NumericalFailure)
        throw std::invalid_argument("kkt_residuals: solution reports numerical failure");
    const int nvar = problem.num_vars();
    const int nrows = problem.num_rows();
    VectorXd x = Eigen::Map<const VectorXd>(solution.x.data(), nvar);
    VectorXd z = Eigen::Map<const VectorXd>(solution.z.data(), nrows);

    VectorXd stat(nvar);
    double cnorm = 0.0;
    for (int j = 0; j < nvar; ++j) {
        stat[j] = problem.cost()[static_cast<std::size_t>(j)];
        cnorm += stat[j] * stat[j];
    }
    for (int r = 0; r < nrows; ++r)
        for (const auto& [idx, val] : problem.rows()[static_cast<std::size_t>(r)])
            stat[idx] += val * z[r];

    KktResiduals out;
    out.stationarity = stat.norm() / (1.0 + std::sqrt(cnorm));
    out.primal_feasibility = cone_violation(problem, solution.x);

    // dual cone violation of z (self-dual cones)
    double dual_viol = 0.0;
    for (const auto& blk : problem.blocks()) {
        if (blk.kind == ConeKind::NonNeg) {
            dual_viol = std::max(dual_viol, -z[blk.offset]);
        } else {
            double nrm = 0.0;
            for (int i = 1; i < blk.dim; ++i) nrm += z[blk.offset + i] * z[blk.offset + i];
            dual_viol = std::max(dual_viol, std::sqrt(nrm) - z[blk.offset]);
        }
    }
    out.dual_feasibility = dual_viol;

    // complementarity via s = h - Gx
    double comp = 0.0;
    for (int r = 0; r < nrows; ++r) {
        double gx = 0.0;
        for (const auto& [idx, val] : problem.rows()[static_cast<std::size_t>(r)])
            gx += val * solution.x[static_cast<std::size_t>(idx)];
        comp += (problem.rhs()[static_cast<std::size_t>(r)] - gx) * z[r];
    }
    out.complementarity = std::abs(comp) / (1.0 + std::abs(solution.objective));
    return out;
}

} // namespace rosar::conic
