/*
 Copyright 2026 The Rendezvous Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "rendezvous/nlp.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rdv::nlp {

std::string to_string(Status status) {
    switch (status) {
        case Status::kConverged: return "converged";
        case Status::kNotConverged: return "not_converged";
        case Status::kInfeasible: return "infeasible";
    }
    return "unknown";
}

double constraint_violation(const Vector& eq, const Vector& ineq) {
    double v = eq.size() > 0 ? eq.cwiseAbs().maxCoeff() : 0.0;
    if (ineq.size() > 0) v = std::max(v, (-ineq).cwiseMax(0.0).maxCoeff());
    return v;
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

class AugmentedLagrangian {
public:
    AugmentedLagrangian(const Problem& problem, Vector lam_eq, Vector lam_in, double mu)
        : p_(problem),
          n_(problem.num_variables()),
          me_(problem.num_equalities()),
          mi_(problem.num_inequalities()),
          lam_eq_(std::move(lam_eq)),
          lam_in_(std::move(lam_in)),
          mu_(mu),
          eq_(me_),
          in_(mi_) {}

    double value(const Vector& z) {
        p_.constraints(z, eq_, in_);
        double v = p_.objective(z);
        v += lam_eq_.dot(eq_) + 0.5 * mu_ * eq_.squaredNorm();
        for (int i = 0; i < mi_; ++i) {
            const double g = in_(i);
            if (lam_in_(i) - mu_ * g > 0.0) {
                v += -lam_in_(i) * g + 0.5 * mu_ * g * g;
            } else {
                v += -lam_in_(i) * lam_in_(i) / (2.0 * mu_);
            }
        }
        return v;
    }

    /// Gradient at z; also leaves first-order multiplier estimates in y_eq/y_in
    /// and the Jacobian in jac_.
    void gradient(const Vector& z, Vector& grad) {
        p_.constraints(z, eq_, in_);
        y_eq_ = lam_eq_ + mu_ * eq_;
        y_in_ = (lam_in_ - mu_ * in_).cwiseMax(0.0);

        triplets_.clear();
        p_.constraint_jacobian(z, triplets_);
        jac_.resize(me_ + mi_, n_);
        jac_.setFromTriplets(triplets_.begin(), triplets_.end());

        Vector y(me_ + mi_);
        y << y_eq_, -y_in_;
        p_.objective_gradient(z, grad);
        grad += jac_.transpose() * y;
    }

    /// Hessian at the point of the last gradient() call.
    void hessian(const Vector& z, SparseMatrix& h) {
        triplets_.clear();
        p_.objective_hessian(z, triplets_);
        Vector y(me_ + mi_);
        y << y_eq_, -y_in_;
        p_.constraint_hessian(z, y, triplets_);
        SparseMatrix curvature(n_, n_);
        curvature.setFromTriplets(triplets_.begin(), triplets_.end());

        Vector weights(me_ + mi_);
        weights.head(me_).setConstant(mu_);
        for (int i = 0; i < mi_; ++i) weights(me_ + i) = (lam_in_(i) - mu_ * in_(i) > 0.0) ? mu_ : 0.0;
        const SparseMatrix weighted = weights.asDiagonal() * jac_;
        h = SparseMatrix(jac_.transpose() * weighted) + curvature;
    }

    const Vector& eq() const { return eq_; }
    const Vector& in() const { return in_; }
    const Vector& y_eq() const { return y_eq_; }
    const Vector& y_in() const { return y_in_; }

private:
    const Problem& p_;
    int n_, me_, mi_;
    Vector lam_eq_, lam_in_;
    double mu_;
    Vector eq_, in_, y_eq_, y_in_;
    SparseMatrix jac_;
    std::vector<Triplet> triplets_;
};

struct InnerResult {
    int iterations = 0;
    double gradient_norm = std::numeric_limits<double>::infinity();
};

InnerResult minimize_inner(AugmentedLagrangian& al, Vector& z, double tolerance, int max_iterations,
                           double& regularization) {
    using Solver = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>>;
    const auto n = z.size();
    Vector grad(n), step(n), trial(n);
    SparseMatrix h, identity(n, n);
    identity.setIdentity();
    Solver solver;
    InnerResult out;

    for (int it = 0; it < max_iterations; ++it) {
        al.gradient(z, grad);
        out.gradient_norm = grad.lpNorm<Eigen::Infinity>();
        if (out.gradient_norm <= tolerance) return out;
        al.hessian(z, h);

        // Inertia correction: shift until every LDL^T pivot is positive.
        double delta = 0.0;
        for (int attempt = 0; attempt < 40; ++attempt) {
            solver.compute(delta > 0.0 ? SparseMatrix(h + delta * identity) : h);
            if (solver.info() == Eigen::Success && (solver.vectorD().array() > 0.0).all()) break;
            delta = delta == 0.0 ? std::max(1e-8, regularization / 4.0) : delta * 10.0;
        }
        regularization = delta;
        step = solver.solve(-grad);
        double slope = grad.dot(step);
        if (!std::isfinite(slope) || slope >= 0.0) {
            step = -grad;
            slope = -grad.squaredNorm();
        }

        const double f0 = al.value(z);
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
            trial = z + alpha * step;
            const double f1 = al.value(trial);
            if (std::isfinite(f1) && f1 <= f0 + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        ++out.iterations;
        if (!accepted) return out;
        z = trial;
        if ((alpha * step).lpNorm<Eigen::Infinity>() < 1e-15 * (1.0 + z.lpNorm<Eigen::Infinity>())) {
            al.gradient(z, grad);
            out.gradient_norm = grad.lpNorm<Eigen::Infinity>();
            return out;
        }
    }
    al.gradient(z, grad);
    out.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    return out;
}

}  // namespace

Result solve(const Problem& problem, const Vector& z0, const Options& options) {
    const int me = problem.num_equalities();
    const int mi = problem.num_inequalities();
    Result result;
    result.z = z0;
    Vector lam_eq = Vector::Zero(me);
    Vector lam_in = Vector::Zero(mi);
    double mu = options.initial_penalty;
    double previous_violation = std::numeric_limits<double>::infinity();
    double regularization = 0.0;
    int stalled = 0;
    double inner_tolerance = 1e-2;

    for (int outer = 1; outer <= options.max_outer_iterations; ++outer) {
        AugmentedLagrangian al(problem, lam_eq, lam_in, mu);
        const InnerResult inner =
            minimize_inner(al, result.z, inner_tolerance, options.max_inner_iterations, regularization);
        result.stats.inner_iterations += inner.iterations;
        result.stats.outer_iterations = outer;

        // al.gradient() was last evaluated at result.z, so eq/in/y are current.
        const double violation = constraint_violation(al.eq(), al.in());
        double complementarity = 0.0;
        for (int i = 0; i < mi; ++i) {
            complementarity = std::max(complementarity, std::min(al.y_in()(i), std::abs(al.in()(i))));
        }
        lam_eq = al.y_eq();
        lam_in = al.y_in();

        result.stats.constraint_violation = violation;
        result.stats.kkt_residual = inner.gradient_norm;
        result.stats.complementarity = complementarity;
        result.stats.penalty = mu;

        if (violation <= options.feasibility_tolerance && inner.gradient_norm <= options.kkt_tolerance &&
            complementarity <= options.kkt_tolerance) {
            result.status = Status::kConverged;
            break;
        }

        // Raise the penalty only after an inner solve that met its tolerance;
        // a stalled Newton loop says nothing about the penalty being too small.
        const bool inner_converged = inner.gradient_norm <= inner_tolerance;
        if (violation > 0.25 * previous_violation && inner_converged) {
            if (mu >= options.max_penalty) {
                if (violation > options.feasibility_tolerance && ++stalled >= 5) {
                    result.status = Status::kInfeasible;
                    break;
                }
            } else {
                mu = std::min(10.0 * mu, options.max_penalty);
            }
        } else {
            stalled = 0;
        }
        previous_violation = violation;
        inner_tolerance = std::max(0.1 * options.kkt_tolerance, std::min(0.1 * inner_tolerance, violation));
        if (violation <= options.feasibility_tolerance) inner_tolerance = 0.1 * options.kkt_tolerance;
    }

    result.eq_multipliers = lam_eq;
    result.ineq_multipliers = lam_in;
    result.objective = problem.objective(result.z);
    return result;
}

}  // namespace rdv::nlp
