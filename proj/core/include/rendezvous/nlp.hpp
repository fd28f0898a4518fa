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

#ifndef RENDEZVOUS_NLP_HPP
#define RENDEZVOUS_NLP_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <string>
#include <vector>

namespace rdv::nlp {

using Triplet = Eigen::Triplet<double>;
using Vector = Eigen::VectorXd;

/**
 * @brief Smooth NLP  min f(z)  s.t.  c(z) = 0,  g(z) >= 0.
 *
 * Sparse derivative callbacks emit triplets; duplicates are summed. Hessian
 * callbacks emit the full symmetric matrix (both triangles).
 */
class Problem {
public:
    virtual ~Problem() = default;

    virtual int num_variables() const = 0;
    virtual int num_equalities() const = 0;
    virtual int num_inequalities() const = 0;

    virtual double objective(const Vector& z) const = 0;
    virtual void objective_gradient(const Vector& z, Vector& grad) const = 0;
    virtual void objective_hessian(const Vector& z, std::vector<Triplet>& out) const = 0;

    /// Fills @p eq (size num_equalities) and @p ineq (size num_inequalities).
    virtual void constraints(const Vector& z, Vector& eq, Vector& ineq) const = 0;
    /// Rows [0, me) are equalities, rows [me, me + mi) are inequalities.
    virtual void constraint_jacobian(const Vector& z, std::vector<Triplet>& out) const = 0;
    /// Sum_i y_i * Hessian(constraint_i), with y ordered like the Jacobian rows.
    virtual void constraint_hessian(const Vector& z, const Vector& y, std::vector<Triplet>& out) const = 0;
};

struct Options {
    double kkt_tolerance = 1e-6;
    double feasibility_tolerance = 1e-8;
    int max_outer_iterations = 500;
    int max_inner_iterations = 200;
    double initial_penalty = 100.0;
    double max_penalty = 1e12;
};

enum class Status { kConverged, kNotConverged, kInfeasible };

std::string to_string(Status status);

struct Stats {
    int outer_iterations = 0;
    int inner_iterations = 0;
    double constraint_violation = 0.0;
    double kkt_residual = 0.0;
    double complementarity = 0.0;
    double penalty = 0.0;
};

struct Result {
    Status status = Status::kNotConverged;
    Vector z;
    Vector eq_multipliers;
    Vector ineq_multipliers;  // >= 0
    double objective = 0.0;
    Stats stats;
};

/// Max-norm violation: max(|c|_inf, max(0, -g)_inf).
double constraint_violation(const Vector& eq, const Vector& ineq);

/**
 * Augmented-Lagrangian (PHR) outer loop with a damped-Newton inner solve on
 * the sparse augmented-Lagrangian Hessian. Negative curvature is handled by
 * adding a multiple of the identity until the LDL^T pivots are positive, and
 * each Newton step is globalized by an Armijo backtracking line search.
 */
Result solve(const Problem& problem, const Vector& z0, const Options& options = {});

}  // namespace rdv::nlp

#endif  // RENDEZVOUS_NLP_HPP
