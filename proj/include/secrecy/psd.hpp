// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Matrix foundations: PSD validation, Loewner ordering, log-determinants,
// simultaneous diagonalization and the monotone log-det ratio r(t) together
// with its bisection inverse.

#pragma once

#include "error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace secrecy
{

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Tolerance
{
    double psd_tol = 1e-9;      ///< relative eigenvalue slack for PSD / Loewner tests
    double residual_tol = 1e-8; ///< bound on equation residuals
    double root_tol = 1e-10;    ///< bracket width for scalar root finding

    void validate() const
    {
        require(psd_tol > 0 && residual_tol > 0 && root_tol > 0, "tolerances must be strictly positive");
    }
};

inline Matrix symmetrize(const Matrix &a)
{
    return 0.5 * (a + a.transpose());
}

inline Vector sym_eigenvalues(const Matrix &a)
{
    if (a.size() == 0)
        return Vector();
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double min_eigenvalue(const Matrix &a)
{
    return sym_eigenvalues(a).minCoeff();
}

inline double max_abs_eigenvalue(const Matrix &a)
{
    return sym_eigenvalues(a).cwiseAbs().maxCoeff();
}

/// Euclidean projection of a symmetric matrix onto the PSD cone.
inline Matrix project_psd(const Matrix &a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
    Vector d = es.eigenvalues().cwiseMax(0.0);
    return symmetrize(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose());
}

/// Symmetric square root of a PSD matrix (negative eigenvalues clipped).
inline Matrix psd_sqrt(const Matrix &a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
    Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

/// Inverse of a symmetric positive-definite matrix, symmetrized.
inline Matrix spd_inverse(const Matrix &a)
{
    Eigen::LLT<Matrix> llt(symmetrize(a));
    if (llt.info() != Eigen::Success)
        throw NumericalError("matrix is not positive definite; cannot invert");
    return symmetrize(llt.solve(Matrix::Identity(a.rows(), a.cols())));
}

/// Symmetric positive-(semi)definite matrix, validated and symmetrized at construction.
class PsdMatrix
{
  public:
    PsdMatrix() = default;

    static PsdMatrix from(const Matrix &a, const Tolerance &tol = {})
    {
        require_dims(a.rows() == a.cols() && a.rows() > 0, "PSD matrix must be square and non-empty");
        const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
        const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
        if (!std::isfinite(scale) || !std::isfinite(asym))
            throw PreconditionError("matrix has non-finite entries");
        if (asym > 1e-12 * scale)
            throw PreconditionError("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
        PsdMatrix out;
        out.m_ = symmetrize(a);
        const Vector ev = sym_eigenvalues(out.m_);
        const double lo = ev.minCoeff();
        const double hi = ev.cwiseAbs().maxCoeff();
        if (lo < -tol.psd_tol * (1.0 + hi))
            throw PreconditionError("matrix is not positive semi-definite (min eigenvalue " + std::to_string(lo) + ")");
        return out;
    }

    /// Builds from a matrix known to be PSD up to roundoff; only symmetrizes.
    static PsdMatrix trusted(const Matrix &a)
    {
        PsdMatrix out;
        out.m_ = symmetrize(a);
        return out;
    }

    static PsdMatrix identity(Eigen::Index n) { return trusted(Matrix::Identity(n, n)); }
    static PsdMatrix zero(Eigen::Index n) { return trusted(Matrix::Zero(n, n)); }
    static PsdMatrix scalar(double v) { return from(Matrix::Constant(1, 1, v)); }

    const Matrix &matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }
    double min_eigenvalue() const { return secrecy::min_eigenvalue(m_); }
    double max_eigenvalue() const { return sym_eigenvalues(m_).maxCoeff(); }

    bool is_positive_definite(const Tolerance &tol = {}) const
    {
        const Vector ev = sym_eigenvalues(m_);
        return ev.minCoeff() > tol.psd_tol * (1.0 + ev.cwiseAbs().maxCoeff());
    }

  private:
    Matrix m_;
};

/// Smallest eigenvalue of B - A; nonnegative iff A is below B in the Loewner order.
inline double loewner_margin(const Matrix &a, const Matrix &b)
{
    require_dims(a.rows() == b.rows() && a.cols() == b.cols(), "Loewner comparison");
    return min_eigenvalue(symmetrize(b - a));
}

inline bool loewner_leq(const Matrix &a, const Matrix &b, const Tolerance &tol = {})
{
    const double scale = 1.0 + std::max(max_abs_eigenvalue(a), max_abs_eigenvalue(b));
    return loewner_margin(a, b) >= -tol.psd_tol * scale;
}

inline bool loewner_leq(const PsdMatrix &a, const PsdMatrix &b, const Tolerance &tol = {})
{
    return loewner_leq(a.matrix(), b.matrix(), tol);
}

namespace detail
{
// Cholesky log-determinant without the singularity guard; NaN when not PD.
inline double logdet_unchecked(const Matrix &a)
{
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success)
        return std::numeric_limits<double>::quiet_NaN();
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}
} // namespace detail

/// Natural-log determinant of a symmetric positive-definite matrix.
inline double logdet(const Matrix &a)
{
    require_dims(a.rows() == a.cols(), "logdet of non-square matrix");
    if (a.rows() == 0)
        return 0.0;
    Eigen::LLT<Matrix> llt(symmetrize(a));
    if (llt.info() != Eigen::Success)
        throw NumericalError("logdet: matrix is singular or indefinite");
    const Vector piv = llt.matrixLLT().diagonal().array().square();
    if (piv.minCoeff() <= 1e-15 * piv.maxCoeff())
        throw NumericalError("logdet: matrix is singular to working precision");
    return piv.array().log().sum();
}

inline double logdet(const PsdMatrix &a)
{
    return logdet(a.matrix());
}

/// Self-test of |B|/|A+B| <= |B+D|/|A+B+D| for A, B, D PSD with A+B PD.
inline bool ratio_monotone_check(const Matrix &a, const Matrix &b, const Matrix &delta, const Tolerance &tol = {})
{
    require_dims(a.rows() == b.rows() && b.rows() == delta.rows(), "ratio_monotone_check operands");
    const Tolerance t = tol;
    require(min_eigenvalue(a) >= -t.psd_tol * (1 + max_abs_eigenvalue(a)), "A must be PSD");
    require(min_eigenvalue(b) >= -t.psd_tol * (1 + max_abs_eigenvalue(b)), "B must be PSD");
    require(min_eigenvalue(delta) >= -t.psd_tol * (1 + max_abs_eigenvalue(delta)), "Delta must be PSD");
    require(min_eigenvalue(a + b) > 0, "A + B must be positive definite");

    const double lhs = symmetrize(b).determinant() / symmetrize(a + b).determinant();
    const double rhs = symmetrize(b + delta).determinant() / symmetrize(a + b + delta).determinant();
    return lhs <= rhs * (1.0 + 1e-12) + 1e-14;
}

struct SimultaneousDiagonalization
{
    Matrix c;       ///< non-singular congruence
    Vector d_e;     ///< diagonal of C^T E C
    Vector d_delta; ///< diagonal of C^T Delta C

    /// |E + t Delta| reconstructed from the diagonal forms.
    double determinant_at(double t) const
    {
        const double det_c = c.determinant();
        return (d_e + t * d_delta).prod() / (det_c * det_c);
    }
};

/// Finds C with C^T E C and C^T Delta C diagonal (E PD, Delta PSD).
inline SimultaneousDiagonalization simultaneous_diagonalize(const Matrix &e, const Matrix &delta,
                                                            const Tolerance &tol = {})
{
    require_dims(e.rows() == e.cols() && delta.rows() == e.rows() && delta.cols() == e.cols(),
                 "simultaneous_diagonalize operands");
    Eigen::LLT<Matrix> llt(symmetrize(e));
    if (llt.info() != Eigen::Success || min_eigenvalue(e) <= tol.psd_tol * (1 + max_abs_eigenvalue(e)))
        throw PreconditionError("simultaneous_diagonalize: E must be strictly positive definite");
    const Matrix l = llt.matrixL();
    const Matrix linv = l.triangularView<Eigen::Lower>().solve(Matrix::Identity(e.rows(), e.cols()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(linv * delta * linv.transpose()));

    SimultaneousDiagonalization out;
    out.c = linv.transpose() * es.eigenvectors();
    out.d_e = (out.c.transpose() * e * out.c).diagonal();
    out.d_delta = (out.c.transpose() * delta * out.c).diagonal();
    return out;
}

/// r(t) = 1/2 (log|A+B+tD| - log|A+tD|), non-increasing on [0,1].
inline double r_function(const Matrix &a, const Matrix &b, const Matrix &delta, double t)
{
    require(t >= 0.0 && t <= 1.0, "r_function: t must lie in [0,1]");
    require_dims(a.rows() == b.rows() && a.rows() == delta.rows(), "r_function operands");
    return 0.5 * (logdet(a + b + t * delta) - logdet(a + t * delta));
}

/// Smallest t in [0,1] with r(t) = target, by bisection.
inline double solve_r_equals(const Matrix &a, const Matrix &b, const Matrix &delta, double target,
                             const Tolerance &tol = {})
{
    const double r0 = r_function(a, b, delta, 0.0);
    const double r1 = r_function(a, b, delta, 1.0);
    if (target > r0 + tol.residual_tol || target < r1 - tol.residual_tol)
        throw PreconditionError("solve_r_equals: target " + std::to_string(target) + " outside [r(1), r(0)] = [" +
                                std::to_string(r1) + ", " + std::to_string(r0) + "]");
    if (r0 <= target)
        return 0.0;
    if (r1 >= target)
        return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol.root_tol)
    {
        const double mid = 0.5 * (lo + hi);
        if (r_function(a, b, delta, mid) <= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

/// Smallest generalized eigenvalue lambda of A x = lambda B x (A symmetric, B PD).
inline double generalized_min_eigenvalue(const Matrix &a, const Matrix &b)
{
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(symmetrize(a), symmetrize(b), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("generalized eigenproblem failed");
    return es.eigenvalues().minCoeff();
}

} // namespace secrecy
