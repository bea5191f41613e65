#include "lsa/svd.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lsa/error.h"

namespace lsa {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Uniform in [-1, 1) from the raw engine output, so the sequence does not
// depend on the standard library's distribution implementation.
VectorXd random_vector(Index n, std::mt19937_64 &rng) {
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) {
        v(i) = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
    }
    return v;
}

// Classical Gram-Schmidt, applied twice.
void orthogonalize(VectorXd &x, const MatrixXd &basis, Index count) {
    if (count == 0) return;
    for (int pass = 0; pass < 2; ++pass) {
        const VectorXd coeffs = basis.leftCols(count).transpose() * x;
        x.noalias() -= basis.leftCols(count) * coeffs;
    }
}

// A unit vector orthogonal to the first `count` columns of `basis`.
VectorXd fresh_direction(const MatrixXd &basis, Index count, std::mt19937_64 &rng) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        VectorXd x = random_vector(basis.rows(), rng);
        orthogonalize(x, basis, count);
        const double norm = x.norm();
        if (norm > 1e-8) return x / norm;
    }
    throw Error(ErrorKind::kInternal, "could not extend an orthonormal basis");
}

MatrixXd bidiagonal(const VectorXd &alpha, const VectorXd &beta, Index p) {
    MatrixXd b = MatrixXd::Zero(p, p);
    for (Index j = 0; j < p; ++j) {
        b(j, j) = alpha(j);
        if (j + 1 < p) b(j, j + 1) = beta(j);
    }
    return b;
}

// Makes the largest-magnitude entry of each left vector positive.
void fix_signs(MatrixXd &left, MatrixXd &right) {
    for (Index i = 0; i < left.cols(); ++i) {
        Index arg = 0;
        left.col(i).cwiseAbs().maxCoeff(&arg);
        if (left(arg, i) < 0) {
            left.col(i) = -left.col(i);
            right.col(i) = -right.col(i);
        }
    }
}

// Lanczos on a matrix with rows >= cols.
TruncatedSvd lanczos_tall(const SparseMatrix &a, int k, const SvdOptions &options) {
    const Index m = a.rows();
    const Index n = a.cols();
    const double frobenius = a.norm();
    const double breakdown = std::max(frobenius, 1.0) * 1e-13;

    std::mt19937_64 rng(options.seed);
    MatrixXd u_basis(m, n);
    MatrixXd v_basis(n, n);
    VectorXd alpha = VectorXd::Zero(n);
    VectorXd beta = VectorXd::Zero(n);

    VectorXd v = random_vector(n, rng);
    v_basis.col(0) = v / v.norm();

    const Index step = std::max<Index>(k, 10);
    Index checkpoint = std::min<Index>(n, std::max<Index>(2 * k + 10, k + 20));

    TruncatedSvd result;
    for (Index j = 0; j < n; ++j) {
        VectorXd u = a * v_basis.col(j);
        if (j > 0) u -= beta(j - 1) * u_basis.col(j - 1);
        orthogonalize(u, u_basis, j);
        alpha(j) = u.norm();
        if (alpha(j) <= breakdown) {
            alpha(j) = 0.0;
            u_basis.col(j) = fresh_direction(u_basis, j, rng);
        } else {
            u_basis.col(j) = u / alpha(j);
        }

        VectorXd r = a.transpose() * u_basis.col(j);
        r -= alpha(j) * v_basis.col(j);
        orthogonalize(r, v_basis, j + 1);
        beta(j) = r.norm();

        const Index p = j + 1;
        if (p == checkpoint || p == n) {
            Eigen::BDCSVD<MatrixXd> small(bidiagonal(alpha, beta, p),
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
            const VectorXd &sigma = small.singularValues();
            bool converged = p == n;
            if (!converged) {
                const double limit = options.tolerance * std::max(sigma(0), breakdown);
                converged = true;
                for (int i = 0; i < k; ++i) {
                    if (beta(j) * std::abs(small.matrixU()(p - 1, i)) > limit) {
                        converged = false;
                        break;
                    }
                }
            }
            if (converged) {
                result.values = sigma.head(k);
                result.left = u_basis.leftCols(p) * small.matrixU().leftCols(k);
                result.right = v_basis.leftCols(p) * small.matrixV().leftCols(k);
                result.krylov_dimension = static_cast<int>(p);
                if (p > k) {
                    const double gap = sigma(k - 1) - sigma(k);
                    result.degenerate_boundary =
                        sigma(k - 1) > breakdown &&
                        gap <= options.tolerance * std::max(sigma(0), breakdown);
                }
                return result;
            }
            checkpoint = std::min(n, checkpoint + step);
        }

        if (p == n) break;
        if (beta(j) <= breakdown) {
            beta(j) = 0.0;
            v_basis.col(j + 1) = fresh_direction(v_basis, j + 1, rng);
        } else {
            v_basis.col(j + 1) = r / beta(j);
        }
    }
    throw Error(ErrorKind::kInternal, "Lanczos bidiagonalization did not terminate");
}

}  // namespace

TruncatedSvd truncated_svd_factors(const SparseMatrix &a, int k, const SvdOptions &options) {
    const Index min_dim = std::min(a.rows(), a.cols());
    if (k < 1 || k > min_dim) {
        throw ParameterError("k = " + std::to_string(k) + " outside [1, " +
                             std::to_string(min_dim) + "]");
    }
    TruncatedSvd result;
    if (a.rows() >= a.cols()) {
        result = lanczos_tall(a, k, options);
    } else {
        const SparseMatrix at = a.transpose();
        result = lanczos_tall(at, k, options);
        std::swap(result.left, result.right);
    }
    fix_signs(result.left, result.right);
    return result;
}

void IncrementalSvd::reset(const SparseMatrix &a, const SvdOptions &options) {
    rows_ = a.rows();
    cols_ = a.cols();
    const Index min_dim = std::min(rows_, cols_);
    if (min_dim == 0) {
        values_.resize(0);
        left_.resize(rows_, 0);
        right_.resize(cols_, 0);
        return;
    }
    TruncatedSvd full = truncated_svd_factors(a, static_cast<int>(min_dim), options);
    values_ = std::move(full.values);
    left_ = std::move(full.left);
    right_ = std::move(full.right);
    drop_negligible();
}

void IncrementalSvd::append_column(const SparseVector &column) {
    if (column.size() != rows_) {
        throw ParameterError("appended column has " + std::to_string(column.size()) +
                             " rows, expected " + std::to_string(rows_));
    }
    const Index r = values_.size();
    const VectorXd c = VectorXd(column);
    const VectorXd projection = left_.transpose() * c;
    VectorXd residual = c - left_ * projection;
    residual.noalias() -= left_ * (left_.transpose() * residual);
    const double rho = residual.norm();
    const double scale = r > 0 ? values_(0) : c.norm();
    const bool new_direction = rho > rank_tolerance_ * std::max(scale, 1e-300);

    MatrixXd core = MatrixXd::Zero(r + 1, r + 1);
    core.topLeftCorner(r, r) = values_.asDiagonal();
    core.topRightCorner(r, 1) = projection;
    core(r, r) = new_direction ? rho : 0.0;

    Eigen::JacobiSVD<MatrixXd> small(core, Eigen::ComputeFullU | Eigen::ComputeFullV);

    MatrixXd extended_left(rows_, r + 1);
    extended_left.leftCols(r) = left_;
    if (new_direction) {
        extended_left.col(r) = residual / rho;
    } else {
        extended_left.col(r).setZero();
    }
    MatrixXd extended_right = MatrixXd::Zero(cols_ + 1, r + 1);
    extended_right.topLeftCorner(cols_, r) = right_;
    extended_right(cols_, r) = 1.0;

    left_ = extended_left * small.matrixU();
    right_ = extended_right * small.matrixV();
    values_ = small.singularValues();
    ++cols_;
    drop_negligible();
}

void IncrementalSvd::drop_negligible() {
    if (values_.size() == 0) return;
    const double limit = rank_tolerance_ * values_(0);
    Index keep = 0;
    while (keep < values_.size() && values_(keep) > limit) ++keep;
    values_.conservativeResize(keep);
    left_.conservativeResize(Eigen::NoChange, keep);
    right_.conservativeResize(Eigen::NoChange, keep);
}

double IncrementalSvd::orthogonality_loss() const {
    const Index r = values_.size();
    if (r == 0) return 0.0;
    const MatrixXd identity = MatrixXd::Identity(r, r);
    const double left_loss = (left_.transpose() * left_ - identity).cwiseAbs().maxCoeff();
    const double right_loss = (right_.transpose() * right_ - identity).cwiseAbs().maxCoeff();
    return std::max(left_loss, right_loss);
}

TruncatedSvd IncrementalSvd::truncate(int k) const {
    if (k < 1 || k > std::min(rows_, cols_)) {
        throw ParameterError("k = " + std::to_string(k) + " outside [1, " +
                             std::to_string(std::min(rows_, cols_)) + "]");
    }
    const Index kept = std::min<Index>(k, values_.size());
    TruncatedSvd out;
    out.values = VectorXd::Zero(k);
    out.left = MatrixXd::Zero(rows_, k);
    out.right = MatrixXd::Zero(cols_, k);
    out.values.head(kept) = values_.head(kept);
    out.left.leftCols(kept) = left_.leftCols(kept);
    out.right.leftCols(kept) = right_.leftCols(kept);
    if (values_.size() > k) {
        out.degenerate_boundary = values_(k - 1) - values_(k) <= 1e-10 * values_(0);
    }
    out.krylov_dimension = static_cast<int>(values_.size());
    fix_signs(out.left, out.right);
    return out;
}

void IncrementalSvd::assign(Index rows, Index cols, VectorXd values, MatrixXd left,
                            MatrixXd right) {
    rows_ = rows;
    cols_ = cols;
    values_ = std::move(values);
    left_ = std::move(left);
    right_ = std::move(right);
}

}  // namespace lsa
