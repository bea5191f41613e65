// Truncated SVD of sparse matrices by Golub-Kahan-Lanczos bidiagonalization
// with full reorthogonalization, plus a column-append SVD update used by the
// incremental trace mode.

#ifndef LSA_SVD_H_
#define LSA_SVD_H_

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>

namespace lsa {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using SparseVector = Eigen::SparseVector<double>;

struct SvdOptions {
    // Ritz pairs are accepted once every residual is below tolerance * sigma_1.
    double tolerance = 1e-10;
    // Seed of the deterministic starting vector.
    std::uint64_t seed = 0x1a5e5eedULL;
};

struct TruncatedSvd {
    Eigen::VectorXd values;  // non-increasing, >= 0
    Eigen::MatrixXd left;    // rows x k
    Eigen::MatrixXd right;   // cols x k
    // sigma_k and sigma_{k+1} coincide to within tolerance; the retained
    // subspace is then not unique.
    bool degenerate_boundary = false;
    int krylov_dimension = 0;
};

// Leading k singular triplets of `a`. Requires 1 <= k <= min(rows, cols);
// throws ParameterError otherwise. Rank-deficient input is fine: trailing
// singular values come out near zero with orthonormal but arbitrary vectors.
// Single-threaded and bitwise reproducible for a fixed input.
TruncatedSvd truncated_svd_factors(const SparseMatrix &a, int k,
                                   const SvdOptions &options = {});

// Thin SVD A = U diag(s) V^T kept at full numerical rank and updated one
// appended column at a time.
class IncrementalSvd {
public:
    // Singular values below rank_tolerance * sigma_1 are discarded.
    explicit IncrementalSvd(double rank_tolerance = 1e-12)
        : rank_tolerance_(rank_tolerance) {}

    // Exact thin decomposition of `a` (replaces any previous state).
    void reset(const SparseMatrix &a, const SvdOptions &options = {});

    // Updates the factors so they describe [A c].
    void append_column(const SparseVector &column);

    // max(|U^T U - I|, |V^T V - I|), entrywise.
    double orthogonality_loss() const;

    // Leading k factors; k may exceed the numerical rank, in which case
    // the missing directions are zero-valued.
    TruncatedSvd truncate(int k) const;

    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }
    Eigen::Index rank() const { return values_.size(); }

    const Eigen::VectorXd &values() const { return values_; }
    const Eigen::MatrixXd &left() const { return left_; }
    const Eigen::MatrixXd &right() const { return right_; }

    // Restores a previously saved state verbatim.
    void assign(Eigen::Index rows, Eigen::Index cols, Eigen::VectorXd values,
                Eigen::MatrixXd left, Eigen::MatrixXd right);

private:
    void drop_negligible();

    double rank_tolerance_;
    Eigen::Index rows_ = 0;
    Eigen::Index cols_ = 0;
    Eigen::VectorXd values_;
    Eigen::MatrixXd left_;
    Eigen::MatrixXd right_;
};

}  // namespace lsa

#endif  // LSA_SVD_H_
