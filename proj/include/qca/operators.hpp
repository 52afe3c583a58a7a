#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "qca/lattice.hpp"

namespace qca {

// Sparse complex operator on the composite space. Row-major storage with
// sorted inner indices keeps Frobenius norms and equality checks
// reproducible. Immutable after construction.
class LinearOperator {
  public:
    using Matrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::int64_t>;
    using Triplet = Eigen::Triplet<cplx, std::int64_t>;

    explicit LinearOperator(Matrix m);
    static LinearOperator identity(std::int64_t dim);
    static LinearOperator from_triplets(std::int64_t dim, const std::vector<Triplet>& entries);

    std::int64_t dim() const { return mat_.rows(); }
    const Matrix& matrix() const { return mat_; }
    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(mat_); }

    std::vector<cplx> apply(const std::vector<cplx>& v) const;
    StateVector apply(const StateVector& v) const;

    LinearOperator compose(const LinearOperator& rhs) const;  // this * rhs
    LinearOperator add(const LinearOperator& rhs) const;
    LinearOperator scale(cplx factor) const;
    LinearOperator adjoint() const;  // conjugate transpose

    double frobenius_norm() const { return mat_.norm(); }
    // Largest singular value via power iteration on A^dagger A, relative
    // tolerance 1e-10 or 500 iterations, whichever first. Deterministic
    // (fixed-seed start vector).
    double operator_norm_estimate(double rel_tol = 1e-10, int max_iter = 500) const;

  private:
    Matrix mat_;
};

// Free-function algebra (thin wrappers over the members above).
LinearOperator compose(const LinearOperator& a, const LinearOperator& b);
LinearOperator add(const LinearOperator& a, const LinearOperator& b);
LinearOperator scale(const LinearOperator& a, cplx factor);
LinearOperator adjoint(const LinearOperator& a);

// Elementary operators placed on the composite space (identity elsewhere).
//
//   Lower  (V)      |l> -> |l-1>   at l = -Lambda: 0 (HardCutoff) or |+Lambda> (CyclicWrap)
//   Raise  (V^dag)  |l> -> |l+1>   adjoint of Lower
//   Number (L)      |l> -> l |l>
//   Phase  (T_phi)  |l> -> e^{i l phi} |l>
enum class LinkOperatorKind { Lower, Raise, Number, Phase };

LinearOperator link_op(LinkOperatorKind kind, int link_index, const LatticeSpec& spec,
                       double phi = 0.0);

// Places a 2x2 matrix on one qubit site. `matrix2x2[i][j]` is <i|M|j>.
LinearOperator qubit_op(const cplx (&matrix2x2)[2][2], int site, const LatticeSpec& spec);

// Diagonal 0/1 projector onto labels with every |link| <= Lambda - margin
// (the operator form of project_interior).
LinearOperator interior_projector(const LatticeSpec& spec, int margin);

} // namespace qca
