#include "qca/operators.hpp"

#include <cmath>

#include "qca/rng.hpp"

namespace qca {

LinearOperator::LinearOperator(Matrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols()) throw ShapeError("operator must be square");
    mat_.makeCompressed();
}

LinearOperator LinearOperator::identity(std::int64_t dim) {
    Matrix m(dim, dim);
    m.setIdentity();
    return LinearOperator(std::move(m));
}

LinearOperator LinearOperator::from_triplets(std::int64_t dim,
                                             const std::vector<Triplet>& entries) {
    Matrix m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    return LinearOperator(std::move(m));
}

std::vector<cplx> LinearOperator::apply(const std::vector<cplx>& v) const {
    if (static_cast<std::int64_t>(v.size()) != dim())
        throw ShapeError("vector length does not match operator dimension");
    Eigen::Map<const Eigen::VectorXcd> in(v.data(), static_cast<Eigen::Index>(v.size()));
    Eigen::VectorXcd out = mat_ * in;
    return std::vector<cplx>(out.data(), out.data() + out.size());
}

StateVector LinearOperator::apply(const StateVector& v) const {
    StateVector out = v;
    out.amp = apply(v.amp);
    return out;
}

LinearOperator LinearOperator::compose(const LinearOperator& rhs) const {
    if (dim() != rhs.dim()) throw ShapeError("compose: dimension mismatch");
    return LinearOperator(Matrix(mat_ * rhs.mat_));
}

LinearOperator LinearOperator::add(const LinearOperator& rhs) const {
    if (dim() != rhs.dim()) throw ShapeError("add: dimension mismatch");
    return LinearOperator(Matrix(mat_ + rhs.mat_));
}

LinearOperator LinearOperator::scale(cplx factor) const {
    return LinearOperator(Matrix(mat_ * factor));
}

LinearOperator LinearOperator::adjoint() const {
    return LinearOperator(Matrix(mat_.adjoint()));
}

double LinearOperator::operator_norm_estimate(double rel_tol, int max_iter) const {
    if (dim() == 0) return 0.0;
    // Power iteration for the top eigenvalue of A^dagger A; sigma_max = sqrt.
    Rng rng(0x9e3779b97f4a7c15ull);
    Eigen::VectorXcd v(dim());
    for (std::int64_t i = 0; i < dim(); ++i)
        v[i] = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    v.normalize();
    double sigma = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXcd w = mat_ * v;
        Eigen::VectorXcd u = mat_.adjoint() * w;
        double nu = u.norm();
        if (nu == 0.0) return 0.0;
        double next = std::sqrt(w.squaredNorm() / v.squaredNorm());
        v = u / nu;
        if (it > 0 && std::abs(next - sigma) <= rel_tol * next) return next;
        sigma = next;
    }
    return sigma;
}

LinearOperator compose(const LinearOperator& a, const LinearOperator& b) { return a.compose(b); }
LinearOperator add(const LinearOperator& a, const LinearOperator& b) { return a.add(b); }
LinearOperator scale(const LinearOperator& a, cplx factor) { return a.scale(factor); }
LinearOperator adjoint(const LinearOperator& a) { return a.adjoint(); }

LinearOperator link_op(LinkOperatorKind kind, int link_index, const LatticeSpec& spec,
                       double phi) {
    if (link_index < 0 || link_index >= spec.num_links)
        throw BoundsError("link index out of range");
    const int d = spec.link_dim();
    std::int64_t stride = 1;
    for (int j = spec.num_links - 1; j > link_index; --j) stride *= d;
    std::vector<LinearOperator::Triplet> entries;
    entries.reserve(static_cast<std::size_t>(spec.dim()));
    for (std::int64_t col = 0; col < spec.dim(); ++col) {
        const int digit = static_cast<int>((col / stride) % d);
        const int l = digit - spec.cutoff;
        switch (kind) {
            case LinkOperatorKind::Lower: {
                int target = digit - 1;
                if (target < 0) {
                    if (spec.truncation_mode == TruncationMode::HardCutoff) continue;
                    target = d - 1;  // wrap -Lambda -> +Lambda
                }
                entries.emplace_back(col + (target - digit) * stride, col, cplx(1.0, 0.0));
                break;
            }
            case LinkOperatorKind::Raise: {
                int target = digit + 1;
                if (target >= d) {
                    if (spec.truncation_mode == TruncationMode::HardCutoff) continue;
                    target = 0;  // wrap +Lambda -> -Lambda
                }
                entries.emplace_back(col + (target - digit) * stride, col, cplx(1.0, 0.0));
                break;
            }
            case LinkOperatorKind::Number:
                entries.emplace_back(col, col, cplx(static_cast<double>(l), 0.0));
                break;
            case LinkOperatorKind::Phase:
                entries.emplace_back(col, col, std::exp(cplx(0.0, l * phi)));
                break;
        }
    }
    return LinearOperator::from_triplets(spec.dim(), entries);
}

LinearOperator qubit_op(const cplx (&matrix2x2)[2][2], int site, const LatticeSpec& spec) {
    if (site < 0 || site >= spec.num_sites) throw BoundsError("site index out of range");
    const std::int64_t stride = (std::int64_t(1) << (spec.num_sites - 1 - site)) * spec.links_dim();
    std::vector<LinearOperator::Triplet> entries;
    entries.reserve(static_cast<std::size_t>(2 * spec.dim()));
    for (std::int64_t col = 0; col < spec.dim(); ++col) {
        const int b = static_cast<int>((col / stride) % 2);
        for (int bp = 0; bp < 2; ++bp) {
            const cplx m = matrix2x2[bp][b];
            if (m == cplx(0.0, 0.0)) continue;
            entries.emplace_back(col + (bp - b) * stride, col, m);
        }
    }
    return LinearOperator::from_triplets(spec.dim(), entries);
}

LinearOperator interior_projector(const LatticeSpec& spec, int margin) {
    if (margin < 0 || margin > spec.cutoff)
        throw BoundsError("margin must lie in [0, cutoff]");
    const int d = spec.link_dim();
    const int keep = spec.cutoff - margin;
    std::vector<LinearOperator::Triplet> entries;
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        std::int64_t lnk = i % spec.links_dim();
        bool inside = true;
        for (int j = 0; j < spec.num_links; ++j) {
            int l = static_cast<int>(lnk % d) - spec.cutoff;
            lnk /= d;
            if (l < -keep || l > keep) {
                inside = false;
                break;
            }
        }
        if (inside) entries.emplace_back(i, i, cplx(1.0, 0.0));
    }
    return LinearOperator::from_triplets(spec.dim(), entries);
}

} // namespace qca
