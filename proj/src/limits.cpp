#include "qca/limits.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qca/fermions.hpp"

namespace qca {

double SpinorAmplitudes::l2_norm() const {
    double s = 0.0;
    for (const cplx& a : psi_l) s += std::norm(a);
    for (const cplx& a : psi_r) s += std::norm(a);
    return std::sqrt(s);
}

namespace {

struct WalkMatrices {
    Eigen::Matrix2cd Am, A0, Ap;
};

WalkMatrices recurrence_matrices(double theta, double zeta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const cplx em = std::exp(cplx(0.0, -zeta));
    const cplx ep = std::exp(cplx(0.0, zeta));
    WalkMatrices w;
    w.Am << cplx(0.0, 0.0), -c * em * s,
            cplx(0.0, 0.0), cplx(c * c, 0.0);
    w.A0 << em * em * s * s, c * ep * s,
            -c * em * s, ep * ep * s * s;
    w.Ap << cplx(c * c, 0.0), cplx(0.0, 0.0),
            c * ep * s, cplx(0.0, 0.0);
    return w;
}

} // namespace

SpinorAmplitudes walk_step(const SpinorAmplitudes& s, double theta, double zeta) {
    if (s.psi_l.size() != s.psi_r.size() || s.psi_l.empty())
        throw ShapeError("spinor components must have equal nonzero length");
    const WalkMatrices w = recurrence_matrices(theta, zeta);
    const std::size_t X = s.psi_l.size();
    SpinorAmplitudes out;
    out.psi_l.resize(X);
    out.psi_r.resize(X);
    for (std::size_t x = 0; x < X; ++x) {
        const std::size_t xm = (x + X - 1) % X;
        const std::size_t xp = (x + 1) % X;
        Eigen::Vector2cd v = w.Am * Eigen::Vector2cd(s.psi_l[xm], s.psi_r[xm]) +
                             w.A0 * Eigen::Vector2cd(s.psi_l[x], s.psi_r[x]) +
                             w.Ap * Eigen::Vector2cd(s.psi_l[xp], s.psi_r[xp]);
        out.psi_l[x] = v[0];
        out.psi_r[x] = v[1];
    }
    return out;
}

void walk_open_step(std::vector<cplx>& u, const GateParams& params) {
    const int N = static_cast<int>(u.size());
    if (N < 2 || N % 2 != 0) throw ShapeError("chain length must be even and >= 2");
    for (int parity : {1, 0}) {
        const GateCoeffs g = gate_coeffs(params, parity == 0);
        for (int p = parity; p + 1 < N; p += 2) {
            const cplx a = u[static_cast<std::size_t>(p + 1)];  // |01> pattern
            const cplx b = u[static_cast<std::size_t>(p)];      // |10> pattern
            u[static_cast<std::size_t>(p + 1)] = g.d01 * a + g.h_to01 * b;
            u[static_cast<std::size_t>(p)] = g.h_to10 * a + g.d10 * b;
        }
    }
}

Eigen::MatrixXcd hermitian_propagator(const Eigen::MatrixXcd& H, double tau) {
    const double scale = std::max(1.0, H.norm());
    if ((H - H.adjoint()).norm() > 1e-12 * scale)
        throw NumericalError("propagator requires a Hermitian generator");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        phases[i] = std::exp(cplx(0.0, -tau * es.eigenvalues()[i]));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ConvergenceCurve hamiltonian_convergence(const LatticeSpec& spec_template,
                                         const std::vector<double>& eps_list) {
    if (spec_template.truncation_mode != TruncationMode::CyclicWrap)
        throw ConfigError("convergence study requires CyclicWrap (unitary links)");
    if (spec_template.alpha != 1.0)
        throw ConfigError("convergence study is the alpha = 1 limit");
    if (eps_list.size() < 2) throw ConfigError("need at least two epsilon values");

    // H_QCA does not depend on eps, so decompose once.
    const Eigen::MatrixXcd H = build_hqca(spec_template).dense();
    const double scale = std::max(1.0, H.norm());
    if ((H - H.adjoint()).norm() > 1e-12 * scale)
        throw NumericalError("H_QCA lost hermiticity");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");

    ConvergenceCurve curve;
    for (double eps : eps_list) {
        LatticeSpec spec = spec_template;
        spec.epsilon = eps;
        const GateParams params = scaling_params(eps, 1.0, spec.speed, spec.mass);
        const Eigen::MatrixXcd G = build_step(spec, params).dense();
        Eigen::VectorXcd phases(es.eigenvalues().size());
        for (Eigen::Index i = 0; i < phases.size(); ++i)
            phases[i] = std::exp(cplx(0.0, -2.0 * eps * es.eigenvalues()[i]));
        const Eigen::MatrixXcd E =
            es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
        curve.points.push_back({eps, (G - E).norm()});
    }

    curve.degenerate = std::all_of(curve.points.begin(), curve.points.end(),
                                   [](const ConvergencePoint& p) { return p.residual < 1e-13; });
    // Least squares on (log eps, log residual).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(curve.points.size());
    for (const ConvergencePoint& p : curve.points) {
        const double x = std::log(p.epsilon);
        const double y = std::log(std::max(p.residual, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    curve.slope = curve.degenerate ? 0.0 : (n * sxy - sx * sy) / denom;
    curve.intercept = curve.degenerate ? 0.0 : (sy - curve.slope * sx) / n;
    return curve;
}

namespace {

// Gauss-law link configuration attached to a particle at site r that started
// at site q with all links 0: L_j = [r <= j] - [q <= j].
std::vector<int> sector_links(int r, int q, const LatticeSpec& spec) {
    std::vector<int> links(static_cast<std::size_t>(spec.num_links), 0);
    for (int j = 0; j < spec.num_links; ++j)
        links[static_cast<std::size_t>(j)] = (r <= j ? 1 : 0) - (q <= j ? 1 : 0);
    return links;
}

std::int64_t sector_index(int r, int q, const LatticeSpec& spec) {
    BasisLabel label;
    label.occupations.assign(static_cast<std::size_t>(spec.num_sites), 0);
    label.occupations[static_cast<std::size_t>(r)] = 1;
    label.links = sector_links(r, q, spec);
    return flat_index(label, spec);
}

} // namespace

double walk_vs_qca(const LatticeSpec& spec, const GateParams& params, int steps,
                   int initial_site) {
    if (spec.coupling != 0.0)
        throw ConfigError("one-particle cross-validation requires g = 0");
    if (spec.cutoff < steps + 1)
        throw ConfigError("cutoff must be >= steps + 1 (no truncation contact)");
    if (steps < 0) throw ConfigError("steps must be >= 0");
    const int q = (initial_site < 0) ? spec.num_sites / 2 : initial_site;
    if (q >= spec.num_sites) throw ConfigError("initial site out of range");

    // Walk side: link-free open-chain amplitudes.
    std::vector<cplx> u(static_cast<std::size_t>(spec.num_sites), cplx(0.0, 0.0));
    u[static_cast<std::size_t>(q)] = cplx(1.0, 0.0);

    const bool dense = spec.dim() <= std::min<std::int64_t>(spec.budget, std::int64_t(1) << 22);
    double dev = 0.0;

    if (dense) {
        BasisLabel init = vacuum_label(spec);
        init.occupations[static_cast<std::size_t>(q)] = 1;
        StateVector state = basis_state(init, spec);
        const StepApplier applier(spec, params, Execution::Serial);
        for (int t = 0; t < steps; ++t) {
            applier.apply_step(state.amp);
            walk_open_step(u, params);
            std::vector<cplx> expected(static_cast<std::size_t>(spec.dim()), cplx(0.0, 0.0));
            for (int r = 0; r < spec.num_sites; ++r)
                expected[static_cast<std::size_t>(sector_index(r, q, spec))] =
                    u[static_cast<std::size_t>(r)];
            for (std::int64_t i = 0; i < spec.dim(); ++i)
                dev = std::max(dev, std::abs(state.amp[static_cast<std::size_t>(i)] -
                                             expected[static_cast<std::size_t>(i)]));
        }
    } else {
        SparseState state;
        state[sector_index(q, q, spec)] = cplx(1.0, 0.0);
        const SparseStepper stepper(spec, params);
        for (int t = 0; t < steps; ++t) {
            stepper.apply_step(state);
            walk_open_step(u, params);
            SparseState expected;
            for (int r = 0; r < spec.num_sites; ++r)
                expected[sector_index(r, q, spec)] = u[static_cast<std::size_t>(r)];
            for (const auto& [i, a] : state) {
                const auto it = expected.find(i);
                const cplx e = (it == expected.end()) ? cplx(0.0, 0.0) : it->second;
                dev = std::max(dev, std::abs(a - e));
            }
            for (const auto& [i, e] : expected)
                if (state.find(i) == state.end()) dev = std::max(dev, std::abs(e));
        }
    }
    return dev;
}

PQMatrices pq_matrices(double c, double m) {
    if (!(c > 0.0 && c <= 1.0)) throw DomainError("c must lie in (0, 1]");
    const double root = std::sqrt(1.0 - c * c);
    PQMatrices pq;
    pq.P << c * c, c * root,
            c * root, -c * c;
    pq.Q << cplx(0.0, m * root), cplx(0.0, -c * m),
            cplx(0.0, -c * m), cplx(0.0, -m * root);
    return pq;
}

SpinorBasis spinor_basis(double c) {
    if (!(c > 0.0 && c <= 1.0)) throw DomainError("c must lie in (0, 1]");
    SpinorBasis b;
    b.b_minus << -std::sqrt((1.0 - c) / 2.0), std::sqrt((1.0 + c) / 2.0);
    b.b_plus << std::sqrt((1.0 + c) / 2.0), std::sqrt((1.0 - c) / 2.0);
    return b;
}

DispersionPair walk_dispersion(double k, const GateParams& params) {
    const double eps = params.delta_t;
    if (!(eps > 0.0)) throw DomainError("delta_t must be > 0");
    if (std::abs(k) > std::numbers::pi / (2.0 * eps) * (1.0 + 1e-12))
        throw DomainError("momentum outside the coarse Brillouin zone");
    const WalkMatrices w = recurrence_matrices(params.theta, params.zeta);
    const cplx bloch = std::exp(cplx(0.0, 2.0 * eps * k));
    const Eigen::Matrix2cd M = w.Am / bloch + w.A0 + w.Ap * bloch;
    // Closed-form eigenvalues of the 2x2 transfer matrix.
    const cplx tr = M(0, 0) + M(1, 1);
    const cplx det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    const cplx disc = std::sqrt(tr * tr * 0.25 - det);
    const cplx l1 = tr * 0.5 + disc;
    const cplx l2 = tr * 0.5 - disc;
    if (std::abs(std::abs(l1) - 1.0) > 1e-10 || std::abs(std::abs(l2) - 1.0) > 1e-10)
        throw NumericalError("walk transfer matrix lost unitarity");
    const double w1 = -std::arg(l1) / (2.0 * eps);
    const double w2 = -std::arg(l2) / (2.0 * eps);
    return {std::max(w1, w2), std::min(w1, w2)};
}

double controlz_degeneration(const LatticeSpec& spec, double corner_scale, double zeta) {
    // Local comparison on one pair: an N = 2 chain with the same link space.
    const LatticeSpec local(2, spec.cutoff, spec.truncation_mode);
    GateParams params;
    params.theta = std::numbers::pi / 2.0;  // sin = 1, cos = 0 (order-0 point)
    params.zeta = zeta;
    params.variant = GateVariant::WDoublePrime;
    params.corner_scale = corner_scale;
    const LinearOperator W = build_gate(0, params, local, false);

    const cplx e11[2][2] = {{cplx(0.0, 0.0), cplx(0.0, 0.0)},
                            {cplx(0.0, 0.0), cplx(1.0, 0.0)}};
    const LinearOperator cz = LinearOperator::identity(local.dim())
                                  .add(qubit_op(e11, 0, local)
                                           .compose(qubit_op(e11, 1, local))
                                           .scale(cplx(-2.0, 0.0)));
    return W.add(cz.scale(cplx(-1.0, 0.0))).frobenius_norm();
}

} // namespace qca
