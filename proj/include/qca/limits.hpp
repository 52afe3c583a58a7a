#pragma once

#include <Eigen/Dense>

#include "qca/evolution.hpp"

namespace qca {

// Two-component field s = (psi_l, psi_r) on the coarse chain (spacing
// 2*eps): psi_l lives on even sites, psi_r on odd sites of the fine chain.
struct SpinorAmplitudes {
    std::vector<cplx> psi_l;
    std::vector<cplx> psi_r;
    double l2_norm() const;
};

// One full automaton step (time 2*eps) of the free single-particle walk,
// with the three 2x2 recurrence matrices
//   A_- = [[0, -cos(t) e^{-iz} sin(t)], [0, cos^2(t)]]
//   A_0 = [[e^{-2iz} sin^2(t), cos(t) e^{iz} sin(t)],
//          [-cos(t) e^{-iz} sin(t), e^{2iz} sin^2(t)]]
//   A_+ = [[cos^2(t), 0], [cos(t) e^{iz} sin(t), 0]]
// applied as s(x) <- A_- s(x-1) + A_0 s(x) + A_+ s(x+1), periodic wrap.
SpinorAmplitudes walk_step(const SpinorAmplitudes& s, double theta, double zeta);

// One full automaton step on the open-chain single-particle amplitudes
// u(p), p = 0..N-1 (links integrated out; valid for g = 0): the odd layer of
// W pair rotations followed by the even layer of W* pair rotations. Equal to
// walk_step under psi_l(x) = u(2x), psi_r(x) = -u(2x+1) away from the chain
// ends.
void walk_open_step(std::vector<cplx>& u, const GateParams& params);

struct ConvergencePoint {
    double epsilon;
    double residual;  // || G(eps) - exp(-2i eps H_QCA) ||_F
};

struct ConvergenceCurve {
    std::vector<ConvergencePoint> points;
    double slope;      // least-squares slope of log(residual) vs log(eps)
    double intercept;
    bool degenerate;   // all residuals below 1e-13; slope not meaningful
};

// alpha = 1 continuum limit: for each eps builds G(eps) (variant W,
// theta = arccos(c*eps), zeta = m*eps/sin(theta)) and the dense propagator
// exp(-2i eps H_QCA) via Hermitian eigendecomposition, then fits the log-log
// convergence order. Requires CyclicWrap and spec.alpha == 1.
ConvergenceCurve hamiltonian_convergence(const LatticeSpec& spec_template,
                                         const std::vector<double>& eps_list);

// Cross-validation of the full automaton against the link-free walk in the
// one-particle sector: starts a single fermion (all links 0), evolves both
// sides `steps` applications of G, and returns the max amplitude deviation
// over all basis states and times, using the Gauss-law link configuration
// attached to each particle position. Preconditions: g = 0 and
// Lambda >= steps + 1. initial_site < 0 selects N/2.
double walk_vs_qca(const LatticeSpec& spec, const GateParams& params, int steps,
                   int initial_site = -1);

// P = [[c^2, c sqrt(1-c^2)], [c sqrt(1-c^2), -c^2]],
// Q = [[i m sqrt(1-c^2), -i c m], [-i c m, -i m sqrt(1-c^2)]].
struct PQMatrices {
    Eigen::Matrix2d P;
    Eigen::Matrix2cd Q;
};
PQMatrices pq_matrices(double c, double m);

// Orthonormal eigenbasis of P: P b_± = ±c b_±.
struct SpinorBasis {
    Eigen::Vector2d b_minus;  // (-sqrt((1-c)/2), sqrt((1+c)/2))
    Eigen::Vector2d b_plus;   // ( sqrt((1+c)/2), sqrt((1-c)/2))
};
SpinorBasis spinor_basis(double c);

// Walk eigenfrequencies at momentum k: eigenvalues lambda_± of
// M(k) = A_- e^{-2i eps k} + A_0 + A_+ e^{+2i eps k} are unimodular and
// omega_± = -arg(lambda_±)/(2 eps); returns them sorted (plus = larger).
// Throws NumericalError if |lambda| deviates from 1 beyond 1e-10.
struct DispersionPair {
    double omega_plus;
    double omega_minus;
};
DispersionPair walk_dispersion(double k, const GateParams& params);

// Frobenius residual || W''_local - (1 - 2 n_p n_{p+1}) || of the plastic
// gate evaluated at the order-0 parameter point sin(theta) = 1, zeta = 0,
// corner = e^{i pi corner_scale} (corner_scale = 1 gives the exact control-Z
// point where the residual vanishes). Local comparison on one pair + link.
double controlz_degeneration(const LatticeSpec& spec, double corner_scale = 1.0,
                             double zeta = 0.0);

// exp(-i tau H) for Hermitian H via spectral decomposition.
Eigen::MatrixXcd hermitian_propagator(const Eigen::MatrixXcd& H, double tau);

} // namespace qca
