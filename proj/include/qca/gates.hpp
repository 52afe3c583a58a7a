#pragma once

#include "qca/operators.hpp"

namespace qca {

// Gate variants:
//   W            the interacting gate: middle block [[e^{-i zeta} sin(theta) I, cos(theta) V],
//                                                    [-cos(theta) V^dag, e^{i zeta} sin(theta) I]]
//   WPrime       free gate, V replaced by the identity (links untouched)
//   WDoublePrime plastic gate: hopping signs swapped (-cos(theta) V / +cos(theta) V^dag)
//                and |11><11| block scaled by e^{i pi eps^{2 alpha}}
enum class GateVariant { W, WPrime, WDoublePrime };

struct GateParams {
    double delta_t = 0.0;  // = eps
    double delta_x = 0.0;  // = eps^{1-alpha}
    double kappa = 0.0;    // = eps^alpha
    double theta = 0.0;    // = arccos(c * kappa)
    double zeta = 0.0;     // mass phase, m*eps/sin(theta)
    GateVariant variant = GateVariant::W;
    // Corner phase of WDoublePrime is exp(i*pi*corner_scale); the scaling
    // parametrization sets corner_scale = eps^{2 alpha} = (delta_t/delta_x)^2.
    double corner_scale = 0.0;
    // WDoublePrime as printed has bare sin(theta) diagonals; by default the
    // e^{-+i zeta} mass phases are reinstated (required for any massive use;
    // identical matrices at zeta = 0).
    bool wpp_mass_phases = true;
};

// Scaling parametrization: delta_t = eps, delta_x = eps^{1-alpha},
// kappa = eps^alpha, theta = arccos(c*kappa), zeta = m*eps/sin(theta).
// zeta >= 0 here; the staggered mass sign is realized by applying W on odd
// pairs and W* on even pairs, not by a sign in zeta. Throws DomainError when
// c*eps^alpha > 1, or when m > 0 and sin(theta) = 0 (the mass phase divides
// by sin(theta) and is undefined there).
GateParams scaling_params(double epsilon, double alpha, double c, double m);

// Convenience: scaling_params from the knobs stored on the spec.
GateParams scaling_params(const LatticeSpec& spec);

// In-place action of one gate on the pair (amplitude of |01,l>, |10,l'>);
// l' = l+1 for link-shifting variants, l' = l for WPrime. Shared between
// the explicit sparse construction and the in-place state kernels.
struct GateCoeffs {
    cplx d01;         // diagonal on |01>
    cplx d10;         // diagonal on |10>
    cplx h_to01;      // out(01,l)  += h_to01 * in(10,l')
    cplx h_to10;      // out(10,l') += h_to10 * in(01,l)
    cplx corner;      // multiplier on the |11> block
    bool shifts_link; // false only for WPrime
};

GateCoeffs gate_coeffs(const GateParams& params, bool conjugated);

// Gate acting on (qubit p) x (link p+1/2) x (qubit p+1), identity elsewhere:
// I_{<p} (x) W_p (x) I_{>p+1}. conjugated = true gives the entrywise complex
// conjugate W*. Basis order within the pair: (00, 01, 10, 11) (x) link.
LinearOperator build_gate(int p, const GateParams& params, const LatticeSpec& spec,
                          bool conjugated);

// Diagonal interaction layer: every basis state picks up
// prod_links exp(-(i/2) * delta_x * delta_t * g^2 * l^2), with delta_x,
// delta_t derived from spec.epsilon/spec.alpha and g = spec.coupling.
// Acts on all links simultaneously.
LinearOperator interaction_layer(const LatticeSpec& spec);

} // namespace qca
