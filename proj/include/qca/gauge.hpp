#pragma once

#include "qca/evolution.hpp"

namespace qca {

// One gauge angle per site.
struct GaugeField {
    std::vector<double> phi;
};

// True iff every angle lies in 2*pi*Z/(2*Lambda+1) (tolerance tol), the
// quantization required for exact invariance in CyclicWrap mode: at the wrap
// seam T_phi V = e^{-i phi} V T_phi forces e^{i(2*Lambda+1) phi} = 1.
bool is_quantized(const GaugeField& field, const LatticeSpec& spec, double tol = 1e-9);

// P_phi = (x)_p ( T_phi(p) (x) R_phi(p) (x) T_-phi(p) ): a diagonal unitary
// giving the basis state with occupations n and links l the phase
//   exp( i sum_p phi(p) n_p + i sum_links l_j (phi(j+1) - phi(j)) ).
// Each interior link is acted upon twice (by -phi(j) and +phi(j+1));
// boundary sites contribute single-sided link phases.
LinearOperator gauge_transform(const GaugeField& field, const LatticeSpec& spec);

// Gauge-invariance residual of the step operator.
// CyclicWrap (margin = 0, quantized angles):   || P_phi G - G P_phi ||_F
// HardCutoff (margin >= 1, any real angles):   || (P_phi G - G P_phi) Pi_margin ||_F
// where Pi_margin projects onto |link| <= Lambda - margin (one application of
// G moves any link by at most 1). Contract: < 1e-12.
double gauge_commutator(const GaugeField& field, const LatticeSpec& spec,
                        const GateParams& params, int margin,
                        bool allow_unquantized = false);

// Local Gauss generator Q_p = n_p + L_{p-1/2} - L_{p+1/2} (absent boundary
// links contribute 0). Diagonal, and P_phi = exp(i sum_p phi(p) Q_p) exactly.
LinearOperator gauss_generator(int p, const LatticeSpec& spec);

struct ConservationReport {
    double max_drift;   // max_p max_t | <Q_p>(t) - <Q_p>(0) |
    bool seam_contact;  // support touched |l| = Lambda at some step
};

// Evolves `steps` applications of G and tracks every <Q_p>. Conservation is
// exact only away from cutoff events: if the state support touches
// |l| = Lambda (a wrap in CyclicWrap, norm loss in HardCutoff) the run
// throws ConfigError unless allow_seam, in which case the contact is flagged
// and the measured drift reported as-is.
ConservationReport generator_conservation(const LatticeSpec& spec, const GateParams& params,
                                          const StateVector& state, int steps,
                                          bool allow_seam = false);

} // namespace qca
