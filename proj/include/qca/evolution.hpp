#pragma once

#include <map>

#include "qca/gates.hpp"

namespace qca {

// Kernel execution policy. Parallel uses OpenMP when compiled in; results
// are bitwise identical to Serial by construction (disjoint in-place pair
// updates, fixed-chunk deterministic reductions).
enum class Execution { Serial, Parallel };

struct Observables {
    std::vector<double> n;   // <n_p> per site
    std::vector<double> L;   // <L> per link
    std::vector<double> L2;  // <L^2> per link
    double electric_energy;  // (g^2/2) * sum_links <L^2>
    double total_n;          // sum_p <n_p>
    double staggered_charge; // sum_p (-1)^p <n_p>
    double norm;
};

struct EvolutionReport {
    std::vector<double> norms;             // per recorded step (step 0 first)
    std::vector<Observables> observables;  // per recorded step (step 0 first)
};

// Global step operator, read right to left:
//   G = [prod_{p even} W*_p] . D . [prod_{p odd} W_p] . D
// where D is the interaction layer over all links. Gates within one layer
// act on disjoint (p, p+1) pairs; the odd layer leaves the unpaired edge
// sites 0 and N-1 alone. One application of G advances time by 2*delta_t.
LinearOperator build_step(const LatticeSpec& spec, const GateParams& params);

// Applies G once.
StateVector step(const StateVector& state, const LinearOperator& G);

// Expectation values of the standard observable set. Uses a fixed-chunk
// summation order so results are identical across execution policies.
Observables measure(const StateVector& state, const LatticeSpec& spec);

// Matrix-free application of G to a dense amplitude vector, equivalent to
// build_step but without materializing the operator. The parallel path
// works in place on disjoint index pairs, so its output is bitwise equal
// to the serial path.
class StepApplier {
  public:
    StepApplier(const LatticeSpec& spec, const GateParams& params,
                Execution exec = Execution::Serial);

    void apply_step(std::vector<cplx>& amp) const;
    void apply_interaction(std::vector<cplx>& amp) const;
    // parity 1: odd-p layer of W gates; parity 0: even-p layer of W* gates.
    void apply_gate_layer(std::vector<cplx>& amp, int parity) const;

    const LatticeSpec& spec() const { return spec_; }

  private:
    void apply_pair(std::vector<cplx>& amp, int p, const GateCoeffs& g) const;

    LatticeSpec spec_;
    GateParams params_;
    Execution exec_;
    std::vector<cplx> diag_phase_;  // per link digit, shared by all links
};

Observables measure_amp(const std::vector<cplx>& amp, const LatticeSpec& spec,
                        Execution exec = Execution::Serial);

// Evolves `steps` applications of G, recording norms and observables
// (including the initial state at entry 0).
EvolutionReport run_evolution(StateVector& state, const StepApplier& applier, int steps,
                              bool record_observables = true);

// Sparse-map state for dimensions beyond the dense budget (e.g. few-particle
// sectors of large chains). Deterministic: ordered keys, fixed accumulation
// order.
using SparseState = std::map<std::int64_t, cplx>;

class SparseStepper {
  public:
    SparseStepper(const LatticeSpec& spec, const GateParams& params);
    void apply_step(SparseState& state) const;

  private:
    void apply_interaction(SparseState& state) const;
    void apply_gate_layer(SparseState& state, int parity) const;

    LatticeSpec spec_;
    GateParams params_;
    std::vector<cplx> diag_phase_;
};

} // namespace qca
