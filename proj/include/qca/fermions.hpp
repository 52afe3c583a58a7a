#pragma once

#include "qca/gates.hpp"
#include "qca/operators.hpp"

namespace qca {

// Jordan-Wigner fermions on the qubit chain, identity on all links. The
// string runs to the RIGHT (higher site index):
//   phi_p      = I_{<p} (x) E_01 (x) sigma_z (x) sigma_z (x) ...
//   phi_dag_p  = I_{<p} (x) E_10 (x) sigma_z (x) sigma_z (x) ...
// so {phi_p, phi_dag_q} = delta_pq I and {phi_p, phi_q} = 0 exactly.
struct FermionOperatorSet {
    std::vector<LinearOperator> phi;      // annihilators, p = 0..N-1
    std::vector<LinearOperator> phi_dag;  // creators
};

FermionOperatorSet jw_operators(const LatticeSpec& spec);

// Kogut-Susskind Hamiltonian of the staggered Schwinger model on the open
// chain, with e^{-i theta_p} identified with V_{p+1/2}:
//   H_S = (i/2a) sum_p (phi_dag_{p+1} V_{p+1/2} phi_p - h.c.)
//       + m sum_p (-1)^p w_p phi_dag_p phi_p
//       + (a g^2/2) sum_p L_p^2
// Hopping and electric sums run over the N-1 links, the mass sum over all
// sites; (-1)^p is +1 at p = 0. Boundary convention: w_p = 1/2 at p = 0 and
// p = N-1 (1 in the bulk) — the edge sites sit under one gate per automaton
// step instead of two, and this weighting makes H the exact first-order
// generator of G on the finite chain. Hermitian by construction.
LinearOperator build_hs(const LatticeSpec& spec, double lattice_spacing_a);

// First-order Hamiltonian of the automaton,
//   H_QCA = sum_p [ (i/2)(phi_dag_{p+1} phi_p V_{p+1/2} - h.c.)
//                 + m (-1)^p w_p phi_dag_p phi_p + (g^2/2) L_p^2 ],
// with the same edge mass weighting as build_hs; coincides with build_hs at
// a = 1.
LinearOperator build_hqca(const LatticeSpec& spec);

// Frobenius residual of the fermionic form of the gate,
//   W~_p = phi_p phi_dag_p phi_{p+1} phi_dag_{p+1}
//        + e^{-i zeta} sin(theta) phi_p phi_dag_p phi_dag_{p+1} phi_{p+1}
//        + e^{+i zeta} sin(theta) phi_dag_p phi_p phi_{p+1} phi_dag_{p+1}
//        - cos(theta) V phi_p phi_dag_{p+1}
//        - cos(theta) V^dag phi_dag_p phi_{p+1}
//        + phi_dag_p phi_p phi_dag_{p+1} phi_{p+1}
// against the embedded gate I (x) W_p (x) I. conjugated = true compares the
// entrywise-conjugated expression against W*_p. Contract: < 1e-12.
double check_wtilde(const LatticeSpec& spec, const GateParams& params, int p,
                    bool conjugated = false);

// Frobenius norm of
//   phi_dag_p phi_p phi_{p+1} phi_dag_{p+1}
//   - phi_p phi_dag_p phi_dag_{p+1} phi_{p+1} - (phi_dag_p phi_p - phi_dag_{p+1} phi_{p+1}),
// an exact operator identity (0 to machine precision).
double mass_identity_check(const LatticeSpec& spec, int p);

} // namespace qca
