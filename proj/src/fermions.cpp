#include "qca/fermions.hpp"

#include <cmath>

namespace qca {

namespace {

// Direct triplet construction of phi_p / phi_dag_p: one entry per column.
// The sigma_z string on sites q > p contributes (-1)^{sum of their bits}.
LinearOperator jw_single(int p, bool dagger, const LatticeSpec& spec) {
    const int N = spec.num_sites;
    const std::int64_t stride = (std::int64_t(1) << (N - 1 - p)) * spec.links_dim();
    std::vector<LinearOperator::Triplet> entries;
    entries.reserve(static_cast<std::size_t>(spec.dim() / 2));
    for (std::int64_t col = 0; col < spec.dim(); ++col) {
        const std::int64_t occ = col / spec.links_dim();
        const int bit = static_cast<int>((occ >> (N - 1 - p)) & 1);
        if (dagger ? bit == 1 : bit == 0) continue;
        int string_bits = 0;
        for (int q = p + 1; q < N; ++q) string_bits += static_cast<int>((occ >> (N - 1 - q)) & 1);
        const double sign = (string_bits % 2 == 0) ? 1.0 : -1.0;
        const std::int64_t row = dagger ? col + stride : col - stride;
        entries.emplace_back(row, col, cplx(sign, 0.0));
    }
    return LinearOperator::from_triplets(spec.dim(), entries);
}

// Staggered mass coefficient m(-1)^p w_p with w_p = 1/2 at the chain ends.
// On the open chain each edge site sits under one gate per step instead of
// two, so the automaton's first-order generator carries half the mass there;
// both Hamiltonian builds adopt that boundary convention (bulk unchanged).
double mass_weight(int p, const LatticeSpec& spec) {
    return (p == 0 || p == spec.num_sites - 1) ? 0.5 : 1.0;
}

} // namespace

FermionOperatorSet jw_operators(const LatticeSpec& spec) {
    FermionOperatorSet set;
    set.phi.reserve(static_cast<std::size_t>(spec.num_sites));
    set.phi_dag.reserve(static_cast<std::size_t>(spec.num_sites));
    for (int p = 0; p < spec.num_sites; ++p) {
        set.phi.push_back(jw_single(p, false, spec));
        set.phi_dag.push_back(jw_single(p, true, spec));
    }
    return set;
}

LinearOperator build_hs(const LatticeSpec& spec, double lattice_spacing_a) {
    if (spec.num_sites % 2 != 0) throw ConfigError("num_sites must be even");
    if (!(lattice_spacing_a > 0.0)) throw DomainError("lattice spacing must be > 0");
    const double a = lattice_spacing_a;
    const double m = spec.mass;
    const double g2 = spec.coupling * spec.coupling;
    const FermionOperatorSet f = jw_operators(spec);

    LinearOperator H = LinearOperator::identity(spec.dim()).scale(cplx(0.0, 0.0));
    for (int p = 0; p < spec.num_links; ++p) {
        const LinearOperator V = link_op(LinkOperatorKind::Lower, p, spec);
        const LinearOperator Vd = link_op(LinkOperatorKind::Raise, p, spec);
        // (i/2a) phi_dag_{p+1} V phi_p and its written-out h.c.
        H = H.add(f.phi_dag[p + 1].compose(V).compose(f.phi[p]).scale(cplx(0.0, 0.5 / a)));
        H = H.add(f.phi_dag[p].compose(Vd).compose(f.phi[p + 1]).scale(cplx(0.0, -0.5 / a)));
        const LinearOperator L = link_op(LinkOperatorKind::Number, p, spec);
        H = H.add(L.compose(L).scale(cplx(0.5 * a * g2, 0.0)));
    }
    for (int p = 0; p < spec.num_sites; ++p) {
        const double sign = (p % 2 == 0) ? 1.0 : -1.0;
        H = H.add(f.phi_dag[p].compose(f.phi[p]).scale(
            cplx(m * sign * mass_weight(p, spec), 0.0)));
    }
    return H;
}

LinearOperator build_hqca(const LatticeSpec& spec) {
    if (spec.num_sites % 2 != 0) throw ConfigError("num_sites must be even");
    const double m = spec.mass;
    const double g2 = spec.coupling * spec.coupling;
    const FermionOperatorSet f = jw_operators(spec);

    LinearOperator H = LinearOperator::identity(spec.dim()).scale(cplx(0.0, 0.0));
    for (int p = 0; p < spec.num_links; ++p) {
        const LinearOperator V = link_op(LinkOperatorKind::Lower, p, spec);
        const LinearOperator hop =
            f.phi_dag[p + 1].compose(f.phi[p]).compose(V).scale(cplx(0.0, 0.5));
        H = H.add(hop).add(hop.adjoint());
        const LinearOperator L = link_op(LinkOperatorKind::Number, p, spec);
        H = H.add(L.compose(L).scale(cplx(0.5 * g2, 0.0)));
    }
    for (int p = 0; p < spec.num_sites; ++p) {
        const double sign = (p % 2 == 0) ? 1.0 : -1.0;
        H = H.add(f.phi_dag[p].compose(f.phi[p]).scale(
            cplx(m * sign * mass_weight(p, spec), 0.0)));
    }
    return H;
}

double check_wtilde(const LatticeSpec& spec, const GateParams& params, int p, bool conjugated) {
    if (p < 0 || p >= spec.num_sites - 1) throw BoundsError("pair index out of range");
    const FermionOperatorSet f = jw_operators(spec);
    const LinearOperator V = link_op(LinkOperatorKind::Lower, p, spec);
    const LinearOperator Vd = link_op(LinkOperatorKind::Raise, p, spec);
    const double s = std::sin(params.theta);
    const double co = std::cos(params.theta);
    cplx mass_minus = std::exp(cplx(0.0, -params.zeta)) * s;
    cplx mass_plus = std::exp(cplx(0.0, params.zeta)) * s;
    if (conjugated) std::swap(mass_minus, mass_plus);  // phi and V are real

    const LinearOperator n_p = f.phi_dag[p].compose(f.phi[p]);
    const LinearOperator h_p = f.phi[p].compose(f.phi_dag[p]);
    const LinearOperator n_p1 = f.phi_dag[p + 1].compose(f.phi[p + 1]);
    const LinearOperator h_p1 = f.phi[p + 1].compose(f.phi_dag[p + 1]);

    LinearOperator T = h_p.compose(h_p1);
    T = T.add(h_p.compose(n_p1).scale(mass_minus));
    T = T.add(n_p.compose(h_p1).scale(mass_plus));
    T = T.add(V.compose(f.phi[p]).compose(f.phi_dag[p + 1]).scale(cplx(-co, 0.0)));
    T = T.add(Vd.compose(f.phi_dag[p]).compose(f.phi[p + 1]).scale(cplx(-co, 0.0)));
    T = T.add(n_p.compose(n_p1));

    const LinearOperator W = build_gate(p, params, spec, conjugated);
    return T.add(W.scale(cplx(-1.0, 0.0))).frobenius_norm();
}

double mass_identity_check(const LatticeSpec& spec, int p) {
    if (p < 0 || p >= spec.num_sites - 1) throw BoundsError("pair index out of range");
    const FermionOperatorSet f = jw_operators(spec);
    const LinearOperator n_p = f.phi_dag[p].compose(f.phi[p]);
    const LinearOperator h_p = f.phi[p].compose(f.phi_dag[p]);
    const LinearOperator n_p1 = f.phi_dag[p + 1].compose(f.phi[p + 1]);
    const LinearOperator h_p1 = f.phi[p + 1].compose(f.phi_dag[p + 1]);
    LinearOperator R = n_p.compose(h_p1);
    R = R.add(h_p.compose(n_p1).scale(cplx(-1.0, 0.0)));
    R = R.add(n_p.scale(cplx(-1.0, 0.0)));
    R = R.add(n_p1);
    return R.frobenius_norm();
}

} // namespace qca
