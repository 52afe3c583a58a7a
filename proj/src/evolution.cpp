#include "qca/evolution.hpp"

#include <algorithm>
#include <cmath>

namespace qca {

namespace {

struct PairStrides {
    std::int64_t s_np;   // occupation bit of site p
    std::int64_t s_np1;  // occupation bit of site p+1
    std::int64_t s_l;    // link digit p
};

PairStrides pair_strides(const LatticeSpec& spec, int p) {
    PairStrides s;
    s.s_np = (std::int64_t(1) << (spec.num_sites - 1 - p)) * spec.links_dim();
    s.s_np1 = (std::int64_t(1) << (spec.num_sites - 2 - p)) * spec.links_dim();
    s.s_l = 1;
    for (int j = spec.num_links - 1; j > p; --j) s.s_l *= spec.link_dim();
    return s;
}

std::vector<cplx> interaction_phase_table(const LatticeSpec& spec) {
    const double delta_t = spec.epsilon;
    const double delta_x = std::pow(spec.epsilon, 1.0 - spec.alpha);
    const double g2 = spec.coupling * spec.coupling;
    std::vector<cplx> ph(static_cast<std::size_t>(spec.link_dim()));
    for (int u = 0; u < spec.link_dim(); ++u) {
        const double l = u - spec.cutoff;
        ph[static_cast<std::size_t>(u)] =
            std::exp(cplx(0.0, -0.5 * delta_x * delta_t * g2 * l * l));
    }
    return ph;
}

cplx diag_phase_of(std::int64_t index, const LatticeSpec& spec, const std::vector<cplx>& table) {
    std::int64_t lnk = index % spec.links_dim();
    const int d = spec.link_dim();
    cplx phase(1.0, 0.0);
    for (int j = 0; j < spec.num_links; ++j) {
        phase *= table[static_cast<std::size_t>(lnk % d)];
        lnk /= d;
    }
    return phase;
}

} // namespace

LinearOperator build_step(const LatticeSpec& spec, const GateParams& params) {
    const LinearOperator D = interaction_layer(spec);
    LinearOperator G = D;
    for (int p = 1; p + 1 < spec.num_sites; p += 2)
        G = build_gate(p, params, spec, false).compose(G);
    G = D.compose(G);
    for (int p = 0; p + 1 < spec.num_sites; p += 2)
        G = build_gate(p, params, spec, true).compose(G);
    return G;
}

StateVector step(const StateVector& state, const LinearOperator& G) {
    return G.apply(state);
}

StepApplier::StepApplier(const LatticeSpec& spec, const GateParams& params, Execution exec)
    : spec_(spec), params_(params), exec_(exec), diag_phase_(interaction_phase_table(spec)) {}

void StepApplier::apply_interaction(std::vector<cplx>& amp) const {
    if (static_cast<std::int64_t>(amp.size()) != spec_.dim())
        throw ShapeError("amplitude vector does not match spec dimension");
    if (spec_.coupling == 0.0) return;
    const std::int64_t dim = spec_.dim();
    auto body = [&](std::int64_t i) {
        amp[static_cast<std::size_t>(i)] *= diag_phase_of(i, spec_, diag_phase_);
    };
    if (exec_ == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < dim; ++i) body(i);
    } else {
        for (std::int64_t i = 0; i < dim; ++i) body(i);
    }
}

void StepApplier::apply_pair(std::vector<cplx>& amp, int p, const GateCoeffs& g) const {
    const PairStrides st = pair_strides(spec_, p);
    const int d = spec_.link_dim();
    const bool hard = spec_.truncation_mode == TruncationMode::HardCutoff;
    const std::int64_t links_rest = spec_.links_dim() / d;  // d^(N-2)
    const std::int64_t n_outer = (std::int64_t(1) << (spec_.num_sites - 2)) * links_rest;
    const int b = spec_.num_sites - 2 - p;  // lower bit position of the pair
    const bool has_corner = g.corner != cplx(1.0, 0.0);

    auto body = [&](std::int64_t outer) {
        const std::int64_t occ_rest = outer / links_rest;
        const std::int64_t link_rest = outer % links_rest;
        const std::int64_t occ_base =
            ((occ_rest >> b) << (b + 2)) | (occ_rest & ((std::int64_t(1) << b) - 1));
        const std::int64_t link_base =
            (link_rest / st.s_l) * (st.s_l * d) + (link_rest % st.s_l);
        const std::int64_t base = occ_base * spec_.links_dim() + link_base;
        const std::int64_t i01 = base + st.s_np1;
        const std::int64_t i10 = base + st.s_np;

        auto rotate = [&](std::int64_t ia, std::int64_t ib) {
            const cplx a = amp[static_cast<std::size_t>(ia)];
            const cplx bb = amp[static_cast<std::size_t>(ib)];
            amp[static_cast<std::size_t>(ia)] = g.d01 * a + g.h_to01 * bb;
            amp[static_cast<std::size_t>(ib)] = g.h_to10 * a + g.d10 * bb;
        };

        if (g.shifts_link) {
            // closed pairs {|01,l>, |10,l+1>}, plus the seam pair or the
            // unpaired edge amplitudes
            for (int u = 0; u + 1 < d; ++u)
                rotate(i01 + u * st.s_l, i10 + (u + 1) * st.s_l);
            if (hard) {
                amp[static_cast<std::size_t>(i01 + (d - 1) * st.s_l)] *= g.d01;
                amp[static_cast<std::size_t>(i10)] *= g.d10;
            } else {
                rotate(i01 + (d - 1) * st.s_l, i10);
            }
        } else {
            for (int u = 0; u < d; ++u) rotate(i01 + u * st.s_l, i10 + u * st.s_l);
        }
        if (has_corner) {
            const std::int64_t i11 = base + st.s_np + st.s_np1;
            for (int u = 0; u < d; ++u)
                amp[static_cast<std::size_t>(i11 + u * st.s_l)] *= g.corner;
        }
    };

    if (exec_ == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t outer = 0; outer < n_outer; ++outer) body(outer);
    } else {
        for (std::int64_t outer = 0; outer < n_outer; ++outer) body(outer);
    }
}

void StepApplier::apply_gate_layer(std::vector<cplx>& amp, int parity) const {
    if (static_cast<std::int64_t>(amp.size()) != spec_.dim())
        throw ShapeError("amplitude vector does not match spec dimension");
    const bool conjugated = (parity == 0);  // even layer carries W*
    const GateCoeffs g = gate_coeffs(params_, conjugated);
    for (int p = parity; p + 1 < spec_.num_sites; p += 2) apply_pair(amp, p, g);
}

void StepApplier::apply_step(std::vector<cplx>& amp) const {
    apply_interaction(amp);
    apply_gate_layer(amp, 1);
    apply_interaction(amp);
    apply_gate_layer(amp, 0);
}

Observables measure_amp(const std::vector<cplx>& amp, const LatticeSpec& spec, Execution exec) {
    if (static_cast<std::int64_t>(amp.size()) != spec.dim())
        throw ShapeError("amplitude vector does not match spec dimension");
    const int N = spec.num_sites;
    const int NL = spec.num_links;
    const int d = spec.link_dim();
    const int K = N + 2 * NL + 1;  // n_p, L_j, L2_j, |amp|^2
    const std::int64_t chunk = 4096;
    const std::int64_t nchunks = (spec.dim() + chunk - 1) / chunk;
    std::vector<double> partial(static_cast<std::size_t>(nchunks) * K, 0.0);

    auto body = [&](std::int64_t c) {
        double* acc = partial.data() + static_cast<std::size_t>(c) * K;
        const std::int64_t lo = c * chunk;
        const std::int64_t hi = std::min(lo + chunk, spec.dim());
        for (std::int64_t i = lo; i < hi; ++i) {
            const double w = std::norm(amp[static_cast<std::size_t>(i)]);
            if (w == 0.0) continue;
            std::int64_t occ = i / spec.links_dim();
            std::int64_t lnk = i % spec.links_dim();
            for (int p = N - 1; p >= 0; --p) {
                if (occ & 1) acc[p] += w;
                occ >>= 1;
            }
            for (int j = NL - 1; j >= 0; --j) {
                const double l = static_cast<double>(lnk % d) - spec.cutoff;
                lnk /= d;
                acc[N + j] += w * l;
                acc[N + NL + j] += w * l * l;
            }
            acc[N + 2 * NL] += w;
        }
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < nchunks; ++c) body(c);
    } else {
        for (std::int64_t c = 0; c < nchunks; ++c) body(c);
    }

    std::vector<double> total(static_cast<std::size_t>(K), 0.0);
    for (std::int64_t c = 0; c < nchunks; ++c)
        for (int k = 0; k < K; ++k)
            total[static_cast<std::size_t>(k)] += partial[static_cast<std::size_t>(c) * K + k];

    Observables obs;
    obs.n.assign(total.begin(), total.begin() + N);
    obs.L.assign(total.begin() + N, total.begin() + N + NL);
    obs.L2.assign(total.begin() + N + NL, total.begin() + N + 2 * NL);
    obs.norm = std::sqrt(total[static_cast<std::size_t>(N + 2 * NL)]);
    obs.electric_energy = 0.0;
    for (double v : obs.L2) obs.electric_energy += v;
    obs.electric_energy *= 0.5 * spec.coupling * spec.coupling;
    obs.total_n = 0.0;
    obs.staggered_charge = 0.0;
    for (int p = 0; p < N; ++p) {
        obs.total_n += obs.n[static_cast<std::size_t>(p)];
        obs.staggered_charge += (p % 2 == 0 ? 1.0 : -1.0) * obs.n[static_cast<std::size_t>(p)];
    }
    return obs;
}

Observables measure(const StateVector& state, const LatticeSpec& spec) {
    return measure_amp(state.amp, spec, Execution::Serial);
}

EvolutionReport run_evolution(StateVector& state, const StepApplier& applier, int steps,
                              bool record_observables) {
    if (steps < 0) throw ConfigError("steps must be >= 0");
    EvolutionReport report;
    auto record = [&]() {
        if (record_observables) {
            report.observables.push_back(measure(state, applier.spec()));
            report.norms.push_back(report.observables.back().norm);
        } else {
            report.norms.push_back(state.norm());
        }
    };
    record();
    for (int t = 0; t < steps; ++t) {
        applier.apply_step(state.amp);
        record();
    }
    return report;
}

SparseStepper::SparseStepper(const LatticeSpec& spec, const GateParams& params)
    : spec_(spec), params_(params), diag_phase_(interaction_phase_table(spec)) {}

void SparseStepper::apply_interaction(SparseState& state) const {
    if (spec_.coupling == 0.0) return;
    for (auto& [i, a] : state) a *= diag_phase_of(i, spec_, diag_phase_);
}

void SparseStepper::apply_gate_layer(SparseState& state, int parity) const {
    const bool conjugated = (parity == 0);
    const GateCoeffs g = gate_coeffs(params_, conjugated);
    const int d = spec_.link_dim();
    const bool hard = spec_.truncation_mode == TruncationMode::HardCutoff;
    for (int p = parity; p + 1 < spec_.num_sites; p += 2) {
        const PairStrides st = pair_strides(spec_, p);
        SparseState out;
        for (const auto& [i, a] : state) {
            const int np = static_cast<int>((i / st.s_np) % 2);
            const int np1 = static_cast<int>((i / st.s_np1) % 2);
            const int u = static_cast<int>((i / st.s_l) % d);
            if (np == np1) {
                out[i] += (np == 1) ? g.corner * a : a;
            } else if (np == 0) {  // |01, l>
                out[i] += g.d01 * a;
                int ut = g.shifts_link ? u + 1 : u;
                if (ut >= d) ut = hard ? -1 : 0;
                if (ut >= 0)
                    out[i + (st.s_np - st.s_np1) + (ut - u) * st.s_l] += g.h_to10 * a;
            } else {  // |10, l>
                out[i] += g.d10 * a;
                int ut = g.shifts_link ? u - 1 : u;
                if (ut < 0) ut = hard ? -1 : d - 1;
                if (ut >= 0)
                    out[i - (st.s_np - st.s_np1) + (ut - u) * st.s_l] += g.h_to01 * a;
            }
        }
        state = std::move(out);
    }
}

void SparseStepper::apply_step(SparseState& state) const {
    apply_interaction(state);
    apply_gate_layer(state, 1);
    apply_interaction(state);
    apply_gate_layer(state, 0);
}

} // namespace qca
