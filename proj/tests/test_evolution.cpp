#include <cmath>
#include <cstring>
#include <numbers>

#include "doctest.h"
#include "qca/evolution.hpp"
#include "qca/rng.hpp"

using namespace qca;

namespace {

double unitarity_defect(const LinearOperator& U) {
    const LinearOperator id = LinearOperator::identity(U.dim());
    return U.adjoint().compose(U).add(id.scale(cplx(-1.0, 0.0))).frobenius_norm();
}

std::vector<cplx> random_state(const LatticeSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> amp(static_cast<std::size_t>(spec.dim()));
    double norm2 = 0.0;
    for (auto& a : amp) {
        a = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        norm2 += std::norm(a);
    }
    for (auto& a : amp) a /= std::sqrt(norm2);
    return amp;
}

} // namespace

TEST_SUITE("evolution") {

TEST_CASE("trivial step: theta=pi/2, zeta=0, g=0 gives the identity") {
    LatticeSpec spec(4, 1, TruncationMode::CyclicWrap);
    spec.coupling = 0.0;
    GateParams params;
    params.theta = std::numbers::pi / 2;
    const LinearOperator G = build_step(spec, params);
    CHECK(G.add(LinearOperator::identity(spec.dim()).scale(cplx(-1.0, 0.0)))
              .frobenius_norm() < 1e-14);
}

TEST_CASE("N=2 step structure: empty odd layer, interaction applied twice") {
    LatticeSpec spec(2, 1, TruncationMode::CyclicWrap);
    spec.coupling = 1.3;  // makes D non-trivial so D vs D^2 is visible
    spec.epsilon = 0.2;
    GateParams params;
    params.theta = 0.8;
    params.zeta = 0.3;
    const LinearOperator G = build_step(spec, params);
    const LinearOperator D = interaction_layer(spec);
    const LinearOperator W0c = build_gate(0, params, spec, true);
    const LinearOperator expected = W0c.compose(D).compose(D);
    CHECK(G.add(expected.scale(cplx(-1.0, 0.0))).frobenius_norm() < 1e-14);
    const LinearOperator single_d = W0c.compose(D);
    CHECK(G.add(single_d.scale(cplx(-1.0, 0.0))).frobenius_norm() > 1e-3);
}

TEST_CASE("G is unitary in CyclicWrap mode (N=4, Lambda=1, dim 432)") {
    LatticeSpec spec(4, 1, TruncationMode::CyclicWrap);
    spec.mass = 0.7;
    spec.coupling = 1.1;
    spec.epsilon = 0.05;
    const LinearOperator G = build_step(spec, scaling_params(spec));
    CHECK(unitarity_defect(G) < 1e-12);
}

TEST_CASE("G commutes with total fermion number") {
    LatticeSpec spec(4, 1, TruncationMode::CyclicWrap);
    spec.mass = 0.4;
    spec.coupling = 0.9;
    spec.epsilon = 0.1;
    const LinearOperator G = build_step(spec, scaling_params(spec));
    const cplx n[2][2] = {{0.0, 0.0}, {0.0, 1.0}};
    LinearOperator total = qubit_op(n, 0, spec);
    for (int p = 1; p < spec.num_sites; ++p) total = total.add(qubit_op(n, p, spec));
    CHECK(G.compose(total).add(total.compose(G).scale(cplx(-1.0, 0.0))).frobenius_norm() <
          1e-13);
}

TEST_CASE("vacuum is a fixed point") {
    LatticeSpec spec(4, 1, TruncationMode::CyclicWrap);
    spec.mass = 0.0;
    spec.coupling = 0.0;
    spec.epsilon = 0.05;
    const LinearOperator G = build_step(spec, scaling_params(spec));
    const StateVector vac = basis_state(vacuum_label(spec), spec);
    const StateVector out = step(vac, G);
    for (std::int64_t i = 0; i < spec.dim(); ++i)
        CHECK(std::abs(out.amp[i] - vac.amp[i]) < 1e-15);

    // Holds with mass and coupling switched on as well: the |00> block is
    // untouched by every gate and links-0 carries no interaction phase.
    spec.mass = 1.0;
    spec.coupling = 2.0;
    const LinearOperator G2 = build_step(spec, scaling_params(spec));
    const StateVector out2 = step(vac, G2);
    for (std::int64_t i = 0; i < spec.dim(); ++i)
        CHECK(std::abs(out2.amp[i] - vac.amp[i]) < 1e-15);
}

TEST_CASE("theta=0 transport: one step moves a fermion two sites right") {
    // Single fermion at site 1, links 0. The odd gate hops it to site 2
    // lowering link 1, the even gate hops it to site 3 lowering link 2.
    LatticeSpec spec(4, 1, TruncationMode::CyclicWrap);
    GateParams params;  // theta = 0, zeta = 0
    const LinearOperator G = build_step(spec, params);
    const StateVector in = basis_state({{0, 1, 0, 0}, {0, 0, 0}}, spec);
    const StateVector out = step(in, G);
    const std::int64_t target = flat_index({{0, 0, 0, 1}, {0, -1, -1}}, spec);
    CHECK(std::abs(out.amp[target] - cplx(1.0, 0.0)) < 1e-15);
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("measure: spec-pinned observable values") {
    LatticeSpec spec(2, 1, TruncationMode::CyclicWrap);

    SUBCASE("vacuum") {
        const Observables obs = measure(basis_state(vacuum_label(spec), spec), spec);
        CHECK(obs.total_n == 0.0);
        CHECK(obs.electric_energy == 0.0);
        CHECK(obs.norm == doctest::Approx(1.0).epsilon(1e-15));
    }

    SUBCASE("one-hot link +1 at g=2 contributes electric energy 2") {
        spec.coupling = 2.0;
        const Observables obs = measure(basis_state({{0, 0}, {+1}}, spec), spec);
        CHECK(obs.electric_energy == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(obs.L[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(obs.L2[0] == doctest::Approx(1.0).epsilon(1e-15));
    }

    SUBCASE("symmetric link superposition: <L>=0, <L^2>=1") {
        StateVector s(spec);
        const double r = 1.0 / std::sqrt(2.0);
        s.amp[flat_index({{0, 0}, {+1}}, spec)] = r;
        s.amp[flat_index({{0, 0}, {-1}}, spec)] = r;
        const Observables obs = measure(s, spec);
        CHECK(std::abs(obs.L[0]) < 1e-15);
        CHECK(obs.L2[0] == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("staggered charge signs") {
        LatticeSpec four(4, 1, TruncationMode::CyclicWrap);
        const Observables obs =
            measure(basis_state({{0, 1, 0, 1}, {0, 0, 0}}, four), four);
        CHECK(obs.total_n == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(obs.staggered_charge == doctest::Approx(-2.0).epsilon(1e-15));
        CHECK(obs.n[1] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(obs.n[0] == 0.0);
    }
}

TEST_CASE("matrix-free applier equals the dense step operator") {
    Rng rng(99);
    for (TruncationMode mode : {TruncationMode::CyclicWrap, TruncationMode::HardCutoff}) {
        LatticeSpec spec(4, 1, mode);
        spec.mass = rng.uniform(0.0, 1.0);
        spec.coupling = rng.uniform(0.0, 2.0);
        spec.epsilon = rng.uniform(0.01, 0.2);
        const GateParams params = scaling_params(spec);
        const LinearOperator G = build_step(spec, params);
        const StepApplier applier(spec, params);

        std::vector<cplx> amp = random_state(spec, 7 + static_cast<int>(mode));
        const std::vector<cplx> dense = G.apply(amp);
        applier.apply_step(amp);
        double max_diff = 0.0;
        for (std::size_t i = 0; i < amp.size(); ++i)
            max_diff = std::max(max_diff, std::abs(amp[i] - dense[i]));
        CHECK(max_diff < 1e-14);
    }
}

TEST_CASE("norm behavior: constant under wrap, non-increasing under hard cutoff") {
    GateParams params;
    params.theta = 0.3;  // strong hopping so the edge actually annihilates

    LatticeSpec cyc(4, 1, TruncationMode::CyclicWrap);
    StateVector s(cyc);
    s.amp = random_state(cyc, 5);
    StepApplier ac(cyc, params);
    const EvolutionReport rc = run_evolution(s, ac, 4);
    CHECK(rc.norms.size() == 5);
    for (double n : rc.norms) CHECK(std::abs(n - 1.0) < 1e-12);

    LatticeSpec hard(4, 1, TruncationMode::HardCutoff);
    StateVector h = basis_state({{0, 1, 0, 0}, {-1, -1, -1}}, hard);
    StepApplier ah(hard, params);
    const EvolutionReport rh = run_evolution(h, ah, 4);
    for (std::size_t i = 1; i < rh.norms.size(); ++i)
        CHECK(rh.norms[i] <= rh.norms[i - 1] + 1e-15);
    CHECK(rh.norms.back() < 1.0 - 1e-3);
}

TEST_CASE("serial and parallel kernels agree to the last bit") {
    LatticeSpec spec(4, 2, TruncationMode::CyclicWrap);
    spec.mass = 0.8;
    spec.coupling = 1.2;
    spec.epsilon = 0.07;
    const GateParams params = scaling_params(spec);

    std::vector<cplx> a = random_state(spec, 31);
    std::vector<cplx> b = a;
    const StepApplier serial(spec, params, Execution::Serial);
    const StepApplier parallel(spec, params, Execution::Parallel);
    for (int s = 0; s < 3; ++s) {
        serial.apply_step(a);
        parallel.apply_step(b);
    }
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(cplx)) == 0);

    const Observables oa = measure_amp(a, spec, Execution::Serial);
    const Observables ob = measure_amp(b, spec, Execution::Parallel);
    CHECK(std::memcmp(oa.n.data(), ob.n.data(), oa.n.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(oa.L.data(), ob.L.data(), oa.L.size() * sizeof(double)) == 0);
    CHECK(oa.norm == ob.norm);
    CHECK(oa.electric_energy == ob.electric_energy);
}

TEST_CASE("sparse stepper matches the dense path on a basis state") {
    LatticeSpec spec(4, 2, TruncationMode::CyclicWrap);
    spec.mass = 0.5;
    spec.coupling = 0.8;
    spec.epsilon = 0.1;
    const GateParams params = scaling_params(spec);

    StateVector dense = basis_state({{0, 1, 0, 0}, {0, 0, 0}}, spec);
    StepApplier applier(spec, params);
    SparseState sparse;
    sparse[flat_index({{0, 1, 0, 0}, {0, 0, 0}}, spec)] = 1.0;
    SparseStepper stepper(spec, params);

    for (int s = 0; s < 2; ++s) {
        applier.apply_step(dense.amp);
        stepper.apply_step(sparse);
    }
    double max_diff = 0.0;
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        cplx sv(0.0, 0.0);
        const auto it = sparse.find(i);
        if (it != sparse.end()) sv = it->second;
        max_diff = std::max(max_diff, std::abs(sv - dense.amp[i]));
    }
    CHECK(max_diff < 1e-15);
}

TEST_CASE("run_evolution records the initial state first") {
    LatticeSpec spec(2, 1, TruncationMode::CyclicWrap);
    spec.mass = 1.0;
    spec.epsilon = 0.05;
    StateVector s = basis_state({{1, 0}, {0}}, spec);
    StepApplier applier(spec, scaling_params(spec));
    const EvolutionReport report = run_evolution(s, applier, 3);
    CHECK(report.observables.size() == 4);
    CHECK(report.observables[0].n[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(report.observables[0].total_n == doctest::Approx(1.0).epsilon(1e-15));
    // Fermion number is conserved step by step.
    for (const Observables& obs : report.observables)
        CHECK(obs.total_n == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("step rejects dimension mismatch") {
    LatticeSpec spec(2, 1, TruncationMode::CyclicWrap);
    LatticeSpec other(2, 2, TruncationMode::CyclicWrap);
    const LinearOperator G = build_step(spec, GateParams{});
    const StateVector s(other);
    CHECK_THROWS_AS(step(s, G), ShapeError);
}

} // TEST_SUITE
