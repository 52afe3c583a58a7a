#include <cmath>

#include "doctest.h"
#include "qca/lattice.hpp"

using namespace qca;

TEST_SUITE("lattice") {

TEST_CASE("spec geometry and dimensions") {
    LatticeSpec spec(4, 2, TruncationMode::CyclicWrap);
    CHECK(spec.num_links == 3);
    CHECK(spec.link_dim() == 5);
    CHECK(spec.links_dim() == 125);
    CHECK(spec.dim() == 16 * 125);
}

TEST_CASE("spec constructor rejects bad geometry") {
    CHECK_THROWS_AS(LatticeSpec(3, 1, TruncationMode::CyclicWrap), ConfigError);
    CHECK_THROWS_AS(LatticeSpec(0, 1, TruncationMode::CyclicWrap), ConfigError);
    CHECK_THROWS_AS(LatticeSpec(4, 0, TruncationMode::CyclicWrap), ConfigError);
}

TEST_CASE("dimension budget guardrail") {
    // 2^8 * 21^7 = 256 * 1801088541 exceeds the default 2^24 budget.
    CHECK_THROWS_AS(LatticeSpec(8, 10, TruncationMode::CyclicWrap), BudgetError);
    // Raising the budget admits the same spec.
    const std::int64_t dim = std::int64_t(256) * 1801088541LL;
    LatticeSpec big(8, 10, TruncationMode::CyclicWrap, dim);
    CHECK(big.dim() == dim);
    CHECK_THROWS_AS(LatticeSpec(8, 10, TruncationMode::CyclicWrap, dim - 1), BudgetError);
}

TEST_CASE("physics validation") {
    LatticeSpec spec(2, 1, TruncationMode::CyclicWrap);
    CHECK_NOTHROW(validate_physics(spec));
    spec.mass = -1.0;
    CHECK_THROWS_AS(validate_physics(spec), DomainError);
    spec.mass = 0.0;
    spec.speed = 0.0;
    CHECK_THROWS_AS(validate_physics(spec), DomainError);
    spec.speed = 1.5;
    CHECK_THROWS_AS(validate_physics(spec), DomainError);
    spec.speed = 1.0;
    spec.alpha = 1.2;
    CHECK_THROWS_AS(validate_physics(spec), DomainError);
    spec.alpha = 1.0;
    spec.epsilon = 0.0;
    CHECK_THROWS_AS(validate_physics(spec), DomainError);
}

TEST_CASE("flat_index: N=2 Lambda=1 enumeration") {
    LatticeSpec spec(2, 1, TruncationMode::CyclicWrap);
    CHECK(spec.dim() == 12);
    CHECK(flat_index({{0, 0}, {-1}}, spec) == 0);
    CHECK(flat_index({{0, 0}, {+1}}, spec) == 2);
    CHECK(flat_index({{1, 1}, {+1}}, spec) == 11);
}

TEST_CASE("unflatten inverts the N=2 enumeration") {
    LatticeSpec spec(2, 1, TruncationMode::CyclicWrap);
    const BasisLabel first = unflatten(0, spec);
    CHECK(first.occupations == std::vector<std::uint8_t>{0, 0});
    CHECK(first.links == std::vector<int>{-1});
    const BasisLabel last = unflatten(11, spec);
    CHECK(last.occupations == std::vector<std::uint8_t>{1, 1});
    CHECK(last.links == std::vector<int>{+1});
}

TEST_CASE("flat_index/unflatten bijection, exhaustive") {
    for (TruncationMode mode : {TruncationMode::HardCutoff, TruncationMode::CyclicWrap}) {
        LatticeSpec spec(4, 1, mode);  // dim 432
        for (std::int64_t i = 0; i < spec.dim(); ++i) {
            const BasisLabel label = unflatten(i, spec);
            CHECK(flat_index(label, spec) == i);
            for (int p = 0; p < spec.num_sites; ++p)
                CHECK(occ_bit(i, p, spec) == label.occupations[p]);
            for (int j = 0; j < spec.num_links; ++j)
                CHECK(link_value(i, j, spec) == label.links[j]);
        }
    }
}

TEST_CASE("flat_index bounds checking") {
    LatticeSpec spec(2, 1, TruncationMode::CyclicWrap);
    CHECK_THROWS_AS(flat_index({{0, 0}, {2}}, spec), BoundsError);
    CHECK_THROWS_AS(flat_index({{0, 2}, {0}}, spec), BoundsError);
    CHECK_THROWS_AS(flat_index({{0}, {0}}, spec), BoundsError);
    CHECK_THROWS_AS(unflatten(12, spec), BoundsError);
    CHECK_THROWS_AS(unflatten(-1, spec), BoundsError);
}

TEST_CASE("basis_state is one-hot and orthonormal") {
    LatticeSpec spec(2, 1, TruncationMode::CyclicWrap);
    const StateVector vac = basis_state(vacuum_label(spec), spec);
    CHECK(vac.norm() == doctest::Approx(1.0).epsilon(1e-15));
    int nonzero = 0;
    for (const cplx& a : vac.amp)
        if (a != cplx(0.0, 0.0)) ++nonzero;
    CHECK(nonzero == 1);
    CHECK(vac.amp[flat_index({{0, 0}, {0}}, spec)] == cplx(1.0, 0.0));

    const StateVector other = basis_state({{1, 0}, {-1}}, spec);
    cplx overlap = 0.0;
    for (std::size_t i = 0; i < vac.amp.size(); ++i)
        overlap += std::conj(vac.amp[i]) * other.amp[i];
    CHECK(std::abs(overlap) == 0.0);
}

TEST_CASE("project_interior zeroes outer link shells") {
    LatticeSpec spec(2, 2, TruncationMode::HardCutoff);

    SUBCASE("margin 0 is the identity") {
        StateVector s(spec);
        for (std::size_t i = 0; i < s.amp.size(); ++i)
            s.amp[i] = cplx(double(i), -0.5 * double(i));
        const StateVector out = project_interior(s, 0);
        for (std::size_t i = 0; i < s.amp.size(); ++i) CHECK(out.amp[i] == s.amp[i]);
    }

    SUBCASE("margin = Lambda keeps only links 0") {
        StateVector s(spec);
        for (auto& a : s.amp) a = 1.0;
        const StateVector out = project_interior(s, 2);
        for (std::int64_t i = 0; i < spec.dim(); ++i) {
            const bool interior = link_value(i, 0, spec) == 0;
            CHECK(out.amp[i] == (interior ? cplx(1.0, 0.0) : cplx(0.0, 0.0)));
        }
    }

    SUBCASE("one-hot at the cutoff shell dies at margin 1") {
        const StateVector s = basis_state({{0, 0}, {+2}}, spec);
        const StateVector out = project_interior(s, 1);
        CHECK(out.norm() == 0.0);
    }

    SUBCASE("idempotent and norm-nonincreasing") {
        StateVector s(spec);
        for (std::size_t i = 0; i < s.amp.size(); ++i)
            s.amp[i] = cplx(std::sin(1.0 + double(i)), std::cos(2.0 * double(i)));
        const StateVector once = project_interior(s, 1);
        const StateVector twice = project_interior(once, 1);
        CHECK(once.norm() <= s.norm());
        for (std::size_t i = 0; i < s.amp.size(); ++i) CHECK(twice.amp[i] == once.amp[i]);
    }

    SUBCASE("margin out of range") {
        StateVector s(spec);
        CHECK_THROWS_AS(project_interior(s, 3), BoundsError);
        CHECK_THROWS_AS(project_interior(s, -1), BoundsError);
    }
}

} // TEST_SUITE
