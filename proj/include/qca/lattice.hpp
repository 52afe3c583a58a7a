#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qca/errors.hpp"

namespace qca {

using cplx = std::complex<double>;

// Behavior of the link-lowering operator V at the cutoff edge l = -Lambda:
// HardCutoff annihilates (norm loss, tracked by callers), CyclicWrap maps
// |-Lambda> -> |+Lambda>, which makes V exactly unitary (a Z_{2Lambda+1}
// gauge theory).
enum class TruncationMode { HardCutoff, CyclicWrap };

// Open chain of N qubit sites p = 0..N-1 with N-1 gauge links in between
// (link j sits between sites j and j+1, i.e. at position j+1/2). Each link
// holds an integer l in [-Lambda, Lambda], so its local dimension is
// d = 2*Lambda + 1 and the composite Hilbert space has dim = 2^N * d^(N-1).
struct LatticeSpec {
    static constexpr std::int64_t kDefaultBudget = std::int64_t(1) << 24;

    int num_sites;  // N, even, >= 2
    int num_links;  // N - 1
    int cutoff;     // Lambda >= 1
    TruncationMode truncation_mode;

    // Physical parameters and scaling knobs; geometry-independent, so they
    // are plain fields. validate_physics() re-checks their domains.
    double mass = 0.0;      // m >= 0
    double coupling = 0.0;  // g >= 0
    double speed = 1.0;     // c in (0, 1]
    double epsilon = 0.01;  // eps > 0
    double alpha = 1.0;     // alpha in [0, 1]

    // Maximum number of dense complex amplitudes this spec may allocate.
    std::int64_t budget = kDefaultBudget;

    LatticeSpec(int num_sites_, int cutoff_, TruncationMode mode,
                std::int64_t budget_ = kDefaultBudget);

    int link_dim() const { return 2 * cutoff + 1; }
    std::int64_t links_dim() const { return links_dim_; }  // d^(N-1)
    std::int64_t dim() const { return dim_; }              // 2^N * d^(N-1)

  private:
    std::int64_t links_dim_;
    std::int64_t dim_;
};

// Throws DomainError if any physical parameter is outside its domain.
void validate_physics(const LatticeSpec& spec);

// One basis vector of the composite space: occupation bit per site and an
// integer per link.
struct BasisLabel {
    std::vector<std::uint8_t> occupations;  // length N, values 0/1
    std::vector<int> links;                 // length N-1, values in [-Lambda, Lambda]
};

// Mixed-radix flat index: occupations are the most significant digits (site 0
// most significant), then the links (link 0 most significant) with digit
// l + Lambda. The layout is fixed so state files interchange bit-exactly.
std::int64_t flat_index(const BasisLabel& label, const LatticeSpec& spec);
BasisLabel unflatten(std::int64_t index, const LatticeSpec& spec);

// Digit accessors on flat indices (inverse of the layout above).
inline int occ_bit(std::int64_t index, int site, const LatticeSpec& spec) {
    std::int64_t occ = index / spec.links_dim();
    return static_cast<int>((occ >> (spec.num_sites - 1 - site)) & 1);
}
inline int link_value(std::int64_t index, int link, const LatticeSpec& spec) {
    std::int64_t rest = index % spec.links_dim();
    std::int64_t stride = 1;
    for (int j = spec.num_links - 1; j > link; --j) stride *= spec.link_dim();
    return static_cast<int>((rest / stride) % spec.link_dim()) - spec.cutoff;
}

// Dense amplitude vector over the composite basis. Norm may drop below 1
// only in HardCutoff mode.
struct StateVector {
    explicit StateVector(const LatticeSpec& spec_);
    LatticeSpec spec;
    std::vector<cplx> amp;
    double norm() const;
};

// One-hot unit vector at flat_index(label).
StateVector basis_state(const BasisLabel& label, const LatticeSpec& spec);

// All-empty label: occupations 0, links 0.
BasisLabel vacuum_label(const LatticeSpec& spec);

// Zeroes every amplitude whose label has any |link| > Lambda - margin.
// Idempotent and norm-nonincreasing; margin = 0 is the identity.
StateVector project_interior(const StateVector& state, int margin);

} // namespace qca
