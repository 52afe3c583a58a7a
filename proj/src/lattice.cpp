#include "qca/lattice.hpp"

#include <cmath>
#include <string>

namespace qca {

namespace {

// d^(N-1) with overflow guard: anything beyond 2^62 indices is unaddressable
// regardless of budget.
std::int64_t checked_links_dim(int num_links, int d) {
    unsigned __int128 v = 1;
    for (int j = 0; j < num_links; ++j) {
        v *= static_cast<unsigned>(d);
        if (v > (static_cast<unsigned __int128>(1) << 62))
            throw BudgetError("link space dimension exceeds 2^62");
    }
    return static_cast<std::int64_t>(v);
}

} // namespace

LatticeSpec::LatticeSpec(int num_sites_, int cutoff_, TruncationMode mode,
                         std::int64_t budget_)
    : num_sites(num_sites_),
      num_links(num_sites_ - 1),
      cutoff(cutoff_),
      truncation_mode(mode),
      budget(budget_) {
    if (num_sites < 2 || num_sites % 2 != 0)
        throw ConfigError("num_sites must be even and >= 2");
    if (cutoff < 1) throw ConfigError("cutoff must be >= 1");
    if (budget < 1) throw ConfigError("budget must be positive");
    links_dim_ = checked_links_dim(num_links, link_dim());
    unsigned __int128 full =
        (static_cast<unsigned __int128>(1) << num_sites) * static_cast<unsigned __int128>(links_dim_);
    if (full > (static_cast<unsigned __int128>(1) << 62))
        throw BudgetError("Hilbert space dimension exceeds 2^62");
    dim_ = static_cast<std::int64_t>(full);
    if (dim_ > budget)
        throw BudgetError("Hilbert space dimension " + std::to_string(dim_) +
                          " exceeds budget " + std::to_string(budget));
}

void validate_physics(const LatticeSpec& spec) {
    if (!(spec.mass >= 0.0)) throw DomainError("mass must be >= 0");
    if (!(spec.coupling >= 0.0)) throw DomainError("coupling must be >= 0");
    if (!(spec.speed > 0.0 && spec.speed <= 1.0))
        throw DomainError("speed must lie in (0, 1]");
    if (!(spec.epsilon > 0.0)) throw DomainError("epsilon must be > 0");
    if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0))
        throw DomainError("alpha must lie in [0, 1]");
}

std::int64_t flat_index(const BasisLabel& label, const LatticeSpec& spec) {
    if (static_cast<int>(label.occupations.size()) != spec.num_sites ||
        static_cast<int>(label.links.size()) != spec.num_links)
        throw BoundsError("label size does not match spec");
    std::int64_t occ = 0;
    for (int p = 0; p < spec.num_sites; ++p) {
        if (label.occupations[p] > 1) throw BoundsError("occupation bit out of range");
        occ = occ * 2 + label.occupations[p];
    }
    std::int64_t lnk = 0;
    for (int j = 0; j < spec.num_links; ++j) {
        int l = label.links[j];
        if (l < -spec.cutoff || l > spec.cutoff)
            throw BoundsError("link value out of range");
        lnk = lnk * spec.link_dim() + (l + spec.cutoff);
    }
    return occ * spec.links_dim() + lnk;
}

BasisLabel unflatten(std::int64_t index, const LatticeSpec& spec) {
    if (index < 0 || index >= spec.dim()) throw BoundsError("flat index out of range");
    BasisLabel label;
    label.occupations.resize(spec.num_sites);
    label.links.resize(spec.num_links);
    std::int64_t occ = index / spec.links_dim();
    std::int64_t lnk = index % spec.links_dim();
    for (int p = spec.num_sites - 1; p >= 0; --p) {
        label.occupations[p] = static_cast<std::uint8_t>(occ % 2);
        occ /= 2;
    }
    for (int j = spec.num_links - 1; j >= 0; --j) {
        label.links[j] = static_cast<int>(lnk % spec.link_dim()) - spec.cutoff;
        lnk /= spec.link_dim();
    }
    return label;
}

StateVector::StateVector(const LatticeSpec& spec_) : spec(spec_) {
    amp.assign(static_cast<std::size_t>(spec.dim()), cplx(0.0, 0.0));
}

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx& a : amp) s += std::norm(a);
    return std::sqrt(s);
}

StateVector basis_state(const BasisLabel& label, const LatticeSpec& spec) {
    StateVector v(spec);
    v.amp[static_cast<std::size_t>(flat_index(label, spec))] = cplx(1.0, 0.0);
    return v;
}

BasisLabel vacuum_label(const LatticeSpec& spec) {
    BasisLabel label;
    label.occupations.assign(spec.num_sites, 0);
    label.links.assign(spec.num_links, 0);
    return label;
}

StateVector project_interior(const StateVector& state, int margin) {
    const LatticeSpec& spec = state.spec;
    if (margin < 0 || margin > spec.cutoff)
        throw BoundsError("margin must lie in [0, cutoff]");
    StateVector out = state;
    if (margin == 0) return out;
    const int d = spec.link_dim();
    const int keep = spec.cutoff - margin;  // survivors: |l| <= keep
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        std::int64_t lnk = i % spec.links_dim();
        bool inside = true;
        for (int j = 0; j < spec.num_links; ++j) {
            int l = static_cast<int>(lnk % d) - spec.cutoff;
            lnk /= d;
            if (l < -keep || l > keep) {
                inside = false;
                break;
            }
        }
        if (!inside) out.amp[static_cast<std::size_t>(i)] = cplx(0.0, 0.0);
    }
    return out;
}

} // namespace qca
