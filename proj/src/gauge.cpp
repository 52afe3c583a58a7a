#include "qca/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qca {

namespace {

void check_field(const GaugeField& field, const LatticeSpec& spec) {
    if (static_cast<int>(field.phi.size()) != spec.num_sites)
        throw ConfigError("gauge field must carry one angle per site");
    for (double v : field.phi)
        if (!std::isfinite(v)) throw ConfigError("gauge angles must be finite");
}

} // namespace

bool is_quantized(const GaugeField& field, const LatticeSpec& spec, double tol) {
    const double unit = 2.0 * std::numbers::pi / spec.link_dim();
    for (double v : field.phi) {
        const double r = v / unit;
        if (std::abs(r - std::round(r)) > tol) return false;
    }
    return true;
}

LinearOperator gauge_transform(const GaugeField& field, const LatticeSpec& spec) {
    check_field(field, spec);
    const int d = spec.link_dim();
    std::vector<LinearOperator::Triplet> entries;
    entries.reserve(static_cast<std::size_t>(spec.dim()));
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        double arg = 0.0;
        std::int64_t occ = i / spec.links_dim();
        std::int64_t lnk = i % spec.links_dim();
        for (int p = spec.num_sites - 1; p >= 0; --p) {
            if (occ & 1) arg += field.phi[static_cast<std::size_t>(p)];
            occ >>= 1;
        }
        for (int j = spec.num_links - 1; j >= 0; --j) {
            const double l = static_cast<double>(lnk % d) - spec.cutoff;
            lnk /= d;
            arg += l * (field.phi[static_cast<std::size_t>(j + 1)] -
                        field.phi[static_cast<std::size_t>(j)]);
        }
        entries.emplace_back(i, i, std::exp(cplx(0.0, arg)));
    }
    return LinearOperator::from_triplets(spec.dim(), entries);
}

double gauge_commutator(const GaugeField& field, const LatticeSpec& spec,
                        const GateParams& params, int margin, bool allow_unquantized) {
    check_field(field, spec);
    if (spec.truncation_mode == TruncationMode::CyclicWrap) {
        if (margin != 0) throw ConfigError("CyclicWrap gauge check uses margin = 0");
        if (!allow_unquantized && !is_quantized(field, spec))
            throw ConfigError("CyclicWrap invariance requires angles in 2*pi*Z/(2*Lambda+1)");
    } else {
        if (margin < 1) throw ConfigError("HardCutoff gauge check requires margin >= 1");
    }
    const LinearOperator G = build_step(spec, params);
    const LinearOperator P = gauge_transform(field, spec);
    LinearOperator C = P.compose(G).add(G.compose(P).scale(cplx(-1.0, 0.0)));
    if (margin > 0) C = C.compose(interior_projector(spec, margin));
    return C.frobenius_norm();
}

LinearOperator gauss_generator(int p, const LatticeSpec& spec) {
    if (p < 0 || p >= spec.num_sites) throw BoundsError("site index out of range");
    std::vector<LinearOperator::Triplet> entries;
    entries.reserve(static_cast<std::size_t>(spec.dim()));
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        double q = occ_bit(i, p, spec);
        if (p - 1 >= 0) q += link_value(i, p - 1, spec);
        if (p < spec.num_links) q -= link_value(i, p, spec);
        if (q != 0.0) entries.emplace_back(i, i, cplx(q, 0.0));
    }
    return LinearOperator::from_triplets(spec.dim(), entries);
}

namespace {

// <Q_p> for all p in one pass, plus whether support touches |l| = Lambda.
struct GaussScan {
    std::vector<double> q;
    bool seam;
};

GaussScan scan_gauss(const std::vector<cplx>& amp, const LatticeSpec& spec) {
    const int N = spec.num_sites;
    const int d = spec.link_dim();
    GaussScan scan{std::vector<double>(static_cast<std::size_t>(N), 0.0), false};
    std::vector<int> links(static_cast<std::size_t>(spec.num_links));
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        const double w = std::norm(amp[static_cast<std::size_t>(i)]);
        if (w == 0.0) continue;
        std::int64_t occ = i / spec.links_dim();
        std::int64_t lnk = i % spec.links_dim();
        for (int j = spec.num_links - 1; j >= 0; --j) {
            links[static_cast<std::size_t>(j)] = static_cast<int>(lnk % d) - spec.cutoff;
            lnk /= d;
            if (w > 1e-24 && std::abs(links[static_cast<std::size_t>(j)]) == spec.cutoff)
                scan.seam = true;
        }
        for (int p = N - 1; p >= 0; --p) {
            double q = static_cast<double>(occ & 1);
            occ >>= 1;
            if (p - 1 >= 0) q += links[static_cast<std::size_t>(p - 1)];
            if (p < spec.num_links) q -= links[static_cast<std::size_t>(p)];
            scan.q[static_cast<std::size_t>(p)] += w * q;
        }
    }
    return scan;
}

} // namespace

ConservationReport generator_conservation(const LatticeSpec& spec, const GateParams& params,
                                          const StateVector& state, int steps,
                                          bool allow_seam) {
    if (steps < 0) throw ConfigError("steps must be >= 0");
    if (static_cast<std::int64_t>(state.amp.size()) != spec.dim())
        throw ShapeError("state does not match spec dimension");
    StepApplier applier(spec, params, Execution::Serial);
    std::vector<cplx> amp = state.amp;

    ConservationReport report{0.0, false};
    GaussScan initial = scan_gauss(amp, spec);
    report.seam_contact = initial.seam;
    if (initial.seam && !allow_seam)
        throw ConfigError("initial support touches |l| = Lambda; conservation not guaranteed");
    for (int t = 0; t < steps; ++t) {
        applier.apply_step(amp);
        GaussScan now = scan_gauss(amp, spec);
        if (now.seam) {
            if (!allow_seam)
                throw ConfigError("support reached |l| = Lambda during evolution");
            report.seam_contact = true;
        }
        for (int p = 0; p < spec.num_sites; ++p) {
            const double drift = std::abs(now.q[static_cast<std::size_t>(p)] -
                                          initial.q[static_cast<std::size_t>(p)]);
            report.max_drift = std::max(report.max_drift, drift);
        }
    }
    return report;
}

} // namespace qca
