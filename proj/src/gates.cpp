#include "qca/gates.hpp"

#include <cmath>
#include <numbers>

namespace qca {

GateParams scaling_params(double epsilon, double alpha, double c, double m) {
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be > 0");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    if (!(c > 0.0 && c <= 1.0)) throw DomainError("c must lie in (0, 1]");
    if (!(m >= 0.0)) throw DomainError("m must be >= 0");
    GateParams p;
    p.delta_t = epsilon;
    p.delta_x = std::pow(epsilon, 1.0 - alpha);
    p.kappa = std::pow(epsilon, alpha);
    const double ck = c * p.kappa;
    if (ck > 1.0) throw DomainError("c * eps^alpha exceeds 1; theta undefined");
    p.theta = std::acos(ck);
    const double s = std::sin(p.theta);
    if (m > 0.0 && s == 0.0)
        throw DomainError("mass phase undefined: sin(theta) = 0 at c * eps^alpha = 1");
    p.zeta = (m > 0.0) ? m * epsilon / s : 0.0;
    p.corner_scale = std::pow(epsilon, 2.0 * alpha);
    return p;
}

GateParams scaling_params(const LatticeSpec& spec) {
    validate_physics(spec);
    return scaling_params(spec.epsilon, spec.alpha, spec.speed, spec.mass);
}

GateCoeffs gate_coeffs(const GateParams& params, bool conjugated) {
    const double s = std::sin(params.theta);
    const double co = std::cos(params.theta);
    const cplx mass_minus = std::exp(cplx(0.0, -params.zeta)) * s;  // e^{-i zeta} sin(theta)
    const cplx mass_plus = std::exp(cplx(0.0, params.zeta)) * s;    // e^{+i zeta} sin(theta)
    GateCoeffs g;
    switch (params.variant) {
        case GateVariant::W:
        case GateVariant::WPrime:
            g.d01 = mass_minus;
            g.d10 = mass_plus;
            g.h_to01 = cplx(co, 0.0);   // +cos(theta) V
            g.h_to10 = cplx(-co, 0.0);  // -cos(theta) V^dag
            g.corner = cplx(1.0, 0.0);
            g.shifts_link = (params.variant == GateVariant::W);
            break;
        case GateVariant::WDoublePrime:
            g.d01 = params.wpp_mass_phases ? mass_minus : cplx(s, 0.0);
            g.d10 = params.wpp_mass_phases ? mass_plus : cplx(s, 0.0);
            g.h_to01 = cplx(-co, 0.0);  // -cos(theta) V
            g.h_to10 = cplx(co, 0.0);   // +cos(theta) V^dag
            // exp(i pi) picks up a ~1e-16 imaginary part; the relativistic
            // endpoint corner_scale = 1 is the exact control-Z corner -1.
            g.corner = (params.corner_scale == 1.0)
                           ? cplx(-1.0, 0.0)
                           : std::exp(cplx(0.0, std::numbers::pi * params.corner_scale));
            g.shifts_link = true;
            break;
    }
    if (conjugated) {
        g.d01 = std::conj(g.d01);
        g.d10 = std::conj(g.d10);
        g.h_to01 = std::conj(g.h_to01);
        g.h_to10 = std::conj(g.h_to10);
        g.corner = std::conj(g.corner);
    }
    return g;
}

LinearOperator build_gate(int p, const GateParams& params, const LatticeSpec& spec,
                          bool conjugated) {
    if (p < 0 || p >= spec.num_sites - 1) throw BoundsError("gate site out of range");
    const GateCoeffs g = gate_coeffs(params, conjugated);
    const int d = spec.link_dim();
    const bool hard = spec.truncation_mode == TruncationMode::HardCutoff;

    const std::int64_t s_np = (std::int64_t(1) << (spec.num_sites - 1 - p)) * spec.links_dim();
    const std::int64_t s_np1 = (std::int64_t(1) << (spec.num_sites - 2 - p)) * spec.links_dim();
    std::int64_t s_l = 1;
    for (int j = spec.num_links - 1; j > p; --j) s_l *= d;

    std::vector<LinearOperator::Triplet> entries;
    entries.reserve(static_cast<std::size_t>(2 * spec.dim()));
    for (std::int64_t col = 0; col < spec.dim(); ++col) {
        const int np = static_cast<int>((col / s_np) % 2);
        const int np1 = static_cast<int>((col / s_np1) % 2);
        const int u = static_cast<int>((col / s_l) % d);  // link digit, l = u - Lambda
        if (np == 0 && np1 == 0) {
            entries.emplace_back(col, col, cplx(1.0, 0.0));
        } else if (np == 1 && np1 == 1) {
            entries.emplace_back(col, col, g.corner);
        } else if (np == 0 && np1 == 1) {
            // input |01, l>: diagonal d01 plus hop to |10, l+1> (V^dag raises)
            entries.emplace_back(col, col, g.d01);
            int ut = g.shifts_link ? u + 1 : u;
            if (ut >= d) {
                if (hard) ut = -1;
                else ut = 0;  // wrap +Lambda -> -Lambda
            }
            if (ut >= 0)
                entries.emplace_back(col + (s_np - s_np1) + (ut - u) * s_l, col, g.h_to10);
        } else {
            // input |10, l>: diagonal d10 plus hop to |01, l-1> (V lowers)
            entries.emplace_back(col, col, g.d10);
            int ut = g.shifts_link ? u - 1 : u;
            if (ut < 0) {
                if (hard) ut = -1;
                else ut = d - 1;  // wrap -Lambda -> +Lambda
            }
            if (ut >= 0)
                entries.emplace_back(col - (s_np - s_np1) + (ut - u) * s_l, col, g.h_to01);
        }
    }
    return LinearOperator::from_triplets(spec.dim(), entries);
}

LinearOperator interaction_layer(const LatticeSpec& spec) {
    const double delta_t = spec.epsilon;
    const double delta_x = std::pow(spec.epsilon, 1.0 - spec.alpha);
    const double g2 = spec.coupling * spec.coupling;
    const int d = spec.link_dim();
    // Same phase table on every link: ph[u] = exp(-i/2 * dx*dt * g^2 * l^2).
    std::vector<cplx> ph(static_cast<std::size_t>(d));
    for (int u = 0; u < d; ++u) {
        const double l = u - spec.cutoff;
        ph[static_cast<std::size_t>(u)] = std::exp(cplx(0.0, -0.5 * delta_x * delta_t * g2 * l * l));
    }
    std::vector<LinearOperator::Triplet> entries;
    entries.reserve(static_cast<std::size_t>(spec.dim()));
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        std::int64_t lnk = i % spec.links_dim();
        cplx phase(1.0, 0.0);
        for (int j = 0; j < spec.num_links; ++j) {
            phase *= ph[static_cast<std::size_t>(lnk % d)];
            lnk /= d;
        }
        entries.emplace_back(i, i, phase);
    }
    return LinearOperator::from_triplets(spec.dim(), entries);
}

} // namespace qca
