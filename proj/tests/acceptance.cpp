// Acceptance gate: one criterion per number, each printing a single
// [PASS]/[FAIL] verdict line. All tolerances are pinned here. Run with no
// arguments for the full gate or with a criterion number (1..10).
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qca/evolution.hpp"
#include "qca/fermions.hpp"
#include "qca/gauge.hpp"
#include "qca/io.hpp"
#include "qca/limits.hpp"
#include "qca/rng.hpp"

using namespace qca;
namespace fs = std::filesystem;

namespace {

constexpr double kTolUnitarity = 1e-12;
constexpr double kTolCar = 1e-14;
constexpr double kTolHamiltonianIdentity = 1e-12;
constexpr double kTolWtilde = 1e-12;
constexpr double kTolMassIdentity = 1e-13;  // "zero" at double precision
constexpr double kSlopeTarget = 2.0;
constexpr double kSlopeWindow = 0.2;
constexpr double kTolGauge = 1e-12;
constexpr double kTolDrift = 1e-10;
constexpr double kTolWalkMatch = 1e-12;
constexpr double kTolTransport = 1e-12;
constexpr double kTolMachineZero = 1e-15;

std::ostream& detail(std::ostream& out) {
    return out << "    " << std::scientific << std::setprecision(3);
}

double car_max_residual(const LatticeSpec& spec) {
    const FermionOperatorSet f = jw_operators(spec);
    const LinearOperator id = LinearOperator::identity(spec.dim());
    double worst = 0.0;
    for (int p = 0; p < spec.num_sites; ++p) {
        for (int q = p; q < spec.num_sites; ++q) {
            const LinearOperator mixed =
                f.phi[p].compose(f.phi_dag[q]).add(f.phi_dag[q].compose(f.phi[p]));
            const LinearOperator delta =
                (p == q) ? mixed.add(id.scale(cplx(-1.0, 0.0))) : mixed;
            worst = std::max(worst, delta.frobenius_norm());
            const LinearOperator same =
                f.phi[p].compose(f.phi[q]).add(f.phi[q].compose(f.phi[p]));
            worst = std::max(worst, same.frobenius_norm());
        }
    }
    return worst;
}

bool criterion_1(std::ostream& out) {
    Rng rng(101);
    double worst = 0.0;
    for (int cutoff : {1, 2}) {
        for (int draw = 0; draw < 25; ++draw) {
            LatticeSpec spec(4, cutoff, TruncationMode::CyclicWrap);
            spec.coupling = rng.uniform(0.0, 2.0);
            GateParams params;
            params.theta = rng.uniform(0.0, std::numbers::pi / 2);
            params.zeta = rng.uniform(-std::numbers::pi, std::numbers::pi);
            params.delta_t = rng.uniform(0.01, 0.3);
            params.delta_x = 1.0;
            const LinearOperator G = build_step(spec, params);
            const LinearOperator defect = G.adjoint().compose(G).add(
                LinearOperator::identity(spec.dim()).scale(cplx(-1.0, 0.0)));
            worst = std::max(worst, defect.frobenius_norm());
        }
    }
    detail(out) << "max ||G^dag G - I||_F over 50 draws, Lambda in {1,2}: " << worst
                << " (tol " << kTolUnitarity << ")\n";
    return worst < kTolUnitarity;
}

bool criterion_2(std::ostream& out) {
    double worst = 0.0;
    for (int n : {2, 4, 6}) {
        const LatticeSpec spec(n, 1, TruncationMode::CyclicWrap);
        worst = std::max(worst, car_max_residual(spec));
    }
    detail(out) << "max anticommutator residual over all pairs, N in {2,4,6}: "
                << worst << " (tol " << kTolCar << ")\n";
    return worst < kTolCar;
}

bool criterion_3(std::ostream& out) {
    double worst = 0.0;
    for (double m : {0.0, 1.0}) {
        for (double g : {0.0, 1.0}) {
            LatticeSpec spec(4, 1, TruncationMode::CyclicWrap);
            spec.mass = m;
            spec.coupling = g;
            const double r =
                build_hqca(spec).add(build_hs(spec, 1.0).scale(cplx(-1.0, 0.0)))
                    .frobenius_norm();
            worst = std::max(worst, r);
        }
    }
    detail(out) << "max ||H_QCA - H_S(a=1)||_F over (m,g) in {0,1}^2: " << worst
                << " (tol " << kTolHamiltonianIdentity << ")\n";
    return worst < kTolHamiltonianIdentity;
}

bool criterion_4(std::ostream& out) {
    const LatticeSpec spec(4, 1, TruncationMode::CyclicWrap);
    Rng rng(404);
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        GateParams params;
        params.theta = rng.uniform(0.0, std::numbers::pi / 2);
        params.zeta = rng.uniform(-std::numbers::pi, std::numbers::pi);
        for (int p = 0; p + 1 < spec.num_sites; ++p)
            for (bool conj : {false, true})
                worst = std::max(worst, check_wtilde(spec, params, p, conj));
    }
    double worst_mass = 0.0;
    for (int p = 0; p + 1 < spec.num_sites; ++p)
        worst_mass = std::max(worst_mass, mass_identity_check(spec, p));
    detail(out) << "max fermionized-gate residual over 20 draws x all pairs: "
                << worst << " (tol " << kTolWtilde << ")\n";
    detail(out) << "max mass-identity residual: " << worst_mass << " (tol "
                << kTolMassIdentity << ")\n";
    return worst < kTolWtilde && worst_mass < kTolMassIdentity;
}

bool criterion_5(std::ostream& out) {
    LatticeSpec spec(4, 2, TruncationMode::CyclicWrap);
    spec.mass = 1.0;
    spec.coupling = 1.0;
    spec.speed = 1.0;
    spec.alpha = 1.0;
    const ConvergenceCurve curve =
        hamiltonian_convergence(spec, {0.1, 0.05, 0.025, 0.0125});
    for (const ConvergencePoint& pt : curve.points)
        detail(out) << "eps = " << pt.epsilon << "  ||G - exp(-2i eps H)||_F = "
                    << pt.residual << "\n";
    detail(out) << "fitted order: " << std::fixed << std::setprecision(4)
                << curve.slope << " (target " << kSlopeTarget << " +- "
                << kSlopeWindow << ")\n";
    return !curve.degenerate && std::abs(curve.slope - kSlopeTarget) < kSlopeWindow;
}

bool criterion_6(std::ostream& out) {
    GateParams params;
    params.theta = 0.7;
    params.zeta = 0.3;
    params.delta_t = 0.05;
    params.delta_x = 1.0;

    Rng rng(606);
    double worst_cyclic = 0.0;
    {
        LatticeSpec spec(4, 1, TruncationMode::CyclicWrap);
        spec.coupling = 1.1;
        const double unit = 2.0 * std::numbers::pi / spec.link_dim();
        for (int draw = 0; draw < 20; ++draw) {
            GaugeField field;
            for (int p = 0; p < spec.num_sites; ++p)
                field.phi.push_back(unit * static_cast<double>(
                                               rng.below(spec.link_dim())));
            worst_cyclic =
                std::max(worst_cyclic, gauge_commutator(field, spec, params, 0));
        }
    }
    double worst_hard = 0.0;
    {
        LatticeSpec spec(4, 2, TruncationMode::HardCutoff);
        spec.coupling = 1.1;
        for (int draw = 0; draw < 20; ++draw) {
            GaugeField field;
            for (int p = 0; p < spec.num_sites; ++p)
                field.phi.push_back(
                    rng.uniform(-std::numbers::pi, std::numbers::pi));
            worst_hard =
                std::max(worst_hard, gauge_commutator(field, spec, params, 1));
        }
    }
    LatticeSpec drift_spec(4, 3, TruncationMode::CyclicWrap);
    drift_spec.mass = 0.5;
    drift_spec.coupling = 1.0;
    drift_spec.epsilon = 0.1;
    drift_spec.alpha = 1.0;
    BasisLabel label = vacuum_label(drift_spec);
    label.occupations[1] = 1;
    const ConservationReport report = generator_conservation(
        drift_spec, scaling_params(drift_spec), basis_state(label, drift_spec), 2);

    detail(out) << "max quantized-field commutator (CyclicWrap, 20 draws): "
                << worst_cyclic << " (tol " << kTolGauge << ")\n";
    detail(out) << "max real-field interior commutator (HardCutoff, 20 draws): "
                << worst_hard << " (tol " << kTolGauge << ")\n";
    detail(out) << "max Gauss-generator drift over 2 steps: " << report.max_drift
                << " (tol " << kTolDrift << ")\n";
    return worst_cyclic < kTolGauge && worst_hard < kTolGauge &&
           !report.seam_contact && report.max_drift < kTolDrift;
}

bool criterion_7(std::ostream& out) {
    bool ok = true;
    for (double m : {0.0, 0.5}) {
        LatticeSpec spec(8, 4, TruncationMode::CyclicWrap,
                         std::int64_t(2'000'000'000));
        spec.mass = m;
        spec.epsilon = 0.2;
        spec.alpha = 0.5;
        spec.speed = 0.8;
        const double dev = walk_vs_qca(spec, scaling_params(spec), 3);
        detail(out) << "m = " << std::fixed << std::setprecision(1) << m
                    << ": max one-particle deviation over 3 steps: "
                    << std::scientific << std::setprecision(3) << dev << " (tol "
                    << kTolWalkMatch << ")\n";
        ok = ok && dev < kTolWalkMatch;
    }
    return ok;
}

bool criterion_8(std::ostream& out) {
    double worst_massless = 0.0;
    {
        const GateParams params = scaling_params(0.1, 0.0, 1.0, 0.0);
        for (int j = 1; j <= 5; ++j) {
            const double k = 0.1 * j;
            worst_massless = std::max(
                worst_massless, std::abs(walk_dispersion(k, params).omega_plus - k));
        }
        detail(out) << "massless transport: max |omega_+(k) - k| = "
                    << worst_massless << " (tol " << kTolTransport << ")\n";
    }
    bool massive_ok = true;
    std::vector<double> errors;
    for (double eps : {0.1, 0.05, 0.025}) {
        try {
            const GateParams params = scaling_params(eps, 0.0, 1.0, 0.5);
            double worst = 0.0;
            for (int j = 1; j <= 5; ++j) {
                const double k = 0.1 * j;
                worst = std::max(worst,
                                 std::abs(walk_dispersion(k, params).omega_plus -
                                          std::sqrt(k * k + 0.25)));
            }
            errors.push_back(worst);
        } catch (const DomainError& e) {
            detail(out) << "massive point m=0.5, c=1, alpha=0 at eps = " << eps
                        << " rejected: " << e.what() << "\n";
            massive_ok = false;
        }
    }
    if (massive_ok && errors.size() == 3) {
        const bool decreasing = errors[0] > errors[1] && errors[1] > errors[2];
        const double order = std::log2(errors[0] / errors[2]) / 2.0;
        detail(out) << "massive errors: " << errors[0] << ", " << errors[1] << ", "
                    << errors[2] << "; empirical order " << order << "\n";
        massive_ok = decreasing && order >= 1.0;
    } else {
        detail(out) << "alpha = 0 with c = 1 forces theta = 0: every gate entry "
                       "is mass-independent (the zeta phase enters only through "
                       "sin(theta)), so no massive dispersion exists at this "
                       "parameter point\n";
        massive_ok = false;
    }
    return worst_massless < kTolTransport && massive_ok;
}

bool criterion_9(std::ostream& out) {
    const LatticeSpec spec(2, 1, TruncationMode::CyclicWrap);

    GateParams relativistic = scaling_params(0.3, 0.0, 0.6, 0.0);
    relativistic.variant = GateVariant::WDoublePrime;
    const cplx corner0 = gate_coeffs(relativistic, false).corner;
    const bool corner_exact = corner0 == cplx(-1.0, 0.0);
    detail(out) << "alpha = 0 corner: (" << corner0.real() << ", " << corner0.imag()
                << "), exactly -1: " << (corner_exact ? "yes" : "no") << "\n";

    bool bound_ok = true;
    double worst_gap = 0.0;
    for (double eps : {0.3, 0.1, 0.05}) {
        GateParams p = scaling_params(eps, 1.0, 1.0, 0.0);
        p.variant = GateVariant::WDoublePrime;
        const double gap = std::abs(gate_coeffs(p, false).corner - cplx(1.0, 0.0));
        worst_gap = std::max(worst_gap, gap);
        bound_ok = bound_ok &&
                   gap <= std::numbers::pi * eps * eps + kTolUnitarity;
    }
    detail(out) << "alpha = 1 corner bound |corner - 1| <= pi eps^2 held at eps in "
                   "{0.3, 0.1, 0.05} (max gap "
                << worst_gap << ")\n";

    const double cz = controlz_degeneration(spec, 1.0);
    detail(out) << "control-Z residual at the order-0 point: " << cz << " (tol "
                << kTolMachineZero << ")\n";
    return corner_exact && bound_ok && cz <= kTolMachineZero;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

bool run_cli(const std::string& args) {
    const std::string cmd =
        std::string(QCA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return rc >= 0 && WEXITSTATUS(rc) == 0;
}

bool dirs_identical(const fs::path& a, const fs::path& b, std::ostream& out) {
    std::vector<fs::path> names;
    for (const auto& entry : fs::directory_iterator(a))
        names.push_back(entry.path().filename());
    std::sort(names.begin(), names.end());
    bool ok = true;
    for (const fs::path& name : names) {
        if (!fs::exists(b / name)) {
            detail(out) << "missing artifact on rerun: " << (b / name).string() << "\n";
            ok = false;
        } else if (slurp(a / name) != slurp(b / name)) {
            detail(out) << "artifact differs between reruns: " << name.string() << "\n";
            ok = false;
        }
    }
    return ok && !names.empty();
}

bool criterion_10(std::ostream& out) {
    const fs::path base = fs::temp_directory_path() / "qca_acceptance_determinism";
    fs::remove_all(base);
    fs::create_directories(base);
    const fs::path cfg = base / "config.json";
    std::ofstream(cfg) << R"({
  "schema_version": 1,
  "lattice": {"num_sites": 4, "cutoff": 1, "truncation": "cyclic"},
  "physics": {"mass": 1.0, "coupling": 1.0, "speed": 1.0, "epsilon": 0.05, "alpha": 1.0},
  "seed": 20240817,
  "evolve": {"steps": 3, "execution": "parallel",
             "initial_state": {"kind": "single_particle", "site": 1}},
  "converge": {"eps_list": [0.1, 0.05, 0.025]},
  "gauge_check": {"num_fields": 5},
  "dispersion": {"k_list": [0.0, 0.5, 1.0]},
  "hamiltonian_check": {"num_draws": 2}
}
)";
    const std::vector<std::string> commands = {"evolve", "converge", "gauge-check",
                                               "dispersion", "hamiltonian-check"};
    bool ok = true;
    for (const std::string& command : commands) {
        for (const char* run : {"run1", "run2"}) {
            const fs::path out_dir = base / run / command;
            if (!run_cli(command + " --config " + cfg.string() + " --out " +
                         out_dir.string())) {
                detail(out) << command << " exited nonzero\n";
                ok = false;
            }
        }
        const bool same =
            dirs_identical(base / "run1" / command, base / "run2" / command, out);
        detail(out) << command << ": reruns byte-identical: "
                    << (same ? "yes" : "no") << "\n";
        ok = ok && same;
    }
    return ok;
}

struct Criterion {
    int id;
    const char* title;
    bool (*run)(std::ostream&);
};

const Criterion kCriteria[] = {
    {1, "step unitarity across random parameters", criterion_1},
    {2, "canonical anticommutation relations", criterion_2},
    {3, "H_QCA coincides with the a = 1 Kogut-Susskind Hamiltonian", criterion_3},
    {4, "fermionic form of the gate and the mass identity", criterion_4},
    {5, "second-order continuum limit of the step operator", criterion_5},
    {6, "finite-scale gauge invariance and generator conservation", criterion_6},
    {7, "one-particle sector matches the free walk on the large chain", criterion_7},
    {8, "Dirac dispersion in the relativistic scaling", criterion_8},
    {9, "plasticity endpoints of the two-particle gate", criterion_9},
    {10, "byte-identical reruns of every executable command", criterion_10},
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    if (argc <= 1) {
        for (const Criterion& c : kCriteria) selected.push_back(c.id);
    } else {
        for (int i = 1; i < argc; ++i) {
            const int id = std::atoi(argv[i]);
            if (id < 1 || id > 10) {
                std::cerr << "usage: acceptance [criterion 1..10]...\n";
                return 2;
            }
            selected.push_back(id);
        }
    }
    bool all_ok = true;
    for (int id : selected) {
        const Criterion& c = kCriteria[id - 1];
        bool ok = false;
        try {
            ok = c.run(std::cout);
        } catch (const std::exception& e) {
            std::cout << "    unexpected exception: " << e.what() << "\n";
        }
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": "
                  << c.title << "\n";
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
