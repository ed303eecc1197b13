// filamentlab: command-line laboratory for quasiperiodic filament dynamics.
// Subcommands cover the rigid-motion family, the sphere-valued evolution,
// curve discrepancy, and the stability/ill-posedness experiments.  Outputs
// are CSV time series plus JSON reports; every report embeds the resolved
// configuration so a run is reproducible from its own output.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "filamentlab/curve_io.hpp"
#include "filamentlab/discrepancy.hpp"
#include "filamentlab/elliptic.hpp"
#include "filamentlab/estimates.hpp"
#include "filamentlab/kida.hpp"
#include "filamentlab/smap.hpp"
#include "filamentlab/sphere_field.hpp"
#include "filamentlab/tubular.hpp"

using nlohmann::json;
using namespace flab;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// gnuplot-friendly CSV accumulator: header row, then %.17g columns.
struct Csv {
    std::string text;
    explicit Csv(const std::string& header) : text(header + "\n") {}
    void row(const std::vector<double>& vals) {
        for (size_t i = 0; i < vals.size(); ++i) {
            if (i) text += ',';
            text += fmt17(vals[i]);
        }
        text += '\n';
    }
};

void write_json_report(const std::string& path, const json& j) {
    atomic_write_text(path, j.dump(2) + "\n");
}

std::string out_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

// ---- kida -------------------------------------------------------------------

struct KidaCfg {
    double alpha = 1.0, beta = 1.0, delta = 0.0;
    int m = 5;
    bool delta_from_m = false;
    double rescale_ell = 0.0; // 0 = keep derived period
    double t = 0.0;
    std::size_t N = 512;
    std::string profile_csv; // empty = skip
    std::string out = ".";
};

json kida_params_json(const kida::KidaParams& p) {
    return json{{"alpha", p.alpha}, {"beta", p.beta},   {"delta", p.delta}, {"m", p.m},
                {"k", p.k},         {"A", p.A},         {"Omega", p.Omega}, {"V", p.V},
                {"C", p.C},         {"T_R", p.T_R},     {"ell", p.ell},     {"theta0", p.theta0},
                {"z0", p.z0},       {"mirrored", p.mirrored},
                {"drift", kida::drift(p)}};
}

int cmd_kida(const KidaCfg& c) {
    double delta = c.delta_from_m ? 1.0 / (double(c.m) * double(c.m) - 1.0) : c.delta;
    kida::KidaParams p = kida::derive_params(c.alpha, c.beta, delta, c.m);
    if (c.rescale_ell > 0.0) p = kida::rescale_to_period(p, c.rescale_ell);

    json cfg{{"alpha", c.alpha},   {"beta", c.beta},        {"delta", delta},
             {"m", c.m},           {"delta_from_m", c.delta_from_m},
             {"rescale_ell", c.rescale_ell},                {"t", c.t},
             {"N", c.N},           {"profile_csv", c.profile_csv},
             {"out", c.out}};
    json rep{{"config", std::move(cfg)}, {"params", kida_params_json(p)}};

    if (!c.profile_csv.empty())
        write_curve_csv(out_path(c.out, c.profile_csv), kida::to_quasicurve(p, c.t, c.N));
    write_json_report(out_path(c.out, "kida_report.json"), rep);

    std::printf("m=%d Omega=%s C=%s V=%s A=%s ell=%s drift=%s\n", c.m, fmt17(p.Omega).c_str(),
                fmt17(p.C).c_str(), fmt17(p.V).c_str(), fmt17(p.A).c_str(), fmt17(p.ell).c_str(),
                fmt17(kida::drift(p)).c_str());
    return 0;
}

// ---- evolve -----------------------------------------------------------------

struct EvolveCfg {
    std::string init = "circle"; // circle | kida | helix
    int m = 12;
    double sigma = 0.0; // near-degenerate family parameter for init=kida
    double eps = 0.1, p = 0.2;
    double perturb = 0.0;
    std::uint64_t seed = 1;
    std::size_t N = 256;
    double dt = 1e-4, t_end = 1.0;
    int save_every = 10;
    std::string out = ".";
};

SphereField initial_field(const EvolveCfg& c) {
    if (c.init == "circle") return SphereField::circle(c.N);
    if (c.init == "kida") {
        kida::KidaParams p = c.sigma == 0.0
                                 ? kida::derive_params(1.0, 1.0,
                                                       1.0 / (double(c.m) * double(c.m) - 1.0), c.m)
                                 : kida::illposed_family(c.sigma, c.m);
        std::vector<Vec3> u(c.N);
        for (std::size_t j = 0; j < c.N; ++j)
            u[j] = kida::eval_tangent(p, p.ell * double(j) / double(c.N), 0.0);
        return SphereField::renormalized(std::move(u), p.ell);
    }
    if (c.init == "helix") {
        QuasiCurve h = kida::simple_helix(c.eps, c.p, c.N);
        return SphereField::renormalized(h.derivative_samples(1), h.period());
    }
    throw std::invalid_argument("evolve: unknown --init '" + c.init + "'");
}

int cmd_evolve(const EvolveCfg& c) {
    SphereField u0 = initial_field(c);
    if (c.perturb > 0.0) u0 = est::perturbed_field(u0, c.perturb, c.seed);

    smap::Trajectory traj = smap::evolve(u0, c.t_end, c.dt, c.save_every);
    smap::InvariantReport inv = smap::invariants(traj);

    Csv csv("t,energy,second_invariant,h2_value,h2_bound,pitch_x,pitch_y,pitch_z");
    for (size_t i = 0; i < traj.times.size(); ++i) {
        Vec3 a = pitch_of(traj.states[i]);
        csv.row({traj.times[i], inv.energy[i], inv.second[i], inv.h2_value[i], inv.h2_bound, a.x,
                 a.y, a.z});
    }
    atomic_write_text(out_path(c.out, "evolve_invariants.csv"), csv.text);
    write_field_csv(out_path(c.out, "evolve_final_field.csv"), traj.states.back());
    write_curve_csv(out_path(c.out, "evolve_final_curve.csv"),
                    smap::reconstruct_binormal(traj).back());

    double e0 = inv.energy.front();
    double de = 0.0, di = 0.0, dpitch = 0.0, h2_excess = -1e300;
    Vec3 a0 = pitch_of(traj.states.front());
    for (size_t i = 0; i < traj.times.size(); ++i) {
        de = std::max(de, std::abs(inv.energy[i] - e0));
        di = std::max(di, std::abs(inv.second[i] - inv.second.front()));
        dpitch = std::max(dpitch, norm(pitch_of(traj.states[i]) - a0));
        h2_excess = std::max(h2_excess, inv.h2_value[i] - inv.h2_bound);
    }

    json cfg{{"init", c.init},   {"m", c.m},
             {"sigma", c.sigma}, {"eps", c.eps},
             {"p", c.p},         {"perturb", c.perturb},
             {"seed", c.seed},   {"N", c.N},
             {"dt", c.dt},       {"t_end", c.t_end},
             {"save_every", c.save_every},
             {"out", c.out}};
    json rep{{"config", std::move(cfg)},
             {"energy_drift_rel", de / e0},
             {"second_invariant_drift", di},
             {"pitch_drift", dpitch},
             {"h2_bound", inv.h2_bound},
             {"h2_max_excess", h2_excess},
             {"saved_frames", traj.times.size()}};
    write_json_report(out_path(c.out, "evolve_report.json"), rep);

    std::printf("evolved to t=%s: |dE|/E=%s |dI|=%s pitch_drift=%s\n", fmt17(c.t_end).c_str(),
                fmt17(de / e0).c_str(), fmt17(di).c_str(), fmt17(dpitch).c_str());
    return 0;
}

// ---- discrepancy ------------------------------------------------------------

struct DiscCfg {
    std::string gamma_csv, Gamma_csv;
    double r = 0.0; // 0 = r_gamma/8
    std::string out = ".";
};

int cmd_discrepancy(const DiscCfg& c) {
    QuasiCurve gamma = read_curve_csv(c.gamma_csv);
    QuasiCurve Gamma = read_curve_csv(c.Gamma_csv);
    disc::CurvatureData cd = disc::curvature_data(gamma);
    double r = c.r > 0.0 ? c.r : cd.r_gamma / 8.0;

    disc::FminResult fm = disc::F_min(Gamma, gamma, r);
    double dP = disc::d_parametric_upper(Gamma, gamma);
    double dH = disc::d_hausdorff(Gamma, gamma);

    json checks = json::array();
    int violations = -1;
    if (std::isfinite(fm.value)) {
        disc::InequalityReport ir = disc::inequality_suite(Gamma, gamma, fm.rep, r);
        violations = ir.violations();
        for (const auto& ch : ir.checks)
            checks.push_back(json{{"name", ch.name},
                                  {"applicable", ch.applicable},
                                  {"lhs", ch.lhs},
                                  {"rhs", ch.rhs}});
    }

    json cfg{{"gamma_csv", c.gamma_csv}, {"Gamma_csv", c.Gamma_csv}, {"r", r}, {"out", c.out}};
    json rep{{"config", std::move(cfg)},
             {"r_gamma", cd.r_gamma},
             {"sup_d2", cd.sup_d2},
             {"sup_d3", cd.sup_d3},
             {"F_min", fm.value},
             {"sigma0", std::isfinite(fm.value) ? fm.rep.sigma0 : 0.0},
             {"d_parametric", dP},
             {"d_hausdorff", dH},
             {"inequality_checks", std::move(checks)},
             {"inequality_violations", violations}};
    write_json_report(out_path(c.out, "discrepancy_report.json"), rep);

    std::printf("F_min=%s d_P=%s d_H=%s r_gamma=%s violations=%d\n", fmt17(fm.value).c_str(),
                fmt17(dP).c_str(), fmt17(dH).c_str(), fmt17(cd.r_gamma).c_str(), violations);
    return 0;
}

// ---- gronwall ---------------------------------------------------------------

struct GronCfg {
    std::size_t N = 256;
    double dt = 1e-4, t_end = 0.02;
    double perturb = 1e-3;
    double r_frac = 1.0; // r = r_frac * r_gamma(u0 curve)/8
    int save_every = 10;
    std::uint64_t seed = 1;
    std::string out = ".";
};

int cmd_gronwall(const GronCfg& c) {
    SphereField u0 = SphereField::circle(c.N);
    SphereField v0 = est::perturbed_field(u0, c.perturb, c.seed);
    double r_gamma0 = disc::curvature_data(integrate_tangent(u0, Vec3{0, 0, 0})).r_gamma;
    double r = c.r_frac * r_gamma0 / 8.0;

    est::GronwallReport g = est::gronwall_experiment(u0, v0, r, c.t_end, c.dt, c.save_every);

    Csv csv("t,F,bound,d_P,ok");
    for (size_t i = 0; i < g.times.size(); ++i)
        csv.row({g.times[i], g.F_values[i], g.bound_values[i], g.d_P[i],
                 g.verdict[i] ? 1.0 : 0.0});
    atomic_write_text(out_path(c.out, "gronwall.csv"), csv.text);

    json cfg{{"N", c.N},           {"dt", c.dt},
             {"t_end", c.t_end},   {"perturb", c.perturb},
             {"r_frac", c.r_frac}, {"save_every", c.save_every},
             {"seed", c.seed},     {"out", c.out}};
    json rep{{"config", std::move(cfg)},
             {"r", g.r},
             {"r_gamma", g.r_gamma},
             {"sup_d3", g.sup_d3},
             {"L", g.L},
             {"K", g.K},
             {"F_r", g.F_r},
             {"T_r", g.T_r},
             {"F0", g.F0},
             {"frames_checked", g.times.size()},
             {"all_ok", g.all_ok},
             {"truncated_at", g.truncated_at}};
    write_json_report(out_path(c.out, "gronwall_report.json"), rep);

    std::printf("K=%s F_r=%s T_r=%s F0=%s frames=%zu all_ok=%d\n", fmt17(g.K).c_str(),
                fmt17(g.F_r).c_str(), fmt17(g.T_r).c_str(), fmt17(g.F0).c_str(), g.times.size(),
                int(g.all_ok));
    return g.all_ok ? 0 : 2;
}

// ---- weakstrong -------------------------------------------------------------

struct WsCfg {
    std::size_t N = 256;
    double dt = 1e-4, t_end = 0.25;
    std::vector<double> sizes{1e-2, 1e-3, 1e-4};
    int save_every = 250;
    std::uint64_t seed = 1;
    std::string out = ".";
};

int cmd_weakstrong(const WsCfg& c) {
    SphereField u0 = SphereField::circle(c.N);
    Csv csv("size,t,ratio,sigma_t");
    json per_size = json::array();
    double cmax = 0.0, cmin = 1e300;
    for (size_t i = 0; i < c.sizes.size(); ++i) {
        SphereField v0 = est::perturbed_field(u0, c.sizes[i], c.seed + i);
        est::WeakStrongReport w = est::weak_strong_experiment(u0, v0, c.t_end, c.dt, c.save_every);
        for (size_t k = 0; k < w.times.size(); ++k)
            csv.row({c.sizes[i], w.times[k], w.ratio[k], w.sigma_t[k]});
        per_size.push_back(json{{"size", c.sizes[i]},
                                {"diff0", w.diff0},
                                {"empirical_C", w.empirical_C},
                                {"mean_shift", w.mean_shift}});
        cmax = std::max(cmax, w.empirical_C);
        cmin = std::min(cmin, w.empirical_C);
    }
    atomic_write_text(out_path(c.out, "weakstrong.csv"), csv.text);

    json cfg{{"N", c.N},
             {"dt", c.dt},
             {"t_end", c.t_end},
             {"sizes", c.sizes},
             {"save_every", c.save_every},
             {"seed", c.seed},
             {"out", c.out}};
    json rep{{"config", std::move(cfg)},
             {"per_size", std::move(per_size)},
             {"C_max", cmax},
             {"C_min", cmin},
             {"C_spread", cmax / cmin}};
    write_json_report(out_path(c.out, "weakstrong_report.json"), rep);

    std::printf("empirical C in [%s, %s], spread x%s\n", fmt17(cmin).c_str(), fmt17(cmax).c_str(),
                fmt17(cmax / cmin).c_str());
    return 0;
}

// ---- illposed ---------------------------------------------------------------

struct IllCfg {
    double sigma = 1.0;
    std::vector<int> m_values{50, 100, 200, 400};
    bool pde_check = false;
    std::string out = ".";
};

int cmd_illposed(const IllCfg& c) {
    est::DriftReport d = est::illposed_experiment(c.sigma, c.m_values, c.pde_check);

    Csv csv("m,drift,drift_rescaled,limit");
    for (size_t i = 0; i < d.m_values.size(); ++i)
        csv.row({double(d.m_values[i]), d.drift_values[i], d.drift_rescaled[i], d.limit});
    atomic_write_text(out_path(c.out, "illposed.csv"), csv.text);

    json cfg{{"sigma", c.sigma}, {"m", c.m_values}, {"pde_check", c.pde_check}, {"out", c.out}};
    json rep{{"config", std::move(cfg)},
             {"limit", d.limit},
             {"m", d.m_values},
             {"drift", d.drift_values},
             {"drift_rescaled", d.drift_rescaled}};
    if (d.pde_check_ran) {
        rep["pde_check"] = json{{"m", d.pde_check_m},
                                {"drift_measured", d.pde_drift_measured},
                                {"drift_exact", d.pde_drift_exact}};
    }
    write_json_report(out_path(c.out, "illposed_report.json"), rep);

    for (size_t i = 0; i < d.m_values.size(); ++i)
        std::printf("m=%d drift=%s rescaled=%s (reference %s)\n", d.m_values[i],
                    fmt17(d.drift_values[i]).c_str(), fmt17(d.drift_rescaled[i]).c_str(),
                    fmt17(d.limit).c_str());
    return 0;
}

// ---- pointwise --------------------------------------------------------------

struct PwCfg {
    int m = 5;
    double t0 = 0.37;
    double r_frac = 1.0;
    int samples = 1000;
    std::uint64_t seed = 1;
    std::size_t N = 512;
    std::string out = ".";
};

int cmd_pointwise(const PwCfg& c) {
    kida::KidaParams p =
        kida::derive_params(1.0, 1.0, 1.0 / (double(c.m) * double(c.m) - 1.0), c.m);
    double r_gamma = disc::curvature_data(kida::to_quasicurve(p, c.t0, c.N)).r_gamma;
    double r = c.r_frac * r_gamma / 8.0;

    est::PointwiseReport rep = est::pointwise_estimate_check(p, c.t0, r, c.samples, c.seed, c.N);

    json cfg{{"m", c.m},       {"t0", c.t0},     {"r_frac", c.r_frac}, {"samples", c.samples},
             {"seed", c.seed}, {"N", c.N},       {"out", c.out}};
    json out{{"config", std::move(cfg)},
             {"r", rep.r},
             {"requested", rep.requested},
             {"admissible", rep.admissible},
             {"violations", rep.violations},
             {"max_excess", rep.max_excess},
             {"tolerance", rep.tolerance}};
    write_json_report(out_path(c.out, "pointwise_report.json"), out);

    std::printf("pointwise: %d/%d admissible, %d violations, max excess %s (tol %s)\n",
                rep.admissible, rep.requested, rep.violations, fmt17(rep.max_excess).c_str(),
                fmt17(rep.tolerance).c_str());
    return rep.violations == 0 ? 0 : 2;
}

// ---- weakform ---------------------------------------------------------------

struct WfCfg {
    std::string source = "translate"; // translate | evolved
    std::size_t N = 128;
    double save_interval = 1e-3, t_end = 0.05;
    double r = 0.12;
    double perturb = 1e-3;
    double dt = 2e-5;
    std::uint64_t seed = 1;
    std::string out = ".";
};

// The moving smooth filament: unit circle translating at unit speed along e3.
// Same base point convention as the reconstruction, gamma(0) = 0, so the
// evolved perturbed curve stays within O(perturb) of this core.
tube::TubularField::CurveProvider translating_circle(std::size_t N) {
    return [N](double t) {
        std::vector<Vec3> p(N);
        for (std::size_t j = 0; j < N; ++j) {
            double s = 2.0 * M_PI * double(j) / double(N);
            p[j] = Vec3{std::sin(s), 1.0 - std::cos(s), t};
        }
        return QuasiCurve(Vec3{0, 0, 0}, 2.0 * M_PI, std::move(p));
    };
}

est::WeakformReport run_weakform(const WfCfg& c, double interval) {
    tube::TubularField X(translating_circle(c.N), c.r);
    std::vector<QuasiCurve> frames;
    std::vector<double> times;
    if (c.source == "translate") {
        long n = std::lround(c.t_end / interval);
        for (long i = 0; i <= n; ++i) {
            times.push_back(interval * double(i));
            frames.push_back(X.frame(times.back()));
        }
    } else if (c.source == "evolved") {
        long per = std::lround(interval / c.dt);
        if (per < 1 || std::abs(per * c.dt - interval) > 1e-12)
            throw std::invalid_argument("weakform: save interval must be a multiple of dt");
        SphereField u0 = est::perturbed_field(SphereField::circle(c.N), c.perturb, c.seed);
        smap::Trajectory traj = smap::evolve(u0, c.t_end, c.dt, int(per));
        frames = smap::reconstruct_binormal(traj);
        times = traj.times;
    } else {
        throw std::invalid_argument("weakform: unknown --source '" + c.source + "'");
    }
    return est::weak_formulation_residual(frames, times, X);
}

int cmd_weakform(const WfCfg& c) {
    est::WeakformReport coarse = run_weakform(c, c.save_interval);
    est::WeakformReport fine = run_weakform(c, c.save_interval / 2.0);
    double order = std::log2(coarse.max_residual / fine.max_residual);

    Csv csv("t,lhs,rhs,residual");
    for (size_t i = 0; i < coarse.times.size(); ++i)
        csv.row({coarse.times[i], coarse.lhs[i], coarse.rhs[i], coarse.residual[i]});
    atomic_write_text(out_path(c.out, "weakform.csv"), csv.text);

    json cfg{{"source", c.source},
             {"N", c.N},
             {"save_interval", c.save_interval},
             {"t_end", c.t_end},
             {"r", c.r},
             {"perturb", c.perturb},
             {"dt", c.dt},
             {"seed", c.seed},
             {"out", c.out}};
    json rep{{"config", std::move(cfg)},
             {"max_residual", coarse.max_residual},
             {"max_residual_halved", fine.max_residual},
             {"decay_order", order},
             {"tube_exit", coarse.tube_exit || fine.tube_exit}};
    write_json_report(out_path(c.out, "weakform_report.json"), rep);

    std::printf("weakform: max residual %s -> %s under halving (order %s)\n",
                fmt17(coarse.max_residual).c_str(), fmt17(fine.max_residual).c_str(),
                fmt17(order).c_str());
    return 0;
}

// ---- selftest ---------------------------------------------------------------

int cmd_selftest() {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        std::printf("%s %s%s%s\n", ok ? "ok  " : "FAIL", name.c_str(),
                    detail.empty() ? "" : " — ", detail.c_str());
        if (!ok) ++failures;
    };

    // Degenerate-family identities.
    for (int m : {2, 5}) {
        kida::KidaParams p =
            kida::derive_params(1.0, 1.0, 1.0 / (double(m) * double(m) - 1.0), m);
        double w = std::sqrt(double(m) * double(m) - 1.0);
        bool ok = std::abs(p.Omega - w) < 1e-10 * w && std::abs(p.A - 1.0) < 1e-10 &&
                  std::abs(p.V - 1.0) < 1e-10 && std::abs(p.ell - 2.0 * M_PI) < 1e-10;
        check("base family m=" + std::to_string(m), ok,
              "Omega=" + fmt17(p.Omega) + " ell=" + fmt17(p.ell));
    }

    // Legendre relation E K' + E' K - K K' = pi/2.
    {
        double k = 0.37, kp = std::sqrt(1.0 - k * k);
        double lhs = ell::complete_E(k) * ell::complete_K(kp) +
                     ell::complete_E(kp) * ell::complete_K(k) -
                     ell::complete_K(k) * ell::complete_K(kp);
        check("Legendre relation", std::abs(lhs - M_PI / 2.0) < 1e-12,
              "residual=" + fmt17(lhs - M_PI / 2.0));
    }

    // Rigid-motion solution solves the flow: velocity vs spectral curvature.
    {
        kida::KidaParams p = kida::derive_params(1.0, 1.0, 1.0 / 24.0, 5);
        QuasiCurve q = kida::to_quasicurve(p, 0.0, 256);
        std::vector<Vec3> t1 = q.derivative_samples(1), t2 = q.derivative_samples(2);
        double worst = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j) {
            Vec3 v = kida::eval_velocity(p, q.node(j), 0.0);
            worst = std::max(worst, norm(v - cross(t1[j], t2[j])));
        }
        check("rigid-motion flow residual", worst < 1e-6, "sup=" + fmt17(worst));
    }

    // Short conservative evolution of a perturbed circle.
    {
        SphereField u0 = est::perturbed_field(SphereField::circle(128), 1e-2, 11);
        smap::Trajectory tr = smap::evolve(u0, 0.02, 2e-4, 10);
        smap::InvariantReport inv = smap::invariants(tr);
        double de = 0.0;
        for (double e : inv.energy) de = std::max(de, std::abs(e - inv.energy.front()));
        check("energy conservation (short run)", de / inv.energy.front() < 1e-8,
              "|dE|/E=" + fmt17(de / inv.energy.front()));
    }

    // Stationarity of the great circle.
    {
        SphereField u0 = SphereField::circle(128);
        smap::Trajectory tr = smap::evolve(u0, 0.05, 2e-4, 50);
        double worst = 0.0;
        for (std::size_t j = 0; j < u0.size(); ++j)
            worst = std::max(worst, norm(tr.states.back()[j] - u0[j]));
        check("great circle stationary", worst < 1e-10, "sup=" + fmt17(worst));
    }

    // Discrepancy vanishes on identical curves; suite holds on a perturbed pair.
    {
        QuasiCurve circ = integrate_tangent(SphereField::circle(128), Vec3{0, 0, 0});
        disc::FminResult same = disc::F_min(circ, circ, 0.12);
        check("F_min(gamma,gamma)=0", std::isfinite(same.value) && same.value < 1e-12,
              "F=" + fmt17(same.value));

        SphereField v0 = est::perturbed_field(SphereField::circle(128), 1e-3, 5);
        QuasiCurve pert = integrate_tangent(v0, Vec3{1e-4, 0, 0});
        disc::FminResult fm = disc::F_min(pert, circ, 0.12);
        bool ok = std::isfinite(fm.value);
        int viol = -1;
        if (ok) {
            disc::InequalityReport ir = disc::inequality_suite(pert, circ, fm.rep, 0.12);
            viol = ir.violations();
            ok = viol == 0;
        }
        check("inequality suite on perturbed pair", ok, "violations=" + std::to_string(viol));
    }

    // Pointwise tube estimate, small sample.
    {
        kida::KidaParams p = kida::derive_params(1.0, 1.0, 1.0 / 24.0, 5);
        double rg = disc::curvature_data(kida::to_quasicurve(p, 0.37, 256)).r_gamma;
        est::PointwiseReport pr = est::pointwise_estimate_check(p, 0.37, rg / 8.0, 50, 3, 256);
        check("pointwise estimate (50 samples)", pr.admissible > 0 && pr.violations == 0,
              std::to_string(pr.admissible) + " admissible, max excess " + fmt17(pr.max_excess));
    }

    // Closed-form helix identity: gamma' x gamma'' = -slip gamma' + speed e1.
    {
        double eps = 0.1, pp = 0.2;
        kida::HelixMotion hm = kida::helix_motion(eps, pp);
        QuasiCurve h = kida::simple_helix(eps, pp, 256);
        std::vector<Vec3> t1 = h.derivative_samples(1), t2 = h.derivative_samples(2);
        double worst = 0.0;
        for (std::size_t j = 0; j < h.size(); ++j) {
            Vec3 lhs = cross(t1[j], t2[j]);
            Vec3 rhs = t1[j] * (-hm.slip) + Vec3{hm.translation_speed, 0, 0};
            worst = std::max(worst, norm(lhs - rhs));
        }
        check("helix binormal identity", worst < 1e-10, "sup=" + fmt17(worst));
    }

    std::printf("%s\n", failures == 0 ? "selftest: all checks passed" : "selftest: FAILURES");
    return failures == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"filamentlab — numerical laboratory for quasiperiodic filament flows"};
    app.require_subcommand(1);
    app.set_config("--config")->description("TOML config file (sections per subcommand)");
    app.footer("Environment: FILAMENTLAB_THREADS caps worker threads.");

    KidaCfg kc;
    auto* sk = app.add_subcommand("kida", "derive a rigid-motion solution and its profile");
    sk->add_option("--alpha", kc.alpha, "largest squared-radius root");
    sk->add_option("--beta", kc.beta, "middle root");
    auto* od = sk->add_option("--delta", kc.delta, "third root (-delta is the negative root)");
    auto* ofm = sk->add_flag("--delta-from-m", kc.delta_from_m, "use delta = 1/(m^2-1)");
    ofm->excludes(od);
    sk->add_option("--m", kc.m, "winding count (>= 2)")->required();
    sk->add_option("--rescale-ell", kc.rescale_ell, "rescale the period to this length");
    sk->add_option("--t", kc.t, "evaluation time for the profile");
    sk->add_option("--N", kc.N, "profile sample count (power of two)");
    sk->add_option("--profile-csv", kc.profile_csv, "also write the curve CSV under this name");
    sk->add_option("--out", kc.out, "output directory");

    EvolveCfg ec;
    auto* se = app.add_subcommand("evolve", "integrate the sphere-valued flow");
    se->add_option("--init", ec.init, "initial data: circle | kida | helix");
    se->add_option("--m", ec.m, "winding count for --init kida");
    se->add_option("--sigma", ec.sigma, "near-degenerate parameter for --init kida");
    se->add_option("--eps", ec.eps, "helix radius");
    se->add_option("--p", ec.p, "helix pitch parameter");
    se->add_option("--perturb", ec.perturb, "L2 size of a smooth random perturbation");
    se->add_option("--seed", ec.seed, "RNG seed");
    se->add_option("--N", ec.N, "grid size (power of two)");
    se->add_option("--dt", ec.dt, "time step");
    se->add_option("--t-end", ec.t_end, "final time");
    se->add_option("--save-every", ec.save_every, "save cadence in steps");
    se->add_option("--out", ec.out, "output directory");

    DiscCfg dc;
    auto* sd = app.add_subcommand("discrepancy", "compare two stored curves");
    sd->add_option("--gamma", dc.gamma_csv, "smooth reference curve CSV")->required();
    sd->add_option("--Gamma", dc.Gamma_csv, "compared curve CSV")->required();
    sd->add_option("--r", dc.r, "tube radius (default r_gamma/8)");
    sd->add_option("--out", dc.out, "output directory");

    GronCfg gc;
    auto* sg = app.add_subcommand("gronwall", "discrepancy growth against the Gronwall bound");
    sg->add_option("--N", gc.N, "grid size");
    sg->add_option("--dt", gc.dt, "time step");
    sg->add_option("--t-end", gc.t_end, "integration horizon");
    sg->add_option("--perturb", gc.perturb, "perturbation size");
    sg->add_option("--r-frac", gc.r_frac, "tube radius as a fraction of r_gamma/8");
    sg->add_option("--save-every", gc.save_every, "save cadence in steps");
    sg->add_option("--seed", gc.seed, "RNG seed");
    sg->add_option("--out", gc.out, "output directory");

    WsCfg wc;
    auto* sw = app.add_subcommand("weakstrong", "L2 stability ratio across perturbation sizes");
    sw->add_option("--N", wc.N, "grid size");
    sw->add_option("--dt", wc.dt, "time step");
    sw->add_option("--t-end", wc.t_end, "final time");
    sw->add_option("--sizes", wc.sizes, "perturbation sizes")->delimiter(',');
    sw->add_option("--save-every", wc.save_every, "save cadence in steps");
    sw->add_option("--seed", wc.seed, "RNG seed");
    sw->add_option("--out", wc.out, "output directory");

    IllCfg ic;
    auto* si = app.add_subcommand("illposed", "drift of the near-degenerate family");
    si->add_option("--sigma", ic.sigma, "family parameter sigma-tilde")->required();
    si->add_option("--m", ic.m_values, "winding counts")->delimiter(',')->required();
    si->add_flag("--pde-check", ic.pde_check, "cross-check one member by evolution");
    si->add_option("--out", ic.out, "output directory");

    PwCfg pc;
    auto* sp = app.add_subcommand("pointwise", "sampled pointwise tube estimate");
    sp->add_option("--m", pc.m, "winding count of the test solution");
    sp->add_option("--t0", pc.t0, "evaluation time");
    sp->add_option("--r-frac", pc.r_frac, "tube radius as a fraction of r_gamma/8");
    sp->add_option("--samples", pc.samples, "sample count");
    sp->add_option("--seed", pc.seed, "RNG seed");
    sp->add_option("--N", pc.N, "frame sample count");
    sp->add_option("--out", pc.out, "output directory");

    WfCfg wfc;
    auto* sf = app.add_subcommand("weakform", "weak-formulation residual and its decay");
    sf->add_option("--source", wfc.source, "frame source: translate | evolved");
    sf->add_option("--N", wfc.N, "grid size");
    sf->add_option("--save-interval", wfc.save_interval, "frame spacing in time");
    sf->add_option("--t-end", wfc.t_end, "final time");
    sf->add_option("--r", wfc.r, "tube radius");
    sf->add_option("--perturb", wfc.perturb, "perturbation for --source evolved");
    sf->add_option("--dt", wfc.dt, "time step for --source evolved");
    sf->add_option("--seed", wfc.seed, "RNG seed");
    sf->add_option("--out", wfc.out, "output directory");

    auto* st = app.add_subcommand("selftest", "fast invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    std::string out_dir = ".";
    try {
        int rc = 1;
        if (sk->parsed()) {
            out_dir = kc.out;
            std::filesystem::create_directories(kc.out);
            rc = cmd_kida(kc);
        } else if (se->parsed()) {
            out_dir = ec.out;
            std::filesystem::create_directories(ec.out);
            rc = cmd_evolve(ec);
        } else if (sd->parsed()) {
            out_dir = dc.out;
            std::filesystem::create_directories(dc.out);
            rc = cmd_discrepancy(dc);
        } else if (sg->parsed()) {
            out_dir = gc.out;
            std::filesystem::create_directories(gc.out);
            rc = cmd_gronwall(gc);
        } else if (sw->parsed()) {
            out_dir = wc.out;
            std::filesystem::create_directories(wc.out);
            rc = cmd_weakstrong(wc);
        } else if (si->parsed()) {
            out_dir = ic.out;
            std::filesystem::create_directories(ic.out);
            rc = cmd_illposed(ic);
        } else if (sp->parsed()) {
            out_dir = pc.out;
            std::filesystem::create_directories(pc.out);
            rc = cmd_pointwise(pc);
        } else if (sf->parsed()) {
            out_dir = wfc.out;
            std::filesystem::create_directories(wfc.out);
            rc = cmd_weakform(wfc);
        } else if (st->parsed()) {
            rc = cmd_selftest();
        }
        return rc;
    } catch (const std::exception& e) {
        // Numerical failure: leave a machine-readable trace next to the outputs.
        json diag{{"error", e.what()}, {"argv", std::vector<std::string>(argv, argv + argc)}};
        try {
            write_json_report(out_path(out_dir, "error.json"), diag);
        } catch (...) {
        }
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
