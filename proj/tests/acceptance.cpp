// Acceptance gate: one criterion per invocation (argv[1] in 1..12), one
// PASS/FAIL line each, exit 0 iff the criterion holds within its budget.
// Run with no arguments to execute the whole gate.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "filamentlab/curve_io.hpp"
#include "filamentlab/discrepancy.hpp"
#include "filamentlab/elliptic.hpp"
#include "filamentlab/estimates.hpp"
#include "filamentlab/kida.hpp"
#include "filamentlab/quasi_curve.hpp"
#include "filamentlab/rng.hpp"
#include "filamentlab/smap.hpp"
#include "filamentlab/sphere_field.hpp"
#include "filamentlab/spectral.hpp"
#include "filamentlab/tubular.hpp"
#include "oracles.hpp"

using namespace flab;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

QuasiCurve unit_circle(std::size_t n, Vec3 shift = Vec3{0, 0, 0}) {
    std::vector<Vec3> p(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 2 * M_PI * double(j) / double(n);
        p[j] = Vec3{std::cos(s), std::sin(s), 0} + shift;
    }
    return QuasiCurve(Vec3{0, 0, 0}, 2 * M_PI, std::move(p));
}

double sup_field_diff(const SphereField& a, const SphereField& b) {
    double worst = 0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, norm(a[j] - b[j]));
    return worst;
}

// --- 1: rigid-motion base family ------------------------------------------

Outcome crit1() {
    double worst = 0;
    for (int m : {2, 5, 10, 50}) {
        auto p = kida::derive_params(1.0, 1.0, 1.0 / (double(m) * m - 1.0), m);
        double w = std::sqrt(double(m) * m - 1.0);
        double errs[5] = {std::abs(p.Omega - w) / w, std::abs(p.A - 1.0), std::abs(p.V - 1.0),
                          std::abs(p.C - w) / w, std::abs(p.ell - 2 * M_PI) / (2 * M_PI)};
        for (double e : errs) worst = std::max(worst, e);
    }
    return {worst < 1e-10,
            "base family m in {2,5,10,50}: max relative error " + num(worst) + " (tol 1e-10)"};
}

// --- 2: elliptic kernel against quadrature oracles --------------------------

Outcome crit2() {
    double degen = std::max(std::abs(ell::complete_K(0.0) - M_PI / 2),
                            std::abs(ell::complete_Pi(0.0, 0.0) - M_PI / 2));
    if (degen >= 1e-14) return {false, "degenerate values off by " + num(degen)};

    Rng rng(271828);
    double worst = 0, worst_leg = 0;
    for (int i = 0; i < 50; ++i) {
        double k = rng.uniform(0.05, 0.95);
        double n = rng.uniform(-2.0, 0.9);
        double K = ell::complete_K(k);
        double u = rng.uniform(0.05, 0.95) * K;

        worst = std::max(worst, std::abs(K - oracle::K(k)));
        worst = std::max(worst, std::abs(ell::complete_E(k) - oracle::E(k)));
        worst = std::max(worst, std::abs(ell::complete_Pi(n, k) - oracle::Pi(n, k)));
        worst = std::max(worst, std::abs(ell::incomplete_E(u, k) - oracle::E_inc(u, k)));
        worst = std::max(worst, std::abs(ell::incomplete_Pi(u, n, k) - oracle::Pi_inc(u, n, k)));
        auto got = ell::jacobi_sn_cn_dn(u, k);
        auto want = oracle::jacobi(u, k);
        worst = std::max({worst, std::abs(got.sn - want.sn), std::abs(got.cn - want.cn),
                          std::abs(got.dn - want.dn)});

        double kp = std::sqrt(1.0 - k * k);
        double leg = ell::complete_E(k) * ell::complete_K(kp) +
                     ell::complete_E(kp) * ell::complete_K(k) -
                     ell::complete_K(k) * ell::complete_K(kp) - M_PI / 2;
        worst_leg = std::max(worst_leg, std::abs(leg));
    }
    bool ok = worst < 1e-10 && worst_leg < 1e-10;
    return {ok, "degenerate " + num(degen) + ", 50 random vs oracle " + num(worst) +
                    ", Legendre defect " + num(worst_leg) + " (tol 1e-10)"};
}

// --- 3: exact solutions satisfy the flow ------------------------------------

Outcome crit3() {
    double worst = 0;
    for (auto p : {kida::derive_params(1.0, 1.0, 1.0 / 24.0, 5), kida::illposed_family(1.0, 50)}) {
        auto q = kida::to_quasicurve(p, 0.0, 1024);
        auto d1 = q.derivative_samples(1);
        auto d2 = q.derivative_samples(2);
        for (std::size_t j = 0; j < q.size(); ++j)
            worst = std::max(worst,
                             norm(cross(d1[j], d2[j]) - kida::eval_velocity(p, q.node(j), 0.0)));
    }
    return {worst < 1e-6, "sup flow residual " + num(worst) + " at N=1024 (tol 1e-6)"};
}

// --- 4: conserved quantities under evolution ---------------------------------

Outcome crit4() {
    auto u0 = est::perturbed_field(SphereField::circle(256), 1e-2, 1);
    Vec3 a0 = pitch_of(u0);
    auto traj = smap::evolve(u0, 1.0, 1e-4, 100);
    auto inv = smap::invariants(traj);

    double dE = 0, dI = 0, dpitch = 0;
    bool h2_ok = true;
    for (std::size_t i = 0; i < inv.energy.size(); ++i) {
        dE = std::max(dE, std::abs(inv.energy[i] - inv.energy[0]) / inv.energy[0]);
        dI = std::max(dI, std::abs(inv.second[i] - inv.second[0]));
        if (inv.h2_value[i] > inv.h2_bound) h2_ok = false;
    }
    for (const auto& st : traj.states) dpitch = std::max(dpitch, norm(pitch_of(st) - a0));

    bool ok = dE < 1e-6 && dI < 1e-5 && dpitch < 1e-8 && h2_ok;
    return {ok, "t=1: |dE|/E " + num(dE) + " (tol 1e-6), |dI| " + num(dI) +
                    " (tol 1e-5), pitch drift " + num(dpitch) + " (tol 1e-8), H2 bound " +
                    (h2_ok ? "held" : "VIOLATED")};
}

// --- 5: the great circle is stationary ---------------------------------------

Outcome crit5() {
    auto u0 = SphereField::circle(256);
    auto traj = smap::evolve(u0, 1.0, 1e-4, 500);
    double worst = 0;
    for (const auto& st : traj.states) worst = std::max(worst, sup_field_diff(st, u0));
    return {worst < 1e-8, "sup drift " + num(worst) + " over t in [0,1] (tol 1e-8)"};
}

// --- 6: helix mechanics -------------------------------------------------------

Outcome crit6() {
    double eps = 0.1, p = 0.2;
    double q2 = eps * eps + p * p, q = std::sqrt(q2);
    auto mot = kida::helix_motion(eps, p);

    // closed forms on the sampled curve
    auto h = kida::simple_helix(eps, p, 256);
    auto d1 = h.derivative_samples(1);
    auto d2 = h.derivative_samples(2);
    double id_res = 0;
    for (std::size_t j = 0; j < h.size(); ++j)
        id_res = std::max(id_res, norm(cross(d1[j], d2[j]) + mot.slip * d1[j] -
                                       Vec3{mot.translation_speed, 0, 0}));
    double base_err = std::abs(dot(cross(d1[0], d2[0]), Vec3{1, 0, 0}) - eps * eps / (q2 * q)) +
                      std::abs(mot.base_speed - eps * eps / (q2 * q));

    // numerical evolution: tangent transport at the slip speed, base point
    // advancing along the axis at the base speed
    auto h64 = kida::simple_helix(eps, p, 64);
    auto u0 = SphereField::renormalized(h64.derivative_samples(1), h64.period());
    double t_end = 0.1;
    auto traj = smap::evolve(u0, t_end, 1e-4, 200);
    TrigInterp3 interp(u0.samples(), u0.period());
    double transport = 0;
    const auto& uT = traj.states.back();
    for (std::size_t j = 0; j < uT.size(); ++j)
        transport = std::max(transport,
                             norm(uT[j] - interp.eval(uT.node(j) - mot.slip * t_end, 0)));
    double speed_err = std::abs(traj.c_w.back().x / traj.times.back() - mot.base_speed);

    bool ok = id_res < 1e-10 && base_err < 1e-10 && transport < 1e-3 && speed_err < 1e-3;
    return {ok, "identity residual " + num(id_res) + ", base-speed defect " + num(base_err) +
                    " (tol 1e-10); evolved transport " + num(transport) + ", measured speed err " +
                    num(speed_err) + " (tol 1e-3)"};
}

// --- 7: drift of the near-degenerate family ----------------------------------

Outcome crit7() {
    bool ok = true;
    std::string detail;
    for (double sig : {1.0, 2.0}) {
        auto rep = est::illposed_experiment(sig, {50, 100, 200, 400});
        double limit = rep.limit; // sig^2/4
        std::vector<double> err;
        for (double d : rep.drift_values) err.push_back(std::abs(d - limit));
        bool decreasing = err[1] < err[0] && err[2] < err[1] && err[3] < err[2];
        bool close = err[3] < 0.1 * limit;
        ok = ok && decreasing && close;
        if (!detail.empty()) detail += "; ";
        detail += "sigma=" + num(sig) + ": |drift-" + num(limit) + "| " + num(err[0]) + "->" +
                  num(err[3]) + (decreasing ? " (decreasing" : " (INCREASING") +
                  (close ? ", final<10%)" : ", final>=10%)");
    }
    if (!ok)
        detail += " — measured drift follows sigma^2/32 + (sigma/4)/sqrt(m), away from the "
                  "sigma^2/4 target; known deviation, see README";
    return {ok, detail};
}

// --- 8: stability bound over the certified horizon ----------------------------

Outcome crit8() {
    auto u0 = SphereField::circle(256);
    auto v0 = est::perturbed_field(u0, 1e-3, 13);
    double r_gamma = disc::curvature_data(integrate_tangent(u0, Vec3{0, 0, 0})).r_gamma;
    // margin keeps the radius admissible when evolved frames see sup|d2| creep
    // above its exact value by spectral roundoff
    auto rep = est::gronwall_experiment(u0, v0, r_gamma / 8.0 * (1.0 - 1e-6), 0.03, 1e-4, 10);

    // saved times quantize at dt*save_every, so the series reaches the horizon
    // only up to one save interval
    double horizon = std::min(0.5, rep.T_r);
    double save_interval = 1e-4 * 10;
    bool covered = !rep.times.empty() && rep.times.back() > horizon - save_interval * (1.0 + 1e-9);
    bool dP_ok = true;
    for (double d : rep.d_P) dP_ok = dP_ok && d < rep.r;
    bool ok = rep.all_ok && covered && dP_ok && rep.truncated_at < 0;
    return {ok, "K " + num(rep.K) + ", F(0) " + num(rep.F0) + ", T_r " + num(rep.T_r) +
                    ", F bound " + (rep.all_ok ? "held" : "VIOLATED") + " to t=" +
                    num(rep.times.empty() ? 0.0 : rep.times.back()) + ", max d_P " +
                    num(rep.d_P.empty() ? 0.0 : *std::max_element(rep.d_P.begin(), rep.d_P.end())) +
                    " < r " + num(rep.r) + (dP_ok ? "" : " VIOLATED")};
}

// --- 9: comparison inequality suite -------------------------------------------

Outcome crit9() {
    auto g = integrate_tangent(SphereField::circle(128), Vec3{0, 0, 0});
    auto cd = disc::curvature_data(g);
    Rng rng(2024);
    int violations = 0, applicable = 0;
    double worst = -1e300;
    for (int i = 0; i < 100; ++i) {
        double amp = rng.uniform(1e-4, 1e-2);
        double r = rng.uniform(0.05, 0.12);
        auto G = integrate_tangent(est::perturbed_field(SphereField::circle(128), amp, 5000 + i),
                                   Vec3{0, 0, 0});
        if (i % 2) { // half the instances: small rigid translation
            Vec3 v{rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02)};
            auto part = G.periodic_part();
            for (auto& x : part) x += v;
            G = QuasiCurve(G.pitch(), G.period(), std::move(part));
        }
        auto rep = disc::reparametrize(g, cd, G, 0.0);
        auto report = disc::inequality_suite(G, g, rep, r);
        violations += report.violations(1e-8);
        for (const auto& c : report.checks)
            if (c.applicable) {
                ++applicable;
                worst = std::max(worst, c.lhs - c.rhs);
            }
    }
    return {violations == 0, "100 randomized instances, " + std::to_string(applicable) +
                                 " applicable checks, " + std::to_string(violations) +
                                 " violations beyond 1e-8 (worst lhs-rhs " + num(worst) + ")"};
}

// --- 10: pointwise tube estimate ----------------------------------------------

Outcome crit10() {
    auto p = kida::derive_params(1.0, 1.0, 1.0 / 24.0, 5);
    auto rep = est::pointwise_estimate_check(p, 0.3, 0.1, 1200, 7);
    bool ok = rep.admissible >= 1000 && rep.violations == 0;
    return {ok, std::to_string(rep.admissible) + " admissible samples, " +
                    std::to_string(rep.violations) + " violations beyond 1e-6*K (max lhs-rhs " +
                    num(rep.max_excess) + ")"};
}

// --- 11: weak formulation residual and its decay ------------------------------

Outcome crit11() {
    // exact translating pair: residual at the discrete level
    auto provider = [](double t) {
        const std::size_t N = 128;
        std::vector<Vec3> pts(N);
        for (std::size_t j = 0; j < N; ++j) {
            double s = 2 * M_PI * double(j) / double(N);
            pts[j] = Vec3{std::sin(s), 1.0 - std::cos(s), t};
        }
        return QuasiCurve(Vec3{0, 0, 0}, 2 * M_PI, std::move(pts));
    };
    tube::TubularField Xt(provider, 0.12);
    std::vector<double> times;
    std::vector<QuasiCurve> frames;
    for (int i = 0; i <= 10; ++i) {
        times.push_back(0.01 * i);
        frames.push_back(provider(times.back()));
    }
    double exact_res = est::weak_formulation_residual(frames, times, Xt).max_residual;

    // evolved perturbed pair: residual under save-interval halving
    auto u0 = est::perturbed_field(SphereField::circle(128), 5e-3, 4242);
    double dt = 2e-5, t_end = 0.1;
    auto run = [&](double interval) {
        int per = int(std::lround(interval / dt));
        auto traj = smap::evolve(u0, t_end, dt, per);
        auto curves = smap::reconstruct_binormal(traj);
        tube::TubularField X(provider, 0.12);
        return est::weak_formulation_residual(curves, traj.times, X);
    };
    auto coarse = run(1e-2);
    auto fine = run(5e-3);
    double order = std::log2(coarse.max_residual / fine.max_residual);

    bool ok = exact_res < 1e-6 && fine.max_residual < 1e-6 && order > 1.5 && order < 2.5 &&
              !coarse.tube_exit && !fine.tube_exit;
    return {ok, "translating pair residual " + num(exact_res) + ", evolved pair " +
                    num(coarse.max_residual) + "->" + num(fine.max_residual) +
                    " under interval halving (tol 1e-6), decay order " + num(order) +
                    " (expect ~2)"};
}

// --- 12: weak-strong ratio stability ------------------------------------------

Outcome crit12() {
    auto u0 = SphereField::circle(128);
    std::vector<double> cs;
    std::string vals;
    int i = 0;
    for (double size : {1e-2, 1e-3, 1e-4}) {
        auto rep = est::weak_strong_experiment(u0, est::perturbed_field(u0, size, 90 + i++), 0.25,
                                               1e-4, 250);
        cs.push_back(rep.empirical_C);
        if (!vals.empty()) vals += ", ";
        vals += num(rep.empirical_C);
    }
    double lo = *std::min_element(cs.begin(), cs.end());
    double hi = *std::max_element(cs.begin(), cs.end());
    bool ok = hi / lo < 2.0;
    return {ok, "empirical C at sizes {1e-2,1e-3,1e-4}: " + vals + "; spread x" + num(hi / lo) +
                    " (tol x2)"};
}

struct Criterion {
    Outcome (*fn)();
    double budget_s;
};

const Criterion kCriteria[12] = {
    {crit1, 1}, {crit2, 10}, {crit3, 5},   {crit4, 120}, {crit5, 60},  {crit6, 120},
    {crit7, 5}, {crit8, 180}, {crit9, 60}, {crit10, 60}, {crit11, 120}, {crit12, 300},
};

int run_one(int idx) {
    const Criterion& c = kCriteria[idx - 1];
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = c.fn();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_budget = elapsed < c.budget_s;
    bool ok = out.ok && in_budget;
    std::printf("criterion %d: %s — %s [%.1f s%s]\n", idx, ok ? "PASS" : "FAIL",
                out.detail.c_str(), elapsed,
                in_budget ? "" : (", over budget " + num(c.budget_s) + " s").c_str());
    std::fflush(stdout);
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) {
        int idx = std::atoi(argv[1]);
        if (idx < 1 || idx > 12) {
            std::fprintf(stderr, "usage: %s [1..12]\n", argv[0]);
            return 2;
        }
        return run_one(idx);
    }
    int failures = 0;
    for (int idx = 1; idx <= 12; ++idx) failures += run_one(idx);
    if (failures) std::printf("%d of 12 criteria failed\n", failures);
    return failures ? 1 : 0;
}
