#include "acceptance_suite.hpp"

#include "stablesde/local_time.hpp"
#include "stablesde/potential.hpp"
#include "stablesde/quadrature.hpp"
#include "stablesde/sde.hpp"
#include "stablesde/sharpness.hpp"
#include "stablesde/zvonkin.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace stablesde;
using clock_type = std::chrono::steady_clock;

int thread_count() {
    if (const char* env = std::getenv("STABLESDE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 4;
}

void parallel_for(int n, const std::function<void(int)>& body) {
    const int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) body(i);
        });
    for (auto& t : pool) t.join();
}

bool report(int idx, const char* name, bool pass, double seconds) {
    std::printf("criterion %d (%s): %s  [%.1fs]\n", idx, name,
                pass ? "PASS" : "FAIL", seconds);
    std::fflush(stdout);
    return pass;
}

// ---- 1: constants ----------------------------------------------------------

bool criterion_constants() {
    bool ok = true;
    // c1(1.5) = 1.5/(2 sqrt(2 pi)) via Gamma(-1/2) = -2 sqrt(pi)
    ok &= std::fabs(levy_constant(1.5) - 1.5 / (2.0 * std::sqrt(2.0 * M_PI))) < 1e-10;
    for (double a : {1.2, 1.5, 1.8}) {
        StableParams p(a);
        const double c2 = 1.0 / (2.0 * M_PI * levy_constant(a - 1.0));
        ok &= std::fabs(p.c2 - c2) <= 1e-15 * c2;
        for (double lam : {0.5, 1.0, 5.0})
            ok &= std::fabs(u_lambda(p, lam, 0.0) - u_lambda_zero(p, lam)) < 1e-8;
    }
    return ok;
}

// ---- 2: kernels ------------------------------------------------------------

bool criterion_kernels() {
    bool ok = true;
    StableParams p(1.5);

    // normalization over [-L,L] plus the power-law tail
    const double L = 200.0;
    double mass = 0.0;
    for (double a : {-L, -5.0, 0.0}) {
        const double b = (a == -L) ? -5.0 : (a == -5.0 ? 0.0 : 5.0);
        mass += quad::integrate([&](double z) { return stable_heat_kernel(p, 1.0, z); },
                                a, b, 1e-11);
    }
    mass += quad::integrate([&](double z) { return stable_heat_kernel(p, 1.0, z); },
                            5.0, L, 1e-11);
    mass += 2.0 * p.c1 * std::pow(L, -p.alpha) / p.alpha;
    std::printf("  kernels: |mass-1| = %.3e (tol 1e-6)\n", std::fabs(mass - 1.0));
    ok &= std::fabs(mass - 1.0) < 1e-6;

    double selfsim = 0.0;
    for (double t : {0.3, 2.0})
        for (double z : {0.0, 0.7, 3.0}) {
            const double s = std::pow(t, -1.0 / p.alpha);
            selfsim = std::max(selfsim, std::fabs(stable_heat_kernel(p, t, z) -
                                                  s * stable_heat_kernel(p, 1.0, s * z)));
        }
    std::printf("  kernels: self-similarity residual = %.3e (tol 1e-8)\n", selfsim);
    ok &= selfsim < 1e-8;
    const double peak_err = std::fabs(stable_heat_kernel(p, 1.0, 0.0) -
                                      std::tgamma(1.0 + 1.0 / p.alpha) / M_PI);
    std::printf("  kernels: peak value residual = %.3e (tol 1e-8)\n", peak_err);
    ok &= peak_err < 1e-8;

    // Chapman-Kolmogorov for the perturbed kernel, small atomic drift.
    // Atoms sit on grid nodes: the series term has a |z-a|^{alpha-1} cusp
    // at each atom and the trapezoid rule converges slowly across an
    // off-node cusp.
    SignedMeasure mu;
    mu.atoms.push_back({-0.25, 0.06});
    mu.atoms.push_back({0.5, -0.04});
    const int nz = 97;
    const double Lz = 12.0;
    ParametrixSpec spec;
    for (int i = 0; i < nz; ++i)
        spec.x_nodes.push_back(-Lz + 2.0 * Lz * i / (nz - 1.0));
    spec.y_nodes = spec.x_nodes;
    spec.t_nodes = {0.5, 1.0};
    auto grid = parametrix_density(p, mu, spec, 4);
    std::printf("  kernels: parametrix converged = %d\n", int(grid.converged));
    ok &= grid.converged;

    const double dz = 2.0 * Lz / (nz - 1.0);
    double sup_p = 0.0;
    for (int iy = 0; iy < nz; ++iy)
        sup_p = std::max(sup_p, grid.at(1, 48, iy));
    double ck_resid = 0.0;
    for (int ix : {40, 48, 56})
        for (int iy : {40, 48, 56}) {
            double conv = 0.0;
            for (int iz = 0; iz < nz; ++iz) {
                const double w = (iz == 0 || iz == nz - 1) ? 0.5 : 1.0;
                conv += w * grid.at(0, ix, iz) * grid.at(0, iz, iy) * dz;
            }
            ck_resid = std::max(ck_resid,
                                std::fabs(conv - grid.at(1, ix, iy)));
        }
    std::printf("  kernels: CK residual = %.3e relative to sup = %.4f (tol 1e-2)\n",
                ck_resid / sup_p, sup_p);
    ok &= ck_resid < 1e-2 * sup_p;

    // measured term decay: geometric with ratio < 0.5
    const auto& sups = grid.term_sups;
    bool decay = grid.tail_ratio < 0.5;
    for (std::size_t k = 1; k < sups.size(); ++k)
        decay &= sups[k] < 0.5 * sups[k - 1];
    std::printf("  kernels: term ratio = %.4f, geometric decay = %d (tol 0.5)\n",
                grid.tail_ratio, int(decay));
    ok &= decay;
    return ok;
}

// ---- 3: exact scalings -----------------------------------------------------

bool criterion_scalings() {
    bool ok = true;
    StableParams p(1.5);
    for (double x : {0.17, 1.0, 9.4}) {
        const double lhs = renormalized_potential_v(p, 2.0 * x);
        const double rhs = std::pow(2.0, p.alpha - 1.0) * renormalized_potential_v(p, x);
        ok &= std::fabs(lhs - rhs) <= 4e-15 * std::fabs(rhs);
    }
    for (double eps : {0.01, 0.1, 1.0}) {
        const double lhs = levy_tail_mass(p, eps / 2.0);
        const double rhs = std::pow(2.0, p.alpha) * levy_tail_mass(p, eps);
        ok &= std::fabs(lhs - rhs) <= 4e-15 * std::fabs(rhs);
    }
    // translation covariance of the Tanaka functional
    auto path = simulate_levy_path(p, 0.5, 1e-3, 0.05,
                                   SmallJumpMode::gaussian_surrogate, 424242, 0);
    auto base = tanaka_local_time(p, path, 0.3);
    JumpPath shifted = path;
    for (auto& v : shifted.values) v += 5.25;
    auto moved = tanaka_local_time(p, shifted, 0.3 + 5.25);
    double sup = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < base.gamma.size(); ++i) {
        sup = std::max(sup, std::fabs(base.gamma[i] - moved.gamma[i]));
        scale = std::max(scale, std::fabs(base.gamma[i]));
    }
    ok &= sup <= 1e-10 * std::max(scale, 1.0);
    return ok;
}

// ---- 4: Kato fixtures ------------------------------------------------------

bool criterion_kato() {
    bool ok = true;
    auto leb = SignedMeasure::lebesgue(-1.0, 1.0);
    for (double eta : {0.3, 0.7})
        for (double r : {0.05, 0.2}) {
            auto m = kato_modulus(leb, eta, r);
            ok &= !m.divergent &&
                  std::fabs(m.value - 2.0 * std::pow(r, eta) / eta) <
                      1e-6 * m.value;
        }
    // 12-cell verdict matrix: PASS exactly when eta > s. The modulus of
    // |x|^{-s} decays like 2 r^{eta-s}/(eta-s) so the pass threshold is
    // set at that oracle scale for the final r of the schedule
    const std::vector<double> r_sched{0.2, 0.1, 0.05, 0.02, 0.01};
    int agree = 0;
    for (double s : {0.2, 0.5, 0.8})
        for (double eta : {0.1, 0.3, 0.6, 0.9}) {
            SignedMeasure nu;
            nu.powers.push_back({1.0, 0.0, s, -1.0, 1.0});
            const double tol =
                eta > s
                    ? 1.2 * 2.0 * std::pow(r_sched.back(), eta - s) / (eta - s)
                    : 1.0;
            const bool verdict = is_kato(nu, eta, r_sched, tol).pass;
            if (verdict == (eta > s)) ++agree;
        }
    ok &= (agree == 12);

    SharpnessParams sp(1.5);
    auto mu = truncated_sharpness_measure(sp);
    ok &= kato_modulus(mu, sp.alpha - 1.0, 0.1).divergent;
    const double tol_sharp =
        1.2 * 2.0 * sp.C_alpha * std::pow(r_sched.back(), 0.05) / 0.05;
    ok &= is_kato(mu, sp.alpha - 1.0 + 0.05, r_sched, tol_sharp).pass;
    return ok;
}

// ---- 5: local time identification ------------------------------------------

bool criterion_local_time() {
    StableParams p(1.5);
    const int n_paths = 100;
    const double T = 1.0;
    const double dt = T / 2e5;
    const double eps = 0.02;
    const double bw = 0.1;

    std::vector<double> xs(21);
    for (int i = 0; i < 21; ++i) xs[i] = -1.0 + i * 0.1;

    std::vector<double> gamma_sum(21, 0.0), ell_sum(21, 0.0);
    std::vector<double> mart0(n_paths, 0.0);
    std::vector<double> occ_err;
    std::vector<std::vector<double>> g_rows(n_paths), l_rows(n_paths);
    std::vector<double> occ_rel(n_paths, -1.0);

    parallel_for(n_paths, [&](int k) {
        auto path = simulate_levy_path(p, T, dt, eps,
                                       SmallJumpMode::gaussian_surrogate,
                                       20250815, static_cast<std::uint64_t>(k));
        auto field = local_time_field(p, path, xs, {T}, bw);
        g_rows[k].resize(21);
        l_rows[k].resize(21);
        for (int i = 0; i < 21; ++i) {
            g_rows[k][i] = field.at(field.gamma, 0, i);
            l_rows[k][i] = field.at(field.ell, 0, i);
        }
        mart0[k] = field.at(field.martingale, 0, 10);  // x = 0
        if (k < 10) {
            // occupation identity int f(X) ds = int f ell on a wide grid
            auto f = [](double x) { return std::exp(-x * x); };
            double time_side = 0.0;
            for (std::size_t i = 0; i + 1 < path.times.size(); ++i)
                time_side += f(path.values[i]) * (path.times[i + 1] - path.times[i]);
            double lo = *std::min_element(path.values.begin(), path.values.end());
            double hi = *std::max_element(path.values.begin(), path.values.end());
            lo -= 1.0;
            hi += 1.0;
            const int n = 1 + static_cast<int>((hi - lo) / 0.02);
            std::vector<double> grid(n);
            for (int i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * i / (n - 1.0);
            auto ell = occupation_density(path, grid, T, bw);
            double space_side = 0.0;
            for (int i = 0; i + 1 < n; ++i)
                space_side += 0.5 * (f(grid[i]) * ell[i] + f(grid[i + 1]) * ell[i + 1]) *
                              (grid[i + 1] - grid[i]);
            occ_rel[k] = std::fabs(space_side - time_side) / time_side;
        }
    });

    for (int k = 0; k < n_paths; ++k)
        for (int i = 0; i < 21; ++i) {
            gamma_sum[i] += g_rows[k][i];
            ell_sum[i] += l_rows[k][i];
        }

    bool ok = true;
    double mare = 0.0;
    for (int i = 0; i < 21; ++i) {
        const double g = gamma_sum[i] / n_paths, l = ell_sum[i] / n_paths;
        mare += std::fabs(g - l) / l;
    }
    mare /= 21.0;
    ok &= mare < 0.15;

    double occ_mean = 0.0;
    int occ_n = 0;
    for (double e : occ_rel)
        if (e >= 0.0) {
            occ_mean += e;
            ++occ_n;
        }
    occ_mean /= occ_n;
    ok &= occ_mean < 0.02;

    double m_mean = 0.0, m_var = 0.0;
    for (double m : mart0) m_mean += m;
    m_mean /= n_paths;
    for (double m : mart0) m_var += (m - m_mean) * (m - m_mean);
    const double se = std::sqrt(m_var / (n_paths - 1.0) / n_paths);
    ok &= std::fabs(m_mean) < 4.0 * se;

    std::printf("  [local time] MARE=%.3f occ=%.4f N_hat=%.4g (4se=%.4g)\n", mare,
                occ_mean, m_mean, 4.0 * se);
    return ok;
}

// ---- 6: drift equivalence ---------------------------------------------------

bool criterion_drift_equivalence() {
    StableParams p(1.5);
    SignedMeasure mu;
    {
        SignedMeasure::TablePiece tp;
        for (int i = 0; i <= 80; ++i) {
            const double x = -1.0 + i / 40.0;
            tp.xs.push_back(x);
            tp.ys.push_back(0.5 * mollifier_bump(x));
        }
        mu.tables.push_back(tp);
    }
    SolverConfig cfg;
    cfg.x0 = 0.0;
    cfg.T = 1.0;
    cfg.dt = 5e-5;
    cfg.eps_jump = 0.05;
    cfg.n_mollify = 4;
    cfg.n_paths = 48;
    cfg.seed = 90210;

    const std::vector<double> checkpoints{0.25, 0.5, 1.0};
    std::vector<double> xs;
    for (int i = 0; i <= 60; ++i) xs.push_back(-1.5 + i / 20.0);

    auto drift = mollify(mu, cfg.n_mollify);
    std::vector<std::vector<double>> lt(cfg.n_paths), at(cfg.n_paths);
    parallel_for(cfg.n_paths, [&](int k) {
        auto noise = draw_noise(p, cfg, static_cast<std::uint64_t>(k));
        auto path = integrate_mollified(p, noise, drift, cfg.x0);
        auto field = local_time_field(p, path, xs, checkpoints, 0.1);
        for (double t : checkpoints)
            lt[k].push_back(drift_from_local_time(p, field, mu, t));
        for (double t : checkpoints) {
            std::size_t i = 0;
            while (path.times[i] < t - 1e-12) ++i;
            at[k].push_back(path.drift_record[i]);
        }
    });

    bool ok = true;
    for (std::size_t j = 0; j < checkpoints.size(); ++j) {
        double lt_mean = 0.0, at_mean = 0.0;
        for (int k = 0; k < cfg.n_paths; ++k) {
            lt_mean += lt[k][j];
            at_mean += at[k][j];
        }
        lt_mean /= cfg.n_paths;
        at_mean /= cfg.n_paths;
        const double rel = std::fabs(lt_mean - at_mean) / std::fabs(at_mean);
        std::printf("  [drift] t=%.2f  int gamma dmu=%.4f  A_t=%.4f  rel=%.3f\n",
                    checkpoints[j], lt_mean, at_mean, rel);
        ok &= rel < 0.15;
    }
    return ok;
}

// ---- 7: Zvonkin -------------------------------------------------------------

double kolmogorov_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

bool criterion_zvonkin() {
    StableParams p(1.5);
    SignedMeasure mu;
    {
        SignedMeasure::TablePiece tp;
        for (int i = 0; i <= 80; ++i) {
            const double x = -1.0 + i / 40.0;
            tp.xs.push_back(x);
            tp.ys.push_back(0.4 * mollifier_bump(x));
        }
        mu.tables.push_back(tp);
    }

    // lambda sweep: eps0 decreasing, pick the first level below 1
    ResolventOptions opt;
    opt.grid_points = 241;
    double lambda_star = -1.0;
    double prev = 1e9;
    ZvonkinTransform zt;
    bool ok = true;
    for (double lam : {4.0, 8.0, 16.0}) {
        auto cand = solve_resolvent(p, mu, lam, opt);
        ok &= cand.eps0() < prev;
        prev = cand.eps0();
        if (cand.eps0() < 1.0 && lambda_star < 0.0) {
            lambda_star = lam;
            zt = cand;
        }
    }
    ok &= lambda_star > 0.0 && zt.eps0() < 1.0;

    for (double x = -4.0; x <= 4.0; x += 0.25)
        ok &= std::fabs(zt.phi_inverse(zt.phi(x)) - x) < 1e-9;

    const double e = zt.eps0();
    const double m_lo = std::pow(1.0 - e, 2.0 + p.alpha);
    const double m_hi = std::pow(1.0 + e, 2.0 + p.alpha);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) {
            const double x = -2.0 + 4.0 * i / 49.0;
            double r = -2.0 + 4.0 * j / 49.0;
            if (std::fabs(r) < 1e-3) r = 1e-3;
            const double m = transformed_coefficients(p, zt, x, r).m;
            ok &= (m >= m_lo * (1.0 - 1e-9) && m <= m_hi * (1.0 + 1e-9));
        }

    // transformed vs direct simulation, common noise
    const int n_grid = 161;
    std::vector<double> ax(n_grid), av(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        ax[i] = -8.0 + 16.0 * i / (n_grid - 1.0);
        av[i] = transformed_drift_a(p, zt, zt.phi(ax[i]));
    }
    auto a_interp = [&](double y) {
        // grid is in phi-image coordinates via the x table
        const double x = zt.phi_inverse(y);
        if (x <= ax.front()) return av.front();
        if (x >= ax.back()) return av.back();
        const double s = (x - ax.front()) / (ax[1] - ax[0]);
        const auto i = static_cast<std::size_t>(s);
        const double w = s - double(i);
        return av[i] * (1.0 - w) + av[i + 1] * w;
    };

    SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 1e-3;
    cfg.eps_jump = 0.05;
    cfg.seed = 5150;
    const int n_paths = 400;
    std::vector<double> direct(n_paths), transformed(n_paths);
    auto drift = [&](double x) { return mu.density(x); };
    parallel_for(n_paths, [&](int k) {
        auto noise = draw_noise(p, cfg, static_cast<std::uint64_t>(k));
        auto path = integrate_mollified(p, noise, drift, 0.0);
        direct[k] = path.values.back();

        // Euler in the transformed coordinate with the same noise
        double y = zt.phi(0.0);
        std::size_t jn = 0;
        for (std::size_t i = 0; i + 1 < noise.times.size(); ++i) {
            const double h = noise.times[i + 1] - noise.times[i];
            const double xpre = zt.phi_inverse(y);
            y += a_interp(y) * h + (zt.w_prime(xpre) + 1.0) * noise.gauss[i];
            while (jn < noise.jumps.size() && noise.jumps[jn].node_index == i + 1) {
                const double xj = zt.phi_inverse(y);
                y = zt.phi(xj + noise.jumps[jn].size);
                ++jn;
            }
        }
        transformed[k] = zt.phi_inverse(y);
    });
    const double ks = kolmogorov_distance(direct, transformed);
    std::printf("  [zvonkin] lambda*=%.1f eps0=%.3f KS=%.4f\n", lambda_star, e, ks);
    ok &= ks < 0.05;
    return ok;
}

// ---- 8: sharpness ------------------------------------------------------------

bool criterion_sharpness() {
    bool ok = true;
    int pairs = 0;
    for (double a : {1.15, 1.3, 1.5, 1.7, 1.85})
        for (double frac : {0.2, 0.4, 0.6, 0.8}) {
            const double z = (a - 1.0) + frac * (a / 2.0 - (a - 1.0));
            const double raw = sharpness_integral(a, z);
            const double pos = sharpness_integral_positive_form(a, z);
            ok &= raw > 0.0 && std::isfinite(raw);
            ok &= std::fabs(raw - pos) < 1e-6 * std::max(1.0, std::fabs(raw));
            ++pairs;
        }
    ok &= (pairs == 20);

    auto rep = scaling_constant_hat_c(1.5, 0.6, {0.5, 1.0, 2.0, 5.0});
    ok &= rep.spread < 0.01;

    SharpnessParams sp(1.5);
    SolverConfig cfg;
    cfg.T = 0.4;
    cfg.dt = 1e-3;
    cfg.eps_jump = 0.05;
    cfg.n_paths = 12;
    cfg.seed = 31337;
    auto fx = nonexistence_fixture(sp, cfg, {2, 3, 4, 5});
    std::printf("  [sharpness] expected-FAIL fixture: floor=%.4g control=%.4g %s\n",
                fx.fixture_floor, fx.control_floor,
                fx.fixture_stalled ? "stalled (as expected)" : "NOT stalled");
    ok &= fx.fixture_stalled;
    return ok;
}

// ---- 9: reproducibility -------------------------------------------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool criterion_reproducibility(const std::string& cli) {
    if (cli.empty()) return false;
    std::system("rm -rf acc_rep1 acc_rep2");
    const std::string run1 = "\"" + cli +
                             "\" sharpness --alpha 1.5 --seed 7 --out acc_rep1 "
                             ">/dev/null 2>&1";
    if (std::system(run1.c_str()) != 0) return false;
    const std::string run2 = "\"" + cli +
                             "\" sharpness --config acc_rep1/manifest.json "
                             "--out acc_rep2 >/dev/null 2>&1";
    if (std::system(run2.c_str()) != 0) return false;
    const std::string a = slurp("acc_rep1/sharpness.csv");
    const std::string b = slurp("acc_rep2/sharpness.csv");
    return !a.empty() && a == b;
}

}  // namespace

int run_acceptance_suite(const std::string& cli_path) {
    struct Entry {
        const char* name;
        std::function<bool()> fn;
    };
    const std::vector<Entry> entries{
        {"constants", criterion_constants},
        {"kernels", criterion_kernels},
        {"exact scalings", criterion_scalings},
        {"kato fixtures", criterion_kato},
        {"local time identification", criterion_local_time},
        {"drift equivalence", criterion_drift_equivalence},
        {"zvonkin", criterion_zvonkin},
        {"sharpness", criterion_sharpness},
        {"reproducibility", [&] { return criterion_reproducibility(cli_path); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto start = clock_type::now();
        bool pass = false;
        try {
            pass = entries[i].fn();
        } catch (const std::exception& e) {
            std::printf("  [exception] %s\n", e.what());
        }
        const double secs =
            std::chrono::duration<double>(clock_type::now() - start).count();
        if (!report(static_cast<int>(i + 1), entries[i].name, pass, secs))
            ++failures;
    }
    std::printf("%d/9 criteria passed\n", 9 - failures);
    return failures;
}
