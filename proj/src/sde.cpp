#include "stablesde/sde.hpp"

#include <algorithm>
#include <cmath>

namespace stablesde {

DrivingNoise draw_noise(const StableParams& p, const SolverConfig& cfg,
                        std::uint64_t path_index) {
    // same event layout as simulate_levy_path, with the gaussian surrogate
    // increments stored per step instead of being folded into values
    Rng rng(cfg.seed, path_index);
    const double rate = levy_tail_mass(p, cfg.eps_jump);
    const double sigma2 = small_jump_variance(p, cfg.eps_jump);

    std::vector<std::pair<double, double>> events;
    double clock = rng.exponential(rate);
    while (clock < cfg.T) {
        const double u = rng.uniform();
        const double mag = cfg.eps_jump * std::pow(u, -1.0 / p.alpha);
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        events.emplace_back(clock, sign * mag);
        clock += rng.exponential(rate);
    }

    DrivingNoise noise;
    noise.eps_jump = cfg.eps_jump;
    noise.mode = cfg.small_jump_mode;
    const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.T / cfg.dt));
    noise.times.push_back(0.0);
    std::size_t je = 0;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const double t = std::min(i * cfg.dt, cfg.T);
        while (je < events.size() && events[je].first < t) {
            if (events[je].first > noise.times.back())
                noise.times.push_back(events[je].first);
            ++je;
        }
        if (t > noise.times.back()) noise.times.push_back(t);
    }
    noise.gauss.assign(noise.times.size(), 0.0);
    je = 0;
    for (std::size_t i = 1; i < noise.times.size(); ++i) {
        const double h = noise.times[i] - noise.times[i - 1];
        if (cfg.small_jump_mode == SmallJumpMode::gaussian_surrogate && h > 0.0)
            noise.gauss[i] = std::sqrt(sigma2 * h) * rng.normal();
        while (je < events.size() && events[je].first <= noise.times[i]) {
            noise.jumps.push_back({events[je].first, events[je].second, i});
            ++je;
        }
    }
    return noise;
}

JumpPath integrate_mollified(const StableParams& p, const DrivingNoise& noise,
                             const std::function<double(double)>& drift,
                             double x0) {
    JumpPath path;
    path.times = noise.times;
    path.eps_jump = noise.eps_jump;
    path.small_jump_mode = noise.mode;
    path.jumps = noise.jumps;
    path.values.assign(noise.times.size(), x0);
    path.drift_record.assign(noise.times.size(), 0.0);

    std::size_t je = 0;
    for (std::size_t i = 1; i < noise.times.size(); ++i) {
        const double h = noise.times[i] - noise.times[i - 1];
        const double b = drift(path.values[i - 1]);  // left-endpoint Euler
        double jump_here = 0.0;
        while (je < noise.jumps.size() && noise.jumps[je].node_index == i) {
            jump_here += noise.jumps[je].size;
            ++je;
        }
        path.drift_record[i] = path.drift_record[i - 1] + b * h;
        path.values[i] =
            path.values[i - 1] + b * h + noise.gauss[i] + jump_here;
    }
    return path;
}

double guarded_dt(const StableParams& p, const SolverConfig& cfg,
                  const std::function<double(double)>& drift) {
    double dt = cfg.dt;
    for (int halvings = 0; halvings < 12; ++halvings) {
        SolverConfig pilot = cfg;
        pilot.dt = dt;
        auto noise = draw_noise(p, pilot, 0);
        auto path = integrate_mollified(p, noise, drift, cfg.x0);
        double sup = 0.0;
        for (double x : path.values) sup = std::max(sup, std::abs(drift(x)));
        if (sup * dt <= 0.1) return dt;
        dt *= 0.5;
    }
    return dt;
}

std::vector<JumpPath> simulate_mollified(const StableParams& p,
                                         const SolverConfig& cfg,
                                         const SignedMeasure& mu) {
    auto drift = mollify(mu, cfg.n_mollify);
    SolverConfig run = cfg;
    if (!mu.is_zero()) run.dt = guarded_dt(p, cfg, drift);
    std::vector<JumpPath> ensemble;
    ensemble.reserve(static_cast<std::size_t>(cfg.n_paths));
    for (int k = 0; k < cfg.n_paths; ++k) {
        auto noise = draw_noise(p, run, static_cast<std::uint64_t>(k));
        ensemble.push_back(integrate_mollified(p, noise, drift, cfg.x0));
    }
    return ensemble;
}

CauchyReport drift_cauchy_report(const StableParams& p, const SolverConfig& cfg,
                                 const SignedMeasure& mu,
                                 const std::vector<int>& levels) {
    CauchyReport rep;
    rep.levels = levels;

    // the guard dt must be common across levels so paths stay coupled;
    // take the finest (stiffest) level's guard
    double dt = cfg.dt;
    for (int n : levels) {
        SolverConfig c = cfg;
        c.n_mollify = n;
        dt = std::min(dt, guarded_dt(p, c, mollify(mu, n)));
    }
    SolverConfig run = cfg;
    run.dt = dt;

    std::vector<std::function<double(double)>> drifts;
    for (int n : levels) drifts.push_back(mollify(mu, n));

    const auto n_paths = static_cast<std::size_t>(cfg.n_paths);
    std::vector<std::vector<double>> pair_sup(levels.size() > 0 ? levels.size() - 1 : 0);
    std::vector<double> abs_drift_per_level(levels.size(), 0.0);

    for (std::size_t k = 0; k < n_paths; ++k) {
        auto noise = draw_noise(p, run, k);
        std::vector<JumpPath> per_level;
        for (std::size_t li = 0; li < levels.size(); ++li) {
            per_level.push_back(integrate_mollified(p, noise, drifts[li], cfg.x0));
            // int |mu_n|(X_s) ds along this path
            double ab = 0.0;
            const auto& path = per_level.back();
            for (std::size_t i = 1; i < path.times.size(); ++i)
                ab += std::abs(drifts[li](path.values[i - 1])) *
                      (path.times[i] - path.times[i - 1]);
            abs_drift_per_level[li] = std::max(abs_drift_per_level[li], ab);
        }
        for (std::size_t li = 0; li + 1 < levels.size(); ++li) {
            double sup = 0.0;
            const auto& a = per_level[li].drift_record;
            const auto& b = per_level[li + 1].drift_record;
            for (std::size_t i = 0; i < a.size(); ++i)
                sup = std::max(sup, std::abs(a[i] - b[i]));
            pair_sup[li].push_back(sup);
        }
    }

    for (auto& v : pair_sup) {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        rep.pair_distances.push_back(v[v.size() / 2]);
    }
    for (double a : abs_drift_per_level)
        rep.sup_abs_drift = std::max(rep.sup_abs_drift, a);

    rep.decaying = true;
    for (std::size_t i = 1; i < rep.pair_distances.size(); ++i)
        if (rep.pair_distances[i] > rep.pair_distances[i - 1])
            rep.decaying = false;
    return rep;
}

}  // namespace stablesde
