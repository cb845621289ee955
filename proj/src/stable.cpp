#include "stablesde/stable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stablesde {

using std::numbers::pi;

double levy_constant(double alpha) {
    // the closed form is valid on (0,1) as well, where it is needed for
    // the companion constant c2(alpha) = (2 pi c1(alpha-1))^{-1}
    if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0)
        throw DomainError("levy_constant: alpha must lie in (0,1) or (1,2)");
    return alpha / (2.0 * std::tgamma(1.0 - alpha) * std::cos(alpha * pi / 2.0));
}

StableParams::StableParams(double a) : alpha(a) {
    if (!(a > 1.0 && a < 2.0))
        throw DomainError("StableParams: alpha must lie in (1,2)");
    c1 = levy_constant(a);
    // c2(alpha) = (2*pi*c1(alpha-1))^{-1}; alpha-1 in (0,1) so the c1
    // formula is evaluated directly, outside levy_constant's (1,2) guard
    const double am1 = a - 1.0;
    const double c1_am1 =
        am1 / (2.0 * std::tgamma(1.0 - am1) * std::cos(am1 * pi / 2.0));
    c2 = 1.0 / (2.0 * pi * c1_am1);
}

double levy_tail_mass(const StableParams& p, double eps) {
    if (!(eps > 0.0)) throw DomainError("levy_tail_mass: eps must be > 0");
    return 2.0 * p.c1 * std::pow(eps, -p.alpha) / p.alpha;
}

double small_jump_variance(const StableParams& p, double eps) {
    if (!(eps > 0.0)) throw DomainError("small_jump_variance: eps must be > 0");
    return 2.0 * p.c1 * std::pow(eps, 2.0 - p.alpha) / (2.0 - p.alpha);
}

double sample_stable_increment(const StableParams& p, double dt, Rng& rng) {
    if (!(dt > 0.0)) throw DomainError("sample_stable_increment: dt must be > 0");
    const double a = p.alpha;
    const double theta = rng.uniform(-pi / 2.0, pi / 2.0);
    const double w = rng.exponential();
    // CMS for the symmetric case; marginal CF is exp(-|xi|^alpha)
    const double s = std::sin(a * theta) / std::pow(std::cos(theta), 1.0 / a) *
                     std::pow(std::cos((1.0 - a) * theta) / w, (1.0 - a) / a);
    return std::pow(dt, 1.0 / a) * s;
}

JumpPath simulate_levy_path(const StableParams& p, double T, double dt,
                            double eps_jump, SmallJumpMode mode,
                            std::uint64_t seed, std::uint64_t path_index) {
    if (!(T > 0.0 && dt > 0.0 && eps_jump > 0.0))
        throw DomainError("simulate_levy_path: T, dt, eps_jump must be > 0");

    Rng rng(seed, path_index);
    const double rate = levy_tail_mass(p, eps_jump);
    const double sigma2 = small_jump_variance(p, eps_jump);

    // retained jump times and sizes first, then merge with the uniform grid
    std::vector<std::pair<double, double>> jump_events;
    double clock = rng.exponential(rate);
    while (clock < T) {
        const double u = rng.uniform();
        const double mag = eps_jump * std::pow(u, -1.0 / p.alpha);
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        jump_events.emplace_back(clock, sign * mag);
        clock += rng.exponential(rate);
    }

    JumpPath path;
    path.eps_jump = eps_jump;
    path.small_jump_mode = mode;

    const auto n_steps = static_cast<std::size_t>(std::ceil(T / dt));
    path.times.reserve(n_steps + jump_events.size() + 1);
    path.times.push_back(0.0);
    std::size_t je = 0;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const double t = std::min(i * dt, T);
        while (je < jump_events.size() && jump_events[je].first < t) {
            if (jump_events[je].first > path.times.back())
                path.times.push_back(jump_events[je].first);
            ++je;
        }
        if (t > path.times.back()) path.times.push_back(t);
    }

    path.values.assign(path.times.size(), 0.0);
    path.drift_record.assign(path.times.size(), 0.0);
    je = 0;
    for (std::size_t i = 1; i < path.times.size(); ++i) {
        const double h = path.times[i] - path.times[i - 1];
        double incr = 0.0;
        if (mode == SmallJumpMode::gaussian_surrogate && h > 0.0)
            incr += std::sqrt(sigma2 * h) * rng.normal();
        double jump_here = 0.0;
        while (je < jump_events.size() && jump_events[je].first <= path.times[i]) {
            jump_here += jump_events[je].second;
            path.jumps.push_back({jump_events[je].first, jump_events[je].second, i});
            ++je;
        }
        path.values[i] = path.values[i - 1] + incr + jump_here;
    }
    return path;
}

}  // namespace stablesde
