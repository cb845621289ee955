#include "stablesde/measure.hpp"

#include "stablesde/quadrature.hpp"
#include "stablesde/stable.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace stablesde {

using json = nlohmann::json;
using std::numbers::pi;

namespace {

double interp_table(const SignedMeasure::TablePiece& tp, double x) {
    if (tp.xs.empty() || x < tp.xs.front() || x > tp.xs.back()) return 0.0;
    auto it = std::upper_bound(tp.xs.begin(), tp.xs.end(), x);
    const auto i = static_cast<std::size_t>(
        std::max<std::ptrdiff_t>(1, it - tp.xs.begin()));
    const std::size_t j = std::min(i, tp.xs.size() - 1);
    const double x0 = tp.xs[j - 1], x1 = tp.xs[j];
    const double w = (x1 > x0) ? (x - x0) / (x1 - x0) : 0.0;
    return tp.ys[j - 1] * (1.0 - w) + tp.ys[j] * w;
}

// int_a^b |y - c|^{-s} dy, s < 1, closed form
double power_mass(double c, double s, double a, double b) {
    const double q = 1.0 - s;
    auto prim = [&](double y) {
        return std::pow(std::abs(y - c), q) / q * (y >= c ? 1.0 : -1.0);
    };
    return prim(b) - prim(a);
}

void check_integrable(const SignedMeasure& nu) {
    for (const auto& pp : nu.powers)
        if (pp.s >= 1.0)
            throw DomainError("SignedMeasure: power piece with s >= 1 has "
                              "infinite total variation");
}

// golden-section refinement of a unimodal-ish maximum around x0
template <typename F>
double refine_max(F&& f, double lo, double hi, int iters = 40) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return std::max(fc, fd);
}

}  // namespace

double SignedMeasure::density(double x) const {
    double d = 0.0;
    for (const auto& pp : powers)
        if (x >= pp.lo && x <= pp.hi && x != pp.center)
            d += pp.coef * std::pow(std::abs(x - pp.center), -pp.s);
    for (const auto& tp : tables) d += interp_table(tp, x);
    return d;
}

double SignedMeasure::abs_density(double x) const {
    double d = 0.0;
    for (const auto& pp : powers)
        if (x >= pp.lo && x <= pp.hi && x != pp.center)
            d += std::abs(pp.coef) * std::pow(std::abs(x - pp.center), -pp.s);
    for (const auto& tp : tables) d += std::abs(interp_table(tp, x));
    return d;
}

std::pair<double, double> SignedMeasure::support() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& a : atoms) {
        lo = std::min(lo, a.x);
        hi = std::max(hi, a.x);
    }
    for (const auto& pp : powers) {
        lo = std::min(lo, pp.lo);
        hi = std::max(hi, pp.hi);
    }
    for (const auto& tp : tables)
        if (!tp.xs.empty()) {
            lo = std::min(lo, tp.xs.front());
            hi = std::max(hi, tp.xs.back());
        }
    if (lo > hi) return {0.0, 0.0};
    return {lo, hi};
}

SignedMeasure SignedMeasure::scaled(double factor) const {
    SignedMeasure out = *this;
    for (auto& a : out.atoms) a.w *= factor;
    for (auto& pp : out.powers) pp.coef *= factor;
    for (auto& tp : out.tables)
        for (auto& y : tp.ys) y *= factor;
    return out;
}

SignedMeasure SignedMeasure::lebesgue(double lo, double hi, double density) {
    SignedMeasure nu;
    nu.powers.push_back({density, lo - 1.0, 0.0, lo, hi});
    return nu;
}

SignedMeasure SignedMeasure::dirac(double x, double w) {
    SignedMeasure nu;
    nu.atoms.push_back({x, w});
    return nu;
}

double total_variation(const SignedMeasure& nu) {
    check_integrable(nu);
    double tv = 0.0;
    for (const auto& a : nu.atoms) tv += std::abs(a.w);
    for (const auto& pp : nu.powers) {
        if (pp.center > pp.lo && pp.center < pp.hi)
            tv += std::abs(pp.coef) * (power_mass(pp.center, pp.s, pp.lo, pp.center) +
                                       power_mass(pp.center, pp.s, pp.center, pp.hi));
        else
            tv += std::abs(pp.coef) * std::abs(power_mass(pp.center, pp.s, pp.lo, pp.hi));
    }
    for (const auto& tp : nu.tables)
        tv += quad::integrate([&](double x) { return std::abs(interp_table(tp, x)); },
                              tp.xs.front(), tp.xs.back(), 1e-10);
    return tv;
}

namespace {

// int_{d1}^{d2} d^{e-1} dd, the one-sided pure-power mass at exponent e
double power_segment(double e, double d1, double d2) {
    if (d2 <= d1) return 0.0;
    return (std::pow(d2, e) - std::pow(d1, e)) / e;
}

// int over B(x,r) of |x-y|^{eta-1} |nu|(dy), x fixed, no divergence checks
double modulus_at(const SignedMeasure& nu, double eta, double r, double x) {
    double m = 0.0;
    for (const auto& a : nu.atoms) {
        const double d = std::abs(x - a.x);
        if (d < r) m += std::abs(a.w) * (d == 0.0 ? 1.0 : std::pow(d, eta - 1.0));
    }
    for (const auto& pp : nu.powers) {
        const double lo = std::max(pp.lo, x - r);
        const double hi = std::min(pp.hi, x + r);
        if (lo >= hi) continue;
        // pure-power cases have closed-form one-sided masses
        if (pp.s == 0.0) {
            if (x > lo && x < hi)
                m += std::abs(pp.coef) * (power_segment(eta, 0.0, x - lo) +
                                          power_segment(eta, 0.0, hi - x));
            else
                m += std::abs(pp.coef) *
                     power_segment(eta, std::min(std::abs(x - lo), std::abs(x - hi)),
                                   std::max(std::abs(x - lo), std::abs(x - hi)));
            continue;
        }
        if (x == pp.center && eta > pp.s) {
            const double e = eta - pp.s;
            if (x > lo) m += std::abs(pp.coef) * power_segment(e, 0.0, x - lo);
            if (x < hi) m += std::abs(pp.coef) * power_segment(e, 0.0, hi - x);
            continue;
        }
        auto g = [&](double y) {
            return std::pow(std::abs(x - y), eta - 1.0) * std::abs(pp.coef) *
                   std::pow(std::abs(y - pp.center), -pp.s);
        };
        // break at both singular points
        std::set<double> pts = {lo, hi};
        if (x > lo && x < hi) pts.insert(x);
        if (pp.center > lo && pp.center < hi) pts.insert(pp.center);
        double prev = *pts.begin();
        for (auto it = std::next(pts.begin()); it != pts.end(); ++it) {
            m += quad::integrate_singular_endpoints(g, prev, *it);
            prev = *it;
        }
    }
    for (const auto& tp : nu.tables) {
        if (tp.xs.empty()) continue;
        const double lo = std::max(tp.xs.front(), x - r);
        const double hi = std::min(tp.xs.back(), x + r);
        if (lo >= hi) continue;
        auto g = [&](double y) {
            return std::pow(std::abs(x - y), eta - 1.0) * std::abs(interp_table(tp, y));
        };
        if (x > lo && x < hi) {
            m += quad::integrate_singular_endpoints(g, lo, x);
            m += quad::integrate_singular_endpoints(g, x, hi);
        } else {
            m += quad::integrate_singular_endpoints(g, lo, hi);
        }
    }
    return m;
}

std::vector<double> modulus_candidates(const SignedMeasure& nu, double r) {
    std::vector<double> xs;
    for (const auto& a : nu.atoms) xs.push_back(a.x);
    for (const auto& pp : nu.powers) {
        xs.push_back(pp.center);
        xs.push_back(pp.lo);
        xs.push_back(pp.hi);
    }
    for (const auto& tp : nu.tables)
        if (!tp.xs.empty()) {
            xs.push_back(tp.xs.front());
            xs.push_back(tp.xs.back());
        }
    auto [lo, hi] = nu.support();
    const int n = 41;
    for (int i = 0; i < n; ++i)
        xs.push_back(lo - r + (hi - lo + 2.0 * r) * i / (n - 1));
    return xs;
}

}  // namespace

KatoModulus kato_modulus(const SignedMeasure& nu, double eta, double r) {
    if (!(eta > 0.0)) throw DomainError("kato_modulus: eta must be > 0");
    if (!(r > 0.0)) throw DomainError("kato_modulus: r must be > 0");
    check_integrable(nu);
    KatoModulus out;
    if (eta < 1.0) {
        for (const auto& a : nu.atoms)
            if (a.w != 0.0) {
                out.divergent = true;
                out.arg_max = a.x;
                return out;
            }
        for (const auto& pp : nu.powers)
            if (pp.coef != 0.0 && pp.s > 0.0 && eta <= pp.s &&
                pp.center >= pp.lo && pp.center <= pp.hi) {
                out.divergent = true;
                out.arg_max = pp.center;
                return out;
            }
    }
    double best = 0.0, best_x = 0.0;
    for (double x : modulus_candidates(nu, r)) {
        const double m = modulus_at(nu, eta, r, x);
        if (m > best) {
            best = m;
            best_x = x;
        }
    }
    const double h = std::max(r, 1e-3);
    best = std::max(best, refine_max([&](double x) { return modulus_at(nu, eta, r, x); },
                                     best_x - h, best_x + h));
    out.value = best;
    out.arg_max = best_x;
    return out;
}

KatoVerdict is_kato(const SignedMeasure& nu, double eta,
                    const std::vector<double>& r_schedule, double tol) {
    KatoVerdict v;
    double prev = std::numeric_limits<double>::infinity();
    for (double r : r_schedule) {
        const auto m = kato_modulus(nu, eta, r);
        v.table.emplace_back(r, m.value);
        v.divergent.push_back(m.divergent);
        if (m.divergent) {
            v.pass = false;
            v.failing_r = r;
            return v;
        }
        if (m.value > prev * 1.05) {  // slack for quadrature jitter
            v.pass = false;
            v.failing_r = r;
            return v;
        }
        prev = m.value;
    }
    if (!v.table.empty() && v.table.back().second <= tol) {
        v.pass = true;
    } else {
        v.pass = false;
        v.failing_r = v.table.empty() ? 0.0 : v.table.back().first;
    }
    return v;
}

double mollifier_bump(double x) {
    // exp(-1/(1-x^2)) on (-1,1), normalized to unit mass
    static const double norm = quad::integrate(
        [](double u) { return std::exp(-1.0 / (1.0 - u * u)); }, -1.0, 1.0, 1e-14);
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x)) / norm;
}

std::function<double(double)> mollify(const SignedMeasure& nu, int n) {
    if (n < 0) throw DomainError("mollify: n must be >= 0");
    check_integrable(nu);
    const double eps = std::pow(2.0, -n);
    SignedMeasure m = nu;  // own a copy; the returned closure outlives nu
    return [m, eps](double x) {
        auto phi = [&](double y) { return mollifier_bump((x - y) / eps) / eps; };
        double d = 0.0;
        for (const auto& a : m.atoms) d += a.w * phi(a.x);
        for (const auto& pp : m.powers) {
            const double lo = std::max(pp.lo, x - eps);
            const double hi = std::min(pp.hi, x + eps);
            if (lo >= hi) continue;
            d += quad::integrate_power_singular(
                [&](double y) { return pp.coef * phi(y); }, pp.center, pp.s, lo, hi);
        }
        for (const auto& tp : m.tables) {
            if (tp.xs.empty()) continue;
            const double lo = std::max(tp.xs.front(), x - eps);
            const double hi = std::min(tp.xs.back(), x + eps);
            if (lo >= hi) continue;
            d += quad::integrate([&](double y) { return interp_table(tp, y) * phi(y); },
                                 lo, hi, 1e-11);
        }
        return d;
    };
}

namespace {

// mass of the N(x, sd^2) density over [lo, hi]
double gauss_mass(double x, double sd, double lo, double hi) {
    const double c = sd * std::sqrt(2.0);
    return 0.5 * (std::erf((hi - x) / c) - std::erf((lo - x) / c));
}

// e^{tDelta}|nu|(x) with the (2*pi*t)^{-1/2} exp(-(x-y)^2/(4t)) kernel,
// which is sqrt(2) times the N(x, 2t) density
double heat_semigroup_abs(const SignedMeasure& nu, double t, double x) {
    const double norm = 1.0 / std::sqrt(2.0 * pi * t);
    auto kern = [&](double y) {
        const double d = x - y;
        return norm * std::exp(-d * d / (4.0 * t));
    };
    const double win = 8.0 * std::sqrt(2.0 * t);  // kernel support cutoff
    double v = 0.0;
    for (const auto& a : nu.atoms) v += std::abs(a.w) * kern(a.x);
    for (const auto& pp : nu.powers) {
        const double lo = std::max(pp.lo, x - win);
        const double hi = std::min(pp.hi, x + win);
        if (lo >= hi) continue;
        if (pp.s == 0.0) {
            v += std::abs(pp.coef) * std::sqrt(2.0) *
                 gauss_mass(x, std::sqrt(2.0 * t), lo, hi);
            continue;
        }
        v += quad::integrate_power_singular(
            [&](double y) { return std::abs(pp.coef) * kern(y); }, pp.center,
            pp.s, lo, hi);
    }
    for (const auto& tp : nu.tables) {
        if (tp.xs.empty()) continue;
        const double lo = std::max(tp.xs.front(), x - win);
        const double hi = std::min(tp.xs.back(), x + win);
        if (lo >= hi) continue;
        v += quad::integrate(
            [&](double y) { return std::abs(interp_table(tp, y)) * kern(y); }, lo,
            hi, 1e-11);
    }
    return v;
}

}  // namespace

double besov_heat_norm(const SignedMeasure& nu, double s,
                       const std::vector<double>& t_grid) {
    if (!(s > 0.0)) throw DomainError("besov_heat_norm: s must be > 0");
    if (t_grid.empty()) throw DomainError("besov_heat_norm: empty t grid");
    check_integrable(nu);
    double best = 0.0;
    for (double t : t_grid) {
        double sup = 0.0, sup_x = 0.0;
        for (double x : modulus_candidates(nu, std::sqrt(t))) {
            const double v = heat_semigroup_abs(nu, t, x);
            if (v > sup) {
                sup = v;
                sup_x = x;
            }
        }
        sup = std::max(sup, refine_max([&](double x) { return heat_semigroup_abs(nu, t, x); },
                                       sup_x - std::sqrt(t), sup_x + std::sqrt(t)));
        best = std::max(best, std::pow(t, s / 2.0) * sup);
    }
    return best;
}

double kato_heat_modulus(const SignedMeasure& nu, double eta, double t) {
    if (!(eta > 0.0 && eta < 1.0))
        throw DomainError("kato_heat_modulus: eta must lie in (0,1)");
    if (!(t > 0.0 && t <= 1.0))
        throw DomainError("kato_heat_modulus: t must lie in (0,1]");
    check_integrable(nu);
    if (nu.is_zero()) return 0.0;
    // substitute tau = u^2: 2 * int_0^sqrt(t) u^{eta-1} * [u^{... } kernel] du
    auto inner = [&](double x, double u) {
        const double tau = u * u;
        if (!(tau > 0.0) || !std::isfinite(1.0 / tau)) return 0.0;
        const double norm = 1.0 / std::sqrt(2.0 * pi * tau);
        auto kern = [&](double y) {
            const double d = x - y;
            const double k = norm * std::exp(-d * d / (2.0 * tau));
            return std::isfinite(k) ? k : 0.0;
        };
        double v = 0.0;
        for (const auto& a : nu.atoms) v += std::abs(a.w) * kern(a.x);
        const double win = 8.0 * u;
        for (const auto& pp : nu.powers) {
            const double lo = std::max(pp.lo, x - win);
            const double hi = std::min(pp.hi, x + win);
            if (lo >= hi) continue;
            if (pp.s == 0.0) {
                // the time kernel is exactly the N(x, u^2) density
                v += std::abs(pp.coef) * gauss_mass(x, u, lo, hi);
                continue;
            }
            v += quad::integrate_power_singular(
                [&](double y) { return std::abs(pp.coef) * kern(y); }, pp.center,
                pp.s, lo, hi);
        }
        for (const auto& tp : nu.tables) {
            if (tp.xs.empty()) continue;
            const double lo = std::max(tp.xs.front(), x - win);
            const double hi = std::min(tp.xs.back(), x + win);
            if (lo >= hi) continue;
            v += quad::integrate(
                [&](double y) { return std::abs(interp_table(tp, y)) * kern(y); },
                lo, hi, 1e-10);
        }
        return v;
    };
    auto n_at = [&](double x) {
        return 2.0 * quad::integrate_singular_endpoints(
                         [&](double u) {
                             return std::pow(u, eta - 1.0) * inner(x, u);
                         },
                         0.0, std::sqrt(t), 1e-8);
    };
    double best = 0.0;
    for (double x : modulus_candidates(nu, std::sqrt(t)))
        best = std::max(best, n_at(x));
    return best;
}

SignedMeasure SignedMeasure::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open measure file: " + path);
    json j;
    in >> j;
    SignedMeasure nu;
    for (const auto& a : j.value("atoms", json::array()))
        nu.atoms.push_back({a.at("x").get<double>(), a.at("w").get<double>()});
    for (const auto& p : j.value("powers", json::array()))
        nu.powers.push_back({p.at("coef").get<double>(), p.at("center").get<double>(),
                             p.at("s").get<double>(), p.at("lo").get<double>(),
                             p.at("hi").get<double>()});
    for (const auto& t : j.value("tables", json::array())) {
        TablePiece tp;
        tp.xs = t.at("xs").get<std::vector<double>>();
        tp.ys = t.at("ys").get<std::vector<double>>();
        if (tp.xs.size() != tp.ys.size() || tp.xs.size() < 2)
            throw DomainError("table piece needs matching xs/ys of length >= 2");
        nu.tables.push_back(std::move(tp));
    }
    check_integrable(nu);
    return nu;
}

std::string SignedMeasure::to_json() const {
    json j;
    j["atoms"] = json::array();
    for (const auto& a : atoms) j["atoms"].push_back({{"x", a.x}, {"w", a.w}});
    j["powers"] = json::array();
    for (const auto& p : powers)
        j["powers"].push_back({{"coef", p.coef}, {"center", p.center},
                               {"s", p.s}, {"lo", p.lo}, {"hi", p.hi}});
    j["tables"] = json::array();
    for (const auto& t : tables)
        j["tables"].push_back({{"xs", t.xs}, {"ys", t.ys}});
    return j.dump(2);
}

}  // namespace stablesde
