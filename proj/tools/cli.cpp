// Experiment runner. Exit codes: 0 success, 1 acceptance failure,
// 2 config error, 3 numerical failure (non-contraction / quadrature).
#include "CLI11.hpp"
#include "acceptance_suite.hpp"
#include "json.hpp"

#include "stablesde/local_time.hpp"
#include "stablesde/potential.hpp"
#include "stablesde/quadrature.hpp"
#include "stablesde/sde.hpp"
#include "stablesde/sharpness.hpp"
#include "stablesde/zvonkin.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace stablesde;

namespace {

// ---- config loading ---------------------------------------------------------

// flat TOML subset: [section] headers, key = value with numbers, booleans,
// quoted strings and one-line arrays of numbers
json parse_toml_subset(std::istream& in) {
    json root = json::object();
    json* scope = &root;
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            scope = &root[trim(line.substr(1, line.size() - 2))];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("toml: expected key = value: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) throw std::invalid_argument("toml: empty value for " + key);
        if (val.front() == '"' && val.back() == '"' && val.size() >= 2) {
            (*scope)[key] = val.substr(1, val.size() - 2);
        } else if (val == "true" || val == "false") {
            (*scope)[key] = (val == "true");
        } else if (val.front() == '[') {
            (*scope)[key] = json::parse(val);
        } else {
            (*scope)[key] = json::parse(val);  // number
        }
    }
    return root;
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    json cfg;
    if (path.size() > 5 && path.substr(path.size() - 5) == ".toml")
        cfg = parse_toml_subset(in);
    else
        cfg = json::parse(in);
    // a manifest is itself a valid config: unwrap the embedded block
    if (cfg.contains("config")) cfg = cfg["config"];
    return cfg;
}

// merged parameter lookup: explicit flag > config file > default
struct Params {
    json cfg = json::object();
    CLI::App* sub = nullptr;

    double num(const std::string& flag, const std::string& key, double dflt) const {
        if (sub->count(flag)) return sub->get_option(flag)->as<double>();
        if (cfg.contains(key)) return cfg[key].get<double>();
        return dflt;
    }
    std::string str(const std::string& flag, const std::string& key,
                    const std::string& dflt) const {
        if (sub->count(flag)) return sub->get_option(flag)->as<std::string>();
        if (cfg.contains(key)) return cfg[key].get<std::string>();
        return dflt;
    }
};

// ---- output helpers -----------------------------------------------------------

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_manifest(const fs::path& dir, const std::string& subcommand,
                    const json& cfg, double wall_s) {
    json m;
    m["schema"] = 1;
    m["subcommand"] = subcommand;
    m["config"] = cfg;
    m["versions"] = {{"compiler", __VERSION__},
                     {"cxx_standard", __cplusplus}};
    m["wall_time_s"] = wall_s;
    std::ofstream out(dir / "manifest.json");
    out << m.dump(2) << "\n";
}

struct Csv {
    std::ofstream out;
    Csv(const fs::path& p, const std::string& subcommand,
        const std::string& columns)
        : out(p) {
        out << "# schema=1 subcommand=" << subcommand << " columns=" << columns
            << "\n";
        out << columns << "\n";
    }
    void row(const std::vector<double>& vs) {
        for (std::size_t i = 0; i < vs.size(); ++i)
            out << (i ? "," : "") << fmt(vs[i]);
        out << "\n";
    }
};

SignedMeasure measure_or(const std::string& path, const SignedMeasure& dflt) {
    if (path.empty()) return dflt;
    return SignedMeasure::from_json_file(path);
}

SignedMeasure default_bump(double scale = 0.4) {
    SignedMeasure mu;
    SignedMeasure::TablePiece tp;
    for (int i = 0; i <= 80; ++i) {
        const double x = -1.0 + i / 40.0;
        tp.xs.push_back(x);
        tp.ys.push_back(scale * mollifier_bump(x));
    }
    mu.tables.push_back(tp);
    return mu;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1.0);
    return xs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpha-stable singular-drift SDE toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", format = "csv", measure_path;
    long long seed = 1;
    int threads = 0;
    app.add_option("--config", config_path, "TOML or JSON config (or a manifest)");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (0 = auto)");
    app.add_option("--format", format, "csv|json");

    auto add_common_num = [](CLI::App* s, const char* flag, const char*) {
        s->add_option(std::string(flag))->expected(1);
    };

    auto* sim = app.add_subcommand("simulate", "Euler paths with mollified drift");
    for (const char* f : {"--alpha", "--T", "--dt", "--eps", "--paths", "--level",
                          "--x0"})
        add_common_num(sim, f, "");
    sim->add_option("--measure", measure_path, "measure JSON file");

    auto* lt = app.add_subcommand("localtime", "Tanaka and occupation estimates");
    for (const char* f : {"--alpha", "--T", "--dt", "--eps", "--paths", "--xmin",
                          "--xmax", "--nx", "--bandwidth"})
        add_common_num(lt, f, "");

    auto* pot = app.add_subcommand("potential", "lambda-potential tables");
    for (const char* f : {"--alpha", "--lambda", "--xmin", "--xmax", "--nx"})
        add_common_num(pot, f, "");

    auto* ker = app.add_subcommand("kernel", "stable heat kernel slice");
    for (const char* f : {"--alpha", "--t", "--xmin", "--xmax", "--nx"})
        add_common_num(ker, f, "");

    auto* zv = app.add_subcommand("zvonkin", "resolvent and transform tables");
    for (const char* f : {"--alpha", "--lambda"}) add_common_num(zv, f, "");
    zv->add_option("--measure", measure_path, "measure JSON file");

    auto* kato = app.add_subcommand("kato-check", "Kato modulus schedule");
    for (const char* f : {"--eta", "--tol"}) add_common_num(kato, f, "");
    kato->add_option("--measure", measure_path, "measure JSON file");

    auto* sh = app.add_subcommand("sharpness", "boundary-case constants");
    for (const char* f : {"--alpha", "--zeta"}) add_common_num(sh, f, "");

    auto* acc = app.add_subcommand("acceptance", "run the full criteria suite");
    (void)acc;

    // let the global flags (--seed, --out, ...) appear after the subcommand
    for (auto* s : app.get_subcommands({})) s->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        json cfg = config_path.empty() ? json::object() : load_config(config_path);
        if (app.count("--seed")) cfg["seed"] = seed;
        if (app.count("--threads")) cfg["threads"] = threads;
        if (cfg.contains("seed")) seed = cfg["seed"].get<long long>();
        if (cfg.contains("threads") && cfg["threads"].get<int>() > 0) {
            setenv("STABLESDE_THREADS",
                   std::to_string(cfg["threads"].get<int>()).c_str(), 1);
        }
        fs::create_directories(out_dir);
        const auto t0 = std::chrono::steady_clock::now();

        CLI::App* active = app.get_subcommands().front();
        const std::string name = active->get_name();
        Params pr{cfg, active};
        auto wall = [&] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                 t0)
                .count();
        };

        if (name == "acceptance") {
            const int failures = run_acceptance_suite(argv[0]);
            return failures == 0 ? 0 : 1;
        }

        if (name == "simulate") {
            StableParams p(pr.num("--alpha", "alpha", 1.5));
            SolverConfig sc;
            sc.T = pr.num("--T", "T", 1.0);
            sc.dt = pr.num("--dt", "dt", 1e-3);
            sc.eps_jump = pr.num("--eps", "eps", 0.05);
            sc.n_paths = static_cast<int>(pr.num("--paths", "paths", 10));
            sc.n_mollify = static_cast<int>(pr.num("--level", "level", 4));
            sc.x0 = pr.num("--x0", "x0", 0.0);
            sc.seed = static_cast<std::uint64_t>(seed);
            const std::string mp = pr.str("--measure", "measure", measure_path);
            auto mu = measure_or(mp, SignedMeasure{});
            cfg = {{"alpha", p.alpha},   {"T", sc.T},         {"dt", sc.dt},
                   {"eps", sc.eps_jump}, {"paths", sc.n_paths},
                   {"level", sc.n_mollify}, {"x0", sc.x0},    {"seed", seed},
                   {"measure", mp}};
            auto paths = simulate_mollified(p, sc, mu);
            Csv csv(fs::path(out_dir) / "paths.csv", name, "path,time,value,drift");
            for (std::size_t k = 0; k < paths.size(); ++k)
                for (std::size_t i = 0; i < paths[k].times.size(); ++i)
                    csv.row({double(k), paths[k].times[i], paths[k].values[i],
                             paths[k].drift_record[i]});
        } else if (name == "localtime") {
            StableParams p(pr.num("--alpha", "alpha", 1.5));
            const double T = pr.num("--T", "T", 1.0);
            const double dt = pr.num("--dt", "dt", 1e-4);
            const double eps = pr.num("--eps", "eps", 0.05);
            const int n_paths = static_cast<int>(pr.num("--paths", "paths", 20));
            const double xmin = pr.num("--xmin", "xmin", -2.0);
            const double xmax = pr.num("--xmax", "xmax", 2.0);
            const int nx = static_cast<int>(pr.num("--nx", "nx", 21));
            const double bw = pr.num("--bandwidth", "bandwidth", 0.1);
            cfg = {{"alpha", p.alpha}, {"T", T},       {"dt", dt},
                   {"eps", eps},       {"paths", n_paths}, {"xmin", xmin},
                   {"xmax", xmax},     {"nx", nx},     {"bandwidth", bw},
                   {"seed", seed}};
            auto xs = linspace(xmin, xmax, nx);
            std::vector<double> gm(nx, 0.0), lm(nx, 0.0), nm(nx, 0.0);
            for (int k = 0; k < n_paths; ++k) {
                auto path = simulate_levy_path(
                    p, T, dt, eps, SmallJumpMode::gaussian_surrogate,
                    static_cast<std::uint64_t>(seed),
                    static_cast<std::uint64_t>(k));
                auto field = local_time_field(p, path, xs, {T}, bw);
                for (int i = 0; i < nx; ++i) {
                    gm[i] += field.at(field.gamma, 0, i) / n_paths;
                    lm[i] += field.at(field.ell, 0, i) / n_paths;
                    nm[i] += field.at(field.martingale, 0, i) / n_paths;
                }
            }
            Csv csv(fs::path(out_dir) / "localtime.csv", name,
                    "x,gamma_mean,ell_mean,martingale_mean");
            for (int i = 0; i < nx; ++i) csv.row({xs[i], gm[i], lm[i], nm[i]});
        } else if (name == "potential") {
            StableParams p(pr.num("--alpha", "alpha", 1.5));
            const double lam = pr.num("--lambda", "lambda", 1.0);
            const double xmin = pr.num("--xmin", "xmin", -5.0);
            const double xmax = pr.num("--xmax", "xmax", 5.0);
            const int nx = static_cast<int>(pr.num("--nx", "nx", 101));
            cfg = {{"alpha", p.alpha}, {"lambda", lam}, {"xmin", xmin},
                   {"xmax", xmax},     {"nx", nx},      {"seed", seed}};
            Csv csv(fs::path(out_dir) / "potential.csv", name,
                    "x,u_lambda,u_lambda_prime,v");
            for (double x : linspace(xmin, xmax, nx))
                csv.row({x, u_lambda(p, lam, x), u_lambda_prime(p, lam, x),
                         renormalized_potential_v(p, x)});
        } else if (name == "kernel") {
            StableParams p(pr.num("--alpha", "alpha", 1.5));
            const double t = pr.num("--t", "t", 1.0);
            const double xmin = pr.num("--xmin", "xmin", -8.0);
            const double xmax = pr.num("--xmax", "xmax", 8.0);
            const int nx = static_cast<int>(pr.num("--nx", "nx", 161));
            cfg = {{"alpha", p.alpha}, {"t", t},   {"xmin", xmin},
                   {"xmax", xmax},     {"nx", nx}, {"seed", seed}};
            Csv csv(fs::path(out_dir) / "kernel.csv", name, "x,p");
            for (double x : linspace(xmin, xmax, nx))
                csv.row({x, stable_heat_kernel(p, t, x)});
        } else if (name == "zvonkin") {
            StableParams p(pr.num("--alpha", "alpha", 1.5));
            const double lam = pr.num("--lambda", "lambda", 8.0);
            const std::string mp = pr.str("--measure", "measure", measure_path);
            auto mu = measure_or(mp, default_bump());
            cfg = {{"alpha", p.alpha}, {"lambda", lam}, {"measure", mp},
                   {"seed", seed}};
            auto zt = solve_resolvent(p, mu, lam);
            std::printf("eps0 = %.6f (lambda = %g)\n", zt.eps0(), lam);
            Csv csv(fs::path(out_dir) / "zvonkin.csv", name, "x,w,w_prime,phi");
            for (std::size_t i = 0; i < zt.grid().size(); ++i)
                csv.row({zt.grid()[i], zt.w_values()[i], zt.w_prime_values()[i],
                         zt.phi(zt.grid()[i])});
        } else if (name == "kato-check") {
            const double eta = pr.num("--eta", "eta", 0.7);
            const double tol = pr.num("--tol", "tol", 1.0);
            const std::string mp = pr.str("--measure", "measure", measure_path);
            auto nu = measure_or(mp, SignedMeasure::lebesgue(-1.0, 1.0));
            cfg = {{"eta", eta}, {"tol", tol}, {"measure", mp}, {"seed", seed}};
            auto verdict = is_kato(nu, eta, {0.2, 0.1, 0.05, 0.02, 0.01}, tol);
            Csv csv(fs::path(out_dir) / "kato.csv", name, "r,modulus,divergent");
            for (std::size_t i = 0; i < verdict.table.size(); ++i)
                csv.row({verdict.table[i].first, verdict.table[i].second,
                         verdict.divergent[i] ? 1.0 : 0.0});
            std::printf("kato-check eta=%g: %s\n", eta,
                        verdict.pass ? "PASS" : "FAIL");
        } else if (name == "sharpness") {
            const double alpha = pr.num("--alpha", "alpha", 1.5);
            SharpnessParams sp =
                (active->count("--zeta") || cfg.contains("zeta"))
                    ? SharpnessParams(alpha, pr.num("--zeta", "zeta", 0.0))
                    : SharpnessParams(alpha);
            cfg = {{"alpha", alpha}, {"zeta", sp.zeta}, {"seed", seed}};
            std::printf("alpha=%g zeta=%g I=%.10g C_alpha=%.10g\n", sp.alpha,
                        sp.zeta, sp.I, sp.C_alpha);
            auto rep = scaling_constant_hat_c(sp.alpha, sp.zeta,
                                              {0.5, 1.0, 2.0, 5.0});
            Csv csv(fs::path(out_dir) / "sharpness.csv", name,
                    "y,c_hat,I,C_alpha");
            for (std::size_t i = 0; i < rep.y_samples.size(); ++i)
                csv.row({rep.y_samples[i], rep.c_hat[i], sp.I, sp.C_alpha});
        }

        write_manifest(out_dir, name, cfg, wall());
        return 0;
    } catch (const NonContractionError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const quad::QuadratureError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
}
