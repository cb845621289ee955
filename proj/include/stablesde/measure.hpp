#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace stablesde {

// Finite signed Radon measure on R: point atoms, power-law density pieces
// coef*|x-center|^{-s}dx on [lo,hi] with s in [0,1), and tabulated density
// pieces (piecewise-linear between breakpoints).
struct SignedMeasure {
    struct Atom {
        double x;
        double w;
    };
    struct PowerPiece {
        double coef;
        double center;
        double s;
        double lo;
        double hi;
    };
    struct TablePiece {
        std::vector<double> xs;  // strictly increasing
        std::vector<double> ys;  // density values at xs
    };

    std::vector<Atom> atoms;
    std::vector<PowerPiece> powers;
    std::vector<TablePiece> tables;

    bool is_zero() const {
        return atoms.empty() && powers.empty() && tables.empty();
    }

    // density of the absolutely continuous part at x (atoms excluded)
    double density(double x) const;
    double abs_density(double x) const;

    // support window [lo,hi] containing all pieces and atoms
    std::pair<double, double> support() const;

    SignedMeasure scaled(double factor) const;

    static SignedMeasure lebesgue(double lo, double hi, double density = 1.0);
    static SignedMeasure dirac(double x, double w = 1.0);

    static SignedMeasure from_json_file(const std::string& path);
    std::string to_json() const;
};

double total_variation(const SignedMeasure& nu);

// M_nu^eta(r) = sup_x int_{B(x,r)} |x-y|^{eta-1} |nu|(dy).  For eta < 1 an
// atom makes the sup divergent; that outcome is an explicit verdict, never
// a large float.
struct KatoModulus {
    bool divergent = false;
    double value = 0.0;
    double arg_max = 0.0;  // x attaining (or approaching) the sup
};

KatoModulus kato_modulus(const SignedMeasure& nu, double eta, double r);

struct KatoVerdict {
    bool pass = false;
    double failing_r = 0.0;
    std::vector<std::pair<double, double>> table;  // (r, M(r)); inf -> divergent
    std::vector<bool> divergent;                   // per table row
};

KatoVerdict is_kato(const SignedMeasure& nu, double eta,
                    const std::vector<double>& r_schedule, double tol);

// x -> int phi_{2^{-n}}(x - y) nu(dy) with the standard bump
// phi(x) = Z^{-1} exp(-1/(1-x^2)) on [-1,1]
std::function<double(double)> mollify(const SignedMeasure& nu, int n);

double mollifier_bump(double x);  // normalized bump at scale 1

// sup over t_grid x x_grid of t^{s/2} * e^{tDelta}|nu|(x) with the heat
// semigroup e^{tDelta}f(x) = (2*pi*t)^{-1/2} int e^{-(x-y)^2/(4t)} f(y) dy
double besov_heat_norm(const SignedMeasure& nu, double s,
                       const std::vector<double>& t_grid);

// N_nu^eta(t) = sup_x int_0^t int tau^{eta/2-1} h(tau,x,y) |nu|(dy) dtau,
// h the Gaussian kernel (2*pi*tau)^{-1/2} exp(-(x-y)^2/(2*tau))
double kato_heat_modulus(const SignedMeasure& nu, double eta, double t);

}  // namespace stablesde
