#include "ebb/model.hpp"

#include <cmath>

#include "ebb/errors.hpp"

namespace ebb {

void ThermoParams::validate() const {
    auto check_beta = [](double b, const char* name) {
        if (!(b > 0.0) || !std::isfinite(b))
            throw InputError(std::string(name) + " must be a finite positive inverse temperature");
    };
    check_beta(beta_l, "thermo.beta_l");
    check_beta(beta_r, "thermo.beta_r");
    if (!std::isfinite(mu_l)) throw InputError("thermo.mu_l must be finite");
    if (!std::isfinite(mu_r)) throw InputError("thermo.mu_r must be finite");
}

double xi(Energy e, double beta, double mu) { return beta * (e - mu); }

double fermi_density(Energy e, double beta, double mu) {
    const double x = xi(e, beta, mu);
    if (x > 0.0) {
        const double t = std::exp(-x);
        return t / (1.0 + t);
    }
    return 1.0 / (1.0 + std::exp(x));
}

} // namespace ebb
