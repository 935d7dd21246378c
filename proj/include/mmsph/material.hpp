#pragma once

#include <utility>

#include "mmsph/math.hpp"

namespace mmsph {

// Elastic + Johnson-Cook strength + thermal constants. Either (E, nu) or
// (mu, K) may be given; the other pair is derived. When both are present
// the directly supplied shear/bulk moduli win.
struct MaterialParams {
    double rho0 = 0.0;      // reference density [kg/m^3]
    double E = 0.0;         // Young's modulus [Pa]
    double nu = 0.0;        // Poisson ratio
    double mu = 0.0;        // shear modulus [Pa]
    double K = 0.0;         // bulk modulus [Pa]

    double A = 0.0;         // initial yield stress [Pa]
    double B = 0.0;         // hardening modulus [Pa]
    double n_hard = 0.0;    // hardening exponent
    double C_rate = 0.0;    // rate sensitivity
    double m_therm = 0.0;   // thermal softening exponent
    double eps_dot_0 = 1.0; // reference strain rate [1/s]

    double T_ref = 0.0;     // room temperature [K]
    double T_melt = 0.0;    // melting temperature [K]
    double C_p = 0.0;       // specific heat [J/(kg K)]
    double chi = 0.9;       // Taylor-Quinney coefficient

    // Fills in the missing elastic pair and validates ranges.
    void finalize();

    double sound_speed(double rho) const { return std::sqrt(E / rho); }
};

struct ReturnResult {
    Mat3 s;                 // deviatoric stress after return mapping
    double delta_eps_pl = 0.0;
    double delta_w_p = 0.0; // plastic work density increment [Pa]
    double c_f = 1.0;
};

// p = K (rho/rho0 - 1)
double eos_pressure(double rho, const MaterialParams& mat);

// (strain rate, spin) from a velocity gradient
std::pair<Mat3, Mat3> strain_rate_spin(const Mat3& l);

// Jaumann rate of the deviatoric stress:
//   s_dot = 2 mu dev(eps_dot) + omega s - s omega
Mat3 jaumann_deviatoric_rate(const Mat3& s, const Mat3& eps_dot, const Mat3& omega, double mu);

// Johnson-Cook flow stress. The rate bracket uses ln with the dimensionless
// rate clamped to >= 1; the homologous temperature is clamped to [0, 1].
double jc_yield_stress(double eps_pl, double eps_pl_rate, double T, const MaterialParams& mat);

// Wilkins radial return of a trial deviatoric state onto the yield surface.
ReturnResult radial_return(const Mat3& s_trial, double sigma_y, double mu);

// Adiabatic heating from plastic work.
double update_temperature(double T, double delta_w_p, double rho, const MaterialParams& mat);

}  // namespace mmsph
