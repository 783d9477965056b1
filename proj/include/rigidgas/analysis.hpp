#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rigidgas/params.hpp"
#include "rigidgas/rng.hpp"
#include "rigidgas/trajectory.hpp"

namespace rigidgas {

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

double ks_distance(std::vector<double> a, std::vector<double> b);
double ks_distance(std::vector<double> a, const std::function<double(double)>& cdf);
// asymptotic Kolmogorov tail probability for an effective sample size
double ks_pvalue(double D, double n_eff);
double ks_two_sample_pvalue(double D, std::size_t n, std::size_t m);

struct WilsonInterval {
    long k = 0, n = 0;
    double p = 0.0, lo = 0.0, hi = 0.0;
};
WilsonInterval wilson(long k, long n, double z = 1.959963984540054);
bool intervals_overlap(const WilsonInterval& a, const WilsonInterval& b);

struct MomentResidual {
    double beta;
    int power;       // 1, 2 or 3
    int side;        // +1 positive part, -1 negative part
    double quadrature;
    double closed_form;
    double residual;
};
// Half-space Gaussian moments integral M_beta(v) (v.e)_{+/-}^k dv for k = 1, 2, 3,
// by nested adaptive quadrature along e and its normal.
std::vector<MomentResidual> moment_identity_check(double beta, double e_angle = 0.7);

enum class Component { V1, V2, Omega };
double component(const BodyState& Y, Component c);
const char* component_name(Component c);

struct AutocovarianceFit {
    std::vector<double> lags;
    std::vector<double> C;
    double band = 0.0;      // one-sigma noise level of C(s) for uncorrelated data
    double amplitude = 0.0;
    double theta = 0.0;     // fitted decay rate of C(s) = amplitude exp(-theta s)
    double theta_se = 0.0;  // jackknife standard error
    long samples = 0;
};

// Series are sampled on a common uniform grid of spacing dt; lags are
// 0..max_lag steps and the exponential is fitted on lags <= fit_lag steps.
AutocovarianceFit autocovariance(const std::vector<std::vector<double>>& series, double dt, int max_lag,
                                 int fit_lag = -1);
AutocovarianceFit autocovariance(const std::vector<TrajectoryRecord>& records, Component c, int max_lag,
                                 int fit_lag = -1, double t_min = 0.0);
// every listed component of every record contributes one series
AutocovarianceFit autocovariance(const std::vector<TrajectoryRecord>& records, const std::vector<Component>& comps,
                                 int max_lag, int fit_lag = -1, double t_min = 0.0);

// Sample lookups on the record's grid; times must be grid points.
const BodySample& sample_at(const TrajectoryRecord& rec, double t);
std::vector<double> slice_values(const std::vector<TrajectoryRecord>& records, Component c,
                                 const std::vector<double>& times);
// window starts 0, block, 2 block, ... with start + window <= T
std::vector<double> block_starts(double T, double window, double block);
std::vector<double> window_increments(const std::vector<TrajectoryRecord>& records, Component c, double window,
                                      const std::vector<double>& starts);

struct PathologyFrequency {
    long records = 0;
    long contacts = 0;
    WilsonInterval a1, a2, kill;              // per trajectory
    WilsonInterval small_deflection_contacts; // per contact
    WilsonInterval large_speed_contacts;
    WilsonInterval slow_relative_contacts;
};
PathologyFrequency pathology_frequency(const std::vector<TrajectoryRecord>& records, double T);

struct ModulusTable {
    std::vector<double> eta;
    std::vector<double> xi;
    std::vector<std::vector<WilsonInterval>> p;  // p[i][j]: eta[i], xi[j]
};
// sup over |s - t| <= eta of |Xi(s) - Xi(t)| with Xi = (V1, V2, Omega), on the sample grid
ModulusTable modulus_of_continuity(const std::vector<TrajectoryRecord>& records, const std::vector<double>& eta,
                                   const std::vector<double>& xi);

struct ChiSquareReport {
    double chi2 = 0.0;
    int dof = 0;
    double p_value = 0.0;
    long samples = 0;
    long in_grid = 0;
};

// Push (phi, v), drawn with density proportional to |b| 1{b<0} M_beta(v) dphi,
// through the body-atom scattering map and compare the histogram of V' - V on
// a 20x20 grid with ((A+1)/(2 alpha))^2 M(v(V')) dV'. With drop_jacobian the
// prediction omits the Jacobian factor (negative control).
ChiSquareReport carleman_chi_square(const SimParams& p, const BodyState& Y, long n_samples, Rng& rng,
                                    bool drop_jacobian = false, int bins = 20);

double chi_square_pvalue(double chi2, int dof);

}  // namespace rigidgas
