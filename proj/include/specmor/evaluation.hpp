#ifndef SPECMOR_EVALUATION_HPP
#define SPECMOR_EVALUATION_HPP

#include <specmor/options.hpp>
#include <specmor/system.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace specmor
{

/// N logarithmically spaced points on [lo, hi]; throws Error(IntervalInvalid)
/// unless 0 < lo < hi and N >= 2.
Vector log_grid(double lo, double hi, Index n);

/// Evaluation point of frequency omega: i omega (continuous), e^{i omega} (discrete).
Complex frequency_point(TimeDomain time, double omega);

///
/// Per grid point: sigma_max(G_k(i omega)) for every system and the relative
/// errors sigma_max(G_1 - G_k) / sigma_max(G_1) for k >= 2. Points where a
/// resolvent is singular give nan cells (listed in `singular`); a reference
/// response at or below zero_floor gives nan relative errors (listed in
/// `zero_reference`).
///
struct SigmaTable
{
    Vector omega;
    Matrix sigma;  // N x k
    Matrix relerr; // N x (k - 1)
    std::vector<Index> singular;
    std::vector<Index> zero_reference;
};

/// Throws Error(DimensionMismatch) when the systems differ in m or p.
SigmaTable sigma_data(const std::vector<System>& systems, const Vector& omega, double zero_floor = 0.0);

/// Header omega,sigma_1..sigma_k,relerr_2..relerr_k; 17 significant digits, nan spelled nan.
std::string sigma_csv(const SigmaTable& table);

std::string format_csv_number(double v);

struct SimulationSetup
{
    double tf = 1.0;
    Index steps = 1000;
    std::string input = "noise"; // noise | step | zero | file
    std::uint64_t seed = 1;
    Matrix u_file; // (steps + 1) x m samples for input "file"
};

/// Setup from the simulate option tree (tf, steps, input, seed).
SimulationSetup simulation_setup(const OptionTree& opts);

/// (steps + 1) x m input samples. White noise is drawn from mt19937_64(seed)
/// with a standard normal distribution, time-major.
Matrix input_samples(const SimulationSetup& setup, Index m);

struct SimulationResult
{
    Vector t;
    Matrix u; // (steps + 1) x m
    Matrix y; // (steps + 1) x p
};

///
/// Zero initial state. Continuous systems use the implicit trapezoidal rule
/// on (E, A); a singular E is handled by the additive decomposition, with the
/// finite part integrated and the polynomial part applied as sum_k M_k u^{(k)}
/// (finite-difference derivatives). Discrete systems run E x+ = A x + B u.
///
/// Throws Error(SolverStepSingular).
///
SimulationResult simulate(const System& sys, const SimulationSetup& setup, const OptionTree& decompose_opts = {});

/// Per time sample sqrt(sum_j |y_j - yr_j|^2 / max(|y_j|, floor)^2).
Vector simulation_rel_error(const Matrix& y_ref, const Matrix& y_rom, double floor = 1e-300);

/// Header t,y_1..y_p (and yr_1..yr_p,relerr when a comparison is given).
std::string simulation_csv(const SimulationResult& ref, const SimulationResult* rom = nullptr,
                           double floor = 1e-300);

} // namespace specmor

#endif // SPECMOR_EVALUATION_HPP
