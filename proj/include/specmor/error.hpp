#ifndef SPECMOR_ERROR_HPP
#define SPECMOR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace specmor
{

// Every failure the library reports carries one of these kinds. The CLI maps
// Usage/Io/Format/UnknownOption to exit code 1 and everything else to 2.
enum class ErrorKind
{
    SingularMatrix,
    ConvergenceFailure,
    SingularIterate,
    MaxIterExceeded,
    SingularE,
    RankDeficientStack,
    SingularAtFrequency,
    UnstableSpectrum,
    SpectraOverlap,
    HamiltonianAxisEigenvalues,
    SubspaceDimensionMismatch,
    IntervalInvalid,
    AxisEigenvalue,
    SylvesterFailure,
    InfiniteSplitFailure,
    DimensionMismatch,
    OrderTooLarge,
    GammaInfeasible,
    RegionBoundaryEigenvalue,
    EmptySelection,
    RepeatedSigmaAtCut,
    FormulaUnknown,
    MuOutOfDomain,
    CompressionRankZero,
    SolverStepSingular,
    InvalidArgument,
    UnknownOption,
    Io,
    Format,
};

std::string_view to_string(ErrorKind kind) noexcept;

// True for kinds caused by bad input files or arguments rather than numerics.
bool is_usage_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return to_string(kind_); }

private:
    ErrorKind kind_;
};

} // namespace specmor

#endif // SPECMOR_ERROR_HPP
