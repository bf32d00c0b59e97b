#include <specmor/error.hpp>

namespace specmor
{

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::SingularIterate: return "SingularIterate";
    case ErrorKind::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorKind::SingularE: return "SingularE";
    case ErrorKind::RankDeficientStack: return "RankDeficientStack";
    case ErrorKind::SingularAtFrequency: return "SingularAtFrequency";
    case ErrorKind::UnstableSpectrum: return "UnstableSpectrum";
    case ErrorKind::SpectraOverlap: return "SpectraOverlap";
    case ErrorKind::HamiltonianAxisEigenvalues: return "HamiltonianAxisEigenvalues";
    case ErrorKind::SubspaceDimensionMismatch: return "SubspaceDimensionMismatch";
    case ErrorKind::IntervalInvalid: return "IntervalInvalid";
    case ErrorKind::AxisEigenvalue: return "AxisEigenvalue";
    case ErrorKind::SylvesterFailure: return "SylvesterFailure";
    case ErrorKind::InfiniteSplitFailure: return "InfiniteSplitFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::OrderTooLarge: return "OrderTooLarge";
    case ErrorKind::GammaInfeasible: return "GammaInfeasible";
    case ErrorKind::RegionBoundaryEigenvalue: return "RegionBoundaryEigenvalue";
    case ErrorKind::EmptySelection: return "EmptySelection";
    case ErrorKind::RepeatedSigmaAtCut: return "RepeatedSigmaAtCut";
    case ErrorKind::FormulaUnknown: return "FormulaUnknown";
    case ErrorKind::MuOutOfDomain: return "MuOutOfDomain";
    case ErrorKind::CompressionRankZero: return "CompressionRankZero";
    case ErrorKind::SolverStepSingular: return "SolverStepSingular";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnknownOption: return "UnknownOption";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Format: return "FormatError";
    }
    return "Unknown";
}

bool is_usage_error(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnknownOption:
    case ErrorKind::Io:
    case ErrorKind::Format:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::FormulaUnknown:
    case ErrorKind::IntervalInvalid:
        return true;
    default:
        return false;
    }
}

} // namespace specmor
