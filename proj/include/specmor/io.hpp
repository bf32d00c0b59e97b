#ifndef SPECMOR_IO_HPP
#define SPECMOR_IO_HPP

#include <specmor/options.hpp>
#include <specmor/system.hpp>

#include <filesystem>
#include <string>

namespace specmor
{

/// Reads "array" (dense, column major) and "coordinate" Matrix Market files,
/// general or symmetric, real or integer.
Matrix read_matrix_market(const std::filesystem::path& path);

/// Writes `%%MatrixMarket matrix array real general` with shortest
/// round-trip decimal representation (bit-exact on reload).
void write_matrix_market(const std::filesystem::path& path, const Matrix& m);

std::string format_double(double v);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

struct LoadedSystem
{
    System system;
    ValidationReport report;
};

///
/// Load a system manifest:
///
///   { "class": "ct_ss"|"dt_ss"|"ct_dss"|"dt_dss"|"ct_soss",
///     "n": .., "m": .., "p": .., "matrices": {"A": "A.mtx", ...} }
///
/// Matrix paths are relative to the manifest's directory. A missing D is
/// read as zero and recorded as a note in the report. Dimension mismatches
/// against n/m/p or between files raise Error(DimensionMismatch).
///
LoadedSystem load_system_with_report(const std::filesystem::path& manifest);
System load_system(const std::filesystem::path& manifest);

/// Writes `<dir>/<stem>.json` plus one .mtx per matrix; returns the manifest path.
std::filesystem::path save_system(const System& sys, const std::filesystem::path& dir,
                                  const std::string& stem = "system");

/// Manifest JSON for `sys`, with matrix file names prefixed by `prefix`.
Json system_manifest(const System& sys, const std::string& prefix);

} // namespace specmor

#endif // SPECMOR_IO_HPP
