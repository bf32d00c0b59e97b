#include <specmor/error.hpp>
#include <specmor/io.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace specmor
{

namespace
{

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_double(const std::string& token, const fs::path& path)
{
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+')
    {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
    {
        // from_chars rejects "inf"/"nan" spellings used by some writers.
        const std::string t = lower(token);
        if (t == "nan" || t == "inf" || t == "-inf" || t == "+inf")
        {
            throw Error(ErrorKind::Format, path.string() + ": non-finite entry '" + token + "'");
        }
        throw Error(ErrorKind::Format, path.string() + ": cannot parse number '" + token + "'");
    }
    return v;
}

long parse_count(const std::string& token, const fs::path& path)
{
    long v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || v < 0)
    {
        throw Error(ErrorKind::Format, path.string() + ": bad size field '" + token + "'");
    }
    return v;
}

} // namespace

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc())
    {
        throw Error(ErrorKind::Format, "cannot format number");
    }
    return std::string(buf.data(), ptr);
}

Matrix read_matrix_market(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw Error(ErrorKind::Io, "cannot open matrix file '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line))
    {
        throw Error(ErrorKind::Format, path.string() + ": empty file");
    }
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    {
        throw Error(ErrorKind::Format, path.string() + ": missing %%MatrixMarket matrix header");
    }
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (field != "real" && field != "integer" && field != "double")
    {
        throw Error(ErrorKind::Format, path.string() + ": unsupported field '" + field + "'");
    }
    if (symmetry != "general" && symmetry != "symmetric")
    {
        throw Error(ErrorKind::Format, path.string() + ": unsupported symmetry '" + symmetry + "'");
    }
    const bool symmetric = symmetry == "symmetric";

    std::vector<std::string> tokens;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '%')
        {
            continue;
        }
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok)
        {
            tokens.push_back(tok);
        }
    }
    if (tokens.size() < 2)
    {
        throw Error(ErrorKind::Format, path.string() + ": missing size line");
    }
    const long rows = parse_count(tokens[0], path);
    const long cols = parse_count(tokens[1], path);
    Matrix m = Matrix::Zero(rows, cols);

    if (format == "array")
    {
        std::size_t pos = 2;
        for (long j = 0; j < cols; ++j)
        {
            for (long i = symmetric ? j : 0; i < rows; ++i)
            {
                if (pos >= tokens.size())
                {
                    throw Error(ErrorKind::Format, path.string() + ": too few entries");
                }
                m(i, j) = parse_double(tokens[pos++], path);
                if (symmetric)
                {
                    m(j, i) = m(i, j);
                }
            }
        }
        if (pos != tokens.size())
        {
            throw Error(ErrorKind::Format, path.string() + ": trailing entries");
        }
    }
    else if (format == "coordinate")
    {
        if (tokens.size() < 3)
        {
            throw Error(ErrorKind::Format, path.string() + ": missing nonzero count");
        }
        const long nnz = parse_count(tokens[2], path);
        if (tokens.size() != 3 + 3 * static_cast<std::size_t>(nnz))
        {
            throw Error(ErrorKind::Format, path.string() + ": entry count does not match header");
        }
        for (long k = 0; k < nnz; ++k)
        {
            const long i = parse_count(tokens[3 + 3 * k], path) - 1;
            const long j = parse_count(tokens[4 + 3 * k], path) - 1;
            if (i < 0 || i >= rows || j < 0 || j >= cols)
            {
                throw Error(ErrorKind::Format, path.string() + ": index out of range");
            }
            const double v = parse_double(tokens[5 + 3 * k], path);
            m(i, j) += v;
            if (symmetric && i != j)
            {
                m(j, i) += v;
            }
        }
    }
    else
    {
        throw Error(ErrorKind::Format, path.string() + ": unsupported format '" + format + "'");
    }
    return m;
}

void write_matrix_market(const fs::path& path, const Matrix& m)
{
    std::ostringstream out;
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Index j = 0; j < m.cols(); ++j)
    {
        for (Index i = 0; i < m.rows(); ++i)
        {
            out << format_double(m(i, j)) << '\n';
        }
    }
    write_text_file(path, out.str());
}

Json read_json_file(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    }
    try
    {
        return Json::parse(in);
    }
    catch (const nlohmann::json::exception& ex)
    {
        throw Error(ErrorKind::Format, path.string() + ": malformed JSON (" + ex.what() + ")");
    }
}

void write_text_file(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path())
    {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out)
    {
        throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
    }
}

namespace
{

struct ClassInfo
{
    bool descriptor;
    bool second_order;
    TimeDomain time;
};

ClassInfo parse_class(const std::string& name)
{
    if (name == "ct_ss") return {false, false, TimeDomain::Continuous};
    if (name == "dt_ss") return {false, false, TimeDomain::Discrete};
    if (name == "ct_dss") return {true, false, TimeDomain::Continuous};
    if (name == "dt_dss") return {true, false, TimeDomain::Discrete};
    if (name == "ct_soss") return {false, true, TimeDomain::Continuous};
    throw Error(ErrorKind::Format, "unknown system class '" + name + "'");
}

long manifest_count(const Json& j, const char* key, const fs::path& path)
{
    if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long>() < 0)
    {
        throw Error(ErrorKind::Format, path.string() + ": manifest field '" + key + "' missing or not a count");
    }
    return j.at(key).get<long>();
}

} // namespace

LoadedSystem load_system_with_report(const fs::path& manifest)
{
    const Json j = read_json_file(manifest);
    if (!j.is_object() || !j.contains("class") || !j.at("class").is_string())
    {
        throw Error(ErrorKind::Format, manifest.string() + ": manifest needs a string field 'class'");
    }
    const std::string cls = j.at("class").get<std::string>();
    const ClassInfo info = parse_class(cls);
    const long n = manifest_count(j, "n", manifest);
    const long m = manifest_count(j, "m", manifest);
    const long p = manifest_count(j, "p", manifest);
    if (!j.contains("matrices") || !j.at("matrices").is_object())
    {
        throw Error(ErrorKind::Format, manifest.string() + ": manifest needs an object field 'matrices'");
    }
    const Json& files = j.at("matrices");
    const fs::path base = manifest.has_parent_path() ? manifest.parent_path() : fs::path(".");

    ValidationReport report;
    auto load = [&](const char* key, long rows, long cols, bool required) -> Matrix {
        if (!files.contains(key))
        {
            if (required)
            {
                throw Error(ErrorKind::Format, manifest.string() + ": matrix '" + key + "' required for " + cls);
            }
            return Matrix::Zero(rows, cols);
        }
        const fs::path file = base / files.at(key).get<std::string>();
        if (!fs::exists(file))
        {
            throw Error(ErrorKind::Io, "matrix file '" + file.string() + "' (" + key + ") does not exist");
        }
        Matrix mat = read_matrix_market(file);
        if (mat.rows() != rows || mat.cols() != cols)
        {
            throw Error(ErrorKind::DimensionMismatch,
                        std::string(key) + " in '" + file.string() + "' is " + std::to_string(mat.rows()) + "x" +
                            std::to_string(mat.cols()) + ", expected " + std::to_string(rows) + "x" +
                            std::to_string(cols));
        }
        return mat;
    };

    if (info.descriptor && !files.contains("E"))
    {
        throw Error(ErrorKind::Format, manifest.string() + ": E required for dss");
    }
    const bool d_missing = !files.contains("D");
    LoadedSystem out{StandardSystem{}, {}};
    if (info.second_order)
    {
        SecondOrderSystem so;
        so.m = load("M", n, n, true);
        so.e = load("E", n, n, false);
        so.k = load("K", n, n, true);
        so.bu = load("Bu", n, m, true);
        so.cp = load("Cp", p, n, false);
        so.cv = load("Cv", p, n, false);
        so.d = load("D", p, m, false);
        if (!files.contains("Cp") && !files.contains("Cv"))
        {
            throw Error(ErrorKind::Format, manifest.string() + ": ct_soss needs Cp or Cv");
        }
        out.system = so;
    }
    else if (info.descriptor)
    {
        DescriptorSystem ds;
        ds.e = load("E", n, n, true);
        ds.a = load("A", n, n, true);
        ds.b = load("B", n, m, true);
        ds.c = load("C", p, n, true);
        ds.d = load("D", p, m, false);
        ds.time = info.time;
        out.system = ds;
    }
    else
    {
        StandardSystem ss;
        ss.a = load("A", n, n, true);
        ss.b = load("B", n, m, true);
        ss.c = load("C", p, n, true);
        ss.d = load("D", p, m, false);
        ss.time = info.time;
        out.system = ss;
    }
    out.report = validate(out.system);
    if (d_missing)
    {
        out.report.notes.push_back("D omitted; treated as zero");
    }
    return out;
}

System load_system(const fs::path& manifest)
{
    return load_system_with_report(manifest).system;
}

namespace
{

std::vector<std::pair<std::string, const Matrix*>> named_matrices(const System& sys)
{
    std::vector<std::pair<std::string, const Matrix*>> out;
    if (const auto* s = std::get_if<StandardSystem>(&sys))
    {
        out = {{"A", &s->a}, {"B", &s->b}, {"C", &s->c}, {"D", &s->d}};
    }
    else if (const auto* s = std::get_if<DescriptorSystem>(&sys))
    {
        out = {{"E", &s->e}, {"A", &s->a}, {"B", &s->b}, {"C", &s->c}, {"D", &s->d}};
    }
    else
    {
        const auto& so = std::get<SecondOrderSystem>(sys);
        out = {{"M", &so.m}, {"E", &so.e}, {"K", &so.k}, {"Bu", &so.bu},
               {"Cp", &so.cp}, {"Cv", &so.cv}, {"D", &so.d}};
    }
    return out;
}

} // namespace

Json system_manifest(const System& sys, const std::string& prefix)
{
    Json j;
    j["class"] = class_name(sys);
    j["n"] = order(sys);
    j["m"] = inputs(sys);
    j["p"] = outputs(sys);
    Json files = Json::object();
    for (const auto& [name, mat] : named_matrices(sys))
    {
        (void)mat;
        files[name] = prefix + name + ".mtx";
    }
    j["matrices"] = files;
    return j;
}

fs::path save_system(const System& sys, const fs::path& dir, const std::string& stem)
{
    fs::create_directories(dir);
    const std::string prefix = stem + "_";
    for (const auto& [name, mat] : named_matrices(sys))
    {
        write_matrix_market(dir / (prefix + name + ".mtx"), *mat);
    }
    const fs::path manifest = dir / (stem + ".json");
    write_text_file(manifest, system_manifest(sys, prefix).dump(2) + "\n");
    return manifest;
}

} // namespace specmor
