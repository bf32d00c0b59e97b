#include <specmor/cli.hpp>
#include <specmor/decomposition.hpp>
#include <specmor/evaluation.hpp>
#include <specmor/io.hpp>
#include <specmor/mor.hpp>
#include <specmor/mor_so.hpp>
#include <specmor/parametric.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>

namespace specmor
{

namespace fs = std::filesystem;

namespace
{

Json to_json(const Vector& v)
{
    return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

OptionTree user_options(const std::string& path)
{
    if (path.empty())
    {
        return OptionTree();
    }
    const Json j = read_json_file(path);
    if (!j.is_object())
    {
        throw Error(ErrorKind::Format, path + ": options file must hold a JSON object");
    }
    return OptionTree(j);
}

void write_csv(const std::string& path, const std::string& csv, std::ostream& out)
{
    if (path.empty())
    {
        out << csv;
        return;
    }
    if (fs::path(path).has_parent_path())
    {
        fs::create_directories(fs::path(path).parent_path());
    }
    write_text_file(path, csv);
}

void write_info(const std::string& path, const Json& info)
{
    if (path.empty())
    {
        return;
    }
    if (fs::path(path).has_parent_path())
    {
        fs::create_directories(fs::path(path).parent_path());
    }
    write_text_file(path, info.dump(2) + "\n");
}

System load_checked(const std::string& path)
{
    const LoadedSystem loaded = load_system_with_report(path);
    if (!loaded.report.ok())
    {
        throw Error(ErrorKind::Format, path + ": " + loaded.report.issues.front());
    }
    return loaded.system;
}

void apply_order_tol(OptionTree& tree, const std::optional<long>& order, const std::optional<double>& tol)
{
    if (order)
    {
        tree.set("order", *order);
        if (!tol)
        {
            tree.set("tol", 0.0);
        }
    }
    if (tol)
    {
        tree.set("tol", *tol);
        if (!order)
        {
            tree.set("order", -1);
        }
    }
}

struct Context
{
    std::ostream& out;
    std::ostream& err;
    std::string info_path;
    Json info = Json::object();
};

// reduce ------------------------------------------------------------------

struct ReduceArgs
{
    std::string in, out_dir, opts, method, formula;
    std::optional<long> order;
    std::optional<double> tol;
};

void cmd_reduce(const ReduceArgs& a, Context& ctx)
{
    const System sys = load_checked(a.in);
    ctx.info["command"] = "reduce";
    ctx.info["input_class"] = class_name(sys);
    ctx.info["input_order"] = order(sys);
    fs::path manifest;
    if (const auto* so = std::get_if<SecondOrderSystem>(&sys))
    {
        OptionTree tree = resolve_options("so_reduce", user_options(a.opts));
        if (!a.formula.empty())
        {
            tree.set("formula", a.formula);
        }
        apply_order_tol(tree, a.order, a.tol);
        ctx.info["options"] = tree.json();
        const SoReduction r = so_reduce(*so, tree);
        ctx.info["result"] = r.info.json();
        manifest = save_system(r.rom, a.out_dir, "rom");
    }
    else
    {
        OptionTree tree = resolve_options("reduce", user_options(a.opts));
        if (!a.method.empty())
        {
            tree.set("method", a.method);
        }
        apply_order_tol(tree, a.order, a.tol);
        ctx.info["options"] = tree.json();
        const ReductionResult r = reduce(sys, tree);
        ctx.info["result"] = r.info.json();
        manifest = save_system(r.rom, a.out_dir, "rom");
    }
    ctx.info["rom"] = manifest.filename().string();
    ctx.out << manifest.string() << "\n";
}

// decompose ---------------------------------------------------------------

void cmd_decompose(const std::string& in, const std::string& out_dir, const std::string& opts, Context& ctx)
{
    const System sys = load_checked(in);
    const OptionTree tree = resolve_options("decompose", user_options(opts));
    ctx.info["command"] = "decompose";
    ctx.info["options"] = tree.json();
    const SubsystemDecomposition parts = decompose(sys, tree);
    ctx.info["ns"] = parts.ns;
    ctx.info["nu"] = parts.nu;
    ctx.info["ninf"] = parts.ninf;
    ctx.info["transform"] = parts.transform_info.json();
    Json files = Json::object();
    files["stable"] = save_system(parts.stable, out_dir, "stable").filename().string();
    if (parts.antistable)
    {
        files["antistable"] = save_system(*parts.antistable, out_dir, "antistable").filename().string();
    }
    if (parts.infinite)
    {
        files["infinite"] = save_system(*parts.infinite, out_dir, "infinite").filename().string();
    }
    ctx.info["parts"] = files;
    ctx.out << (fs::path(out_dir) / "stable.json").string() << "\n";
}

// eval-freq ---------------------------------------------------------------

struct FreqArgs
{
    std::vector<std::string> systems;
    std::string opts, out;
    std::optional<double> wlo, whi;
    std::optional<long> n;
};

void cmd_eval_freq(const FreqArgs& a, Context& ctx)
{
    OptionTree tree = resolve_options("eval_freq", user_options(a.opts));
    if (a.wlo)
    {
        tree.set("wlo", *a.wlo);
    }
    if (a.whi)
    {
        tree.set("whi", *a.whi);
    }
    if (a.n)
    {
        tree.set("n", *a.n);
    }
    std::vector<System> systems;
    for (const auto& path : a.systems)
    {
        systems.push_back(load_checked(path));
    }
    const Vector grid = log_grid(tree.number("wlo"), tree.number("whi"), tree.integer("n"));
    const SigmaTable table = sigma_data(systems, grid, tree.number("zero_floor"));
    ctx.info["command"] = "eval-freq";
    ctx.info["options"] = tree.json();
    ctx.info["systems"] = a.systems;
    ctx.info["singular_rows"] = table.singular;
    ctx.info["zero_reference_rows"] = table.zero_reference;
    Json maxerr = Json::array();
    for (Index j = 0; j < table.relerr.cols(); ++j)
    {
        double m = 0.0;
        for (Index i = 0; i < table.relerr.rows(); ++i)
        {
            if (!std::isnan(table.relerr(i, j)))
            {
                m = std::max(m, table.relerr(i, j));
            }
        }
        maxerr.push_back(m);
    }
    ctx.info["max_relerr"] = maxerr;
    write_csv(a.out, sigma_csv(table), ctx.out);
}

// simulate ----------------------------------------------------------------

struct SimArgs
{
    std::string in, compare, opts, out, input, input_file;
    std::optional<double> tf;
    std::optional<long> steps, seed;
};

void cmd_simulate(const SimArgs& a, Context& ctx)
{
    OptionTree tree = resolve_options("simulate", user_options(a.opts));
    if (a.tf)
    {
        tree.set("tf", *a.tf);
    }
    if (a.steps)
    {
        tree.set("steps", *a.steps);
    }
    if (a.seed)
    {
        tree.set("seed", *a.seed);
    }
    if (!a.input.empty())
    {
        tree.set("input", a.input);
    }
    SimulationSetup setup = simulation_setup(tree);
    if (setup.input == "file")
    {
        if (a.input_file.empty())
        {
            throw Error(ErrorKind::InvalidArgument, "input 'file' needs --input-file");
        }
        setup.u_file = read_matrix_market(a.input_file);
    }
    const System sys = load_checked(a.in);
    ctx.info["command"] = "simulate";
    ctx.info["options"] = tree.json();
    ctx.info["prng"] = "mt19937_64 with standard normal samples";
    const SimulationResult ref = simulate(sys, setup, tree.child("decompose"));
    std::optional<SimulationResult> rom;
    if (!a.compare.empty())
    {
        rom = simulate(load_checked(a.compare), setup, tree.child("decompose"));
        if (rom->y.cols() != ref.y.cols())
        {
            throw Error(ErrorKind::DimensionMismatch, "compared systems have different output counts");
        }
        const Vector e = simulation_rel_error(ref.y, rom->y, tree.number("zero_floor"));
        ctx.info["max_relerr"] = e.maxCoeff();
    }
    write_csv(a.out, simulation_csv(ref, rom ? &*rom : nullptr, tree.number("zero_floor")), ctx.out);
}

// pmor-build --------------------------------------------------------------

const std::vector<std::string> pmor_kinds{"lagrange", "bspline-linear", "bspline-vardim", "piecewise-one",
                                          "piecewise-two"};

struct BuildArgs
{
    std::string in, out_dir, opts, kind;
    std::optional<long> knots, order;
    std::optional<double> tol;
};

std::string local_name(std::size_t j)
{
    std::ostringstream os;
    os << "local_" << std::setw(2) << std::setfill('0') << j;
    return os.str();
}

void cmd_pmor_build(const BuildArgs& a, Context& ctx)
{
    OptionTree tree = resolve_options("parametric", user_options(a.opts));
    if (!a.kind.empty())
    {
        tree.set("kind", a.kind);
    }
    if (a.knots)
    {
        tree.set("knots", *a.knots);
    }
    OptionTree local = tree.child("reduce");
    apply_order_tol(local, a.order, a.tol);
    tree.set("reduce", local.json());
    const std::string kind = tree.text("kind");
    if (std::find(pmor_kinds.begin(), pmor_kinds.end(), kind) == pmor_kinds.end())
    {
        throw Error(ErrorKind::InvalidArgument, "unknown parametric kind '" + kind + "'");
    }
    const AffineParamSystem sys = load_param_system(a.in);
    const Vector knots = sample_parameters(tree.number("log_lo"), tree.number("log_hi"), tree.integer("knots"));
    ctx.info["command"] = "pmor-build";
    ctx.info["options"] = tree.json();
    const std::vector<LocalRom> locals = local_roms(sys, knots, local);

    Json model{{"kind", kind},
               {"mu_domain", {sys.mu_lo, sys.mu_hi}},
               {"strict_domain", tree.flag("strict_domain")},
               {"knots", to_json(knots)}};
    Json files = Json::array();
    Json orders = Json::array();
    for (std::size_t j = 0; j < locals.size(); ++j)
    {
        files.push_back(save_system(locals[j].rom, a.out_dir, local_name(j)).filename().string());
        orders.push_back(order(locals[j].rom));
    }
    model["roms"] = files;
    ctx.info["local_orders"] = orders;
    if (kind.rfind("piecewise", 0) == 0)
    {
        const PiecewiseRom pw = piecewise_rom(sys, locals, kind == "piecewise-one", tree.number("compress_tol"));
        model["system"] = save_param_system(pw.system, a.out_dir, "rom").filename().string();
        ctx.info["order"] = pw.system.order();
    }
    else
    {
        const InterpolatoryRom ir = interp_rom(locals, parse_basis_kind(kind));
        Index total = 0;
        for (const auto& r : ir.roms)
        {
            total += order(r);
        }
        ctx.info["order"] = total;
    }
    const fs::path manifest = fs::path(a.out_dir) / "pmor.json";
    write_text_file(manifest, model.dump(2) + "\n");
    ctx.out << manifest.string() << "\n";
}

// pmor-eval ---------------------------------------------------------------

struct EvalArgs
{
    std::string model, ref, opts, out;
    std::optional<double> wlo, whi;
    std::optional<long> n, mu_n;
};

void cmd_pmor_eval(const EvalArgs& a, Context& ctx)
{
    const Json model = read_json_file(a.model);
    if (!model.is_object() || !model.contains("kind") || !model.contains("mu_domain"))
    {
        throw Error(ErrorKind::Format, a.model + ": parametric model needs 'kind' and 'mu_domain'");
    }
    OptionTree freq = resolve_options("eval_freq", user_options(a.opts));
    if (a.wlo)
    {
        freq.set("wlo", *a.wlo);
    }
    if (a.whi)
    {
        freq.set("whi", *a.whi);
    }
    if (a.n)
    {
        freq.set("n", *a.n);
    }
    const fs::path base = fs::path(a.model).has_parent_path() ? fs::path(a.model).parent_path() : fs::path(".");
    const std::string kind = model.at("kind").get<std::string>();
    const bool strict = model.value("strict_domain", false);
    std::optional<AffineParamSystem> piecewise;
    std::optional<InterpolatoryRom> ir;
    if (kind.rfind("piecewise", 0) == 0)
    {
        piecewise = load_param_system(base / model.at("system").get<std::string>());
    }
    else
    {
        std::vector<System> roms;
        for (const auto& f : model.at("roms"))
        {
            roms.push_back(load_checked((base / f.get<std::string>()).string()));
        }
        const std::vector<double> k = model.at("knots").get<std::vector<double>>();
        ir = interp_rom(Eigen::Map<const Vector>(k.data(), static_cast<Index>(k.size())), roms,
                        parse_basis_kind(kind));
    }
    std::optional<AffineParamSystem> ref;
    if (!a.ref.empty())
    {
        ref = load_param_system(a.ref);
    }
    const Vector mus = log_grid(model.at("mu_domain").at(0).get<double>(), model.at("mu_domain").at(1).get<double>(),
                                a.mu_n.value_or(50));
    const Vector omega = log_grid(freq.number("wlo"), freq.number("whi"), freq.integer("n"));

    std::ostringstream csv;
    csv << "mu,omega,sigma_rom" << (ref ? ",sigma_ref,relerr" : "") << "\n";
    double worst = 0.0;
    bool clamped = false;
    for (Index i = 0; i < mus.size(); ++i)
    {
        std::optional<System> pw_sys;
        if (piecewise)
        {
            pw_sys = materialize(*piecewise, mus(i));
        }
        std::optional<System> ref_sys;
        if (ref)
        {
            ref_sys = materialize(*ref, mus(i));
        }
        for (Index j = 0; j < omega.size(); ++j)
        {
            const Complex s(0.0, omega(j));
            double sr = std::numeric_limits<double>::quiet_NaN();
            std::optional<ComplexMatrix> g;
            try
            {
                if (pw_sys)
                {
                    g = transfer_eval(*pw_sys, s);
                }
                else
                {
                    InfoTree note;
                    g = eval_interp(*ir, s, mus(i), strict, &note);
                    clamped = clamped || note.has("clamped");
                }
                sr = Eigen::JacobiSVD<ComplexMatrix>(*g).singularValues()(0);
            }
            catch (const Error& e)
            {
                if (e.kind() != ErrorKind::SingularAtFrequency)
                {
                    throw;
                }
            }
            csv << format_csv_number(mus(i)) << "," << format_csv_number(omega(j)) << "," << format_csv_number(sr);
            if (ref_sys)
            {
                const ComplexMatrix gr = transfer_eval(*ref_sys, s);
                const double sref = Eigen::JacobiSVD<ComplexMatrix>(gr).singularValues()(0);
                double rel = std::numeric_limits<double>::quiet_NaN();
                if (g && sref > freq.number("zero_floor"))
                {
                    rel = Eigen::JacobiSVD<ComplexMatrix>(gr - *g).singularValues()(0) / sref;
                    worst = std::max(worst, rel);
                }
                csv << "," << format_csv_number(sref) << "," << format_csv_number(rel);
            }
            csv << "\n";
        }
    }
    ctx.info["command"] = "pmor-eval";
    ctx.info["kind"] = kind;
    ctx.info["options"] = freq.json();
    ctx.info["mu_points"] = mus.size();
    if (clamped)
    {
        ctx.info["warning"] = "mu clamped to the spline knot range";
        ctx.err << "warning: mu clamped to the spline knot range\n";
    }
    if (ref)
    {
        ctx.info["max_relerr"] = worst;
    }
    write_csv(a.out, csv.str(), ctx.out);
}

// info --------------------------------------------------------------------

void cmd_info(const std::string& in, Context& ctx)
{
    const Json raw = read_json_file(in);
    Json j;
    if (raw.is_object() && raw.contains("a_terms"))
    {
        const AffineParamSystem sys = load_param_system(in);
        Json tags = Json::array();
        for (const auto& t : sys.terms)
        {
            tags.push_back(t.theta);
        }
        j = {{"class", sys.e.size() == 0 ? "ct_ss" : "ct_dss"},
             {"parametric", true},
             {"n", sys.order()},
             {"m", sys.b.cols()},
             {"p", sys.c.rows()},
             {"terms", tags},
             {"mu_domain", {sys.mu_lo, sys.mu_hi}}};
    }
    else
    {
        const LoadedSystem loaded = load_system_with_report(in);
        j = {{"class", class_name(loaded.system)},
             {"parametric", false},
             {"n", order(loaded.system)},
             {"m", inputs(loaded.system)},
             {"p", outputs(loaded.system)},
             {"valid", loaded.report.ok()},
             {"issues", loaded.report.issues},
             {"notes", loaded.report.notes}};
        if (!loaded.report.ok())
        {
            ctx.out << j.dump(2) << "\n";
            throw Error(ErrorKind::Format, in + ": " + loaded.report.issues.front());
        }
    }
    ctx.info = j;
    ctx.out << j.dump(2) << "\n";
}

} // namespace

int exit_code_for(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::UnknownOption:
    case ErrorKind::Io:
    case ErrorKind::Format:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::InvalidArgument:
    case ErrorKind::FormulaUnknown:
    case ErrorKind::IntervalInvalid:
    case ErrorKind::OrderTooLarge:
        return 1;
    default:
        return 2;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Dense model order reduction toolbox", "specmor"};
    app.require_subcommand(1);
    Context ctx{out, err, {}, Json::object()};
    std::function<void()> action;

    ReduceArgs ra;
    auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a system manifest");
    reduce_cmd->add_option("--in", ra.in, "System manifest")->required();
    reduce_cmd->add_option("--out", ra.out_dir, "Output directory")->required();
    reduce_cmd->add_option("--method", ra.method, "Method: " + [] {
        std::string s;
        for (const auto& m : reduction_methods())
        {
            s += (s.empty() ? "" : ", ") + m;
        }
        return s;
    }());
    reduce_cmd->add_option("--formula", ra.formula, "Second-order balancing formula");
    reduce_cmd->add_option("--order", ra.order, "Reduced order");
    reduce_cmd->add_option("--tol", ra.tol, "Error tolerance");
    reduce_cmd->add_option("--opts", ra.opts, "Options JSON merged over the defaults");
    reduce_cmd->callback([&] {
        ctx.info_path = (fs::path(ra.out_dir) / "info.json").string();
        action = [&] { cmd_reduce(ra, ctx); };
    });

    std::string d_in;
    std::string d_out;
    std::string d_opts;
    auto* decompose_cmd = app.add_subcommand("decompose", "Additive decomposition into stable, antistable and "
                                                          "polynomial parts");
    decompose_cmd->add_option("--in", d_in, "System manifest")->required();
    decompose_cmd->add_option("--out", d_out, "Output directory")->required();
    decompose_cmd->add_option("--opts", d_opts, "Options JSON merged over the defaults");
    decompose_cmd->callback([&] {
        ctx.info_path = (fs::path(d_out) / "info.json").string();
        action = [&] { cmd_decompose(d_in, d_out, d_opts, ctx); };
    });

    FreqArgs fa;
    std::string f_info;
    auto* freq_cmd = app.add_subcommand("eval-freq", "Sigma values and relative errors on a frequency grid");
    freq_cmd->add_option("--systems", fa.systems, "Reference system first, then the compared systems")
        ->required()
        ->expected(1, -1);
    freq_cmd->add_option("--wlo", fa.wlo, "Lowest frequency");
    freq_cmd->add_option("--whi", fa.whi, "Highest frequency");
    freq_cmd->add_option("--n", fa.n, "Number of grid points");
    freq_cmd->add_option("--opts", fa.opts, "Options JSON merged over the defaults");
    freq_cmd->add_option("--out", fa.out, "CSV file (stdout when omitted)");
    freq_cmd->add_option("--info", f_info, "Info JSON file");
    freq_cmd->callback([&] {
        ctx.info_path = f_info;
        action = [&] { cmd_eval_freq(fa, ctx); };
    });

    SimArgs sa;
    std::string s_info;
    auto* sim_cmd = app.add_subcommand("simulate", "Time-domain simulation from a zero initial state");
    sim_cmd->add_option("--in", sa.in, "System manifest")->required();
    sim_cmd->add_option("--compare", sa.compare, "Second system simulated with the same input");
    sim_cmd->add_option("--tf", sa.tf, "Final time");
    sim_cmd->add_option("--steps", sa.steps, "Number of time steps");
    sim_cmd->add_option("--input", sa.input, "noise, step, zero or file");
    sim_cmd->add_option("--input-file", sa.input_file, "Matrix Market file with (steps + 1) x m samples");
    sim_cmd->add_option("--seed", sa.seed, "Noise seed");
    sim_cmd->add_option("--opts", sa.opts, "Options JSON merged over the defaults");
    sim_cmd->add_option("--out", sa.out, "CSV file (stdout when omitted)");
    sim_cmd->add_option("--info", s_info, "Info JSON file");
    sim_cmd->callback([&] {
        ctx.info_path = s_info;
        action = [&] { cmd_simulate(sa, ctx); };
    });

    BuildArgs ba;
    auto* build_cmd = app.add_subcommand("pmor-build", "Parametric rom from local roms at log-Chebyshev samples");
    build_cmd->add_option("--in", ba.in, "Parametric system manifest")->required();
    build_cmd->add_option("--out", ba.out_dir, "Output directory")->required();
    build_cmd->add_option("--kind", ba.kind,
                          "lagrange, bspline-linear, bspline-vardim, piecewise-one or piecewise-two");
    build_cmd->add_option("--knots", ba.knots, "Number of parameter samples");
    build_cmd->add_option("--order", ba.order, "Local reduced order");
    build_cmd->add_option("--tol", ba.tol, "Local error tolerance");
    build_cmd->add_option("--opts", ba.opts, "Options JSON merged over the defaults");
    build_cmd->callback([&] {
        ctx.info_path = (fs::path(ba.out_dir) / "info.json").string();
        action = [&] { cmd_pmor_build(ba, ctx); };
    });

    EvalArgs ea;
    std::string e_info;
    auto* peval_cmd = app.add_subcommand("pmor-eval", "Evaluate a parametric rom on a parameter and frequency grid");
    peval_cmd->add_option("--model", ea.model, "pmor.json written by pmor-build")->required();
    peval_cmd->add_option("--ref", ea.ref, "Full parametric system for relative errors");
    peval_cmd->add_option("--mu-n", ea.mu_n, "Number of parameter points");
    peval_cmd->add_option("--wlo", ea.wlo, "Lowest frequency");
    peval_cmd->add_option("--whi", ea.whi, "Highest frequency");
    peval_cmd->add_option("--n", ea.n, "Number of frequency points");
    peval_cmd->add_option("--opts", ea.opts, "eval_freq options JSON");
    peval_cmd->add_option("--out", ea.out, "CSV file (stdout when omitted)");
    peval_cmd->add_option("--info", e_info, "Info JSON file");
    peval_cmd->callback([&] {
        ctx.info_path = e_info;
        action = [&] { cmd_pmor_eval(ea, ctx); };
    });

    std::string i_in;
    auto* info_cmd = app.add_subcommand("info", "Class, dimensions and validation report of a manifest");
    info_cmd->add_option("--in", i_in, "System or parametric manifest")->required();
    info_cmd->callback([&] { action = [&] { cmd_info(i_in, ctx); }; });

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return 0;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    }
    catch (const CLI::ParseError& e)
    {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    auto fail = [&](const std::string& kind, const std::string& message, int code) {
        err << kind << ": " << message << "\n";
        ctx.info["error"] = {{"kind", kind}, {"message", message}};
        try
        {
            write_info(ctx.info_path, ctx.info);
        }
        catch (const std::exception&)
        {
        }
        return code;
    };
    try
    {
        action();
        write_info(ctx.info_path, ctx.info);
    }
    catch (const Error& e)
    {
        const std::string what = e.what();
        return fail(std::string(e.name()), what.substr(e.name().size() + 2), exit_code_for(e.kind()));
    }
    catch (const nlohmann::json::exception& e)
    {
        return fail("Format", e.what(), 1);
    }
    catch (const fs::filesystem_error& e)
    {
        return fail("Io", e.what(), 1);
    }
    catch (const std::exception& e)
    {
        return fail("InternalError", e.what(), 2);
    }
    return 0;
}

} // namespace specmor
