#include <specmor/error.hpp>
#include <specmor/options.hpp>

#include <functional>
#include <map>

namespace specmor
{

namespace
{

// Registry of canonical option trees. Sub-trees are shared by name so that
// e.g. every routine that runs a sign iteration exposes the same "sign" keys.
Json sign_tree()
{
    return {{"tol", 0.0}, {"max_iter", 100}, {"scaling", true}, {"scaling_switch", 0.1}};
}

Json disk_tree()
{
    return {{"tol", 0.0}, {"max_iter", 100}};
}

Json nullspace_tree()
{
    return {{"rank_tol", 1e-12}, {"method", "svd"}};
}

Json sylvester_tree()
{
    return {{"tol", 0.0}, {"max_iter", 100}};
}

Json lyapunov_tree()
{
    return {{"tol", 0.0}, {"max_iter", 100}, {"compress_tol", 1e-12}};
}

Json riccati_tree()
{
    return {{"tol", 0.0}, {"max_iter", 100}};
}

Json decompose_tree()
{
    return {{"stable_known", false},
            {"alpha", 0.0},
            {"alpha_refine", true},
            {"sign", sign_tree()},
            {"disk", disk_tree()},
            {"nullspace", nullspace_tree()},
            {"sylvester", sylvester_tree()}};
}

Json gramian_tree()
{
    return {{"lyapunov", lyapunov_tree()},
            {"riccati", riccati_tree()},
            {"sign", sign_tree()},
            {"freq_lo", 0.0},
            {"freq_hi", 1.0},
            {"time_final", 1.0},
            {"modified", false},
            {"gamma", 0.0},
            {"gamma_factor", 1.1}};
}

Json reduce_tree()
{
    return {{"method", "bt"},
            {"order", -1},
            {"tol", 0.0},
            {"flavor", "sqrt"},
            {"antistable", "keep"},
            {"region_kind", "right_of"},
            {"region_shift", 0.0},
            {"region_radius", 1.0},
            {"allow_empty", false},
            {"repeat_tol", 1e-8},
            {"gramian", gramian_tree()},
            {"decompose", decompose_tree()}};
}

Json so_reduce_tree()
{
    return {{"formula", "so"},
            {"order", -1},
            {"tol", 0.0},
            {"limited", "none"},
            {"freq_lo", 0.0},
            {"freq_hi", 1.0},
            {"time_final", 1.0},
            {"modified", false},
            {"one_sided", false},
            {"lyapunov", lyapunov_tree()},
            {"sign", sign_tree()}};
}

Json parametric_tree()
{
    Json local = reduce_tree();
    local["tol"] = 1e-4;
    return {{"knots", 10},
            {"log_lo", -6.0},
            {"log_hi", 2.0},
            {"kind", "lagrange"},
            {"compress_tol", 1e-4},
            {"strict_domain", false},
            {"reduce", local}};
}

Json simulate_tree()
{
    return {{"tf", 1.0},
            {"steps", 1000},
            {"input", "noise"},
            {"seed", 1},
            {"zero_floor", 1e-300},
            {"decompose", decompose_tree()}};
}

Json eval_freq_tree()
{
    return {{"wlo", 1e-2}, {"whi", 1e2}, {"n", 200}, {"zero_floor", 0.0}};
}

const std::map<std::string, std::function<Json()>, std::less<>>& registry()
{
    static const std::map<std::string, std::function<Json()>, std::less<>> table = {
        {"matrix_sign", sign_tree},
        {"disk", disk_tree},
        {"nullspace", nullspace_tree},
        {"sylvester", sylvester_tree},
        {"lyapunov", lyapunov_tree},
        {"riccati", riccati_tree},
        {"decompose", decompose_tree},
        {"gramian", gramian_tree},
        {"reduce", reduce_tree},
        {"so_reduce", so_reduce_tree},
        {"parametric", parametric_tree},
        {"simulate", simulate_tree},
        {"eval_freq", eval_freq_tree},
    };
    return table;
}

bool is_leaf(const Json& j)
{
    return j.is_number() || j.is_boolean() || j.is_string();
}

void check_shape(const Json& j, const std::string& path)
{
    if (!j.is_object())
    {
        throw Error(ErrorKind::Format, "option tree at '" + path + "' must be an object");
    }
    for (const auto& [key, value] : j.items())
    {
        const std::string sub = path.empty() ? key : path + "." + key;
        if (value.is_object())
        {
            check_shape(value, sub);
        }
        else if (!is_leaf(value))
        {
            throw Error(ErrorKind::Format, "option '" + sub + "' must be a number, boolean, string or tree");
        }
    }
}

void check_keys(const Json& defaults, const Json& user, const std::string& path)
{
    for (const auto& [key, value] : user.items())
    {
        const std::string sub = path.empty() ? key : path + "." + key;
        if (!defaults.contains(key))
        {
            throw Error(ErrorKind::UnknownOption, "unknown option key '" + sub + "'");
        }
        const Json& def = defaults.at(key);
        if (def.is_object() != value.is_object())
        {
            throw Error(ErrorKind::UnknownOption, "option '" + sub + "' has the wrong kind (tree vs value)");
        }
        if (value.is_object())
        {
            check_keys(def, value, sub);
        }
    }
}

Json overlay_json(const Json& base, const Json& user)
{
    Json out = base;
    for (const auto& [key, value] : user.items())
    {
        if (value.is_object() && out.contains(key) && out.at(key).is_object())
        {
            out[key] = overlay_json(out.at(key), value);
        }
        else
        {
            out[key] = value;
        }
    }
    return out;
}

} // namespace

OptionTree::OptionTree() : tree_(Json::object()) {}

OptionTree::OptionTree(Json tree) : tree_(std::move(tree))
{
    check_shape(tree_, "");
}

OptionTree OptionTree::defaults_for(std::string_view operation)
{
    const auto& table = registry();
    const auto it = table.find(operation);
    if (it == table.end())
    {
        throw Error(ErrorKind::UnknownOption, "no option registry for operation '" + std::string(operation) + "'");
    }
    return OptionTree(it->second());
}

std::vector<std::string> OptionTree::operations()
{
    std::vector<std::string> names;
    for (const auto& entry : registry())
    {
        names.push_back(entry.first);
    }
    return names;
}

OptionTree OptionTree::overlay(const OptionTree& base, const OptionTree& user)
{
    OptionTree out;
    out.tree_ = overlay_json(base.tree_, user.tree_);
    return out;
}

OptionTree OptionTree::merged(const OptionTree& user) const
{
    check_keys(tree_, user.tree_, "");
    return overlay(*this, user);
}

const Json& OptionTree::at(std::string_view key) const
{
    const auto it = tree_.find(std::string(key));
    if (it == tree_.end())
    {
        throw Error(ErrorKind::UnknownOption, "missing option key '" + std::string(key) + "'");
    }
    return *it;
}

bool OptionTree::has(std::string_view key) const
{
    return tree_.contains(std::string(key));
}

double OptionTree::number(std::string_view key) const
{
    const Json& v = at(key);
    if (!v.is_number())
    {
        throw Error(ErrorKind::Format, "option '" + std::string(key) + "' is not a number");
    }
    return v.get<double>();
}

long OptionTree::integer(std::string_view key) const
{
    const Json& v = at(key);
    if (!v.is_number())
    {
        throw Error(ErrorKind::Format, "option '" + std::string(key) + "' is not a number");
    }
    return static_cast<long>(v.get<double>());
}

bool OptionTree::flag(std::string_view key) const
{
    const Json& v = at(key);
    if (!v.is_boolean())
    {
        throw Error(ErrorKind::Format, "option '" + std::string(key) + "' is not a boolean");
    }
    return v.get<bool>();
}

std::string OptionTree::text(std::string_view key) const
{
    const Json& v = at(key);
    if (!v.is_string())
    {
        throw Error(ErrorKind::Format, "option '" + std::string(key) + "' is not a string");
    }
    return v.get<std::string>();
}

OptionTree OptionTree::child(std::string_view key) const
{
    const Json& v = at(key);
    if (!v.is_object())
    {
        throw Error(ErrorKind::Format, "option '" + std::string(key) + "' is not a tree");
    }
    OptionTree out;
    out.tree_ = v;
    return out;
}

OptionTree& OptionTree::set(std::string_view key, Json value)
{
    if (!value.is_object() && !is_leaf(value))
    {
        throw Error(ErrorKind::Format, "option '" + std::string(key) + "' must be a number, boolean, string or tree");
    }
    tree_[std::string(key)] = std::move(value);
    return *this;
}

OptionTree resolve_options(std::string_view operation, const OptionTree& user)
{
    return OptionTree::defaults_for(operation).merged(user);
}

InfoTree& InfoTree::set(std::string_view key, Json value)
{
    tree_[std::string(key)] = std::move(value);
    return *this;
}

void InfoTree::set_child(std::string_view key, const InfoTree& sub)
{
    tree_[std::string(key)] = sub.tree_;
}

const Json& InfoTree::get(std::string_view key) const
{
    const auto it = tree_.find(std::string(key));
    if (it == tree_.end())
    {
        throw Error(ErrorKind::InvalidArgument, "info record has no entry '" + std::string(key) + "'");
    }
    return *it;
}

} // namespace specmor
