#ifndef SPECMOR_OPTIONS_HPP
#define SPECMOR_OPTIONS_HPP

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace specmor
{

using Json = nlohmann::ordered_json;

///
/// Nested configuration record. Leaves are numbers, booleans or strings; inner
/// nodes are sub-trees. Every operation has a complete default tree
/// (`defaults_for`), and user trees are merged over it with unknown keys
/// rejected. Option names are shared between operations, so a sub-tree built
/// for one routine (e.g. "sign") can be reused for another.
///
class OptionTree
{
public:
    OptionTree();
    explicit OptionTree(Json tree);

    /// Complete tree of defaults for an operation name. Throws
    /// Error(UnknownOption) for names outside the registry.
    static OptionTree defaults_for(std::string_view operation);

    /// Names accepted by defaults_for.
    static std::vector<std::string> operations();

    /// Recursive user-wins overlay without key validation.
    static OptionTree overlay(const OptionTree& base, const OptionTree& user);

    /// Overlay `user` on this tree; every user key must exist here.
    OptionTree merged(const OptionTree& user) const;

    bool has(std::string_view key) const;
    double number(std::string_view key) const;
    long integer(std::string_view key) const;
    bool flag(std::string_view key) const;
    std::string text(std::string_view key) const;
    OptionTree child(std::string_view key) const;

    OptionTree& set(std::string_view key, Json value);

    const Json& json() const { return tree_; }

    friend bool operator==(const OptionTree& a, const OptionTree& b) { return a.tree_ == b.tree_; }

private:
    const Json& at(std::string_view key) const;
    Json tree_;
};

/// Defaults for `operation` merged with the (possibly partial) user tree.
OptionTree resolve_options(std::string_view operation, const OptionTree& user);

///
/// Nested record of results: iteration counts, residuals, dimensions,
/// singular values and sub-records of called routines.
///
class InfoTree
{
public:
    InfoTree() : tree_(Json::object()) {}

    InfoTree& set(std::string_view key, Json value);
    void set_child(std::string_view key, const InfoTree& sub);
    bool has(std::string_view key) const { return tree_.contains(std::string(key)); }
    const Json& get(std::string_view key) const;

    const Json& json() const { return tree_; }
    std::string dump(int indent = 2) const { return tree_.dump(indent); }

private:
    Json tree_;
};

} // namespace specmor

#endif // SPECMOR_OPTIONS_HPP
