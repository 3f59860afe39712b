#pragma once

// One-level labelled ordered sets: elements are labelled combinations of
// their super-elements. A synthetic top and bottom are always present so
// that path metrics are total.

#include "comdb/error.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace comdb::poset {

struct ElementId {
    std::string symbol;

    friend auto operator<=>(const ElementId&, const ElementId&) = default;
    friend bool operator==(const ElementId&, const ElementId&) = default;
};

struct Edge {
    std::string label;
    ElementId source;
    ElementId target;
    bool synthetic = false;
};

using Binding = std::pair<std::string, std::optional<ElementId>>;

/// Labelled combination ⟨x1:a1, x2:a2, …⟩; a binding with no value is null.
class Combination {
public:
    Combination() = default;
    Combination(std::initializer_list<Binding> bindings) : bindings_(bindings) {}
    explicit Combination(std::vector<Binding> bindings) : bindings_(std::move(bindings)) {}

    const std::vector<Binding>& bindings() const noexcept { return bindings_; }
    std::size_t size() const noexcept { return bindings_.size(); }

    bool has(const std::string& label) const { return find(label) != nullptr; }

    const std::optional<ElementId>* find(const std::string& label) const
    {
        for (const auto& [l, v] : bindings_)
            if (l == label)
                return &v;
        return nullptr;
    }

    std::vector<std::string> labels() const
    {
        std::vector<std::string> out;
        for (const auto& b : bindings_)
            out.push_back(b.first);
        return out;
    }

    /// Equal as sets of bindings, ignoring binding order.
    friend bool equivalent(const Combination& a, const Combination& b)
    {
        if (a.size() != b.size())
            return false;
        for (const auto& [l, v] : a.bindings_) {
            auto other = b.find(l);
            if (!other || *other != v)
                return false;
        }
        return true;
    }

    friend bool operator==(const Combination&, const Combination&) = default;

private:
    std::vector<Binding> bindings_;
};

/// Removes one dimension. Throws UnknownLabel if absent.
inline Combination reduce(const Combination& c, const std::string& label)
{
    if (!c.has(label))
        fail(Errc::unknown_label, "combination has no dimension '" + label + "'");
    std::vector<Binding> out;
    for (const auto& b : c.bindings())
        if (b.first != label)
            out.push_back(b);
    return Combination(std::move(out));
}

/// Adds one dimension with the given value (null allowed). Throws DuplicateLabel if present.
inline Combination extend(const Combination& c, const std::string& label, std::optional<ElementId> value)
{
    if (c.has(label))
        fail(Errc::duplicate_label, "combination already has dimension '" + label + "'");
    auto out = c.bindings();
    out.emplace_back(label, std::move(value));
    return Combination(std::move(out));
}

/// Extends both combinations with nulls so that they share one label set.
inline std::pair<Combination, Combination> align(const Combination& a, const Combination& b)
{
    Combination ra = a;
    Combination rb = b;
    for (const auto& [l, v] : b.bindings())
        if (!ra.has(l))
            ra = extend(ra, l, std::nullopt);
    for (const auto& [l, v] : a.bindings())
        if (!rb.has(l))
            rb = extend(rb, l, std::nullopt);
    return {ra, rb};
}

namespace detail {
inline void require_same_labels(const Combination& a, const Combination& b)
{
    if (a.size() != b.size())
        fail(Errc::label_mismatch, "combinations have different dimensions");
    for (const auto& [l, v] : a.bindings())
        if (!b.has(l))
            fail(Errc::label_mismatch, "dimension '" + l + "' missing from the second combination");
}
} // namespace detail

/// Induced specific-general relation with value equality: a ≤ b iff every
/// binding of b is null or equal to a's binding. Null is the most general value.
inline bool induced_leq(const Combination& a, const Combination& b)
{
    detail::require_same_labels(a, b);
    for (const auto& [l, bv] : b.bindings()) {
        if (!bv)
            continue;
        const auto& av = *a.find(l);
        if (av != bv)
            return false;
    }
    return true;
}

struct Metrics {
    std::size_t dimensionality = 0;
    std::size_t cardinality = 0;
    std::uint64_t primitive_dimensionality = 0;
    std::uint64_t primitive_cardinality = 0;
    std::uint64_t canonical_dimensionality = 0;
    std::uint64_t canonical_cardinality = 0;
};

enum class Direction { up, down };

/// A walk through the edge graph. `nodes` holds every visited element in
/// traversal order (so nodes.size() == labels.size() + 1).
struct ElementPath {
    Direction direction = Direction::up;
    std::vector<ElementId> nodes;
    std::vector<std::string> labels;

    std::size_t rank() const noexcept { return labels.size(); }
    const ElementId& start() const { return nodes.front(); }
    const ElementId& end() const { return nodes.back(); }

    /// Labels read in upward order (for a downward path, from its lowest element).
    std::vector<std::string> upward_labels() const
    {
        if (direction == Direction::up)
            return labels;
        return {labels.rbegin(), labels.rend()};
    }

    /// Dotted form written bottom-up, prefixed by its lowest element: "b.e3.e5.t".
    std::string to_string() const
    {
        const ElementId& low = direction == Direction::up ? start() : end();
        std::string out = low.symbol;
        for (const auto& l : upward_labels()) {
            out += '.';
            out += l;
        }
        return out;
    }
};

struct BinaryRow {
    ElementId source;
    ElementPath sub_dimension;
    std::vector<bool> bits;
};

struct BinaryTable {
    std::vector<ElementPath> columns;
    std::vector<BinaryRow> rows;

    std::vector<std::string> column_names() const
    {
        std::vector<std::string> out;
        for (const auto& c : columns)
            out.push_back(c.to_string());
        return out;
    }

    /// Rows produced by `source`, in sub-dimension order.
    std::vector<const BinaryRow*> rows_of(const ElementId& source) const
    {
        std::vector<const BinaryRow*> out;
        for (const auto& r : rows)
            if (r.source == source)
                out.push_back(&r);
        return out;
    }

    /// The row as a combination keyed by column name; a 1 binds the column's
    /// primitive element, a 0 is null.
    Combination row_combination(const BinaryRow& row) const
    {
        std::vector<Binding> out;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const auto& col = columns[i];
            std::optional<ElementId> v;
            if (row.bits[i])
                v = col.nodes[col.nodes.size() - 2];
            out.emplace_back(col.to_string(), v);
        }
        return Combination(std::move(out));
    }
};

/// Binary rows compare like combinations: a ≤ b iff a has a 1 wherever b does.
inline bool induced_leq(const BinaryRow& a, const BinaryRow& b)
{
    if (a.bits.size() != b.bits.size())
        fail(Errc::label_mismatch, "rows have different widths");
    for (std::size_t i = 0; i < a.bits.size(); ++i)
        if (b.bits[i] && !a.bits[i])
            return false;
    return true;
}

class OrderedSet {
public:
    explicit OrderedSet(std::string top_symbol = "top", std::string bottom_symbol = "bottom")
    {
        if (top_symbol == bottom_symbol)
            fail(Errc::duplicate_id, "top and bottom need distinct symbols");
        nodes_.push_back(Node{std::move(top_symbol), {}, 0});
        nodes_.push_back(Node{std::move(bottom_symbol), {}, 0});
        index_[nodes_[top_index].symbol] = top_index;
        index_[nodes_[bottom_index].symbol] = bottom_index;
    }

    ElementId top() const { return ElementId{nodes_[top_index].symbol}; }
    ElementId bottom() const { return ElementId{nodes_[bottom_index].symbol}; }

    bool contains(const ElementId& e) const { return index_.count(e.symbol) != 0; }
    std::size_t size() const noexcept { return nodes_.size() - 2; }

    /// User elements in insertion order (top and bottom excluded).
    std::vector<ElementId> elements() const
    {
        std::vector<ElementId> out;
        for (std::size_t i = first_user; i < nodes_.size(); ++i)
            out.push_back(ElementId{nodes_[i].symbol});
        return out;
    }

    /// Inserts an element defined by its super-elements. Null bindings add no edge.
    ElementId add_element(const std::string& id, const Combination& supers)
    {
        if (index_.count(id))
            fail(Errc::duplicate_id, "element '" + id + "' already exists");
        std::vector<std::pair<std::string, std::size_t>> up;
        for (const auto& [label, value] : supers.bindings()) {
            for (const auto& existing : up)
                if (existing.first == label)
                    fail(Errc::duplicate_label, "label '" + label + "' used twice on '" + id + "'");
            if (!value)
                continue;
            if (value->symbol == id)
                fail(Errc::cycle_detected, "element '" + id + "' cannot be its own super-element");
            auto it = index_.find(value->symbol);
            if (it == index_.end())
                fail(Errc::unknown_super, "super-element '" + value->symbol + "' of '" + id + "' does not exist");
            if (it->second == bottom_index)
                fail(Errc::cycle_detected, "bottom lies below '" + id + "' and cannot be its super-element");
            up.emplace_back(label, it->second);
        }
        // Labels of null bindings still count toward uniqueness.
        std::vector<std::string> seen;
        for (const auto& [label, value] : supers.bindings()) {
            if (std::find(seen.begin(), seen.end(), label) != seen.end())
                fail(Errc::duplicate_label, "label '" + label + "' used twice on '" + id + "'");
            seen.push_back(label);
        }
        std::size_t idx = nodes_.size();
        nodes_.push_back(Node{id, std::move(up), 0});
        for (const auto& [label, target] : nodes_[idx].up)
            ++nodes_[target].user_in;
        index_[id] = idx;
        return ElementId{id};
    }

    /// Outgoing edges of `e`, synthetic ones included.
    std::vector<Edge> up_edges(const ElementId& e) const
    {
        std::vector<Edge> out;
        for (const auto& [label, target] : up_of(index_of(e)))
            out.push_back(Edge{label, e, ElementId{nodes_[target].symbol}, is_synthetic(index_of(e), target)});
        return out;
    }

    std::vector<Edge> down_edges(const ElementId& e) const
    {
        std::vector<Edge> out;
        for (const auto& [label, source] : down_of(index_of(e)))
            out.push_back(Edge{label, ElementId{nodes_[source].symbol}, e, is_synthetic(source, index_of(e))});
        return out;
    }

    std::vector<Edge> edges() const
    {
        std::vector<Edge> out;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            auto part = up_edges(ElementId{nodes_[i].symbol});
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }

    /// Strict order: a directed path of one or more edges leads from a to b.
    bool less_than(const ElementId& a, const ElementId& b) const
    {
        std::size_t from = index_of(a);
        std::size_t to = index_of(b);
        std::vector<char> seen(nodes_.size(), 0);
        std::vector<std::size_t> stack;
        for (const auto& [l, t] : up_of(from))
            stack.push_back(t);
        while (!stack.empty()) {
            std::size_t n = stack.back();
            stack.pop_back();
            if (n == to)
                return true;
            if (seen[n])
                continue;
            seen[n] = 1;
            for (const auto& [l, t] : up_of(n))
                stack.push_back(t);
        }
        return false;
    }

    Metrics metrics(const ElementId& e) const
    {
        std::size_t i = index_of(e);
        Metrics m;
        m.dimensionality = up_of(i).size();
        m.cardinality = down_of(i).size();
        m.primitive_dimensionality = count_to_top()[i];
        m.primitive_cardinality = count_to_bottom()[i];
        m.canonical_dimensionality = count_all(Direction::up)[i];
        m.canonical_cardinality = count_all(Direction::down)[i];
        return m;
    }

    /// Every non-empty path from `e` (complex dimensions going up, inverse
    /// dimensions going down), in depth-first label order.
    std::vector<ElementPath> enumerate_paths(const ElementId& e, Direction dir) const
    {
        std::vector<ElementPath> out;
        ElementPath current{dir, {ElementId{nodes_[index_of(e)].symbol}}, {}};
        walk(index_of(e), dir, current, out, false);
        return out;
    }

    /// Paths from `e` ending at top (up) or bottom (down). For top/bottom
    /// themselves this is the single empty path.
    std::vector<ElementPath> primitive_paths(const ElementId& e, Direction dir) const
    {
        std::vector<ElementPath> out;
        std::size_t i = index_of(e);
        ElementPath current{dir, {ElementId{nodes_[i].symbol}}, {}};
        if (i == (dir == Direction::up ? top_index : bottom_index)) {
            out.push_back(current);
            return out;
        }
        walk(i, dir, current, out, true);
        return out;
    }

    /// Elements ordered so that every element precedes its super-elements
    /// (bottom first, top last).
    std::vector<ElementId> topological_order() const
    {
        std::vector<std::size_t> indegree(nodes_.size(), 0);
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            for (const auto& [l, t] : up_of(i))
                ++indegree[t];
        std::vector<std::size_t> ready;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (indegree[i] == 0)
                ready.push_back(i);
        std::vector<ElementId> out;
        while (!ready.empty()) {
            std::size_t n = ready.front();
            ready.erase(ready.begin());
            out.push_back(ElementId{nodes_[n].symbol});
            for (const auto& [l, t] : up_of(n))
                if (--indegree[t] == 0)
                    ready.push_back(t);
        }
        if (out.size() != nodes_.size())
            fail(Errc::cycle_detected, "edge graph contains a cycle");
        return out;
    }

    /// Induced order using the set's own order between values: a ≤ b iff for
    /// every label b's value is null, equal to a's, or strictly above it.
    bool induced_leq(const Combination& a, const Combination& b) const
    {
        detail::require_same_labels(a, b);
        for (const auto& [l, bv] : b.bindings()) {
            if (!bv)
                continue;
            const auto& av = *a.find(l);
            if (!av)
                return false;
            if (*av != *bv && !less_than(*av, *bv))
                return false;
        }
        return true;
    }

    /// Primitive semantics as a 0/1 table. Columns are the bottom→top paths in
    /// lexicographic label order; each element except top yields one row per
    /// bottom→element path, with 1s in the columns formed by extending that
    /// path with the element's own paths to top.
    BinaryTable flatten_binary() const
    {
        BinaryTable table;
        table.columns = primitive_paths(bottom(), Direction::up);
        std::sort(table.columns.begin(), table.columns.end(),
                  [](const ElementPath& a, const ElementPath& b) { return a.labels < b.labels; });
        std::map<std::vector<std::string>, std::size_t> column_of;
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            column_of[table.columns[i].labels] = i;

        std::vector<std::size_t> order{bottom_index};
        for (std::size_t i = first_user; i < nodes_.size(); ++i)
            order.push_back(i);

        for (std::size_t i : order) {
            ElementId e{nodes_[i].symbol};
            auto subs = primitive_paths(e, Direction::down);
            std::sort(subs.begin(), subs.end(), [](const ElementPath& a, const ElementPath& b) {
                return a.upward_labels() < b.upward_labels();
            });
            auto supers = primitive_paths(e, Direction::up);
            for (const auto& f : subs) {
                BinaryRow row{e, f, std::vector<bool>(table.columns.size(), false)};
                for (const auto& d : supers) {
                    auto full = f.upward_labels();
                    full.insert(full.end(), d.labels.begin(), d.labels.end());
                    row.bits[column_of.at(full)] = true;
                }
                table.rows.push_back(std::move(row));
            }
        }
        return table;
    }

private:
    static constexpr std::size_t top_index = 0;
    static constexpr std::size_t bottom_index = 1;
    static constexpr std::size_t first_user = 2;

    struct Node {
        std::string symbol;
        std::vector<std::pair<std::string, std::size_t>> up; // user edges only
        std::size_t user_in = 0;
    };

    std::size_t index_of(const ElementId& e) const
    {
        auto it = index_.find(e.symbol);
        if (it == index_.end())
            fail(Errc::unknown_element, "no element '" + e.symbol + "'");
        return it->second;
    }

    bool is_synthetic(std::size_t source, std::size_t target) const
    {
        return source == bottom_index || (target == top_index && nodes_[source].up.empty());
    }

    // Full outgoing edge list including synthetic edges.
    std::vector<std::pair<std::string, std::size_t>> up_of(std::size_t i) const
    {
        if (i == top_index)
            return {};
        if (i == bottom_index) {
            std::vector<std::pair<std::string, std::size_t>> out;
            for (std::size_t j = first_user; j < nodes_.size(); ++j)
                if (nodes_[j].user_in == 0)
                    out.emplace_back(nodes_[j].symbol, j);
            if (out.empty())
                out.emplace_back(nodes_[top_index].symbol, top_index);
            return out;
        }
        if (nodes_[i].up.empty())
            return {{nodes_[top_index].symbol, top_index}};
        return nodes_[i].up;
    }

    std::vector<std::pair<std::string, std::size_t>> down_of(std::size_t i) const
    {
        std::vector<std::pair<std::string, std::size_t>> out;
        for (std::size_t j = 0; j < nodes_.size(); ++j)
            for (const auto& [label, t] : up_of(j))
                if (t == i)
                    out.emplace_back(label, j);
        return out;
    }

    void walk(std::size_t i, Direction dir, ElementPath& current, std::vector<ElementPath>& out, bool only_complete) const
    {
        auto next = dir == Direction::up ? up_of(i) : down_of(i);
        std::size_t goal = dir == Direction::up ? top_index : bottom_index;
        for (const auto& [label, n] : next) {
            current.labels.push_back(label);
            current.nodes.push_back(ElementId{nodes_[n].symbol});
            if (!only_complete || n == goal)
                out.push_back(current);
            walk(n, dir, current, out, only_complete);
            current.labels.pop_back();
            current.nodes.pop_back();
        }
    }

    // Number of paths from each element up to top (1 for top itself).
    std::vector<std::uint64_t> count_to_top() const
    {
        std::vector<std::uint64_t> count(nodes_.size(), 0);
        auto order = topological_order();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            std::size_t i = index_.at(it->symbol);
            if (i == top_index) {
                count[i] = 1;
                continue;
            }
            for (const auto& [l, t] : up_of(i))
                count[i] += count[t];
        }
        return count;
    }

    // Number of paths from each element down to bottom (1 for bottom itself).
    std::vector<std::uint64_t> count_to_bottom() const
    {
        std::vector<std::uint64_t> count(nodes_.size(), 0);
        for (const auto& e : topological_order()) {
            std::size_t i = index_.at(e.symbol);
            if (i == bottom_index) {
                count[i] = 1;
                continue;
            }
            for (const auto& [l, s] : down_of(i))
                count[i] += count[s];
        }
        return count;
    }

    // Number of non-empty paths from each element to any super- (up) or sub-element (down).
    std::vector<std::uint64_t> count_all(Direction dir) const
    {
        std::vector<std::uint64_t> count(nodes_.size(), 0);
        auto order = topological_order();
        if (dir == Direction::up)
            std::reverse(order.begin(), order.end());
        for (const auto& e : order) {
            std::size_t i = index_.at(e.symbol);
            for (const auto& [l, n] : dir == Direction::up ? up_of(i) : down_of(i))
                count[i] += 1 + count[n];
        }
        return count;
    }

    std::vector<Node> nodes_;
    std::unordered_map<std::string, std::size_t> index_;
};

} // namespace comdb::poset
