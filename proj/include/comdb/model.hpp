#pragma once

// Two-level concept-oriented model: a root holding concepts, concepts holding
// items. Concepts are ordered by their dimensions; items take their slot
// values only from the domain of the corresponding dimension.

#include "comdb/dim_path.hpp"
#include "comdb/error.hpp"
#include "comdb/literal.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace comdb {

struct ConceptRef {
    std::uint32_t index = 0;

    friend auto operator<=>(const ConceptRef&, const ConceptRef&) = default;
    friend bool operator==(const ConceptRef&, const ConceptRef&) = default;
};

struct ItemRef {
    std::uint32_t concept_index = 0;
    std::uint32_t index = 0;

    ConceptRef concept_ref() const noexcept { return ConceptRef{concept_index}; }

    friend auto operator<=>(const ItemRef&, const ItemRef&) = default;
    friend bool operator==(const ItemRef&, const ItemRef&) = default;
};

struct ItemRefHash {
    std::size_t operator()(const ItemRef& r) const noexcept
    {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(r.concept_index) << 32) | r.index);
    }
};

struct DimensionDecl {
    std::string name;
    ConceptRef domain;
};

/// Input form of a concept definition; domains are named so that a batch may
/// contain forward references.
struct ConceptSpec {
    std::string name;
    std::vector<std::pair<std::string, std::string>> dims;
    std::optional<ValueType> value_type;
};

using SlotBinding = std::pair<std::string, std::optional<ItemRef>>;

struct Violation {
    Errc code;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    bool contains(Errc code) const
    {
        return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
    }
};

class Schema;

class Concept {
public:
    const std::string& name() const noexcept { return name_; }
    const std::vector<DimensionDecl>& dims() const noexcept { return dims_; }
    bool is_value() const noexcept { return value_type_.has_value(); }
    std::optional<ValueType> value_type() const noexcept { return value_type_; }

    std::optional<std::size_t> dim_index(std::string_view dim) const
    {
        for (std::size_t i = 0; i < dims_.size(); ++i)
            if (dims_[i].name == dim)
                return i;
        return std::nullopt;
    }

private:
    friend class Schema;

    struct ItemRecord {
        std::string id;
        std::vector<std::optional<ItemRef>> slots;
        std::optional<Literal> value;
        bool alive = true;
    };

    std::string name_;
    std::vector<DimensionDecl> dims_;
    std::optional<ValueType> value_type_;
    std::vector<ItemRecord> items_;
    std::unordered_map<std::string, std::uint32_t> by_id_;
    std::map<Literal, std::uint32_t> by_value_;
    std::size_t live_ = 0;
};

class Schema {
public:
    explicit Schema(std::string name = "R") : name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

    // ---- concepts -------------------------------------------------------

    /// Defines an entity concept whose dimensions point at existing concepts.
    ConceptRef define_concept(const std::string& name, const std::vector<std::pair<std::string, std::string>>& dims = {})
    {
        return define(ConceptSpec{name, dims, std::nullopt});
    }

    /// Defines a primitive concept whose items are identified by a literal.
    ConceptRef define_value_concept(const std::string& name, ValueType type)
    {
        return define(ConceptSpec{name, {}, type});
    }

    ConceptRef define(const ConceptSpec& spec)
    {
        if (by_name_.count(spec.name))
            fail(Errc::duplicate_concept, "concept '" + spec.name + "' already exists");
        if (spec.value_type && !spec.dims.empty())
            fail(Errc::domain_violation, "value concept '" + spec.name + "' cannot have dimensions");
        Concept c;
        c.name_ = spec.name;
        c.value_type_ = spec.value_type;
        for (const auto& [label, domain] : spec.dims) {
            if (c.dim_index(label))
                fail(Errc::duplicate_label, "dimension '" + label + "' declared twice on '" + spec.name + "'");
            if (domain == spec.name)
                fail(Errc::cycle_detected, "concept '" + spec.name + "' cannot be its own domain");
            auto d = find_concept(domain);
            if (!d)
                fail(Errc::unknown_domain, "domain '" + domain + "' of '" + spec.name + "." + label + "' does not exist");
            c.dims_.push_back(DimensionDecl{label, *d});
        }
        ConceptRef ref{static_cast<std::uint32_t>(concepts_.size())};
        concepts_.push_back(std::move(c));
        by_name_[spec.name] = ref.index;
        return ref;
    }

    /// Defines a batch in dependency order, allowing forward references
    /// between its members. Throws CycleDetected if the batch is cyclic.
    std::vector<ConceptRef> define_all(const std::vector<ConceptSpec>& specs)
    {
        std::map<std::string, std::size_t> pending;
        for (std::size_t i = 0; i < specs.size(); ++i) {
            if (pending.count(specs[i].name) || by_name_.count(specs[i].name))
                fail(Errc::duplicate_concept, "concept '" + specs[i].name + "' already exists");
            pending[specs[i].name] = i;
        }
        for (const auto& s : specs)
            for (const auto& [label, domain] : s.dims)
                if (!pending.count(domain) && !by_name_.count(domain))
                    fail(Errc::unknown_domain, "domain '" + domain + "' of '" + s.name + "." + label + "' does not exist");

        std::vector<ConceptRef> out(specs.size());
        std::vector<char> done(specs.size(), 0);
        std::size_t remaining = specs.size();
        while (remaining) {
            bool progress = false;
            for (std::size_t i = 0; i < specs.size(); ++i) {
                if (done[i])
                    continue;
                bool ready = std::all_of(specs[i].dims.begin(), specs[i].dims.end(), [&](const auto& d) {
                    return by_name_.count(d.second) != 0;
                });
                if (!ready)
                    continue;
                out[i] = define(specs[i]);
                done[i] = 1;
                --remaining;
                progress = true;
            }
            if (!progress) {
                std::string names;
                for (std::size_t i = 0; i < specs.size(); ++i)
                    if (!done[i])
                        names += (names.empty() ? "" : ", ") + specs[i].name;
                fail(Errc::cycle_detected, "concept dimensions form a cycle among: " + names);
            }
        }
        return out;
    }

    std::size_t concept_count() const noexcept { return concepts_.size(); }

    /// All concepts in definition order; every domain precedes its users.
    std::vector<ConceptRef> concepts() const
    {
        std::vector<ConceptRef> out;
        for (std::uint32_t i = 0; i < concepts_.size(); ++i)
            out.push_back(ConceptRef{i});
        return out;
    }

    const Concept& concept_at(ConceptRef c) const
    {
        if (c.index >= concepts_.size())
            fail(Errc::unknown_concept, "concept #" + std::to_string(c.index) + " does not exist");
        return concepts_[c.index];
    }

    const std::string& concept_name(ConceptRef c) const { return concept_at(c).name(); }

    std::optional<ConceptRef> find_concept(std::string_view name) const
    {
        auto it = by_name_.find(std::string(name));
        if (it == by_name_.end())
            return std::nullopt;
        return ConceptRef{it->second};
    }

    ConceptRef concept_ref(std::string_view name) const
    {
        if (auto c = find_concept(name))
            return *c;
        fail(Errc::unknown_concept, "no concept '" + std::string(name) + "'");
    }

    /// Primitive concepts are direct sub-concepts of the synthetic top.
    bool is_primitive(ConceptRef c) const { return concept_at(c).dims().empty(); }

    const DimensionDecl& dimension(ConceptRef c, std::string_view dim) const
    {
        const auto& con = concept_at(c);
        auto i = con.dim_index(dim);
        if (!i)
            fail(Errc::unknown_dimension, "concept '" + con.name() + "' has no dimension '" + std::string(dim) + "'");
        return con.dims()[*i];
    }

    /// Dimensions (source concept, dimension index) whose domain is `c`.
    std::vector<std::pair<ConceptRef, std::size_t>> sub_dimensions(ConceptRef c) const
    {
        std::vector<std::pair<ConceptRef, std::size_t>> out;
        for (std::uint32_t i = 0; i < concepts_.size(); ++i)
            for (std::size_t d = 0; d < concepts_[i].dims_.size(); ++d)
                if (concepts_[i].dims_[d].domain == c)
                    out.emplace_back(ConceptRef{i}, d);
        return out;
    }

    /// End concept of a dimension path; throws UnknownDimension on a bad label.
    ConceptRef resolve_path(ConceptRef from, const DimPath& path) const
    {
        ConceptRef cur = from;
        for (const auto& label : path)
            cur = dimension(cur, label).domain;
        return cur;
    }

    /// Reflexive upward reachability in the concept graph.
    bool reaches(ConceptRef from, ConceptRef to) const
    {
        if (from == to)
            return true;
        for (const auto& d : concept_at(from).dims())
            if (reaches(d.domain, to))
                return true;
        return false;
    }

    /// All label paths from `from` up to `to`; `to == nullopt` means the
    /// synthetic top, reached through each primitive concept's single edge.
    std::vector<DimPath> concept_paths(ConceptRef from, std::optional<ConceptRef> to) const
    {
        concept_at(from);
        if (to)
            concept_at(*to);
        std::vector<DimPath> out;
        DimPath current;
        collect_paths(from, to, current, out);
        return out;
    }

    // ---- bottom ---------------------------------------------------------

    void designate_bottom(ConceptRef c)
    {
        concept_at(c);
        designated_bottom_ = c;
    }
    void clear_bottom() noexcept { designated_bottom_.reset(); }
    std::optional<ConceptRef> designated_bottom() const noexcept { return designated_bottom_; }

    /// Concepts that are no concept's domain.
    std::vector<ConceptRef> minimal_concepts() const
    {
        std::vector<char> used(concepts_.size(), 0);
        for (const auto& c : concepts_)
            for (const auto& d : c.dims_)
                used[d.domain.index] = 1;
        std::vector<ConceptRef> out;
        for (std::uint32_t i = 0; i < concepts_.size(); ++i)
            if (!used[i])
                out.push_back(ConceptRef{i});
        return out;
    }

    /// The designated bottom, else the unique minimal concept if there is one.
    std::optional<ConceptRef> bottom() const
    {
        if (designated_bottom_)
            return designated_bottom_;
        auto mins = minimal_concepts();
        if (mins.size() == 1)
            return mins.front();
        return std::nullopt;
    }

    ConceptRef require_bottom(std::optional<ConceptRef> explicit_bottom = std::nullopt) const
    {
        if (explicit_bottom) {
            concept_at(*explicit_bottom);
            return *explicit_bottom;
        }
        if (auto b = bottom())
            return *b;
        fail(Errc::no_bottom, "schema has no designated bottom concept and no unique minimal concept");
    }

    // ---- items ----------------------------------------------------------

    /// Adds an item. Unnamed dimensions are null. For a value concept the id
    /// is parsed as its literal and no slots may be given.
    ItemRef add_item(ConceptRef c, const std::string& id, const std::vector<SlotBinding>& slots = {})
    {
        auto& con = mutable_concept(c);
        if (con.is_value()) {
            if (!slots.empty())
                fail(Errc::unknown_dimension, "value concept '" + con.name() + "' has no dimensions");
            auto lit = parse_literal(*con.value_type(), id);
            if (!lit)
                fail(Errc::domain_violation, "'" + id + "' is not a " + std::string(value_type_name(*con.value_type())) +
                                                 " literal for '" + con.name() + "'");
            return add_value(c, *lit);
        }
        if (con.by_id_.count(id))
            fail(Errc::duplicate_item, "item '" + id + "' already exists in '" + con.name() + "'");
        std::vector<std::optional<ItemRef>> record(con.dims().size());
        std::vector<char> bound(con.dims().size(), 0);
        for (const auto& [dim, ref] : slots) {
            auto di = con.dim_index(dim);
            if (!di)
                fail(Errc::unknown_dimension, "concept '" + con.name() + "' has no dimension '" + dim + "'");
            if (bound[*di])
                fail(Errc::duplicate_label, "dimension '" + dim + "' bound twice for item '" + id + "'");
            bound[*di] = 1;
            if (ref) {
                if (!is_live(*ref))
                    fail(Errc::unknown_referent, "slot '" + dim + "' of '" + id + "' references a missing item");
                if (ref->concept_ref() != con.dims()[*di].domain)
                    fail(Errc::domain_violation, "slot '" + con.name() + "." + dim + "' of '" + id + "' must reference an item of '" +
                                                     concept_name(con.dims()[*di].domain) + "', got one of '" +
                                                     concept_name(ref->concept_ref()) + "'");
            }
            record[*di] = ref;
        }
        return insert(c, id, std::move(record), std::nullopt);
    }

    ItemRef add_value(ConceptRef c, const Literal& value)
    {
        auto& con = mutable_concept(c);
        if (!con.is_value())
            fail(Errc::domain_violation, "concept '" + con.name() + "' is not a value concept");
        auto v = coerce_literal(*con.value_type(), value);
        if (!v)
            fail(Errc::domain_violation, "literal '" + literal_text(value) + "' does not fit " +
                                             std::string(value_type_name(*con.value_type())) + " concept '" + con.name() + "'");
        if (con.by_value_.count(*v))
            fail(Errc::duplicate_item, "value '" + literal_text(*v) + "' already exists in '" + con.name() + "'");
        return insert(c, literal_text(*v), {}, *v);
    }

    /// Returns the item carrying `value`, creating it on first reference.
    ItemRef intern_value(ConceptRef c, const Literal& value)
    {
        if (auto existing = find_value(c, value))
            return *existing;
        return add_value(c, value);
    }

    std::optional<ItemRef> find_value(ConceptRef c, const Literal& value) const
    {
        const auto& con = concept_at(c);
        if (!con.is_value())
            return std::nullopt;
        auto v = coerce_literal(*con.value_type(), value);
        if (!v)
            return std::nullopt;
        auto it = con.by_value_.find(*v);
        if (it == con.by_value_.end())
            return std::nullopt;
        return ItemRef{c.index, it->second};
    }

    std::optional<ItemRef> find_item(ConceptRef c, std::string_view id) const
    {
        const auto& con = concept_at(c);
        auto it = con.by_id_.find(std::string(id));
        if (it != con.by_id_.end())
            return ItemRef{c.index, it->second};
        if (con.is_value()) {
            if (auto lit = parse_literal(*con.value_type(), id))
                return find_value(c, *lit);
        }
        return std::nullopt;
    }

    ItemRef item(ConceptRef c, std::string_view id) const
    {
        if (auto r = find_item(c, id))
            return *r;
        fail(Errc::unknown_item, "no item '" + std::string(id) + "' in '" + concept_name(c) + "'");
    }

    ItemRef item(std::string_view concept_name_, std::string_view id) const { return item(concept_ref(concept_name_), id); }

    bool is_live(ItemRef r) const noexcept
    {
        if (r.concept_index >= concepts_.size())
            return false;
        const auto& con = concepts_[r.concept_index];
        return r.index < con.items_.size() && con.items_[r.index].alive;
    }

    const std::string& item_id(ItemRef r) const { return record(r).id; }
    const std::optional<Literal>& item_value(ItemRef r) const { return record(r).value; }
    const std::vector<std::optional<ItemRef>>& slots(ItemRef r) const { return record(r).slots; }

    /// `item.dim`; null slots yield nullopt. Throws UnknownDimension.
    std::optional<ItemRef> get_slot(ItemRef r, std::string_view dim) const
    {
        const auto& rec = record(r);
        const auto& con = concepts_[r.concept_index];
        auto di = con.dim_index(dim);
        if (!di)
            fail(Errc::unknown_dimension, "concept '" + con.name() + "' has no dimension '" + std::string(dim) + "'");
        return rec.slots[*di];
    }

    /// Composed slot walk along `path`; null anywhere gives null.
    std::optional<ItemRef> walk(ItemRef start, const DimPath& path) const
    {
        std::optional<ItemRef> cur = start;
        for (const auto& label : path) {
            cur = get_slot(*cur, label);
            if (!cur)
                return std::nullopt;
        }
        return cur;
    }

    /// Live items of `c` in insertion order.
    std::vector<ItemRef> items(ConceptRef c) const
    {
        const auto& con = concept_at(c);
        std::vector<ItemRef> out;
        out.reserve(con.live_);
        for (std::uint32_t i = 0; i < con.items_.size(); ++i)
            if (con.items_[i].alive)
                out.push_back(ItemRef{c.index, i});
        return out;
    }

    std::size_t item_count(ConceptRef c) const { return concept_at(c).live_; }

    std::size_t total_items() const noexcept
    {
        std::size_t n = 0;
        for (const auto& c : concepts_)
            n += c.live_;
        return n;
    }

    /// Upper bound (exclusive) of item indices ever allocated in `c`.
    std::size_t item_capacity(ConceptRef c) const { return concept_at(c).items_.size(); }

    /// Live items that hold `target` in one of their slots.
    std::vector<ItemRef> referrers(ItemRef target) const
    {
        std::vector<ItemRef> out;
        for (const auto& [src, di] : sub_dimensions(target.concept_ref())) {
            const auto& con = concepts_[src.index];
            for (std::uint32_t i = 0; i < con.items_.size(); ++i)
                if (con.items_[i].alive && con.items_[i].slots[di] == target)
                    out.push_back(ItemRef{src.index, i});
        }
        return out;
    }

    /// Deletes an item. Fails with ReferencedItem while live items point at
    /// it, unless `force` is set (which leaves dangling slots for validate()).
    void remove_item(ItemRef r, bool force = false)
    {
        if (!is_live(r))
            fail(Errc::unknown_item, "item does not exist");
        if (!force) {
            auto refs = referrers(r);
            if (!refs.empty())
                fail(Errc::referenced_item, "item '" + item_id(r) + "' of '" + concept_name(r.concept_ref()) + "' is referenced by '" +
                                                item_id(refs.front()) + "' of '" + concept_name(refs.front().concept_ref()) + "'");
        }
        auto& con = concepts_[r.concept_index];
        auto& rec = con.items_[r.index];
        rec.alive = false;
        con.by_id_.erase(rec.id);
        if (rec.value)
            con.by_value_.erase(*rec.value);
        --con.live_;
    }

    // ---- validation -----------------------------------------------------

    ValidationReport validate(bool require_bottom = false) const
    {
        ValidationReport report;
        auto add = [&](Errc code, std::string msg) { report.violations.push_back(Violation{code, std::move(msg)}); };

        for (std::uint32_t i = 0; i < concepts_.size(); ++i) {
            const auto& c = concepts_[i];
            std::set<std::string> labels;
            for (const auto& d : c.dims_) {
                if (!labels.insert(d.name).second)
                    add(Errc::duplicate_label, "concept '" + c.name_ + "' declares dimension '" + d.name + "' twice");
                if (d.domain.index >= concepts_.size())
                    add(Errc::unknown_domain, "dimension '" + c.name_ + "." + d.name + "' has no domain");
            }
        }
        if (has_concept_cycle())
            add(Errc::cycle_detected, "concept dimensions form a cycle");

        for (std::uint32_t i = 0; i < concepts_.size(); ++i) {
            const auto& c = concepts_[i];
            std::map<Literal, std::string> values;
            for (const auto& rec : c.items_) {
                if (!rec.alive)
                    continue;
                if (rec.value) {
                    auto [it, fresh] = values.emplace(*rec.value, rec.id);
                    if (!fresh)
                        add(Errc::duplicate_item, "value '" + literal_text(*rec.value) + "' stored twice in '" + c.name_ + "'");
                }
                for (std::size_t d = 0; d < rec.slots.size() && d < c.dims_.size(); ++d) {
                    const auto& s = rec.slots[d];
                    if (!s)
                        continue;
                    if (!is_live(*s))
                        add(Errc::unknown_referent, "item '" + rec.id + "' of '" + c.name_ + "' references a missing item along '" +
                                                        c.dims_[d].name + "'");
                    else if (s->concept_ref() != c.dims_[d].domain)
                        add(Errc::domain_violation, "item '" + rec.id + "' of '" + c.name_ + "' takes '" + c.dims_[d].name +
                                                        "' from outside its domain");
                }
            }
        }

        if (designated_bottom_) {
            for (std::uint32_t i = 0; i < concepts_.size(); ++i)
                if (!reaches(*designated_bottom_, ConceptRef{i}))
                    add(Errc::unreachable_concept, "concept '" + concepts_[i].name_ + "' is not above bottom '" +
                                                       concepts_[designated_bottom_->index].name_ + "'");
        } else if (require_bottom && !bottom()) {
            add(Errc::no_bottom, "no designated bottom and no unique minimal concept");
        }
        return report;
    }

private:
    Concept& mutable_concept(ConceptRef c)
    {
        if (c.index >= concepts_.size())
            fail(Errc::unknown_concept, "concept #" + std::to_string(c.index) + " does not exist");
        return concepts_[c.index];
    }

    const Concept::ItemRecord& record(ItemRef r) const
    {
        if (!is_live(r))
            fail(Errc::unknown_item, "item reference does not resolve to a live item");
        return concepts_[r.concept_index].items_[r.index];
    }

    ItemRef insert(ConceptRef c, std::string id, std::vector<std::optional<ItemRef>> slots, std::optional<Literal> value)
    {
        auto& con = concepts_[c.index];
        if (con.by_id_.count(id))
            fail(Errc::duplicate_item, "item '" + id + "' already exists in '" + con.name() + "'");
        auto idx = static_cast<std::uint32_t>(con.items_.size());
        con.by_id_[id] = idx;
        if (value)
            con.by_value_[*value] = idx;
        con.items_.push_back(Concept::ItemRecord{std::move(id), std::move(slots), std::move(value), true});
        ++con.live_;
        return ItemRef{c.index, idx};
    }

    void collect_paths(ConceptRef cur, std::optional<ConceptRef> to, DimPath& current, std::vector<DimPath>& out) const
    {
        const auto& con = concepts_[cur.index];
        if (to ? cur == *to : con.dims_.empty())
            out.push_back(current);
        for (const auto& d : con.dims_) {
            current.push_back(d.name);
            collect_paths(d.domain, to, current, out);
            current = DimPath(std::vector<std::string>(current.begin(), current.end() - 1));
        }
    }

    bool has_concept_cycle() const
    {
        std::vector<int> state(concepts_.size(), 0);
        std::function<bool(std::size_t)> visit = [&](std::size_t i) {
            if (state[i] == 1)
                return true;
            if (state[i] == 2)
                return false;
            state[i] = 1;
            for (const auto& d : concepts_[i].dims_)
                if (d.domain.index < concepts_.size() && visit(d.domain.index))
                    return true;
            state[i] = 2;
            return false;
        };
        for (std::size_t i = 0; i < concepts_.size(); ++i)
            if (visit(i))
                return true;
        return false;
    }

    std::string name_;
    std::vector<Concept> concepts_;
    std::unordered_map<std::string, std::uint32_t> by_name_;
    std::optional<ConceptRef> designated_bottom_;
};

} // namespace comdb
