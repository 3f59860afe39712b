#pragma once

// Possibility maps over stored items, elementary constraints, downward and
// upward propagation, consistency and two-step inference.

#include "comdb/model.hpp"
#include "comdb/navigate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace comdb {

/// ψ : C → {0, 1}, indexed by item slot. Slots beyond the stored size read as 1.
class Possibility {
public:
    Possibility() = default;
    Possibility(ConceptRef c, std::size_t capacity, bool value) : concept_(c), bits_(capacity, value ? 1 : 0) {}

    static Possibility all(const Schema& schema, ConceptRef c, bool value = true)
    {
        return Possibility(c, schema.item_capacity(c), value);
    }

    /// Exactly `possible` are 1; every other live item of `c` is 0.
    static Possibility only(const Schema& schema, ConceptRef c, const std::vector<ItemRef>& possible)
    {
        Possibility p = all(schema, c, false);
        for (auto r : possible)
            p.set(r, true);
        return p;
    }

    ConceptRef concept_ref() const noexcept { return concept_; }

    bool possible(ItemRef r) const noexcept { return r.index >= bits_.size() || bits_[r.index] != 0; }

    void set(ItemRef r, bool value)
    {
        if (r.concept_ref() != concept_)
            fail(Errc::domain_mismatch, "possibility update for an item of another concept");
        if (r.index >= bits_.size())
            bits_.resize(r.index + 1, 1);
        bits_[r.index] = value ? 1 : 0;
    }

    /// Pointwise min; returns true if anything changed.
    bool meet(const Possibility& other)
    {
        if (other.concept_ != concept_)
            fail(Errc::domain_mismatch, "cannot combine possibilities of different concepts");
        bool changed = false;
        if (bits_.size() < other.bits_.size())
            bits_.resize(other.bits_.size(), 1);
        for (std::size_t i = 0; i < other.bits_.size(); ++i)
            if (bits_[i] && !other.bits_[i]) {
                bits_[i] = 0;
                changed = true;
            }
        return changed;
    }

    std::vector<ItemRef> possible_items(const Schema& schema) const
    {
        std::vector<ItemRef> out;
        for (auto r : schema.items(concept_))
            if (possible(r))
                out.push_back(r);
        return out;
    }

    std::vector<ItemRef> impossible_items(const Schema& schema) const
    {
        std::vector<ItemRef> out;
        for (auto r : schema.items(concept_))
            if (!possible(r))
                out.push_back(r);
        return out;
    }

    bool all_possible(const Schema& schema) const { return impossible_items(schema).empty(); }

    friend bool operator==(const Possibility& a, const Possibility& b)
    {
        if (a.concept_ != b.concept_)
            return false;
        std::size_t n = std::max(a.bits_.size(), b.bits_.size());
        for (std::size_t i = 0; i < n; ++i) {
            bool x = i >= a.bits_.size() || a.bits_[i];
            bool y = i >= b.bits_.size() || b.bits_[i];
            if (x != y)
                return false;
        }
        return true;
    }

private:
    ConceptRef concept_;
    std::vector<unsigned char> bits_;
};

/// Read-only view of one item for elementary constraints: its own value and
/// its own slots, nothing further.
class LocalItem {
public:
    LocalItem(const Schema& schema, ItemRef r) : schema_(&schema), ref_(r) {}

    ItemRef ref() const noexcept { return ref_; }
    const std::string& id() const { return schema_->item_id(ref_); }
    const std::optional<Literal>& value() const { return schema_->item_value(ref_); }
    std::optional<ItemRef> slot(std::string_view dim) const { return schema_->get_slot(ref_, dim); }
    std::string slot_id(std::string_view dim) const
    {
        auto s = slot(dim);
        return s ? schema_->item_id(*s) : std::string();
    }
    /// Literal of a value-concept slot; null when the slot is null.
    std::optional<Literal> slot_value(std::string_view dim) const
    {
        auto s = slot(dim);
        if (!s)
            return std::nullopt;
        return schema_->item_value(*s);
    }

private:
    const Schema* schema_;
    ItemRef ref_;
};

using LocalPredicate = std::function<bool(const LocalItem&)>;

/// Elementary constraint: ψ(e) = 0 exactly where the predicate rejects e.
inline Possibility constrain(const Schema& schema, ConceptRef c, const LocalPredicate& pred)
{
    Possibility p = Possibility::all(schema, c);
    for (auto r : schema.items(c))
        if (!pred(LocalItem(schema, r)))
            p.set(r, false);
    return p;
}

enum class ConstraintKind { static_, query };

/// One possibility map per constrained concept; absent concepts are all-possible.
class ConstraintSet {
public:
    explicit ConstraintSet(ConstraintKind kind = ConstraintKind::query) : kind_(kind) {}

    ConstraintKind kind() const noexcept { return kind_; }

    /// Combines `p` into the set by pointwise min: a zero is never lifted.
    void restrict(const Possibility& p)
    {
        auto [it, fresh] = maps_.emplace(p.concept_ref().index, p);
        if (!fresh)
            it->second.meet(p);
    }

    bool constrains(ConceptRef c) const { return maps_.count(c.index) != 0; }

    const Possibility* find(ConceptRef c) const
    {
        auto it = maps_.find(c.index);
        return it == maps_.end() ? nullptr : &it->second;
    }

    Possibility get(const Schema& schema, ConceptRef c) const
    {
        if (auto p = find(c))
            return *p;
        return Possibility::all(schema, c);
    }

    bool possible(ItemRef r) const
    {
        auto p = find(r.concept_ref());
        return !p || p->possible(r);
    }

    std::vector<ConceptRef> concepts() const
    {
        std::vector<ConceptRef> out;
        for (const auto& [idx, p] : maps_)
            out.push_back(ConceptRef{idx});
        return out;
    }

    /// Number of live items assigned 0.
    std::size_t excluded(const Schema& schema) const
    {
        std::size_t n = 0;
        for (const auto& [idx, p] : maps_)
            n += p.impossible_items(schema).size();
        return n;
    }

    friend bool operator==(const ConstraintSet& a, const ConstraintSet& b)
    {
        auto covers = [](const ConstraintSet& x, const ConstraintSet& y) {
            for (const auto& [idx, p] : x.maps_) {
                auto it = y.maps_.find(idx);
                Possibility other = it == y.maps_.end() ? Possibility(ConceptRef{idx}, 0, true) : it->second;
                if (!(p == other))
                    return false;
            }
            return true;
        };
        return covers(a, b) && covers(b, a);
    }

private:
    ConstraintKind kind_;
    std::map<std::uint32_t, Possibility> maps_;
};

/// Which dimensions of which concepts carry downward propagation.
using DimensionFilter = std::map<std::uint32_t, std::set<std::string>>;

/// Least fixpoint of: e.x = s and ψ(s) = 0 imply ψ(e) = 0.
inline ConstraintSet propagate_down(const Schema& schema, ConstraintSet cs, const std::optional<DimensionFilter>& filter = std::nullopt)
{
    auto concepts = schema.concepts();
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto c : concepts) {
            const auto& dims = schema.concept_at(c).dims();
            std::vector<std::size_t> active;
            for (std::size_t d = 0; d < dims.size(); ++d) {
                if (filter) {
                    auto it = filter->find(c.index);
                    if (it == filter->end() || !it->second.count(dims[d].name))
                        continue;
                }
                if (cs.constrains(dims[d].domain))
                    active.push_back(d);
            }
            if (active.empty())
                continue;
            Possibility p = cs.get(schema, c);
            bool touched = false;
            for (auto e : schema.items(c)) {
                if (!p.possible(e))
                    continue;
                const auto& slots = schema.slots(e);
                for (auto d : active)
                    if (slots[d] && !cs.possible(*slots[d])) {
                        p.set(e, false);
                        touched = true;
                        break;
                    }
            }
            if (touched) {
                cs.restrict(p);
                changed = true;
            }
        }
    }
    return cs;
}

/// Concepts of `cs` that lie above no other constrained concept.
inline std::vector<ConceptRef> seed_concepts(const Schema& schema, const ConstraintSet& cs)
{
    auto constrained = cs.concepts();
    std::vector<ConceptRef> out;
    for (auto c : constrained) {
        bool above_other = std::any_of(constrained.begin(), constrained.end(),
                                       [&](ConceptRef d) { return d != c && schema.reaches(d, c); });
        if (!above_other)
            out.push_back(c);
    }
    return out;
}

/// Every concept above a seed becomes possible exactly on the slots of its
/// possible sub-items (met with any zeros it already had).
inline ConstraintSet propagate_up(const Schema& schema, ConstraintSet cs)
{
    auto seeds = seed_concepts(schema, cs);
    auto concepts = schema.concepts();
    std::map<std::uint32_t, Possibility> derived;
    for (auto c : concepts) {
        bool is_seed = std::find(seeds.begin(), seeds.end(), c) != seeds.end();
        bool above = std::any_of(seeds.begin(), seeds.end(), [&](ConceptRef s) { return s != c && schema.reaches(s, c); });
        if (!is_seed && above)
            derived.emplace(c.index, Possibility::all(schema, c, false));
    }
    // Definition order has domains first, so walking it backwards visits
    // every sub-concept before its super-concepts.
    for (auto it = concepts.rbegin(); it != concepts.rend(); ++it) {
        auto c = *it;
        auto d = derived.find(c.index);
        bool is_seed = std::find(seeds.begin(), seeds.end(), c) != seeds.end();
        if (!is_seed && d == derived.end())
            continue;
        if (d != derived.end()) {
            if (auto own = cs.find(c))
                d->second.meet(*own);
        }
        const Possibility current = d != derived.end() ? d->second : cs.get(schema, c);
        const auto& dims = schema.concept_at(c).dims();
        for (auto e : schema.items(c)) {
            if (!current.possible(e))
                continue;
            const auto& slots = schema.slots(e);
            for (std::size_t k = 0; k < dims.size(); ++k) {
                if (!slots[k])
                    continue;
                auto target = derived.find(dims[k].domain.index);
                if (target != derived.end())
                    target->second.set(*slots[k], true);
            }
        }
    }
    for (auto& [idx, p] : derived) {
        if (auto own = cs.find(ConceptRef{idx}))
            p.meet(*own);
        cs.restrict(p);
    }
    return cs;
}

/// Stored items assigned 0 by the constraints (M ∩ N).
inline std::vector<ItemRef> consistency_violations(const Schema& schema, const ConstraintSet& cs)
{
    std::vector<ItemRef> out;
    for (auto c : cs.concepts())
        for (auto r : cs.find(c)->impossible_items(schema))
            out.push_back(r);
    return out;
}

inline bool check_consistency(const Schema& schema, const ConstraintSet& cs) { return consistency_violations(schema, cs).empty(); }

/// Copy of the schema with every item that is impossible after downward
/// propagation removed.
inline Schema restrict_schema(const Schema& schema, const ConstraintSet& cs)
{
    ConstraintSet closed = propagate_down(schema, cs);
    Schema out = schema;
    auto concepts = schema.concepts();
    for (auto it = concepts.rbegin(); it != concepts.rend(); ++it)
        if (auto p = closed.find(*it))
            for (auto r : p->impossible_items(schema))
                out.remove_item(r);
    return out;
}

struct InferSource {
    Possibility possibility;
    DimPath via; // from the bottom concept to the source concept
};

struct InferTarget {
    ConceptRef concept_ref;
    DimPath via; // from the bottom concept to the target concept
};

/// De-projects every source's possible items to the bottom concept,
/// intersects, and projects the survivors onto the target.
inline Possibility infer(const Schema& schema, const std::vector<InferSource>& sources, const InferTarget& target,
                         std::optional<ConceptRef> bottom = std::nullopt)
{
    ConceptRef z = schema.require_bottom(bottom);
    auto check = [&](const DimPath& via, ConceptRef expected) {
        ConceptRef end = schema.resolve_path(z, via);
        if (end != expected)
            fail(Errc::path_mismatch, "path '" + via.to_string() + "' from '" + schema.concept_name(z) + "' ends in '" +
                                          schema.concept_name(end) + "', not '" + schema.concept_name(expected) + "'");
    };
    for (const auto& s : sources)
        check(s.via, s.possibility.concept_ref());
    check(target.via, target.concept_ref);

    Collection survivors = all_items(schema, z);
    for (const auto& s : sources) {
        Collection possible{s.possibility.concept_ref(), s.possibility.possible_items(schema)};
        survivors = intersect(survivors, deproject(schema, possible, s.via, z));
    }
    return Possibility::only(schema, target.concept_ref, project(schema, survivors, target.via).members);
}

} // namespace comdb
