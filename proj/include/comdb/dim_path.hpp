#pragma once

#include <compare>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace comdb {

/// A sequence of dimension labels, written dot-separated. Its length is the rank.
class DimPath {
public:
    DimPath() = default;
    DimPath(std::initializer_list<std::string> labels) : labels_(labels) {}
    explicit DimPath(std::vector<std::string> labels) : labels_(std::move(labels)) {}

    /// "a.b.c" -> [a, b, c]; the empty string is the empty path.
    static DimPath parse(std::string_view dotted)
    {
        DimPath p;
        if (dotted.empty())
            return p;
        std::size_t start = 0;
        while (true) {
            auto dot = dotted.find('.', start);
            p.labels_.emplace_back(dotted.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
            if (dot == std::string_view::npos)
                break;
            start = dot + 1;
        }
        return p;
    }

    std::size_t rank() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& operator[](std::size_t i) const { return labels_[i]; }

    auto begin() const noexcept { return labels_.begin(); }
    auto end() const noexcept { return labels_.end(); }

    void push_back(std::string label) { labels_.push_back(std::move(label)); }

    DimPath concat(const DimPath& tail) const
    {
        DimPath out = *this;
        out.labels_.insert(out.labels_.end(), tail.labels_.begin(), tail.labels_.end());
        return out;
    }

    bool starts_with(const DimPath& prefix) const
    {
        if (prefix.rank() > rank())
            return false;
        for (std::size_t i = 0; i < prefix.rank(); ++i)
            if (labels_[i] != prefix.labels_[i])
                return false;
        return true;
    }

    DimPath suffix_after(std::size_t n) const
    {
        return DimPath(std::vector<std::string>(labels_.begin() + static_cast<std::ptrdiff_t>(n), labels_.end()));
    }

    std::string to_string() const
    {
        std::string out;
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (i)
                out += '.';
            out += labels_[i];
        }
        return out;
    }

    friend auto operator<=>(const DimPath&, const DimPath&) = default;
    friend bool operator==(const DimPath&, const DimPath&) = default;

private:
    std::vector<std::string> labels_;
};

} // namespace comdb
