#pragma once

// Perfect matchings in small bipartite graphs by augmenting paths, with a
// Hall-violating set as the certificate when none exists.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace hmbp {

/// Square bipartite graph given as an adjacency matrix adj[left][right].
class BipartiteGraph {
public:
    explicit BipartiteGraph(std::size_t size)
        : size_(size), adj_(size, std::vector<bool>(size, false)) {}

    std::size_t size() const { return size_; }
    void add_edge(std::size_t left, std::size_t right) { adj_[left][right] = true; }
    bool has_edge(std::size_t left, std::size_t right) const { return adj_[left][right]; }

    /// match[left] = right for a perfect matching, or empty if there is none.
    std::optional<std::vector<std::size_t>> perfect_matching() const {
        std::vector<std::optional<std::size_t>> owner(size_);  // right -> left
        for (std::size_t left = 0; left < size_; ++left) {
            std::vector<bool> seen(size_, false);
            if (!augment(left, seen, owner)) {
                return std::nullopt;
            }
        }
        std::vector<std::size_t> match(size_);
        for (std::size_t right = 0; right < size_; ++right) {
            match[*owner[right]] = right;
        }
        return match;
    }

    /// A set S of left vertices with |N(S)| < |S|, found from a maximum
    /// matching; empty when a perfect matching exists.
    std::vector<std::size_t> hall_violator() const {
        std::vector<std::optional<std::size_t>> owner(size_);
        std::vector<bool> matched_left(size_, false);
        for (std::size_t left = 0; left < size_; ++left) {
            std::vector<bool> seen(size_, false);
            matched_left[left] = augment(left, seen, owner);
        }
        auto free_left = std::find(matched_left.begin(), matched_left.end(), false);
        if (free_left == matched_left.end()) {
            return {};
        }
        // Left vertices reachable from a free left vertex by alternating paths.
        std::vector<bool> in_set(size_, false);
        std::vector<std::size_t> stack{static_cast<std::size_t>(free_left - matched_left.begin())};
        in_set[stack.back()] = true;
        while (!stack.empty()) {
            const std::size_t left = stack.back();
            stack.pop_back();
            for (std::size_t right = 0; right < size_; ++right) {
                if (!adj_[left][right] || !owner[right]) {
                    continue;
                }
                const std::size_t next = *owner[right];
                if (!in_set[next]) {
                    in_set[next] = true;
                    stack.push_back(next);
                }
            }
        }
        std::vector<std::size_t> out;
        for (std::size_t left = 0; left < size_; ++left) {
            if (in_set[left]) {
                out.push_back(left);
            }
        }
        return out;
    }

    /// Right neighbours of a set of left vertices.
    std::vector<std::size_t> neighbours(const std::vector<std::size_t>& lefts) const {
        std::vector<std::size_t> out;
        for (std::size_t right = 0; right < size_; ++right) {
            for (std::size_t left : lefts) {
                if (adj_[left][right]) {
                    out.push_back(right);
                    break;
                }
            }
        }
        return out;
    }

private:
    bool augment(std::size_t left, std::vector<bool>& seen,
                 std::vector<std::optional<std::size_t>>& owner) const {
        for (std::size_t right = 0; right < size_; ++right) {
            if (!adj_[left][right] || seen[right]) {
                continue;
            }
            seen[right] = true;
            if (!owner[right] || augment(*owner[right], seen, owner)) {
                owner[right] = left;
                return true;
            }
        }
        return false;
    }

    std::size_t size_;
    std::vector<std::vector<bool>> adj_;
};

}  // namespace hmbp
