#ifndef DFLOW_UNION_FIND_HPP
#define DFLOW_UNION_FIND_HPP

#include <numeric>
#include <vector>

namespace dflow {

/// Disjoint-set forest with path halving; cheap to copy, which backtracking
/// searches rely on.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Merges the two classes; returns false when already joined.
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);  // keep the smallest element as the root
        parent_[b] = a;
        return true;
    }

private:
    std::vector<int> parent_;
};

}  // namespace dflow

#endif  // DFLOW_UNION_FIND_HPP
