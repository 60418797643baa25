#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "network.hpp"

namespace capregion {

/// Minimal edge set carrying message `message` from its source to all of its
/// receivers. `edges` is sorted ascending.
struct SteinerTree {
    std::size_t message = 0;
    std::vector<EdgeId> edges;

    bool uses(EdgeId e) const { return std::binary_search(edges.begin(), edges.end(), e); }
    bool operator==(const SteinerTree&) const = default;
};

/// Positive per-edge lengths. Works with Rational or double.
template <class Length>
void check_lengths(const Network& net, const std::vector<Length>& lengths) {
    if (lengths.size() != net.num_edges()) throw std::invalid_argument("length function has wrong size");
    for (const auto& l : lengths)
        if (!(l > 0)) throw std::invalid_argument("edge lengths must be positive");
}

/// True when `edges` connects the source of `message` to every receiver.
inline bool connects_all(const Network& net, std::size_t message, const std::vector<EdgeId>& edges) {
    std::vector<bool> allowed(net.num_edges(), false);
    for (EdgeId e : edges) allowed[e] = true;
    auto reach = reachable_from(net, net.messages[message].source, allowed);
    for (NodeId r : net.messages[message].receivers)
        if (!reach[r]) return false;
    return true;
}

namespace detail {

class TreeEnumerator {
  public:
    TreeEnumerator(const Network& net, std::size_t message)
        : net_(net), msg_(net.messages.at(message)), out_(net.out_edges()), in_tree_(net.num_nodes(), false) {}

    std::set<std::vector<EdgeId>> run() {
        in_tree_[msg_.source] = true;
        grow();
        return found_;
    }

  private:
    // Adds, for the first receiver not yet reached, every path that leaves
    // the current arborescence and ends at that receiver through fresh nodes.
    void grow() {
        std::optional<NodeId> target;
        for (NodeId r : msg_.receivers)
            if (!in_tree_[r]) {
                target = r;
                break;
            }
        if (!target) {
            auto sorted = edges_;
            std::sort(sorted.begin(), sorted.end());
            found_.insert(std::move(sorted));
            return;
        }
        const auto can_reach = reverse_reach(*target);
        for (NodeId v = 0; v < net_.num_nodes(); ++v)
            if (in_tree_[v]) extend(v, *target, can_reach);
    }

    void extend(NodeId at, NodeId target, const std::vector<bool>& can_reach) {
        for (EdgeId e : out_[at]) {
            NodeId h = net_.edges[e].head;
            if (in_tree_[h] || !can_reach[h]) continue;
            edges_.push_back(e);
            in_tree_[h] = true;
            if (h == target) {
                grow();
            } else {
                extend(h, target, can_reach);
            }
            in_tree_[h] = false;
            edges_.pop_back();
        }
    }

    std::vector<bool> reverse_reach(NodeId target) const {
        auto in = net_.in_edges();
        std::vector<bool> seen(net_.num_nodes(), false);
        std::vector<NodeId> stack{target};
        seen[target] = true;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (EdgeId e : in[v]) {
                NodeId t = net_.edges[e].tail;
                if (!seen[t]) {
                    seen[t] = true;
                    stack.push_back(t);
                }
            }
        }
        return seen;
    }

    const Network& net_;
    const Message& msg_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<bool> in_tree_;
    std::vector<EdgeId> edges_;
    std::set<std::vector<EdgeId>> found_;
};

}  // namespace detail

/// All minimal directed Steiner trees of one message, ordered
/// lexicographically by their sorted edge-index lists.
inline std::vector<SteinerTree> enumerate_minimal_steiner_trees(const Network& net, std::size_t message) {
    if (message >= net.num_messages()) throw std::out_of_range("message index out of range");
    std::vector<SteinerTree> trees;
    for (auto& edges : detail::TreeEnumerator(net, message).run()) trees.push_back({message, edges});
    return trees;
}

template <class Length>
Length tree_cost(const std::vector<EdgeId>& edges, const std::vector<Length>& lengths) {
    Length c = 0;
    for (EdgeId e : edges) c += lengths[e];
    return c;
}

/// Index of the cheapest tree in `trees` (first one on ties).
template <class Length>
std::size_t cheapest_tree(const std::vector<SteinerTree>& trees, const std::vector<Length>& lengths) {
    if (trees.empty()) throw std::invalid_argument("no Steiner trees to choose from");
    std::size_t best = 0;
    Length best_cost = tree_cost(trees[0].edges, lengths);
    for (std::size_t k = 1; k < trees.size(); ++k) {
        Length c = tree_cost(trees[k].edges, lengths);
        if (c < best_cost) {
            best = k;
            best_cost = c;
        }
    }
    return best;
}

/// Exact min-cost directed Steiner tree (approximation guarantee 1) by scanning
/// the full minimal-tree list.
inline std::pair<SteinerTree, Rational> min_cost_steiner_exact(const Network& net, std::size_t message,
                                                               const RationalVector& lengths) {
    check_lengths(net, lengths);
    auto trees = enumerate_minimal_steiner_trees(net, message);
    std::size_t k = cheapest_tree(trees, lengths);
    Rational c = tree_cost(trees[k].edges, lengths);
    return {trees[k], c};
}

/// Drops edges (highest index first) while the set still connects the message.
inline std::vector<EdgeId> prune_to_minimal(const Network& net, std::size_t message, std::vector<EdgeId> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (std::size_t k = edges.size(); k-- > 0;) {
        std::vector<EdgeId> trial = edges;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
        if (connects_all(net, message, trial)) edges = std::move(trial);
    }
    return edges;
}

/// Union of per-receiver shortest paths, pruned to a minimal tree. Cost is at
/// most (number of receivers) times the optimum. Equal-length alternatives are
/// resolved towards the smaller incoming edge index.
template <class Length>
std::pair<std::vector<EdgeId>, Length> min_cost_steiner_shortest_paths(const Network& net, std::size_t message,
                                                                        const std::vector<Length>& lengths) {
    check_lengths(net, lengths);
    const Message& m = net.messages.at(message);
    auto order = topological_order(net);
    auto in = net.in_edges();

    std::vector<std::optional<Length>> dist(net.num_nodes());
    std::vector<std::optional<EdgeId>> pred(net.num_nodes());
    dist[m.source] = Length(0);
    for (NodeId v : order) {
        if (v == m.source) continue;
        for (EdgeId e : in[v]) {  // ascending edge index
            const auto& d = dist[net.edges[e].tail];
            if (!d) continue;
            Length cand = *d + lengths[e];
            if (!dist[v] || cand < *dist[v]) {
                dist[v] = cand;
                pred[v] = e;
            }
        }
    }

    std::vector<EdgeId> edges;
    for (NodeId r : m.receivers) {
        if (!dist[r]) throw std::invalid_argument(m.name + " cannot reach " + net.nodes[r]);
        for (NodeId v = r; v != m.source; v = net.edges[*pred[v]].tail) edges.push_back(*pred[v]);
    }
    edges = prune_to_minimal(net, message, std::move(edges));
    Length cost = tree_cost(edges, lengths);
    return {edges, cost};
}

}  // namespace capregion
