#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "field.hpp"
#include "network.hpp"
#include "steiner.hpp"

namespace capregion {

/// Subset of messages, one bit per message.
struct WeightVector {
    std::vector<std::uint8_t> bits;

    WeightVector() = default;
    explicit WeightVector(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

    static WeightVector unit(std::size_t dim, std::size_t i) {
        WeightVector w(std::vector<std::uint8_t>(dim, 0));
        w.bits[i] = 1;
        return w;
    }

    std::size_t size() const { return bits.size(); }
    bool operator[](std::size_t i) const { return bits[i] != 0; }
    bool is_zero() const { return std::all_of(bits.begin(), bits.end(), [](auto b) { return b == 0; }); }
    bool dominated_by(const WeightVector& o) const {
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i] && !o.bits[i]) return false;
        return true;
    }
    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < bits.size(); ++i) s += (i ? "," : "") + std::to_string(int(bits[i]));
        return s;
    }
    auto operator<=>(const WeightVector&) const = default;
};

/// Scalar-linear code over unit-capacity edges for the messages selected by
/// `weight`. Inputs of a node are, in order: the selected messages it
/// generates (by message index), then its active in-edges (by edge index).
struct PartialScalarLinearSolution {
    struct Decoder {
        NodeId receiver = 0;
        std::size_t message = 0;
        FieldVector coefficients;
    };

    WeightVector weight;
    std::vector<EdgeId> active_edges;             // sorted
    std::vector<FieldVector> edge_coefficients;   // aligned with active_edges
    std::vector<Decoder> decoders;

    bool uses(EdgeId e) const { return std::binary_search(active_edges.begin(), active_edges.end(), e); }
};

inline void check_field_for(const Network& net, const PrimeField& field) {
    if (field.order() < static_cast<std::uint64_t>(net.alphabet_size))
        throw std::invalid_argument("field order " + std::to_string(field.order()) + " is smaller than alphabet size " +
                                    std::to_string(net.alphabet_size));
}

/// Independent check of a witness: rebuilds every edge's global coding vector
/// from the local coefficients in topological order and confirms each demanded
/// message decodes to its unit vector.
inline bool verify_partial_solution(const Network& net, const PrimeField& field, const PartialScalarLinearSolution& sol) {
    const std::size_t k = net.num_messages();
    if (sol.weight.size() != k || sol.edge_coefficients.size() != sol.active_edges.size()) return false;
    if (!std::is_sorted(sol.active_edges.begin(), sol.active_edges.end()) ||
        std::adjacent_find(sol.active_edges.begin(), sol.active_edges.end()) != sol.active_edges.end())
        return false;
    for (EdgeId e : sol.active_edges)
        if (e >= net.num_edges()) return false;

    std::map<EdgeId, const FieldVector*> local;
    for (std::size_t a = 0; a < sol.active_edges.size(); ++a) local[sol.active_edges[a]] = &sol.edge_coefficients[a];

    std::vector<std::optional<FieldVector>> global(net.num_edges());
    auto inputs_of = [&](NodeId v) {
        std::vector<FieldVector> in;
        for (std::size_t i = 0; i < k; ++i)
            if (sol.weight[i] && net.messages[i].source == v) in.push_back(field.unit(k, i));
        for (EdgeId e = 0; e < net.num_edges(); ++e)
            if (net.edges[e].head == v && local.count(e)) in.push_back(*global[e]);
        return in;
    };

    for (NodeId v : topological_order(net)) {
        auto in = inputs_of(v);
        for (EdgeId e = 0; e < net.num_edges(); ++e) {
            if (net.edges[e].tail != v || !local.count(e)) continue;
            const FieldVector& c = *local[e];
            if (c.size() != in.size()) return false;
            FieldVector g(k, 0);
            for (std::size_t t = 0; t < in.size(); ++t) field.axpy(g, c[t] % field.order(), in[t]);
            global[e] = g;
        }
    }

    for (std::size_t i = 0; i < k; ++i) {
        if (!sol.weight[i]) continue;
        for (NodeId r : net.messages[i].receivers) {
            auto it = std::find_if(sol.decoders.begin(), sol.decoders.end(),
                                   [&](const auto& d) { return d.receiver == r && d.message == i; });
            if (it == sol.decoders.end()) return false;
            auto in = inputs_of(r);
            if (it->coefficients.size() != in.size()) return false;
            FieldVector g(k, 0);
            for (std::size_t t = 0; t < in.size(); ++t) field.axpy(g, it->coefficients[t] % field.order(), in[t]);
            if (g != field.unit(k, i)) return false;
        }
    }
    return true;
}

using EdgeMask = std::vector<bool>;

/// Exhaustive scalar-linear search with memoization per (weight, edge mask).
/// Holds a reference to the network, which must outlive it.
class LinearCodeCatalog {
  public:
    LinearCodeCatalog(const Network& net, PrimeField field)
        : net_(net), field_(std::move(field)), order_(topological_order(net)) {
        check_field_for(net_, field_);
        topo_pos_.assign(net_.num_nodes(), 0);
        for (std::size_t p = 0; p < order_.size(); ++p) topo_pos_[order_[p]] = p;
    }

    const Network& network() const { return net_; }
    const PrimeField& field() const { return field_; }

    /// A solution whose support lies inside `allowed`, as global coding vectors
    /// per edge (all-zero for unused edges).
    std::optional<std::vector<FieldVector>> solve_within(const WeightVector& w, const EdgeMask& allowed) {
        check_weight(w);
        auto key = std::make_pair(w, allowed);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        auto result = search(w, allowed);
        memo_.emplace(std::move(key), result);
        return result;
    }

    bool solvable_within(const WeightVector& w, const EdgeMask& allowed) { return solve_within(w, allowed).has_value(); }

    /// A minimal witness for `w`, or nullopt when no scalar-linear solution exists.
    std::optional<PartialScalarLinearSolution> solve(const WeightVector& w) {
        check_weight(w);
        EdgeMask mask(net_.num_edges(), true);
        if (!solvable_within(w, mask)) return std::nullopt;
        for (EdgeId e = 0; e < net_.num_edges(); ++e) {
            mask[e] = false;
            if (!solvable_within(w, mask)) mask[e] = true;
        }
        return witness(w, mask);
    }

    /// Every minimal active edge set admitting a solution for `w`, each with a
    /// witness, ordered lexicographically by active set. Throws if `w` is not solvable.
    const std::vector<PartialScalarLinearSolution>& minimal_solutions(const WeightVector& w) {
        check_weight(w);
        if (auto it = minimal_.find(w); it != minimal_.end()) return it->second;
        EdgeMask full(net_.num_edges(), true);
        if (!solvable_within(w, full)) throw std::invalid_argument("weight vector " + w.str() + " is not solvable");

        std::vector<EdgeMask> found;
        explore_minimal(w, useful_edges(w, full), 0, found);
        std::vector<PartialScalarLinearSolution> sols;
        for (const auto& m : found) sols.push_back(witness(w, m));
        std::sort(sols.begin(), sols.end(), [](const auto& a, const auto& b) { return a.active_edges < b.active_edges; });
        return minimal_.emplace(w, std::move(sols)).first->second;
    }

    /// All solvable weight vectors in lexicographic order of their bits.
    std::vector<WeightVector> weight_vectors() {
        const std::size_t k = net_.num_messages();
        if (k > 20) throw std::invalid_argument("too many messages for weight enumeration");
        std::vector<WeightVector> out;
        for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << k); ++bits) {
            WeightVector w(std::vector<std::uint8_t>(k, 0));
            for (std::size_t i = 0; i < k; ++i) w.bits[i] = (bits >> (k - 1 - i)) & 1;
            if (solvable_within(w, EdgeMask(net_.num_edges(), true))) out.push_back(w);
        }
        return out;
    }

    /// Cheapest minimal solution under `lengths` (first in order on ties).
    template <class Length>
    std::pair<const PartialScalarLinearSolution*, Length> min_cost(const WeightVector& w, const std::vector<Length>& lengths) {
        const auto& sols = minimal_solutions(w);
        const PartialScalarLinearSolution* best = nullptr;
        Length best_cost = 0;
        for (const auto& s : sols) {
            Length c = tree_cost(s.active_edges, lengths);
            if (!best || c < best_cost) {
                best = &s;
                best_cost = c;
            }
        }
        return {best, best_cost};
    }

  private:
    void check_weight(const WeightVector& w) const {
        if (w.size() != net_.num_messages()) throw std::invalid_argument("weight vector has wrong dimension");
    }

    std::vector<FieldVector> node_inputs(const WeightVector& w, NodeId v, const EdgeMask& mask,
                                         const std::vector<FieldVector>& global) const {
        const std::size_t k = net_.num_messages();
        std::vector<FieldVector> in;
        for (std::size_t i = 0; i < k; ++i)
            if (w[i] && net_.messages[i].source == v) in.push_back(field_.unit(k, i));
        for (EdgeId e = 0; e < net_.num_edges(); ++e)
            if (net_.edges[e].head == v && mask[e]) in.push_back(global[e]);
        return in;
    }

    /// Edges inside `allowed` that can influence some demand: the tail is
    /// reachable from a selected source and the head reaches a selected receiver.
    EdgeMask useful_edges(const WeightVector& w, const EdgeMask& allowed) const {
        std::vector<bool> from_source(net_.num_nodes(), false), to_receiver(net_.num_nodes(), false);
        for (std::size_t i = 0; i < net_.num_messages(); ++i) {
            if (!w[i]) continue;
            auto r = reachable_from(net_, net_.messages[i].source, allowed);
            for (NodeId v = 0; v < r.size(); ++v)
                if (r[v]) from_source[v] = true;
            for (NodeId x : net_.messages[i].receivers) to_receiver[x] = true;
        }
        for (auto it = order_.rbegin(); it != order_.rend(); ++it)
            for (EdgeId e = 0; e < net_.num_edges(); ++e)
                if (allowed[e] && net_.edges[e].tail == *it && to_receiver[net_.edges[e].head]) to_receiver[*it] = true;
        EdgeMask useful(net_.num_edges(), false);
        for (EdgeId e = 0; e < net_.num_edges(); ++e)
            useful[e] = allowed[e] && from_source[net_.edges[e].tail] && to_receiver[net_.edges[e].head];
        return useful;
    }

    std::optional<std::vector<FieldVector>> search(const WeightVector& w, const EdgeMask& allowed) const {
        const std::size_t k = net_.num_messages();
        std::vector<FieldVector> global(net_.num_edges(), FieldVector(k, 0));

        // Cheap necessary condition: every demand has a path inside `allowed`.
        for (std::size_t i = 0; i < k; ++i) {
            if (!w[i]) continue;
            auto reach = reachable_from(net_, net_.messages[i].source, allowed);
            for (NodeId r : net_.messages[i].receivers)
                if (!reach[r]) return std::nullopt;
        }

        EdgeMask mask = useful_edges(w, allowed);
        std::vector<EdgeId> order;
        for (EdgeId e = 0; e < net_.num_edges(); ++e)
            if (mask[e]) order.push_back(e);
        std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
            const auto &ea = net_.edges[a], &eb = net_.edges[b];
            return std::tuple(topo_pos_[ea.head], topo_pos_[ea.tail], a) <
                   std::tuple(topo_pos_[eb.head], topo_pos_[eb.tail], b);
        });

        // A node's demands are checked once its last useful in-edge is assigned.
        std::vector<std::vector<NodeId>> check_after(order.size() + 1);
        for (NodeId v = 0; v < net_.num_nodes(); ++v) {
            bool demands = false;
            for (std::size_t i = 0; i < k; ++i)
                if (w[i] && std::find(net_.messages[i].receivers.begin(), net_.messages[i].receivers.end(), v) !=
                                net_.messages[i].receivers.end())
                    demands = true;
            if (!demands) continue;
            std::size_t last = 0;
            for (std::size_t p = 0; p < order.size(); ++p)
                if (net_.edges[order[p]].head == v) last = p + 1;
            check_after[last].push_back(v);
        }

        auto demands_met = [&](NodeId v) {
            auto in = node_inputs(w, v, mask, global);
            for (std::size_t i = 0; i < k; ++i) {
                if (!w[i]) continue;
                const auto& rs = net_.messages[i].receivers;
                if (std::find(rs.begin(), rs.end(), v) == rs.end()) continue;
                if (!field_.in_span(in, field_.unit(k, i))) return false;
            }
            return true;
        };

        for (NodeId v : check_after[0])
            if (!demands_met(v)) return std::nullopt;

        // Depth-first over edge vectors drawn from the span at the tail.
        // Only vectors whose leading nonzero entry is 1 are tried: rescaling an
        // edge symbol never changes any downstream span.
        auto dfs = [&](auto&& self, std::size_t pos) -> bool {
            if (pos == order.size()) return true;
            EdgeId e = order[pos];
            auto span_basis = field_.basis(node_inputs(w, net_.edges[e].tail, mask, global), k);
            const std::size_t d = span_basis.size();
            std::vector<Symbol> coef(d, 0);
            while (true) {
                FieldVector v(k, 0);
                for (std::size_t t = 0; t < d; ++t) field_.axpy(v, coef[t], span_basis[t]);
                auto lead = std::find_if(v.begin(), v.end(), [](Symbol s) { return s != 0; });
                if (lead == v.end() || *lead == 1) {
                    global[e] = v;
                    bool ok = true;
                    for (NodeId x : check_after[pos + 1])
                        if (!demands_met(x)) {
                            ok = false;
                            break;
                        }
                    if (ok && self(self, pos + 1)) return true;
                }
                std::size_t t = 0;
                while (t < d && ++coef[t] == field_.order()) coef[t++] = 0;
                if (t == d) break;
            }
            global[e] = FieldVector(k, 0);
            return false;
        };
        if (!dfs(dfs, 0)) return std::nullopt;
        return global;
    }

    // Visits every solvable subset of `set` reachable by deleting edges in
    // ascending index order, keeping the ones with no solvable one-edge deletion.
    void explore_minimal(const WeightVector& w, const EdgeMask& set, EdgeId from, std::vector<EdgeMask>& found) {
        bool minimal = true;
        for (EdgeId e = 0; e < net_.num_edges(); ++e) {
            if (!set[e]) continue;
            EdgeMask smaller = set;
            smaller[e] = false;
            if (!solvable_within(w, smaller)) continue;
            minimal = false;
            if (e >= from) explore_minimal(w, smaller, e + 1, found);
        }
        if (minimal) found.push_back(set);
    }

    PartialScalarLinearSolution witness(const WeightVector& w, const EdgeMask& allowed) {
        auto global = solve_within(w, allowed);
        if (!global) throw std::logic_error("witness requested for an unsolvable edge set");
        const std::size_t k = net_.num_messages();

        EdgeMask active(net_.num_edges(), false);
        for (EdgeId e = 0; e < net_.num_edges(); ++e)
            active[e] = allowed[e] && std::any_of((*global)[e].begin(), (*global)[e].end(), [](Symbol s) { return s != 0; });

        PartialScalarLinearSolution sol;
        sol.weight = w;
        for (EdgeId e = 0; e < net_.num_edges(); ++e) {
            if (!active[e]) continue;
            sol.active_edges.push_back(e);
            auto in = node_inputs(w, net_.edges[e].tail, active, *global);
            auto c = field_.combination(in, (*global)[e]);
            if (!c) throw std::logic_error("edge vector outside the span of its tail");
            sol.edge_coefficients.push_back(*c);
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (!w[i]) continue;
            for (NodeId r : net_.messages[i].receivers) {
                auto in = node_inputs(w, r, active, *global);
                auto c = field_.combination(in, field_.unit(k, i));
                if (!c) throw std::logic_error("receiver cannot decode");
                sol.decoders.push_back({r, i, *c});
            }
        }
        return sol;
    }

    const Network& net_;
    PrimeField field_;
    std::vector<NodeId> order_;
    std::vector<std::size_t> topo_pos_;
    std::map<std::pair<WeightVector, EdgeMask>, std::optional<std::vector<FieldVector>>> memo_;
    std::map<WeightVector, std::vector<PartialScalarLinearSolution>> minimal_;
};

/// Minimal witness if `w` admits a scalar-linear solution over `field`.
inline std::optional<PartialScalarLinearSolution> is_scalar_linear_solvable(const Network& net, const WeightVector& w,
                                                                            const PrimeField& field) {
    return LinearCodeCatalog(net, field).solve(w);
}

inline std::vector<WeightVector> enumerate_weight_vectors(const Network& net, const PrimeField& field) {
    return LinearCodeCatalog(net, field).weight_vectors();
}

inline std::vector<PartialScalarLinearSolution> enumerate_minimal_partial_solutions(const Network& net,
                                                                                    const WeightVector& w,
                                                                                    const PrimeField& field) {
    return LinearCodeCatalog(net, field).minimal_solutions(w);
}

inline std::pair<PartialScalarLinearSolution, Rational> min_cost_scalar_linear(const Network& net, const WeightVector& w,
                                                                               const RationalVector& lengths,
                                                                               const PrimeField& field) {
    check_lengths(net, lengths);
    LinearCodeCatalog catalog(net, field);
    auto [best, cost] = catalog.min_cost(w, lengths);
    return {*best, cost};
}

}  // namespace capregion
