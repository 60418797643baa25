#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rational.hpp"

namespace capregion {

using NodeId = std::size_t;
using EdgeId = std::size_t;

/// Thrown by parse_network; the message carries the offending line number.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

struct Edge {
    NodeId tail = 0;
    NodeId head = 0;
    std::int64_t capacity = 1;
};

/// One multicast session: a single source node and a nonempty receiver set.
struct Message {
    std::string name;
    NodeId source = 0;
    std::vector<NodeId> receivers;
};

/// Capacitated acyclic multigraph with multicast demands. Edge and message
/// indices are their positions in file order and never change.
struct Network {
    std::vector<std::string> nodes;
    std::vector<Edge> edges;
    std::vector<Message> messages;
    std::int64_t alphabet_size = 2;

    std::size_t num_nodes() const { return nodes.size(); }
    std::size_t num_edges() const { return edges.size(); }
    std::size_t num_messages() const { return messages.size(); }

    std::optional<NodeId> find_node(std::string_view name) const {
        for (NodeId v = 0; v < nodes.size(); ++v)
            if (nodes[v] == name) return v;
        return std::nullopt;
    }

    std::vector<std::vector<EdgeId>> out_edges() const {
        std::vector<std::vector<EdgeId>> out(nodes.size());
        for (EdgeId e = 0; e < edges.size(); ++e) out[edges[e].tail].push_back(e);
        return out;
    }

    std::vector<std::vector<EdgeId>> in_edges() const {
        std::vector<std::vector<EdgeId>> in(nodes.size());
        for (EdgeId e = 0; e < edges.size(); ++e) in[edges[e].head].push_back(e);
        return in;
    }

    bool operator==(const Network& other) const {
        if (nodes != other.nodes || alphabet_size != other.alphabet_size) return false;
        if (edges.size() != other.edges.size() || messages.size() != other.messages.size()) return false;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto &a = edges[e], &b = other.edges[e];
            if (a.tail != b.tail || a.head != b.head || a.capacity != b.capacity) return false;
        }
        for (std::size_t i = 0; i < messages.size(); ++i) {
            const auto &a = messages[i], &b = other.messages[i];
            if (a.name != b.name || a.source != b.source || a.receivers != b.receivers) return false;
        }
        return true;
    }
};

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

inline bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
}

inline std::int64_t parse_positive(std::string_view tok, std::size_t line, const char* what) {
    if (tok.empty() || tok.size() > 18 || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw ParseError(line, std::string(what) + " must be a positive integer, got '" + std::string(tok) + "'");
    std::int64_t v = std::stoll(std::string(tok));
    if (v < 1) throw ParseError(line, std::string(what) + " must be a positive integer, got '" + std::string(tok) + "'");
    return v;
}

}  // namespace detail

/// Reads the line-oriented network format:
///   node <id> | edge <tail> <head> <capacity> | message <id> <source> <r1>[,<r2>...]
///   alphabet <size> | # comment
inline Network parse_network(std::string_view text) {
    Network net;
    bool seen_alphabet = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        auto toks = detail::split_ws(line);
        if (toks.empty() || toks[0].front() == '#') continue;

        auto lookup = [&](const std::string& name) {
            auto v = net.find_node(name);
            if (!v) throw ParseError(line_no, "unknown node '" + name + "'");
            return *v;
        };

        const std::string& kind = toks[0];
        if (kind == "node") {
            if (toks.size() != 2) throw ParseError(line_no, "expected 'node <id>'");
            if (!detail::is_identifier(toks[1])) throw ParseError(line_no, "invalid node id '" + toks[1] + "'");
            if (net.find_node(toks[1])) throw ParseError(line_no, "duplicate node '" + toks[1] + "'");
            net.nodes.push_back(toks[1]);
        } else if (kind == "edge") {
            if (toks.size() != 4) throw ParseError(line_no, "expected 'edge <tail> <head> <capacity>'");
            Edge e;
            e.tail = lookup(toks[1]);
            e.head = lookup(toks[2]);
            e.capacity = detail::parse_positive(toks[3], line_no, "capacity");
            net.edges.push_back(e);
        } else if (kind == "message") {
            if (toks.size() != 4) throw ParseError(line_no, "expected 'message <id> <source> <recv>[,<recv>...]'");
            if (!detail::is_identifier(toks[1])) throw ParseError(line_no, "invalid message id '" + toks[1] + "'");
            for (const auto& m : net.messages)
                if (m.name == toks[1]) throw ParseError(line_no, "duplicate message '" + toks[1] + "'");
            Message m;
            m.name = toks[1];
            m.source = lookup(toks[2]);
            std::string_view list = toks[3];
            std::size_t start = 0;
            while (true) {
                auto comma = list.find(',', start);
                std::string name(list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
                if (name.empty()) throw ParseError(line_no, "empty receiver in list");
                NodeId r = lookup(name);
                if (std::find(m.receivers.begin(), m.receivers.end(), r) != m.receivers.end())
                    throw ParseError(line_no, "duplicate receiver '" + name + "'");
                m.receivers.push_back(r);
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
            net.messages.push_back(std::move(m));
        } else if (kind == "alphabet") {
            if (toks.size() != 2) throw ParseError(line_no, "expected 'alphabet <size>'");
            if (seen_alphabet) throw ParseError(line_no, "duplicate alphabet line");
            net.alphabet_size = detail::parse_positive(toks[1], line_no, "alphabet size");
            seen_alphabet = true;
        } else {
            throw ParseError(line_no, "unknown directive '" + kind + "'");
        }
    }
    return net;
}

/// Deterministic inverse of parse_network.
inline std::string serialize_network(const Network& net) {
    std::ostringstream out;
    out << "alphabet " << net.alphabet_size << '\n';
    for (const auto& n : net.nodes) out << "node " << n << '\n';
    for (const auto& e : net.edges)
        out << "edge " << net.nodes[e.tail] << ' ' << net.nodes[e.head] << ' ' << e.capacity << '\n';
    for (const auto& m : net.messages) {
        out << "message " << m.name << ' ' << net.nodes[m.source] << ' ';
        for (std::size_t k = 0; k < m.receivers.size(); ++k) out << (k ? "," : "") << net.nodes[m.receivers[k]];
        out << '\n';
    }
    return out.str();
}

/// Kahn's algorithm, smallest node index first. Throws std::runtime_error on a cycle.
inline std::vector<NodeId> topological_order(const Network& net) {
    std::vector<std::size_t> indeg(net.num_nodes(), 0);
    for (const auto& e : net.edges) ++indeg[e.head];
    auto out = net.out_edges();
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId v = 0; v < net.num_nodes(); ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<NodeId> order;
    order.reserve(net.num_nodes());
    while (!ready.empty()) {
        NodeId v = ready.top();
        ready.pop();
        order.push_back(v);
        for (EdgeId e : out[v])
            if (--indeg[net.edges[e].head] == 0) ready.push(net.edges[e].head);
    }
    if (order.size() != net.num_nodes()) throw std::runtime_error("cycle detected");
    return order;
}

/// Nodes reachable from `from` using only edges whose flag in `allowed` is set
/// (all edges when `allowed` is empty).
inline std::vector<bool> reachable_from(const Network& net, NodeId from, const std::vector<bool>& allowed = {}) {
    auto out = net.out_edges();
    std::vector<bool> seen(net.num_nodes(), false);
    std::vector<NodeId> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (EdgeId e : out[v]) {
            if (!allowed.empty() && !allowed[e]) continue;
            NodeId h = net.edges[e].head;
            if (!seen[h]) {
                seen[h] = true;
                stack.push_back(h);
            }
        }
    }
    return seen;
}

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Collects every reason the network is unusable for region computations.
inline ValidationReport validate_network(const Network& net) {
    ValidationReport report;
    bool acyclic = true;
    try {
        topological_order(net);
    } catch (const std::runtime_error&) {
        acyclic = false;
        report.violations.push_back("network contains a directed cycle");
    }
    if (net.messages.empty()) report.violations.push_back("network has no messages");
    for (const auto& m : net.messages) {
        if (m.receivers.empty()) report.violations.push_back(m.name + " has no receivers");
        auto reach = reachable_from(net, m.source);
        for (NodeId r : m.receivers) {
            if (r == m.source) {
                report.violations.push_back(m.name + " is both generated and demanded at " + net.nodes[r] + " (degenerate)");
                continue;
            }
            if (acyclic && !reach[r]) report.violations.push_back(m.name + " unreachable at " + net.nodes[r]);
        }
    }
    for (const auto& e : net.edges)
        if (e.capacity < 1) report.violations.push_back("edge capacity below 1");
    if (net.alphabet_size < 1) report.violations.push_back("alphabet size below 1");
    return report;
}

/// Per-message bound gamma_i: total capacity leaving the source of message i.
/// No achievable rate for message i exceeds it.
inline RationalVector rate_upper_bounds(const Network& net) {
    RationalVector gamma(net.num_messages(), Rational(0));
    for (std::size_t i = 0; i < net.num_messages(); ++i)
        for (const auto& e : net.edges)
            if (e.tail == net.messages[i].source) gamma[i] += e.capacity;
    return gamma;
}

}  // namespace capregion
