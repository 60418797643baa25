#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "network.hpp"

namespace capregion {

/// Parameters of a seeded random corpus of acyclic networks. Ranges are inclusive.
struct CorpusSpec {
    std::pair<std::size_t, std::size_t> nodes{4, 8};
    std::pair<std::size_t, std::size_t> edges{4, 12};
    std::size_t messages = 2;
    std::pair<std::int64_t, std::int64_t> capacity{1, 3};
    std::pair<std::size_t, std::size_t> receivers{1, 2};
    std::uint64_t seed = 1;
    std::size_t max_attempts = 1000;  // per network

    void check() const {
        if (nodes.first < 1 || nodes.first > nodes.second) throw std::invalid_argument("bad node range");
        if (edges.first > edges.second) throw std::invalid_argument("bad edge range");
        if (messages < 1 || messages > 2) throw std::invalid_argument("corpus networks carry one or two messages");
        if (capacity.first < 1 || capacity.first > capacity.second) throw std::invalid_argument("bad capacity range");
        if (receivers.first < 1 || receivers.first > receivers.second) throw std::invalid_argument("bad receiver range");
    }
};

/// Random DAGs: edges always run from a lower to a higher node index, so every
/// draw is acyclic; draws failing validation are discarded and redrawn.
class CorpusGenerator {
  public:
    explicit CorpusGenerator(CorpusSpec spec) : spec_(std::move(spec)), rng_(spec_.seed) { spec_.check(); }

    Network next() {
        for (std::size_t attempt = 0; attempt < spec_.max_attempts; ++attempt) {
            Network net = draw();
            if (validate_network(net).ok()) return net;
        }
        throw std::runtime_error("corpus spec unsatisfiable: no valid network after " +
                                 std::to_string(spec_.max_attempts) + " attempts");
    }

  private:
    std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

    Network draw() {
        Network net;
        const std::size_t n = pick(spec_.nodes.first, spec_.nodes.second);
        for (std::size_t v = 0; v < n; ++v) net.nodes.push_back("n" + std::to_string(v));
        if (n >= 2) {
            const std::size_t m = pick(spec_.edges.first, spec_.edges.second);
            for (std::size_t k = 0; k < m; ++k) {
                NodeId a = pick(0, n - 1), b = pick(0, n - 1);
                while (a == b) b = pick(0, n - 1);
                if (a > b) std::swap(a, b);
                auto cap = static_cast<std::int64_t>(pick(static_cast<std::size_t>(spec_.capacity.first),
                                                          static_cast<std::size_t>(spec_.capacity.second)));
                net.edges.push_back({a, b, cap});
            }
        }
        for (std::size_t i = 0; i < spec_.messages; ++i) {
            Message msg;
            msg.name = "m" + std::to_string(i + 1);
            msg.source = pick(0, n - 1);
            std::set<NodeId> rs;
            const std::size_t want = pick(spec_.receivers.first, spec_.receivers.second);
            for (std::size_t r = 0; r < want; ++r) rs.insert(pick(0, n - 1));
            msg.receivers.assign(rs.begin(), rs.end());
            net.messages.push_back(std::move(msg));
        }
        return net;
    }

    CorpusSpec spec_;
    std::mt19937_64 rng_;
};

inline std::vector<Network> gen_corpus(const CorpusSpec& spec, std::size_t count) {
    CorpusGenerator gen(spec);
    std::vector<Network> out;
    for (std::size_t k = 0; k < count; ++k) out.push_back(gen.next());
    return out;
}

}  // namespace capregion
