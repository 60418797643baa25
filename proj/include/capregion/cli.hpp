#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "plot.hpp"
#include "routing.hpp"
#include "semilinear.hpp"

namespace capregion::cli {

/// Failure of the input or the computation (exit status 1).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad flags or flag values (exit status 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string engine = "routing";  // routing | semilinear | both
    std::string input;
    std::string method = "exact";
    std::string omega = "1/10";
    std::uint32_t field = 2;
    std::string steiner_oracle = "exact";
    std::size_t rays = 64;
    std::string out;
    std::string q;
    std::string rate;
    std::uint64_t seed = 1;
    std::size_t count = 25;
    std::size_t max_nodes = 8;
    std::size_t max_edges = 12;
    std::int64_t max_capacity = 3;
    std::size_t messages = 2;
};

inline Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    Network net;
    try {
        net = parse_network(buf.str());
    } catch (const ParseError& e) {
        throw DomainError(path + ": " + e.what());
    }
    auto report = validate_network(net);
    if (!report.ok()) {
        std::string msg = path + ": invalid network";
        for (const auto& v : report.violations) msg += "; " + v;
        throw DomainError(msg);
    }
    return net;
}

namespace detail {

inline Rational omega_of(const RunConfig& cfg) {
    Rational w;
    try {
        w = parse_rational(cfg.omega);
    } catch (const std::exception&) {
        throw UsageError("--omega: not a number: " + cfg.omega);
    }
    if (w <= 0) throw UsageError("--omega must be positive");
    return w;
}

inline PrimeField field_of(const RunConfig& cfg) {
    if (!is_prime(cfg.field)) throw UsageError("--field must be prime, got " + std::to_string(cfg.field));
    return PrimeField(cfg.field);
}

inline RationalVector list_of(const std::string& flag, const std::string& text, std::size_t dim) {
    RationalVector v;
    try {
        v = parse_rational_list(text);
    } catch (const std::exception&) {
        throw UsageError(flag + ": malformed list '" + text + "'");
    }
    if (v.size() != dim)
        throw UsageError(flag + ": expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
    return v;
}

/// The engine-specific pieces a command needs, built once.
struct Engine {
    std::string name;
    PackingPolytope polytope;
    RayOracle exact;
    RayOracle approximate;
    std::function<std::string(std::size_t column)> describe;
};

inline Engine routing_engine(const Network& net, const RunConfig& cfg) {
    GKConfig gk;
    gk.omega = omega_of(cfg);
    if (cfg.steiner_oracle == "sp") gk.steiner_oracle = SteinerOracle::ShortestPaths;
    else if (cfg.steiner_oracle != "exact") throw UsageError("--steiner-oracle must be exact or sp");
    auto spec = std::make_shared<RoutingPolytopeSpec>(build_routing_polytope(net));
    Engine e;
    e.name = "routing";
    e.polytope = spec->polytope;
    e.exact = [spec](const RayQuery& q) { return ray_oracle_exact(*spec, q); };
    e.approximate = [spec, gk](const RayQuery& q) { return ray_oracle_gk(*spec, q, gk); };
    e.describe = [spec](std::size_t c) {
        const auto& t = spec->trees[c];
        std::string s = spec->network.messages[t.message].name + " tree";
        for (EdgeId x : t.edges) s += " " + std::to_string(x);
        return s;
    };
    return e;
}

inline Engine semilinear_engine(const Network& net, const RunConfig& cfg) {
    SemiGKConfig gk;
    gk.omega = omega_of(cfg);
    PrimeField field = field_of(cfg);
    if (field.order() < static_cast<std::uint64_t>(net.alphabet_size))
        throw UsageError("--field " + std::to_string(field.order()) + " is smaller than the alphabet size");
    auto spec = std::make_shared<SemiPolytopeSpec>(build_semi_polytope(net, field));
    Engine e;
    e.name = "semilinear";
    e.polytope = spec->polytope;
    e.exact = [spec](const RayQuery& q) { return semi_ray_oracle_exact(*spec, q); };
    e.approximate = [spec, gk](const RayQuery& q) { return semi_ray_oracle_gk(*spec, q, gk); };
    e.describe = [spec](std::size_t c) {
        const auto& s = spec->solutions[c];
        std::string d = "weight " + s.weight.str() + " edges";
        for (EdgeId x : s.active_edges) d += " " + std::to_string(x);
        return d;
    };
    return e;
}

inline Engine engine_for(const std::string& which, const Network& net, const RunConfig& cfg) {
    if (which == "routing") return routing_engine(net, cfg);
    if (which == "semilinear") return semilinear_engine(net, cfg);
    throw UsageError("engine must be routing or semilinear");
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write " + path);
    out << text;
}

inline void cmd_validate(const RunConfig& cfg, std::ostream& out) {
    Network net = load_network(cfg.input);
    out << "ok: " << net.num_nodes() << " nodes, " << net.num_edges() << " edges, " << net.num_messages()
        << " messages\n";
}

inline void cmd_trees(const RunConfig& cfg, std::ostream& out) {
    Network net = load_network(cfg.input);
    for (std::size_t i = 0; i < net.num_messages(); ++i) {
        auto trees = enumerate_minimal_steiner_trees(net, i);
        out << net.messages[i].name << ": " << trees.size() << " minimal Steiner tree" << (trees.size() == 1 ? "" : "s")
            << '\n';
        for (const auto& t : trees) {
            out << " ";
            for (EdgeId e : t.edges)
                out << ' ' << net.nodes[net.edges[e].tail] << "->" << net.nodes[net.edges[e].head] << '#' << e;
            out << '\n';
        }
    }
}

inline void cmd_weights(const RunConfig& cfg, std::ostream& out) {
    PrimeField field = field_of(cfg);
    Network net = load_network(cfg.input);
    if (field.order() < static_cast<std::uint64_t>(net.alphabet_size))
        throw UsageError("--field " + std::to_string(field.order()) + " is smaller than the alphabet size");
    LinearCodeCatalog catalog(net, field);
    for (const auto& w : catalog.weight_vectors()) {
        out << w.str();
        if (!w.is_zero()) out << "  minimal solutions: " << catalog.minimal_solutions(w).size();
        out << '\n';
    }
}

inline void print_probe(std::ostream& out, const RayProbe& p) {
    out << "probe " << to_string(p.direction) << " lambda " << p.lambda.str();
    if (p.upper) out << " upper " << p.upper->str();
    out << '\n';
}

inline void cmd_region(const RunConfig& cfg, std::ostream& out) {
    Network net = load_network(cfg.input);
    Engine eng = engine_for(cfg.engine, net, cfg);
    const std::size_t dim = eng.polytope.dimension;
    if (cfg.method == "exact") {
        out << serialize_region(exact_region(eng.polytope));
    } else if (cfg.method == "vertices") {
        try {
            out << serialize_region(packing_region_via_vertices(eng.polytope));
        } catch (const InstanceTooLarge& e) {
            throw DomainError(e.what());
        }
    } else if (cfg.method == "rays" || cfg.method == "gk") {
        if (dim != 2) throw UsageError("--method " + cfg.method + " needs exactly two messages");
        RayReconstructionConfig rc;
        rc.exact_oracle = cfg.method == "rays";
        rc.cloud_rays = cfg.rays;
        auto rec = reconstruct_region_rays_2d(rc.exact_oracle ? eng.exact : eng.approximate, rc);
        if (!rec.certified) {
            for (const auto& p : rec.cloud) print_probe(out, p);
            out << "# sketch: hull of the probe cloud, not a certified region\n";
        }
        out << serialize_region(rec.region);
    } else {
        throw UsageError("--method must be exact, vertices, rays or gk");
    }
}

inline void cmd_ray(const RunConfig& cfg, std::ostream& out) {
    Network net = load_network(cfg.input);
    Engine eng = engine_for(cfg.engine, net, cfg);
    RationalVector dir = list_of("--q", cfg.q, eng.polytope.dimension);
    std::optional<RayQuery> q;
    try {
        q.emplace(dir);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--q: ") + e.what());
    }
    RayAnswer a;
    if (cfg.method == "exact") a = eng.exact(*q);
    else if (cfg.method == "gk") a = eng.approximate(*q);
    else throw UsageError("ray supports --method exact or gk");
    out << "lambda = " << a.lambda.str() << '\n';
    out << "point = " << to_string(a.point(*q)) << '\n';
    if (a.bracket) out << "bracket = [" << a.bracket->first.str() << ", " << a.bracket->second.str() << "]\n";
    if (a.certified_upper) out << "certified upper = " << a.certified_upper->str() << '\n';
    for (std::size_t c = 0; c < a.packing.size(); ++c)
        if (a.packing[c] != 0) out << "x " << a.packing[c].str() << "  " << eng.describe(c) << '\n';
}

inline void cmd_member(const RunConfig& cfg, std::ostream& out) {
    Network net = load_network(cfg.input);
    Engine eng = engine_for(cfg.engine, net, cfg);
    RationalVector r = list_of("--rate", cfg.rate, eng.polytope.dimension);
    bool member = std::all_of(r.begin(), r.end(), [](const Rational& v) { return v >= 0; });
    if (member && std::any_of(r.begin(), r.end(), [](const Rational& v) { return v != 0; }))
        member = eng.exact(RayQuery(r)).lambda >= 1;
    out << (member ? "yes" : "no") << '\n';
}

inline void cmd_plot(const RunConfig& cfg, std::ostream& out) {
    if (cfg.out.empty()) throw UsageError("plot needs --out FILE.svg or FILE.csv");
    const std::string ext = std::filesystem::path(cfg.out).extension().string();
    if (ext != ".svg" && ext != ".csv") throw UsageError("--out must end in .svg or .csv");
    if (cfg.method != "exact" && cfg.method != "gk") throw UsageError("plot supports --method exact or gk");
    if (cfg.rays < 2) throw UsageError("--rays must be at least 2");
    Network net = load_network(cfg.input);
    if (net.num_messages() != 2) throw DomainError("plots need exactly two messages");

    std::vector<std::string> engines;
    if (cfg.engine == "both") engines = {"routing", "semilinear"};
    else engines = {cfg.engine};
    std::vector<PlotSeries> series;
    for (const auto& name : engines) {
        Engine eng = engine_for(name, net, cfg);
        series.push_back(sweep(name + "-" + cfg.method, cfg.method == "exact" ? eng.exact : eng.approximate, cfg.rays));
    }
    if (ext == ".csv") {
        write_file(cfg.out, plot_csv(series));
    } else {
        auto gamma = rate_upper_bounds(net);
        write_file(cfg.out, plot_svg(series, *std::max_element(gamma.begin(), gamma.end())));
    }
    out << "wrote " << cfg.out << '\n';
}

inline void cmd_corpus(const RunConfig& cfg, std::ostream& out) {
    if (cfg.out.empty()) throw UsageError("corpus needs --out DIR");
    CorpusSpec spec;
    spec.seed = cfg.seed;
    spec.nodes = {std::min<std::size_t>(4, cfg.max_nodes), cfg.max_nodes};
    spec.edges = {std::min<std::size_t>(4, cfg.max_edges), cfg.max_edges};
    spec.capacity = {1, cfg.max_capacity};
    spec.messages = cfg.messages;
    std::vector<Network> nets;
    try {
        nets = gen_corpus(spec, cfg.count);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    } catch (const std::runtime_error& e) {
        throw DomainError(e.what());
    }
    std::error_code ec;
    std::filesystem::create_directories(cfg.out, ec);
    if (ec) throw DomainError("cannot create " + cfg.out);
    for (std::size_t k = 0; k < nets.size(); ++k) {
        std::ostringstream name;
        name << "net" << std::setw(3) << std::setfill('0') << k << ".net";
        auto path = (std::filesystem::path(cfg.out) / name.str()).string();
        write_file(path, serialize_network(nets[k]));
        out << path << '\n';
    }
}

}  // namespace detail

/// Runs one command. Exit status: 0 success, 1 domain error, 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Capacity regions of multicast networks under routing and scalar-linear coding", "capregion"};
    app.require_subcommand(1);

    auto add_input = [&](CLI::App* sub) { sub->add_option("network", cfg.input, "network file")->required(); };
    auto add_engine = [&](CLI::App* sub, bool both) {
        auto* opt = sub->add_option("engine", cfg.engine, both ? "routing, semilinear or both" : "routing or semilinear")
                        ->required();
        opt->check(both ? CLI::IsMember({"routing", "semilinear", "both"}) : CLI::IsMember({"routing", "semilinear"}));
    };
    auto add_engine_flags = [&](CLI::App* sub) {
        sub->add_option("--omega", cfg.omega, "approximation slack for gk (rational)");
        sub->add_option("--field", cfg.field, "prime field order for semilinear");
        sub->add_option("--steiner-oracle", cfg.steiner_oracle, "exact or sp")->check(CLI::IsMember({"exact", "sp"}));
    };

    auto* validate = app.add_subcommand("validate", "parse and validate a network");
    add_input(validate);

    auto* trees = app.add_subcommand("trees", "list minimal Steiner trees per message");
    add_input(trees);

    auto* weights = app.add_subcommand("weights", "list scalar-linearly solvable weight vectors");
    weights->add_option("--field", cfg.field, "prime field order");
    add_input(weights);

    auto* region = app.add_subcommand("region", "compute a capacity region");
    add_engine(region, false);
    add_input(region);
    region->add_option("--method", cfg.method, "exact, vertices, rays or gk");
    region->add_option("--rays", cfg.rays, "rays for the gk point cloud");
    add_engine_flags(region);

    auto* ray = app.add_subcommand("ray", "boundary intersection along a ray");
    add_engine(ray, false);
    add_input(ray);
    ray->add_option("--q", cfg.q, "comma-separated direction")->required();
    ray->add_option("--method", cfg.method, "exact or gk");
    add_engine_flags(ray);

    auto* member = app.add_subcommand("member", "is a rate vector achievable");
    add_engine(member, false);
    add_input(member);
    member->add_option("--rate", cfg.rate, "comma-separated rate vector")->required();
    add_engine_flags(member);

    auto* plot = app.add_subcommand("plot", "boundary curves as SVG or CSV");
    add_engine(plot, true);
    add_input(plot);
    plot->add_option("--rays", cfg.rays, "number of evenly spread rays");
    plot->add_option("--out", cfg.out, "output .svg or .csv")->required();
    plot->add_option("--method", cfg.method, "exact or gk");
    add_engine_flags(plot);

    auto* corpus = app.add_subcommand("corpus", "write a seeded random corpus of networks");
    corpus->add_option("--seed", cfg.seed, "random seed");
    corpus->add_option("--count", cfg.count, "number of networks");
    corpus->add_option("--out", cfg.out, "output directory")->required();
    corpus->add_option("--max-nodes", cfg.max_nodes, "largest node count");
    corpus->add_option("--max-edges", cfg.max_edges, "largest edge count");
    corpus->add_option("--max-capacity", cfg.max_capacity, "largest edge capacity");
    corpus->add_option("--messages", cfg.messages, "messages per network (1 or 2)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "capregion: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*validate) detail::cmd_validate(cfg, out);
        else if (*trees) detail::cmd_trees(cfg, out);
        else if (*weights) detail::cmd_weights(cfg, out);
        else if (*region) detail::cmd_region(cfg, out);
        else if (*ray) detail::cmd_ray(cfg, out);
        else if (*member) detail::cmd_member(cfg, out);
        else if (*plot) detail::cmd_plot(cfg, out);
        else if (*corpus) detail::cmd_corpus(cfg, out);
    } catch (const UsageError& e) {
        err << "capregion: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "capregion: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace capregion::cli
