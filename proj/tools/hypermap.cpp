#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypermap/embedder.hpp"
#include "hypermap/generator.hpp"
#include "hypermap/geometry.hpp"
#include "hypermap/graph.hpp"
#include "hypermap/io.hpp"
#include "hypermap/params.hpp"
#include "hypermap/rng.hpp"
#include "hypermap/router.hpp"

#include <json.hpp>

namespace hm = hypermap;
using nlohmann::json;

namespace {

std::string join_flags(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (!s.empty()) s += " ";
        s += argv[i];
    }
    return s;
}

hm::PairSpec make_pair_spec(const std::string& pairs) {
    hm::PairSpec spec;
    if (pairs == "all") {
        spec.all_pairs = true;
    } else {
        spec.all_pairs = false;
        spec.sample_size = std::stoull(pairs);
    }
    return spec;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << text << "\n";
    }
}

std::string report_row(const hm::RoutingReport& r) {
    std::ostringstream os;
    os.precision(9);
    os << r.success_ratio << "," << r.mean_stretch << "," << r.mean_shortest_hops << ","
       << r.mean_greedy_hops << "," << r.pairs_evaluated << "," << r.pairs_delivered << ","
       << r.pairs_skipped_unreachable;
    return os.str();
}

struct EmbedFlags {
    double n_model = 0.0;
    double k_bar = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    double alpha_fs = 0.0;
    std::string schedule;
    std::string kernel = "lmh";
    int critical_k = 20;
    int wrapper = 2;
    bool progress = false;
};

hm::EmbedRecipe build_recipe(const hm::Topology& g, const EmbedFlags& f) {
    hm::EmbedRecipe recipe;
    double n_model = f.n_model, k_bar = f.k_bar, gamma = f.gamma, alpha = f.alpha_fs;
    if (n_model <= 0 || k_bar <= 0 || gamma <= 0 || alpha <= 0) {
        // Fill unset parameters from the observed graph.
        auto stats = hm::compute_stats(g);
        if (gamma <= 0) {
            std::vector<int> degrees;
            for (int i = 0; i < static_cast<int>(g.node_count()); ++i)
                degrees.push_back(g.degree(i));
            gamma = hm::estimate_gamma(degrees);
        }
        try {
            auto fs = hm::solve_finite_size(static_cast<double>(stats.n_obs),
                                            stats.k_bar_obs, stats.k_max_obs, gamma);
            if (n_model <= 0) n_model = fs.n_model;
            if (k_bar <= 0) k_bar = fs.k_bar;
            if (alpha <= 0) alpha = fs.alpha_fs;
        } catch (const std::exception&) {
            if (n_model <= 0) n_model = static_cast<double>(stats.n_obs);
            if (k_bar <= 0) k_bar = stats.k_bar_obs;
            if (alpha <= 0) alpha = 1.0;
        }
    }
    if (f.beta <= 1.0)
        throw std::invalid_argument("embed: --beta > 1 is required");
    recipe.params = hm::ModelParams::make(n_model, k_bar, gamma, f.beta);
    if (f.schedule.empty()) {
        recipe.schedule = hm::default_schedule(g, f.critical_k);
    } else {
        std::istringstream ss(f.schedule);
        std::string tok;
        while (std::getline(ss, tok, ','))
            recipe.schedule.thresholds.push_back(std::stoi(tok));
        recipe.schedule.critical_threshold = recipe.schedule.thresholds.back();
        for (int t : recipe.schedule.thresholds)
            if (t >= f.critical_k &&
                (recipe.schedule.critical_threshold < f.critical_k ||
                 t < recipe.schedule.critical_threshold))
                recipe.schedule.critical_threshold = t;
    }
    recipe.options.kernel = f.kernel == "smh" ? hm::KernelKind::SMH : hm::KernelKind::LMH;
    recipe.options.alpha_fs = alpha;
    recipe.options.log_progress = f.progress;
    recipe.use_wrapper2 = f.wrapper == 2;
    return recipe;
}

int run(int argc, char** argv) {
    CLI::App app{"hyperbolic network mapping and greedy routing toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "master seed")->capture_default_str();

    // generate
    auto* gen = app.add_subcommand("generate", "synthesize a network with known coordinates");
    std::string gen_model = "s1", gen_out = "net";
    std::size_t gen_n = 1000;
    double gen_kbar = 6.0, gen_gamma = 2.5, gen_beta = 0.0, gen_temp = 0.0;
    gen->add_option("--model", gen_model, "s1 or h2")->capture_default_str();
    gen->add_option("--n", gen_n, "node count")->capture_default_str();
    gen->add_option("--k-bar", gen_kbar, "target average degree")->capture_default_str();
    gen->add_option("--gamma", gen_gamma, "degree exponent")->capture_default_str();
    gen->add_option("--beta", gen_beta, "clustering parameter (s1)");
    gen->add_option("--temperature", gen_temp, "temperature (h2)");
    gen->add_option("--out", gen_out, "output prefix")->capture_default_str();

    // estimate
    auto* est = app.add_subcommand("estimate", "infer gamma and finite-size parameters");
    std::string est_edges, est_out;
    est->add_option("--edges", est_edges, "edge list file")->required();
    est->add_option("--out", est_out, "output file (default stdout)");

    // embed
    auto* emb = app.add_subcommand("embed", "infer hyperbolic coordinates");
    std::string emb_edges, emb_out = "out.map";
    EmbedFlags ef;
    emb->add_option("--edges", emb_edges, "edge list file")->required();
    emb->add_option("--beta", ef.beta, "clustering parameter")->required();
    emb->add_option("--n-model", ef.n_model, "model size (default: estimated)");
    emb->add_option("--k-bar", ef.k_bar, "model average degree (default: estimated)");
    emb->add_option("--gamma", ef.gamma, "degree exponent (default: estimated)");
    emb->add_option("--alpha-fs", ef.alpha_fs, "finite-size factor (default: estimated)");
    emb->add_option("--schedule", ef.schedule, "comma-separated degree thresholds");
    emb->add_option("--kernel", ef.kernel, "lmh or smh")->capture_default_str();
    emb->add_option("--critical-k", ef.critical_k, "kernel cut-off threshold")
        ->capture_default_str();
    emb->add_option("--wrapper", ef.wrapper, "1 or 2")->capture_default_str();
    emb->add_flag("--progress", ef.progress, "log layer progress to stderr");
    emb->add_option("--out", emb_out, "map output file")->capture_default_str();

    // route
    auto* rt = app.add_subcommand("route", "greedy routing evaluation");
    std::string rt_edges, rt_map, rt_pairs = "10000", rt_out;
    rt->add_option("--edges", rt_edges, "edge list file")->required();
    rt->add_option("--map", rt_map, "map file")->required();
    rt->add_option("--pairs", rt_pairs, "'all' or sample size")->capture_default_str();
    rt->add_option("--out", rt_out, "output file (default stdout)");

    // perturb
    auto* pb = app.add_subcommand("perturb", "robustness sweep with the map held fixed");
    std::string pb_edges, pb_map, pb_kind = "random-links", pb_levels = "0,0.1",
                pb_pairs = "10000", pb_out;
    pb->add_option("--edges", pb_edges, "edge list file")->required();
    pb->add_option("--map", pb_map, "map file")->required();
    pb->add_option("--kind", pb_kind,
                   "random-links, random-nodes, top-hubs, or ranked-links")
        ->capture_default_str();
    pb->add_option("--levels", pb_levels, "comma-separated levels")->capture_default_str();
    pb->add_option("--pairs", pb_pairs, "'all' or sample size")->capture_default_str();
    pb->add_option("--out", pb_out, "CSV output file (default stdout)");

    // grow
    auto* gr = app.add_subcommand("grow", "growth replay with incremental placement");
    std::string gr_edges, gr_pairs = "10000", gr_out;
    std::vector<std::string> gr_snapshots;
    EmbedFlags gf;
    gr->add_option("--edges", gr_edges, "final edge list file")->required();
    gr->add_option("--snapshots", gr_snapshots, "ordered node-membership files")
        ->required()
        ->expected(-1);
    gr->add_option("--beta", gf.beta, "clustering parameter")->required();
    gr->add_option("--gamma", gf.gamma, "degree exponent (default: estimated)");
    gr->add_option("--critical-k", gf.critical_k, "kernel cut-off threshold")
        ->capture_default_str();
    gr->add_option("--pairs", gr_pairs, "'all' or sample size")->capture_default_str();
    gr->add_option("--out", gr_out, "CSV output file (default stdout)");

    // geo-route
    auto* geo = app.add_subcommand("geo-route", "geographic greedy routing baseline");
    std::string geo_edges, geo_file, geo_mode = "spherical", geo_pairs = "10000", geo_out;
    geo->add_option("--edges", geo_edges, "edge list file")->required();
    geo->add_option("--geo", geo_file, "node_id lat lon file")->required();
    geo->add_option("--mode", geo_mode, "spherical or hyperbolized")->capture_default_str();
    geo->add_option("--pairs", geo_pairs, "'all' or sample size")->capture_default_str();
    geo->add_option("--out", geo_out, "output file (default stdout)");

    // betweenness
    auto* bw = app.add_subcommand("betweenness", "path-sampling betweenness");
    std::string bw_edges, bw_map, bw_mode = "shortest", bw_weighting = "uniform",
                bw_counts, bw_pairs = "10000", bw_out;
    bw->add_option("--edges", bw_edges, "edge list file")->required();
    bw->add_option("--map", bw_map, "map file (required for greedy mode)");
    bw->add_option("--mode", bw_mode, "shortest or greedy")->capture_default_str();
    bw->add_option("--weighting", bw_weighting, "uniform or router-weighted")
        ->capture_default_str();
    bw->add_option("--router-counts", bw_counts,
                   "node_id count file (default: ceil(degree/2) proxy)");
    bw->add_option("--pairs", bw_pairs, "'all' or sample size")->capture_default_str();
    bw->add_option("--out", bw_out, "CSV output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    hm::RunHeader header;
    header.seed = seed;
    header.flags = join_flags(argc, argv);

    if (gen->parsed()) {
        header.subcommand = "generate";
        hm::GroundTruthNetwork net;
        if (gen_model == "s1") {
            if (gen_beta <= 1.0)
                throw std::invalid_argument("generate: s1 model needs --beta > 1");
            net = hm::generate_s1(gen_n, gen_kbar, gen_gamma, gen_beta, seed);
            net = hm::s1_to_h2(net);
        } else if (gen_model == "h2") {
            if (!(gen_temp > 0.0 && gen_temp < 1.0))
                throw std::invalid_argument("generate: h2 model needs --temperature in (0,1)");
            net = hm::generate_h2(gen_n, gen_kbar, gen_gamma, gen_temp, seed);
        } else {
            throw std::invalid_argument("generate: unknown model " + gen_model);
        }
        hm::write_edge_list(gen_out + ".edges", net.topology, header);
        hm::EmbeddedMap map;
        map.params = net.params;
        map.ids = net.topology.ids();
        map.kappa = net.kappa;
        map.theta = net.theta;
        map.r = net.radius;
        map.provenance.assign(map.ids.size(), hm::Provenance::KernelInferred);
        if (map.kappa.empty())
            for (double r : map.r)
                map.kappa.push_back(hm::radius_to_kappa(r, map.params));
        hm::write_map(gen_out + ".map", map, header);
        std::cout << "wrote " << gen_out << ".edges and " << gen_out << ".map ("
                  << net.topology.node_count() << " nodes, " << net.topology.edge_count()
                  << " edges)\n";
        return 0;
    }

    if (est->parsed()) {
        header.subcommand = "estimate";
        auto parsed = hm::parse_edge_list(est_edges);
        auto stats = hm::compute_stats(parsed.topology);
        std::vector<int> degrees;
        for (int i = 0; i < static_cast<int>(parsed.topology.node_count()); ++i)
            degrees.push_back(parsed.topology.degree(i));
        double gamma = hm::estimate_gamma(degrees);
        auto fs = hm::solve_finite_size(static_cast<double>(stats.n_obs), stats.k_bar_obs,
                                        stats.k_max_obs, gamma);
        json j;
        j["subcommand"] = header.subcommand;
        j["flags"] = header.flags;
        j["seed"] = seed;
        j["n_obs"] = stats.n_obs;
        j["edge_count"] = stats.edge_count;
        j["k_bar_obs"] = stats.k_bar_obs;
        j["k_max_obs"] = stats.k_max_obs;
        j["mean_clustering"] = stats.mean_clustering;
        j["gamma"] = gamma;
        j["kappa0"] = fs.kappa0;
        j["kappa_c"] = fs.kappa_c;
        j["alpha_fs"] = fs.alpha_fs;
        j["p_zero"] = fs.p_zero;
        j["n_model"] = fs.n_model;
        j["k_bar_model"] = fs.k_bar;
        j["iterations"] = fs.iterations;
        emit(est_out, j.dump(2));
        return 0;
    }

    if (emb->parsed()) {
        header.subcommand = "embed";
        auto parsed = hm::parse_edge_list(emb_edges);
        auto g = parsed.topology;
        auto gc = hm::giant_component(g);
        if (gc.member_indices.size() < g.node_count()) {
            std::vector<int> ids;
            for (int idx : gc.member_indices) ids.push_back(g.id_of(idx));
            std::cerr << "embed: keeping the giant component ("
                      << gc.member_indices.size() << " of " << g.node_count()
                      << " nodes)\n";
            g = hm::induced_subgraph(g, ids);
        }
        auto recipe = build_recipe(g, ef);
        auto map = hm::embed_with_recipe(g, recipe, seed);
        hm::write_map(emb_out, map, header);
        std::cout << "wrote " << emb_out << " (" << map.size() << " nodes)\n";
        return 0;
    }

    if (rt->parsed()) {
        header.subcommand = "route";
        auto g = hm::parse_edge_list(rt_edges).topology;
        auto map = hm::read_map(rt_map).map;
        // route the subgraph covered by both the edge list and the map
        std::unordered_map<int, std::size_t> pos;
        for (std::size_t k = 0; k < map.ids.size(); ++k) pos[map.ids[k]] = k;
        std::vector<int> common;
        for (int id : g.ids())
            if (pos.count(id)) common.push_back(id);
        if (common.size() < 2)
            throw std::invalid_argument("route: map and edge list share fewer than 2 nodes");
        if (common.size() < g.node_count())
            std::cerr << "route: " << g.node_count() - common.size()
                      << " nodes have no map coordinates and are excluded\n";
        hm::Topology sub = common.size() == g.node_count() ? g
                                                           : hm::induced_subgraph(g, common);
        hm::EmbeddedMap aligned;
        aligned.params = map.params;
        aligned.ids = sub.ids();
        for (int id : aligned.ids) {
            auto it = pos.find(id);
            aligned.kappa.push_back(map.kappa[it->second]);
            aligned.theta.push_back(map.theta[it->second]);
            aligned.r.push_back(map.r[it->second]);
            aligned.provenance.push_back(map.provenance[it->second]);
        }
        auto report = hm::evaluate_routing(sub, aligned, make_pair_spec(rt_pairs), seed);
        emit(rt_out, hm::routing_report_json(report, header));
        return 0;
    }

    if (pb->parsed()) {
        header.subcommand = "perturb";
        auto g = hm::parse_edge_list(pb_edges).topology;
        auto mapfile = hm::read_map(pb_map);
        hm::PerturbationKind kind;
        if (pb_kind == "random-links") kind = hm::PerturbationKind::RandomLinks;
        else if (pb_kind == "random-nodes") kind = hm::PerturbationKind::RandomNodes;
        else if (pb_kind == "top-hubs") kind = hm::PerturbationKind::TopHubs;
        else if (pb_kind == "ranked-links") kind = hm::PerturbationKind::RankedLinks;
        else throw std::invalid_argument("perturb: unknown kind " + pb_kind);
        std::vector<double> levels;
        std::istringstream ss(pb_levels);
        std::string tok;
        while (std::getline(ss, tok, ',')) levels.push_back(std::stod(tok));
        auto sweep = hm::robustness_sweep(g, mapfile.map, kind, levels,
                                          make_pair_spec(pb_pairs), seed);
        std::ostringstream csv;
        csv << "# hypermap " << hm::kToolVersion << " perturb seed=" << seed << " flags="
            << header.flags << "\n";
        csv << "level,giant_fraction,success_ratio,mean_stretch,mean_shortest_hops,"
               "mean_greedy_hops,pairs_evaluated,pairs_delivered,pairs_skipped_unreachable\n";
        csv.precision(9);
        for (const auto& p : sweep)
            csv << p.level << "," << p.giant_fraction << "," << report_row(p.report) << "\n";
        emit(pb_out, csv.str());
        return 0;
    }

    if (gr->parsed()) {
        header.subcommand = "grow";
        auto g = hm::parse_edge_list(gr_edges).topology;
        auto snaps = hm::read_snapshots(gr_snapshots);
        auto g0 = hm::induced_subgraph(g, snaps.front());
        auto recipe = build_recipe(g0, gf);
        auto result = hm::growth_replay(snaps, g, recipe, make_pair_spec(gr_pairs), seed);
        std::ostringstream csv;
        csv << "# hypermap " << hm::kToolVersion << " grow seed=" << seed << " flags="
            << header.flags << "\n";
        csv << "step,node_count,new_nodes,success_ratio,mean_stretch,mean_shortest_hops,"
               "mean_greedy_hops,pairs_evaluated,pairs_delivered,pairs_skipped_unreachable\n";
        csv.precision(9);
        for (std::size_t t = 0; t < result.steps.size(); ++t)
            csv << t << "," << result.steps[t].node_count << "," << result.steps[t].new_nodes
                << "," << report_row(result.steps[t].report) << "\n";
        emit(gr_out, csv.str());
        return 0;
    }

    if (geo->parsed()) {
        header.subcommand = "geo-route";
        auto g = hm::parse_edge_list(geo_edges).topology;
        auto coords = hm::read_geo(geo_file);
        hm::GeoMode mode;
        if (geo_mode == "spherical") mode = hm::GeoMode::Spherical;
        else if (geo_mode == "hyperbolized") mode = hm::GeoMode::Hyperbolized;
        else throw std::invalid_argument("geo-route: unknown mode " + geo_mode);
        auto report =
            hm::geographic_route_eval(g, coords, mode, make_pair_spec(geo_pairs), seed);
        emit(geo_out, hm::routing_report_json(report, header));
        return 0;
    }

    if (bw->parsed()) {
        header.subcommand = "betweenness";
        auto g = hm::parse_edge_list(bw_edges).topology;
        hm::EmbeddedMap map;
        hm::BetweennessMode mode;
        if (bw_mode == "shortest") mode = hm::BetweennessMode::Shortest;
        else if (bw_mode == "greedy") mode = hm::BetweennessMode::Greedy;
        else throw std::invalid_argument("betweenness: unknown mode " + bw_mode);
        if (mode == hm::BetweennessMode::Greedy) {
            if (bw_map.empty())
                throw std::invalid_argument("betweenness: greedy mode needs --map");
            auto full = hm::read_map(bw_map).map;
            // restrict to the subgraph covered by both inputs, as in route
            std::unordered_map<int, std::size_t> pos;
            for (std::size_t k = 0; k < full.ids.size(); ++k) pos[full.ids[k]] = k;
            std::vector<int> common;
            for (int id : g.ids())
                if (pos.count(id)) common.push_back(id);
            if (common.size() < 2)
                throw std::invalid_argument(
                    "betweenness: map and edge list share fewer than 2 nodes");
            if (common.size() < g.node_count()) {
                std::cerr << "betweenness: " << g.node_count() - common.size()
                          << " nodes have no map coordinates and are excluded\n";
                g = hm::induced_subgraph(g, common);
            }
            map.params = full.params;
            map.ids = g.ids();
            for (int id : map.ids) {
                auto it = pos.find(id);
                map.kappa.push_back(full.kappa[it->second]);
                map.theta.push_back(full.theta[it->second]);
                map.r.push_back(full.r[it->second]);
                map.provenance.push_back(full.provenance[it->second]);
            }
        }
        hm::BetweennessWeighting weighting;
        if (bw_weighting == "uniform") weighting = hm::BetweennessWeighting::Uniform;
        else if (bw_weighting == "router-weighted")
            weighting = hm::BetweennessWeighting::RouterWeighted;
        else throw std::invalid_argument("betweenness: unknown weighting " + bw_weighting);
        std::unordered_map<int, int> counts;
        bool proxy = false;
        if (weighting == hm::BetweennessWeighting::RouterWeighted) {
            if (!bw_counts.empty()) {
                counts = hm::read_router_counts(bw_counts);
            } else {
                // proxy when no census is available: roughly degree-proportional
                proxy = true;
                for (int i = 0; i < static_cast<int>(g.node_count()); ++i)
                    counts[g.id_of(i)] = (g.degree(i) + 1) / 2;
            }
        }
        auto table = hm::betweenness(g, map, mode, weighting, make_pair_spec(bw_pairs),
                                     counts.empty() ? nullptr : &counts, seed);
        std::ostringstream csv;
        csv << "# hypermap " << hm::kToolVersion << " betweenness seed=" << seed
            << " flags=" << header.flags;
        if (proxy) csv << " router_counts=degree-proxy";
        csv << "\n";
        csv << "node_id,betweenness\n";
        csv.precision(9);
        for (std::size_t i = 0; i < table.value.size(); ++i)
            csv << g.id_of(static_cast<int>(i)) << "," << table.value[i] << "\n";
        emit(bw_out, csv.str());
        return 0;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
