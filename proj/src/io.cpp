#include "hypermap/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hypermap {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

void write_header(std::ofstream& out, const RunHeader& h) {
    out << "# tool hypermap " << kToolVersion << "\n";
    out << "# subcommand " << h.subcommand << "\n";
    if (!h.flags.empty()) out << "# flags " << h.flags << "\n";
    out << "# seed " << h.seed << "\n";
}

} // namespace

EdgeListResult parse_edge_list(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::pair<int, int>> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        int u, v;
        if (!(ls >> u >> v)) fail(path, lineno, "expected two node ids");
        std::string extra;
        if (ls >> extra) fail(path, lineno, "trailing token '" + extra + "'");
        if (u < 0 || v < 0) fail(path, lineno, "negative node id");
        edges.emplace_back(u, v);
    }
    EdgeListResult res;
    res.topology = Topology::from_edges(edges, &res.info);
    return res;
}

void write_edge_list(const std::string& path, const Topology& g, const RunHeader& header) {
    auto out = open_out(path);
    write_header(out, header);
    for (auto [a, b] : g.edge_list())
        out << g.id_of(a) << " " << g.id_of(b) << "\n";
}

void write_map(const std::string& path, const EmbeddedMap& map, const RunHeader& header,
               const std::unordered_map<int, std::string>* country) {
    auto out = open_out(path);
    write_header(out, header);
    out.precision(17);  // params must survive the round trip exactly
    out << "# n_model " << map.params.n_model << "\n";
    out << "# k_bar " << map.params.k_bar << "\n";
    out << "# gamma " << map.params.gamma << "\n";
    out << "# beta " << map.params.beta << "\n";
    out << "# R " << map.params.disc_radius << "\n";
    out << "# kappa0 " << map.params.kappa0 << "\n";
    char buf[160];
    for (std::size_t i = 0; i < map.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%d %.9f %.9f %.9f", map.ids[i], map.kappa[i],
                      map.theta[i], map.r[i]);
        out << buf;
        if (country) {
            auto it = country->find(map.ids[i]);
            if (it != country->end()) out << " " << it->second;
        }
        out << "\n";
    }
}

MapFile read_map(const std::string& path) {
    auto in = open_in(path);
    MapFile file;
    double n_model = 0, k_bar = 0, gamma = 0, beta = 0;
    bool have_params = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            ls >> key;
            if (key == "n_model") ls >> n_model;
            else if (key == "k_bar") ls >> k_bar;
            else if (key == "gamma") ls >> gamma;
            else if (key == "beta") ls >> beta;
            continue;
        }
        if (!have_params) {
            if (!(n_model > 0 && k_bar > 0 && gamma > 2 && beta > 1))
                fail(path, lineno, "map data before a complete parameter header");
            file.map.params = ModelParams::make(n_model, k_bar, gamma, beta);
            have_params = true;
        }
        std::istringstream ls(line);
        int id;
        double kappa, theta, r;
        if (!(ls >> id >> kappa >> theta >> r))
            fail(path, lineno, "expected 'node_id kappa theta r [country]'");
        std::string country;
        ls >> country;
        if (kappa <= 0) fail(path, lineno, "kappa must be positive");
        if (theta < 0 || theta >= kTwoPi) fail(path, lineno, "theta outside [0, 2*pi)");
        double expect = kappa_to_radius(kappa, file.map.params);
        if (std::fabs(expect - r) > 1e-6)
            fail(path, lineno, "radial coordinate inconsistent with kappa");
        file.map.ids.push_back(id);
        file.map.kappa.push_back(kappa);
        file.map.theta.push_back(theta);
        file.map.r.push_back(r);
        file.map.provenance.push_back(Provenance::KernelInferred);
        if (!country.empty()) file.country[id] = country;
    }
    if (!have_params) throw std::runtime_error(path + ": no map records found");
    return file;
}

std::unordered_map<int, GeoCoordinate> read_geo(const std::string& path) {
    auto in = open_in(path);
    std::unordered_map<int, GeoCoordinate> geo;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int id;
        double lat, lon;
        if (!(ls >> id >> lat >> lon)) fail(path, lineno, "expected 'node_id lat lon'");
        if (lat < -90 || lat > 90 || lon < -180 || lon > 180)
            fail(path, lineno, "lat/lon out of range");
        geo[id] = GeoCoordinate{lat, lon};
    }
    return geo;
}

std::unordered_map<int, int> read_router_counts(const std::string& path) {
    auto in = open_in(path);
    std::unordered_map<int, int> counts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int id, c;
        if (!(ls >> id >> c)) fail(path, lineno, "expected 'node_id count'");
        if (c < 1) fail(path, lineno, "router count must be >= 1");
        counts[id] = c;
    }
    return counts;
}

std::vector<std::vector<int>> read_snapshots(const std::vector<std::string>& paths) {
    std::vector<std::vector<int>> snaps;
    for (const auto& path : paths) {
        auto in = open_in(path);
        std::vector<int> ids;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            int id;
            if (!(ls >> id)) fail(path, lineno, "expected a node id");
            ids.push_back(id);
        }
        snaps.push_back(std::move(ids));
    }
    return snaps;
}

std::string routing_report_json(const RoutingReport& report, const RunHeader& header) {
    nlohmann::json j;
    j["tool"] = std::string("hypermap ") + kToolVersion;
    j["subcommand"] = header.subcommand;
    j["flags"] = header.flags;
    j["seed"] = header.seed;
    j["success_ratio"] = report.success_ratio;
    j["mean_stretch"] = report.mean_stretch;
    j["mean_shortest_hops"] = report.mean_shortest_hops;
    j["mean_greedy_hops"] = report.mean_greedy_hops;
    j["pairs_evaluated"] = report.pairs_evaluated;
    j["pairs_delivered"] = report.pairs_delivered;
    j["pairs_skipped_unreachable"] = report.pairs_skipped_unreachable;
    return j.dump(2);
}

} // namespace hypermap
