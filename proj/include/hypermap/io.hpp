#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypermap/embedder.hpp"
#include "hypermap/geometry.hpp"
#include "hypermap/graph.hpp"
#include "hypermap/router.hpp"

namespace hypermap {

inline constexpr const char* kToolVersion = "0.1.0";

// Reproducibility header written at the top of every output file.
struct RunHeader {
    std::string subcommand;
    std::string flags;
    std::uint64_t seed = 0;
};

struct EdgeListResult {
    Topology topology;
    Topology::BuildInfo info;
};

// Lines "u v"; '#' comments and blank lines ignored; dedupe + self-loop
// drop with counts. Malformed tokens raise with the line number.
EdgeListResult parse_edge_list(const std::string& path);

void write_edge_list(const std::string& path, const Topology& g, const RunHeader& header);

// Map file: "# key value" header lines followed by
// "node_id kappa theta r [country]", theta in radians at 9 decimals.
void write_map(const std::string& path, const EmbeddedMap& map, const RunHeader& header,
               const std::unordered_map<int, std::string>* country = nullptr);

struct MapFile {
    EmbeddedMap map;
    std::unordered_map<int, std::string> country;
};

MapFile read_map(const std::string& path);

std::unordered_map<int, GeoCoordinate> read_geo(const std::string& path);
std::unordered_map<int, int> read_router_counts(const std::string& path);
// One file per snapshot, one node id per line; each must be a subset of the
// final topology's node set (checked by the caller against its topology).
std::vector<std::vector<int>> read_snapshots(const std::vector<std::string>& paths);

std::string routing_report_json(const RoutingReport& report, const RunHeader& header);

} // namespace hypermap
