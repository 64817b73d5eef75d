#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include "hypermap/geometry.hpp"
#include "hypermap/io.hpp"

using namespace hypermap;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("io_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
    void fill(const std::string& text) {
        std::ofstream out(path);
        out << text;
    }
    std::string slurp() const {
        std::ifstream in(path);
        return std::string(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
    }
};

bool throws_mentioning(const std::function<void()>& fn, const std::string& needle) {
    try {
        fn();
    } catch (const std::exception& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

EmbeddedMap tiny_map() {
    EmbeddedMap map;
    map.params = ModelParams::make(100.0, 5.0, 2.5, 2.0);
    map.ids = {3, 7, 12};
    map.kappa = {map.params.kappa0 * 2.0, map.params.kappa0 * 5.5, map.params.kappa0 * 1.1};
    map.theta = {0.25, 3.999999999, 6.1};
    map.r.resize(3);
    for (int i = 0; i < 3; ++i)
        map.r[static_cast<std::size_t>(i)] =
            kappa_to_radius(map.kappa[static_cast<std::size_t>(i)], map.params);
    map.provenance.assign(3, Provenance::KernelInferred);
    return map;
}

} // namespace

TEST_CASE("edge list parse: comments, blanks, dedupe, self loops") {
    TempFile f("edges1");
    f.fill("# header comment\n\n1 2\n2 1   # trailing comment\n3 3\n4 5\n");
    auto res = parse_edge_list(f.path);
    CHECK(res.topology.node_count() == 5);
    CHECK(res.topology.edge_count() == 2);
    CHECK(res.info.duplicate_edges == 1);
    CHECK(res.info.self_loops == 1);
}

TEST_CASE("edge list parse errors carry line numbers") {
    TempFile f("edges2");
    f.fill("1 2\nx 4\n");
    CHECK(throws_mentioning([&] { parse_edge_list(f.path); }, ":2:"));

    TempFile g("edges3");
    g.fill("1 2\n3 4 5\n");
    CHECK(throws_mentioning([&] { parse_edge_list(g.path); }, ":2:"));

    TempFile h("edges4");
    h.fill("1 -2\n");
    CHECK(throws_mentioning([&] { parse_edge_list(h.path); }, ":1:"));

    CHECK_THROWS(parse_edge_list("io_test_no_such_file"));
}

TEST_CASE("edge list round trip") {
    TempFile f("edges5");
    f.fill("10 20\n20 30\n30 10\n40 10\n");
    auto res = parse_edge_list(f.path);
    TempFile g("edges6");
    write_edge_list(g.path, res.topology, {"generate", "--n 4", 99});
    auto back = parse_edge_list(g.path);
    CHECK(back.topology.node_count() == res.topology.node_count());
    CHECK(back.topology.edge_count() == res.topology.edge_count());
    CHECK(back.topology.ids() == res.topology.ids());
    auto text = g.slurp();
    CHECK(text.find("# seed 99") != std::string::npos);
    CHECK(text.find("generate") != std::string::npos);
}

TEST_CASE("map round trip preserves coordinates and country tags") {
    auto map = tiny_map();
    std::unordered_map<int, std::string> country{{3, "US"}, {7, "DE"}, {12, "JP"}};
    TempFile f("map1");
    write_map(f.path, map, {"embed", "", 7}, &country);
    auto back = read_map(f.path);
    REQUIRE(back.map.size() == 3);
    CHECK(back.map.ids == map.ids);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.map.kappa[i] == doctest::Approx(map.kappa[i]).epsilon(1e-9));
        CHECK(back.map.theta[i] == doctest::Approx(map.theta[i]).epsilon(1e-9));
        CHECK(back.map.r[i] == doctest::Approx(map.r[i]).epsilon(1e-7));
    }
    CHECK(back.map.params.n_model == doctest::Approx(map.params.n_model));
    CHECK(back.map.params.gamma == doctest::Approx(map.params.gamma));
    CHECK(back.map.params.beta == doctest::Approx(map.params.beta));
    CHECK(back.country.at(3) == "US");
    CHECK(back.country.at(12) == "JP");
}

TEST_CASE("map reader validates radius against kappa") {
    auto map = tiny_map();
    TempFile f("map2");
    write_map(f.path, map, {"embed", "", 7}, nullptr);
    auto text = f.slurp();
    // corrupt the radius of the first data row
    auto pos = text.find("\n3 ");
    REQUIRE(pos != std::string::npos);
    auto line_end = text.find('\n', pos + 1);
    std::string line = text.substr(pos + 1, line_end - pos - 1);
    // last column is r; bump it far outside tolerance
    auto last_space = line.rfind(' ');
    line = line.substr(0, last_space) + " 99.0";
    text = text.substr(0, pos + 1) + line + text.substr(line_end);
    f.fill(text);
    CHECK_THROWS(read_map(f.path));
}

TEST_CASE("map reader rejects bad values") {
    TempFile f("map3");
    f.fill("# tool hypermap 0.1.0\n# n_model 100\n# k_bar 5\n# gamma 2.5\n# beta 2\n"
           "# R 10\n# kappa0 1\n1 -2.0 0.5 3.0\n");
    CHECK_THROWS(read_map(f.path));
    TempFile g("map4");
    g.fill("# n_model 100\n1 2.0 0.5 3.0\n");  // incomplete parameter header
    CHECK_THROWS(read_map(g.path));
}

TEST_CASE("geo file reading and validation") {
    TempFile f("geo1");
    f.fill("# comment\n1 40.5 -74.0\n2 -33.9 151.2\n");
    auto geo = read_geo(f.path);
    REQUIRE(geo.size() == 2);
    CHECK(geo.at(1).lat == doctest::Approx(40.5));
    CHECK(geo.at(2).lon == doctest::Approx(151.2));

    TempFile g("geo2");
    g.fill("1 91.0 0.0\n");
    CHECK(throws_mentioning([&] { read_geo(g.path); }, ":1:"));
    TempFile h("geo3");
    h.fill("1 10.0 181.0\n");
    CHECK_THROWS(read_geo(h.path));
}

TEST_CASE("router counts reading") {
    TempFile f("rc1");
    f.fill("5 12\n6 1\n");
    auto rc = read_router_counts(f.path);
    CHECK(rc.at(5) == 12);
    CHECK(rc.at(6) == 1);
    TempFile g("rc2");
    g.fill("5 0\n");
    CHECK_THROWS(read_router_counts(g.path));
}

TEST_CASE("snapshots reading") {
    TempFile a("snap1"), b("snap2");
    a.fill("1\n2\n3\n");
    b.fill("1\n2\n3\n4\n# done\n");
    auto snaps = read_snapshots({a.path, b.path});
    REQUIRE(snaps.size() == 2);
    CHECK(snaps[0] == std::vector<int>{1, 2, 3});
    CHECK(snaps[1] == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("routing report serializes to json") {
    RoutingReport rep;
    rep.success_ratio = 0.91;
    rep.mean_stretch = 1.05;
    rep.mean_shortest_hops = 3.2;
    rep.mean_greedy_hops = 3.4;
    rep.pairs_evaluated = 1000;
    rep.pairs_delivered = 910;
    auto text = routing_report_json(rep, {"route", "--pairs 1000", 5});
    CHECK(text.find("0.91") != std::string::npos);
    CHECK(text.find("success_ratio") != std::string::npos);
    CHECK(text.find("route") != std::string::npos);
    CHECK(text.find("\"seed\": 5") != std::string::npos);
}
