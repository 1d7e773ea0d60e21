#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <geosteer/errors.hpp>
#include <geosteer/rng.hpp>
#include <geosteer/stratigraphy.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>

using namespace geosteer;

namespace {

// Write a throwaway CSV and return its path.
std::string temp_csv(const std::string& name, const std::string& body) {
    const std::string path = "/tmp/geosteer_test_" + name;
    std::ofstream out(path);
    out << body;
    return path;
}

} // namespace

TEST_CASE("realizations are deterministic in (config, seed)") {
    StratigraphyConfig cfg;
    const Realization a = generate_realization(cfg, 1234);
    const Realization b = generate_realization(cfg, 1234);
    CHECK(a.top_depth == b.top_depth);
    CHECK(a.fault_stations == b.fault_stations);
    CHECK(a.fault_throws == b.fault_throws);
    CHECK(a.start_offset == b.start_offset);

    const Realization c = generate_realization(cfg, 1235);
    CHECK(a.top_depth != c.top_depth);
}

TEST_CASE("constant thickness holds at every station") {
    StratigraphyConfig cfg;
    for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
        const Realization r = generate_realization(cfg, seed);
        REQUIRE(r.top_depth.size() == static_cast<std::size_t>(cfg.n_stations) + 1);
        for (int k = 0; k <= cfg.n_stations; ++k)
            CHECK(r.bottom(k) - r.top(k) == cfg.thickness_h);
    }
}

TEST_CASE("fault-free increments are bounded by the slope clamp") {
    StratigraphyConfig cfg;
    cfg.max_faults = 0;
    const Realization r = generate_realization(cfg, 7);
    CHECK(r.fault_stations.empty());
    for (std::size_t k = 0; k + 1 < r.top_depth.size(); ++k)
        CHECK(std::abs(r.top_depth[k + 1] - r.top_depth[k]) <= cfg.slope_clamp + 1e-12);
}

TEST_CASE("fault stations keep the minimum separation") {
    StratigraphyConfig cfg;
    int three_fault_seeds = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Realization r = generate_realization(cfg, seed);
        for (std::size_t f = 1; f < r.fault_stations.size(); ++f)
            CHECK(r.fault_stations[f] - r.fault_stations[f - 1] >= cfg.min_fault_separation);
        if (r.fault_stations.size() == 3) ++three_fault_seeds;
    }
    CHECK(three_fault_seeds > 0); // the 3-fault case was actually exercised
}

TEST_CASE("fault increments carry the throw, modulo one slope step") {
    StratigraphyConfig cfg;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Realization r = generate_realization(cfg, seed);
        for (std::size_t f = 0; f < r.fault_stations.size(); ++f) {
            const int k = r.fault_stations[f];
            const double inc = r.top_depth[static_cast<std::size_t>(k)] -
                               r.top_depth[static_cast<std::size_t>(k) - 1];
            const double throw_part = inc - r.fault_throws[f];
            CHECK(std::abs(r.fault_throws[f]) >= cfg.fault_throw_min);
            CHECK(std::abs(r.fault_throws[f]) <= cfg.fault_throw_max);
            CHECK(std::abs(throw_part) <= cfg.slope_clamp + 1e-12); // residual is the slope
        }
    }
}

TEST_CASE("fault count is uniform over 0..3") {
    StratigraphyConfig cfg;
    std::map<std::size_t, int> counts;
    const int n = 2000;
    for (std::uint64_t seed = 0; seed < n; ++seed)
        counts[generate_realization(cfg, seed).fault_stations.size()]++;
    // Each bucket ~ Binomial(2000, 1/4): sd ≈ 19. Allow 5 sd.
    for (std::size_t k = 0; k <= 3; ++k) CHECK(std::abs(counts[k] - n / 4) < 100);
}

TEST_CASE("start offset lies in the configured range") {
    StratigraphyConfig cfg;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Realization r = generate_realization(cfg, seed);
        CHECK(r.start_offset >= cfg.start_offset_min);
        CHECK(r.start_offset <= cfg.start_offset_max);
    }
}

TEST_CASE("invalid configs are rejected") {
    StratigraphyConfig cfg;
    cfg.n_stations = 0;
    CHECK_THROWS_AS(generate_realization(cfg, 1), config_error);

    cfg = StratigraphyConfig{};
    cfg.min_fault_separation = 200; // 200*(3-1) >= 320
    CHECK_THROWS_AS(generate_realization(cfg, 1), config_error);

    cfg = StratigraphyConfig{};
    cfg.fault_throw_min = 40.0; // inverted range
    CHECK_THROWS_AS(generate_realization(cfg, 1), config_error);
}

TEST_CASE("synthetic log is clipped, layered, and deterministic") {
    const OffsetLog log = synth_offset_log(1);
    REQUIRE(!log.gamma.empty());
    for (double g : log.gamma) {
        CHECK(g >= 0.0);
        CHECK(g <= 1.0);
    }
    // Grid must cover the landing approach with margin.
    CHECK(log.rel_depth.front() <= -250.0);
    CHECK(log.rel_depth.back() >= 270.0);

    // Reservoir baseline (0.2) is well below the shale baseline (0.8): compare
    // window means, which average out the bounded fluctuation.
    double res = 0.0, shale = 0.0;
    int res_n = 0, shale_n = 0;
    for (std::size_t i = 0; i < log.rel_depth.size(); ++i) {
        const double d = log.rel_depth[i];
        if (d >= 5.0 && d <= 15.0) { res += log.gamma[i]; ++res_n; }
        if (d >= -100.0 && d <= -50.0) { shale += log.gamma[i]; ++shale_n; }
    }
    REQUIRE(res_n > 0);
    REQUIRE(shale_n > 0);
    CHECK(res / res_n < shale / shale_n);

    const OffsetLog again = synth_offset_log(1);
    CHECK(log.gamma == again.gamma);
    CHECK(log.rel_depth == again.rel_depth);
}

TEST_CASE("gamma_at interpolates linearly and clamps at the ends") {
    OffsetLog log;
    log.rel_depth = {0.0, 10.0, 20.0};
    log.gamma = {0.2, 0.4, 0.1};

    CHECK(gamma_at(log, 0.0) == 0.2);   // exact node
    CHECK(gamma_at(log, 10.0) == 0.4);
    CHECK(gamma_at(log, 5.0) == doctest::Approx(0.3));   // midpoint
    CHECK(gamma_at(log, 17.5) == doctest::Approx(0.175));
    CHECK(gamma_at(log, -10000.0) == 0.2); // clamp below
    CHECK(gamma_at(log, 10000.0) == 0.1);  // clamp above
}

TEST_CASE("load_offset_log parses plain rows and tolerates a header") {
    const std::string p = temp_csv("ok.csv", "rel_depth_ft,gamma\n0,0.5\n10,0.7\n");
    const OffsetLog log = load_offset_log(p);
    REQUIRE(log.rel_depth.size() == 2);
    CHECK(log.rel_depth[0] == 0.0);
    CHECK(log.gamma[1] == 0.7);
    std::remove(p.c_str());
}

TEST_CASE("load_offset_log handles CRLF and blank lines") {
    const std::string p = temp_csv("crlf.csv", "0,0.5\r\n\r\n10,0.7\r\n");
    const OffsetLog log = load_offset_log(p);
    CHECK(log.rel_depth.size() == 2);
    std::remove(p.c_str());
}

TEST_CASE("load_offset_log rescales out-of-range values on request") {
    const std::string p = temp_csv("rescale.csv", "0,50\n10,150\n20,100\n");
    CHECK_THROWS_AS(load_offset_log(p, false), validation_error);
    const OffsetLog log = load_offset_log(p, true);
    CHECK(log.gamma[0] == doctest::Approx(0.0));
    CHECK(log.gamma[1] == doctest::Approx(1.0));
    CHECK(log.gamma[2] == doctest::Approx(0.5));
    std::remove(p.c_str());
}

TEST_CASE("load_offset_log rejects malformed input") {
    const std::string dup = temp_csv("dup.csv", "0,0.5\n10,0.6\n10,0.7\n");
    CHECK_THROWS_AS(load_offset_log(dup), validation_error);
    std::remove(dup.c_str());

    const std::string empty = temp_csv("empty.csv", "");
    CHECK_THROWS_AS(load_offset_log(empty), validation_error);
    std::remove(empty.c_str());

    const std::string bad = temp_csv("bad.csv", "0,0.5\nnot-a-number,oops\n");
    try {
        load_offset_log(bad);
        FAIL("expected a validation error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos); // line number
    }
    std::remove(bad.c_str());

    CHECK_THROWS_AS(load_offset_log("/nonexistent/nope.csv"), io_error);
}

TEST_CASE("realization CSV export includes fault flags") {
    StratigraphyConfig cfg;
    // find a seed with at least one fault
    Realization r = generate_realization(cfg, 1);
    for (std::uint64_t seed = 1; r.fault_stations.empty(); ++seed)
        r = generate_realization(cfg, seed);
    const std::string p = "/tmp/geosteer_test_real.csv";
    save_realization_csv(r, p);

    std::ifstream in(p);
    std::string header;
    std::getline(in, header);
    CHECK(header == "station,top_tvd_ft,bottom_tvd_ft,is_fault");
    int rows = 0, faults = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++rows;
        if (!line.empty() && line.back() == '1') ++faults;
    }
    CHECK(rows == cfg.n_stations + 1);
    CHECK(faults == static_cast<int>(r.fault_stations.size()));
    std::remove(p.c_str());
}
