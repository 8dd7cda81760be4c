#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "percolab/percolation.hpp"

using namespace percolab;

namespace {

template <typename F>
void for_each_canonical_edge(int d, F&& f) {
    for (VertexId v = 0; v < (1ull << d); ++v)
        for (int i = 0; i < d; ++i)
            if (((v >> i) & 1ull) == 0) f(EdgeId{v, i});
}

} // namespace

TEST_SUITE("percolation") {

TEST_CASE("make_params validates its inputs") {
    CHECK_THROWS_AS(make_params(0, 2.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_params(64, 2.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_params(8, -0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_params(8, 8.5, 1), std::invalid_argument); // p > 1
    auto p = make_params(16, 2.0, 9);
    CHECK(p.d == 16);
    CHECK(p.p == doctest::Approx(0.125));
    CHECK(p.seed == 9);
}

TEST_CASE("edge ids are canonical and index injectively") {
    CHECK(EdgeId{0, 0}.canonical(3));
    CHECK_FALSE(EdgeId{1, 0}.canonical(3)); // bit 0 of lower endpoint set
    CHECK_FALSE(EdgeId{0, 3}.canonical(3));
    const int d = 4;
    std::vector<uint8_t> seen(static_cast<size_t>(d) << d, 0);
    uint64_t edges = 0;
    for_each_canonical_edge(d, [&](EdgeId e) {
        REQUIRE(e.canonical(d));
        uint64_t idx = e.index(d);
        REQUIRE(idx < (static_cast<uint64_t>(d) << d));
        REQUIRE(seen[idx] == 0);
        seen[idx] = 1;
        ++edges;
    });
    CHECK(edges == (static_cast<uint64_t>(d) << d) / 2); // d 2^d / 2
}

TEST_CASE("edge_between is symmetric and rejects non-adjacent pairs") {
    auto e = edge_between(5, 7, 3);
    CHECK(e.lower == 5);
    CHECK(e.coord == 1);
    auto e2 = edge_between(7, 5, 3);
    CHECK(e2.lower == e.lower);
    CHECK(e2.coord == e.coord);
    CHECK_THROWS_AS(edge_between(0, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(edge_between(2, 2, 3), std::invalid_argument);
}

TEST_CASE("open_threshold is exact floor(p 2^64)") {
    CHECK(open_threshold(0.0) == 0);
    CHECK(open_threshold(0.5) == (1ull << 63));
    CHECK(open_threshold(0.25) == (1ull << 62));
    // dyadic rationals with short mantissas are mapped exactly
    for (uint64_t k : {uint64_t(1), uint64_t(3), uint64_t(512), uint64_t(1023)})
        CHECK(open_threshold(static_cast<double>(k) / 1024.0) == (k << 54));
}

TEST_CASE("extreme densities open all or none of the edges") {
    const int d = 6;
    PercolationSample full(make_params(d, static_cast<double>(d), 3)); // p = 1
    PercolationSample empty(make_params(d, 0.0, 3));                   // p = 0
    for (VertexId v = 0; v < (1ull << d); ++v) {
        CHECK(full.open_degree(v) == d);
        CHECK(empty.open_degree(v) == 0);
    }
    for_each_canonical_edge(d, [&](EdgeId e) {
        CHECK(full.edge_state(e));
        CHECK_FALSE(empty.edge_state(e));
    });
}

TEST_CASE("edge states are a pure function of (seed, edge)") {
    const int d = 6;
    PercolationSample a(make_params(d, 2.0, 42));
    PercolationSample b(make_params(d, 2.0, 42));
    PercolationSample c(make_params(d, 2.0, 43));
    uint64_t differing = 0, open = 0;
    for_each_canonical_edge(d, [&](EdgeId e) {
        CHECK(a.edge_state(e) == b.edge_state(e));
        differing += a.edge_state(e) != c.edge_state(e);
        open += a.edge_state(e);
    });
    CHECK(differing > 0);
    CHECK(open > 0);
    CHECK(open < (static_cast<uint64_t>(d) << d) / 2);
    CHECK_THROWS_AS(a.edge_state(EdgeId{1, 0}), std::invalid_argument);
}

TEST_CASE("both endpoints see the same edge") {
    const int d = 8;
    PercolationSample s(make_params(d, 2.0, 7));
    for (VertexId v = 0; v < (1ull << d); ++v) {
        auto nb = s.open_neighbors(v);
        CHECK(static_cast<int>(nb.size()) == s.open_degree(v));
        for (VertexId w : nb) {
            CHECK(hamming(v, w) == 1);
            CHECK(s.edge_open(v, w));
            CHECK(s.edge_open(w, v));
        }
        // closed neighbors really are closed from both sides
        for (int i = 0; i < d; ++i) {
            VertexId w = v ^ (1ull << i);
            bool listed = false;
            for (VertexId x : nb) listed = listed || x == w;
            CHECK(listed == s.edge_open(w, v));
        }
    }
}

TEST_CASE("empirical open fraction tracks p") {
    const int d = 12;
    auto params = make_params(d, 2.0, 1234);
    PercolationSample s(params);
    CHECK(s.threshold() == open_threshold(params.p));
    uint64_t open = 0, total = 0;
    for_each_canonical_edge(d, [&](EdgeId e) {
        open += s.edge_state(e);
        ++total;
    });
    double expect = params.p * static_cast<double>(total);
    double sd = std::sqrt(static_cast<double>(total) * params.p * (1.0 - params.p));
    CHECK(std::abs(static_cast<double>(open) - expect) < 5.0 * sd);
}

TEST_CASE("sprinkling solves the two-round identity") {
    auto pair = sprinkle_params(2.0, 0.5, 12, 777);
    CHECK(pair.p1 == doctest::Approx(1.5 / 12.0));
    CHECK(pair.base.p == doctest::Approx(2.0 / 12.0));
    CHECK((1.0 - pair.p1) * (1.0 - pair.p2) == doctest::Approx(1.0 - pair.base.p).epsilon(1e-12));
    CHECK_THROWS_AS(sprinkle_params(2.0, 2.5, 12, 1), std::invalid_argument); // c - delta < 0
    CHECK_THROWS_AS(sprinkle_params(2.0, 0.0, 12, 1), std::invalid_argument);
}

TEST_CASE("coupling G1 within G2 holds on every edge") {
    const int d = 10;
    auto pair = sprinkle_params(2.0, 0.5, d, 20260826);
    auto g1 = pair.g1();
    auto g2 = pair.g2();
    uint64_t nG1 = 0, nG2only = 0, nClosed = 0, total = 0;
    for_each_canonical_edge(d, [&](EdgeId e) {
        bool in1 = g1.edge_state(e);
        bool in2 = g2.edge_state(e);
        REQUIRE((!in1 || in2)); // pathwise containment
        CoupledState st = coupled_edge_state(pair, e);
        if (in1) {
            REQUIRE(st == CoupledState::InG1);
            ++nG1;
        } else if (in2) {
            REQUIRE(st == CoupledState::InG2Only);
            ++nG2only;
        } else {
            REQUIRE(st == CoupledState::Closed);
            ++nClosed;
        }
        ++total;
    });
    CHECK(nG1 + nG2only + nClosed == total);
    // marginal frequencies within 5 sigma of (p1, p - p1, 1 - p)
    auto within = [&](uint64_t count, double prob) {
        double expect = prob * static_cast<double>(total);
        double sd = std::sqrt(static_cast<double>(total) * prob * (1.0 - prob));
        return std::abs(static_cast<double>(count) - expect) < 5.0 * sd;
    };
    CHECK(within(nG1, pair.p1));
    CHECK(within(nG2only, pair.base.p - pair.p1));
    CHECK(within(nClosed, 1.0 - pair.base.p));
}

} // TEST_SUITE
