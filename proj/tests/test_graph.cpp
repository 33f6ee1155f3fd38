#include "condrank/datasets.hpp"
#include "condrank/errors.hpp"
#include "condrank/graph.hpp"
#include "support.hpp"

#include <string>

#include <doctest.h>

using namespace condrank;
using namespace condrank::testing;

namespace {

GraphDataset two_node_complete(double a, double b, double c, double d) {
    GraphDataset ds;
    ds.node_ids = {"u", "v"};
    ds.features = RealMatrix::Zero(2, 1);
    ds.edges = {{0, 0, a}, {0, 1, b}, {1, 0, c}, {1, 1, d}};
    return ds;
}

}  // namespace

TEST_CASE("label matrix examples") {
    GraphDataset one;
    one.node_ids = {"x"};
    one.features = RealMatrix::Zero(1, 2);
    one.edges = {{0, 0, 5.0}};
    CHECK(graph::build_label_matrix(one).values(0, 0) == 5.0);

    const auto y = graph::build_label_matrix(two_node_complete(1, 2, 3, 4)).values;
    RealMatrix want(2, 2);
    want << 1, 3, 2, 4;
    CHECK(y == want);
    CHECK(graph::is_complete(two_node_complete(1, 2, 3, 4)));
}

TEST_CASE("label matrix rejects incomplete graphs and names the pair") {
    auto ds = two_node_complete(1, 2, 3, 4);
    ds.edges.erase(ds.edges.begin() + 2);  // drop v -> u
    CHECK_FALSE(graph::is_complete(ds));
    try {
        graph::build_label_matrix(ds);
        FAIL("expected IncompleteGraph");
    } catch (const IncompleteGraph& e) {
        const std::string msg = e.what();
        CHECK(msg.find("v -> u") != std::string::npos);
    }

    auto dup = two_node_complete(1, 2, 3, 4);
    dup.edges[3] = {0, 1, 9.0};  // (u -> v) twice, (v -> v) missing
    CHECK_FALSE(graph::is_complete(dup));
    CHECK_THROWS_AS(graph::build_label_matrix(dup), IncompleteGraph);
}

TEST_CASE("validate") {
    auto ds = two_node_complete(1, 2, 3, 4);
    CHECK_NOTHROW(graph::validate(ds));
    ds.edges.push_back({0, 2, 1.0});
    CHECK_THROWS_AS(graph::validate(ds), InvalidInput);
    ds.edges.pop_back();
    ds.edges.push_back({-1, 0, 1.0});
    CHECK_THROWS_AS(graph::validate(ds), InvalidInput);
    ds.edges.back() = {0, 0, std::nan("")};
    CHECK_THROWS_AS(graph::validate(ds), InvalidInput);
    ds.edges.pop_back();
    ds.features = RealMatrix::Zero(3, 1);
    CHECK_THROWS_AS(graph::validate(ds), InvalidInput);
}

TEST_CASE("bookkeeping") {
    SUBCASE("gather reproduces labels on a complete graph") {
        const auto ds = datasets::random_complete_graph(5, 2, 41);
        const auto b = graph::build_bookkeeping(ds);
        const RealVector y = linalg::vec(graph::build_label_matrix(ds).values);
        CHECK(b.gather(y) == graph::edge_labels(ds));
    }
    SUBCASE("single edge") {
        GraphDataset ds;
        ds.node_ids = {"a", "b"};
        ds.features = RealMatrix::Zero(2, 1);
        ds.edges = {{0, 1, 1.0}};
        const auto b = graph::build_bookkeeping(ds);
        REQUIRE(b.edge_count() == 1);
        CHECK(b.pair_index[0] == 1);  // 0-based form of the second pair slot
        CHECK(graph::pair_index(0, 1, 2) == 1);
        CHECK(graph::pair_index(1, 0, 2) == 2);
    }
    SUBCASE("duplicated edge sums in B^T B") {
        GraphDataset ds;
        ds.node_ids = {"a", "b"};
        ds.features = RealMatrix::Zero(2, 1);
        ds.edges = {{1, 0, 1.0}, {1, 0, -1.0}, {0, 0, 2.0}};
        const auto b = graph::build_bookkeeping(ds);
        RealMatrix btb(4, 4);
        for (Index j = 0; j < 4; ++j) {
            RealVector e = RealVector::Zero(4);
            e(j) = 1.0;
            btb.col(j) = b.scatter(b.gather(e));
        }
        CHECK(btb(2, 2) == 2.0);
        CHECK(btb(0, 0) == 1.0);
        CHECK(btb(1, 1) == 0.0);
    }
    SUBCASE("gather and scatter are adjoint") {
        const auto ds = datasets::random_graph(6, 40, 2, 42);
        const auto b = graph::build_bookkeeping(ds);
        Rng rng(43);
        for (int t = 0; t < 10; ++t) {
            const RealVector u = random_vector(rng, 36);
            const RealVector w = random_vector(rng, 40);
            CHECK(b.gather(u).dot(w) == doctest::Approx(u.dot(b.scatter(w))).epsilon(1e-15));
        }
    }
    SUBCASE("errors") {
        GraphDataset ds;
        ds.node_ids = {"a"};
        ds.features = RealMatrix::Zero(1, 1);
        ds.edges = {{0, 3, 1.0}};
        CHECK_THROWS_AS(graph::build_bookkeeping(ds), InvalidInput);
        ds.edges = {{0, 0, 1.0}};
        const auto b = graph::build_bookkeeping(ds);
        CHECK_THROWS_AS((void)b.gather(RealVector::Zero(2)), InvalidInput);
        CHECK_THROWS_AS((void)b.scatter(RealVector::Zero(2)), InvalidInput);
    }
}

TEST_CASE("block structure groups by conditioning node") {
    GraphDataset ds;
    ds.node_ids = {"a", "b", "c"};
    ds.features = RealMatrix::Zero(3, 1);
    ds.edges = {{0, 1, 1.0}, {2, 0, 2.0}, {0, 2, 3.0}, {1, 2, 4.0}};
    const auto out = graph::build_block_structure(ds, Conditioning::Outgoing);
    CHECK(out.group_sizes == std::vector<Index>{2, 1, 1});
    CHECK(out.members[0] == std::vector<Index>{0, 2});
    CHECK(out.group_of_edge == std::vector<Index>{0, 2, 0, 1});
    const auto in = graph::build_block_structure(ds, Conditioning::Incoming);
    CHECK(in.group_sizes == std::vector<Index>{1, 1, 2});
    CHECK(in.members[2] == std::vector<Index>{2, 3});
}

TEST_CASE("block centering examples") {
    GraphDataset ds;
    ds.node_ids = {"a", "b"};
    ds.features = RealMatrix::Zero(2, 1);
    ds.edges = {{0, 0, 0.0}, {0, 1, 0.0}, {1, 1, 0.0}};
    const auto bs = graph::build_block_structure(ds);

    RealVector v(3);
    v << 1, 3, 5;
    RealVector want(3);
    want << -1, 1, 0;
    CHECK(graph::apply_block_centering(bs, v) == want);
    CHECK(graph::apply_block_centering(bs, want) == want);
    CHECK(max_abs(graph::apply_block_centering(bs, RealVector::Constant(3, 4.2))) < 1e-15);
    CHECK_THROWS_AS(graph::apply_block_centering(bs, RealVector::Zero(2)), InvalidInput);
}

TEST_CASE("block centering is an orthogonal projection") {
    const auto ds = datasets::random_graph(7, 50, 2, 44);
    Rng rng(45);
    for (auto cond : {Conditioning::Outgoing, Conditioning::Incoming}) {
        const auto bs = graph::build_block_structure(ds, cond);
        for (int t = 0; t < 10; ++t) {
            const RealVector u = random_vector(rng, 50);
            const RealVector w = random_vector(rng, 50);
            const RealVector lu = graph::apply_block_centering(bs, u);
            CHECK(max_abs(graph::apply_block_centering(bs, lu) - lu) < 1e-12);
            CHECK(std::abs(lu.dot(w) - u.dot(graph::apply_block_centering(bs, w))) < 1e-12);
        }
    }
}

TEST_CASE("block centering on a complete graph equals vec(C Y)") {
    for (Index p = 1; p <= 6; ++p) {
        const auto ds = datasets::random_complete_graph(p, 2, 46 + static_cast<std::uint64_t>(p));
        const RealMatrix y = graph::build_label_matrix(ds).values;
        const auto bs = graph::build_block_structure(ds);
        const auto b = graph::build_bookkeeping(ds);
        const RealVector got = b.scatter(graph::apply_block_centering(bs, graph::edge_labels(ds)));
        CHECK(max_abs(got - linalg::vec(linalg::centering_matrix(p) * y)) < 1e-12);

        // Incoming groups center the rows of Y instead.
        const auto bs_in = graph::build_block_structure(ds, Conditioning::Incoming);
        const RealVector got_in =
            b.scatter(graph::apply_block_centering(bs_in, graph::edge_labels(ds)));
        CHECK(max_abs(got_in - linalg::vec(y * linalg::centering_matrix(p))) < 1e-12);
    }
}
