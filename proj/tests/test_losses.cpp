#include "condrank/datasets.hpp"
#include "condrank/errors.hpp"
#include "condrank/losses.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace condrank;
using namespace condrank::testing;

namespace {

GroupedScores make_groups(Rng& rng, int groups, int max_size) {
    GroupedScores out(static_cast<std::size_t>(groups));
    for (auto& g : out) {
        const auto size = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_size)));
        for (int i = 0; i < size; ++i) {
            g.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
        }
    }
    return out;
}

GroupedScores with_predictions(const std::vector<std::vector<double>>& labels, auto&& f) {
    GroupedScores out;
    for (const auto& g : labels) {
        out.emplace_back();
        for (double y : g) {
            out.back().push_back({f(y), y});
        }
    }
    return out;
}

}  // namespace

TEST_CASE("pairwise rank loss examples") {
    const std::vector<std::vector<double>> labels{{1, 2, 3, 4}, {-1, 5}, {0.5, 0.25, 0.75}};
    CHECK(losses::pairwise_rank_loss(with_predictions(labels, [](double y) { return y; })) == 0.0);
    CHECK(losses::pairwise_rank_loss(with_predictions(labels, [](double y) { return -y; })) == 1.0);
    CHECK(losses::pairwise_rank_loss(with_predictions(labels, [](double) { return 7.0; })) == 0.5);
}

TEST_CASE("pairwise rank loss counting by hand") {
    // Group 1: labels (0, 1, 2), predictions (0, 2, 1): pairs (0<1) ok, (0<2) ok,
    // (1<2) swapped -> 1 of 3. Group 2: labels (1, 1) form no pair. Group 3:
    // labels (0, 1), tied predictions -> 1/2.
    GroupedScores g{{{0, 0}, {2, 1}, {1, 2}}, {{3, 1}, {-3, 1}}, {{4, 0}, {4, 1}}};
    CHECK(losses::pairwise_rank_loss(g) == doctest::Approx(1.5 / 4.0).epsilon(1e-15));
}

TEST_CASE("pairwise rank loss is undefined without comparable pairs") {
    CHECK_THROWS_AS(losses::pairwise_rank_loss({}), UndefinedLoss);
    CHECK_THROWS_AS(losses::pairwise_rank_loss({{{1, 2}}, {{0, 3}, {5, 3}}}), UndefinedLoss);
}

TEST_CASE("pairwise rank loss is invariant under increasing per-group transforms") {
    Rng rng(51);
    for (int t = 0; t < 20; ++t) {
        const GroupedScores g = make_groups(rng, 5, 6);
        GroupedScores h = g;
        for (auto& group : h) {
            const double slope = rng.uniform(0.1, 10.0);
            const double shift = rng.uniform(-5.0, 5.0);
            for (auto& e : group) {
                e.prediction = slope * e.prediction + shift;
            }
        }
        bool defined = true;
        double base = 0.0;
        try {
            base = losses::pairwise_rank_loss(g);
        } catch (const UndefinedLoss&) {
            defined = false;
        }
        if (defined) {
            CHECK(losses::pairwise_rank_loss(h) == doctest::Approx(base).epsilon(1e-15));
        }
    }
}

TEST_CASE("regression loss") {
    RealVector y(2), h(2);
    y << 1, 2;
    h << 0, 0;
    CHECK(losses::regression_loss(h, y) == 5.0);
    CHECK(losses::regression_loss(y, y) == 0.0);
    Rng rng(52);
    const RealVector a = random_vector(rng, 30);
    const RealVector b = random_vector(rng, 30);
    const RealVector r = b - a;
    CHECK(losses::regression_loss(a, b) == doctest::Approx(r.transpose() * r).epsilon(1e-12));
    CHECK_THROWS_AS(losses::regression_loss(a, RealVector::Zero(3)), InvalidInput);
}

TEST_CASE("centered squared loss examples") {
    GroupedScores g{{{0, 0}, {0, 1}}};
    CHECK(losses::centered_squared_loss(g) == 2.0);
    Rng rng(53);
    GroupedScores perfect = make_groups(rng, 4, 5);
    for (auto& group : perfect) {
        for (auto& e : group) {
            e.prediction = e.label;
        }
    }
    CHECK(losses::centered_squared_loss(perfect) == 0.0);
}

TEST_CASE("centered squared loss equals 2l r^T C r per group") {
    Rng rng(54);
    for (int t = 0; t < 50; ++t) {
        const GroupedScores g = make_groups(rng, 4, 7);
        double want = 0.0;
        for (const auto& group : g) {
            const auto l = static_cast<Index>(group.size());
            RealVector r(l);
            for (Index i = 0; i < l; ++i) {
                r(i) = group[static_cast<std::size_t>(i)].label -
                       group[static_cast<std::size_t>(i)].prediction;
            }
            want += 2.0 * static_cast<double>(l) * r.dot(linalg::centering_matrix(l) * r);
        }
        CHECK(std::abs(losses::centered_squared_loss(g) - want) < 1e-10);
    }
}

TEST_CASE("centered squared loss ignores per-group prediction offsets") {
    Rng rng(55);
    for (int t = 0; t < 10; ++t) {
        const GroupedScores g = make_groups(rng, 5, 6);
        GroupedScores h = g;
        for (auto& group : h) {
            const double c = rng.uniform(-3, 3);
            for (auto& e : group) {
                e.prediction += c;
            }
        }
        CHECK(std::abs(losses::centered_squared_loss(h) - losses::centered_squared_loss(g)) <
              1e-10);
    }
}

TEST_CASE("centered squared loss on a complete graph equals 2p r^T L r") {
    Rng rng(56);
    for (int t = 0; t < 50; ++t) {
        const Index p = 2 + static_cast<Index>(t % 6);
        const auto ds = datasets::random_complete_graph(p, 2, 560 + static_cast<std::uint64_t>(t));
        const RealVector y = graph::edge_labels(ds);
        const RealVector h = random_vector(rng, ds.edge_count());
        const auto bs = graph::build_block_structure(ds);
        const RealVector r = y - h;
        const double want = 2.0 * static_cast<double>(p) * r.dot(graph::apply_block_centering(bs, r));
        const double got = losses::centered_squared_loss(losses::group_by_node(ds, h));
        CHECK(std::abs(got - want) < 1e-10);
    }
}

TEST_CASE("group_by_node") {
    GraphDataset ds;
    ds.node_ids = {"a", "b", "c"};
    ds.features = RealMatrix::Zero(3, 1);
    ds.edges = {{0, 1, 1.0}, {2, 0, 2.0}, {0, 2, 3.0}};
    RealVector h(3);
    h << 10, 20, 30;
    const auto out = losses::group_by_node(ds, h);
    REQUIRE(out.size() == 2);  // node b has no outgoing edges
    CHECK(out[0].size() == 2);
    CHECK(out[0][1].prediction == 30);
    CHECK(out[0][1].label == 3.0);
    CHECK(out[1][0].prediction == 20);
    const auto in = losses::group_by_node(ds, h, Conditioning::Incoming);
    REQUIRE(in.size() == 3);
    CHECK(in[0][0].label == 2.0);
    CHECK_THROWS_AS(losses::group_by_node(ds, RealVector::Zero(2)), InvalidInput);
}
