#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dmot/assignment.hpp"
#include "dmot/rng.hpp"

using namespace dmot;

namespace {

// Exhaustive oracle: minimum total cost over all injections of the smaller
// side into the larger.
double brute_force_min_cost(const CostMatrix& c) {
    bool transpose = c.rows > c.cols;
    int n = transpose ? c.cols : c.rows;
    int m = transpose ? c.rows : c.cols;
    auto cost_at = [&](int i, int j) { return transpose ? c.at(j, i) : c.at(i, j); };

    std::vector<int> cols(static_cast<size_t>(m));
    std::iota(cols.begin(), cols.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    // permutations of column subsets: iterate over all m!/(m-n)! injections
    std::sort(cols.begin(), cols.end());
    do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += cost_at(i, cols[static_cast<size_t>(i)]);
        best = std::min(best, total);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return best;
}

CostMatrix random_matrix(int r, int cnum, Rng& rng) {
    CostMatrix c(r, cnum);
    for (auto& v : c.data) v = rng.uniform(0, 10);
    return c;
}

}  // namespace

TEST_CASE("hungarian: diagonal zeros pick the identity") {
    CostMatrix c(3, 3, 1.0);
    for (int i = 0; i < 3; ++i) c.at(i, i) = 0.0;
    auto a = hungarian(c);
    REQUIRE(a.pairs.size() == 3);
    for (auto [r, col] : a.pairs) CHECK(r == col);
    CHECK(assignment_cost(c, a) == 0.0);
}

TEST_CASE("hungarian: 2x2 with a tempting greedy trap") {
    CostMatrix c(2, 2);
    c.at(0, 0) = 4;
    c.at(0, 1) = 1;
    c.at(1, 0) = 2;
    c.at(1, 1) = 3;
    auto a = hungarian(c);
    REQUIRE(a.pairs.size() == 2);
    CHECK(assignment_cost(c, a) == 3.0);  // (0->1) + (1->0)
    CHECK(a.pairs[0] == std::pair<int, int>{0, 1});
    CHECK(a.pairs[1] == std::pair<int, int>{1, 0});
}

TEST_CASE("hungarian equals brute force on rectangular matrices") {
    Rng rng(1001);
    for (int trial = 0; trial < 100; ++trial) {
        CostMatrix c = random_matrix(5, 7, rng);
        auto a = hungarian(c);
        CHECK(a.pairs.size() == 5);
        CHECK(assignment_cost(c, a) == doctest::Approx(brute_force_min_cost(c)).epsilon(1e-9));

        CostMatrix t = random_matrix(7, 5, rng);
        auto b = hungarian(t);
        CHECK(b.pairs.size() == 5);
        CHECK(assignment_cost(t, b) == doctest::Approx(brute_force_min_cost(t)).epsilon(1e-9));
    }
}

TEST_CASE("hungarian rejects non-finite costs and handles empty inputs") {
    CostMatrix c(2, 2, 0.0);
    c.at(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(hungarian(c), ContractError);

    CostMatrix e(0, 3);
    auto a = hungarian(e);
    CHECK(a.pairs.empty());
    CHECK(a.unmatched_cols.size() == 3);
}

TEST_CASE("hungarian invariances") {
    Rng rng(2002);
    for (int trial = 0; trial < 100; ++trial) {
        CostMatrix c = random_matrix(4, 4, rng);
        double base = assignment_cost(c, hungarian(c));

        // row/column permutation leaves the total invariant
        std::vector<int> rp{2, 0, 3, 1}, cp{1, 3, 0, 2};
        CostMatrix p(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) p.at(i, j) = c.at(rp[static_cast<size_t>(i)], cp[static_cast<size_t>(j)]);
        CHECK(assignment_cost(p, hungarian(p)) == doctest::Approx(base).epsilon(1e-9));

        // adding a constant to one row shifts the total by that constant
        // and keeps the matching itself
        CostMatrix shifted = c;
        for (int j = 0; j < 4; ++j) shifted.at(2, j) += 5.5;
        auto m0 = hungarian(c).pairs;
        auto m1 = hungarian(shifted).pairs;
        CHECK(m0 == m1);
        CHECK(assignment_cost(shifted, hungarian(shifted)) == doctest::Approx(base + 5.5).epsilon(1e-9));
    }
}

TEST_CASE("iou_cost") {
    BBox box(0, 0, 2, 2);
    auto c1 = iou_cost({box}, {box});
    CHECK(c1.at(0, 0) == 0.0);
    auto c2 = iou_cost({box}, {BBox(10, 10, 2, 2)});
    CHECK(c2.at(0, 0) == 1.0);

    std::vector<BBox> tracks = {BBox(0, 0, 4, 4), BBox(2, 2, 4, 4)};
    std::vector<BBox> dets = {BBox(1, 1, 4, 4), BBox(6, 6, 2, 2)};
    auto c = iou_cost(tracks, dets);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(c.at(i, j) == doctest::Approx(1.0 - iou(tracks[static_cast<size_t>(i)],
                                                           dets[static_cast<size_t>(j)])).epsilon(1e-14));
}

TEST_CASE("depth_distance with clamping") {
    auto d0 = depth_distance({0.4}, {0.4}, 1.0);
    CHECK(d0.at(0, 0) == 0.0);
    auto d1 = depth_distance({0.2}, {0.7}, 1.0);
    CHECK(d1.at(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    auto d2 = depth_distance({0.1}, {0.9}, 2.0);
    CHECK(d2.at(0, 0) == 1.0);  // 1.6 clamps to 1

    // transposition symmetry
    Rng rng(3);
    std::vector<double> a, b;
    for (int i = 0; i < 4; ++i) a.push_back(rng.next_double());
    for (int i = 0; i < 6; ++i) b.push_back(rng.next_double());
    auto ab = depth_distance(a, b, 1.3);
    auto ba = depth_distance(b, a, 1.3);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j) CHECK(ab.at(i, j) == ba.at(j, i));
}

TEST_CASE("fuse_cost") {
    CostMatrix c(1, 1, 0.5), d(1, 1, 0.25);
    CHECK(fuse_cost(c, d, 0.8, 0.2).at(0, 0) == doctest::Approx(0.45).epsilon(1e-14));
    CHECK(fuse_cost(c, d, 1.0, 0.0).at(0, 0) == 0.5);
    CHECK(fuse_cost(c, d, 0.0, 1.0).at(0, 0) == 0.25);

    CostMatrix wrong(2, 1, 0.0);
    CHECK_THROWS_AS(fuse_cost(c, wrong, 1, 1), ContractError);

    // monotone in D when gamma > 0
    CostMatrix d2 = d;
    d2.at(0, 0) += 0.3;
    CHECK(fuse_cost(c, d2, 0.8, 0.2).at(0, 0) > fuse_cost(c, d, 0.8, 0.2).at(0, 0));
}

TEST_CASE("gate keeps boundary pairs and rejects above threshold") {
    CostMatrix c(2, 2);
    c.at(0, 0) = 0.9;
    c.at(0, 1) = 2.0;
    c.at(1, 0) = 2.0;
    c.at(1, 1) = 1.2;
    auto a = hungarian(c);
    REQUIRE(a.pairs.size() == 2);

    auto kept = gate(a, c, std::numeric_limits<double>::infinity());
    CHECK(kept.pairs.size() == 2);

    auto none = gate(a, c, -1.0);
    CHECK(none.pairs.empty());
    CHECK(none.unmatched_rows.size() == 2);
    CHECK(none.unmatched_cols.size() == 2);

    auto boundary = gate(a, c, 0.9);  // pair exactly at the threshold stays
    REQUIRE(boundary.pairs.size() == 1);
    CHECK(boundary.pairs[0] == std::pair<int, int>{0, 0});
}
