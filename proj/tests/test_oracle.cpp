#include "pcv/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace pcv;

namespace {

std::vector<Pixel> support(const PanopticAnnotation& ann, SegmentId id)
{
    std::vector<Pixel> out;
    for (int y = 0; y < ann.height(); ++y) {
        for (int x = 0; x < ann.width(); ++x) {
            if (ann.ids(y, x) == id) {
                out.push_back({y, x});
            }
        }
    }
    return out;
}

} // namespace

TEST_CASE("one centered square")
{
    auto ann = test::stuff_scene(64, 64);
    test::add_rect(ann, 28, 28, 9, 9);
    const CategoryTable cats = test::small_categories();
    const OracleResult r = oracle_run(ann, default_grid(), cats);
    REQUIRE(r.inference.peaks.size() == 1);
    CHECK(r.inference.masks[0].pixels == support(ann, 2));
    const PQSummary s = r.stats.summarize(cats);
    CHECK(s.all.pq == 100.0);
    CHECK(s.things.pq == 100.0);
}

TEST_CASE("well separated instances come back exactly")
{
    const CategoryTable cats = test::small_categories();
    auto ann = test::stuff_scene(128, 128);
    const std::vector<SegmentId> ids{
        test::add_rect(ann, 5, 5, 3, 3),       test::add_rect(ann, 10, 60, 12, 30, 2),
        test::add_rect(ann, 50, 10, 40, 20),   test::add_rect(ann, 70, 70, 25, 25, 2),
        test::add_rect(ann, 110, 40, 6, 50),
    };
    for (GridScheme g : {GridScheme::Default, GridScheme::Simple}) {
        const OracleResult r = oracle_run(ann, grid_for(g), cats);
        REQUIRE(r.inference.masks.size() == ids.size());
        std::set<std::vector<Pixel>> masks;
        for (const auto& m : r.inference.masks) {
            masks.insert(m.pixels);
        }
        for (SegmentId id : ids) {
            CHECK(masks.contains(support(ann, id)));
        }
        CHECK(r.stats.summarize(cats).all.pq == 100.0);
    }
}

TEST_CASE("colliding centroids merge")
{
    // Two instances arranged as a cross: both centroids are (22, 22).
    auto ann = test::stuff_scene(64, 64);
    const SegmentId a = test::add_rect(ann, 20, 10, 5, 5);
    const SegmentId b = test::add_rect(ann, 10, 20, 5, 5);
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 5; ++c) {
            ann.ids(20 + r, 30 + c) = a;
            ann.ids(30 + r, 20 + c) = b;
        }
    }
    ann.validate();

    const CategoryTable cats = test::small_categories();
    const OracleResult r = oracle_run(ann, default_grid(), cats);
    CHECK(round_to_pixel(r.labels.centroids.at(a)) == round_to_pixel(r.labels.centroids.at(b)));
    CHECK(r.inference.peaks.size() == 1);
    CHECK(r.stats.summarize(cats).all.pq < 100.0);
    CHECK(r.stats.per_category.at(1).tp == 0);
}

TEST_CASE("oracle runs are deterministic")
{
    SceneSpec spec;
    spec.height = spec.width = 96;
    spec.min_instances = 3;
    spec.occlusion = Occlusion::Stacked;
    spec.seed = 19;
    const auto ann = generate(spec);
    const auto a = oracle_run(ann, default_grid(), synth_categories());
    const auto b = oracle_run(ann, default_grid(), synth_categories());
    CHECK(a.inference.panoptic == b.inference.panoptic);
    CHECK(a.stats == b.stats);
}

TEST_CASE("even bins lose small instances")
{
    auto ann = test::stuff_scene(96, 96);
    for (int i = 0; i < 4; ++i) {
        test::add_rect(ann, 10 + 20 * i, 10 + 20 * i, 5, 5);
    }
    const CategoryTable cats = test::small_categories();
    const double fine = oracle_run(ann, default_grid(), cats).stats.summarize(cats).things.pq;
    const double even = oracle_run(ann, uniform_grid(), cats).stats.summarize(cats).things.pq;
    CHECK(fine == 100.0);
    CHECK(even < fine);
}

TEST_CASE("one-hot votes")
{
    const CellTable vf = build_grid(toy_grid());
    auto ann = test::stuff_scene(3, 30);
    test::add_rect(ann, 1, 0, 1, 30);
    const LabelField lf = encode_labels(ann, vf);
    const VoteTensor v = one_hot_votes(lf);
    CHECK_NOTHROW(v.validate());
    CHECK(v(1, 0, 17) == 1.0); // out of reach: abstains
    CHECK(v(1, 15, lf.vote(1, 15)) == 1.0);
    CHECK(v(0, 0, 17) == 1.0);
}
