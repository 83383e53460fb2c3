// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.
#include "pcv/harness.hpp"
#include "pcv/lossnorm.hpp"
#include "pcv/oracle.hpp"
#include "support.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace pcv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            if (!detail.empty()) {
                detail += "; ";
            }
            detail += "failed: " + what;
        }
    }
    void note(const std::string& what)
    {
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what;
    }
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int failures = 0;

void criterion(int number, const std::string& name, double time_limit_s, const std::function<void(Outcome&)>& body)
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit_s > 0) {
        o.require(secs < time_limit_s, "runtime " + fmt("%.2f", secs) + " s over " + fmt("%.0f", time_limit_s) + " s");
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << number << ". " << name << "  [" << fmt("%.2f", secs)
              << " s]  " << o.detail << std::endl;
}

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

TopVotes lone_voter(int h, int w, Pixel p, std::vector<CellIndex> cells)
{
    TopVotes t(h, w, 3);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            t.set_abstaining(y, x, true);
        }
    }
    t.set_abstaining(p.row, p.col, false);
    std::copy(cells.begin(), cells.end(), t.at(p.row, p.col).begin());
    return t;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(const std::string& args, const fs::path& out)
{
    const std::string cmd = std::string(PCV_CLI) + " " + args + " > " + out.string() + " 2>&1";
    return std::system(cmd.c_str());
}

} // namespace

int main()
{
    criterion(1, "grid cardinalities", 1.0, [](Outcome& o) {
        const int d = build_grid(default_grid()).cell_count();
        const int t = build_grid(toy_grid()).cell_count();
        const int u = build_grid(uniform_grid()).cell_count();
        o.require(d == 233, "default K = " + std::to_string(d));
        o.require(t == 17, "toy K = " + std::to_string(t));
        o.require(u == 225, "uniform K = " + std::to_string(u));
        o.note("K = " + std::to_string(d) + "/" + std::to_string(t) + "/" + std::to_string(u));
    });

    criterion(2, "aggregation fast path equals brute force", 60.0, [](Outcome& o) {
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<int> side(1, 64);
        const CellTable toy = build_grid(toy_grid());
        const CellTable def = build_grid(default_grid());
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const CellTable& vf = i % 2 ? def : toy;
            const int h = i < 4 ? 64 : side(rng);
            const int w = i < 4 ? 64 : side(rng);
            const VoteTensor v = test::random_votes(h, w, vf.cell_count() + 1, rng);
            const Heatmap fast = aggregate_votes(v, vf);
            const Heatmap slow = brute_force_aggregate(v, vf);
            for (std::size_t k = 0; k < fast.size(); ++k) {
                worst = std::max(worst, std::abs(fast.values()[k] - slow.values()[k]));
            }
        }
        o.require(worst <= 1e-6, "max deviation " + fmt("%.3g", worst));
        o.note("100 tensors, max |diff| = " + fmt("%.3g", worst));
    });

    criterion(3, "interior mass conservation", 0, [](Outcome& o) {
        std::mt19937_64 rng(3);
        double worst = 0.0;
        for (GridScheme g : {GridScheme::Toy, GridScheme::Default, GridScheme::Simple}) {
            const CellTable vf = build_grid(grid_for(g));
            const int r = vf.reach();
            const int n = 2 * r + 12;
            for (int trial = 0; trial < 5; ++trial) {
                VoteTensor v = test::random_votes(n, n, vf.cell_count() + 1, rng, 0.0);
                double mass = 0.0;
                for (int y = 0; y < n; ++y) {
                    for (int x = 0; x < n; ++x) {
                        const bool interior = y >= r && x >= r && y < n - r && x < n - r;
                        for (int c = 0; c < vf.cell_count(); ++c) {
                            if (!interior) {
                                v(y, x, c) = 0.0;
                            }
                            mass += v(y, x, c);
                        }
                        if (!interior) {
                            v(y, x, vf.cell_count()) = 1.0;
                        }
                    }
                }
                const Heatmap h = aggregate_votes(v, vf);
                double sum = 0.0;
                for (double x : h.values()) {
                    sum += x;
                }
                worst = std::max(worst, std::abs(sum - mass) / mass);
            }
        }
        o.require(worst <= 1e-5, "relative error " + fmt("%.3g", worst));
        o.note("max relative error " + fmt("%.3g", worst));
    });

    criterion(4, "synthetic oracle corpus vs 1/4-gt ceiling and grid ordering", 600.0, [](Outcome& o) {
        CorpusConfig config;
        config.scene = oracle_corpus_scene();
        config.scenes = 200;
        config.seed = 7;
        config.schemes = {GridScheme::Default, GridScheme::Simple, GridScheme::Uniform};
        const CorpusReport report = run_corpus(config, 1);
        const CategoryTable cats = synth_categories();
        const PQSummary ceil = report.ceiling.summarize(cats);
        const PQSummary def = report.schemes[0].full.summarize(cats);
        const PQSummary sim = report.schemes[1].full.summarize(cats);
        const PQSummary uni = report.schemes[2].full.summarize(cats);
        o.require(def.all.pq >= ceil.all.pq - 3.0, "default PQ too far below the ceiling");
        o.require(def.things.pq > sim.things.pq, "PQ_th default <= simple");
        o.require(sim.things.pq > uni.things.pq, "PQ_th simple <= uniform");
        o.note("PQ ceiling " + fmt("%.2f", ceil.all.pq) + ", default " + fmt("%.2f", def.all.pq) + "; PQ_th default " +
               fmt("%.2f", def.things.pq) + " > simple " + fmt("%.2f", sim.things.pq) + " > uniform " +
               fmt("%.2f", uni.things.pq));
    });

    criterion(5, "backprojection exactness and centroid collisions", 0, [](Outcome& o) {
        const CategoryTable cats = test::small_categories();
        std::mt19937_64 rng(55);
        std::uniform_int_distribution<int> size(3, 20);
        int checked = 0;
        for (int scene = 0; scene < 20; ++scene) {
            // Instances on a 48 px lattice, sizes 3..20: far apart relative to the cells they vote into.
            auto ann = test::stuff_scene(192, 192, scene % 2 ? 11 : 12);
            std::vector<SegmentId> ids;
            for (int gy = 0; gy < 4; ++gy) {
                for (int gx = 0; gx < 4; ++gx) {
                    if ((rng() & 3) == 0) {
                        continue;
                    }
                    ids.push_back(test::add_rect(ann, 48 * gy + 4, 48 * gx + 4, size(rng), size(rng),
                                                 (rng() & 1) ? 1 : 2));
                }
            }
            const OracleResult r = oracle_run(ann, default_grid(), cats);
            std::set<std::vector<Pixel>> masks;
            for (const auto& m : r.inference.masks) {
                masks.insert(m.pixels);
            }
            o.require(r.inference.masks.size() == ids.size(), "scene " + std::to_string(scene) + " mask count");
            for (SegmentId id : ids) {
                o.require(masks.contains(support(ann, id)), "scene " + std::to_string(scene) + " segment " +
                                                                std::to_string(id));
                ++checked;
            }
        }

        auto cross = test::stuff_scene(64, 64);
        const SegmentId a = test::add_rect(cross, 20, 10, 5, 5);
        const SegmentId b = test::add_rect(cross, 10, 20, 5, 5);
        for (int y = 0; y < 5; ++y) {
            for (int x = 0; x < 5; ++x) {
                cross.ids(20 + y, 30 + x) = a;
                cross.ids(30 + y, 20 + x) = b;
            }
        }
        const OracleResult c = oracle_run(cross, default_grid(), cats);
        const double pq = c.stats.summarize(cats).all.pq;
        o.require(c.inference.peaks.size() == 1, "colliding centroids did not merge");
        o.require(pq < 100.0, "colliding scene PQ = 100");
        o.note(std::to_string(checked) + " masks exact; collision PQ " + fmt("%.1f", pq));
    });

    criterion(6, "tie-break rules", 0, [](Outcome& o) {
        const CellTable vf = build_grid(toy_grid());
        const CellTable qf = invert_grid(vf);
        const Pixel p{10, 10};
        const CellIndex up = *vf.lookup({-3, 0});
        const CellIndex down = *vf.lookup({3, 0});

        // Different cells: highest total vote.
        for (auto order : {std::vector<CellIndex>{up, down}, std::vector<CellIndex>{down, up}}) {
            const TopVotes t = lone_voter(21, 21, p, order);
            std::vector<PeakRegion> peaks{test::make_peak({{7, 10}}, 12.0), test::make_peak({{13, 10}}, 7.5)};
            auto m = backproject(peaks, t, qf);
            o.require(m[0].pixels == std::vector<Pixel>{p} && m[1].pixels.empty(), "12.0 peak lost");
            std::swap(peaks[0].total_vote, peaks[1].total_vote);
            m = backproject(peaks, t, qf);
            o.require(m[1].pixels == std::vector<Pixel>{p} && m[0].pixels.empty(), "swapped 12.0 peak lost");
        }

        // Same cell: nearest bounding-box center, even against a larger total.
        const TopVotes t = lone_voter(21, 21, p, {up});
        const std::vector<PeakRegion> peaks{test::make_peak({{6, 9}}, 12.0), test::make_peak({{8, 11}}, 7.5)};
        const auto m = backproject(peaks, t, qf);
        o.require(m[1].pixels == std::vector<Pixel>{p} && m[0].pixels.empty(), "nearer peak lost");
        o.note("total-vote and nearest-center fixtures");
    });

    criterion(7, "PQ evaluator", 0, [](Outcome& o) {
        const CategoryTable cats = synth_categories();
        const FilterPair toy(toy_grid());
        double worst = 0.0;
        std::mt19937_64 rng(7);
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            SceneSpec spec;
            spec.height = 48;
            spec.width = 48;
            spec.min_instances = 1;
            spec.max_instances = 6;
            spec.min_scale = 3;
            spec.max_scale = 24;
            spec.occlusion = Occlusion::Stacked;
            spec.seed = seed;
            PanopticAnnotation g = generate(spec);
            InferOptions opts;
            opts.threshold = 1.0;
            opts.fuse.min_stuff_area = 0;
            const PanopticMap pred = oracle_run(g, toy, cats, opts).inference.panoptic;
            std::uniform_int_distribution<int> pos(0, 36);
            const int r0 = pos(rng);
            const int c0 = pos(rng);
            for (int r = r0; r < r0 + 12; ++r) {
                for (int c = c0; c < c0 + 12; ++c) {
                    g.ids(r, c) = 0;
                }
            }
            std::set<SegmentId> present(g.ids.values().begin(), g.ids.values().end());
            std::erase_if(g.segments, [&](const auto& kv) { return !present.contains(kv.first); });
            const PanopticMap gt = to_panoptic_map(g);
            const PQSummary a = evaluate(pred, gt, cats).summarize(cats);
            const PQSummary b = test::naive_pq(pred, gt, cats);
            for (auto [x, y] : {std::pair{a.all, b.all}, std::pair{a.things, b.things}, std::pair{a.stuff, b.stuff}}) {
                for (auto [u, v] : {std::pair{x.pq, y.pq}, std::pair{x.sq, y.sq}, std::pair{x.rq, y.rq}}) {
                    const double rel = u == v ? 0.0 : std::abs(u - v) / std::max(std::abs(u), std::abs(v));
                    worst = std::max(worst, rel);
                }
                o.require(x.categories == y.categories, "category count differs");
            }
        }
        o.require(worst <= 1e-9, "naive evaluator disagrees by " + fmt("%.3g", worst));

        const CategoryTable small = test::small_categories();
        auto g = test::stuff_scene(10, 10);
        test::add_rect(g, 0, 0, 2, 5);
        for (SegmentId& id : g.ids.values()) {
            id = id == 1 ? 0 : id;
        }
        g.segments.erase(1);
        const PanopticMap gm = to_panoptic_map(g);
        const double same = evaluate(gm, gm, small).summarize(small).all.pq;
        o.require(same == 100.0, "pred = gt gives " + fmt("%.6f", same));

        auto p = g;
        for (int y = 0; y < 2; ++y) {
            p.ids(y, 4) = 3;
        }
        p.segments[3] = {1, true};
        const PQSummary s = evaluate(to_panoptic_map(p), gm, small).summarize(small);
        o.require(std::abs(s.all.pq - 160.0 / 3.0) <= 1e-9, "TP + FP case PQ " + fmt("%.6f", s.all.pq));
        o.require(std::abs(s.all.rq - 200.0 / 3.0) <= 1e-9, "TP + FP case RQ " + fmt("%.6f", s.all.rq));
        o.note("20 scenes, max relative diff " + fmt("%.3g", worst) + "; hand cases " + fmt("%.1f", same) + " and " +
               fmt("%.1f", s.all.pq));
    });

    criterion(8, "segment loss normalization", 0, [](Outcome& o) {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u(0.01, 1.0);
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            SceneSpec spec;
            spec.height = spec.width = 64;
            spec.seed = seed;
            const auto ann = generate(spec);
            std::vector<double> probs(ann.ids.size());
            double mean = 0.0;
            for (double& p : probs) {
                p = u(rng);
                mean += -std::log(p);
            }
            mean /= static_cast<double>(probs.size());
            worst = std::max(worst, std::abs(normalized_loss(probs, segment_weights(ann, 0.0)) - mean));
        }
        o.require(worst <= 1e-12, "lambda 0 differs from the pixel mean by " + fmt("%.3g", worst));

        // Areas 4 and 400, each with mean -log p = 0.7: the loss is 0.7 and each segment carries half.
        PanopticAnnotation ann;
        ann.ids = Plane<SegmentId>(1, 404, 2);
        for (int x = 0; x < 4; ++x) {
            ann.ids(0, x) = 1;
        }
        ann.segments[1] = {1, true};
        ann.segments[2] = {11, false};
        std::vector<double> probs(404);
        for (int x = 0; x < 404; x += 2) {
            const double j = 0.3 * u(rng);
            probs[x] = std::exp(-0.7 - j);
            probs[x + 1] = std::exp(-0.7 + j);
        }
        const auto w = segment_weights(ann, 1.0);
        const double both = normalized_loss(probs, w);
        auto small_only = probs;
        std::fill(small_only.begin() + 4, small_only.end(), 1.0);
        const double part = normalized_loss(small_only, w);
        o.require(std::abs(both - 0.7) <= 1e-12, "equal-mean segments give " + fmt("%.15f", both));
        o.require(std::abs(part - 0.35) <= 1e-12, "small segment share " + fmt("%.15f", part));

        PanopticAnnotation hand;
        hand.ids = Plane<SegmentId>(1, 4, 2);
        hand.ids(0, 0) = 1;
        hand.segments[1] = {1, true};
        hand.segments[2] = {2, true};
        const double e1 = std::exp(-1.0);
        const double e2 = std::exp(-2.0);
        const double loss = normalized_loss(std::vector<double>{e1, e2, e2, e2}, segment_weights(hand, 1.0));
        o.require(loss == 1.5, "hand case gives " + fmt("%.17g", loss));
        o.note("lambda 0 max diff " + fmt("%.3g", worst) + "; hand case " + fmt("%.17g", loss));
    });

    criterion(9, "CLI determinism across job counts", 0, [](Outcome& o) {
        const fs::path dir = fs::temp_directory_path() / "pcv_acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir);
        auto run = [&](const std::string& args, const std::string& tag) {
            const int rc = cli(args, dir / (tag + ".log"));
            o.require(rc == 0, tag + " exited " + std::to_string(rc));
        };
        auto same = [&](const fs::path& a, const fs::path& b) {
            const std::string x = slurp(a);
            o.require(!x.empty() && x == slurp(b), a.filename().string() + " vs " + b.filename().string());
        };
        int compared = 0;
        for (int jobs : {1, 8}) {
            const std::string j = std::to_string(jobs);
            run("oracle --scheme default --scheme simple --scenes 24 --seed 1 --jobs " + j + " --report " +
                    (dir / ("oracle" + j + ".json")).string() + " --export " + (dir / ("ex" + j)).string(),
                "oracle" + j);
            run("eval-pq --pred " + (dir / ("ex" + j) / "pred_default.json").string() + " --gt " +
                    (dir / ("ex" + j) / "gt.json").string() + " --jobs " + j + " --report " +
                    (dir / ("eval" + j + ".json")).string(),
                "eval" + j);
            run("--simd " + std::string(jobs == 1 ? "scalar" : "auto") + " infer --seed 3 --out " +
                    (dir / ("infer" + j + ".json")).string(),
                "infer" + j);
        }
        same(dir / "oracle1.json", dir / "oracle8.json");
        same(dir / "eval1.json", dir / "eval8.json");
        same(dir / "ex1" / "gt.json", dir / "ex8" / "gt.json");
        same(dir / "ex1" / "pred_default.json", dir / "ex8" / "pred_default.json");
        same(dir / "ex1" / "pred_simple.json", dir / "ex8" / "pred_simple.json");
        same(dir / "infer1.json", dir / "infer8.json");
        compared += 6;
        for (const auto& e : fs::directory_iterator(dir / "ex1" / "pred_default")) {
            same(e.path(), dir / "ex8" / "pred_default" / e.path().filename());
            ++compared;
        }
        same(dir / "infer1" / "prediction.png", dir / "infer8" / "prediction.png");
        ++compared;
        o.note(std::to_string(compared) + " files byte-identical for --jobs 1 and 8");
    });

    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
