#include "pcv/harness.hpp"

#include "pcv/error.hpp"
#include "pcv/panoptic_io.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

namespace pcv {

SceneSpec oracle_corpus_scene()
{
    SceneSpec spec;
    spec.height = 512;
    spec.width = 512;
    spec.min_instances = 4;
    spec.max_instances = 12;
    spec.shapes = ShapeFamily::Mixed;
    spec.min_scale = 12;
    spec.max_scale = 240;
    spec.occlusion = Occlusion::Stacked;
    spec.max_hidden_fraction = 0.2;
    spec.stuff_bands = 2;
    return spec;
}

namespace {

struct SceneOutcome {
    PQStats ceiling;
    std::vector<std::pair<PQStats, PQStats>> per_scheme; // working, full
};

struct Exporters {
    std::unique_ptr<ArchiveWriter> gt;
    std::vector<std::unique_ptr<ArchiveWriter>> pred;
};

std::string scene_name(int index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "scene_%05d", index);
    return buf;
}

SceneOutcome run_scene(const CorpusConfig& config, const std::vector<FilterPair>& filters,
                       const CategoryTable& categories, int index, Exporters* exporters)
{
    SceneSpec spec = config.scene;
    spec.seed = mix_seed(config.seed + static_cast<std::uint64_t>(index));
    const PanopticAnnotation full = generate(spec);
    const int scale = config.infer.fuse.scale;
    const PanopticAnnotation working = downsample_annotation(full, scale);
    const PanopticMap full_gt = to_panoptic_map(full);

    SceneOutcome out;
    if (exporters != nullptr) {
        exporters->gt->write_prediction(full_gt, index + 1, scene_name(index));
    }
    out.ceiling = evaluate(upsample_map(to_panoptic_map(working), scale, full.height(), full.width()), full_gt,
                           categories);
    for (std::size_t s = 0; s < filters.size(); ++s) {
        OracleResult r = oracle_run(working, filters[s], categories, config.infer);
        const PanopticMap up = upsample_map(r.inference.panoptic, scale, full.height(), full.width());
        if (exporters != nullptr) {
            exporters->pred[s]->write_prediction(up, index + 1, scene_name(index));
        }
        out.per_scheme.emplace_back(std::move(r.stats), evaluate(up, full_gt, categories));
    }
    return out;
}

} // namespace

void parallel_for(int count, int jobs, const std::function<void(int)>& fn)
{
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const int threads = std::max(1, std::min(jobs, count));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

CorpusReport run_corpus(const CorpusConfig& config, int jobs)
{
    if (config.scenes < 0) {
        throw DomainError("scene count must be nonnegative");
    }
    if (config.infer.fuse.scale < 1) {
        throw DomainError("working-resolution factor must be at least 1");
    }
    const CategoryTable categories = synth_categories();
    std::vector<FilterPair> filters;
    for (GridScheme s : config.schemes) {
        filters.emplace_back(grid_for(s));
    }

    std::unique_ptr<Exporters> exporters;
    if (!config.export_dir.empty()) {
        exporters = std::make_unique<Exporters>();
        const auto& dir = config.export_dir;
        exporters->gt = std::make_unique<ArchiveWriter>(dir / "gt.json", dir / "gt", categories);
        for (GridScheme g : config.schemes) {
            const std::string stem = "pred_" + std::string(scheme_name(g));
            exporters->pred.push_back(std::make_unique<ArchiveWriter>(dir / (stem + ".json"), dir / stem, categories));
        }
    }

    std::vector<SceneOutcome> outcomes(static_cast<std::size_t>(config.scenes));
    parallel_for(config.scenes, jobs, [&](int i) {
        outcomes[static_cast<std::size_t>(i)] = run_scene(config, filters, categories, i, exporters.get());
    });
    if (exporters) {
        exporters->gt->finish();
        for (auto& w : exporters->pred) {
            w->finish();
        }
    }

    CorpusReport report;
    report.scenes = config.scenes;
    for (std::size_t s = 0; s < filters.size(); ++s) {
        report.schemes.push_back({config.schemes[s], filters[s].voting.cell_count(), {}, {}});
    }
    for (const SceneOutcome& o : outcomes) {
        report.ceiling += o.ceiling;
        for (std::size_t s = 0; s < filters.size(); ++s) {
            report.schemes[s].working += o.per_scheme[s].first;
            report.schemes[s].full += o.per_scheme[s].second;
        }
    }
    return report;
}

nlohmann::ordered_json summary_json(const PQSummary& s)
{
    return {{"PQ", s.all.pq},        {"SQ", s.all.sq},        {"RQ", s.all.rq},
            {"PQ_th", s.things.pq},  {"SQ_th", s.things.sq},  {"RQ_th", s.things.rq},
            {"PQ_st", s.stuff.pq},   {"SQ_st", s.stuff.sq},   {"RQ_st", s.stuff.rq},
            {"n", s.all.categories}, {"n_th", s.things.categories}, {"n_st", s.stuff.categories}};
}

nlohmann::ordered_json stats_json(const PQStats& stats, const CategoryTable& categories)
{
    nlohmann::ordered_json per = nlohmann::ordered_json::array();
    for (const auto& [c, s] : stats.per_category) {
        per.push_back({{"category_id", c}, {"iou_sum", s.iou_sum}, {"tp", s.tp}, {"fp", s.fp}, {"fn", s.fn}});
    }
    return {{"summary", summary_json(stats.summarize(categories))}, {"per_category", per}};
}

nlohmann::ordered_json report_json(const CorpusReport& report, const CategoryTable& categories)
{
    nlohmann::ordered_json schemes = nlohmann::ordered_json::array();
    for (const SchemeResult& s : report.schemes) {
        schemes.push_back({{"scheme", std::string(scheme_name(s.scheme))},
                           {"cells", s.cells},
                           {"full_resolution", stats_json(s.full, categories)},
                           {"working_resolution", stats_json(s.working, categories)}});
    }
    return {{"scenes", report.scenes}, {"quarter_gt", stats_json(report.ceiling, categories)}, {"schemes", schemes}};
}

nlohmann::ordered_json config_json(const CorpusConfig& config)
{
    const SceneSpec& s = config.scene;
    nlohmann::ordered_json schemes = nlohmann::ordered_json::array();
    for (GridScheme g : config.schemes) {
        schemes.push_back(std::string(scheme_name(g)));
    }
    return {{"scenes", config.scenes},
            {"seed", config.seed},
            {"schemes", schemes},
            {"threshold", config.infer.threshold},
            {"top_k", config.infer.top_k},
            {"connectivity", static_cast<int>(config.infer.connectivity)},
            {"min_stuff_area", config.infer.fuse.min_stuff_area},
            {"scale", config.infer.fuse.scale},
            {"scene",
             {{"height", s.height},
              {"width", s.width},
              {"min_instances", s.min_instances},
              {"max_instances", s.max_instances},
              {"shapes", static_cast<int>(s.shapes)},
              {"min_scale", s.min_scale},
              {"max_scale", s.max_scale},
              {"occlusion", s.occlusion == Occlusion::Stacked ? "stacked" : "none"},
              {"max_hidden_fraction", s.max_hidden_fraction},
              {"stuff_bands", s.stuff_bands}}}};
}

std::string format_table_header()
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-16s %6s %6s %6s %6s %6s %6s %6s %6s %6s", "", "PQ", "SQ", "RQ", "PQ_th",
                  "SQ_th", "RQ_th", "PQ_st", "SQ_st", "RQ_st");
    return buf;
}

std::string format_table_row(const std::string& label, const PQSummary& s)
{
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-16s %6.1f %6.1f %6.1f %6.1f %6.1f %6.1f %6.1f %6.1f %6.1f", label.c_str(),
                  s.all.pq, s.all.sq, s.all.rq, s.things.pq, s.things.sq, s.things.rq, s.stuff.pq, s.stuff.sq,
                  s.stuff.rq);
    return buf;
}

} // namespace pcv
