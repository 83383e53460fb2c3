#pragma once

// Oracle experiments over seeded synthetic corpora.

#include "pcv/oracle.hpp"
#include "pcv/synth.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace pcv {

struct CorpusConfig {
    SceneSpec scene;          ///< full-resolution scene template; seed is overridden per scene
    int scenes = 200;
    std::uint64_t seed = 7;
    std::vector<GridScheme> schemes{GridScheme::Default};
    InferOptions infer;       ///< infer.fuse.scale is the working-resolution factor
    /// When set, full-resolution ground truth and predictions are written as
    /// COCO panoptic archives: gt.json + gt/, pred_<scheme>.json + pred_<scheme>/.
    std::filesystem::path export_dir;
};

/// Template used by the oracle experiments: crowded mixed-scale scenes with mild occlusion.
SceneSpec oracle_corpus_scene();

struct SchemeResult {
    GridScheme scheme = GridScheme::Default;
    int cells = 0;
    PQStats working; ///< prediction vs downsampled ground truth
    PQStats full;    ///< upsampled prediction vs full-resolution ground truth
};

struct CorpusReport {
    int scenes = 0;
    PQStats ceiling; ///< upsampled downsampled ground truth vs full-resolution ground truth
    std::vector<SchemeResult> schemes;
};

/// Runs fn(0..count-1) on up to `jobs` threads. The first exception thrown is
/// rethrown after all workers finish.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

/// Scene i uses seed mix_seed(seed + i). Scenes are spread over `jobs`
/// threads; results are reduced in scene order so the report does not depend
/// on the job count.
CorpusReport run_corpus(const CorpusConfig& config, int jobs = 1);

nlohmann::ordered_json summary_json(const PQSummary& s);
nlohmann::ordered_json stats_json(const PQStats& stats, const CategoryTable& categories);
nlohmann::ordered_json report_json(const CorpusReport& report, const CategoryTable& categories);
nlohmann::ordered_json config_json(const CorpusConfig& config);

/// Fixed-width table with the PQ, SQ, RQ, PQ_th, SQ_th, RQ_th, PQ_st, SQ_st, RQ_st columns.
std::string format_table_header();
std::string format_table_row(const std::string& label, const PQSummary& s);

} // namespace pcv
