// pcv: command-line front end for the voting pipeline.
//
//   pcv gridinfo --scheme default
//   pcv oracle --scheme default --scenes 200 --seed 7 --report out.json
//   pcv eval-pq --pred pred.json --gt gt.json
//   pcv render --seed 3 --heatmap heat.png --peaks peaks.png --masks masks.png
//   pcv infer --votes v.pcvt --semantic s.pcvt --categories cats.json --out pred.json

#include "pcv/harness.hpp"
#include "pcv/panoptic_io.hpp"
#include "pcv/render.hpp"
#include "pcv/simd/kernels.hpp"
#include "pcv/tensor_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const std::map<std::string, pcv::GridScheme> kSchemes{{"default", pcv::GridScheme::Default},
                                                      {"simple", pcv::GridScheme::Simple},
                                                      {"uniform", pcv::GridScheme::Uniform},
                                                      {"toy", pcv::GridScheme::Toy}};

struct PipelineFlags {
    std::string scheme = "default";
    double threshold = pcv::kDefaultPeakThreshold;
    int top_k = pcv::kDefaultTopK;
    std::int64_t min_stuff_area = pcv::kCocoMinStuffArea;
    int scale = 4;
    int connectivity = 8;

    void add_to(CLI::App* cmd, bool with_scheme = true)
    {
        if (with_scheme) {
            cmd->add_option("--scheme", scheme, "Grid scheme")->check(CLI::IsMember(kSchemes));
        }
        cmd->add_option("--threshold", threshold, "Peak threshold on the voting heatmap")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--topk", top_k, "Votes per pixel compared during backprojection")->check(CLI::PositiveNumber);
        cmd->add_option("--min-stuff-area", min_stuff_area, "Smallest stuff segment kept, full-resolution pixels")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--scale", scale, "Full resolution / working resolution")->check(CLI::PositiveNumber);
        cmd->add_option("--connectivity", connectivity, "Peak connectivity")->check(CLI::IsMember({4, 8}));
    }

    pcv::InferOptions options() const
    {
        pcv::InferOptions o;
        o.threshold = threshold;
        o.top_k = top_k;
        o.connectivity = connectivity == 4 ? pcv::Connectivity::Four : pcv::Connectivity::Eight;
        o.fuse.min_stuff_area = min_stuff_area;
        o.fuse.scale = scale;
        return o;
    }

    ordered_json json() const
    {
        return {{"scheme", scheme},       {"threshold", threshold},
                {"top_k", top_k},         {"min_stuff_area", min_stuff_area},
                {"scale", scale},         {"connectivity", connectivity}};
    }
};

fs::path config_path_for(const fs::path& report)
{
    fs::path p = report;
    p.replace_extension();
    p += ".config.json";
    return p;
}

void write_json(const fs::path& path, const ordered_json& doc)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    out << doc.dump(2) << '\n';
    if (!out) {
        throw pcv::IoError(pcv::IoError::Kind::Unwritable, "cannot write " + path.string());
    }
}

ordered_json simd_json() { return pcv::simd::active_kernels().name; }

// ---------------------------------------------------------------------------

int run_gridinfo(const std::string& scheme_name, const std::string& png, int zoom)
{
    const pcv::GridScheme scheme = kSchemes.at(scheme_name);
    const pcv::GridSpec spec = pcv::grid_for(scheme);
    const pcv::CellTable table = pcv::build_grid(spec);

    std::cout << "scheme = " << scheme_name << '\n';
    std::cout << "M = " << table.side() << '\n';
    std::cout << "K = " << table.cell_count() << '\n';
    std::cout << "rings:\n";
    for (std::size_t l = 0; l < spec.rings.size(); ++l) {
        const auto& ring = spec.rings[l];
        const int outer = ring.extent / ring.cell_size;
        const int inner = l == 0 ? 0 : spec.rings[l - 1].extent / ring.cell_size;
        std::cout << "  extent " << ring.extent << "  cell size " << ring.cell_size << "  cells "
                  << outer * outer - inner * inner << '\n';
    }
    const fs::path out = png.empty() ? fs::path("grid_" + scheme_name + ".png") : fs::path(png);
    pcv::write_png(out, pcv::render_grid(table, zoom));
    std::cout << "png = " << out.string() << '\n';
    return 0;
}

// ---------------------------------------------------------------------------

struct OracleFlags {
    std::vector<std::string> schemes{"default"};
    int scenes = 200;
    std::uint64_t seed = 7;
    std::string report;
    int jobs = 1;
    pcv::SceneSpec scene = pcv::oracle_corpus_scene();
    std::string occlusion = "stacked";
    std::string export_dir;
    PipelineFlags pipeline;
};

int run_oracle(const OracleFlags& f)
{
    pcv::CorpusConfig config;
    config.scene = f.scene;
    config.scene.occlusion = f.occlusion == "none" ? pcv::Occlusion::None : pcv::Occlusion::Stacked;
    config.scenes = f.scenes;
    config.seed = f.seed;
    config.schemes.clear();
    for (const std::string& s : f.schemes) {
        config.schemes.push_back(kSchemes.at(s));
    }
    config.infer = f.pipeline.options();
    config.export_dir = f.export_dir;

    const pcv::CorpusReport report = pcv::run_corpus(config, f.jobs);
    const pcv::CategoryTable categories = pcv::synth_categories();

    std::cout << pcv::format_table_header() << '\n';
    std::cout << pcv::format_table_row("1/4 gt", report.ceiling.summarize(categories)) << '\n';
    for (const pcv::SchemeResult& s : report.schemes) {
        std::cout << pcv::format_table_row(std::string(pcv::scheme_name(s.scheme)) + " grid",
                                           s.full.summarize(categories))
                  << '\n';
    }

    if (!f.report.empty()) {
        write_json(f.report, pcv::report_json(report, categories));
        ordered_json echo = pcv::config_json(config);
        echo["jobs"] = f.jobs;
        echo["simd"] = simd_json();
        write_json(config_path_for(f.report), echo);
        std::cout << "report = " << f.report << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------

int run_eval(const std::string& pred_json, const std::string& pred_dir, const std::string& gt_json,
             const std::string& gt_dir, const std::string& report_path, int jobs)
{
    const auto pred = pcv::PanopticArchive::open(pred_json, pred_dir);
    const auto gt = pcv::PanopticArchive::open(gt_json, gt_dir);
    const pcv::CategoryTable& categories = gt.categories();

    const auto& images = gt.images();
    std::vector<pcv::PQStats> per_image(images.size());
    pcv::parallel_for(static_cast<int>(images.size()), jobs, [&](int i) {
        const std::int64_t id = images[static_cast<std::size_t>(i)].id;
        const pcv::PanopticMap g = pcv::to_panoptic_map(gt.read_annotation(id));
        const pcv::PanopticMap p = pcv::to_panoptic_map(pred.read_annotation(id));
        per_image[static_cast<std::size_t>(i)] = pcv::evaluate(p, g, categories);
    });
    pcv::PQStats total;
    for (const auto& s : per_image) {
        total += s;
    }

    const pcv::PQSummary summary = total.summarize(categories);
    std::cout << pcv::format_table_header() << '\n';
    std::cout << pcv::format_table_row("prediction", summary) << '\n';
    if (!report_path.empty()) {
        ordered_json doc = {{"images", images.size()}, {"stats", pcv::stats_json(total, categories)}};
        write_json(report_path, doc);
        write_json(config_path_for(report_path), {{"pred", pred_json},
                                                  {"pred_dir", pred.png_dir().string()},
                                                  {"gt", gt_json},
                                                  {"gt_dir", gt.png_dir().string()},
                                                  {"jobs", jobs}});
        std::cout << "report = " << report_path << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct InputFlags {
    std::string votes;
    std::string semantic;
    std::string categories;
    int seed = -1;
};

pcv::CategoryTable load_categories(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw pcv::IoError(pcv::IoError::Kind::MissingFile, "cannot open " + path);
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw pcv::IoError(pcv::IoError::Kind::MalformedJson, path + ": " + e.what());
    }
    return pcv::parse_categories(doc.is_object() ? doc.at("categories") : doc);
}

struct LoadedInput {
    pcv::VoteTensor votes;
    pcv::Plane<pcv::CategoryId> semantic;
    pcv::CategoryTable categories;
};

LoadedInput load_input(const InputFlags& in, const pcv::FilterPair& filters, int scale)
{
    LoadedInput out;
    if (in.seed >= 0) {
        pcv::SceneSpec spec = pcv::oracle_corpus_scene();
        spec.seed = pcv::mix_seed(static_cast<std::uint64_t>(in.seed));
        const auto working = pcv::downsample_annotation(pcv::generate(spec), scale);
        const pcv::LabelField labels = pcv::encode_labels(working, filters.voting);
        out.votes = pcv::one_hot_votes(labels);
        out.semantic = labels.semantic;
        out.categories = pcv::synth_categories();
        return out;
    }
    if (in.votes.empty() || in.semantic.empty() || in.categories.empty()) {
        throw pcv::Error("need either --seed or all of --votes, --semantic and --categories");
    }
    out.votes = pcv::read_vote_tensor(in.votes);
    out.votes.validate();
    out.semantic = pcv::read_label_map(in.semantic);
    out.categories = load_categories(in.categories);
    return out;
}

int run_render(const InputFlags& in, const PipelineFlags& pf, const std::string& heat_png,
               const std::string& peaks_png, const std::string& masks_png)
{
    if (heat_png.empty() && peaks_png.empty() && masks_png.empty()) {
        throw pcv::Error("nothing to render: pass --heatmap, --peaks and/or --masks");
    }
    const pcv::FilterPair filters(pcv::grid_for(kSchemes.at(pf.scheme)));
    const LoadedInput input = load_input(in, filters, pf.scale);
    const pcv::InferResult r = pcv::infer(input.votes, input.semantic, filters, input.categories, pf.options());
    const int h = r.heat.height();
    const int w = r.heat.width();
    if (!heat_png.empty()) {
        pcv::write_png_gray(heat_png, w, h, pcv::render_heatmap(r.heat));
        std::cout << "heatmap = " << heat_png << '\n';
    }
    if (!peaks_png.empty()) {
        pcv::write_png(peaks_png, pcv::render_peaks(h, w, r.peaks));
        std::cout << "peaks = " << peaks_png << " (" << r.peaks.size() << " regions)\n";
    }
    if (!masks_png.empty()) {
        pcv::write_png(masks_png, pcv::render_masks(h, w, r.masks));
        std::cout << "masks = " << masks_png << '\n';
    }
    return 0;
}

int run_infer(const InputFlags& in, const PipelineFlags& pf, const std::string& out_json, std::string png_dir,
              std::int64_t image_id, const std::string& name)
{
    const pcv::FilterPair filters(pcv::grid_for(kSchemes.at(pf.scheme)));
    const LoadedInput input = load_input(in, filters, pf.scale);
    if (input.votes.channels() != filters.voting.cell_count() + 1) {
        throw pcv::ShapeError("vote tensor has " + std::to_string(input.votes.channels()) + " channels but the " +
                              pf.scheme + " grid needs " + std::to_string(filters.voting.cell_count() + 1));
    }
    const pcv::InferResult r = pcv::infer(input.votes, input.semantic, filters, input.categories, pf.options());

    if (png_dir.empty()) {
        png_dir = fs::path(out_json).replace_extension().string();
    }
    pcv::ArchiveWriter writer(out_json, png_dir, input.categories);
    writer.write_prediction(r.panoptic, image_id, name);
    writer.finish();

    ordered_json echo = pf.json();
    echo["votes"] = in.votes;
    echo["semantic"] = in.semantic;
    echo["categories"] = in.categories;
    echo["seed"] = in.seed;
    echo["image_id"] = image_id;
    echo["simd"] = simd_json();
    write_json(config_path_for(out_json), echo);
    std::cout << "segments = " << r.panoptic.segments.size() << '\n';
    std::cout << "archive = " << out_json << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pixel voting panoptic segmentation pipeline"};
    app.require_subcommand(1);
    std::string simd = "auto";
    app.add_option("--simd", simd, "Kernel variant: auto, scalar, avx2, neon")
        ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));

    // gridinfo
    auto* gridinfo = app.add_subcommand("gridinfo", "Print a grid layout and render its partition");
    std::string grid_scheme = "default";
    std::string grid_png;
    int grid_zoom = 2;
    gridinfo->add_option("--scheme", grid_scheme, "Grid scheme")->check(CLI::IsMember(kSchemes));
    gridinfo->add_option("--png", grid_png, "Output PNG (default grid_<scheme>.png)");
    gridinfo->add_option("--zoom", grid_zoom, "Pixels per offset in the PNG")->check(CLI::Range(1, 16));

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Oracle inference over a seeded synthetic corpus");
    OracleFlags of;
    oracle->add_option("--scheme", of.schemes, "Grid scheme(s)")->check(CLI::IsMember(kSchemes))->expected(1, -1);
    oracle->add_option("--scenes", of.scenes, "Number of scenes")->check(CLI::NonNegativeNumber);
    oracle->add_option("--seed", of.seed, "Corpus seed");
    oracle->add_option("--report", of.report, "Write the JSON report here");
    oracle->add_option("--jobs", of.jobs, "Worker threads")->check(CLI::PositiveNumber);
    oracle->add_option("--height", of.scene.height, "Scene height, full resolution")->check(CLI::PositiveNumber);
    oracle->add_option("--width", of.scene.width, "Scene width, full resolution")->check(CLI::PositiveNumber);
    oracle->add_option("--min-instances", of.scene.min_instances)->check(CLI::NonNegativeNumber);
    oracle->add_option("--max-instances", of.scene.max_instances)->check(CLI::NonNegativeNumber);
    oracle->add_option("--min-scale", of.scene.min_scale, "Smallest instance side, full resolution")
        ->check(CLI::PositiveNumber);
    oracle->add_option("--max-scale", of.scene.max_scale, "Largest instance side, full resolution")
        ->check(CLI::PositiveNumber);
    oracle->add_option("--occlusion", of.occlusion)->check(CLI::IsMember({"none", "stacked"}));
    oracle->add_option("--max-hidden", of.scene.max_hidden_fraction, "Largest hidden fraction per instance")
        ->check(CLI::Range(0.0, 1.0));
    oracle->add_option("--export", of.export_dir, "Write ground truth and predictions as COCO panoptic archives");
    of.pipeline.add_to(oracle, false);

    // eval-pq
    auto* eval = app.add_subcommand("eval-pq", "Panoptic quality of a prediction archive");
    std::string pred_json, pred_dir, gt_json, gt_dir, eval_report;
    int eval_jobs = 1;
    eval->add_option("--pred", pred_json, "Prediction JSON")->required()->check(CLI::ExistingFile);
    eval->add_option("--pred-dir", pred_dir, "Prediction PNG directory (default: JSON path without extension)");
    eval->add_option("--gt", gt_json, "Ground-truth JSON")->required()->check(CLI::ExistingFile);
    eval->add_option("--gt-dir", gt_dir, "Ground-truth PNG directory (default: JSON path without extension)");
    eval->add_option("--report", eval_report, "Write the JSON report here");
    eval->add_option("--jobs", eval_jobs, "Worker threads")->check(CLI::PositiveNumber);

    // render
    auto* render = app.add_subcommand("render", "Render heatmap, peak regions and masks");
    InputFlags render_in;
    PipelineFlags render_pf;
    std::string heat_png, peaks_png, masks_png;
    render->add_option("--seed", render_in.seed, "Use a synthetic oracle scene with this seed")
        ->check(CLI::NonNegativeNumber);
    render->add_option("--votes", render_in.votes, "Vote tensor (.pcvt)");
    render->add_option("--semantic", render_in.semantic, "Semantic label map (.pcvt)");
    render->add_option("--categories", render_in.categories, "Category JSON");
    render->add_option("--heatmap", heat_png, "Grayscale heatmap PNG");
    render->add_option("--peaks", peaks_png, "Peak region PNG");
    render->add_option("--masks", masks_png, "Instance mask PNG");
    render_pf.add_to(render);

    // infer
    auto* inferc = app.add_subcommand("infer", "Panoptic output from a vote tensor and a semantic map");
    InputFlags infer_in;
    PipelineFlags infer_pf;
    std::string infer_out, infer_png_dir, infer_name = "prediction";
    std::int64_t infer_image_id = 1;
    inferc->add_option("--votes", infer_in.votes, "Vote tensor (.pcvt)")->check(CLI::ExistingFile);
    inferc->add_option("--semantic", infer_in.semantic, "Semantic label map (.pcvt)")->check(CLI::ExistingFile);
    inferc->add_option("--categories", infer_in.categories, "Category JSON")->check(CLI::ExistingFile);
    inferc->add_option("--seed", infer_in.seed, "Use a synthetic oracle scene instead")->check(CLI::NonNegativeNumber);
    inferc->add_option("--out", infer_out, "Output panoptic JSON")->required();
    inferc->add_option("--png-dir", infer_png_dir, "Output PNG directory (default: JSON path without extension)");
    inferc->add_option("--image-id", infer_image_id, "Image id recorded in the archive");
    inferc->add_option("--name", infer_name, "PNG base name");
    infer_pf.add_to(inferc);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simd != "auto") {
            if (!pcv::simd::set_active_isa(*pcv::simd::parse_isa(simd))) {
                std::cerr << "error: kernel variant " << simd << " is not available on this machine\n";
                return 1;
            }
        }
        if (gridinfo->parsed()) return run_gridinfo(grid_scheme, grid_png, grid_zoom);
        if (oracle->parsed()) return run_oracle(of);
        if (eval->parsed()) return run_eval(pred_json, pred_dir, gt_json, gt_dir, eval_report, eval_jobs);
        if (render->parsed()) return run_render(render_in, render_pf, heat_png, peaks_png, masks_png);
        if (inferc->parsed())
            return run_infer(infer_in, infer_pf, infer_out, infer_png_dir, infer_image_id, infer_name);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
