#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "blurkit/config.hpp"
#include "blurkit/dct.hpp"
#include "blurkit/edas.hpp"
#include "blurkit/eval.hpp"
#include "blurkit/io.hpp"
#include "blurkit/segment.hpp"
#include "blurkit/synth.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

blurkit::ToolConfig load_config(const std::string& path) {
    if (path.empty()) return {};
    return blurkit::load_config_file(path);
}

int cmd_blurmap(const std::string& in, const std::string& out_pgm, const std::string& out_txt,
                const std::string& config_path) {
    const blurkit::ToolConfig cfg = load_config(config_path);
    const blurkit::GrayImage image = blurkit::load_gray(in);
    const blurkit::PipelineConfig pipeline = cfg.pipeline.resolved(image.height(), image.width());
    const blurkit::BlurMap map = blurkit::blur_map(image, pipeline.dct);
    if (!out_pgm.empty()) blurkit::save_pgm(map, out_pgm);
    if (!out_txt.empty()) blurkit::save_text_matrix(map, out_txt);
    return 0;
}

int cmd_segment(const std::string& in, const std::string& out, const std::string& config_path,
                const std::string& map_out, const std::string& firemap_out, bool trace) {
    const blurkit::ToolConfig cfg = load_config(config_path);
    const blurkit::GrayImage image = blurkit::load_gray(in);
    const blurkit::SegmentationResult result =
        blurkit::segment_debug(image, cfg.pipeline, trace ? &std::cerr : nullptr);
    blurkit::save_pgm(blurkit::mask_to_image(result.mask), out);
    if (!map_out.empty()) blurkit::save_pgm(result.map, map_out);
    if (!firemap_out.empty()) {
        blurkit::save_text_matrix(result.fire.height, result.fire.width, result.fire.first_fire,
                                  firemap_out);
    }
    return 0;
}

int cmd_eval(const std::string& index_path, const std::string& out, const std::string& curve_dir,
             const std::string& config_path, const std::string& method) {
    const blurkit::ToolConfig cfg = load_config(config_path);
    const auto index = blurkit::read_index_file(index_path);

    blurkit::ScoreMapProducer producer;
    if (method == "blurmap") {
        producer = [&cfg](const blurkit::GrayImage& img) {
            const auto pipeline = cfg.pipeline.resolved(img.height(), img.width());
            return blurkit::blur_map(img, pipeline.dct);
        };
    } else if (method == "segment") {
        producer = [&cfg](const blurkit::GrayImage& img) {
            return blurkit::mask_to_image(blurkit::segment(img, cfg.pipeline));
        };
    } else {
        throw std::invalid_argument("unknown eval method: " + method);
    }

    const blurkit::EvalReport report = blurkit::evaluate_dataset(index, producer, cfg.alpha_sq);
    blurkit::write_report_csv(report, out);
    for (const auto& warning : report.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    if (!curve_dir.empty() && !report.pooled_curve.empty()) {
        std::filesystem::create_directories(curve_dir);
        blurkit::write_curve_csv(report.pooled_curve,
                                 (std::filesystem::path(curve_dir) / "pooled_curve.csv").string());
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const std::string stem = std::filesystem::path(report.rows[i].image_path).stem().string();
            blurkit::write_curve_csv(
                report.curves[i],
                (std::filesystem::path(curve_dir) / (stem + "_curve.csv")).string());
        }
    }
    return 0;
}

int cmd_rank(const std::string& matrix_path, const std::string& out, bool canonical) {
    const blurkit::DecisionMatrix matrix = blurkit::read_decision_csv(matrix_path);
    blurkit::EdasOptions opts;
    opts.canonical = canonical;
    const blurkit::EdasResult result = blurkit::edas_rank(matrix, opts);
    blurkit::write_ranking_csv(matrix, result, out);
    return 0;
}

int cmd_synth(const std::string& prefix, int width, int height, const std::string& texture,
              const std::vector<int>& rect, double bg_sigma, unsigned seed, int checker_period) {
    blurkit::SynthSpec spec;
    spec.width = width;
    spec.height = height;
    if (texture == "noise") {
        spec.texture = blurkit::SynthSpec::Texture::Noise;
    } else if (texture == "checker") {
        spec.texture = blurkit::SynthSpec::Texture::Checker;
    } else {
        throw std::invalid_argument("texture must be noise or checker");
    }
    if (rect.size() != 4) throw std::invalid_argument("--rect needs x0,y0,x1,y1");
    spec.fg_x0 = rect[0];
    spec.fg_y0 = rect[1];
    spec.fg_x1 = rect[2];
    spec.fg_y1 = rect[3];
    spec.bg_sigma = bg_sigma;
    spec.seed = seed;
    spec.checker_period = checker_period;

    const blurkit::SynthFixture fx = blurkit::make_fixture(spec);
    blurkit::save_pgm(fx.image, prefix + "_image.pgm");
    blurkit::save_pgm(blurkit::mask_to_image(fx.matte), prefix + "_matte.pgm");
    std::ofstream manifest(prefix + ".manifest");
    if (!manifest) throw blurkit::IoError("cannot write " + prefix + ".manifest");
    manifest << fx.manifest_line << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Defocus-blur region detection toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.footer("Config file keys (section.key = default):\n" + blurkit::config_help());

    std::string in, out, out_txt, config_path, map_out, firemap_out, curve_dir, index_path,
        matrix_path, method = "blurmap", texture = "noise", prefix;
    bool trace = false, canonical = false;
    int width = 64, height = 64, checker_period = 2;
    std::vector<int> rect = {16, 16, 48, 48};
    double bg_sigma = 4.0;
    unsigned seed = 0;

    auto* blurmap = app.add_subcommand("blurmap", "Compute the per-pixel sharpness map");
    blurmap->add_option("--in", in, "input image (PGM or PNG)")->required();
    blurmap->add_option("--out", out, "output map as 8-bit PGM");
    blurmap->add_option("--out-txt", out_txt, "output map as plain-text matrix");
    blurmap->add_option("--config", config_path, "config file");

    auto* segment = app.add_subcommand("segment", "Segment in-focus regions");
    segment->add_option("--in", in, "input image (PGM or PNG)")->required();
    segment->add_option("--out", out, "output binary mask (PGM, 0/255)")->required();
    segment->add_option("--config", config_path, "config file");
    segment->add_option("--map-out", map_out, "also write the sharpness map (PGM)");
    segment->add_option("--firemap-out", firemap_out, "also write the firing iterations (text)");
    segment->add_flag("--trace", trace, "emit per-iteration fired counts on stderr");

    auto* eval = app.add_subcommand("eval", "Score an indexed dataset");
    eval->add_option("--index", index_path, "index file: image<TAB>gt per line")->required();
    eval->add_option("--out", out, "report CSV")->required();
    eval->add_option("--curve-dir", curve_dir, "directory for the pooled PR curve CSV");
    eval->add_option("--config", config_path, "config file");
    eval->add_option("--method", method, "score-map producer: blurmap|segment");

    auto* rank = app.add_subcommand("rank", "Rank alternatives from a decision-matrix CSV");
    rank->add_option("--matrix", matrix_path, "decision matrix CSV")->required();
    rank->add_option("--out", out, "ranking CSV")->required();
    rank->add_flag("--canonical", canonical, "textbook orientation (highest score ranks first)");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic fixture");
    synth->add_option("--out-prefix", prefix, "output path prefix")->required();
    synth->add_option("--width", width, "image width");
    synth->add_option("--height", height, "image height");
    synth->add_option("--texture", texture, "noise|checker");
    synth->add_option("--rect", rect, "foreground rectangle x0,y0,x1,y1")->delimiter(',');
    synth->add_option("--bg-sigma", bg_sigma, "background blur std-dev");
    synth->add_option("--seed", seed, "noise seed")->required();
    synth->add_option("--checker-period", checker_period, "checker cell size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (blurmap->parsed()) {
            if (out.empty() && out_txt.empty()) {
                std::cerr << "usage error: blurmap needs --out and/or --out-txt\n";
                return 1;
            }
            return cmd_blurmap(in, out, out_txt, config_path);
        }
        if (segment->parsed()) {
            return cmd_segment(in, out, config_path, map_out, firemap_out, trace);
        }
        if (eval->parsed()) return cmd_eval(index_path, out, curve_dir, config_path, method);
        if (rank->parsed()) return cmd_rank(matrix_path, out, canonical);
        if (synth->parsed()) {
            return cmd_synth(prefix, width, height, texture, rect, bg_sigma, seed, checker_period);
        }
    } catch (const blurkit::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
