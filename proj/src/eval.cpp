#include "blurkit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "blurkit/io.hpp"

namespace blurkit {

namespace {

double safe_ratio(std::size_t num, std::size_t den, EmptyDenominator policy) {
    if (den == 0) {
        if (policy == EmptyDenominator::NaN) return std::numeric_limits<double>::quiet_NaN();
        return num == 0 ? 1.0 : 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::pair<double, double> precision_recall(const SegmentationMask& mask,
                                           const SegmentationMask& gt,
                                           EmptyDenominator policy) {
    if (mask.height != gt.height || mask.width != gt.width) {
        throw std::invalid_argument("precision_recall: shape mismatch");
    }
    std::size_t s = 0, g = 0, both = 0;
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        const bool in_s = mask.bits[i] != 0;
        const bool in_g = gt.bits[i] != 0;
        s += in_s;
        g += in_g;
        both += in_s && in_g;
    }
    return {safe_ratio(both, s, policy), safe_ratio(both, g, policy)};
}

PrCurve pr_curve(const GrayImage& score_map, const SegmentationMask& gt,
                 EmptyDenominator policy) {
    if (score_map.height() != gt.height || score_map.width() != gt.width) {
        throw std::invalid_argument("pr_curve: shape mismatch");
    }
    // value*255 >= t  <=>  floor(value*255) >= t for integer t; bucket once,
    // then suffix-sum.
    std::array<std::size_t, 257> sel{};
    std::array<std::size_t, 257> hit{};
    std::size_t g = 0;
    for (std::size_t i = 0; i < score_map.pixel_count(); ++i) {
        int bucket = static_cast<int>(std::floor(score_map.raw()[i] * 255.0));
        bucket = std::clamp(bucket, 0, 255);
        ++sel[bucket];
        if (gt.bits[i]) {
            ++hit[bucket];
            ++g;
        }
    }
    std::size_t sel_suffix = 0, hit_suffix = 0;
    std::array<std::size_t, 256> sel_ge{}, hit_ge{};
    for (int t = 255; t >= 0; --t) {
        sel_suffix += sel[t];
        hit_suffix += hit[t];
        sel_ge[t] = sel_suffix;
        hit_ge[t] = hit_suffix;
    }
    PrCurve curve;
    for (int t = 0; t < 256; ++t) {
        curve.points[t].threshold = t;
        curve.points[t].precision = safe_ratio(hit_ge[t], sel_ge[t], policy);
        curve.points[t].recall = safe_ratio(hit_ge[t], g, policy);
    }
    return curve;
}

double f_alpha(double precision, double recall, double alpha_sq) {
    const double den = alpha_sq * precision + recall;
    if (den <= 0.0) return 0.0;
    return (1.0 + alpha_sq) * precision * recall / den;
}

EvalReport evaluate_dataset(const std::vector<std::pair<std::string, std::string>>& index,
                            const ScoreMapProducer& method, double alpha_sq) {
    EvalReport report;
    report.alpha_sq = alpha_sq;

    std::array<double, 256> mean_p{}, mean_r{};
    std::size_t scored = 0;
    double f_sum = 0.0;

    for (const auto& [image_path, gt_path] : index) {
        GrayImage image, gt_img;
        try {
            image = load_gray(image_path);
            gt_img = load_gray(gt_path);
        } catch (const std::exception& e) {
            report.warnings.push_back("skipped " + image_path + ": " + e.what());
            continue;
        }
        if (image.height() != gt_img.height() || image.width() != gt_img.width()) {
            report.warnings.push_back("skipped " + image_path + ": size mismatch with " + gt_path);
            continue;
        }
        const SegmentationMask gt = mask_from_image(gt_img, 128.0 / 255.0);
        const GrayImage score = method(image);
        const PrCurve curve = pr_curve(score, gt);

        EvalReport::Row row;
        row.image_path = image_path;
        double best = -1.0;
        for (const PrPoint& pt : curve.points) {
            const double f = f_alpha(pt.precision, pt.recall, alpha_sq);
            if (f > best) {
                best = f;
                row.best_threshold = pt.threshold;
                row.precision = pt.precision;
                row.recall = pt.recall;
                row.f = f;
            }
            mean_p[pt.threshold] += pt.precision;
            mean_r[pt.threshold] += pt.recall;
        }
        report.rows.push_back(row);
        report.curves.push_back(curve);
        f_sum += best;
        ++scored;
    }

    if (scored > 0) {
        report.mean_best_f = f_sum / static_cast<double>(scored);
        report.pooled_curve.resize(256);
        double best = -1.0;
        for (int t = 0; t < 256; ++t) {
            PrPoint pt;
            pt.threshold = t;
            pt.precision = mean_p[t] / static_cast<double>(scored);
            pt.recall = mean_r[t] / static_cast<double>(scored);
            report.pooled_curve[t] = pt;
            const double f = f_alpha(pt.precision, pt.recall, alpha_sq);
            if (f > best) {
                best = f;
                report.pooled_best_threshold = t;
            }
        }
        report.pooled_best_f = best;
    }
    return report;
}

namespace {
std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}
}  // namespace

void write_report_csv(const EvalReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "path,best_t,precision,recall,f_alpha\n";
    for (const auto& row : report.rows) {
        out << row.image_path << "," << row.best_threshold << "," << fmt6(row.precision) << ","
            << fmt6(row.recall) << "," << fmt6(row.f) << "\n";
    }
    out << "mean_best_f,," << fmt6(report.mean_best_f) << ",,\n";
    out << "pooled_best_f," << report.pooled_best_threshold << "," << fmt6(report.pooled_best_f)
        << ",,\n";
    for (const auto& warning : report.warnings) {
        out << "# " << warning << "\n";
    }
    if (!out) throw IoError("write failed for " + path);
}

void write_curve_csv(const std::vector<PrPoint>& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "t,precision,recall\n";
    for (const PrPoint& pt : curve) {
        out << pt.threshold << "," << fmt6(pt.precision) << "," << fmt6(pt.recall) << "\n";
    }
    if (!out) throw IoError("write failed for " + path);
}

void write_curve_csv(const PrCurve& curve, const std::string& path) {
    write_curve_csv(std::vector<PrPoint>(curve.points.begin(), curve.points.end()), path);
}

std::vector<std::pair<std::string, std::string>> read_index_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open index " + path);
    std::vector<std::pair<std::string, std::string>> index;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw FormatError("index line " + std::to_string(line_no) +
                              " is not image<TAB>gt: " + line);
        }
        index.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return index;
}

}  // namespace blurkit
