#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "blurkit/image.hpp"
#include "blurkit/segment.hpp"

namespace blurkit {

// What to report when a precision/recall denominator is empty.
enum class EmptyDenominator {
    One,  // empty selection with empty intersection counts as perfect
    NaN,  // propagate not-a-number
};

struct PrPoint {
    int threshold = 0;
    double precision = 0.0;
    double recall = 0.0;
};

struct PrCurve {
    std::array<PrPoint, 256> points;
};

std::pair<double, double> precision_recall(const SegmentationMask& mask,
                                           const SegmentationMask& gt,
                                           EmptyDenominator policy = EmptyDenominator::One);

// Sweeps t = 0..255 over value*255 >= t.
PrCurve pr_curve(const GrayImage& score_map, const SegmentationMask& gt,
                 EmptyDenominator policy = EmptyDenominator::One);

// Weighted harmonic mean (1+a2)PR/(a2*P+R); 0 when both are 0.
double f_alpha(double precision, double recall, double alpha_sq = 0.3);

struct EvalReport {
    struct Row {
        std::string image_path;
        int best_threshold = 0;
        double precision = 0.0;  // at the best threshold
        double recall = 0.0;
        double f = 0.0;
    };
    std::vector<Row> rows;
    std::vector<PrCurve> curves;        // one per scored row
    std::vector<std::string> warnings;  // skipped pairs
    double alpha_sq = 0.3;
    double mean_best_f = 0.0;    // average of per-image maxima
    double pooled_best_f = 0.0;  // max F over the threshold-wise mean-PR curve
    int pooled_best_threshold = 0;
    std::vector<PrPoint> pooled_curve;  // empty when no image scored
};

using ScoreMapProducer = std::function<GrayImage(const GrayImage&)>;

// Runs the producer over every (image, ground truth) pair. Pairs that fail to
// load or mismatch in shape are skipped with a warning row.
EvalReport evaluate_dataset(const std::vector<std::pair<std::string, std::string>>& index,
                            const ScoreMapProducer& method, double alpha_sq = 0.3);

// "path,best_t,precision,recall,f_alpha" rows plus dataset summary lines.
void write_report_csv(const EvalReport& report, const std::string& path);
// "t,precision,recall" for all 256 thresholds.
void write_curve_csv(const PrCurve& curve, const std::string& path);
void write_curve_csv(const std::vector<PrPoint>& curve, const std::string& path);

// One "image<TAB>gt" pair per line; blank lines and #-comments skipped.
std::vector<std::pair<std::string, std::string>> read_index_file(const std::string& path);

}  // namespace blurkit
