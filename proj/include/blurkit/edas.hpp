#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blurkit/io.hpp"

namespace blurkit {

struct Criterion {
    std::string name;
    bool benefit = true;  // higher score is better
};

// Alternatives x criteria scores plus ranking inputs. fixed_* members
// override the corresponding computed stage (published-table reproduction).
struct DecisionMatrix {
    std::vector<std::string> alternatives;
    std::vector<Criterion> criteria;
    std::vector<double> scores;  // row-major [alternative][criterion]
    std::vector<double> weights;
    std::optional<std::vector<double>> fixed_means;  // per criterion
    std::optional<std::vector<double>> fixed_sp;     // per alternative
    std::optional<std::vector<double>> fixed_sn;     // per alternative

    double score(std::size_t a, std::size_t b) const {
        return scores[a * criteria.size() + b];
    }
    void validate() const;
};

struct EdasOptions {
    // Default orientation follows the source tables: distance below a
    // benefit criterion's mean is the penalizing "positive" distance and the
    // lowest appraisal score ranks first. canonical=true gives the textbook
    // form (above-mean is positive, highest score ranks first).
    bool canonical = false;
};

struct EdasResult {
    std::vector<double> means;        // per criterion
    std::vector<double> pd, nd;       // row-major distance matrices
    std::vector<double> sp, sn;       // per alternative aggregates
    std::vector<double> nsp, nsn;     // normalized aggregates
    std::vector<double> score;        // appraisal score per alternative
    std::vector<int> rank;            // 1-based, rank 1 = best
};

std::vector<double> mean_solution(const DecisionMatrix& m);

// Distance matrices relative to the means; guarded against zero means.
void distances(const DecisionMatrix& m, const std::vector<double>& means,
               std::vector<double>& pd, std::vector<double>& nd,
               const EdasOptions& opts = {});

void aggregate(const DecisionMatrix& m, const std::vector<double>& pd,
               const std::vector<double>& nd, std::vector<double>& sp,
               std::vector<double>& sn);

// Normalization, appraisal score and rank from the aggregates.
void appraise(const std::vector<double>& sp, const std::vector<double>& sn,
              std::vector<double>& nsp, std::vector<double>& nsn, std::vector<double>& score,
              std::vector<int>& rank, const EdasOptions& opts = {});

EdasResult edas_rank(const DecisionMatrix& m, const EdasOptions& opts = {});

// CSV front end. Header: alternative,<name>:benefit|cost,...; additional
// columns may be tagged :fixed_sp / :fixed_sn; optional pseudo-rows
// "weights" and "means" supply per-criterion values.
DecisionMatrix read_decision_csv(const std::string& path);
void write_ranking_csv(const DecisionMatrix& m, const EdasResult& r, const std::string& path);

}  // namespace blurkit
