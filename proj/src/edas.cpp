#include "blurkit/edas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace blurkit {

void DecisionMatrix::validate() const {
    if (alternatives.empty() || criteria.empty()) {
        throw std::invalid_argument("decision matrix needs at least one alternative and criterion");
    }
    if (scores.size() != alternatives.size() * criteria.size()) {
        throw std::invalid_argument("decision matrix score count mismatch");
    }
    if (weights.size() != criteria.size()) {
        throw std::invalid_argument("decision matrix needs one weight per criterion");
    }
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("criterion weights must be non-negative");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) throw std::invalid_argument("scores must be finite");
    }
    if (fixed_means && fixed_means->size() != criteria.size()) {
        throw std::invalid_argument("fixed means must cover every criterion");
    }
    if (fixed_sp && fixed_sp->size() != alternatives.size()) {
        throw std::invalid_argument("fixed sp must cover every alternative");
    }
    if (fixed_sn && fixed_sn->size() != alternatives.size()) {
        throw std::invalid_argument("fixed sn must cover every alternative");
    }
    for (const auto* fixed : {&fixed_sp, &fixed_sn}) {
        if (!fixed->has_value()) continue;
        for (double v : **fixed) {
            if (!(v >= 0.0)) throw std::invalid_argument("fixed aggregates must be non-negative");
        }
    }
}

std::vector<double> mean_solution(const DecisionMatrix& m) {
    m.validate();
    const std::size_t na = m.alternatives.size();
    const std::size_t nc = m.criteria.size();
    std::vector<double> means(nc, 0.0);
    for (std::size_t b = 0; b < nc; ++b) {
        if (m.fixed_means && std::isfinite((*m.fixed_means)[b])) {
            means[b] = (*m.fixed_means)[b];
            continue;
        }
        double acc = 0.0;
        for (std::size_t a = 0; a < na; ++a) acc += m.score(a, b);
        means[b] = acc / static_cast<double>(na);
    }
    return means;
}

void distances(const DecisionMatrix& m, const std::vector<double>& means,
               std::vector<double>& pd, std::vector<double>& nd, const EdasOptions& opts) {
    m.validate();
    const std::size_t na = m.alternatives.size();
    const std::size_t nc = m.criteria.size();
    if (means.size() != nc) throw std::invalid_argument("distances: means count mismatch");
    for (double mu : means) {
        if (mu == 0.0) throw std::invalid_argument("distances: zero criterion mean");
    }
    pd.assign(na * nc, 0.0);
    nd.assign(na * nc, 0.0);
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t b = 0; b < nc; ++b) {
            const double mu = means[b];
            const double below = std::max(0.0, mu - m.score(a, b)) / mu;
            const double above = std::max(0.0, m.score(a, b) - mu) / mu;
            // Source-table orientation penalizes scoring below a benefit
            // criterion's mean; canonical EDAS rewards it.
            const bool below_is_pd = m.criteria[b].benefit != opts.canonical;
            pd[a * nc + b] = below_is_pd ? below : above;
            nd[a * nc + b] = below_is_pd ? above : below;
        }
    }
}

void aggregate(const DecisionMatrix& m, const std::vector<double>& pd,
               const std::vector<double>& nd, std::vector<double>& sp, std::vector<double>& sn) {
    const std::size_t na = m.alternatives.size();
    const std::size_t nc = m.criteria.size();
    if (pd.size() != na * nc || nd.size() != na * nc) {
        throw std::invalid_argument("aggregate: distance matrix shape mismatch");
    }
    sp.assign(na, 0.0);
    sn.assign(na, 0.0);
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t b = 0; b < nc; ++b) {
            sp[a] += m.weights[b] * pd[a * nc + b];
            sn[a] += m.weights[b] * nd[a * nc + b];
        }
    }
    if (m.fixed_sp) sp = *m.fixed_sp;
    if (m.fixed_sn) sn = *m.fixed_sn;
}

void appraise(const std::vector<double>& sp, const std::vector<double>& sn,
              std::vector<double>& nsp, std::vector<double>& nsn, std::vector<double>& score,
              std::vector<int>& rank, const EdasOptions& opts) {
    if (sp.size() != sn.size() || sp.empty()) {
        throw std::invalid_argument("appraise: aggregate vectors mismatch");
    }
    const std::size_t na = sp.size();
    const double max_sp = *std::max_element(sp.begin(), sp.end());
    const double max_sn = *std::max_element(sn.begin(), sn.end());
    nsp.assign(na, 0.0);
    nsn.assign(na, 1.0);
    for (std::size_t a = 0; a < na; ++a) {
        if (max_sp > 0.0) nsp[a] = sp[a] / max_sp;
        if (max_sn > 0.0) nsn[a] = 1.0 - sn[a] / max_sn;
    }
    score.assign(na, 0.0);
    for (std::size_t a = 0; a < na; ++a) score[a] = 0.5 * (nsp[a] + nsn[a]);

    std::vector<std::size_t> order(na);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        // Lowest score ranks first in the source-table orientation.
        return opts.canonical ? score[i] > score[j] : score[i] < score[j];
    });
    rank.assign(na, 0);
    for (std::size_t pos = 0; pos < na; ++pos) rank[order[pos]] = static_cast<int>(pos) + 1;
}

EdasResult edas_rank(const DecisionMatrix& m, const EdasOptions& opts) {
    EdasResult r;
    r.means = mean_solution(m);
    distances(m, r.means, r.pd, r.nd, opts);
    aggregate(m, r.pd, r.nd, r.sp, r.sn);
    appraise(r.sp, r.sn, r.nsp, r.nsn, r.score, r.rank, opts);
    return r;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw FormatError("line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
    }
}

}  // namespace

DecisionMatrix read_decision_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    DecisionMatrix m;
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw FormatError("empty decision CSV: " + path);
    ++line_no;

    // Column kinds: criterion (benefit/cost), fixed_sp, fixed_sn.
    enum class Col { Criterion, FixedSp, FixedSn };
    std::vector<Col> col_kinds;
    const auto header = split_csv_line(line);
    if (header.empty() || trim(header[0]) != "alternative") {
        throw FormatError("decision CSV must start with an 'alternative' header column");
    }
    for (std::size_t i = 1; i < header.size(); ++i) {
        const std::string cell = trim(header[i]);
        const auto colon = cell.rfind(':');
        const std::string name = colon == std::string::npos ? cell : cell.substr(0, colon);
        const std::string tag = colon == std::string::npos ? "benefit" : cell.substr(colon + 1);
        if (tag == "benefit" || tag == "cost") {
            col_kinds.push_back(Col::Criterion);
            m.criteria.push_back({name, tag == "benefit"});
        } else if (tag == "fixed_sp") {
            col_kinds.push_back(Col::FixedSp);
        } else if (tag == "fixed_sn") {
            col_kinds.push_back(Col::FixedSn);
        } else {
            throw FormatError("header column '" + cell +
                              "' must be tagged benefit, cost, fixed_sp or fixed_sn");
        }
    }
    if (m.criteria.empty()) throw FormatError("decision CSV has no criterion columns");

    std::vector<double> fixed_sp, fixed_sn;
    bool has_fixed_sp = false, has_fixed_sn = false;
    std::optional<std::vector<double>> weights, means;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        const std::string name = trim(cells[0]);
        if (name == "weights" || name == "means") {
            std::vector<double> values;
            for (std::size_t i = 1; i < cells.size() && i <= col_kinds.size(); ++i) {
                if (col_kinds[i - 1] != Col::Criterion) continue;
                const std::string cell = trim(cells[i]);
                if (!cell.empty()) values.push_back(parse_number(cell, line_no));
            }
            if (values.size() != m.criteria.size()) {
                throw FormatError("line " + std::to_string(line_no) + ": '" + name + "' row needs " +
                                  std::to_string(m.criteria.size()) + " values");
            }
            (name == "weights" ? weights : means) = values;
            continue;
        }
        if (cells.size() != col_kinds.size() + 1) {
            throw FormatError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(col_kinds.size() + 1) + " cells");
        }
        m.alternatives.push_back(name);
        for (std::size_t i = 1; i < cells.size(); ++i) {
            const double v = parse_number(trim(cells[i]), line_no);
            switch (col_kinds[i - 1]) {
                case Col::Criterion: m.scores.push_back(v); break;
                case Col::FixedSp: fixed_sp.push_back(v); has_fixed_sp = true; break;
                case Col::FixedSn: fixed_sn.push_back(v); has_fixed_sn = true; break;
            }
        }
    }

    if (weights) {
        m.weights = *weights;
    } else {
        m.weights.assign(m.criteria.size(), 1.0);
    }
    if (means) m.fixed_means = means;
    if (has_fixed_sp) m.fixed_sp = fixed_sp;
    if (has_fixed_sn) m.fixed_sn = fixed_sn;
    m.validate();
    return m;
}

void write_ranking_csv(const DecisionMatrix& m, const EdasResult& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    char buf[32];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
    };
    out << "alternative,sp,sn,nsp,nsn,as,rank\n";
    for (std::size_t a = 0; a < m.alternatives.size(); ++a) {
        out << m.alternatives[a] << "," << fmt(r.sp[a]) << "," << fmt(r.sn[a]) << ","
            << fmt(r.nsp[a]) << "," << fmt(r.nsn[a]) << "," << fmt(r.score[a]) << "," << r.rank[a]
            << "\n";
    }
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace blurkit
