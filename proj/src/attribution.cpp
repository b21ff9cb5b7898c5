#include "attribution.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace osst {

std::vector<double> standardize_row(const std::vector<double>& row) {
    if (row.empty()) throw usage_error("cannot standardize an empty row");
    const auto [mn, mx] = std::minmax_element(row.begin(), row.end());
    if (*mn == *mx) return std::vector<double>(row.size(), 0.0);

    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= static_cast<double>(row.size());
    double var = 0.0;
    for (double v : row) var += (v - mean) * (v - mean);
    var /= static_cast<double>(row.size());  // population variance
    const double std_dev = std::sqrt(var);

    std::vector<double> out;
    out.reserve(row.size());
    for (double v : row) out.push_back((v - mean) / std_dev);
    return out;
}

std::vector<std::pair<std::string, double>> author_scores(const ScoreTable& table,
                                                          const Corpus& corpus,
                                                          const std::string& target_id,
                                                          bool standardize) {
    if (corpus.authors.empty()) throw usage_error("corpus has no candidate authors");
    const std::vector<double>& raw = table.values.at(table.target_index(target_id));
    const std::vector<double> row = standardize ? standardize_row(raw) : raw;

    // every candidate column must belong to some author
    {
        std::size_t covered = 0;
        for (const auto& [author, doc_ids] : corpus.authors) covered += doc_ids.size();
        if (covered != table.candidate_ids.size())
            throw data_error("candidate columns do not match the corpus author map");
    }

    std::vector<std::pair<std::string, double>> out;
    for (const auto& [author, doc_ids] : corpus.authors) {
        double sum = 0.0;
        for (const auto& id : doc_ids) sum += row.at(table.candidate_index(id));
        out.emplace_back(author, sum / static_cast<double>(doc_ids.size()));
    }
    return out;
}

namespace {

AttributionResult ranked_result(const ScoreTable& table, const Corpus& corpus,
                                const std::string& target_id, bool standardize) {
    AttributionResult r;
    r.target_id = target_id;
    r.standardized = standardize;
    r.ranking = author_scores(table, corpus, target_id, standardize);
    std::stable_sort(r.ranking.begin(), r.ranking.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    r.tie = r.ranking.size() > 1 && r.ranking[0].second == r.ranking[1].second;
    return r;
}

}  // namespace

AttributionResult attribute_closed(const ScoreTable& table, const Corpus& corpus,
                                   const std::string& target_id) {
    AttributionResult r = ranked_result(table, corpus, target_id, /*standardize=*/false);
    r.predicted = r.ranking.front().first;
    return r;
}

AttributionResult attribute_open(const ScoreTable& table, const Corpus& corpus,
                                 const std::string& target_id, double threshold) {
    AttributionResult r = ranked_result(table, corpus, target_id, /*standardize=*/true);
    if (r.ranking.front().second >= threshold) r.predicted = r.ranking.front().first;
    return r;
}

double max_standardized_score(const ScoreTable& table, const Corpus& corpus,
                              const std::string& target_id) {
    const auto scores = author_scores(table, corpus, target_id, /*standardize=*/true);
    double best = scores.front().second;
    for (const auto& [author, s] : scores) best = std::max(best, s);
    return best;
}

CalibrationResult calibrate_open_threshold(const std::vector<LabeledScore>& instances,
                                           Objective objective) {
    return calibrate_threshold(instances, objective);
}

void to_json(json& j, const AttributionResult& r) {
    json ranking = json::array();
    for (const auto& [author, score] : r.ranking)
        ranking.push_back(json{{"author", author}, {"score", score}});
    j = json{{"target_id", r.target_id},
             {"ranking", std::move(ranking)},
             {"predicted", r.predicted ? json(*r.predicted) : json(nullptr)},
             {"standardized", r.standardized},
             {"tie", r.tie}};
}

void from_json(const json& j, AttributionResult& r) {
    j.at("target_id").get_to(r.target_id);
    r.ranking.clear();
    for (const auto& e : j.at("ranking"))
        r.ranking.emplace_back(e.at("author").get<std::string>(), e.at("score").get<double>());
    if (j.at("predicted").is_null())
        r.predicted.reset();
    else
        r.predicted = j.at("predicted").get<std::string>();
    j.at("standardized").get_to(r.standardized);
    j.at("tie").get_to(r.tie);
}

}  // namespace osst
