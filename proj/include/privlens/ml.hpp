#pragma once

// Percentage split, the mixed categorical/numeric distance, KNN prediction,
// and accuracy evaluation. Everything here is deterministic for a fixed seed
// and fixed input order; every tie resolves toward the more privacy-preserving
// category.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "privlens/features.hpp"
#include "privlens/rng.hpp"

namespace privlens {

// ---------------------------------------------------------------------------
// Percentage split.

struct SplitSpec {
    double train_fraction = 0.66;
    std::uint64_t rng_seed = 0;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// |train| = round(fraction * n); partitions are disjoint, exhaustive, and kept
// in dataset order so downstream tie-breaks stay reproducible.
inline SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
    if (n < 2) throw std::invalid_argument("split: need at least 2 records");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw std::invalid_argument("split: train_fraction must lie in (0,1)");
    const auto train_size = static_cast<std::size_t>(
        std::llround(spec.train_fraction * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(spec.rng_seed);
    draw_shuffle(rng, order);
    SplitIndices out;
    out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_size));
    out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(train_size), order.end());
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

inline std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& dataset,
                                                               const SplitSpec& spec) {
    const SplitIndices idx = split_indices(dataset.size(), spec);
    LabeledDataset train{dataset.scheme, dataset.schema, {}};
    LabeledDataset test{dataset.scheme, dataset.schema, {}};
    train.examples.reserve(idx.train.size());
    test.examples.reserve(idx.test.size());
    for (std::size_t i : idx.train) train.examples.push_back(dataset.examples[i]);
    for (std::size_t i : idx.test) test.examples.push_back(dataset.examples[i]);
    return {std::move(train), std::move(test)};
}

// ---------------------------------------------------------------------------
// Distance. Per attribute: Missing matches only Missing; a present value is at
// distance 1 from Missing; categorical values are 0/1; numeric values are
// |a-b| scaled by the training range and clipped to [0,1]. The mean over
// attributes of these bounded metrics is itself a pseudometric.

inline double attribute_distance(const FeatureValue& a, const FeatureValue& b,
                                 double numeric_range) {
    if (a.is_missing() && b.is_missing()) return 0.0;
    if (a.is_missing() || b.is_missing()) return 1.0;
    if (a.is_number() && b.is_number()) {
        if (numeric_range > 0.0)
            return std::min(1.0, std::abs(a.as_number() - b.as_number()) / numeric_range);
        return a.as_number() == b.as_number() ? 0.0 : 1.0;
    }
    return a.as_category() == b.as_category() ? 0.0 : 1.0;
}

// Per-attribute value range (max - min over present values) of the training
// set; 0 for categorical attributes and for numeric attributes with no
// observed values.
inline std::vector<double> numeric_ranges(const LabeledDataset& train) {
    std::vector<double> ranges(train.schema.size(), 0.0);
    for (std::size_t a = 0; a < train.schema.size(); ++a) {
        if (train.schema.attributes[a].kind != FeatureKind::Numeric) continue;
        bool seen = false;
        double lo = 0.0, hi = 0.0;
        for (const LabeledExample& ex : train.examples) {
            const FeatureValue& v = ex.features[a];
            if (!v.is_number()) continue;
            if (!seen) {
                lo = hi = v.as_number();
                seen = true;
            } else {
                lo = std::min(lo, v.as_number());
                hi = std::max(hi, v.as_number());
            }
        }
        ranges[a] = seen ? hi - lo : 0.0;
    }
    return ranges;
}

inline double feature_distance(const FeatureVector& x, const FeatureVector& y,
                               const std::vector<double>& ranges) {
    if (x.size() != y.size() || x.size() != ranges.size())
        throw std::invalid_argument("feature_distance: vector sizes do not match");
    if (x.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a)
        sum += attribute_distance(x[a], y[a], ranges[a]);
    return sum / static_cast<double>(x.size());
}

// ---------------------------------------------------------------------------
// KNN.

// Mean-distance KNN vote over the k nearest training records. Ties on the
// k-th distance break by dataset order; vote ties break by smallest summed
// distance, then by the more privacy-preserving category.
inline PrivacyCategory knn_predict(const LabeledDataset& train, const FeatureVector& x,
                                   std::size_t k = 4) {
    if (k < 1) throw std::invalid_argument("knn_predict: k must be >= 1");
    if (train.size() < k)
        throw std::invalid_argument("knn_predict: training set smaller than k");
    if (x.size() != train.schema.size())
        throw std::invalid_argument("knn_predict: query does not match the schema");
    const std::vector<double> ranges = numeric_ranges(train);
    std::vector<std::pair<double, std::size_t>> by_distance;
    by_distance.reserve(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
        by_distance.emplace_back(feature_distance(x, train.examples[i].features, ranges), i);
    std::sort(by_distance.begin(), by_distance.end());

    std::array<std::size_t, kAllCategories.size()> votes{};
    std::array<double, kAllCategories.size()> summed{};
    for (std::size_t j = 0; j < k; ++j) {
        const auto& [dist, idx] = by_distance[j];
        const auto c = static_cast<std::size_t>(train.examples[idx].label);
        ++votes[c];
        summed[c] += dist;
    }
    std::size_t best = kAllCategories.size();
    for (std::size_t c = 0; c < kAllCategories.size(); ++c) {
        if (votes[c] == 0) continue;
        if (best == kAllCategories.size() || votes[c] > votes[best] ||
            (votes[c] == votes[best] && summed[c] < summed[best]))
            best = c;  // equal votes and equal sum keep the lower rank seen first
    }
    return {static_cast<Category>(best), train.scheme};
}

// ---------------------------------------------------------------------------
// Evaluation.

struct EvaluationReport {
    Scheme scheme = Scheme::SevenClass;
    std::size_t n_test = 0;
    std::size_t n_correct = 0;
    double accuracy_percent = 0.0;
    std::vector<Category> labels;                     // scheme's categories, revealing order
    std::vector<std::vector<std::size_t>> confusion;  // [actual][predicted]

    std::string to_text() const {
        std::ostringstream out;
        out << "correctly classified instances: " << n_correct << " / " << n_test << " ("
            << std::fixed << std::setprecision(2) << accuracy_percent << "%)\n";
        out << "confusion matrix (rows: actual, columns: predicted)\n";
        out << "        ";
        for (Category c : labels) out << std::setw(6) << to_string(c);
        out << "\n";
        for (std::size_t a = 0; a < labels.size(); ++a) {
            out << std::setw(8) << to_string(labels[a]);
            for (std::size_t p = 0; p < labels.size(); ++p) out << std::setw(6) << confusion[a][p];
            out << "\n";
        }
        return out.str();
    }

    nlohmann::json to_json() const {
        nlohmann::json matrix = nlohmann::json::object();
        for (std::size_t a = 0; a < labels.size(); ++a) {
            nlohmann::json row = nlohmann::json::object();
            for (std::size_t p = 0; p < labels.size(); ++p)
                row[std::string(to_string(labels[p]))] = confusion[a][p];
            matrix[std::string(to_string(labels[a]))] = std::move(row);
        }
        return nlohmann::json{{"scheme", std::string(to_string(scheme))},
                              {"n_test", n_test},
                              {"n_correct", n_correct},
                              {"accuracy_percent", accuracy_percent},
                              {"confusion", std::move(matrix)}};
    }
};

inline EvaluationReport evaluate(
    const LabeledDataset& test,
    const std::function<PrivacyCategory(const FeatureVector&)>& predict) {
    if (test.examples.empty()) throw std::invalid_argument("evaluate: test set must be non-empty");
    EvaluationReport report;
    report.scheme = test.scheme;
    report.labels = scheme_categories(test.scheme);
    report.n_test = test.size();
    report.confusion.assign(report.labels.size(),
                            std::vector<std::size_t>(report.labels.size(), 0));
    auto label_index = [&](Category c) {
        for (std::size_t i = 0; i < report.labels.size(); ++i)
            if (report.labels[i] == c) return i;
        throw std::invalid_argument("evaluate: label outside the scheme");
    };
    for (const LabeledExample& ex : test.examples) {
        const PrivacyCategory predicted = predict(ex.features);
        if (predicted.scheme != test.scheme)
            throw std::invalid_argument("evaluate: predictor emitted a different scheme");
        if (predicted.value == ex.label) ++report.n_correct;
        ++report.confusion[label_index(ex.label)][label_index(predicted.value)];
    }
    report.accuracy_percent =
        100.0 * static_cast<double>(report.n_correct) / static_cast<double>(report.n_test);
    return report;
}

}  // namespace privlens
