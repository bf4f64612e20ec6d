#pragma once

// C4.5-style decision tree: gain-ratio splits, multiway categorical branches
// with a dedicated missing-value branch, binary numeric splits, no pruning.
// Training is deterministic given the training-set order and parameters.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "privlens/features.hpp"

namespace privlens {

struct TreeParams {
    std::size_t min_leaf = 2;  // nodes smaller than this become leaves
};

struct SplitScore {
    double info = 0.0;        // entropy of the node, bits
    double gain = 0.0;        // info - weighted branch entropy
    double split_info = 0.0;  // entropy of the branch sizes
    double gain_ratio = 0.0;  // gain / split_info, 0 when split_info is 0
};

namespace detail {

inline double entropy_bits(const std::vector<std::size_t>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace detail

// Gain-ratio bookkeeping for one candidate partition: labels[i] belongs to
// branch branch_of[i]. Exposed so scores can be checked against hand-computed
// entropy on small fixtures.
inline SplitScore score_partition(const std::vector<Category>& labels,
                                  const std::vector<std::size_t>& branch_of,
                                  std::size_t n_branches) {
    if (labels.size() != branch_of.size())
        throw std::invalid_argument("score_partition: labels and branches must align");
    const std::size_t n = labels.size();
    std::vector<std::size_t> node_counts(kAllCategories.size(), 0);
    std::vector<std::vector<std::size_t>> branch_counts(
        n_branches, std::vector<std::size_t>(kAllCategories.size(), 0));
    std::vector<std::size_t> branch_sizes(n_branches, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++node_counts[static_cast<std::size_t>(labels[i])];
        ++branch_counts[branch_of[i]][static_cast<std::size_t>(labels[i])];
        ++branch_sizes[branch_of[i]];
    }
    SplitScore score;
    score.info = detail::entropy_bits(node_counts, n);
    double weighted = 0.0;
    for (std::size_t b = 0; b < n_branches; ++b) {
        if (branch_sizes[b] == 0) continue;
        const double w = static_cast<double>(branch_sizes[b]) / static_cast<double>(n);
        weighted += w * detail::entropy_bits(branch_counts[b], branch_sizes[b]);
    }
    score.gain = score.info - weighted;
    score.split_info = detail::entropy_bits(branch_sizes, n);
    score.gain_ratio = score.split_info > 0.0 ? score.gain / score.split_info : 0.0;
    return score;
}

class DecisionTree {
public:
    struct Node {
        enum class Type { Leaf, Categorical, Numeric };
        Type type = Type::Leaf;
        Category majority = Category::F;               // prediction fallback at any node
        std::map<Category, std::size_t> counts;        // class distribution
        std::size_t attribute = 0;                     // split attribute (non-leaf)
        double threshold = 0.0;                        // numeric split
        std::map<std::string, std::unique_ptr<Node>> branches;  // categorical children
        std::unique_ptr<Node> le;                      // numeric: value <= threshold
        std::unique_ptr<Node> gt;                      // numeric: value > threshold
        std::unique_ptr<Node> missing;                 // rows with no value, when seen
    };

    static DecisionTree train(const LabeledDataset& train_set, const TreeParams& params = {}) {
        if (train_set.examples.empty())
            throw std::invalid_argument("train_tree: training set must be non-empty");
        if (train_set.schema.size() == 0)
            throw std::invalid_argument("train_tree: schema must have at least one attribute");
        DecisionTree tree;
        tree.scheme_ = train_set.scheme;
        tree.schema_ = train_set.schema;
        tree.params_ = params;
        std::vector<std::size_t> all(train_set.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        std::vector<bool> used(train_set.schema.size(), false);
        tree.root_ = build(train_set, all, used, params);
        return tree;
    }

    PrivacyCategory predict(const FeatureVector& x) const {
        if (x.size() != schema_.size())
            throw std::invalid_argument("predict_tree: query does not match the schema");
        const Node* node = root_.get();
        while (node->type != Node::Type::Leaf) {
            const FeatureValue& v = x[node->attribute];
            const Node* next = nullptr;
            if (node->type == Node::Type::Categorical) {
                if (v.is_category()) {
                    auto it = node->branches.find(v.as_category());
                    if (it != node->branches.end()) next = it->second.get();
                }
                if (next == nullptr) next = node->missing.get();
            } else {
                if (v.is_number()) {
                    next = v.as_number() <= node->threshold ? node->le.get() : node->gt.get();
                } else {
                    next = node->missing.get();
                }
            }
            if (next == nullptr) return {node->majority, scheme_};
            node = next;
        }
        return {node->majority, scheme_};
    }

    // Indented text form, one branch per line, leaves annotated with
    // (reached/misclassified) counts.
    std::string to_text() const {
        std::ostringstream out;
        if (root_->type == Node::Type::Leaf) {
            out << ": ";
            append_leaf(out, *root_);
            out << "\n";
        } else {
            append_subtree(out, *root_, 0);
        }
        return out.str();
    }

    nlohmann::json to_json() const {
        nlohmann::json schema = nlohmann::json::array();
        for (const FeatureSpec& spec : schema_.attributes)
            schema.push_back({{"name", spec.name},
                              {"kind", spec.kind == FeatureKind::Numeric ? "numeric"
                                                                         : "categorical"}});
        return nlohmann::json{{"scheme", std::string(to_string(scheme_))},
                              {"min_leaf", params_.min_leaf},
                              {"schema", std::move(schema)},
                              {"root", node_to_json(*root_)}};
    }

    static DecisionTree from_json(const nlohmann::json& j) {
        DecisionTree tree;
        const auto scheme = scheme_from_string(j.at("scheme").get<std::string>());
        if (!scheme) throw ValidationError("tree: unknown scheme");
        tree.scheme_ = *scheme;
        tree.params_.min_leaf = j.at("min_leaf").get<std::size_t>();
        for (const auto& spec : j.at("schema")) {
            const std::string kind = spec.at("kind").get<std::string>();
            if (kind != "numeric" && kind != "categorical")
                throw ValidationError("tree: unknown attribute kind '" + kind + "'");
            tree.schema_.attributes.push_back(
                {spec.at("name").get<std::string>(),
                 kind == "numeric" ? FeatureKind::Numeric : FeatureKind::Categorical});
        }
        tree.root_ = node_from_json(j.at("root"), tree.schema_, tree.scheme_);
        return tree;
    }

    const Node& root() const { return *root_; }
    const FeatureSchema& schema() const { return schema_; }
    Scheme scheme() const { return scheme_; }

    std::size_t node_count() const { return count_nodes(*root_); }
    std::size_t depth() const { return node_depth(*root_); }

private:
    static std::vector<std::size_t> label_counts(const LabeledDataset& data,
                                                 const std::vector<std::size_t>& rows) {
        std::vector<std::size_t> counts(kAllCategories.size(), 0);
        for (std::size_t i : rows) ++counts[static_cast<std::size_t>(data.examples[i].label)];
        return counts;
    }

    static Category majority_of(const std::vector<std::size_t>& counts) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < counts.size(); ++c)
            if (counts[c] > counts[best]) best = c;  // ties keep the lower revealing rank
        return static_cast<Category>(best);
    }

    struct Candidate {
        bool valid = false;
        SplitScore score;
        std::size_t attribute = 0;
        double threshold = 0.0;  // numeric only
    };

    static std::unique_ptr<Node> build(const LabeledDataset& data,
                                       const std::vector<std::size_t>& rows,
                                       std::vector<bool>& used_categorical,
                                       const TreeParams& params) {
        auto node = std::make_unique<Node>();
        const std::vector<std::size_t> counts = label_counts(data, rows);
        node->majority = majority_of(counts);
        for (std::size_t c = 0; c < counts.size(); ++c)
            if (counts[c] > 0) node->counts[static_cast<Category>(c)] = counts[c];
        const bool pure = node->counts.size() <= 1;
        if (pure || rows.size() < params.min_leaf) return node;

        Candidate best;
        std::vector<Category> labels;
        labels.reserve(rows.size());
        for (std::size_t i : rows) labels.push_back(data.examples[i].label);

        for (std::size_t a = 0; a < data.schema.size(); ++a) {
            const FeatureSpec& spec = data.schema.attributes[a];
            Candidate candidate;
            if (spec.kind == FeatureKind::Categorical) {
                if (used_categorical[a]) continue;
                candidate = score_categorical(data, rows, labels, a);
            } else {
                candidate = score_numeric(data, rows, labels, a);
            }
            if (!candidate.valid) continue;
            if (!best.valid || candidate.score.gain_ratio > best.score.gain_ratio)
                best = candidate;  // ties keep the earlier attribute
        }
        if (!best.valid) return node;

        node->attribute = best.attribute;
        const FeatureSpec& spec = data.schema.attributes[best.attribute];
        if (spec.kind == FeatureKind::Categorical) {
            node->type = Node::Type::Categorical;
            std::map<std::string, std::vector<std::size_t>> by_value;
            std::vector<std::size_t> missing_rows;
            for (std::size_t i : rows) {
                const FeatureValue& v = data.examples[i].features[best.attribute];
                if (v.is_category())
                    by_value[v.as_category()].push_back(i);
                else
                    missing_rows.push_back(i);
            }
            used_categorical[best.attribute] = true;
            for (auto& [value, child_rows] : by_value)
                node->branches[value] = build(data, child_rows, used_categorical, params);
            if (!missing_rows.empty())
                node->missing = build(data, missing_rows, used_categorical, params);
            used_categorical[best.attribute] = false;
        } else {
            node->type = Node::Type::Numeric;
            node->threshold = best.threshold;
            std::vector<std::size_t> le_rows, gt_rows, missing_rows;
            for (std::size_t i : rows) {
                const FeatureValue& v = data.examples[i].features[best.attribute];
                if (!v.is_number())
                    missing_rows.push_back(i);
                else if (v.as_number() <= best.threshold)
                    le_rows.push_back(i);
                else
                    gt_rows.push_back(i);
            }
            node->le = build(data, le_rows, used_categorical, params);
            node->gt = build(data, gt_rows, used_categorical, params);
            if (!missing_rows.empty())
                node->missing = build(data, missing_rows, used_categorical, params);
        }
        return node;
    }

    static Candidate score_categorical(const LabeledDataset& data,
                                       const std::vector<std::size_t>& rows,
                                       const std::vector<Category>& labels, std::size_t a) {
        Candidate candidate;
        std::map<std::string, std::size_t> branch_index;  // sorted values -> branch
        bool any_missing = false;
        for (std::size_t i : rows) {
            const FeatureValue& v = data.examples[i].features[a];
            if (v.is_category())
                branch_index.emplace(v.as_category(), 0);
            else
                any_missing = true;
        }
        std::size_t next = 0;
        for (auto& [_, idx] : branch_index) idx = next++;
        const std::size_t n_branches = branch_index.size() + (any_missing ? 1 : 0);
        if (n_branches < 2) return candidate;
        std::vector<std::size_t> branch_of(rows.size(), 0);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const FeatureValue& v = data.examples[rows[r]].features[a];
            branch_of[r] = v.is_category() ? branch_index[v.as_category()] : branch_index.size();
        }
        const SplitScore score = score_partition(labels, branch_of, n_branches);
        if (score.gain <= 1e-12) return candidate;
        candidate.valid = true;
        candidate.score = score;
        candidate.attribute = a;
        return candidate;
    }

    static Candidate score_numeric(const LabeledDataset& data,
                                   const std::vector<std::size_t>& rows,
                                   const std::vector<Category>& labels, std::size_t a) {
        Candidate candidate;
        std::vector<double> present;
        bool any_missing = false;
        for (std::size_t i : rows) {
            const FeatureValue& v = data.examples[i].features[a];
            if (v.is_number())
                present.push_back(v.as_number());
            else
                any_missing = true;
        }
        std::sort(present.begin(), present.end());
        present.erase(std::unique(present.begin(), present.end()), present.end());
        if (present.size() < 2) return candidate;
        const std::size_t n_branches = any_missing ? 3 : 2;
        std::vector<std::size_t> branch_of(rows.size(), 0);
        for (std::size_t t = 0; t + 1 < present.size(); ++t) {
            const double threshold = (present[t] + present[t + 1]) / 2.0;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const FeatureValue& v = data.examples[rows[r]].features[a];
                branch_of[r] = !v.is_number() ? 2 : (v.as_number() <= threshold ? 0 : 1);
            }
            const SplitScore score = score_partition(labels, branch_of, n_branches);
            if (score.gain <= 1e-12) continue;
            if (!candidate.valid || score.gain_ratio > candidate.score.gain_ratio) {
                candidate.valid = true;
                candidate.score = score;
                candidate.attribute = a;
                candidate.threshold = threshold;  // ties keep the smaller threshold
            }
        }
        return candidate;
    }

    void append_leaf(std::ostringstream& out, const Node& node) const {
        std::size_t total = 0;
        std::size_t wrong = 0;
        for (const auto& [category, count] : node.counts) {
            total += count;
            if (category != node.majority) wrong += count;
        }
        out << to_string(node.majority) << " (" << total;
        if (wrong > 0) out << "/" << wrong;
        out << ")";
    }

    void append_subtree(std::ostringstream& out, const Node& node, std::size_t depth) const {
        const std::string& attr = schema_.attributes[node.attribute].name;
        auto emit_branch = [&](const std::string& test, const Node& child) {
            for (std::size_t d = 0; d < depth; ++d) out << "|   ";
            out << attr << " " << test;
            if (child.type == Node::Type::Leaf) {
                out << " : ";
                append_leaf(out, child);
                out << "\n";
            } else {
                out << "\n";
                append_subtree(out, child, depth + 1);
            }
        };
        if (node.type == Node::Type::Categorical) {
            for (const auto& [value, child] : node.branches) emit_branch("= " + value, *child);
            if (node.missing) emit_branch("= (missing)", *node.missing);
        } else {
            std::ostringstream t;
            t << node.threshold;
            emit_branch("<= " + t.str(), *node.le);
            emit_branch("> " + t.str(), *node.gt);
            if (node.missing) emit_branch("= (missing)", *node.missing);
        }
    }

    nlohmann::json node_to_json(const Node& node) const {
        nlohmann::json j;
        j["majority"] = std::string(to_string(node.majority));
        nlohmann::json counts = nlohmann::json::object();
        for (const auto& [category, count] : node.counts)
            counts[std::string(to_string(category))] = count;
        j["counts"] = std::move(counts);
        switch (node.type) {
            case Node::Type::Leaf:
                j["type"] = "leaf";
                break;
            case Node::Type::Categorical: {
                j["type"] = "categorical";
                j["attribute"] = schema_.attributes[node.attribute].name;
                nlohmann::json branches = nlohmann::json::object();
                for (const auto& [value, child] : node.branches)
                    branches[value] = node_to_json(*child);
                j["branches"] = std::move(branches);
                if (node.missing) j["missing"] = node_to_json(*node.missing);
                break;
            }
            case Node::Type::Numeric:
                j["type"] = "numeric";
                j["attribute"] = schema_.attributes[node.attribute].name;
                j["threshold"] = node.threshold;
                j["le"] = node_to_json(*node.le);
                j["gt"] = node_to_json(*node.gt);
                if (node.missing) j["missing"] = node_to_json(*node.missing);
                break;
        }
        return j;
    }

    static std::unique_ptr<Node> node_from_json(const nlohmann::json& j,
                                                const FeatureSchema& schema, Scheme scheme) {
        auto node = std::make_unique<Node>();
        const auto majority = category_from_string(j.at("majority").get<std::string>());
        if (!majority || !scheme_allows(scheme, *majority))
            throw ValidationError("tree: invalid majority label");
        node->majority = *majority;
        for (const auto& [key, value] : j.at("counts").items()) {
            const auto category = category_from_string(key);
            if (!category || !scheme_allows(scheme, *category))
                throw ValidationError("tree: invalid count label '" + key + "'");
            node->counts[*category] = value.get<std::size_t>();
        }
        const std::string type = j.at("type").get<std::string>();
        if (type == "leaf") return node;
        const auto attribute = schema.index_of(j.at("attribute").get<std::string>());
        if (!attribute) throw ValidationError("tree: split on unknown attribute");
        node->attribute = *attribute;
        if (type == "categorical") {
            node->type = Node::Type::Categorical;
            for (const auto& [value, child] : j.at("branches").items())
                node->branches[value] = node_from_json(child, schema, scheme);
        } else if (type == "numeric") {
            node->type = Node::Type::Numeric;
            node->threshold = j.at("threshold").get<double>();
            node->le = node_from_json(j.at("le"), schema, scheme);
            node->gt = node_from_json(j.at("gt"), schema, scheme);
        } else {
            throw ValidationError("tree: unknown node type '" + type + "'");
        }
        if (j.contains("missing")) node->missing = node_from_json(j.at("missing"), schema, scheme);
        return node;
    }

    static std::size_t count_nodes(const Node& node) {
        std::size_t n = 1;
        for (const auto& [_, child] : node.branches) n += count_nodes(*child);
        if (node.le) n += count_nodes(*node.le);
        if (node.gt) n += count_nodes(*node.gt);
        if (node.missing) n += count_nodes(*node.missing);
        return n;
    }

    static std::size_t node_depth(const Node& node) {
        std::size_t deepest = 0;
        for (const auto& [_, child] : node.branches)
            deepest = std::max(deepest, node_depth(*child));
        if (node.le) deepest = std::max(deepest, node_depth(*node.le));
        if (node.gt) deepest = std::max(deepest, node_depth(*node.gt));
        if (node.missing) deepest = std::max(deepest, node_depth(*node.missing));
        return deepest + 1;
    }

    Scheme scheme_ = Scheme::SevenClass;
    FeatureSchema schema_;
    TreeParams params_;
    std::unique_ptr<Node> root_;
};

}  // namespace privlens
