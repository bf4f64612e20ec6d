// privlens: privacy-behavior analysis over photo/tag exposure.
//
// Subcommands: synth, ingest, stats, label, train-tree, knn-eval, recommend,
// report. Every output is a pure function of the input files, flags, and
// seeds. Exit codes: 0 success, 1 usage, 2 validation/parse, 3 internal.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "privlens/privlens.hpp"

namespace {

using namespace privlens;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + out_path);
    out << text;
}

Scheme parse_scheme(const std::string& text) {
    const auto scheme = scheme_from_string(text);
    if (!scheme) throw std::invalid_argument("scheme must be 3, 5, or 7");
    return *scheme;
}

LabelingConfig parse_labeling(const std::string& five_rule) {
    LabelingConfig cfg;
    if (five_rule == "photo_fraction")
        cfg.five_class_rule = FiveClassRule::PhotoFraction;
    else if (five_rule == "raw_ratio")
        cfg.five_class_rule = FiveClassRule::RawRatio;
    else
        throw std::invalid_argument("five-rule must be photo_fraction or raw_ratio");
    return cfg;
}

std::map<Category, double> parse_mix(const std::string& text) {
    std::map<Category, double> mix;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("mix entries look like CATEGORY=WEIGHT");
        const auto category = category_from_string(item.substr(0, eq));
        if (!category)
            throw std::invalid_argument("unknown category '" + item.substr(0, eq) + "'");
        mix[*category] = std::stod(item.substr(eq + 1));
    }
    return mix;
}

// Features + rule label per user, shared by the classifier commands.
LabeledDataset build_labeled(const Dataset& dataset, Scheme scheme,
                             const std::vector<std::string>& features, bool with_exposure,
                             const LabelingConfig& labeling, const GeometryConfig& geometry) {
    LabeledDataset out{scheme, make_schema(features, with_exposure), {}};
    out.examples.reserve(dataset.users.size());
    for (const UserRecord& user : dataset.users) {
        const UserExposure exposure = compute_exposure(user, geometry);
        out.examples.push_back({extract_features(user, out.schema, &exposure),
                                label_scheme(exposure, scheme, labeling).value});
    }
    return out;
}

std::vector<std::string> default_features() {
    return {kProfileAttributeNames.begin(), kProfileAttributeNames.end()};
}

// Leave-one-out KNN over profile features: the predicted category for each
// user comes from their k most similar peers.
std::vector<PrivacyCategory> predict_peers(const LabeledDataset& labeled, std::size_t k) {
    if (labeled.size() < k + 1)
        throw std::invalid_argument("recommend: need more than k users for peer prediction");
    std::vector<PrivacyCategory> out;
    out.reserve(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        LabeledDataset rest{labeled.scheme, labeled.schema, {}};
        rest.examples.reserve(labeled.size() - 1);
        for (std::size_t j = 0; j < labeled.size(); ++j)
            if (j != i) rest.examples.push_back(labeled.examples[j]);
        out.push_back(knn_predict(rest, labeled.examples[i].features, k));
    }
    return out;
}

std::string stats_text(const DisclosureStats& stats) {
    std::ostringstream out;
    out << "attribute missing percentages\n";
    for (const auto& [name, stat] : stats.attributes) {
        out << "  " << name << ": ";
        if (stat.percent)
            out << *stat.percent << "% (" << stat.missing_count << "/" << stat.total_count
                << ")";
        else
            out << "n/a";
        out << "\n";
    }
    out << "exposure by gender\n";
    for (const auto& [gender, totals] : stats.by_gender)
        out << "  " << gender << ": faces=" << totals.faces << " tags=" << totals.tags
            << " albums=" << totals.albums << " public_albums=" << totals.public_albums
            << "\n";
    return out.str();
}

nlohmann::json stats_json(const DisclosureStats& stats) {
    nlohmann::json attributes = nlohmann::json::object();
    for (const auto& [name, stat] : stats.attributes) {
        nlohmann::json entry{{"missing", stat.missing_count}, {"total", stat.total_count}};
        if (stat.percent)
            entry["percent"] = *stat.percent;
        else
            entry["percent"] = nullptr;
        attributes[name] = std::move(entry);
    }
    nlohmann::json by_gender = nlohmann::json::object();
    for (const auto& [gender, totals] : stats.by_gender)
        by_gender[gender] = {{"faces", totals.faces},
                             {"tags", totals.tags},
                             {"albums", totals.albums},
                             {"public_albums", totals.public_albums}};
    return nlohmann::json{{"attributes", std::move(attributes)},
                          {"by_gender", std::move(by_gender)}};
}

int run(int argc, char** argv) {
    CLI::App app{"privacy-behavior analysis over photo/tag exposure"};
    app.require_subcommand(1);

    // --- synth --------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "generate a seeded synthetic dataset");
    std::uint64_t synth_seed = 0;
    std::size_t synth_users = 100;
    std::string synth_mix, synth_out, synth_labels_out;
    synth_cmd->add_option("--seed", synth_seed, "generator seed")->capture_default_str();
    synth_cmd->add_option("--users", synth_users, "number of users")->capture_default_str();
    synth_cmd->add_option("--mix", synth_mix,
                          "partial category mix, e.g. P+=0.32,FP=0.24 (unlisted categories "
                          "share the remainder)");
    synth_cmd->add_option("--out", synth_out, "dataset file (default stdout)");
    synth_cmd->add_option("--labels-out", synth_labels_out,
                          "write intended labels as user_id<TAB>category");

    // --- ingest ---------------------------------------------------------------
    auto* ingest_cmd = app.add_subcommand("ingest", "validate, normalize, and canonicalize a "
                                                    "dataset file");
    std::string ingest_in, ingest_out, ingest_canon, ingest_since;
    std::size_t ingest_max_albums = 5, ingest_max_photos = 10;
    ingest_cmd->add_option("--in", ingest_in, "input dataset file")->required();
    ingest_cmd->add_option("--out", ingest_out, "output dataset file (default stdout)");
    ingest_cmd->add_option("--canon", ingest_canon, "canonicalization table (TSV)");
    ingest_cmd->add_option("--max-albums", ingest_max_albums, "most recent albums kept")
        ->capture_default_str();
    ingest_cmd
        ->add_option("--max-photos", ingest_max_photos, "most recent photos kept per album")
        ->capture_default_str();
    ingest_cmd->add_option("--since", ingest_since,
                           "drop photos taken before this ISO-8601 timestamp (photos without "
                           "timestamps are kept)");

    // --- stats ----------------------------------------------------------------
    auto* stats_cmd = app.add_subcommand("stats", "disclosure statistics");
    std::string stats_in, stats_format = "text", stats_out;
    stats_cmd->add_option("--in", stats_in, "dataset file")->required();
    stats_cmd->add_option("--format", stats_format, "text or json")->capture_default_str();
    stats_cmd->add_option("--out", stats_out, "output file (default stdout)");

    // --- label ------------------------------------------------------------------
    auto* label_cmd = app.add_subcommand("label", "assign privacy categories by rule");
    std::string label_in, label_scheme_text = "7", label_five_rule = "photo_fraction",
                label_out;
    label_cmd->add_option("--in", label_in, "dataset file")->required();
    label_cmd->add_option("--scheme", label_scheme_text, "3, 5, or 7")->capture_default_str();
    label_cmd->add_option("--five-rule", label_five_rule,
                          "5-class face clause: photo_fraction or raw_ratio")
        ->capture_default_str();
    label_cmd->add_option("--out", label_out, "output file (default stdout)");

    // --- train-tree ---------------------------------------------------------------
    auto* tree_cmd = app.add_subcommand("train-tree", "train a decision tree on rule labels");
    std::string tree_in, tree_scheme = "7", tree_five_rule = "photo_fraction";
    std::vector<std::string> tree_features;
    bool tree_with_exposure = false;
    std::size_t tree_min_leaf = 2;
    std::string tree_model_out, tree_out;
    tree_cmd->add_option("--in", tree_in, "dataset file")->required();
    tree_cmd->add_option("--scheme", tree_scheme, "3, 5, or 7")->capture_default_str();
    tree_cmd->add_option("--five-rule", tree_five_rule, "5-class face clause")
        ->capture_default_str();
    tree_cmd->add_option("--features", tree_features,
                         "profile attributes to use (comma separated; default all)")
        ->delimiter(',');
    tree_cmd->add_flag("--with-exposure", tree_with_exposure,
                       "append n_faces/n_tags/n_photos features");
    tree_cmd->add_option("--min-leaf", tree_min_leaf, "minimum node size to split")
        ->capture_default_str();
    tree_cmd->add_option("--model-out", tree_model_out, "write the tree as JSON");
    tree_cmd->add_option("--out", tree_out, "text output file (default stdout)");

    // --- knn-eval ------------------------------------------------------------------
    auto* knn_cmd = app.add_subcommand("knn-eval", "percentage-split KNN evaluation");
    std::string knn_in, knn_scheme = "7", knn_five_rule = "photo_fraction",
                knn_format = "text", knn_out;
    std::vector<std::string> knn_features;
    bool knn_with_exposure = false;
    std::size_t knn_k = 4;
    double knn_split = 0.66;
    std::uint64_t knn_seed = 0;
    knn_cmd->add_option("--in", knn_in, "dataset file")->required();
    knn_cmd->add_option("--scheme", knn_scheme, "3, 5, or 7")->capture_default_str();
    knn_cmd->add_option("--five-rule", knn_five_rule, "5-class face clause")
        ->capture_default_str();
    knn_cmd->add_option("--k", knn_k, "neighbor count")->capture_default_str();
    knn_cmd->add_option("--split", knn_split, "training fraction")->capture_default_str();
    knn_cmd->add_option("--seed", knn_seed, "split shuffle seed")->capture_default_str();
    knn_cmd->add_option("--features", knn_features,
                        "profile attributes to use (comma separated; default all)")
        ->delimiter(',');
    knn_cmd->add_flag("--with-exposure", knn_with_exposure,
                      "append n_faces/n_tags/n_photos features");
    knn_cmd->add_option("--format", knn_format, "text or json")->capture_default_str();
    knn_cmd->add_option("--out", knn_out, "output file (default stdout)");

    // --- recommend -------------------------------------------------------------------
    auto* rec_cmd = app.add_subcommand("recommend", "suggest tighter album settings");
    std::string rec_in, rec_scheme = "7", rec_five_rule = "photo_fraction",
                rec_format = "text", rec_out, rec_threshold = "L6";
    std::size_t rec_k = 4;
    int rec_steps = 1;
    double rec_epsilon = 0.10;
    rec_cmd->add_option("--in", rec_in, "dataset file")->required();
    rec_cmd->add_option("--scheme", rec_scheme, "3, 5, or 7")->capture_default_str();
    rec_cmd->add_option("--five-rule", rec_five_rule, "5-class face clause")
        ->capture_default_str();
    rec_cmd->add_option("--k", rec_k, "neighbors for peer prediction")->capture_default_str();
    rec_cmd->add_option("--threshold", rec_threshold, "album level that triggers a suggestion")
        ->capture_default_str();
    rec_cmd->add_option("--steps", rec_steps, "strictness steps per suggestion")
        ->capture_default_str();
    rec_cmd->add_option("--epsilon", rec_epsilon, "tag-on-face tolerance")
        ->capture_default_str();
    rec_cmd->add_option("--format", rec_format, "text or json")->capture_default_str();
    rec_cmd->add_option("--out", rec_out, "output file (default stdout)");

    // --- report -----------------------------------------------------------------------
    auto* report_cmd = app.add_subcommand("report", "per-user privacy reports");
    std::string report_in, report_user, report_format = "text", report_out,
                report_five_rule = "photo_fraction", report_threshold = "L6";
    std::size_t report_k = 4;
    int report_steps = 1;
    double report_epsilon = 0.10;
    report_cmd->add_option("--in", report_in, "dataset file")->required();
    report_cmd->add_option("--user", report_user, "report a single user");
    report_cmd->add_option("--five-rule", report_five_rule, "5-class face clause")
        ->capture_default_str();
    report_cmd->add_option("--k", report_k, "neighbors for peer prediction")
        ->capture_default_str();
    report_cmd->add_option("--threshold", report_threshold,
                           "album level that triggers a suggestion")
        ->capture_default_str();
    report_cmd->add_option("--steps", report_steps, "strictness steps per suggestion")
        ->capture_default_str();
    report_cmd->add_option("--epsilon", report_epsilon, "tag-on-face tolerance")
        ->capture_default_str();
    report_cmd->add_option("--format", report_format, "text, json, or tsv")
        ->capture_default_str();
    report_cmd->add_option("--out", report_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // help text, exit 0
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the usage error
        return 1;
    }

    if (synth_cmd->parsed()) {
        SynthConfig config;
        config.seed = synth_seed;
        config.n_users = synth_users;
        if (!synth_mix.empty()) config.mix = parse_mix(synth_mix);
        const SynthResult result = generate(config);
        emit(serialize(result.dataset), synth_out);
        if (!synth_labels_out.empty()) {
            std::ostringstream labels;
            for (const auto& [user_id, category] : result.intended)
                labels << user_id << "\t" << to_string(category) << "\n";
            emit(labels.str(), synth_labels_out);
        }
        return 0;
    }

    if (ingest_cmd->parsed()) {
        IngestOptions options;
        options.max_albums = ingest_max_albums;
        options.max_photos_per_album = ingest_max_photos;
        if (!ingest_since.empty()) options.since = ingest_since;
        CanonTable canon;
        if (!ingest_canon.empty() && ingest_canon != "none") {
            canon = CanonTable::load(ingest_canon);
            options.canon = &canon;
        }
        emit(serialize(ingest(ingest_in, options)), ingest_out);
        return 0;
    }

    if (stats_cmd->parsed()) {
        const Dataset dataset = load_dataset(stats_in);
        const DisclosureStats stats = compute_stats(dataset.users);
        if (stats_format == "json")
            emit(stats_json(stats).dump(2) + "\n", stats_out);
        else if (stats_format == "text")
            emit(stats_text(stats), stats_out);
        else
            throw std::invalid_argument("format must be text or json");
        return 0;
    }

    if (label_cmd->parsed()) {
        const Dataset dataset = load_dataset(label_in);
        const Scheme scheme = parse_scheme(label_scheme_text);
        const LabelingConfig labeling = parse_labeling(label_five_rule);
        const GeometryConfig geometry;
        std::ostringstream out;
        for (const UserRecord& user : dataset.users) {
            const UserExposure exposure = compute_exposure(user, geometry);
            out << user.user_id << "\t"
                << to_string(label_scheme(exposure, scheme, labeling).value) << "\n";
        }
        emit(out.str(), label_out);
        return 0;
    }

    if (tree_cmd->parsed()) {
        const Dataset dataset = load_dataset(tree_in);
        const Scheme scheme = parse_scheme(tree_scheme);
        const LabelingConfig labeling = parse_labeling(tree_five_rule);
        if (tree_features.empty()) tree_features = default_features();
        const LabeledDataset labeled = build_labeled(dataset, scheme, tree_features,
                                                     tree_with_exposure, labeling, {});
        const DecisionTree tree = DecisionTree::train(labeled, {tree_min_leaf});
        emit(tree.to_text(), tree_out);
        if (!tree_model_out.empty()) emit(tree.to_json().dump(2) + "\n", tree_model_out);
        return 0;
    }

    if (knn_cmd->parsed()) {
        const Dataset dataset = load_dataset(knn_in);
        const Scheme scheme = parse_scheme(knn_scheme);
        const LabelingConfig labeling = parse_labeling(knn_five_rule);
        if (knn_features.empty()) knn_features = default_features();
        const LabeledDataset labeled = build_labeled(dataset, scheme, knn_features,
                                                     knn_with_exposure, labeling, {});
        const auto [train, test] = split_dataset(labeled, {knn_split, knn_seed});
        const EvaluationReport report = evaluate(test, [&](const FeatureVector& x) {
            return knn_predict(train, x, knn_k);
        });
        if (knn_format == "json")
            emit(report.to_json().dump(2) + "\n", knn_out);
        else if (knn_format == "text")
            emit(report.to_text(), knn_out);
        else
            throw std::invalid_argument("format must be text or json");
        return 0;
    }

    if (rec_cmd->parsed()) {
        const Dataset dataset = load_dataset(rec_in);
        const Scheme scheme = parse_scheme(rec_scheme);
        const LabelingConfig labeling = parse_labeling(rec_five_rule);
        RecommendConfig config;
        const auto threshold = level_from_code(rec_threshold);
        if (!threshold) throw std::invalid_argument("threshold must be L0..L8");
        config.threshold = *threshold;
        config.steps = rec_steps;
        config.geometry = GeometryConfig(rec_epsilon);
        const LabeledDataset labeled = build_labeled(dataset, scheme, default_features(),
                                                     false, labeling, config.geometry);
        const std::vector<PrivacyCategory> predicted = predict_peers(labeled, rec_k);
        std::ostringstream text;
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < dataset.users.size(); ++i) {
            const UserRecord& user = dataset.users[i];
            const UserExposure exposure = compute_exposure(user, config.geometry);
            const PrivacyCategory observed{labeled.examples[i].label, scheme};
            const Recommendation rec =
                recommend(user, exposure, observed, predicted[i], config);
            if (rec_format == "json") {
                rows.push_back(to_json(rec));
            } else {
                text << user.user_id << ": observed " << to_string(rec.observed.value)
                     << ", predicted " << to_string(rec.predicted.value) << ", "
                     << (rec.tighten ? "tighten" : "no change") << "\n";
                for (const AlbumSuggestion& s : rec.suggestions)
                    text << "  " << s.album_id << ": " << to_string(s.current) << " -> "
                         << to_string(s.suggested) << " (worst " << level_code(s.worst_level)
                         << ")\n";
            }
        }
        if (rec_format == "json")
            emit(rows.dump(2) + "\n", rec_out);
        else if (rec_format == "text")
            emit(text.str(), rec_out);
        else
            throw std::invalid_argument("format must be text or json");
        return 0;
    }

    if (report_cmd->parsed()) {
        const Dataset dataset = load_dataset(report_in);
        const LabelingConfig labeling = parse_labeling(report_five_rule);
        RecommendConfig config;
        const auto threshold = level_from_code(report_threshold);
        if (!threshold) throw std::invalid_argument("threshold must be L0..L8");
        config.threshold = *threshold;
        config.steps = report_steps;
        config.geometry = GeometryConfig(report_epsilon);
        const DisclosureStats stats = compute_stats(dataset.users);
        const LabeledDataset labeled = build_labeled(dataset, Scheme::SevenClass,
                                                     default_features(), false, labeling,
                                                     config.geometry);
        const std::vector<PrivacyCategory> predicted = predict_peers(labeled, report_k);
        std::ostringstream text;
        std::ostringstream tsv;
        nlohmann::json rows = nlohmann::json::array();
        tsv << "user_id\tlabel3\tlabel5\tlabel7\tn_photos\tn_faces\tn_tags\tmax_level\n";
        bool found = report_user.empty();
        for (std::size_t i = 0; i < dataset.users.size(); ++i) {
            const UserRecord& user = dataset.users[i];
            if (!report_user.empty() && user.user_id != report_user) continue;
            found = true;
            const UserExposure exposure = compute_exposure(user, config.geometry);
            const UserLabels labels = label_user(exposure, labeling);
            const Recommendation rec =
                recommend(user, exposure, labels.seven, predicted[i], config);
            const PrivacyReport report =
                build_report(user, exposure, labels, rec, &stats, config.geometry);
            if (report_format == "json")
                rows.push_back(to_json(report));
            else if (report_format == "tsv")
                tsv << user.user_id << "\t" << to_string(labels.three.value) << "\t"
                    << to_string(labels.five.value) << "\t" << to_string(labels.seven.value)
                    << "\t" << exposure.n_photos << "\t" << exposure.n_faces << "\t"
                    << exposure.n_tags << "\t"
                    << (exposure.n_photos > 0 ? std::string(level_code(exposure.max_level))
                                              : std::string("-"))
                    << "\n";
            else
                text << report_to_text(report) << "\n";
        }
        if (!found) throw std::invalid_argument("unknown user: " + report_user);
        if (report_format == "json")
            emit(rows.dump(2) + "\n", report_out);
        else if (report_format == "tsv")
            emit(tsv.str(), report_out);
        else if (report_format == "text")
            emit(text.str(), report_out);
        else
            throw std::invalid_argument("format must be text, json, or tsv");
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const TableFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
