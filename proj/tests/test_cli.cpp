#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

// Exercises the installed binary end to end. The test runner provides
// PRIVLENS_CLI (binary path) and PRIVLENS_CANON (default canon table).

namespace {

std::string cli_path() {
    const char* path = std::getenv("PRIVLENS_CLI");
    EXPECT_NE(path, nullptr) << "PRIVLENS_CLI must point at the privlens binary";
    return path == nullptr ? "" : path;
}

std::string canon_path() {
    const char* path = std::getenv("PRIVLENS_CANON");
    EXPECT_NE(path, nullptr) << "PRIVLENS_CANON must point at the canon table";
    return path == nullptr ? "" : path;
}

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = "'" + cli_path() + "' " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        ADD_FAILURE() << "popen failed for: " << cmd;
        return {};
    }
    RunResult result;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string temp_file(const std::string& name) {
    return ::testing::TempDir() + "privlens_cli_" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    EXPECT_TRUE(in.good()) << path;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    ASSERT_TRUE(out.good()) << path;
}

}  // namespace

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run_cli("").exit_code, 1);
    EXPECT_EQ(run_cli("frobnicate").exit_code, 1);
    EXPECT_EQ(run_cli("synth --no-such-flag").exit_code, 1);
    EXPECT_EQ(run_cli("label").exit_code, 1);  // --in is required
    const RunResult help = run_cli("--help");
    EXPECT_EQ(help.exit_code, 0);
    EXPECT_NE(help.output.find("synth"), std::string::npos);
    EXPECT_NE(help.output.find("recommend"), std::string::npos);
}

TEST(Cli, SynthIsDeterministicPerSeed) {
    const std::string a = temp_file("synth_a.json");
    const std::string b = temp_file("synth_b.json");
    const std::string c = temp_file("synth_c.json");
    ASSERT_EQ(run_cli("synth --seed 5 --users 30 --out " + a).exit_code, 0);
    ASSERT_EQ(run_cli("synth --seed 5 --users 30 --out " + b).exit_code, 0);
    ASSERT_EQ(run_cli("synth --seed 6 --users 30 --out " + c).exit_code, 0);
    EXPECT_EQ(read_file(a), read_file(b));
    EXPECT_NE(read_file(a), read_file(c));
}

TEST(Cli, LabelReproducesTheIntendedCategories) {
    const std::string data = temp_file("label_data.json");
    const std::string intended = temp_file("label_intended.tsv");
    const std::string observed = temp_file("label_observed.tsv");
    ASSERT_EQ(run_cli("synth --seed 11 --users 40 --out " + data + " --labels-out " +
                      intended)
                  .exit_code,
              0);
    ASSERT_EQ(run_cli("label --in " + data + " --scheme 7 --out " + observed).exit_code, 0);
    EXPECT_EQ(read_file(observed), read_file(intended));
    // The other schemes run on the same input.
    EXPECT_EQ(run_cli("label --in " + data + " --scheme 3").exit_code, 0);
    EXPECT_EQ(run_cli("label --in " + data + " --scheme 5 --five-rule raw_ratio").exit_code,
              0);
    EXPECT_EQ(run_cli("label --in " + data + " --scheme 9").exit_code, 2);
}

TEST(Cli, MixPinsEveryLabel) {
    const std::string data = temp_file("mix_data.json");
    const std::string labels = temp_file("mix_labels.tsv");
    ASSERT_EQ(run_cli("synth --seed 2 --users 12 --mix F=1.0 --out " + data +
                      " --labels-out " + labels)
                  .exit_code,
              0);
    std::istringstream lines(read_file(labels));
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line)) {
        EXPECT_EQ(line.substr(line.find('\t') + 1), "F");
        ++count;
    }
    EXPECT_EQ(count, 12u);
}

TEST(Cli, IngestNormalizesCanonicalizesAndCaps) {
    const std::string raw = temp_file("ingest_raw.json");
    const std::string out = temp_file("ingest_out.json");
    write_file(raw, R"({"schema_version": 1, "users": [{
        "user_id": "u1",
        "profile": {"religion": "islam", "location": "Boston, MA"},
        "albums": [{"album_id": "a1", "setting": "public", "photos": [
            {"photo_id": "p1", "taken_at": "2024-01-01T00:00:00Z"},
            {"photo_id": "p2", "units": "pixels", "width": 1000, "height": 800,
             "faces": [{"x": 400, "y": 320, "w": 200, "h": 160}],
             "taken_at": "2024-06-01T00:00:00Z"},
            {"photo_id": "p3", "taken_at": "2024-03-01T00:00:00Z"}
        ]}]
    }]})");
    ASSERT_EQ(run_cli("ingest --in " + raw + " --canon '" + canon_path() + "' --max-photos 2 --out " +
                      out)
                  .exit_code,
              0);
    const std::string text = read_file(out);
    EXPECT_NE(text.find("\"religion\": \"Muslim\""), std::string::npos);
    EXPECT_NE(text.find("\"location\": \"USA\""), std::string::npos);
    EXPECT_NE(text.find("\"units\": \"fraction\""), std::string::npos);
    EXPECT_NE(text.find("\"x\": 0.4"), std::string::npos);
    EXPECT_EQ(text.find("\"photo_id\": \"p1\""), std::string::npos);  // oldest capped away
    EXPECT_NE(text.find("\"photo_id\": \"p2\""), std::string::npos);
    EXPECT_NE(text.find("\"photo_id\": \"p3\""), std::string::npos);
}

TEST(Cli, BrokenInputExitsTwo) {
    const std::string bad = temp_file("bad.json");
    write_file(bad, "{ not json");
    const RunResult parse = run_cli("stats --in " + bad);
    EXPECT_EQ(parse.exit_code, 2);
    EXPECT_NE(parse.output.find("error:"), std::string::npos);

    const std::string wrong_version = temp_file("wrong_version.json");
    write_file(wrong_version, R"({"schema_version": 2, "users": []})");
    EXPECT_EQ(run_cli("label --in " + wrong_version).exit_code, 2);
}

TEST(Cli, StatsEmitsTextAndJson) {
    const std::string data = temp_file("stats_data.json");
    ASSERT_EQ(run_cli("synth --seed 3 --users 25 --out " + data).exit_code, 0);
    const RunResult text = run_cli("stats --in " + data);
    EXPECT_EQ(text.exit_code, 0);
    EXPECT_NE(text.output.find("attribute missing percentages"), std::string::npos);
    const RunResult json = run_cli("stats --in " + data + " --format json");
    EXPECT_EQ(json.exit_code, 0);
    const nlohmann::json parsed = nlohmann::json::parse(json.output);
    EXPECT_TRUE(parsed.contains("attributes"));
    EXPECT_TRUE(parsed.contains("by_gender"));
    EXPECT_TRUE(parsed.at("attributes").contains("religion"));
}

TEST(Cli, TreeAndKnnEvaluateOnRuleLabels) {
    const std::string data = temp_file("ml_data.json");
    const std::string model = temp_file("ml_tree.json");
    ASSERT_EQ(run_cli("synth --seed 9 --users 60 --out " + data).exit_code, 0);

    const RunResult tree = run_cli("train-tree --in " + data +
                                   " --scheme 7 --with-exposure --model-out " + model);
    EXPECT_EQ(tree.exit_code, 0);
    const nlohmann::json model_json = nlohmann::json::parse(read_file(model));
    EXPECT_EQ(model_json.at("scheme"), "7");
    EXPECT_TRUE(model_json.contains("root"));

    const RunResult knn = run_cli("knn-eval --in " + data + " --scheme 7 --k 4 --split 0.66");
    EXPECT_EQ(knn.exit_code, 0);
    EXPECT_NE(knn.output.find("correctly classified instances:"), std::string::npos);
    EXPECT_NE(knn.output.find("confusion matrix"), std::string::npos);

    const RunResult knn_json = run_cli("knn-eval --in " + data + " --format json");
    EXPECT_EQ(knn_json.exit_code, 0);
    const nlohmann::json parsed = nlohmann::json::parse(knn_json.output);
    EXPECT_TRUE(parsed.contains("accuracy_percent"));
    // Identical invocations agree byte for byte.
    EXPECT_EQ(run_cli("knn-eval --in " + data + " --format json").output, knn_json.output);
}

TEST(Cli, RecommendAndReportCoverEveryFormat) {
    const std::string data = temp_file("rec_data.json");
    ASSERT_EQ(run_cli("synth --seed 13 --users 30 --out " + data).exit_code, 0);

    const RunResult rec = run_cli("recommend --in " + data + " --scheme 7");
    EXPECT_EQ(rec.exit_code, 0);
    EXPECT_NE(rec.output.find("observed"), std::string::npos);

    const RunResult rec_json = run_cli("recommend --in " + data + " --format json");
    EXPECT_EQ(rec_json.exit_code, 0);
    const nlohmann::json rec_rows = nlohmann::json::parse(rec_json.output);
    ASSERT_TRUE(rec_rows.is_array());
    EXPECT_EQ(rec_rows.size(), 30u);
    EXPECT_TRUE(rec_rows[0].contains("tighten"));

    const RunResult one = run_cli("report --in " + data + " --user user_0001");
    EXPECT_EQ(one.exit_code, 0);
    EXPECT_NE(one.output.find("user user_0001"), std::string::npos);
    EXPECT_EQ(run_cli("report --in " + data + " --user no_such_user").exit_code, 2);

    const RunResult tsv = run_cli("report --in " + data + " --format tsv");
    EXPECT_EQ(tsv.exit_code, 0);
    EXPECT_EQ(tsv.output.substr(0, tsv.output.find('\n')),
              "user_id\tlabel3\tlabel5\tlabel7\tn_photos\tn_faces\tn_tags\tmax_level");

    const RunResult json = run_cli("report --in " + data + " --format json");
    EXPECT_EQ(json.exit_code, 0);
    const nlohmann::json rows = nlohmann::json::parse(json.output);
    ASSERT_TRUE(rows.is_array());
    EXPECT_EQ(rows.size(), 30u);
    EXPECT_TRUE(rows[0].contains("risk_flags"));
}
