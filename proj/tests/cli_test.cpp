#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include <topkgraphs/io.hpp>

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(TOPKGRAPHS_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("topkgraphs_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }

  fs::path dir_;
};

TEST_F(CliTest, AffinityIsDeterministic) {
  write("g.edges", "a b\nb c\nc d\nd a\na c\nd e\n");
  const std::string args = "affinity --method topk --walks 50 --walk-length 20 --epsilon 0.01 --seed 7 " +
                           path("g.edges") + " ";
  ASSERT_EQ(run(args + path("m1.csv")).code, 0);
  ASSERT_EQ(run(args + path("m2.csv")).code, 0);
  EXPECT_EQ(slurp(path("m1.csv")), slurp(path("m2.csv")));
  const auto m = topk::read_matrix(path("m1.csv"));
  EXPECT_EQ(m.names, (std::vector<std::string>{"a", "b", "c", "d", "e"}));
  EXPECT_EQ(m.values.asymmetry(), 0.0);
}

TEST_F(CliTest, JaccardOnPath) {
  write("p.edges", "0 1\n1 2\n");
  ASSERT_EQ(run("affinity --method jaccard " + path("p.edges") + " " + path("j.csv")).code, 0);
  EXPECT_EQ(slurp(path("j.csv")), "node,0,1,2\n0,0,1,0\n1,1,0,1\n2,0,1,0\n");
}

TEST_F(CliTest, MissingInputIsUsageError) {
  const auto r = run("affinity --method topk " + path("nope.edges") + " " + path("out.csv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(fs::exists(path("out.csv")));
}

TEST_F(CliTest, BadFlagsAreUsageErrors) {
  EXPECT_EQ(run("affinity --method node2vec a b").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("bench --preset fig9").code, 2);
  EXPECT_EQ(run("affinity --help").code, 0);
}

TEST_F(CliTest, MalformedInputIsRuntimeFailure) {
  write("bad.edges", "a b c\n");
  EXPECT_EQ(run("affinity " + path("bad.edges") + " " + path("o.csv")).code, 1);
}

TEST_F(CliTest, GenerateFigurePresets) {
  const auto sbm = run("generate --preset fig1-intra --p-intra 1 --seed 3 --edges " + path("s.edges") +
                       " --labels " + path("s.csv"));
  ASSERT_EQ(sbm.code, 0);
  EXPECT_NE(sbm.out.find("n=30"), std::string::npos);
  const auto lfr = run("generate --preset fig3-lfr-mu --seed 3 --edges " + path("l.edges") + " --labels " +
                       path("l.csv"));
  ASSERT_EQ(lfr.code, 0);
  EXPECT_NE(lfr.out.find("n=100"), std::string::npos);
  EXPECT_NE(lfr.out.find("realized_mu="), std::string::npos);
  const auto g = topk::read_edge_list(path("l.edges"));
  const auto labels = topk::read_labels(path("l.csv"), g.names);
  EXPECT_EQ(labels.labels.size(), g.graph.num_nodes());
}

TEST_F(CliTest, GenerateDegenerateSbm) {
  ASSERT_EQ(run("generate --model sbm --blocks 3,3 --p-intra 1 --p-inter 0 --edges " + path("e") +
                " --labels " + path("l"))
                .code,
            0);
  EXPECT_EQ(slurp(path("e")), "0 1\n0 2\n1 2\n3 4\n3 5\n4 5\n");
  EXPECT_EQ(slurp(path("l")), "node,label\n0,0\n1,0\n2,0\n3,1\n4,1\n5,1\n");
}

TEST_F(CliTest, ClusterAndClassifyPerfectBlocks) {
  write("m.csv",
        "node,a,b,c,d\na,0,0.1,10,10\nb,0.1,0,10,10\nc,10,10,0,0.1\nd,10,10,0.1,0\n");
  write("l.csv", "node,label\na,x\nb,x\nc,y\nd,y\n");
  const auto c = run("cluster --matrix " + path("m.csv") + " --labels " + path("l.csv"));
  ASSERT_EQ(c.code, 0);
  const auto cj = nlohmann::json::parse(c.out);
  EXPECT_EQ(cj.at("ari"), 1.0);
  EXPECT_EQ(cj.at("nmi"), 1.0);
  EXPECT_EQ(cj.at("k_clusters"), 2);
  const auto k = run("classify --k 1 --matrix " + path("m.csv") + " --labels " + path("l.csv"));
  ASSERT_EQ(k.code, 0);
  EXPECT_EQ(nlohmann::json::parse(k.out).at("balanced_accuracy"), 1.0);
  EXPECT_EQ(run("classify --k 4 --matrix " + path("m.csv") + " --labels " + path("l.csv")).code, 1);
}

TEST_F(CliTest, ClusterOnGeneratedData) {
  ASSERT_EQ(run("generate --preset fig1-intra --p-intra 0.9 --p-inter 0.01 --seed 2 --edges " + path("g") +
                " --labels " + path("l"))
                .code,
            0);
  ASSERT_EQ(run("affinity --seed 1 " + path("g") + " " + path("m.csv")).code, 0);
  const auto c = run("cluster --matrix " + path("m.csv") + " --labels " + path("l") + " --out " + path("p.csv"));
  ASSERT_EQ(c.code, 0);
  EXPECT_GT(nlohmann::json::parse(c.out).at("ari").get<double>(), 0.8);
  EXPECT_TRUE(fs::exists(path("p.csv")));
}

TEST_F(CliTest, EmbedWritesCoordinates) {
  write("m.csv", "node,a,b,c\na,0,1,1\nb,1,0,1\nc,1,1,0\n");
  const auto r = run("embed --dim 2 --matrix " + path("m.csv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("node,x1,x2\n", 0), 0u);
}

TEST_F(CliTest, BenchSingleRepHasZeroSd) {
  const auto r = run("bench --preset fig1-intra --reps 1 --seed 4 --walks 10 --methods topk,jaccard");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::size_t aggregates = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j.at("type") != "aggregate") continue;
    ++aggregates;
    EXPECT_EQ(j.at("ari").at("sd"), 0.0);
    EXPECT_EQ(j.at("ari").at("se"), 0.0);
  }
  EXPECT_EQ(aggregates, 5u * 2u);
}

TEST_F(CliTest, BenchOnSuppliedGraph) {
  ASSERT_EQ(run("generate --blocks 30,30 --p-intra 0.3 --p-inter 0.02 --seed 5 --edges " + path("g") +
                " --labels " + path("l"))
                .code,
            0);
  const auto r = run("bench --preset fig7-subgraph-classify --reps 2 --walks 10 --subgraph-size 30 --edges " +
                     path("g") + " --labels " + path("l") + " --out " + path("r.jsonl"));
  ASSERT_EQ(r.code, 0);
  const auto text = slurp(path("r.jsonl"));
  EXPECT_NE(text.find("balanced_accuracy_k5"), std::string::npos);
  EXPECT_EQ(text.find("\"error\""), std::string::npos);
}

TEST_F(CliTest, BenchOnFeatures) {
  std::ostringstream features, labels;
  features << "id,f1,f2\n";
  labels << "id,class\n";
  for (int i = 0; i < 30; ++i) {
    const int c = i % 3;
    features << "s" << i << ',' << c * 5 + (i % 7) * 0.1 << ',' << c * 3 - (i % 5) * 0.1 << '\n';
    labels << "s" << i << ",c" << c << '\n';
  }
  write("f.csv", features.str());
  write("l.csv", labels.str());
  const auto r = run("bench --preset fig6-knn-tabular --reps 1 --walks 10 --features " + path("f.csv") +
                     " --labels " + path("l.csv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"model\":\"knn\""), std::string::npos);
}

}  // namespace
