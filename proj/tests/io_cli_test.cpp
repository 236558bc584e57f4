#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "dilatree/cli.hpp"

using namespace dilatree;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    char tmpl[] = "/tmp/dilatree-XXXXXX";
    char* made = mkdtemp(tmpl);
    if (!made) throw std::runtime_error("mkdtemp failed");
    path_ = made;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_config(const CommandConfig& c) {
  std::ostringstream out;
  std::ostringstream err;
  int code = run(c, out, err);
  return {code, out.str(), err.str()};
}

CommandConfig command(const std::string& sub) {
  CommandConfig c;
  c.subcommand = sub;
  return c;
}

// Runs the real executable so exit statuses are the ones a shell would see.
int shell(const std::string& args, const std::string& env = "") {
  const char* cli = std::getenv("DILATREE_CLI");
  if (!cli) return -1;
  std::string cmd = env + " '" + cli + "' " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const std::string& path, const std::string& text) { write_text_file(path, text); }

}  // namespace

TEST(Formats, InstanceRoundTripIsByteIdentical) {
  IntegerInstance ii = integerize(build_gadget(PartitionInstance({BigInt(2), BigInt(3), BigInt(5)})));
  std::string text = dump(instance_to_json(ii));
  IntegerInstance back = instance_from_json(parse_json(text, "inline"));
  EXPECT_EQ(dump(instance_to_json(back)), text);
  EXPECT_EQ(back.points.points(), ii.points.points());
  EXPECT_EQ(back.k, ii.k);
}

TEST(Formats, GadgetRoundTrip) {
  Gadget g = build_gadget(PartitionInstance({BigInt(1), BigInt(1)}));
  std::string text = dump(gadget_to_json(g));
  Gadget back = gadget_from_json(parse_json(text, "inline"));
  EXPECT_EQ(dump(gadget_to_json(back)), text);
  EXPECT_TRUE(verify_gadget(back).all_passed());
}

TEST(Formats, RejectsTamperedThreshold) {
  IntegerInstance ii = integerize(build_gadget(PartitionInstance({BigInt(1), BigInt(1)})));
  Json j = instance_to_json(ii);
  j["P"] = "3";
  j["Q"] = "2";
  EXPECT_THROW(instance_from_json(j), IoError);
}

TEST(Formats, PointsAcceptPairsAndObjects) {
  Json j = parse_json(R"({"points": [[0, 0], ["1/2", "3"], {"x": 5, "y": "-7/3"}]})", "inline");
  PointSet ps = points_from_json(j);
  ASSERT_EQ(ps.size(), 3U);
  EXPECT_EQ(ps[1], (Point{make_rational(1, 2), Rational(3)}));
  EXPECT_EQ(ps[2], (Point{Rational(5), make_rational(-7, 3)}));
  EXPECT_THROW(points_from_json(parse_json(R"({"points": [["1.5", 0]]})", "inline")), IoError);
  EXPECT_THROW(edges_from_json(parse_json(R"({"edges": [[0, 0]]})", "inline")), IoError);
}

TEST(Cli, DecideOnReparsedFileMatches) {
  TempDir dir;
  CommandConfig gen = command("gen");
  gen.alphas = {"1", "2", "1"};
  gen.output = dir / "inst.json";
  ASSERT_EQ(run_config(gen).code, 0);

  CommandConfig decide = command("decide");
  decide.input = gen.output;
  decide.output = dir / "sol.json";
  ASSERT_EQ(run_config(decide).code, 0);

  IntegerInstance ii = instance_from_json(parse_json(read_text_file(gen.output), "inst"));
  write(dir / "copy.json", dump(instance_to_json(ii)));
  decide.input = dir / "copy.json";
  decide.output = dir / "sol2.json";
  ASSERT_EQ(run_config(decide).code, 0);
  EXPECT_EQ(read_text_file(dir / "sol.json"), read_text_file(dir / "sol2.json"));

  Json sol = parse_json(read_text_file(dir / "sol.json"), "sol");
  EXPECT_EQ(sol["verdict"], "YES");
  std::set<int> all;
  for (int i : sol["A"]) all.insert(i);
  for (int i : sol["A_prime"]) all.insert(i);
  EXPECT_EQ(all, (std::set<int>{1, 2, 3}));
}

TEST(Cli, DilationReportsTheFarPair) {
  TempDir dir;
  CommandConfig gen = command("gen");
  gen.alphas = {"1", "1"};
  gen.output = dir / "inst.json";
  ASSERT_EQ(run_config(gen).code, 0);
  CommandConfig decide = command("decide");
  decide.input = gen.output;
  decide.output = dir / "sol.json";
  ASSERT_EQ(run_config(decide).code, 0);

  IntegerInstance ii = instance_from_json(parse_json(read_text_file(gen.output), "inst"));
  CommandConfig dil = command("dilation");
  dil.input = gen.output;
  dil.tree = decide.output;
  dil.threshold = ii.P.get_str() + "/" + ii.Q.get_str();
  dil.output = dir / "report.json";
  ASSERT_EQ(run_config(dil).code, 0);
  Json rep = parse_json(read_text_file(dil.output), "report");
  EXPECT_EQ(rep["threshold_verdict"], "AtMost");
  std::string a = rep["witness_labels"][0];
  std::string b = rep["witness_labels"][1];
  EXPECT_EQ(a, "q2");
  EXPECT_TRUE(b == "p2" || b == "p2'") << b;
}

TEST(Cli, DeterministicOutputs) {
  TempDir dir;
  CommandConfig gen = command("gen");
  gen.alphas = {"3", "1", "2"};
  Outcome g1 = run_config(gen);
  Outcome g2 = run_config(gen);
  EXPECT_EQ(g1.out, g2.out);
  write(dir / "inst.json", g1.out);

  CommandConfig svg = command("svg");
  svg.input = dir / "inst.json";
  Outcome s1 = run_config(svg);
  Outcome s2 = run_config(svg);
  EXPECT_EQ(s1.code, 0);
  EXPECT_EQ(s1.out, s2.out);
  EXPECT_NE(s1.out.find("<svg"), std::string::npos);
  EXPECT_NE(s1.out.find(">p2&apos;</text>"), std::string::npos);

  CommandConfig w = command("witness5");
  w.seed = 4;
  w.budget = 200000;
  Outcome w1 = run_config(w);
  Outcome w2 = run_config(w);
  EXPECT_EQ(w1.code, w2.code);
  EXPECT_EQ(w1.out, w2.out);
}

TEST(Cli, MdstWritesResult) {
  TempDir dir;
  write(dir / "sq.json", R"({"points": [[0,0],[1,0],[1,1],[0,1]]})");
  CommandConfig c = command("mdst");
  c.input = dir / "sq.json";
  c.mode = "tour";
  c.output = dir / "res.json";
  ASSERT_EQ(run_config(c).code, 0);
  Json r = parse_json(read_text_file(c.output), "res");
  EXPECT_EQ(r["edges"].size(), 4U);
  EXPECT_EQ(r["mode"], "tour");
}

// Fixed exit-code matrix against the installed binary.
class ExitMatrix : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!std::getenv("DILATREE_CLI")) GTEST_SKIP() << "DILATREE_CLI not set";
    write(dir / "sq.json", R"({"points": [[0,0],[1,0],[1,1],[0,1]]})");
    write(dir / "path3.json", R"({"edges": [[0,1],[1,2],[2,3]]})");
    write(dir / "u.json", R"({"points": [[0,0],[1,3],[3,3],[4,0]]})");
  }
  TempDir dir;
};

TEST_F(ExitMatrix, Scenarios) {
  std::string yes = dir / "yes.json";
  std::string no = dir / "no.json";
  EXPECT_EQ(shell("gen --alphas 1,1 -o " + yes), 0);                                          // 1
  EXPECT_EQ(shell("gen --alphas 1,1,1 -o " + no), 0);                                         // 2
  EXPECT_EQ(shell("decide -i " + yes + " -o " + (dir / "sol.json")), 0);                      // 3
  EXPECT_EQ(shell("decide -i " + no), 1);                                                     // 4
  EXPECT_EQ(shell("dilation -i " + (dir / "sq.json") + " -t " + (dir / "path3.json") +
                  " --threshold 3/1"),
            0);                                                                               // 5
  EXPECT_EQ(shell("dilation -i " + (dir / "sq.json") + " -t " + (dir / "path3.json") +
                  " --threshold 2/1"),
            1);                                                                               // 6
  EXPECT_EQ(shell("oracle --alphas 1,1"), 0);                                                 // 7
  EXPECT_EQ(shell("oracle --alphas 1,2,4"), 1);                                               // 8
  EXPECT_EQ(shell("verify -i " + (dir / "missing.json")), 2);                                 // 9
  EXPECT_EQ(shell("dilation -i " + (dir / "sq.json") + " -t " + (dir / "path3.json") +
                  " --threshold 1.5"),
            2);                                                                               // 10
  EXPECT_EQ(shell("dilation -i " + (dir / "u.json") + " -t " + (dir / "path3.json") +
                  " --threshold 20811388300841896659/10000000000000000000 --bits 16",
                  "DILATREE_MAX_BITS=16"),
            3);                                                                               // 11
  EXPECT_EQ(shell("frobnicate"), 2);                                                          // 12
}

TEST(Cli, NoWitnessWithinBudgetIsUndecided) {
  CommandConfig w = command("witness5");
  w.seed = 3;
  w.budget = 1;
  Outcome o = run_config(w);
  EXPECT_EQ(o.code, 3);
  EXPECT_EQ(o.out, "none\n");
}

TEST(Cli, OutputDirectoryIsCheckedFirst) {
  CommandConfig gen = command("gen");
  gen.alphas = {"1"};
  gen.output = "/nonexistent-dir/x.json";
  EXPECT_EQ(run_config(gen).code, 2);
}
