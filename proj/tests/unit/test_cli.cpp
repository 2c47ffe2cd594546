#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "fibrilgeom/cli.hpp"
#include "fixtures.hpp"

using namespace fibrilgeom;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fibrilgeom_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("fibril.pdb", fixture::stacked_pdb("ABCDE", 10, 7));
    write("other.pdb", fixture::stacked_pdb("ABCDE", 10, 8));
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  cli::RunConfig config(cli::Command cmd, const std::string& out) const {
    cli::RunConfig c;
    c.command = cmd;
    c.input_a = path("fibril.pdb");
    c.input_b = path("other.pdb");
    c.output_dir = path(out);
    return c;
  }

  /// Runs the executable; returns {exit status, stderr}.
  std::pair<int, std::string> exec(const std::string& args) const {
    std::string err = path("stderr.txt");
    std::string cmd = std::string(FIBRILGEOM_CLI_PATH) + " " + args + " > " + path("stdout.txt") + " 2> " + err;
    int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, EveryCommandWritesItsArtifacts) {
  auto hop = config(cli::Command::Hop, "hop");
  hop.json_matrices = true;
  EXPECT_EQ(cli::run(hop).outputs,
            (std::vector<std::string>{"hop_matrix.csv", "hop_binary.csv", "hop_matrix.json", "hop_binary.json"}));

  auto geo = config(cli::Command::Geometry, "geo");
  EXPECT_EQ(cli::run(geo).outputs, (std::vector<std::string>{"geometry.csv", "geometry_summary.json"}));
  // Five chains of ten residues: 30 backbone vertices and 27 windows each.
  std::string csv = slurp(dir_ / "geo" / "geometry.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 5 * 27);

  auto reg = config(cli::Command::Regress, "reg");
  reg.layers = {'A', 'B', 'C', 'D', 'E'};
  auto rr = cli::run(reg);
  EXPECT_EQ(rr.outputs, (std::vector<std::string>{"hbond.csv", "regression.json"}));
  EXPECT_EQ(rr.exclusions["boundary_layers"], 2);
  auto rj = io::Json::parse(slurp(dir_ / "reg" / "regression.json"));
  EXPECT_EQ(rj["n"], 3 * 9);

  auto ph = config(cli::Command::Ph, "ph");
  EXPECT_EQ(cli::run(ph).outputs, std::vector<std::string>{"diagram.csv"});

  auto cmp = config(cli::Command::Compare, "cmp");
  cmp.q = 2.0;
  cli::run(cmp);
  auto dj = io::Json::parse(slurp(dir_ / "cmp" / "distances.json"));
  EXPECT_EQ(dj["dim1"]["q"], 2.0);
  EXPECT_GE(dj["dim0"]["wasserstein"].get<double>(), dj["dim0"]["bottleneck"].get<double>());

  auto rm = config(cli::Command::Rmsd, "rmsd");
  rm.atoms = AtomSelection::NCaC;
  cli::run(rm);
  auto mj = io::Json::parse(slurp(dir_ / "rmsd" / "rmsd.json"));
  EXPECT_EQ(mj["n"], 30);
  EXPECT_LE(mj["rmsd"].get<double>(), mj["rmsd_unaligned"].get<double>() + 1e-12);

  for (const char* sub : {"hop", "geo", "reg", "ph", "cmp", "rmsd"})
    EXPECT_TRUE(fs::exists(dir_ / sub / "manifest.json")) << sub;
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  auto c = config(cli::Command::Compare, "one");
  cli::run(c);
  c.output_dir = path("two");
  cli::run(c);
  for (const char* f : {"diagram_a.csv", "diagram_b.csv", "distances.json"})
    EXPECT_EQ(slurp(dir_ / "one" / f), slurp(dir_ / "two" / f)) << f;
}

TEST_F(CliTest, ManifestRoundTrip) {
  auto c = config(cli::Command::Hop, "m");
  c.chains = {'C'};
  c.chain_b = 'D';
  c.range = ResidueRange{2, 8};
  c.cutoff = 3.5;
  cli::run(c);
  auto back = cli::read_manifest(path("m/manifest.json"));
  EXPECT_EQ(cli::to_json(back), cli::to_json(c));
}

TEST_F(CliTest, ExecutableHappyPathAndReplay) {
  auto [code, err] = exec("geometry --input " + path("fibril.pdb") + " --chain A,B --out " + path("x"));
  EXPECT_EQ(code, 0) << err;
  auto [code2, err2] = exec("replay --manifest " + path("x/manifest.json") + " --out " + path("y"));
  EXPECT_EQ(code2, 0) << err2;
  EXPECT_EQ(slurp(dir_ / "x" / "geometry.csv"), slurp(dir_ / "y" / "geometry.csv"));
  EXPECT_EQ(slurp(dir_ / "x" / "geometry_summary.json"), slurp(dir_ / "y" / "geometry_summary.json"));
}

TEST_F(CliTest, ExecutableErrorExitCodes) {
  write("empty.pdb", "HEADER    NONE\nEND\n");
  auto [c1, e1] = exec("ph --input " + path("empty.pdb") + " --out " + path("e"));
  EXPECT_EQ(c1, 2);
  EXPECT_TRUE(e1.starts_with("error category=input code=EmptyStructure message=\"")) << e1;

  auto [c2, e2] = exec("regress --input " + path("fibril.pdb") + " --layers A,B --out " + path("e"));
  EXPECT_EQ(c2, 2);
  EXPECT_NE(e2.find("code=LayerListTooShort"), std::string::npos) << e2;

  auto [c3, e3] = exec("hop --a " + path("fibril.pdb") + " --b " + path("other.pdb") + " --chain Z --out " + path("e"));
  EXPECT_EQ(c3, 2);
  EXPECT_NE(e3.find("code=ChainNotFound"), std::string::npos) << e3;

  auto [c4, e4] = exec("hop --a " + path("missing.pdb") + " --b " + path("other.pdb") + " --out " + path("e"));
  EXPECT_EQ(c4, 2);

  auto [c5, e5] = exec("compare --a " + path("fibril.pdb") + " --b " + path("other.pdb") + " --q 0.5");
  EXPECT_EQ(c5, 2);

  auto [c6, e6] = exec("frobnicate");
  EXPECT_EQ(c6, 2);

  // Three collinear CA atoms cannot be superimposed uniquely.
  std::string line;
  for (int i = 0; i < 3; ++i) line += oracle::atom_line(i + 1, "CA", ' ', "GLY", 'A', i + 1, 3.8 * i, 0, 0) + "\n";
  write("line.pdb", line);
  auto [c7, e7] = exec("rmsd --a " + path("line.pdb") + " --b " + path("line.pdb") + " --out " + path("e"));
  EXPECT_EQ(c7, 3);
  EXPECT_NE(e7.find("category=numeric"), std::string::npos) << e7;
}
