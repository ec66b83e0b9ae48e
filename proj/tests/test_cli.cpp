// Runs the mpq executable end to end.

#include <mpq/cli.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace mpq;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("mpq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  int run(const std::string& args) const {
    const std::string cmd = "cd '" + dir.string() + "' && '" MPQ_CLI_PATH "' " + args + " > out.txt 2> err.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream is(dir / name, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
  }

  cli::json read_json(const std::string& name) const { return cli::json::parse(read(name)); }

  fs::path dir;
};

std::string payload(const std::string& mpf1) { return mpf1.substr(mpf1.find('\n', 5) + 1); }

std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    std::vector<double> r;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
      r.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(r);
  }
  return rows;
}

} // namespace

TEST_F(Cli, DispersionTable) {
  ASSERT_EQ(run("dispersion --k0 1e7 --q_max 1e7 --points 11 --out d"), 0) << read("err.txt");
  const std::string csv = read("d.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "q,vartheta,zeta,theta,Theta,Omega0,jacobian");
  const auto rows = parse_csv(csv);
  ASSERT_EQ(rows.size(), 11u);
  const PhysicalConstants pc;
  EXPECT_EQ(rows[0], (std::vector<double>{0.0, 0.0, 1e7, 0.0, 0.0, pc.c * 1e7, 1.0}));
  for (const auto& r : rows) {
    const double q = r[0];
    const FrequencyPoint fp = theta_omega_point(q, pc.c * 1e7, pc);
    EXPECT_EQ(r[1], vartheta_of_q(q, 1e7));
    EXPECT_EQ(r[2], zeta_of_q(q, 1e7));
    EXPECT_EQ(r[3], theta_of_q(q, 1e7));
    EXPECT_EQ(r[4], fp.Theta);
    EXPECT_EQ(r[5], fp.Omega0);
    EXPECT_EQ(r[6], dirac_jacobian(q, pc.c * 1e7, pc));
  }
  const cli::json m = read_json("d.manifest.json");
  EXPECT_EQ(m.at("command"), "dispersion");
  EXPECT_EQ(m.at("library_version"), MPQ_VERSION);
  EXPECT_EQ(m.at("config").at("points"), 11);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("dispersion --k0 1e7 --q_max 1.5e7 --out d"), 3);
  EXPECT_EQ(run("dispersion --points many"), 2);
  EXPECT_EQ(run("dispersion --no-such-flag 1"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  {
    std::ofstream(dir / "bad.json") << "{\"k0\": ";
  }
  EXPECT_EQ(run("dispersion --config bad.json"), 2);
  {
    std::ofstream(dir / "unknown.json") << "{\"kzero\": 1}";
  }
  EXPECT_EQ(run("dispersion --config unknown.json"), 2);
  EXPECT_EQ(run("propagate --units dimensionless --w0 1 --omega 1 --nx 256 --dx 0.05 --out p"), 3);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  {
    std::ofstream(dir / "c.json") << R"({"k0": 2.0, "q_max": 1.0, "points": 3, "units": "dimensionless"})";
  }
  ASSERT_EQ(run("dispersion --config c.json --points 5 --out d"), 0) << read("err.txt");
  const auto rows = parse_csv(read("d.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[4][0], 1.0);
  EXPECT_EQ(rows[4][5], theta_omega_point(1.0, 2.0, PhysicalConstants::dimensionless()).Omega0);
}

TEST_F(Cli, PropagateZeroDistanceIsBitExact) {
  ASSERT_EQ(run("propagate --units dimensionless --mode lg --lg_l 1 --w0 1 --omega 50 --nx 128 "
                "--dx 0.125 --z 0 --out p"),
            0)
      << read("err.txt");
  const ScalarEnvelope m = make_mode(ModeSpec::lg(0, 1, 1.0, 50.0), TransverseGrid::square(128, 0.125),
                                     Units::dimensionless);
  EXPECT_EQ(payload(read("p_z000.mpf1")), payload(encode_mpf1(FieldFile::from(m))));
  // and from a file
  write_mpf1((dir / "in.mpf1").string(), FieldFile::from(m));
  ASSERT_EQ(run("propagate --units dimensionless --input in.mpf1 --z 0 --model paraxial --out q"), 0);
  EXPECT_EQ(payload(read("q_z000.mpf1")), payload(read("in.mpf1")));
  // mixed units refused
  EXPECT_EQ(run("propagate --units SI --input in.mpf1 --z 0 --out r"), 2);
}

TEST_F(Cli, PropagateGaussianWidthAtRayleighRange) {
  // k0 = 100, w0 = 1 -> zR = 50
  ASSERT_EQ(run("propagate --units dimensionless --w0 1 --omega 100 --nx 256 --dx 0.0625 "
                "--z 0,50 --model paraxial --out g"),
            0)
      << read("err.txt");
  const cli::json s = read_json("g.summary.json");
  const double w0 = s.at("planes")[0].at("width").get<double>();
  const double w1 = s.at("planes")[1].at("width").get<double>();
  EXPECT_NEAR(w0, 1.0, 1e-4);
  EXPECT_NEAR(w1 / w0, std::sqrt(2.0), 1e-4);
  EXPECT_NEAR(s.at("planes")[1].at("norm").get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(fs::exists(dir / "g_z001.mpf1"));
  EXPECT_TRUE(fs::exists(dir / "g.manifest.json"));
}

TEST_F(Cli, PropagateVectorAndWavefunction) {
  for (const char* kind : {"vector", "wavefunction"}) {
    ASSERT_EQ(run(std::string("propagate --units dimensionless --w0 1 --omega 30 --nx 64 --dx 0.125 "
                              "--z 2 --lambda 2 --kind ") +
                  kind + " --out v"),
              0)
        << read("err.txt");
    const FieldFile f = read_mpf1((dir / "v_z000.mpf1").string());
    ASSERT_EQ(f.components.size(), 3u);
    for (const cplx& v : f.components[2])
      EXPECT_EQ(v, cplx(0.0, 0.0));
  }
}

TEST_F(Cli, CompareNarrowBeam) {
  // w0 k0 = 1000, z = 10 zR
  ASSERT_EQ(run("compare --units dimensionless --w0 1 --omega 1000 --nx 512 --dx 0.125 "
                "--z 5000 --out c"),
            0)
      << read("err.txt");
  const cli::json s = read_json("c.summary.json");
  EXPECT_LE(s.at("max_l2_difference").get<double>(), 1e-4);
  EXPECT_TRUE(fs::exists(dir / "c_exact_z000.mpf1"));
  EXPECT_TRUE(fs::exists(dir / "c_paraxial_z000.mpf1"));
}

TEST_F(Cli, OrthogonalityUnitWeight) {
  ASSERT_EQ(run("orthogonality --units dimensionless --omega 1 --q_max 0.5 --n_q 1024 "
                "--unit_weight true --out o"),
            0)
      << read("err.txt");
  const cli::json s = read_json("o.summary.json");
  EXPECT_LE(s.at("relative_deviation").get<double>(), 1e-3);
}

TEST_F(Cli, KernelOutput) {
  ASSERT_EQ(run("kernel --units dimensionless --omega 1 --q_max 0.3 --n_q 64 --z 3 --lambda 2 "
                "--nx 16 --out k"),
            0)
      << read("err.txt");
  const FieldFile f = read_mpf1((dir / "k.mpf1").string());
  EXPECT_EQ(f.components.size(), 3u);
  EXPECT_EQ(f.model, "exact");
  const cli::json s = read_json("k.summary.json");
  EXPECT_TRUE(s.contains("cauchy_difference_at_source"));
  ASSERT_EQ(run("kernel --units dimensionless --omega 1 --q_max 1.5 --model paraxial --out k2"), 3);
}

TEST_F(Cli, OutputIndependentOfThreads) {
  const std::string args = "propagate --units dimensionless --mode hg --hg_n 2 --hg_m 1 --w0 1 "
                           "--omega 20 --nx 128 --dx 0.125 --z 3 --model exact --out t";
  ASSERT_EQ(run("--threads 1 " + args), 0);
  const std::string a = read("t_z000.mpf1");
  ASSERT_EQ(run("--threads 3 " + args), 0);
  EXPECT_EQ(read("t_z000.mpf1"), a);
  ASSERT_EQ(run(args + " --threads 2"), 0);
  EXPECT_EQ(read("t_z000.mpf1"), a);
  const std::string env = "MPQ_THREADS=4 '" MPQ_CLI_PATH "' " + args;
  ASSERT_EQ(std::system(("cd '" + dir.string() + "' && " + env + " > /dev/null").c_str()), 0);
  EXPECT_EQ(read("t_z000.mpf1"), a);
  EXPECT_EQ(read_json("t.manifest.json").at("threads"), 4);
}
