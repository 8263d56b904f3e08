#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "convexnn/io.hpp"

using namespace convexnn;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / "convexnn_cli_test";
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(const std::string& args) {
  std::string cmd = std::string(CONVEXNN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("synth / train / oracle round trip with stable exit codes") {
    TempDir tmp;
    std::string data = tmp / "data.csv";
    std::string model = tmp / "model.json";
    std::string trace = tmp / "trace.csv";
    std::string gfile = tmp / "g.csv";

    CHECK(run_cli("synth --target single-index --n 20 --d 2 --seed 3 --out " + data) == 0);
    CHECK(run_cli("train --data " + data +
                  " --alpha 1 --delta 2 --steps 8 --rule fc --loss sq --oracle exact"
                  " --model-out " + model + " --trace-out " + trace + " --no-timestamp") == 0);
    SignedMeasureModel m = load_model(model);
    CHECK(!m.units.empty());
    CHECK(m.variation_norm() <= 2.0 + 1e-12);

    {
      std::ofstream g(gfile);
      g << "g\n";
      for (int i = 0; i < 20; ++i) g << (i % 2 ? "1\n" : "-1\n");
    }
    CHECK(run_cli("oracle --data " + data + " --g " + gfile +
                  " --alpha 1 --method exact --out " + (tmp / "oracle.json")) == 0);

    // invalid input -> 2
    CHECK(run_cli("train --data " + (tmp / "missing.csv") + " --alpha 1") == 2);
    CHECK(run_cli("oracle --data " + data + " --g " + gfile + " --alpha 1 --method bogus") == 2);
    // budget exceeded -> 3 (exact oracle far beyond the enumeration budget)
    std::string big = tmp / "big.csv";
    CHECK(run_cli("synth --target single-index --n 400 --d 8 --seed 4 --out " + big) == 0);
    std::string gbig = tmp / "gbig.csv";
    {
      std::ofstream g(gbig);
      g << "g\n";
      for (int i = 0; i < 400; ++i) g << "1\n";
    }
    CHECK(run_cli("oracle --data " + big + " --g " + gbig + " --alpha 1 --method exact") == 3);
  }

  TEST_CASE("train trace determinism modulo the timestamp header") {
    TempDir tmp;
    std::string data = tmp / "data.csv";
    CHECK(run_cli("synth --target affine --n 15 --d 2 --seed 9 --out " + data) == 0);
    std::string t1 = tmp / "t1.csv", t2 = tmp / "t2.csv";
    std::string args = "train --data " + data +
                       " --alpha 1 --delta 2 --steps 6 --rule linesearch --oracle exact"
                       " --no-timestamp --trace-out ";
    CHECK(run_cli(args + t1) == 0);
    CHECK(run_cli(args + t2) == 0);
    CHECK(read_file(t1) == read_file(t2));
  }

  TEST_CASE("spectrum / kernel / radbound / hausdorff subcommands") {
    TempDir tmp;
    CHECK(run_cli("spectrum --d 1 --alpha 1 --kmax 8 --out " + (tmp / "spec.csv")) == 0);
    std::string spec = read_file(tmp / "spec.csv");
    CHECK(spec.find("k,lambda,provenance") == 0);
    CHECK(run_cli("spectrum --d 2 --alpha 1 --kmax 8 --method closed --out " +
                  (tmp / "closed.csv")) == 0);

    std::string pts = tmp / "pts.csv";
    write_file(pts, "0.1,0.2\n-0.3,0.4\n");
    CHECK(run_cli("kernel --alpha 1 --d 2 --R 1 " + pts + " " + pts + " --out " +
                  (tmp / "k.csv")) == 0);

    CHECK(run_cli("radbound --G 1 --delta 1 --n 100 --p 2 --d 3 --alpha 1 --out " +
                  (tmp / "rb.json")) == 0);

    Zonotope A;
    A.generators.resize(1, 2);
    A.generators << 1, 0;
    Zonotope B;
    B.generators.resize(0, 2);
    write_file(tmp / "a.json", zonotope_to_json(A));
    write_file(tmp / "b.json", zonotope_to_json(B));
    CHECK(run_cli("hausdorff --kind zonotope --a " + (tmp / "a.json") + " --b " +
                  (tmp / "b.json") + " --out " + (tmp / "h.json")) == 0);
    CHECK(read_file(tmp / "h.json").find("1.0") != std::string::npos);

    // gamma2 with a profile file
    write_file(tmp / "profile.json", R"({"kind":"linear"})");
    CHECK(run_cli("gamma2 --profile " + (tmp / "profile.json") +
                  " --d 2 --alpha 1 --K 80 --out " + (tmp / "g2.json")) == 0);
    CHECK(read_file(tmp / "g2.json").find("converged") != std::string::npos);
  }
}
