// Copyright 2026 The SHAM Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sham/sham.h"

namespace fs = std::filesystem;

namespace {

const std::string kCli = SHAM_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path("cli_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("help and version exit cleanly") {
  CHECK(run("--help") == 0);
  CHECK(run("--version") == 0);
  CHECK(run("solve --help") == 0);
}

TEST_CASE("usage errors exit with status 1") {
  CHECK(run("solve --bogus") == 1);
  CHECK(run("") == 1);
  CHECK(run("solve --n 1") == 1);
  CHECK(run("solve --beta 2.5 --max-iters 5 --out cli_scratch/bad") == 1);
  CHECK(run("solve --schedule nonsense") == 1);
  CHECK(run("solve --instance cli_scratch/does_not_exist.json") == 1);
}

TEST_CASE("generate is deterministic") {
  const fs::path dir = scratch("gen");
  const fs::path a = dir / "a.json", b = dir / "b.json";
  REQUIRE(run("generate --n 6 --m 4 --mu 0.5 --seed 3 --instance " +
              a.string()) == 0);
  REQUIRE(run("generate --n 6 --m 4 --mu 0.5 --seed 3 --instance " +
              b.string()) == 0);
  CHECK(!read_file(a).empty());
  CHECK(read_file(a) == read_file(b));
  CHECK(fs::exists(a.string() + ".meta.json"));
}

TEST_CASE("generated large instance loads and contains the origin") {
  const fs::path dir = scratch("large");
  const fs::path p = dir / "inst.json";
  REQUIRE(run("generate --n 100 --m 100 --seed 1 --instance " + p.string()) ==
          0);
  sham_instance* inst = nullptr;
  REQUIRE(sham_instance_load(p.string().c_str(), &inst) == SHAM_OK);
  size_t n = 0, m = 0;
  sham_instance_info(inst, &n, &m, nullptr, nullptr, nullptr);
  CHECK(n == 100);
  CHECK(m == 100);
  std::vector<double> zero(100, 0.0);
  double viol = -1.0;
  REQUIRE(sham_instance_evaluate(inst, zero.data(), 100, nullptr, nullptr,
                                 &viol) == SHAM_OK);
  CHECK(viol == 0.0);
  sham_instance_free(inst);
}

TEST_CASE("an exhausted budget exits with status 2") {
  const fs::path dir = scratch("budget");
  CHECK(run("solve --n 5 --m 5 --max-iters 1 --out " + dir.string()) == 2);
  const auto rows = lines_of(read_file(dir / "records.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rfind("k,f_last,f_avg", 0) == 0);
  CHECK(rows[1].rfind("1,", 0) == 0);
  CHECK(read_file(dir / "summary.json").find("budget_exhausted") !=
        std::string::npos);
}

TEST_CASE("records are byte-identical across runs") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string common =
      "solve --n 8 --m 12 --seed 5 --max-iters 3000 --no-stop --out ";
  CHECK(run(common + a.string()) == 2);
  CHECK(run(common + b.string()) == 2);
  const std::string ra = read_file(a / "records.csv");
  CHECK(lines_of(ra).size() == 3001);
  CHECK(ra == read_file(b / "records.csv"));

  CHECK(run(common + a.string() + " --format jsonl") == 2);
  CHECK(run(common + b.string() + " --format jsonl") == 2);
  CHECK(read_file(a / "records.jsonl") == read_file(b / "records.jsonl"));
}

TEST_CASE("solve converges against a baseline f*") {
  const fs::path dir = scratch("conv");
  CHECK(run("solve --n 3 --m 4 --mu 1 --seed 2 --oracle baseline "
            "--baseline-iters 20000 --out " +
            dir.string()) == 0);
  CHECK(read_file(dir / "summary.json").find("\"stop_converged\"") !=
        std::string::npos);
}

TEST_CASE("record stride") {
  const fs::path dir = scratch("stride");
  CHECK(run("solve --n 4 --m 4 --max-iters 100 --no-stop --record-every 10 "
            "--out " +
            dir.string()) == 2);
  const auto rows = lines_of(read_file(dir / "records.csv"));
  REQUIRE(rows.size() == 11);
  CHECK(rows[1].rfind("10,", 0) == 0);
  CHECK(rows[10].rfind("100,", 0) == 0);
}

TEST_CASE("config file values apply and explicit flags override them") {
  const fs::path dir = scratch("config");
  const fs::path cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"n": 4, "m": 3, "max_iters": 7, "no_stop": true,
                           "record_every": 1})";
  CHECK(run("--config " + cfg.string() + " solve --out " + dir.string()) == 2);
  CHECK(lines_of(read_file(dir / "records.csv")).size() == 8);
  CHECK(run("--config " + cfg.string() + " solve --max-iters 3 --out " +
            dir.string()) == 2);
  CHECK(lines_of(read_file(dir / "records.csv")).size() == 4);

  std::ofstream(cfg) << R"({"n": "four"})";
  CHECK(run("--config " + cfg.string() + " solve --out " + dir.string()) == 1);
}

TEST_CASE("benchmark with a single seed has equal min, mean and max") {
  const fs::path dir = scratch("bench");
  REQUIRE(run("benchmark --n 3 --m 3 --seeds 1 --max-iters 200 --out " +
              dir.string()) == 0);
  const auto rows = lines_of(read_file(dir / "benchmark.csv"));
  REQUIRE(rows.size() == 2);
  const auto header = split(rows[0], ',');
  const auto cells = split(rows[1], ',');
  REQUIRE(header.size() == cells.size());
  auto col = [&](const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return std::stod(cells[i]);
    FAIL("missing column " << name);
    return 0.0;
  };
  CHECK(col("runs") == 1);
  CHECK(col("iters_min") == col("iters_mean"));
  CHECK(col("iters_mean") == col("iters_max"));
}

TEST_CASE("benchmark sweeps produce one row per combination") {
  const fs::path dir = scratch("sweep");
  REQUIRE(run("benchmark --n 3 --m 3 --seeds 2 --gammas 0,1 --mus 0,1 "
              "--max-iters 100 --out " +
              dir.string()) == 0);
  CHECK(lines_of(read_file(dir / "benchmark.csv")).size() == 5);
}

TEST_CASE("verify without rate runs passes") {
  CHECK(run("verify --no-rate-runs") == 0);
}
