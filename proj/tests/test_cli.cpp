#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const char* kCli = WALKGEN_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("walkgen_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

int run(const std::string& args) {
  const std::string cmd = std::string(kCli) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTemplate = R"({"surface": {"x": 20.0, "z": 20.0},
  "start": [1.0, 10.0], "end": [19.0, 10.0], "eye_height": 1.6,
  "markers": [{"id": "m0", "min": [9.5, 0.0, 10.5], "max": [10.5, 1.0, 11.5],
               "constraint": "must_see"}]})";

}  // namespace

TEST_CASE("evaluate writes report, trace and render") {
  TempDir tmp;
  put(tmp.path / "t.json", kTemplate);
  const std::string out = (tmp.path / "out").string();
  REQUIRE(run("evaluate --template " + (tmp.path / "t.json").string() + " --out " + out) == 0);
  CHECK(fs::exists(out + "/report.json"));
  CHECK(fs::exists(out + "/trace.csv"));
  CHECK(fs::exists(out + "/level.svg"));
  const std::string report = slurp(out + "/report.json");
  CHECK(report.find("\"path_found\": true") != std::string::npos);
  CHECK(report.find("\"constraints_met\": 1") != std::string::npos);
}

TEST_CASE("a genome that boxes in the start yields zero fitness") {
  TempDir tmp;
  put(tmp.path / "t.json", kTemplate);
  // two walls seal the start at (1, 10) against the surface edges
  put(tmp.path / "g.json", R"({"mode": "blocks", "blocks": [
    {"center": [2.0, 12.5], "size": [4.0, 1.0, 3.0]},
    {"center": [3.5, 6.5], "size": [1.0, 13.0, 3.0]}]})");
  const std::string out = (tmp.path / "out").string();
  REQUIRE(run("evaluate --template " + (tmp.path / "t.json").string() +
              " --genome " + (tmp.path / "g.json").string() + " --out " + out) == 0);
  const std::string report = slurp(out + "/report.json");
  CHECK(report.find("\"path_found\": false") != std::string::npos);
  CHECK(report.find("\"fitness\": 0.0") != std::string::npos);
}

TEST_CASE("malformed JSON exits 1, invalid template exits 2") {
  TempDir tmp;
  put(tmp.path / "broken.json", "{\"surface\": ");
  CHECK(run("evaluate --template " + (tmp.path / "broken.json").string() +
            " --out " + (tmp.path / "o").string()) == 1);

  put(tmp.path / "bad.json", R"({"surface": {"x": 20, "z": 20},
    "start": [5, 5], "end": [5, 5], "markers": []})");
  CHECK(run("evaluate --template " + (tmp.path / "bad.json").string() +
            " --out " + (tmp.path / "o2").string()) == 2);

  CHECK(run("evaluate --template " + (tmp.path / "missing.json").string() +
            " --out " + (tmp.path / "o3").string()) == 1);
}

TEST_CASE("unknown config keys are rejected with exit 2") {
  TempDir tmp;
  put(tmp.path / "t.json", kTemplate);
  put(tmp.path / "cfg.json", R"({"eval": {"cell_sizes": 0.5}})");
  CHECK(run("evaluate --template " + (tmp.path / "t.json").string() +
            " --config " + (tmp.path / "cfg.json").string() + " --out " +
            (tmp.path / "o").string()) == 2);
}

TEST_CASE("evolve requires a seed") {
  TempDir tmp;
  put(tmp.path / "t.json", kTemplate);
  CHECK(run("evolve --template " + (tmp.path / "t.json").string() + " --out " +
            (tmp.path / "o").string()) == 1);
}

TEST_CASE("evolve reruns are byte-identical across worker counts") {
  TempDir tmp;
  put(tmp.path / "t.json", kTemplate);
  put(tmp.path / "cfg.json",
      R"({"evolve": {"population": 8, "generations": 4, "stop_on_perfect": false}})");
  const std::string base = "evolve --template " + (tmp.path / "t.json").string() +
                           " --config " + (tmp.path / "cfg.json").string() +
                           " --seed 42 --out ";
  REQUIRE(run(base + (tmp.path / "a").string()) == 0);
  REQUIRE(run(base + (tmp.path / "b").string()) == 0);
  REQUIRE(run(base + (tmp.path / "c").string() + " --workers 8") == 0);
  const std::string genome_a = slurp(tmp.path / "a" / "best.genome.json");
  CHECK(!genome_a.empty());
  CHECK(genome_a == slurp(tmp.path / "b" / "best.genome.json"));
  CHECK(genome_a == slurp(tmp.path / "c" / "best.genome.json"));
  CHECK(slurp(tmp.path / "a" / "history.csv") == slurp(tmp.path / "b" / "history.csv"));
  CHECK(slurp(tmp.path / "a" / "history.csv") == slurp(tmp.path / "c" / "history.csv"));
  CHECK(slurp(tmp.path / "a" / "best.svg") == slurp(tmp.path / "c" / "best.svg"));
}

TEST_CASE("evolve accepts aesthetics targets in models mode") {
  TempDir tmp;
  put(tmp.path / "t.json", kTemplate);
  put(tmp.path / "cfg.json", R"({"evolve": {"population": 6, "generations": 2,
    "stop_on_perfect": false,
    "aesthetics": {"rock": {"target_count": 2, "w_qty": 1.0}}}})");
  const std::string out = (tmp.path / "out").string();
  REQUIRE(run("evolve --template " + (tmp.path / "t.json").string() + " --config " +
              (tmp.path / "cfg.json").string() + " --seed 5 --mode models --out " +
              out) == 0);
  CHECK(slurp(out + "/best.genome.json").find("\"mode\": \"models\"") !=
        std::string::npos);
}

TEST_CASE("explore covers an open template fully") {
  TempDir tmp;
  put(tmp.path / "t.json", R"({"surface": {"x": 9.0, "z": 9.0},
    "start": [4.0, 4.0], "end": [8.0, 8.0], "markers": []})");
  const std::string out = (tmp.path / "out").string();
  REQUIRE(run("explore --template " + (tmp.path / "t.json").string() + " --out " + out) == 0);
  CHECK(fs::exists(out + "/frame_0000.svg"));
  CHECK(fs::exists(out + "/belief.svg"));
  const std::string report = slurp(out + "/exploration.json");
  CHECK(report.find("\"points_observed_fraction\": 1.0") != std::string::npos);
  CHECK(report.find("frontier_exhausted") != std::string::npos);
  const std::string beliefs = slurp(out + "/beliefs.csv");
  CHECK(beliefs.rfind("tick,point_index,state\n", 0) == 0);
  std::istringstream lines(beliefs);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    const char state = line.back();
    CHECK((state == 'U' || state == 'V' || state == 'F' || state == 'L'));
  }
}

TEST_CASE("island generates artifacts and a dog trace") {
  TempDir tmp;
  const std::string out = (tmp.path / "out").string();
  REQUIRE(run("island --seed 1 --dog --out " + out) == 0);
  CHECK(fs::exists(out + "/island.json"));
  CHECK(fs::exists(out + "/island.svg"));
  const std::string dog = slurp(out + "/dog.csv");
  CHECK(dog.rfind("tick,dog_x,dog_z,mode,in_view\n", 0) == 0);

  // reruns are byte-identical
  const std::string out2 = (tmp.path / "out2").string();
  REQUIRE(run("island --seed 1 --dog --out " + out2) == 0);
  CHECK(slurp(out + "/island.json") == slurp(out2 + "/island.json"));
  CHECK(slurp(out + "/island.svg") == slurp(out2 + "/island.svg"));
  CHECK(dog == slurp(out2 + "/dog.csv"));
}

TEST_CASE("walk_steps of one renders a single land cell") {
  TempDir tmp;
  put(tmp.path / "cfg.json", R"({"island": {"walk_steps": 1, "with_path": false}})");
  const std::string out = (tmp.path / "out").string();
  REQUIRE(run("island --seed 3 --config " + (tmp.path / "cfg.json").string() +
              " --out " + out) == 0);
  const std::string island = slurp(out + "/island.json");
  CHECK(std::count(island.begin(), island.end(), 't') > 0);
  std::size_t land_true = 0;
  for (std::size_t pos = island.find("\"land\""); pos < island.size(); ++pos) {
    if (island.compare(pos, 4, "true") == 0) ++land_true;
    if (island.compare(pos, 13, "\"decorations\"") == 0) break;
  }
  CHECK(land_true == 1);
}

TEST_CASE("render exports SVG from an island file and OBJ from a genome") {
  TempDir tmp;
  const std::string out = (tmp.path / "out").string();
  REQUIRE(run("island --seed 2 --out " + out) == 0);
  const std::string render_out = (tmp.path / "render").string();
  REQUIRE(run("render --island " + out + "/island.json --out " + render_out) == 0);
  CHECK(fs::exists(render_out + "/island.svg"));

  put(tmp.path / "t.json", kTemplate);
  put(tmp.path / "g.json",
      R"({"mode": "blocks", "blocks": [{"center": [5.0, 5.0], "size": [2.0, 2.0, 3.0]}]})");
  REQUIRE(run("render --template " + (tmp.path / "t.json").string() + " --genome " +
              (tmp.path / "g.json").string() + " --out " + render_out + " --obj " +
              (tmp.path / "boxes.obj").string()) == 0);
  const std::string obj = slurp(tmp.path / "boxes.obj");
  CHECK(obj.find("v 4.000000") != std::string::npos);
  CHECK(std::count(obj.begin(), obj.end(), '\n') == 1 + 8 + 6);
}
