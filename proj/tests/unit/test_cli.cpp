#include "consgain/cli.hpp"

#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace consgain;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args, const cli::Hooks& hooks = {}) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err, hooks);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("analyze") {
  const Result r = run({"analyze", "--family", "path", "--n", "4", "--alpha", "1", "--beta", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("lambda2    0.5857864376") != std::string::npos);
  CHECK(r.out.find("AbsoluteBetter") != std::string::npos);

  const Result j =
      run({"analyze", "--family", "star", "--n", "4", "--alpha", "1", "--beta", "1", "--json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["reports"][0]["value"] == doc["reports"][1]["value"]);
  CHECK(doc["verdict"] == "Tie");
  CHECK(doc["difference"] == 0.0);
}

TEST_CASE("analyze --verify reports oracle errors") {
  const Result r = run({"analyze", "--family", "ring", "--n", "5", "--k", "2", "--alpha", "0.5",
                        "--beta", "0.3", "--verify", "--json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  for (const auto& rep : doc["reports"]) {
    CHECK(rep["oracle"]["modal_rel_err"].get<double>() <= 1e-6);
    CHECK(rep["oracle"]["fullmatrix_rel_err"].get<double>() <= 1e-5);
  }
}

TEST_CASE("select verdicts") {
  CHECK(run({"select", "--family", "path", "--n", "4"}).out.rfind("AbsoluteBetter", 0) == 0);
  CHECK(run({"select", "--family", "ring", "--n", "4"}).out.rfind("RelativeBetter", 0) == 0);
  CHECK(run({"select", "--family", "star", "--n", "4"}).out.rfind("Tie", 0) == 0);
}

TEST_CASE("graph source errors") {
  const auto split = temp_file("consgain_split.txt", "0 1 1\n2 3 1\n");
  const Result d = run({"analyze", "--file", split.string()});
  CHECK(d.code == 2);
  CHECK(d.err.find("{0,1} {2,3}") != std::string::npos);
  CHECK(run({"select", "--file", split.string()}).code == 2);

  const auto bad = temp_file("consgain_bad.txt", "0 0 2.0\n");
  CHECK(run({"analyze", "--file", bad.string()}).code == 1);
  CHECK(run({"analyze", "--file", "/nonexistent/graph.txt"}).code == 1);
  CHECK(run({"analyze"}).code == 1);
  CHECK(run({"analyze", "--family", "path"}).code == 1);
  CHECK(run({"analyze", "--family", "path", "--n", "4", "--file", split.string()}).code == 1);
  CHECK(run({"analyze", "--family", "ring", "--n", "4", "--k", "2"}).code == 1);
  CHECK(run({"analyze", "--family", "path", "--n", "10001"}).code == 1);
  CHECK(run({"analyze", "--family", "blob", "--n", "4"}).code == 1);
  CHECK(run({"analyze", "--family", "path", "--n", "4", "--alpha", "-1"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("sweep") {
  const Result csv = run({"sweep", "--family", "path", "--n", "4", "--alpha-range", "0.1:1:3",
                          "--beta-range", "0.1:1:2"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("alpha,beta,value,region\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 7);

  const Result one = run({"sweep", "--family", "path", "--n", "4", "--protocol", "rel",
                          "--alpha-range", "1:2:2", "--beta-range", "1:2:2", "--linear", "--json"});
  REQUIRE(one.code == 0);
  const auto doc = nlohmann::json::parse(one.out);
  CHECK(doc["protocol"] == "relative");
  CHECK(doc["grid"]["alpha"]["log"] == false);

  CHECK(run({"sweep", "--family", "path", "--n", "4", "--alpha-range", "1:2"}).code == 1);
  CHECK(run({"sweep", "--family", "path", "--n", "4", "--log", "--linear"}).code == 1);
}

TEST_CASE("sweep output is byte-identical and honours --out") {
  const std::vector<std::string> args{"sweep", "--family", "ring", "--n", "6", "--json"};
  CHECK(run(args).out == run(args).out);
  const auto path = std::filesystem::temp_directory_path() / "consgain_sweep.csv";
  const Result r = run({"sweep", "--family", "ring", "--n", "6", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(body.str() == run({"sweep", "--family", "ring", "--n", "6"}).out);
}

TEST_CASE("simulate") {
  const Result r = run({"simulate", "--family", "path", "--n", "4", "--worst-case", "--json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["ratio"].get<double>() >= 0.95);
  CHECK(doc["ratio"].get<double>() <= 1.02);

  const Result noise = run({"simulate", "--family", "star", "--n", "5", "--disturbance", "noise",
                            "--t-on", "5", "--seed", "3", "--protocol", "rel"});
  CHECK(noise.code == 0);
  CHECK(noise.out == run({"simulate", "--family", "star", "--n", "5", "--disturbance", "noise",
                          "--t-on", "5", "--seed", "3", "--protocol", "rel"})
                         .out);

  const Result w = run({"simulate", "--family", "path", "--n", "3", "--disturbance", "pulse",
                        "--weights", "1,0,-1", "--t-on", "2"});
  CHECK(w.code == 0);
  CHECK(run({"simulate", "--family", "path", "--n", "3", "--weights", "1,0"}).code == 1);
  CHECK(run({"simulate", "--family", "path", "--n", "3", "--protocol", "both"}).code == 1);
  CHECK(run({"simulate", "--family", "path", "--n", "3", "--dt", "5"}).code == 1);
  CHECK(run({"simulate", "--family", "path", "--n", "3", "--disturbance", "chirp"}).code == 1);

  const auto path = std::filesystem::temp_directory_path() / "consgain_trace.csv";
  const Result t = run({"simulate", "--family", "path", "--n", "3", "--t-on", "1", "--horizon",
                        "1", "--dt", "0.02", "--out", path.string()});
  CHECK(t.code == 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x_1,x_2,x_3,v_1,v_2,v_3,yx_1,yx_2,yx_3,yv_1,yv_2,yv_3,omega_1,omega_2,omega_3");
}

TEST_CASE("table1 and density") {
  const Result t = run({"table1", "--n-max", "7"});
  CHECK(t.code == 0);
  CHECK(t.out.find("ring1") != std::string::npos);
  CHECK(run({"table1", "--n-max", "7", "--csv"}).out.rfind("family,n,k,", 0) == 0);
  CHECK(nlohmann::json::parse(run({"table1", "--n-max", "5", "--json"}).out).contains("table1"));

  const Result d = run({"density", "--families", "star,ring2", "--n-max", "6"});
  CHECK(d.code == 0);
  CHECK(d.out.find("star,6,5,15,") != std::string::npos);
  CHECK(run({"density", "--families", "ring3", "--n-max", "6"}).code == 1);
  CHECK(run({"density", "--families", "ringx"}).code == 1);
}

TEST_CASE("verify") {
  const Result ok = run({"verify", "--cases", "6", "--sim-cases", "4"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("PASS") != std::string::npos);

  const Result empty = run({"verify", "--cases", "0", "--sim-cases", "0"});
  CHECK(empty.code == 0);
  CHECK(empty.err.find("warning") != std::string::npos);

  cli::Hooks broken;
  broken.analytic = [](Protocol p, double l2, const Gains& g) {
    GainReport r = gain(p, l2, g);
    r.value = 1.0 / (g.alpha() * l2);  // drops the lower branch
    return r;
  };
  const Result bad = run({"verify", "--cases", "10", "--sim-cases", "0", "--json"}, broken);
  CHECK(bad.code == 3);
  const auto doc = nlohmann::json::parse(bad.out);
  CHECK(doc["passed"] == false);
  CHECK(doc["oracle"]["first_failure"].contains("graph"));
  CHECK(bad.err.find("\"alpha\"") != std::string::npos);
}
