#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

using Json = nlohmann::ordered_json;

struct Run {
  int code = -1;
  std::string out;
  Json json;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QWALK_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.json = Json::parse(r.out, nullptr, false);
  return r;
}

std::string data(const char* name) { return std::string(QWALK_DATA_DIR) + "/" + name; }

void expect_document(const Run& r) {
  ASSERT_FALSE(r.json.is_discarded()) << r.out;
  ASSERT_TRUE(r.json.contains("status"));
}

}  // namespace

TEST(Cli, BuildP4) {
  const auto r = run("build --base complete:2 --satellites complete:1,complete:1");
  expect_document(r);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json["status"], "ok");
  EXPECT_EQ(r.json["vertices"], 4);
  EXPECT_EQ(r.json["edges"], 3);
  EXPECT_EQ(r.json["labels"][3], "v:1/w:1");
}

TEST(Cli, BuildFigureOneWritesFiles) {
  const auto prefix = (std::filesystem::temp_directory_path() / "qwalk_cli_fig1").string();
  const auto r = run("build --base path:3 --satellites path:2,path:1,path:2 --out " + prefix);
  expect_document(r);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json["vertices"], 8);
  EXPECT_EQ(r.json["edges"], 14);
  EXPECT_TRUE(std::filesystem::exists(prefix + ".edges"));
  std::ifstream labels(prefix + ".labels.json");
  const auto j = Json::parse(labels);
  EXPECT_EQ(j.size(), 8u);
  // the edge list parses back through @file
  const auto again = run("spectrum --graph @" + prefix + ".edges --no-projectors");
  expect_document(again);
  EXPECT_EQ(again.code, 0);
}

TEST(Cli, UsageErrors) {
  for (const char* args : {"build --base blob:3 --each complete:1", "spectrum --graph blob:3", "",
                           "fidelity --graph path:4 --u 1 --v 9 --t 0", "frobnicate",
                           "fidelity --base complete:2 --each complete:1 --u v:7 --v v:1 --t 0"}) {
    const auto r = run(args);
    expect_document(r);
    EXPECT_EQ(r.code, 64) << args;
    EXPECT_EQ(r.json["status"], "usage") << args;
  }
}

TEST(Cli, SpectrumNumericAndClosedForm) {
  const auto num = run("spectrum --graph path:4 --no-projectors");
  expect_document(num);
  EXPECT_EQ(num.code, 0);
  EXPECT_EQ(num.json["spectrum"]["eigenvalues"].size(), 4u);
  EXPECT_LT(num.json["deviation"]["max"].get<double>(), 1e-8);

  const auto cf = run("spectrum --base complete:2 --each complete:1 --closed-form --no-projectors");
  expect_document(cf);
  EXPECT_EQ(cf.code, 0);
  const auto& values = cf.json["branches"]["eigenvalues"];
  ASSERT_EQ(values.size(), 4u);
  for (const auto& e : values) EXPECT_TRUE(e["branch"] == "c" || e["branch"] == "d");
  const double phi = 0.5 * (1 + std::sqrt(5.0));
  EXPECT_NEAR(values[0]["value"].get<double>(), phi, 1e-12);

  const auto bad = run("spectrum --base path:3 --each complete:1 --closed-form");
  expect_document(bad);
  EXPECT_EQ(bad.code, 2);
  EXPECT_EQ(bad.json["status"], "precondition_failed");
}

TEST(Cli, Fidelity) {
  const auto zero = run("fidelity --graph path:4 --u 1 --v 2 --t 0");
  expect_document(zero);
  EXPECT_NEAR(zero.json["amplitude"]["fidelity"].get<double>(), 0.0, 1e-12);
  const auto k2 = run("fidelity --graph complete:2 --u 0 --v 1 --t 1.5707963");
  EXPECT_NEAR(k2.json["amplitude"]["fidelity"].get<double>(), 1.0, 1e-12);
  const auto golay = run("fidelity --data " + data("golay_double_coset.json") + " --u 0 --v 1 --t 1.0");
  expect_document(golay);
  EXPECT_EQ(golay.code, 0);
  const double f = golay.json["amplitude"]["fidelity"].get<double>();
  EXPECT_TRUE(std::isfinite(f));
  EXPECT_LE(f, 1.0 + 1e-12);
  // labels on a corona
  const auto lab = run("fidelity --base complete:2 --each complete:1 --u v:0 --v v:1/w:1 --t 0.7");
  expect_document(lab);
  EXPECT_EQ(lab.code, 0);
}

TEST(Cli, FidelityScanWritesCsv) {
  const auto csv = (std::filesystem::temp_directory_path() / "qwalk_cli_scan.csv").string();
  const auto r = run("fidelity --graph complete:2 --u 0 --v 1 --scan 0 3.14159265 101 --out " + csv);
  expect_document(r);
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(r.json["scan"]["argmax_time"].get<double>(), 1.5707963, 1e-6);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,re,im,fidelity");
}

TEST(Cli, CertifyPeriodicAndPst) {
  const auto p = run("certify periodic --graph cycle:4 --u 0");
  expect_document(p);
  EXPECT_EQ(p.code, 0);
  EXPECT_EQ(p.json["verdict"], "periodic");
  EXPECT_EQ(p.json["criterion"], "integer-spectrum");

  const auto pst = run("certify pst --graph cycle:4 --u 0 --v 2");
  expect_document(pst);
  EXPECT_EQ(pst.json["holds"], true);
  EXPECT_NEAR(pst.json["t0"].get<double>(), 1.5707963267948966, 1e-12);

  const auto corona = run("certify periodic --base cycle:4 --each complete:1 --u v:0");
  expect_document(corona);
  EXPECT_EQ(corona.json["verdict"], "not_periodic");
  EXPECT_TRUE(corona.json.contains("corona"));
}

TEST(Cli, CertifyPgst) {
  const auto r = run("certify pgst --base complete:2 --each complete:1 --u v:0 --v v:1 --eps 0.01");
  expect_document(r);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json["criterion"], "theorem-4.8");
  EXPECT_GE(r.json["achieved_fidelity"].get<double>(), 0.99);
  EXPECT_TRUE(r.json.contains("T"));

  const auto adj = run("certify pgst --graph cycle:4 --u 0 --v 1 --eps 0.1");
  expect_document(adj);
  EXPECT_EQ(adj.code, 2);

  const auto capped = run("certify pgst --data " + data("golay_double_coset.json") +
                          " --u 0 --v 1 --g 2 --eps 0.5 --lmax 50 --lcap 50");
  expect_document(capped);
  EXPECT_EQ(capped.json["preconditions"]["ok"], true);
  if (capped.json["status"] == "not_found") EXPECT_EQ(capped.code, 4);
}

TEST(Cli, Deterministic) {
  const std::string args = "certify pgst --base complete:2 --each complete:1 --u v:0 --v v:1 --eps 0.03";
  EXPECT_EQ(run(args).out, run(args).out);
}
