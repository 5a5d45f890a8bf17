#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "json.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(MUASP_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  RunResult r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  int st = pclose(pipe);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string data_file(const std::string& name) {
  return std::string(MUASP_DATA_DIR) + "/" + name;
}

std::string write_file(const std::string& name, const std::string& text) {
  std::string path = testing::TempDir() + name;
  std::ofstream out(path);
  out << text;
  return path;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

TEST(CliSolve, TrafficLightProgramHasOneModelWithTheSchedule) {
  RunResult r = run_cli("solve " + data_file("traffic_light.lp"));
  EXPECT_EQ(r.code, 0) << r.out;
  std::vector<std::string> lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 1u) << r.out;
  EXPECT_NE(lines[0].find("go(c3,t1,ew,2)"), std::string::npos);
  EXPECT_NE(lines[0].find("go(c4,t1,ns,5)"), std::string::npos);
  EXPECT_NE(lines[0].find("wait(c4,t1,ns,4)"), std::string::npos);
}

TEST(CliSolve, AllAndFirstControlTheListing) {
  std::string lp = write_file("pq.lp", "p :- not q.\nq :- not p.\n");
  RunResult all = run_cli("solve " + lp + " --all");
  EXPECT_EQ(all.code, 0);
  EXPECT_EQ(lines_of(all.out), (std::vector<std::string>{"{p}", "{q}"}));
  RunResult first = run_cli("solve " + lp + " --first");
  EXPECT_EQ(first.code, 0);
  EXPECT_EQ(lines_of(first.out), (std::vector<std::string>{"{p}"}));
}

TEST(CliSolve, InconsistentProgramExitsOne) {
  std::string lp = write_file("odd.lp", "x :- not x.\n");
  RunResult r = run_cli("solve " + lp);
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "inconsistent\n");
}

TEST(CliSolve, ParseErrorExitsTwo) {
  std::string lp = write_file("broken.lp", "p :-\n");
  RunResult r = run_cli("solve " + lp);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("error:"), std::string::npos);
}

TEST(CliSolve, QueryFlagEvaluatesOverAllModels) {
  std::string lp = write_file("pq2.lp", "p :- not q.\nq :- not p.\n");
  RunResult known = run_cli("solve " + lp + " --query 'K p'");
  EXPECT_EQ(known.code, 0);
  EXPECT_EQ(known.out, "K p: false\n");
  RunResult brave = run_cli("solve " + lp + " --query 'brave p'");
  EXPECT_EQ(brave.out, "brave p: true\n");
}

TEST(CliRunService, ControllerScriptShowsConfirmationsAndFailures) {
  RunResult r = run_cli("run-service " + data_file("controller.service") +
                        " --script " + data_file("controller.script"));
  EXPECT_EQ(r.code, 1) << r.out;  // ticks without sensor input are inconsistent
  EXPECT_NE(r.out.find("t=1 activated"), std::string::npos);
  EXPECT_NE(r.out.find("t=1 inconsistent"), std::string::npos);
  EXPECT_NE(r.out.find("t=2 CONFIRM device_ok -> script re script#0"),
            std::string::npos);
  EXPECT_NE(r.out.find("t=2 query K device_ok = true"), std::string::npos);
  EXPECT_NE(r.out.find("t=3 CONFIRM device_fault -> script"), std::string::npos);
  EXPECT_NE(r.out.find("t=5 stopped"), std::string::npos);
}

TEST(CliRunService, InvalidDescriptorExitsTwo) {
  std::string desc = write_file("bad.service",
                                "program:\np :- q.\ninputs: q\noutputs: nosuch\n"
                                "retention: stateless\n");
  std::string script = write_file("empty.script", "");
  RunResult r = run_cli("run-service " + desc + " --script " + script);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("not in Heads"), std::string::npos);
}

TEST(CliRunService, EmptyScriptNeverActivates) {
  std::string desc = write_file("idle.service",
                                "program:\np.\noutputs: p\nretention: stateless\n");
  std::string script = write_file("idle.script", "");
  RunResult r = run_cli("run-service " + desc + " --script " + script +
                        " --horizon 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines_of(r.out),
            (std::vector<std::string>{"t=1 no-operation", "t=2 no-operation"}));
}

TEST(CliScenario, TableReportsScheduleAndSafety) {
  RunResult r = run_cli("scenario traffic-light");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("schedule: go(c1,t1,ns,3) go(c2,t1,ns,3) go(c3,t1,ew,2) "
                       "go(c4,t1,ns,5) go(c5,t1,ew,4) wait(c1,t1,ns,2) "
                       "wait(c2,t1,ns,2) wait(c4,t1,ns,4)"),
            std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("safety: ok"), std::string::npos);
  EXPECT_NE(r.out.find("failures: none"), std::string::npos);
}

TEST(CliScenario, JsonReportParses) {
  RunResult r = run_cli("scenario traffic-light --json");
  EXPECT_EQ(r.code, 0);
  nlohmann::json doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["transport"], "sim");
  EXPECT_TRUE(doc["safety_ok"].get<bool>());
  EXPECT_EQ(doc["ticks"].size(), 6u);
  EXPECT_EQ(doc["schedule"].size(), 8u);
}

TEST(CliScenario, FaultRunExitsOne) {
  RunResult r = run_cli("scenario traffic-light --fault");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("failures: yes"), std::string::npos) << r.out;
}

TEST(CliRunSystem, TrafficSystemReachesTheFullLightState) {
  RunResult r = run_cli("run-system " + data_file("traffic.system"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("t=5 t1 |S|=46"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("t=2 c3 |S|=2"), std::string::npos);
}

TEST(CliMisc, UnknownSubcommandExitsTwo) {
  EXPECT_EQ(run_cli("bogus").code, 2);
  EXPECT_EQ(run_cli("scenario nosuch").code, 2);
}

}  // namespace
