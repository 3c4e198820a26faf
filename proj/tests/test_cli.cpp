#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct Outcome {
  int exit_code;
  std::string out;
};

Outcome shell(const std::string& command) {
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome run(const std::string& args) { return shell(std::string(GWREC_CLI) + " " + args + " 2>/dev/null"); }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Cli, SameSeedSameBytesAcrossThreadCounts) {
  for (const std::string args :
       {"run --mode conditioned --example majority --n 31 --reps 200 --seed 7",
        "experiment --example transversal --n-grid 11,21 --reps 200 --seed 3",
        "cftp --example minimax --reps 300 --seed 5", "probe --example path_length --reps 300 --t-max 10",
        "wlaw --example boolean_functions --k 3 --samples 500 --node-cap 10000000 --seed 2"}) {
    const Outcome one = run(args + " --threads 1");
    const Outcome three = run(args + " --threads 3");
    EXPECT_EQ(one.exit_code, 0) << args;
    EXPECT_FALSE(one.out.empty()) << args;
    EXPECT_EQ(one.out, three.out) << args;
    EXPECT_EQ(one.out, run(args + " --threads 1").out) << args;
  }
}

TEST(Cli, Headers) {
  EXPECT_EQ(first_line(run("run --mode conditioned --example counting --n 11 --reps 3").out), "rep,n,value");
  EXPECT_EQ(first_line(run("experiment --example majority --n 31 --reps 10").out), "n,tv,reps,stderr");
  EXPECT_EQ(first_line(run("cftp --example majority --reps 3").out), "rep,value,levels_used");
  EXPECT_EQ(first_line(run("wlaw --example majority").out), "state,prob");
  EXPECT_EQ(first_line(run("matrix --example majority").out), "from,to,prob");
  EXPECT_EQ(first_line(run("probe --example majority --reps 10 --t-max 3").out), "t,survival,stderr");
  EXPECT_EQ(first_line(run("figure1-data").out), "p,leaf,unconditional_pstar,conditional_limit");
  EXPECT_EQ(first_line(run("sample-tree --reps 2 --seed 3").out), "rep,size,height,offspring");
}

TEST(Cli, CountingRootIsN) {
  const Outcome o = run("run --mode conditioned --example counting --k 1000 --n 101 --reps 5");
  ASSERT_EQ(o.exit_code, 0);
  EXPECT_EQ(o.out, "rep,n,value\n0,101,101\n1,101,101\n2,101,101\n3,101,101\n4,101,101\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("list-examples").exit_code, 0);
  EXPECT_EQ(run("run --mode conditioned --example counting --n 100").exit_code, 2);
  EXPECT_EQ(run("run --mode conditioned --example nonsense").exit_code, 2);
  EXPECT_EQ(run("run --mode sideways --example counting").exit_code, 2);
  EXPECT_EQ(run("cftp --example transversal --p 2").exit_code, 2);
  EXPECT_EQ(run("cftp --example counting --reps 1 --max-levels 100").exit_code, 3);
  EXPECT_EQ(run("run --mode conditioned --example counting --n 11 --reps 0").exit_code, 2);
  EXPECT_EQ(run("--no-such-flag").exit_code, 2);
}

TEST(Cli, CapExceededExitCode) {
  EXPECT_EQ(run("wlaw --example boolean_functions --k 3 --samples 1000 --node-cap 3").exit_code, 4);
}

TEST(Cli, SeedFromEnvironment) {
  const std::string args = "cftp --example random_child --reps 50";
  const Outcome env = shell("GWREC_SEED=11 " + std::string(GWREC_CLI) + " " + args + " 2>/dev/null");
  const Outcome flag = run(args + " --seed 11");
  const Outcome other = run(args + " --seed 12");
  EXPECT_EQ(env.out, flag.out);
  EXPECT_NE(flag.out, other.out);
}
