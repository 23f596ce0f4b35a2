#include "accthr/field.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string command = std::string(ACCTHR_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buffer{};
    std::size_t got = 0;
    while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.out.append(buffer.data(), got);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("accthr-cli-" + std::to_string(::getpid()) + "-" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    [[nodiscard]] std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

const char* kCircuit =
    "inputs 6\n"
    "gate g1 THR 2 1@x1 1@x2 1@~x3\n"
    "gate g2 MAJ x4 x5 x6\n"
    "gate g3 SYM 0110 x1 x4 x6\n"
    "gate top SYM 0101 g1 g2 g3\n"
    "output top\n";

const char* kPermuted =
    "inputs 6\n"
    "gate g1 THR 2 1@x1 1@x2 1@~x3\n"
    "gate g2 MAJ x4 x5 x6\n"
    "gate g3 SYM 0110 x1 x4 x6\n"
    "gate top SYM 0101 g3 g2 g1\n"
    "output top\n";

TEST_F(Cli, EvalAllSymrankMatchesNaive) {
    const std::string c = write("c.ckt", kCircuit);
    const RunResult fast = run("eval-all --circuit " + c + " --out " + path("fast.bin") + " --method symrank");
    ASSERT_EQ(fast.status, 0) << fast.out;
    EXPECT_NE(fast.out.find("method=symrank-naive-mm"), std::string::npos) << fast.out;
    EXPECT_NE(fast.out.find("rank="), std::string::npos);
    const RunResult slow = run("eval-all --circuit " + c + " --out " + path("slow.bin") + " --method naive");
    ASSERT_EQ(slow.status, 0) << slow.out;
    EXPECT_EQ(slurp(path("fast.bin")), slurp(path("slow.bin")));
    EXPECT_EQ(slurp(path("fast.bin")).size(), 8U);
}

TEST_F(Cli, CountAndEquiv) {
    const std::string c = write("c.ckt", kCircuit);
    const std::string h = write("h.ckt", kPermuted);
    const RunResult count = run("count-sat --circuit " + c);
    ASSERT_EQ(count.status, 0) << count.out;
    EXPECT_NE(count.out.find("count=24"), std::string::npos) << count.out;
    EXPECT_NE(count.out.find("seed="), std::string::npos);
    EXPECT_NE(count.out.find("repeats="), std::string::npos);

    const RunResult same = run("equiv --a " + c + " --b " + h);
    ASSERT_EQ(same.status, 0) << same.out;
    EXPECT_NE(same.out.find("equivalent=true"), std::string::npos) << same.out;

    const std::string g = write("g.ckt", "inputs 6\ngate g AND x1 x2\noutput g\n");
    const RunResult differ = run("equiv --a " + c + " --b " + g);
    EXPECT_NE(differ.out.find("equivalent=false"), std::string::npos) << differ.out;
}

TEST_F(Cli, MatrixProductModesAgree) {
    const accthr::PrimeField f(accthr::PrimeField::kMersenne31);
    std::ostringstream a_text;
    std::ostringstream b_text;
    accthr::write_mat(a_text, accthr::random_matrix(f, 16, 80, 1), f.modulus());
    accthr::write_mat(b_text, accthr::random_matrix(f, 80, 2, 2), f.modulus());
    const std::string a = write("A.mat", a_text.str());
    const std::string b = write("B.mat", b_text.str());
    const RunResult fast =
        run("mm --a " + a + " --b " + b + " --mode coppersmith --no-alpha-check --count-ops --out " + path("C1.mat"));
    ASSERT_EQ(fast.status, 0) << fast.out;
    EXPECT_NE(fast.out.find("multiplications="), std::string::npos) << fast.out;
    const RunResult slow = run("mm --a " + a + " --b " + b + " --mode naive --out " + path("C2.mat"));
    ASSERT_EQ(slow.status, 0) << slow.out;
    EXPECT_EQ(slurp(path("C1.mat")), slurp(path("C2.mat")));

    const RunResult refused = run("mm --a " + a + " --b " + b + " --mode coppersmith --out " + path("C3.mat"));
    EXPECT_EQ(refused.status, 3) << refused.out;
}

TEST_F(Cli, IlpWithWitness) {
    const std::string p = write("p.ilp", "vars 3\nmax 2 3 -1\ncon 1 1 1 <= 2\ncon 0 1 0 <= 1\n");
    const RunResult r = run("ilp " + p + " --witness --seed 7");
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("status=optimal"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("value=5"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("witness=110"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("seed=7"), std::string::npos) << r.out;
}

TEST_F(Cli, Thr2Rectangle) {
    const std::string c = write("t.ckt", "inputs 4\ngate a THR 1 1@x1 1@x3\ngate b THR 2 1@x2 1@x4 1@x1\ngate t THR 2 1@a 1@b\noutput t\n");
    const std::string left = write("L.txt", "00\n10\n11\n");
    const std::string right = write("R.txt", "00\n01\n");
    const RunResult r = run("thr2 --circuit " + c + " --left " + left + " --right " + right + " --out " + path("M.bin"));
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("rows=3 cols=2"), std::string::npos) << r.out;
    // (x1,x2,x3,x4): ones at (1,0,0,1), (1,1,0,0) and (1,1,0,1).
    EXPECT_NE(r.out.find("ones=3"), std::string::npos) << r.out;
    EXPECT_EQ(slurp(path("M.bin")).size(), 9U);
}

TEST_F(Cli, SelfcheckPassesAndDetectsInjectedFault) {
    const RunResult clean = run("selfcheck");
    EXPECT_EQ(clean.status, 0) << clean.out;
    EXPECT_NE(clean.out.find("selfcheck=pass"), std::string::npos);
    EXPECT_EQ(run("selfcheck").out, clean.out);

    const RunResult broken = run("selfcheck --inject-filter-fault");
    EXPECT_EQ(broken.status, 1) << broken.out;
    EXPECT_NE(broken.out.find("module=symrank status=fail"), std::string::npos) << broken.out;
    EXPECT_NE(broken.out.find("module=evaluator status=pass"), std::string::npos) << broken.out;
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("eval-all").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    const std::string bad = write("bad.ckt", "inputs 2\ngate g SYM 01 x1 x2\noutput g\n");
    EXPECT_EQ(run("eval-all --circuit " + bad + " --out " + path("x.bin")).status, 3);
    EXPECT_EQ(run("eval-all --circuit " + path("missing.ckt") + " --out " + path("x.bin")).status, 3);
    const std::string c = write("c.ckt", kCircuit);
    EXPECT_EQ(run("--rank-cap 1 --no-fallback eval-all --circuit " + c + " --out " + path("x.bin") + " --method symrank").status, 4);
}

TEST_F(Cli, DeterministicOutputs) {
    const std::string p = write("p.ilp", "vars 6\nmax 3 -1 4 1 -5 9\ncon 2 2 2 2 2 2 <= 7\ncon -1 0 3 0 1 0 <= 2\n");
    EXPECT_EQ(run("ilp " + p + " --seed 5").out, run("ilp " + p + " --seed 5").out);
}

}  // namespace
