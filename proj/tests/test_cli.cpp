#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args)
{
    const std::string cmd = std::string(D2DCACHE_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    Result r;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), p)) {
        r.out += buf.data();
    }
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("d2dcache_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string first_line(const std::string& s)
{
    return s.substr(0, s.find('\n'));
}

}  // namespace

TEST_CASE("missing mandatory field exits with 2")
{
    const fs::path d = scratch("missing");
    std::ofstream(d / "bad.toml") << "sigma_m = 5\n";
    const Result r = run("run " + (d / "bad.toml").string());
    CHECK(r.code == 2);
    CHECK(r.out.find("experiment") != std::string::npos);
    fs::remove_all(d);
}

TEST_CASE("bad value reports the line")
{
    const fs::path d = scratch("badvalue");
    std::ofstream(d / "bad.toml") << "experiment = \"fig4\"\n\np = \"high\"\n";
    const Result r = run("run " + (d / "bad.toml").string());
    CHECK(r.code == 2);
    CHECK(r.out.find(":3:") != std::string::npos);
    CHECK(run("--bogus-flag figure fig4").code == 2);
    CHECK(run("figure fig2").code == 2);
    fs::remove_all(d);
}

TEST_CASE("run writes csv and manifest, reruns are identical")
{
    const fs::path d = scratch("run");
    const std::string cfg = std::string(D2DCACHE_CONFIGS) + "/fig4.toml";
    const std::string common = "--trials 200 --set 'sweep_values=[0.2,0.5]' ";
    Result r = run("--out-dir " + (d / "a").string() + " --threads 1 " + common + "run " + cfg);
    REQUIRE(r.code == 0);
    const std::string csv = slurp(d / "a" / "fig4.csv");
    CHECK(first_line(csv) == "p,b_i,analytic,mc_mean,mc_ci99");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(fs::exists(d / "a" / "fig4.manifest.json"));

    r = run("--out-dir " + (d / "b").string() + " --threads 2 " + common + "--config " + cfg + " run");
    REQUIRE(r.code == 0);
    CHECK(slurp(d / "b" / "fig4.csv") == csv);
    CHECK(slurp(d / "b" / "fig4.manifest.json") == slurp(d / "a" / "fig4.manifest.json"));
    fs::remove_all(d);
}

TEST_CASE("figure subcommand uses recipe defaults")
{
    const fs::path d = scratch("figure");
    const Result r = run("--out-dir " + d.string() + " --trials 2000 figure fig3");
    REQUIRE(r.code == 0);
    CHECK(first_line(slurp(d / "fig3.csv")) ==
          "b_i,bin_lo_m,bin_hi_m,h_m,analytic_pdf,analytic_bin_mean,mc_density");
    fs::remove_all(d);
}

TEST_CASE("delay and optimize print their fields")
{
    Result r = run("delay --bandwidth-split 0.5");
    CHECK(r.code == 0);
    CHECK(r.out.find("w_d_hz 10000000\n") != std::string::npos);
    CHECK(r.out.find("t_seconds unstable (bs") != std::string::npos);
    CHECK(r.out.find("margin_bs -") != std::string::npos);

    r = run("--set zeta=0.2 delay --bandwidth-split 0.3");
    CHECK(r.code == 0);
    CHECK(r.out.find("t_d2d_seconds") != std::string::npos);

    r = run("--set zeta=0.3 optimize");
    CHECK(r.code == 0);
    CHECK(r.out.find("b_star ") != std::string::npos);
    CHECK(r.out.find("t_star_seconds ") != std::string::npos);

    r = run("--set zeta=50 optimize");
    CHECK(r.code == 1);
    CHECK(r.out.find("Hz more than W") != std::string::npos);
}

TEST_CASE("coverage subcommand")
{
    const Result r = run("coverage --b 1");
    CHECK(r.code == 0);
    CHECK(r.out.find("d2d_coverage 0.") != std::string::npos);
    CHECK(r.out.find("bs_coverage 0.56") != std::string::npos);
}

TEST_CASE("queue simulation")
{
    const fs::path d = scratch("queue");
    const Result r = run("--set zeta=0.2 simulate-queue --bandwidth-split 0.3 --requests 20000 --trace " +
                         (d / "trace.csv").string());
    CHECK(r.code == 0);
    CHECK(r.out.find("d2d_des_mean ") != std::string::npos);
    CHECK(first_line(slurp(d / "trace.csv")) == "event_time_s,class,event_kind");
    fs::remove_all(d);
}
