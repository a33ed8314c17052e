#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(TORUS_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool has_line(const std::string& text, const std::string& line) {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        if (l == line) return true;
    return false;
}

}  // namespace

TEST_CASE("rectangle") {
    Run r = run("rectangle 2 3");
    CHECK(r.code == 0);
    CHECK(r.out == "3\n");
    CHECK(run("rectangle 8 8").out == "12988816\n");
    CHECK(run("rectangle 3 8").out == run("rectangle 8 3").out);
    CHECK(run("rectangle 3 3").out == "0\n");
}

TEST_CASE("enumerate") {
    Run r = run("enumerate 4,0,4");
    CHECK(r.code == 0);
    CHECK(r.out == "272\n");
    Run l = run("enumerate 2,1,1 --list");
    CHECK(l.code == 0);
    CHECK(std::count(l.out.begin(), l.out.end(), '\n') == 5);
    CHECK(run("enumerate 8,0,8 --cap 40").code == 2);
}

TEST_CASE("flux table") {
    Run r = run("flux-table 4,0,4");
    CHECK(r.code == 0);
    CHECK(has_line(r.out, "(0,0)\t132\t0.48529"));
    CHECK(has_line(r.out, "(1/4,0)\t32\t0.11765"));
    CHECK(has_line(r.out, "(1/4,1/4)\t2\t0.00735"));
    CHECK(has_line(r.out, "(1/2,0)\t1\t0.00368"));
    CHECK(has_line(r.out, "total\t272\t1.00000"));
    Run j = run("flux-table 4,0,4 --format json");
    CHECK(j.code == 0);
    CHECK(j.out.find("\"total\":\"272\"") != std::string::npos);
    // Deterministic output.
    CHECK(run("flux-table 8,3,3 --format csv").out == run("flux-table 8,3,3 --format csv").out);
}

TEST_CASE("polynomial") {
    Run exact = run("polynomial 4,0,4 --method exact");
    CHECK(exact.code == 0);
    CHECK(exact.out == run("polynomial 4,0,4 --method dft").out);
    CHECK(exact.out == run("polynomial 4,0,4 --method spectral").out);
    CHECK(exact.out.find("q0") != std::string::npos);
    CHECK(run("polynomial 4,0,4 --method nonsense").code == 2);
}

TEST_CASE("flip graph") {
    Run r = run("flip-graph 4,0,4 --flux 1/4,1/4");
    CHECK(r.code == 0);
    CHECK(has_line(r.out, "nodes 2"));
    CHECK(has_line(r.out, "edges 0"));
    Run z = run("flip-graph 4,0,4 --flux 0,0");
    CHECK(has_line(z.out, "nodes 132"));
    CHECK(has_line(z.out, "connected yes"));
    CHECK(run("flip-graph 4,0,4 --flux 1/3,0").code == 2);
}

TEST_CASE("boundary") {
    Run r = run("boundary 4,0,4");
    CHECK(r.code == 0);
    CHECK(has_line(r.out, "boundary tilings 12"));
}

TEST_CASE("spectral and product checks") {
    CHECK(run("spectral-check 8,3,3 --samples 10").code == 0);
    // The stated sign corollary fails on every lattice with even y1.
    Run even = run("spectral-check 4,0,4 --samples 10");
    CHECK(even.code == 1);
    CHECK(even.out.find("stated sign corollary holds at 0 of 10 points") != std::string::npos);
    Run csv = run("spectral-check 4,0,4 --csv 3");
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("u0,u1,", 0) == 0);
    CHECK(run("product-formula 2,1,1 --n 3").code == 0);
    CHECK(run("product-formula 2,1,1 --n 9").code == 2);
}

TEST_CASE("render") {
    auto path = std::filesystem::temp_directory_path() / "torus_cli_render_test.svg";
    std::filesystem::remove(path);
    Run r = run("render 4,0,4 --index 3 --out " + path.string());
    CHECK(r.code == 0);
    std::ifstream in(path);
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(body.find("<svg") != std::string::npos);
    std::filesystem::remove(path);
    CHECK(run("render 4,0,4 --index 272 --out " + path.string()).code == 2);
}

TEST_CASE("usage errors") {
    CHECK(run("enumerate 3,0,4").code == 2);
    CHECK(run("enumerate banana").code == 2);
    CHECK(run("enumerate 4,0,4 --frobnicate").code == 2);
    CHECK(run("").code != 0);
}
