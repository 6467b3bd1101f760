#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args, bool raw_command = false) {
    std::string cmd =
        (raw_command ? args : std::string(CLI_BINARY) + " " + args) + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string data(const char* name) { return std::string(DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("loci subcommand prints canonical polynomials") {
    RunResult r = run("loci " + data("simple_parabolic.surf"));
    CHECK(r.exit_code == 0);
    CHECK(r.out == "P = 96*q^2\nS = -384\n");
}

TEST_CASE("classify subcommand and exit codes") {
    RunResult p = run("classify " + data("simple_parabolic.surf") + " --at 0,0");
    CHECK(p.exit_code == 0);
    CHECK(p.out.find("\"tag\": \"P\"") != std::string::npos);
    CHECK(p.out.find("\"sign\": \"+\"") != std::string::npos);

    RunResult d = run("classify " + data("degenerate.surf") + " --at 0,0");
    CHECK(d.exit_code == 2);
    CHECK(d.out.find("\"tag\": \"Degenerate\"") != std::string::npos);

    RunResult sp = run("classify " + data("example1.surf") +
                       " --param -1/25 --at 0.207292102056,-0.126022738241");
    CHECK(sp.exit_code == 0);
    CHECK(sp.out.find("\"tag\": \"SP\"") != std::string::npos);
    CHECK(sp.out.find("\"sp_type\": \"elliptic\"") != std::string::npos);

    RunResult bad = run("classify " + data("example1.surf") + " --at 0,0");  // missing --param
    CHECK(bad.exit_code == 1);

    RunResult missing = run("classify /nonexistent.surf --at 0,0");
    CHECK(missing.exit_code == 1);
}

TEST_CASE("trace emits deterministic CSV and SVG") {
    std::string csv1 = "/tmp/cc_trace_a.csv", svg1 = "/tmp/cc_trace_a.svg";
    std::string csv2 = "/tmp/cc_trace_b.csv", svg2 = "/tmp/cc_trace_b.svg";
    std::string args = "trace " + data("circle.surf") + " --param 1/100 ";
    RunResult r1 = run(args + "--out-csv " + csv1 + " --out-svg " + svg1);
    RunResult r2 = run(args + "--out-csv " + csv2 + " --out-svg " + svg2);
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(csv1) == slurp(csv2));
    CHECK(slurp(svg1) == slurp(svg2));
    CHECK(r1.out == r2.out);

    std::string csv = slurp(csv1);
    CHECK(csv.rfind("arc_id,sign,p,q\n", 0) == 0);
    CHECK(csv.find("point_id,kind,p,q,tag,sp_type,versal,newton_residual,theta3") !=
          std::string::npos);
    std::string svg = slurp(svg1);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);

    // outputs do not depend on the parallelism cap
    RunResult r3 = run("trace " + data("circle.surf") +
                       " --param 1/100 --out-csv /tmp/cc_trace_c.csv");
    RunResult r4 = run(std::string("env CONE_CONTACT_THREADS=1 ") + CLI_BINARY + " trace " +
                           data("circle.surf") + " --param 1/100 --out-csv /tmp/cc_trace_d.csv",
                       true);
    CHECK(r3.exit_code == 0);
    CHECK(r4.exit_code == 0);
    CHECK(slurp("/tmp/cc_trace_c.csv") == slurp("/tmp/cc_trace_d.csv"));

    RunResult unwritable = run(args + "--out-csv /nonexistent-dir/x.csv");
    CHECK(unwritable.exit_code == 1);
}

TEST_CASE("sweep requires a parameter and reports events") {
    RunResult noparam = run("sweep " + data("simple_parabolic.surf") +
                            " --range 0,1 --steps 2 --out /tmp/cc_sweep_bad.json");
    CHECK(noparam.exit_code == 1);

    std::string out = "/tmp/cc_sweep_e2.json";
    RunResult r = run("sweep " + data("example2.surf") +
                      " --range -1/60,1/60 --steps 6 --out " + out);
    CHECK(r.exit_code == 0);
    std::string rep = slurp(out);
    CHECK(rep.find("\"crossing_transition\"") != std::string::npos);
    CHECK(rep.find("\"timing_ms\"") == std::string::npos);  // byte-stable by default

    RunResult again = run("sweep " + data("example2.surf") +
                          " --range -1/60,1/60 --steps 6 --out /tmp/cc_sweep_e2b.json");
    CHECK(again.exit_code == 0);
    CHECK(slurp("/tmp/cc_sweep_e2b.json") == rep);

    // empty range: single evaluation, no events
    RunResult single = run("sweep " + data("example2.surf") +
                           " --range 1/60,1/60 --steps 6 --out /tmp/cc_sweep_single.json");
    CHECK(single.exit_code == 0);
    CHECK(slurp("/tmp/cc_sweep_single.json").find("\"events\": []") != std::string::npos);
}
