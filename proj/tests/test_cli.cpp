#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

const std::string& scratch_dir() {
    static const std::string dir = [] {
        char tmpl[] = "/tmp/ccfilter_cli_XXXXXX";
        const char* made = mkdtemp(tmpl);
        REQUIRE(made != nullptr);
        return std::string(made);
    }();
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    REQUIRE(f.good());
    f << text;
}

/// Run the binary through the shell, capturing exit code and both streams.
/// env_prefix is prepended verbatim (e.g. "CCFILTER_THREADS=4 ").
CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const std::string out_path = scratch_dir() + "/out" + std::to_string(counter);
    const std::string err_path = scratch_dir() + "/err" + std::to_string(counter);
    ++counter;

    const std::string cmd = env_prefix + std::string(CCFILTER_BIN) + " " + args + " >" +
                            out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());

    CmdResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::string line;
    std::istringstream is(text);
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

/// Minimum of the mag_db column of a CSV body.
double min_db(const std::string& csv) {
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() > 1);
    double best = 1e9;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream is(lines[i]);
        std::string field;
        for (int c = 0; c < 4 && std::getline(is, field, ','); ++c) {
        }
        best = std::min(best, std::stod(field));
    }
    return best;
}

} // namespace

TEST_CASE("design prints the demonstration-point numbers") {
    const CmdResult r = run_cli("design");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "design parameters:"));
    CHECK(contains(r.out, "14142.13"));
    CHECK(contains(r.out, "1.979899"));
    CHECK(contains(r.out, "sensitivity of omega0:"));
    CHECK(contains(r.out, "sensitivity of Q:"));
    CHECK(contains(r.out, "R3"));
}

TEST_CASE("component flags accept suffixes and reject junk") {
    const CmdResult ok = run_cli("design --r1 10k --c2 10n");
    CHECK(ok.exit_code == 0);
    CHECK(contains(ok.out, "14142.13"));

    const CmdResult neg = run_cli("design --r1=-5");
    CHECK(neg.exit_code == 2);
    CHECK(contains(neg.err, "r1 must be positive"));

    const CmdResult malformed = run_cli("design --r1 10q");
    CHECK(malformed.exit_code == 2);
    CHECK(contains(malformed.err, "r1 has malformed value '10q'"));

    const CmdResult big_gain = run_cli("design --b1 2.5");
    CHECK(big_gain.exit_code == 2);
    CHECK(contains(big_gain.err, "b1 must be at most 2"));
}

TEST_CASE("sens validates its step and omits the parameter block") {
    const CmdResult ok = run_cli("sens --rel-step 1e-4");
    CHECK(ok.exit_code == 0);
    CHECK(contains(ok.out, "sensitivity of omega0:"));
    CHECK(!contains(ok.out, "design parameters:"));

    const CmdResult bad = run_cli("sens --rel-step 1");
    CHECK(bad.exit_code == 2);
    CHECK(contains(bad.err, "rel-step must lie in [1e-9, 1e-3]"));
}

TEST_CASE("sweep emits one header plus the default 601-point grid") {
    const CmdResult r = run_cli("sweep bp");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 602);
    CHECK(lines[0] == "omega_rad_s,freq_hz,mag,mag_db,phase_deg");
}

TEST_CASE("sweep --check accepts agreement between the two engines") {
    for (const char* mode : {"lp", "hp", "bp", "notch"}) {
        const CmdResult r = run_cli(std::string("sweep ") + mode + " --check");
        CHECK(r.exit_code == 0);
        CHECK(contains(r.err, "closed-form and nodal engines agree"));
    }
}

TEST_CASE("sweep --check holds with non-ideal conveyor gains") {
    const CmdResult r = run_cli("sweep notch --check --b1 0.96 --k2 0.9 --b2 1.04");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.err, "agree"));
}

TEST_CASE("unknown modes and bad grids are usage errors") {
    const CmdResult bad_mode = run_cli("sweep xy");
    CHECK(bad_mode.exit_code == 2);
    CHECK(contains(bad_mode.err, "unknown mode 'xy'"));

    const CmdResult swapped = run_cli("sweep bp --wmin 1k --wmax 10");
    CHECK(swapped.exit_code == 2);
    CHECK(contains(swapped.err, "wmin must be less than wmax"));

    const CmdResult lonely = run_cli("sweep bp --wmin 1k");
    CHECK(lonely.exit_code == 2);
    CHECK(contains(lonely.err, "provide both --wmin and --wmax"));

    const CmdResult coarse = run_cli("sweep bp --ppd 4");
    CHECK(coarse.exit_code == 2);
    CHECK(contains(coarse.err, "ppd must be at least 8"));
}

TEST_CASE("the notch sweep reaches its null") {
    const CmdResult r = run_cli("sweep notch");
    CHECK(r.exit_code == 0);
    CHECK(min_db(r.out) <= -60.0);
}

TEST_CASE("identical invocations produce identical bytes") {
    const CmdResult a = run_cli("sweep bp --wmin 1k --wmax 100k --ppd 50");
    const CmdResult b = run_cli("sweep bp --wmin 1k --wmax 100k --ppd 50");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("the nodal engine gives the same bytes at any thread count") {
    const std::string args = "sweep notch --engine mna --ppd 40";
    const CmdResult one = run_cli(args, "CCFILTER_THREADS=1 ");
    const CmdResult four = run_cli(args, "CCFILTER_THREADS=4 ");
    const CmdResult all = run_cli(args, "CCFILTER_THREADS=0 ");
    CHECK(one.exit_code == 0);
    CHECK(four.exit_code == 0);
    CHECK(all.exit_code == 0);
    CHECK(one.out == four.out);
    CHECK(one.out == all.out);
}

TEST_CASE("a malformed thread count is refused") {
    const CmdResult r = run_cli("sweep bp --engine mna", "CCFILTER_THREADS=abc ");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "CCFILTER_THREADS must be a nonnegative integer"));
}

TEST_CASE("--out writes the CSV to a file instead of stdout") {
    const std::string path = scratch_dir() + "/sweep.csv";
    const CmdResult r = run_cli("sweep lp --out " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    const std::string body = slurp(path);
    CHECK(contains(body, "omega_rad_s,freq_hz,mag,mag_db,phase_deg"));
    CHECK(lines_of(body).size() == 602);
}

TEST_CASE("--format table renders an aligned listing") {
    const CmdResult r = run_cli("sweep bp --format table --ppd 8");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(!lines.empty());
    CHECK(contains(lines[0], "omega_rad_s"));
    CHECK(contains(lines[0], "phase_deg"));
    CHECK(!contains(lines[0], ","));
}

TEST_CASE("simulate recognizes the generated band-pass netlist") {
    const std::string path = scratch_dir() + "/bp.cir";
    spit(path,
         ".title ccii biquad bp\n"
         "VIN in 0 1 in\n"
         "R1 0 out 10k\n"
         "C2 f 0 10n\n"
         "R3 f in 14k\n"
         "R6 0 out 10k\n"
         "R4 r 0 10k\n"
         "C5 w 0 10n\n"
         "X1 out f 0 r CCII\n"
         "X2 r w out 0 CCII\n"
         ".out out\n");
    const CmdResult r = run_cli("simulate " + path);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.err, "shape: band-pass"));
    CHECK(contains(r.err, "omega0"));
    CHECK(contains(r.out, "omega_rad_s,"));
}

TEST_CASE("shipped example netlists simulate and classify") {
    const std::string dir = std::string(CCFILTER_DOCS_DIR) + "/examples/";
    const std::pair<const char*, const char*> cases[] = {
        {"biquad_lp.cir", "shape: low-pass"},
        {"biquad_hp.cir", "shape: high-pass"},
        {"biquad_bp.cir", "shape: band-pass"},
        {"biquad_notch.cir", "shape: notch"},
        {"rc_lowpass.cir", "shape: low-pass"},
    };
    for (const auto& [file, shape] : cases) {
        CAPTURE(file);
        const CmdResult r = run_cli("simulate " + dir + file);
        CHECK(r.exit_code == 0);
        CHECK(contains(r.err, shape));
    }
}

TEST_CASE("simulate measures a plain RC corner") {
    const std::string path = scratch_dir() + "/rc.cir";
    spit(path, "V1 in 0 1\nR1 in out 10k\nC1 out 0 10n\n.out out\n");
    const CmdResult r = run_cli("simulate " + path);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.err, "shape: low-pass"));
    CHECK(contains(r.err, "10000"));
}

TEST_CASE("simulate reports parse errors with file positions") {
    const std::string path = scratch_dir() + "/broken.cir";
    spit(path, "V1 in 0 1\nR1 a b 10q\n.out a\n");
    const CmdResult r = run_cli("simulate " + path);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, path + ":2:8: malformed value '10q'"));
}

TEST_CASE("simulate rejects unreadable paths and invalid circuits") {
    const CmdResult missing = run_cli("simulate /nonexistent/netlist.cir");
    CHECK(missing.exit_code == 2);
    CHECK(contains(missing.err, "cannot open netlist file"));

    const std::string path = scratch_dir() + "/island.cir";
    spit(path, "V1 in 0 1\nR1 in out 1k\nR2 a b 1k\n.out out\n");
    const CmdResult invalid = run_cli("simulate " + path);
    CHECK(invalid.exit_code == 2);
    CHECK(contains(invalid.err, "no path to ground"));
}

TEST_CASE("an unclassifiable sweep is reported but still written") {
    const std::string path = scratch_dir() + "/divider.cir";
    spit(path, "V1 in 0 1\nR1 in out 1k\nR2 out 0 1k\n.out out\n");
    const CmdResult r = run_cli("simulate " + path + " --wmin 1 --wmax 1k --ppd 10");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.err, "shape: unclassified"));
    CHECK(lines_of(r.out).size() > 1);
}

TEST_CASE("tune halves the bandwidth on request") {
    const CmdResult r = run_cli("tune --bw 7071.067811865475");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "tuned components:"));
    CHECK(contains(r.out, "14142.1"));
    CHECK(contains(r.out, "2.000000"));
    CHECK(contains(r.out, "targets matched within 1e-9"));
}

TEST_CASE("tune with no targets recomputes the current design") {
    const CmdResult r = run_cli("tune");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "R3  14000.000000 ohm"));
    CHECK(contains(r.out, "C5  1e-08 F"));
    CHECK(contains(r.out, "targets matched within 1e-9"));
}

TEST_CASE("tune validates its targets") {
    const CmdResult zero = run_cli("tune --omega0 0");
    CHECK(zero.exit_code == 2);
    CHECK(contains(zero.err, "omega0 must be positive"));

    const CmdResult junk = run_cli("tune --bw nonsense");
    CHECK(junk.exit_code == 2);
    CHECK(contains(junk.err, "bw has malformed value"));
}

TEST_CASE("help and missing subcommands use the documented exit codes") {
    const CmdResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(contains(help.out, "design"));
    CHECK(contains(help.out, "simulate"));
    CHECK(contains(help.out, "exit codes"));

    const CmdResult none = run_cli("");
    CHECK(none.exit_code == 2);
}
