// End-to-end checks against the installed binary; the harness passes its
// path via QKDRATE_CLI.
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qkdrate/profiles.hpp"
#include "qkdrate/rates.hpp"
#include "qkdrate/sweep_io.hpp"

namespace fs = std::filesystem;

namespace {

struct cli_result {
    int code = -1;
    std::string out;
};

std::string cli_path() {
    const char* p = std::getenv("QKDRATE_CLI");
    REQUIRE_MESSAGE(p != nullptr, "QKDRATE_CLI must point at the binary");
    return p;
}

fs::path temp_file(const std::string& tag) {
    return fs::temp_directory_path() /
           ("qkdrate_cli_" + std::to_string(::getpid()) + "_" + tag);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

cli_result run_cli(const std::string& args, const std::string& tag) {
    const auto out_path = temp_file(tag);
    const std::string cmd = "\"" + cli_path() + "\" " + args + " > " +
                            out_path.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    cli_result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    fs::remove(out_path);
    return r;
}

} // namespace

TEST_CASE("cli: help and argument plumbing") {
    CHECK(run_cli("--help", "help").code == 0);
    CHECK(run_cli("", "noargs").code == 2);          // subcommand required
    CHECK(run_cli("frobnicate", "badsub").code == 2);
}

TEST_CASE("cli: profiles list") {
    const auto human = run_cli("profiles list", "plist");
    CHECK(human.code == 0);
    for (const char* name : {"BT8", "BT13", "G13", "KTH15", "NTT-Red",
                             "NTT-Green", "NTT-Blue", "GYS", "TANG"})
        CHECK(human.out.find(name) != std::string::npos);

    CHECK(run_cli("profiles list --profile nope", "pbad").code == 2);

    // single-profile machine output re-parses to the builtin, bit-exact
    const auto machine = run_cli("profiles list --machine --profile GYS", "pgys");
    REQUIRE(machine.code == 0);
    const auto parsed = qkdrate::parse_profile(machine.out, "GYS");
    const auto& gys = *qkdrate::find_builtin_profile("GYS");
    CHECK(parsed.channel.alpha_db_per_km == gys.channel.alpha_db_per_km);
    CHECK(parsed.channel.receiver_loss_db == gys.channel.receiver_loss_db);
    CHECK(parsed.detector.efficiency == gys.detector.efficiency);
    CHECK(parsed.detector.dark_count == gys.detector.dark_count);
    CHECK(parsed.detector.num_detectors == gys.detector.num_detectors);
    CHECK(parsed.detector.intrinsic_error == gys.detector.intrinsic_error);
    CHECK(parsed.pulse_rate_hz == gys.pulse_rate_hz);
    CHECK(parsed.wavelength_nm == gys.wavelength_nm);
    REQUIRE(parsed.mid_station_dark_count.has_value());
    CHECK(*parsed.mid_station_dark_count == *gys.mid_station_dark_count);

    // the full machine dump carries one block per profile
    const auto all = run_cli("profiles list --machine", "pall");
    REQUIRE(all.code == 0);
    std::size_t blocks = 0, pos = 0;
    while ((pos = all.out.find("# profile: ", pos)) != std::string::npos) {
        ++blocks;
        pos += 1;
    }
    CHECK(blocks == qkdrate::builtin_profiles().size());
}

TEST_CASE("cli: sweep output formats agree with the library") {
    const auto csv = run_cli(
        "sweep --protocol sarg04-4 --profile GYS --l-max 20", "scsv");
    REQUIRE(csv.code == 0);
    const auto pts = qkdrate::parse_sweep_csv(csv.out);
    REQUIRE(pts.size() == 21);
    const auto ref = qkdrate::sarg04_rate(qkdrate::sarg_variant::four_state,
                                          *qkdrate::find_builtin_profile("GYS"),
                                          0.1, qkdrate::ec_model::cascade(), 0.0);
    CHECK(pts[0].qber == ref.qber); // shortest round-trip decimals
    CHECK(pts[0].rate_per_pulse_raw == ref.rate_per_pulse_raw);
    REQUIRE(pts[0].mu.has_value());
    CHECK(*pts[0].mu == 0.1);

    const auto json = run_cli(
        "sweep --protocol sarg04-4 --profile GYS --l-max 5 --format json",
        "sjson");
    REQUIRE(json.code == 0);
    CHECK(qkdrate::parse_sweep_json(json.out).size() == 6);
}

TEST_CASE("cli: --out writes the same bytes as stdout, repeatably") {
    const std::string args =
        "sweep --protocol bb84-wcp --profile BT13 --l-max 30 --l-step 10";
    const auto to_stdout = run_cli(args, "sout1");
    REQUIRE(to_stdout.code == 0);

    const auto f1 = temp_file("sweep_a.csv");
    const auto f2 = temp_file("sweep_b.csv");
    CHECK(run_cli(args + " --out " + f1.string(), "sf1").code == 0);
    CHECK(run_cli(args + " --out " + f2.string(), "sf2").code == 0);
    CHECK(slurp(f1) == to_stdout.out);
    CHECK(slurp(f1) == slurp(f2));
    fs::remove(f1);
    fs::remove(f2);
}

TEST_CASE("cli: bad arguments exit 2") {
    CHECK(run_cli("sweep --protocol bb85 --profile GYS", "e1").code == 2);
    CHECK(run_cli("sweep --protocol simple --profile nope", "e2").code == 2);
    CHECK(run_cli("sweep --protocol simple", "e3").code == 2); // no profile
    CHECK(run_cli("sweep --protocol bb84-spdc --profile G13 --optimize mu",
                  "e4").code == 2); // no mu to optimize
    CHECK(run_cli("sweep --protocol simple --profile GYS --optimize both",
                  "e5").code == 2);
    CHECK(run_cli("sweep --protocol simple --profile GYS --ec turbo", "e6")
              .code == 2);
    CHECK(run_cli("sweep --protocol simple --profile GYS --format yaml", "e7")
              .code == 2);
    CHECK(run_cli("sweep --protocol simple --profile GYS --l-step 0", "e8")
              .code == 2);
    CHECK(run_cli("sweep --protocol simple --params /does/not/exist", "e9")
              .code == 2);
}

TEST_CASE("cli: an all-degenerate sweep exits 4 but still writes rows") {
    const auto params = temp_file("dead.profile");
    {
        std::ofstream out(params);
        out << "efficiency=0\ndark_count=0\n";
    }
    const auto r = run_cli("sweep --protocol simple --params " +
                               params.string() + " --l-max 10 --l-step 5",
                           "dead");
    fs::remove(params);
    CHECK(r.code == 4);
    const auto pts = qkdrate::parse_sweep_csv(r.out);
    REQUIRE(pts.size() == 3);
    for (const auto& p : pts)
        CHECK(p.status == qkdrate::point_status::degenerate);
}

TEST_CASE("cli: mc-validate gates and determinism") {
    CHECK(run_cli("mc-validate --pulses 5000", "mc1").code == 2);
    CHECK(run_cli("mc-validate --models bogus", "mc2").code == 2);
    CHECK(run_cli("mc-validate --models ,", "mc3").code == 2);

    const std::string args = "mc-validate --pulses 20000 --seed 42";
    const auto a = run_cli(args, "mc4");
    const auto b = run_cli(args + " --threads 3", "mc5");
    CHECK(a.code == 0);
    CHECK(a.out == b.out); // same report for any thread count
    CHECK(a.out.find("RESULT: PASS") != std::string::npos);

    const auto wcp_only =
        run_cli("mc-validate --pulses 20000 --seed 42 --models wcp", "mc6");
    CHECK(wcp_only.code == 0);
    CHECK(wcp_only.out.find(" - - ") != std::string::npos);
}
