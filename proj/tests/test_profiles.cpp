#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "qkdrate/profiles.hpp"

using namespace qkdrate;

TEST_CASE("registry holds the nine named parameter sets") {
    const auto& reg = builtin_profiles();
    CHECK(reg.size() == 9);
    const char* names[] = {"BT8",     "BT13",      "G13",      "KTH15",
                           "NTT-Red", "NTT-Green", "NTT-Blue", "GYS",
                           "TANG"};
    for (const char* n : names) {
        const auto* p = find_builtin_profile(n);
        REQUIRE(p != nullptr);
        CHECK(p->name == n);
    }
    CHECK(find_builtin_profile("nope") == nullptr);
    CHECK(find_builtin_profile("gys") == nullptr); // case-sensitive
}

TEST_CASE("GYS and TANG field values") {
    const auto& gys = *find_builtin_profile("GYS");
    CHECK(gys.channel.alpha_db_per_km == 0.21);
    CHECK(gys.channel.receiver_loss_db == 0.0);
    CHECK(gys.detector.efficiency == 0.045);
    CHECK(gys.detector.dark_count == 1e-6);
    CHECK(gys.detector.num_detectors == 2);
    CHECK(gys.detector.intrinsic_error == 0.033);
    CHECK(gys.pulse_rate_hz == 1.0);
    REQUIRE(gys.mid_station_dark_count.has_value());
    CHECK(*gys.mid_station_dark_count == 8.5e-7);

    const auto& tang = *find_builtin_profile("TANG");
    CHECK(tang.detector.efficiency == 0.43);
    CHECK(tang.detector.dark_count == 1e-7);
    CHECK(tang.detector.intrinsic_error == 0.005);
    CHECK(!tang.mid_station_dark_count.has_value());
}

TEST_CASE("aggregate dark count is n_D * d_B") {
    detector_params det;
    det.dark_count = 3e-5;
    det.num_detectors = 4;
    CHECK(det.p_dark() == 4 * 3e-5);
}

TEST_CASE("transmittance follows the dB law") {
    channel_params ch{0.2, 0.0};
    CHECK(transmittance(ch, 0.0) == 1.0);
    CHECK(transmittance(ch, 50.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(transmittance(ch, 100.0) == doctest::Approx(0.01).epsilon(1e-12));

    channel_params lossy{0.2, 3.0};
    CHECK(transmittance(lossy, 50.0, true) ==
          doctest::Approx(std::pow(10.0, -1.3)).epsilon(1e-15));
    // receiver loss ignored unless requested
    CHECK(transmittance(lossy, 50.0) == transmittance(ch, 50.0));

    CHECK_THROWS_AS(transmittance(ch, -1.0), std::invalid_argument);
}

TEST_CASE("mid-station transmittance covers half the span") {
    channel_params ch{0.2, 5.0};
    CHECK(mid_station_transmittance(ch, 100.0) ==
          doctest::Approx(0.1).epsilon(1e-12));
    // equals the receiver-loss-free transmittance at L/2
    CHECK(mid_station_transmittance(ch, 80.0) ==
          doctest::Approx(transmittance(ch, 40.0)).epsilon(1e-15));
    CHECK_THROWS_AS(mid_station_transmittance(ch, -0.5), std::invalid_argument);
}

TEST_CASE("serialize/parse round-trips every builtin bit-exactly") {
    for (const auto& p : builtin_profiles()) {
        const std::string text = serialize_profile(p);
        const auto q = parse_profile(text, p.name);
        CHECK(q.channel.alpha_db_per_km == p.channel.alpha_db_per_km);
        CHECK(q.channel.receiver_loss_db == p.channel.receiver_loss_db);
        CHECK(q.detector.efficiency == p.detector.efficiency);
        CHECK(q.detector.dark_count == p.detector.dark_count);
        CHECK(q.detector.num_detectors == p.detector.num_detectors);
        CHECK(q.detector.intrinsic_error == p.detector.intrinsic_error);
        CHECK(q.pulse_rate_hz == p.pulse_rate_hz);
        CHECK(q.wavelength_nm == p.wavelength_nm);
        CHECK(q.mid_station_dark_count == p.mid_station_dark_count);
        // and the text itself is a fixed point
        CHECK(serialize_profile(q) == text);
    }
}

TEST_CASE("parser skips comments and blanks, trims whitespace") {
    const std::string text =
        "# a comment\n"
        "\n"
        "  alpha_db_per_km = 0.25  \n"
        "efficiency=0.5\n"
        "dark_count=1e-6\n";
    const auto p = parse_profile(text, "t");
    CHECK(p.name == "t");
    CHECK(p.channel.alpha_db_per_km == 0.25);
    CHECK(p.detector.efficiency == 0.5);
    CHECK(p.detector.dark_count == 1e-6);
}

TEST_CASE("parser rejects malformed and out-of-range input") {
    CHECK_THROWS_AS(parse_profile("bogus_key=1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_profile("no equals sign\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_profile("alpha_db_per_km=abc\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_profile("alpha_db_per_km=0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_profile("alpha_db_per_km=0.2\nefficiency=1.5\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_profile("alpha_db_per_km=0.2\ndark_count=1\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_profile("alpha_db_per_km=0.2\nnum_detectors=0\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_profile("alpha_db_per_km=0.2\nintrinsic_error=0.6\n"),
                    std::invalid_argument);
}

TEST_CASE("profile files are named after the file stem") {
    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "qkdrate_lab7.profile";
    {
        std::ofstream out(path);
        out << serialize_profile(*find_builtin_profile("KTH15"));
    }
    const auto p = load_profile_file(path.string());
    CHECK(p.name == "qkdrate_lab7");
    CHECK(p.detector.efficiency == 0.18);
    fs::remove(path);

    CHECK_THROWS_AS(load_profile_file("/nonexistent/x.profile"),
                    std::invalid_argument);
}
