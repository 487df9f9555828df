#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ctre/io.hpp"
#include "ctre/run.hpp"
#include "ctre/simulate.hpp"

using namespace ctre;

namespace {
std::string tmpdir() {
    auto d = std::filesystem::temp_directory_path() / "ctre_io_test";
    std::filesystem::create_directories(d);
    return d.string();
}
}  // namespace

TEST_CASE("parse basic two-column input") {
    std::istringstream in("0,1.0\n10,2.0\n");
    const auto p = parse_events(in);
    CHECK(p.series.times == std::vector<double>{0.0, 10.0});
    CHECK(p.series.magnitudes == std::vector<double>{1.0, 2.0});
    CHECK_FALSE(p.report.header_skipped);
    CHECK_FALSE(p.report.timestamp_mode);
}

TEST_CASE("header lines and bad rows are reported") {
    std::istringstream in("time,magnitude\n1,5\nbroken,row\n2,6\n3\n4,7\n");
    const auto p = parse_events(in);
    CHECK(p.report.header_skipped);
    CHECK(p.series.n() == 3);
    REQUIRE(p.report.bad_rows.size() == 2);
    CHECK(p.report.bad_rows[0].line == 3);
    CHECK(p.report.bad_rows[1].line == 5);
}

TEST_CASE("out-of-order rows are sorted with identical downstream results") {
    std::istringstream a("1,5\n3,2\n2,9\n4,1\n");
    std::istringstream b("1,5\n2,9\n3,2\n4,1\n");
    const auto pa = parse_events(a);
    const auto pb = parse_events(b);
    CHECK(pa.report.resorted);
    CHECK_FALSE(pb.report.resorted);
    CHECK(pa.series.times == pb.series.times);
    CHECK(pa.series.magnitudes == pb.series.magnitudes);
}

TEST_CASE("duplicate timestamps merge keeping the larger magnitude") {
    std::istringstream in("1,5\n2,3\n2,8\n3,1\n");
    const auto p = parse_events(in);
    CHECK(p.report.merged == 1);
    CHECK(p.series.times == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(p.series.magnitudes == std::vector<double>{5.0, 8.0, 1.0});
}

TEST_CASE("ISO-like timestamps convert to seconds since the first event") {
    std::istringstream in(
        "start,peak\n1980-02-14 00:00:00,100\n1980-02-14T01:00:00,250\n1980-02-15,75\n");
    const auto p = parse_events(in);
    CHECK(p.report.timestamp_mode);
    CHECK(p.series.times == std::vector<double>{0.0, 3600.0, 86400.0});
    CHECK(p.series.magnitudes == std::vector<double>{100.0, 250.0, 75.0});
}

TEST_CASE("too few valid events is an error") {
    std::istringstream in("time,mag\n1,2\n");
    CHECK_THROWS_AS(parse_events(in), std::runtime_error);
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_events(empty), std::runtime_error);
}

TEST_CASE("simulate -> write -> parse round trip is bit-exact") {
    const auto s = simulate_mrp({0.8, 500, MagnitudeLaw::standard_gumbel,
                                 WaitingLaw::stable, 99});
    std::stringstream buf;
    write_events_csv(buf, s);
    const auto p = parse_events(buf);
    CHECK(p.series.times == s.times);
    CHECK(p.series.magnitudes == s.magnitudes);
}

TEST_CASE("shortest round-trip formatting") {
    Rng rng(3, 0);
    for (int i = 0; i < 200; ++i) {
        const double v = (rng.uniform() - 0.25) * std::pow(10.0, 300.0 * (rng.uniform() - 0.5));
        double back = 0.0;
        CHECK(detail::parse_double(detail::fmt_exact(v), back));
        CHECK(back == v);
    }
}

TEST_CASE("vendored flare extract loads with the documented size") {
    const auto p = parse_events(std::string(CTRE_SOURCE_DIR) + "/data/hxrbs_flares.csv");
    CHECK(p.series.n() == 12776);
    CHECK(p.report.bad_rows.empty());
    p.series.validate();
    // full-sample QQ tail estimate of the peak rates sits near 0.8
    const auto est = qq_tail_estimate(p.series.magnitudes, {p.series.n()});
    CHECK(est.alpha_hat > 0.74);
    CHECK(est.alpha_hat < 0.86);
}

TEST_CASE("run: simulate then scan end-to-end") {
    const std::string dir = tmpdir();
    RunConfig sim;
    sim.command = Command::simulate;
    sim.beta = 0.8;
    sim.n = 4000;
    sim.seed = 5;
    sim.output = dir + "/events.csv";
    std::ostringstream msg;
    REQUIRE(run(sim, msg) == 0);

    RunConfig scan;
    scan.command = Command::scan;
    scan.input = dir + "/events.csv";
    scan.k_min = 20;
    scan.k_max = 200;
    scan.output = dir + "/scan.csv";
    REQUIRE(run(scan, msg) == 0);

    std::ifstream sc(dir + "/scan.csv");
    std::string header;
    std::getline(sc, header);
    CHECK(header == "k,ell,beta_hat,beta_lo,beta_hi,sigma_hat,sigma_norm,sigma_lo,sigma_hi");
    std::size_t rows = 0;
    for (std::string line; std::getline(sc, line);) ++rows;
    CHECK(rows == 181);
    CHECK(msg.str().find("stable window") != std::string::npos);
}

TEST_CASE("run: fit json output carries the LRT block") {
    const std::string dir = tmpdir();
    RunConfig sim;
    sim.command = Command::simulate;
    sim.beta = 0.8;
    sim.n = 4000;
    sim.seed = 6;
    sim.output = dir + "/events2.csv";
    std::ostringstream msg;
    REQUIRE(run(sim, msg) == 0);

    RunConfig fit;
    fit.command = Command::fit;
    fit.input = dir + "/events2.csv";
    fit.k = 100;
    fit.has_k = true;
    fit.format = OutFormat::json;
    fit.output = dir + "/fit.json";
    REQUIRE(run(fit, msg) == 0);

    std::ifstream f(dir + "/fit.json");
    nlohmann::json j = nlohmann::json::parse(f);
    CHECK(j["exceedances"] == 99);
    CHECK(j["fit"]["beta"].get<double>() > 0.5);
    CHECK(j["fit"]["beta"].get<double>() <= 1.0);
    CHECK(j.contains("lrt"));
    CHECK(j["lrt"]["deviance"].get<double>() >= 0.0);
}

TEST_CASE("run: diagnose writes the three tables") {
    const std::string dir = tmpdir();
    RunConfig sim;
    sim.command = Command::simulate;
    sim.n = 3000;
    sim.seed = 7;
    sim.output = dir + "/events3.csv";
    std::ostringstream msg;
    REQUIRE(run(sim, msg) == 0);

    RunConfig diag;
    diag.command = Command::diagnose;
    diag.input = dir + "/events3.csv";
    diag.k = 80;
    diag.has_k = true;
    diag.output = dir + "/diag";
    REQUIRE(run(diag, msg) == 0);
    for (const char* suffix : {".acf.csv", ".copula.csv", ".qq.csv"}) {
        std::ifstream f(dir + "/diag" + std::string(suffix));
        CHECK(f.good());
        std::string header;
        std::getline(f, header);
        CHECK_FALSE(header.empty());
    }
}

TEST_CASE("run: predict with t0 = 0 reproduces the unconditional density") {
    const std::string dir = tmpdir();
    RunConfig pred;
    pred.command = Command::predict;
    pred.beta0 = 0.8;
    pred.sigma0 = 1e5;
    pred.k = 100;
    pred.has_k = true;
    pred.t0 = 0.0;
    pred.points = 10;
    pred.format = OutFormat::json;
    pred.output = dir + "/pred.json";
    std::ostringstream msg;
    REQUIRE(run(pred, msg) == 0);

    std::ifstream f(dir + "/pred.json");
    nlohmann::json j = nlohmann::json::parse(f);
    const MLParams params = fitted_distribution_at(0.8, 1e5, 100);
    CHECK(j["sigma"].get<double>() == doctest::Approx(params.sigma).epsilon(1e-12));
    const auto& row = j["grid"][3];
    CHECK(row["density"].get<double>() ==
          doctest::Approx(ml_pdf(row["t"].get<double>(), params)).epsilon(1e-12));
}

TEST_CASE("run: threshold spec must be exactly one of k/ell") {
    const std::string dir = tmpdir();
    RunConfig sim;
    sim.command = Command::simulate;
    sim.n = 100;
    sim.seed = 8;
    sim.output = dir + "/events4.csv";
    std::ostringstream msg;
    REQUIRE(run(sim, msg) == 0);

    RunConfig fit;
    fit.command = Command::fit;
    fit.input = dir + "/events4.csv";
    CHECK(run(fit, msg) == 2);  // neither k nor ell
    fit.has_k = true;
    fit.has_ell = true;
    CHECK(run(fit, msg) == 2);  // both
}
