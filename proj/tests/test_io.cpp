#include <doctest.h>

#include <sstream>

#include "ksreg/io.hpp"

using namespace ksreg;

TEST_CASE("csv round trip with header and comment") {
    CsvTable table;
    table.header = {"a", "b"};
    table.rows = {{1.5, -2.25}, {0.1, 3e-17}};
    const std::string text = csv_to_string(table);
    CHECK(text.rfind("# format_version", 0) == 0);

    std::istringstream is(text);
    const CsvParseResult parsed = read_csv(is);
    CHECK(parsed.errors.empty());
    REQUIRE(parsed.table.header == std::vector<std::string>{"a", "b"});
    REQUIRE(parsed.table.rows.size() == 2);
    CHECK(parsed.table.rows[1][1] == doctest::Approx(3e-17));
}

TEST_CASE("csv parse errors carry line numbers") {
    std::istringstream is("# comment\nx,y\n1,2\n1,oops\n3\n4,5\n");
    const CsvParseResult parsed = read_csv(is);
    REQUIRE(parsed.errors.size() == 2);
    CHECK(parsed.errors[0].first == 4);
    CHECK(parsed.errors[1].first == 5);
    CHECK(parsed.table.rows.size() == 2);
}

TEST_CASE("inline number lists") {
    const std::vector<double> v = parse_number_list("1, 2.5,-3e2");
    REQUIRE(v.size() == 3);
    CHECK(v[2] == doctest::Approx(-300.0));
    CHECK_THROWS_AS(parse_number_list("1,zzz"), std::invalid_argument);
    CHECK_THROWS_AS(parse_number_list(""), std::invalid_argument);
}

TEST_CASE("trajectory table layout") {
    HamiltonianSpec spec;
    spec.kind = HamiltonianKind::kepler3;
    Trajectory traj(spec, {});
    TrajectorySample smp;
    smp.s = 0.5;
    smp.t = 2.0;
    smp.state = Eigen::VectorXd::LinSpaced(6, 1, 6);
    smp.derivative = Eigen::VectorXd::Zero(6);
    smp.energy = -0.5;
    smp.xi0 = smp.xi1 = std::numeric_limits<double>::quiet_NaN();
    traj.push(smp);

    const CsvTable table = trajectory_table(traj, state_column_names(spec));
    REQUIRE(table.header.size() == 11);
    CHECK(table.header.front() == "s");
    CHECK(table.header[2] == "x1");
    CHECK(table.header.back() == "Xi1");
    CHECK(table.rows[0][1] == doctest::Approx(2.0));

    const std::string jsonl = trajectory_jsonl(traj, state_column_names(spec));
    CHECK(jsonl.find("\"columns\"") != std::string::npos);
    CHECK(jsonl.find("format_version") != std::string::npos);

    // A nan csv cell survives the round trip.
    std::istringstream is(csv_to_string(table));
    const CsvParseResult parsed = read_csv(is);
    CHECK(parsed.errors.empty());
    CHECK(std::isnan(parsed.table.rows[0][9]));
}

TEST_CASE("chart json round trips with documented field names") {
    EulerChart e;
    e.rho = 1.3;
    e.phi = 0.4;
    e.theta = 1.1;
    e.psi = 5.9;
    e.P = -0.2;
    e.Phi = 0.8;
    e.Theta = 0.1;
    e.Psi = -0.5;
    const std::string je = euler_chart_to_json(e);
    CHECK(je.find("\"theta\":") != std::string::npos);
    const EulerChart eb = euler_chart_from_json(je);
    CHECK((eb.flat() - e.flat()).cwiseAbs().maxCoeff() == 0.0);

    AndoyerChart a;
    a.rho = 0.7;
    a.lambda = 1.2;
    a.mu_angle = 2.1;
    a.nu = 0.3;
    a.P = 0.5;
    a.Lambda = -0.4;
    a.M = 1.1;
    a.N = 0.9;
    const AndoyerChart ab = andoyer_chart_from_json(andoyer_chart_to_json(a));
    CHECK((ab.flat() - a.flat()).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(euler_chart_from_json("{\"rho\":1}"), std::invalid_argument);
}
