// Command-line front end: verification suites, propagation, coordinate maps,
// and manifold sampling with stable CSV/JSON formats.
//
// Exit codes: 0 success, 2 usage, 3 domain violation, 4 step-size collapse,
// 5 malformed input.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ksreg/charts.hpp"
#include "ksreg/flow.hpp"
#include "ksreg/io.hpp"
#include "ksreg/maps.hpp"
#include "ksreg/sampling.hpp"
#include "ksreg/verify.hpp"

namespace {

using namespace ksreg;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitStepCollapse = 4;
constexpr int kExitMalformed = 5;

struct VerifyOptions {
    std::string suite = "all";
    int samples = 1000;
    std::uint64_t seed = 42;
    std::string convention = "corrected";
    std::string out_dir = ".";
    bool print_config = false;
};

struct PropagateOptions {
    std::string system;
    std::string ic_inline;
    std::string ic_file;
    double span = 0;
    double revs = 1;
    bool revs_set = false, span_set = false;
    std::string method = "dopri5";
    double step = 1e-3;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    long max_steps = 2'000'000;
    double omega = 1.0;
    double mu = 1.0;
    double h = 0.0;
    double gauge = 0.0;
    std::string out;
    std::string format = "csv";
    bool print_config = false;
};

struct MapOptions {
    std::string via;
    std::string dv = "+k";
    std::string ks_form = "standard";
    std::string variant = "+1";
    std::string convention = "calibrated";
    double gauge = 0.0;
    std::string point_inline;
    std::string in_file;
    std::string out;
    bool print_config = false;
};

struct SampleOptions {
    std::string manifold;
    int count = 10;
    std::uint64_t seed = 0;
    std::string out;
    bool print_config = false;
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file " + path);
    os << text;
}

IntegratorConfig integrator_config(const PropagateOptions& opt) {
    IntegratorConfig cfg;
    cfg.method = opt.method == "rk4" ? IntegrationMethod::rk4_fixed
                                     : IntegrationMethod::dopri5_adaptive;
    cfg.step = opt.step;
    cfg.rel_tol = opt.rel_tol;
    cfg.abs_tol = opt.abs_tol;
    cfg.max_steps = opt.max_steps;
    return cfg;
}

std::vector<double> load_initial_condition(const PropagateOptions& opt) {
    if (!opt.ic_inline.empty()) return parse_number_list(opt.ic_inline);
    std::ifstream is(opt.ic_file);
    if (!is) throw std::invalid_argument("cannot open --ic-file " + opt.ic_file);
    const CsvParseResult parsed = read_csv(is);
    if (!parsed.errors.empty()) {
        for (const auto& [line, msg] : parsed.errors)
            std::cerr << opt.ic_file << ":" << line << ": " << msg << "\n";
        throw std::invalid_argument("malformed --ic-file");
    }
    if (parsed.table.rows.size() != 1)
        throw std::invalid_argument("--ic-file must contain exactly one row");
    return parsed.table.rows.front();
}

int run_verify(const VerifyOptions& opt) {
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) {
        std::cerr << "cannot create --out-dir " << opt.out_dir << ": " << ec.message() << "\n";
        return kExitUsage;
    }
    if (opt.print_config) {
        std::cout << "{\"command\":\"verify\",\"suite\":\"" << opt.suite
                  << "\",\"samples\":" << opt.samples << ",\"seed\":" << opt.seed
                  << ",\"convention\":\"" << opt.convention << "\",\"out_dir\":\""
                  << opt.out_dir << "\"}\n";
    }
    const bool report_only_printed = opt.convention == "printed";
    std::vector<SuiteReport> reports;
    if (opt.suite == "brackets" || opt.suite == "all")
        reports.push_back(suite_brackets(opt.seed, opt.samples, report_only_printed));
    if (opt.suite == "diagram" || opt.suite == "all")
        reports.push_back(suite_diagram_euler(opt.seed + 1, opt.samples));
    if (opt.suite == "fibers" || opt.suite == "all")
        reports.push_back(suite_fibers(opt.seed + 2, opt.samples));
    if (opt.suite == "reduction" || opt.suite == "all")
        reports.push_back(suite_reduction(opt.seed + 3, std::max(1, opt.samples / 2)));
    if (opt.suite == "flow" || opt.suite == "all")
        reports.push_back(suite_flow_equivalence());

    bool all_pass = true;
    for (const SuiteReport& report : reports) {
        for (const PropertyResult& p : report.properties) {
            const char* tag = p.report_only ? "INFO" : (p.pass ? "PASS" : "FAIL");
            std::printf("[%s] %s/%s max_error=%.3e tol=%.3e\n", tag, report.suite.c_str(),
                        p.name.c_str(), p.max_error, p.tol);
        }
        std::printf("suite %s: %s (%.2fs, seed %llu, n %d)\n", report.suite.c_str(),
                    report.pass() ? "pass" : "FAIL", report.runtime_seconds,
                    static_cast<unsigned long long>(report.seed), report.samples);
        all_pass = all_pass && report.pass();
        std::ofstream os(opt.out_dir + "/" + report.suite + ".json");
        if (!os) {
            std::cerr << "cannot write report in " << opt.out_dir << "\n";
            return kExitUsage;
        }
        os << report.to_json() << "\n";
    }
    return all_pass ? kExitOk : 1;
}

int run_propagate(const PropagateOptions& opt) {
    if (opt.print_config) {
        std::cout << "{\"command\":\"propagate\",\"system\":\"" << opt.system
                  << "\",\"method\":\"" << opt.method << "\",\"rel_tol\":" << opt.rel_tol
                  << ",\"abs_tol\":" << opt.abs_tol << ",\"step\":" << opt.step
                  << ",\"span\":" << opt.span << ",\"revs\":" << opt.revs
                  << ",\"omega\":" << opt.omega << ",\"mu\":" << opt.mu
                  << ",\"gauge\":" << opt.gauge << "}\n";
    }
    const IntegratorConfig cfg = integrator_config(opt);
    std::vector<double> ic;
    try {
        ic = load_initial_condition(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMalformed;
    }

    Trajectory traj = [&]() -> Trajectory {
        if (opt.system == "kepler3-regularized") {
            if (ic.size() != 6)
                throw std::invalid_argument("kepler3-regularized expects 6 numbers (x, y)");
            const Vector3d x0(ic[0], ic[1], ic[2]), y0(ic[3], ic[4], ic[5]);
            return propagate_regularized_kepler(x0, y0, opt.mu, cfg, opt.revs, opt.gauge);
        }
        HamiltonianSpec spec;
        spec.kind = hamiltonian_kind_from_string(opt.system);
        spec.omega = opt.omega;
        spec.grav_param = opt.mu;
        spec.h = opt.h;
        if (static_cast<int>(ic.size()) != spec.dimension())
            throw std::invalid_argument(opt.system + " expects " +
                                        std::to_string(spec.dimension()) + " numbers");
        StateVector s0 = Eigen::Map<const Eigen::VectorXd>(ic.data(), ic.size());
        if (!opt.span_set)
            throw std::invalid_argument("--span is required for " + opt.system);
        return integrate(spec, s0, opt.span, cfg);
    }();

    const auto& st = traj.statistics();
    std::fprintf(stderr,
                 "steps: accepted %ld rejected %ld min %.3e max %.3e mean %.3e\n",
                 st.accepted, st.rejected, st.min_step, st.max_step, st.mean_step);

    const std::vector<std::string> names = state_column_names(traj.spec());
    const std::string text = opt.format == "jsonl" ? trajectory_jsonl(traj, names)
                                                   : csv_to_string(trajectory_table(traj, names));
    write_text(opt.out, text);

    if (!traj.ok()) {
        std::cerr << "propagation failed: " << traj.failure_message()
                  << " (partial trajectory retained)\n";
        return kExitStepCollapse;
    }
    return kExitOk;
}

CsvTable map_rows(const MapOptions& opt, const std::vector<std::vector<double>>& rows) {
    CsvTable out;
    const DefiningVector dv = DefiningVector::parse(opt.dv);
    const KsForm form =
        opt.ks_form == "index-swapped" ? KsForm::index_swapped : KsForm::standard;
    const LCVariant variant = lc_variant_from_string(opt.variant);
    const AndoyerConvention conv = opt.convention == "printed" ? AndoyerConvention::printed
                                                               : AndoyerConvention::calibrated;

    auto expect = [&](const std::vector<double>& row, size_t n) {
        if (row.size() != n)
            throw std::invalid_argument("expected " + std::to_string(n) + " numbers, got " +
                                        std::to_string(row.size()));
    };

    for (const auto& row : rows) {
        std::vector<double> mapped;
        if (opt.via == "ks") {
            expect(row, 8);
            const KsImage img = ks_map(
                PhasePoint8::from_flat(Eigen::Map<const Vector8d>(row.data())), dv, form);
            out.header = {"x1", "x2", "x3", "y1", "y2", "y3", "real_defect"};
            mapped = {img.x[0], img.x[1], img.x[2], img.y[0], img.y[1], img.y[2],
                      img.real_defect};
        } else if (opt.via == "ks-inverse") {
            expect(row, 6);
            const PhasePoint8 z = ks_preimage({row[0], row[1], row[2]},
                                              {row[3], row[4], row[5]}, opt.gauge);
            out.header = {"q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4"};
            const Vector8d v = z.flat();
            mapped.assign(v.data(), v.data() + 8);
        } else if (opt.via == "lc") {
            expect(row, 4);
            const PhasePoint4 pt = lc_map({row[0], row[1]}, {row[2], row[3]}, variant);
            out.header = {"x1", "x2", "y1", "y2"};
            mapped = {pt.x[0], pt.x[1], pt.y[0], pt.y[1]};
        } else if (opt.via == "euler") {
            expect(row, 8);
            const EulerChart c = phase_to_euler(
                PhasePoint8::from_flat(Eigen::Map<const Vector8d>(row.data())));
            out.header.assign(EulerChart::header().begin(), EulerChart::header().end());
            const Vector8d v = c.flat();
            mapped.assign(v.data(), v.data() + 8);
        } else if (opt.via == "euler-inverse") {
            expect(row, 8);
            const PhasePoint8 z =
                euler_to_phase(EulerChart::from_flat(Eigen::Map<const Vector8d>(row.data())));
            out.header = {"q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4"};
            const Vector8d v = z.flat();
            mapped.assign(v.data(), v.data() + 8);
        } else if (opt.via == "andoyer") {
            expect(row, 8);
            const PhasePoint8 z = andoyer_to_phase(
                AndoyerChart::from_flat(Eigen::Map<const Vector8d>(row.data())), conv);
            out.header = {"q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4"};
            const Vector8d v = z.flat();
            mapped.assign(v.data(), v.data() + 8);
        } else if (opt.via == "spherical") {
            expect(row, 6);
            const PhasePoint6 pt = spherical_to_cartesian(
                SphericalChart::from_flat(Eigen::Map<const Vector6d>(row.data())));
            out.header = {"x1", "x2", "x3", "y1", "y2", "y3"};
            const Vector6d v = pt.flat();
            mapped.assign(v.data(), v.data() + 6);
        } else {  // polar
            expect(row, 4);
            const PhasePoint4 pt = polar_to_cartesian2(row[0], row[1], row[2], row[3]);
            out.header = {"x1", "x2", "y1", "y2"};
            mapped = {pt.x[0], pt.x[1], pt.y[0], pt.y[1]};
        }
        out.rows.push_back(std::move(mapped));
    }
    return out;
}

int run_map(const MapOptions& opt) {
    if (opt.print_config) {
        std::cout << "{\"command\":\"map\",\"via\":\"" << opt.via << "\",\"dv\":\"" << opt.dv
                  << "\",\"ks_form\":\"" << opt.ks_form << "\",\"variant\":\"" << opt.variant
                  << "\",\"convention\":\"" << opt.convention << "\",\"gauge\":" << opt.gauge
                  << "}\n";
    }
    std::vector<std::vector<double>> rows;
    if (!opt.point_inline.empty()) {
        try {
            rows.push_back(parse_number_list(opt.point_inline));
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: --point: " << e.what() << "\n";
            return kExitMalformed;
        }
    } else {
        std::ifstream is(opt.in_file);
        if (!is) {
            std::cerr << "error: cannot open --in " << opt.in_file << "\n";
            return kExitMalformed;
        }
        const CsvParseResult parsed = read_csv(is);
        if (!parsed.errors.empty()) {
            for (const auto& [line, msg] : parsed.errors)
                std::cerr << opt.in_file << ":" << line << ": " << msg << "\n";
            return kExitMalformed;
        }
        rows = parsed.table.rows;
    }
    const CsvTable table = map_rows(opt, rows);
    write_text(opt.out, csv_to_string(table));
    return kExitOk;
}

int run_sample(const SampleOptions& opt) {
    if (opt.print_config) {
        std::cout << "{\"command\":\"sample\",\"manifold\":\"" << opt.manifold
                  << "\",\"count\":" << opt.count << ",\"seed\":" << opt.seed << "}\n";
    }
    const Manifold m = manifold_from_string(opt.manifold);
    CsvTable table;
    const auto header = manifold_header(m);
    table.header.assign(header.begin(), header.end());
    for (const Vector8d& row : sample_manifold(m, opt.count, opt.seed))
        table.rows.emplace_back(row.data(), row.data() + 8);
    write_text(opt.out, csv_to_string(table));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regularizing maps of the Kepler problem: KS/LC transformations, "
                 "projective Euler/Andoyer charts, and their verification suites"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a TOML/INI config file");

    VerifyOptions vo;
    CLI::App* verify = app.add_subcommand("verify", "Run numerical verification suites");
    verify->add_option("--suite", vo.suite, "Suite name")
        ->check(CLI::IsMember({"brackets", "diagram", "fibers", "reduction", "flow", "all"}));
    verify->add_option("--samples", vo.samples, "Random points per suite")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", vo.seed, "Random seed");
    verify->add_option("--convention", vo.convention,
                       "printed: report published-form findings without gating")
        ->check(CLI::IsMember({"printed", "corrected"}));
    verify->add_option("--out-dir", vo.out_dir, "Directory for JSON reports");
    verify->add_flag("--print-config", vo.print_config, "Echo resolved configuration");

    PropagateOptions po;
    CLI::App* propagate = app.add_subcommand("propagate", "Integrate a Hamiltonian flow");
    propagate->add_option("--system,--kind", po.system, "System to integrate")
        ->required()
        ->check(CLI::IsMember({"osc4", "kepler3", "kepler2", "kepler3-regularized"}));
    propagate->add_option("--ic", po.ic_inline, "Inline comma-separated initial condition");
    propagate->add_option("--ic-file", po.ic_file, "CSV file with one initial-condition row");
    propagate->add_option("--span", po.span, "Integration span")->each([&po](std::string) {
        po.span_set = true;
    });
    propagate->add_option("--revs", po.revs, "Revolutions (kepler3-regularized)")
        ->each([&po](std::string) { po.revs_set = true; });
    propagate->add_option("--method", po.method, "Integrator")
        ->check(CLI::IsMember({"dopri5", "rk4"}));
    propagate->add_option("--step", po.step, "Fixed step for rk4");
    propagate->add_option("--rel-tol", po.rel_tol, "Relative tolerance (dopri5)");
    propagate->add_option("--abs-tol", po.abs_tol, "Absolute tolerance (dopri5)");
    propagate->add_option("--max-steps", po.max_steps, "Step budget");
    propagate->add_option("--omega", po.omega, "Oscillator strength (osc4)");
    propagate->add_option("--mu,--grav-param", po.mu, "Gravitational parameter (kepler systems)");
    propagate->add_option("--h-level", po.h, "Fixed energy level (aux/regularized forms)");
    propagate->add_option("--gauge", po.gauge, "KS preimage fiber angle psi (radians)");
    propagate->add_option("--out", po.out, "Output path (default stdout)");
    propagate->add_option("--format", po.format, "Output format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    propagate->add_flag("--print-config", po.print_config, "Echo resolved configuration");

    MapOptions mo;
    CLI::App* mapcmd = app.add_subcommand("map", "Apply a coordinate transformation");
    mapcmd->add_option("--via", mo.via, "Transformation")
        ->required()
        ->check(CLI::IsMember({"ks", "ks-inverse", "lc", "euler", "euler-inverse", "andoyer",
                               "spherical", "polar"}));
    mapcmd->add_option("--dv", mo.dv, "Defining vector for ks: one of +i,-i,+j,-j,+k,-k");
    mapcmd->add_option("--ks-form", mo.ks_form, "KS component convention")
        ->check(CLI::IsMember({"standard", "index-swapped"}));
    mapcmd->add_option("--variant", mo.variant, "LC multiplier: +1,-1,+i,-i");
    mapcmd->add_option("--convention", mo.convention, "Andoyer momentum normalization")
        ->check(CLI::IsMember({"printed", "calibrated"}));
    mapcmd->add_option("--gauge", mo.gauge, "Fiber angle psi for ks-inverse (radians)");
    mapcmd->add_option("--point", mo.point_inline, "Inline comma-separated input point");
    mapcmd->add_option("--in", mo.in_file, "CSV input file");
    mapcmd->add_option("--out", mo.out, "Output path (default stdout)");
    mapcmd->add_flag("--print-config", mo.print_config, "Echo resolved configuration");

    SampleOptions so;
    CLI::App* sample = app.add_subcommand("sample", "Draw seeded samples from a manifold");
    sample->add_option("--manifold", so.manifold, "Target manifold")
        ->required()
        ->check(CLI::IsMember(
            {"phase8", "xi0-zero", "xi1-zero", "euler-domain", "andoyer-domain"}));
    sample->add_option("--count", so.count, "Number of samples")->check(CLI::PositiveNumber);
    sample->add_option("--seed", so.seed, "Random seed");
    sample->add_option("--out", so.out, "Output path (default stdout)");
    sample->add_flag("--print-config", so.print_config, "Echo resolved configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(verify)) return run_verify(vo);
        if (app.got_subcommand(propagate)) {
            if (po.ic_inline.empty() == po.ic_file.empty()) {
                std::cerr << "error: exactly one of --ic / --ic-file is required\n";
                return kExitUsage;
            }
            return run_propagate(po);
        }
        if (app.got_subcommand(mapcmd)) {
            if (mo.point_inline.empty() == mo.in_file.empty()) {
                std::cerr << "error: exactly one of --point / --in is required\n";
                return kExitUsage;
            }
            return run_map(mo);
        }
        if (app.got_subcommand(sample)) return run_sample(so);
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
