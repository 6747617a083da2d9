// bellpol command-line front end. Talks to the library exclusively through
// the C API in bellpol_c.h; all math lives behind that boundary.
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bellpol/bellpol_c.h"

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
const double kRoot8 = 2.0 * std::sqrt(2.0);

constexpr int kExitOk = 0;
constexpr int kExitQuantitative = 1;
constexpr int kExitUsage = 2;

// Shortest decimal representation that round-trips the double.
std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

int status_exit(bellpol_status st) {
    return st == BELLPOL_ELOWVIS ? kExitQuantitative : kExitUsage;
}

[[noreturn]] void die_status(bellpol_status st) {
    std::cerr << "error: " << bellpol_last_error() << "\n";
    std::exit(status_exit(st));
}

void require_ok(bellpol_status st) {
    if (st != BELLPOL_OK) die_status(st);
}

struct CsvWriter {
    std::ofstream out;

    CsvWriter(const std::string& path, const std::string& header) {
        out.open(path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot open output file: " << path << "\n";
            std::exit(kExitUsage);
        }
        out << header << "\n";
    }

    void row(const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ",";
            out << fields[i];
        }
        out << "\n";
    }

    void close(const std::string& path) {
        out.close();
        if (!out) {
            std::cerr << "error: write failed: " << path << "\n";
            std::exit(kExitUsage);
        }
    }
};

// Run-manifest echo written beside each CSV artifact.
void write_manifest(const std::string& csv_path, const std::string& command,
                    const json& inputs) {
    json m;
    m["command"] = command;
    m["inputs"] = inputs;
    m["artifact_version"] = bellpol_version();
    const std::string path = csv_path + ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    out << m.dump(2) << "\n";
    if (!out) {
        std::cerr << "error: cannot write manifest: " << path << "\n";
        std::exit(kExitUsage);
    }
}

bellpol_family parse_family(const std::string& s) {
    if (s == "phi") return BELLPOL_FAMILY_PHI;
    if (s == "psi") return BELLPOL_FAMILY_PSI;
    std::cerr << "error: unknown family '" << s << "' (expected phi or psi)\n";
    std::exit(kExitUsage);
}

bellpol_scheme parse_scheme(const std::string& s) {
    if (s == "rotating") return BELLPOL_SCHEME_ROTATING;
    if (s == "fixed-pair") return BELLPOL_SCHEME_FIXED_PAIR;
    if (s == "experimental") return BELLPOL_SCHEME_EXPERIMENTAL;
    std::cerr << "error: unknown scheme '" << s
              << "' (expected rotating, fixed-pair or experimental)\n";
    std::exit(kExitUsage);
}

// Shared simulation flags for scan-fit and simulate.
struct ScanArgs {
    std::string family = "phi";
    std::string scheme = "fixed-pair";
    double phi = 0.0;
    double start = std::nan("");
    double stop = std::nan("");
    int points = 20;
    double pair_rate = 1000.0;
    double integration_time = 1.0;
    double accidental_rate = 0.0;
    std::uint64_t seed = 0;
    bool noiseless = false;
    std::string out;
};

void add_scan_options(CLI::App* cmd, ScanArgs& a) {
    cmd->add_option("--family", a.family, "State family: phi or psi");
    cmd->add_option("--scheme", a.scheme,
                    "Compensation scheme: rotating, fixed-pair or experimental");
    cmd->add_option("--phi", a.phi, "True state phase")->required();
    cmd->add_option("--start", a.start, "First scan value (default: scheme window start)");
    cmd->add_option("--stop", a.stop, "End of the scan window, exclusive");
    cmd->add_option("--points", a.points, "Number of scan points");
    cmd->add_option("--pair-rate", a.pair_rate, "Detected pairs per second");
    cmd->add_option("--time", a.integration_time, "Integration time per point, seconds");
    cmd->add_option("--accidentals", a.accidental_rate, "Accidental coincidences per second");
    cmd->add_option("--seed", a.seed, "Simulation seed");
    cmd->add_flag("--noiseless", a.noiseless, "Use expected counts instead of Poisson draws");
    cmd->add_option("--out", a.out, "CSV output path")->required();
}

std::vector<double> scan_grid(const ScanArgs& a) {
    if (a.points < 2) {
        std::cerr << "error: --points must be at least 2\n";
        std::exit(kExitUsage);
    }
    double start = a.start, stop = a.stop;
    const bool rotating = a.scheme == "rotating";
    if (std::isnan(start)) start = rotating ? kPi / 2.0 : 0.0;
    if (std::isnan(stop)) stop = rotating ? 3.0 * kPi / 2.0 : kTwoPi;
    if (!(stop > start)) {
        std::cerr << "error: --stop must exceed --start\n";
        std::exit(kExitUsage);
    }
    std::vector<double> g(static_cast<size_t>(a.points));
    for (int i = 0; i < a.points; ++i) {
        g[static_cast<size_t>(i)] = start + (stop - start) * i / a.points;
    }
    return g;
}

json scan_inputs(const ScanArgs& a, const std::vector<double>& grid) {
    json j;
    j["family"] = a.family;
    j["scheme"] = a.scheme;
    j["phi"] = a.phi;
    j["start"] = grid.front();
    j["stop_exclusive"] = grid.back() + (grid.size() > 1 ? grid[1] - grid[0] : 0.0);
    j["points"] = a.points;
    j["pair_rate"] = a.pair_rate;
    j["time"] = a.integration_time;
    j["accidentals"] = a.accidental_rate;
    j["seed"] = a.seed;
    j["noiseless"] = a.noiseless;
    return j;
}

struct FringeHandle {
    bellpol_fringe* f = nullptr;
    ~FringeHandle() { bellpol_fringe_free(f); }
};

void run_scan(const ScanArgs& a, const std::string& command, FringeHandle& fringe) {
    const std::vector<double> grid = scan_grid(a);
    require_ok(bellpol_scan_fringe(parse_family(a.family), parse_scheme(a.scheme), a.phi,
                                   grid.data(), grid.size(), a.pair_rate, a.integration_time,
                                   a.accidental_rate, a.seed, a.noiseless ? 1 : 0, &fringe.f));
    CsvWriter csv(a.out, "scan_value,n_pp,n_pm,n_mp,n_mm,p_model");
    for (size_t i = 0; i < bellpol_fringe_size(fringe.f); ++i) {
        double x = 0.0, p_model = 0.0;
        uint64_t counts[4];
        require_ok(bellpol_fringe_point(fringe.f, i, &x, counts, &p_model));
        csv.row({fmt(x), std::to_string(counts[0]), std::to_string(counts[1]),
                 std::to_string(counts[2]), std::to_string(counts[3]), fmt(p_model)});
    }
    csv.close(a.out);
    write_manifest(a.out, command, scan_inputs(a, grid));
}

// --config: JSON file whose keys are the long option names of the invoked
// subcommand; explicit flags win. Unknown keys are rejected.
std::vector<std::string> merge_config(CLI::App& app, std::vector<std::string> args) {
    std::string config_path;
    for (size_t i = 0; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                std::cerr << "error: --config needs a file path\n";
                std::exit(kExitUsage);
            }
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i),
                       args.begin() + static_cast<long>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
        } else {
            ++i;
        }
    }
    if (config_path.empty()) return args;

    size_t sub_pos = args.size();
    CLI::App* sub = nullptr;
    for (size_t i = 0; i < args.size(); ++i) {
        if (!args[i].empty() && args[i][0] != '-') {
            sub = app.get_subcommand_no_throw(args[i]);
            sub_pos = i;
            break;
        }
    }
    if (!sub) {
        std::cerr << "error: --config requires a subcommand\n";
        std::exit(kExitUsage);
    }

    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read config file: " << config_path << "\n";
        std::exit(kExitUsage);
    }
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        std::cerr << "error: bad config JSON: " << e.what() << "\n";
        std::exit(kExitUsage);
    }
    if (!cfg.is_object()) {
        std::cerr << "error: config must be a JSON object\n";
        std::exit(kExitUsage);
    }

    std::vector<std::string> tokens;
    for (const auto& [key, value] : cfg.items()) {
        const std::string name = "--" + key;
        const bool global = key == "degrees";
        if (!global && sub->get_option_no_throw(name) == nullptr) {
            std::cerr << "error: unknown config key '" << key << "' for subcommand '"
                      << sub->get_name() << "'\n";
            std::exit(kExitUsage);
        }
        if (value.is_boolean()) {
            if (value.get<bool>()) tokens.push_back(name);
        } else if (value.is_string()) {
            tokens.push_back(name + "=" + value.get<std::string>());
        } else {
            tokens.push_back(name + "=" + value.dump());
        }
        if (global && !tokens.empty() && tokens.back().rfind("--degrees", 0) == 0) {
            // Global flag goes before the subcommand name.
            std::string t = tokens.back();
            tokens.pop_back();
            args.insert(args.begin() + static_cast<long>(sub_pos), t);
            ++sub_pos;
        }
    }
    args.insert(args.begin() + static_cast<long>(sub_pos) + 1, tokens.begin(), tokens.end());
    return args;
}

double deg2rad(double d) { return d * kPi / 180.0; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell-CHSH analysis of elliptically polarized entangled photon pairs"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    bool degrees = false;
    app.add_flag("--degrees", degrees, "Interpret angle arguments as degrees");

    // smax
    auto* smax = app.add_subcommand("smax", "Optimal settings and S_max over a phase grid");
    double smax_start = 0.0, smax_stop = kPi, smax_tol = 1e-9;
    int smax_points = 181;
    std::string smax_out;
    smax->add_option("--phi-start", smax_start, "First phase of the grid");
    smax->add_option("--phi-stop", smax_stop, "Last phase of the grid, inclusive");
    smax->add_option("--points", smax_points, "Grid size");
    smax->add_option("--tol", smax_tol, "Tolerance of the numeric maximizer");
    smax->add_option("--out", smax_out, "CSV output path")->required();

    // probs
    auto* probs = app.add_subcommand("probs", "Coincidence probabilities for rotation analyzers");
    double probs_phi = 0.0, probs_a = 0.0, probs_b = 0.0;
    std::string probs_out;
    probs->add_option("--phi", probs_phi, "State phase")->required();
    probs->add_option("--a", probs_a, "Analyzer angle on A")->required();
    probs->add_option("--b", probs_b, "Analyzer angle on B")->required();
    probs->add_option("--out", probs_out, "Optional CSV output path");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "Numeric maximization of S at one phase");
    double opt_phi = 0.0, opt_tol = 1e-9;
    std::string opt_out;
    optimize->add_option("--phi", opt_phi, "State phase")->required();
    optimize->add_option("--tol", opt_tol, "Maximizer tolerance");
    optimize->add_option("--out", opt_out, "Optional CSV output path");

    // compensate
    auto* compensate = app.add_subcommand("compensate", "Device settings for one scheme");
    std::string comp_family = "phi", comp_scheme, comp_out;
    double comp_phi = 0.0, comp_alpha_a = kPi / 4.0, comp_alpha_b = kPi / 4.0;
    compensate->add_option("--family", comp_family, "State family: phi or psi");
    compensate->add_option("--scheme", comp_scheme,
                           "rotating, fixed-pair or experimental")->required();
    compensate->add_option("--phi", comp_phi, "State phase")->required();
    compensate->add_option("--alpha-a", comp_alpha_a, "Analysis parameter on A");
    compensate->add_option("--alpha-b", comp_alpha_b, "Analysis parameter on B");
    compensate->add_option("--out", comp_out, "Optional CSV output path");

    // scan-fit and simulate share their options.
    auto* scanfit = app.add_subcommand("scan-fit",
                                       "Simulate a compensator scan and estimate the phase");
    ScanArgs scan_args;
    add_scan_options(scanfit, scan_args);
    bool use_expected = false;
    scanfit->add_flag("--use-expected", use_expected,
                      "Fit the expected counts instead of the sampled ones");

    auto* simulate = app.add_subcommand("simulate", "Simulate a compensator scan (counts only)");
    ScanArgs sim_args;
    add_scan_options(simulate, sim_args);

    auto* verify = app.add_subcommand("verify", "Run the oracle verification suites");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = merge_config(app, std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            return app.exit(e);
        }
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    if (degrees) {
        for (double* angle : {&smax_start, &smax_stop, &probs_phi, &probs_a, &probs_b, &opt_phi,
                              &comp_phi, &comp_alpha_a, &comp_alpha_b, &scan_args.phi,
                              &sim_args.phi}) {
            *angle = deg2rad(*angle);
        }
        for (ScanArgs* a : {&scan_args, &sim_args}) {
            if (!std::isnan(a->start)) a->start = deg2rad(a->start);
            if (!std::isnan(a->stop)) a->stop = deg2rad(a->stop);
        }
    }

    if (smax->parsed()) {
        if (smax_points < 1) {
            std::cerr << "error: --points must be at least 1\n";
            return kExitUsage;
        }
        CsvWriter csv(smax_out, "phi,a,a_prime,b,b_prime,s_closed,s_numeric");
        for (int i = 0; i < smax_points; ++i) {
            const double phi =
                smax_points == 1
                    ? smax_start
                    : smax_start + (smax_stop - smax_start) * i / (smax_points - 1);
            double settings[4], s_closed = 0.0, s_numeric = 0.0;
            require_ok(bellpol_optimal_settings_closed(phi, settings, &s_closed));
            double nsettings[4];
            require_ok(bellpol_maximize_bell(phi, smax_tol, nsettings, &s_numeric));
            csv.row({fmt(phi), fmt(settings[0]), fmt(settings[1]), fmt(settings[2]),
                     fmt(settings[3]), fmt(s_closed), fmt(s_numeric)});
        }
        csv.close(smax_out);
        write_manifest(smax_out, "smax",
                       {{"phi_start", smax_start},
                        {"phi_stop", smax_stop},
                        {"points", smax_points},
                        {"tol", smax_tol}});
        std::cout << "wrote " << smax_out << " (" << smax_points << " rows)\n";
        return kExitOk;
    }

    if (probs->parsed()) {
        double p[4], e = 0.0;
        require_ok(bellpol_rotating_probs(probs_phi, probs_a, probs_b, p, &e));
        const std::string header = "phi,a,b,p_pp,p_pm,p_mp,p_mm,correlation";
        const std::vector<std::string> row{fmt(probs_phi), fmt(probs_a), fmt(probs_b),
                                           fmt(p[0]),      fmt(p[1]),    fmt(p[2]),
                                           fmt(p[3]),      fmt(e)};
        std::cout << header << "\n";
        for (size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
        std::cout << "\n";
        if (!probs_out.empty()) {
            CsvWriter csv(probs_out, header);
            csv.row(row);
            csv.close(probs_out);
            write_manifest(probs_out, "probs",
                           {{"phi", probs_phi}, {"a", probs_a}, {"b", probs_b}});
        }
        return kExitOk;
    }

    if (optimize->parsed()) {
        double settings[4], s = 0.0;
        require_ok(bellpol_maximize_bell(opt_phi, opt_tol, settings, &s));
        const std::string header = "phi,a,a_prime,b,b_prime,s";
        const std::vector<std::string> row{fmt(opt_phi),      fmt(settings[0]), fmt(settings[1]),
                                           fmt(settings[2]),  fmt(settings[3]), fmt(s)};
        std::cout << header << "\n";
        for (size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
        std::cout << "\n";
        if (!opt_out.empty()) {
            CsvWriter csv(opt_out, header);
            csv.row(row);
            csv.close(opt_out);
            write_manifest(opt_out, "optimize", {{"phi", opt_phi}, {"tol", opt_tol}});
        }
        return kExitOk;
    }

    if (compensate->parsed()) {
        double settings[3], phi_eff = 0.0, s = 0.0;
        const bellpol_scheme scheme = parse_scheme(comp_scheme);
        const bellpol_status st =
            bellpol_compensate(parse_family(comp_family), scheme, comp_phi, comp_alpha_a,
                               comp_alpha_b, settings, &phi_eff, &s);
        if (st != BELLPOL_OK) die_status(st);
        const char* names[3][3] = {{"chi_A", "zeta_A", "chi_B"},
                                   {"chi_1A", "chi_2A", "chi_B"},
                                   {"zeta_1A", "chi_2A", "zeta_B"}};
        const char* const* n = names[static_cast<int>(scheme)];
        std::cout << "scheme=" << comp_scheme << " family=" << comp_family
                  << " phi=" << fmt(comp_phi) << "\n";
        for (int i = 0; i < 3; ++i) std::cout << n[i] << "=" << fmt(settings[i]) << "\n";
        std::cout << "phi_eff=" << fmt(phi_eff) << "\n";
        std::cout << "S=" << fmt(s) << "\n";
        if (!comp_out.empty()) {
            CsvWriter csv(comp_out,
                          std::string(n[0]) + "," + n[1] + "," + n[2] + ",phi_eff,s");
            csv.row({fmt(settings[0]), fmt(settings[1]), fmt(settings[2]), fmt(phi_eff),
                     fmt(s)});
            csv.close(comp_out);
            write_manifest(comp_out, "compensate",
                           {{"family", comp_family},
                            {"scheme", comp_scheme},
                            {"phi", comp_phi},
                            {"alpha_a", comp_alpha_a},
                            {"alpha_b", comp_alpha_b}});
        }
        return std::abs(s - kRoot8) <= 1e-6 ? kExitOk : kExitQuantitative;
    }

    if (scanfit->parsed()) {
        FringeHandle fringe;
        run_scan(scan_args, "scan-fit", fringe);
        double phi_hat = 0.0, sigma = 0.0, visibility = 0.0;
        const bellpol_status st = bellpol_estimate_phase(fringe.f, use_expected ? 1 : 0,
                                                         &phi_hat, &sigma, &visibility);
        if (st != BELLPOL_OK && st != BELLPOL_ELOWVIS) die_status(st);
        std::cout << "phi_hat=" << fmt(phi_hat) << " sigma=" << fmt(sigma)
                  << " visibility=" << fmt(visibility) << "\n";
        if (st == BELLPOL_ELOWVIS) {
            std::cerr << "warning: " << bellpol_last_error() << "\n";
            return kExitQuantitative;
        }
        return kExitOk;
    }

    if (simulate->parsed()) {
        FringeHandle fringe;
        run_scan(sim_args, "simulate", fringe);
        std::cout << "wrote " << sim_args.out << " (" << sim_args.points << " rows)\n";
        return kExitOk;
    }

    if (verify->parsed()) {
        char report[4096];
        int failures = 0;
        require_ok(bellpol_verify(report, sizeof(report), &failures));
        std::cout << report;
        return failures == 0 ? kExitOk : kExitQuantitative;
    }

    return kExitUsage;
}
