// Command-line front end: every analysis of the library as a subcommand with
// JSON or CSV output. Exit status: 0 success, 2 usage error, 1 computation
// error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdiqkd/sdiqkd.hpp"

namespace {

using nlohmann::json;

// All numeric output carries 12 significant digits.
double round_sig12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

json round_floats(const json& j) {
    if (j.is_number_float()) return round_sig12(j.get<double>());
    if (j.is_object()) {
        json out = json::object();
        for (const auto& [k, v] : j.items()) out[k] = round_floats(v);
        return out;
    }
    if (j.is_array()) {
        json out = json::array();
        for (const auto& v : j) out.push_back(round_floats(v));
        return out;
    }
    return j;
}

std::string format_g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

sdiqkd::QuantumSetup load_setup(const std::string& spec) {
    if (spec == "bb84" || spec == "optimal" || spec == "mixed") {
        return sdiqkd::builtin_setup(spec);
    }
    return sdiqkd::setup_from_json(load_json_file(spec));
}

sdiqkd::DataTable load_table(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open file: " + path);
        return sdiqkd::table_from_csv(in);
    }
    return sdiqkd::table_from_json(load_json_file(path));
}

struct OutputOptions {
    std::string format = "json";
    std::string out_path;  // empty: stdout
};

void emit(const OutputOptions& opt, const json& body, const std::string& csv_body) {
    std::string text;
    if (opt.format == "json") {
        text = round_floats(body).dump(2) + "\n";
    } else {
        text = csv_body;
    }
    if (opt.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opt.out_path);
        if (!out) throw std::runtime_error("cannot write file: " + opt.out_path);
        out << text;
    }
}

std::string key_value_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::ostringstream os;
    os << "key,value\n";
    for (const auto& [k, v] : rows) os << k << ',' << v << '\n';
    return os.str();
}

sdiqkd::BlochVector parse_axis(const std::string& text) {
    std::istringstream is(text);
    std::string field;
    double parts[3];
    for (int i = 0; i < 3; ++i) {
        if (!std::getline(is, field, ',')) {
            throw std::runtime_error("axis must be three comma-separated numbers, got '" + text + "'");
        }
        parts[i] = std::stod(field);
    }
    return {parts[0], parts[1], parts[2]};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-device-independent analysis of prepare-and-measure QKD"};
    app.require_subcommand(1);

    std::string setup_spec = "bb84";
    std::string table_path;
    std::string witness_path;
    OutputOptions output;
    double pb = -1.0;
    std::uint64_t rounds = 1000000;
    std::uint64_t seed = 0;
    int restarts = 20;
    int grid = 3600;
    int bound_d = 2;
    std::uint64_t budget = sdiqkd::kDefaultStrategyBudget;
    double sacrifice = 0.10;
    std::string attack_axis_text;
    std::string eve_mode = "map";

    auto add_output_flags = [&](CLI::App* cmd) {
        cmd->add_option("--format", output.format, "output format")->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--out", output.out_path, "write output to a file instead of stdout");
    };

    auto* cmd_table = app.add_subcommand("table", "data table of a setup");
    cmd_table->add_option("--setup", setup_spec, "built-in name (bb84|optimal|mixed) or setup JSON path");
    add_output_flags(cmd_table);

    auto* cmd_witness = app.add_subcommand("witness", "witness evaluation, classical bounds, facets");
    cmd_witness->require_subcommand(1);
    auto* cmd_weval = cmd_witness->add_subcommand("eval", "evaluate a witness on a table");
    cmd_weval->add_option("--setup", setup_spec, "setup whose quantum table is evaluated");
    cmd_weval->add_option("--table", table_path, "table file (JSON, or CSV with .csv suffix)");
    cmd_weval->add_option("--witness", witness_path, "witness JSON (default: the QKD witness S)");
    add_output_flags(cmd_weval);
    auto* cmd_wbound = cmd_witness->add_subcommand("bound", "exact classical bound C_d by enumeration");
    cmd_wbound->add_option("--d", bound_d, "classical alphabet size")->check(CLI::PositiveNumber);
    cmd_wbound->add_option("--witness", witness_path, "witness JSON (default: the QKD witness S)");
    cmd_wbound->add_option("--budget", budget, "max number of strategies to enumerate");
    add_output_flags(cmd_wbound);
    auto* cmd_wfacets = cmd_witness->add_subcommand("facets", "facets of the d=2 classical polytope");
    add_output_flags(cmd_wfacets);

    auto* cmd_rac = app.add_subcommand("rac", "random-access-code success probability of a table");
    cmd_rac->add_option("--setup", setup_spec, "setup whose quantum table is scored");
    cmd_rac->add_option("--table", table_path, "table file");
    add_output_flags(cmd_rac);

    auto* cmd_security = app.add_subcommand("security", "security report (threshold, key rate)");
    cmd_security->add_option("--setup", setup_spec, "setup whose quantum table is analyzed");
    cmd_security->add_option("--table", table_path, "table file");
    cmd_security->add_option("--pb", pb, "Bob's success probability, bypassing any table");
    add_output_flags(cmd_security);

    auto* cmd_sim = app.add_subcommand("simulate", "seeded Monte Carlo protocol run");
    cmd_sim->add_option("--setup", setup_spec, "setup (file may carry an \"attack\" object)");
    cmd_sim->add_option("--rounds", rounds, "number of protocol rounds");
    cmd_sim->add_option("--seed", seed, "master seed");
    cmd_sim->add_option("--attack-axis", attack_axis_text, "intercept-resend axis x,y,z");
    cmd_sim->add_option("--sacrifice", sacrifice, "revealed fraction for error estimation");
    add_output_flags(cmd_sim);

    auto* cmd_scan = app.add_subcommand("scan-eve", "sweep intercept-resend axes on the x-z circle");
    cmd_scan->add_option("--setup", setup_spec, "setup to attack");
    cmd_scan->add_option("--grid", grid, "number of grid points")->check(CLI::PositiveNumber);
    cmd_scan->add_option("--eve-mode", eve_mode, "eavesdropper guess rule")->check(CLI::IsMember({"map", "fixed"}));
    add_output_flags(cmd_scan);

    auto* cmd_opt = app.add_subcommand("optimize", "see-saw search for the best qubit value");
    cmd_opt->add_option("--witness", witness_path, "witness JSON (default: the QKD witness S)");
    cmd_opt->add_option("--restarts", restarts, "random restarts")->check(CLI::PositiveNumber);
    cmd_opt->add_option("--seed", seed, "master seed");
    add_output_flags(cmd_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << std::endl;
        return 2;
    }

    try {
        const auto witness = witness_path.empty() ? sdiqkd::witness_S()
                                                  : sdiqkd::witness_from_json(load_json_file(witness_path));
        const auto resolve_table = [&]() -> sdiqkd::DataTable {
            if (!table_path.empty()) return load_table(table_path);
            return sdiqkd::quantum_table(load_setup(setup_spec));
        };

        if (cmd_table->parsed()) {
            const sdiqkd::DataTable t = sdiqkd::quantum_table(load_setup(setup_spec));
            emit(output, sdiqkd::to_json(t),
                 std::string(sdiqkd::kTableCsvHeader) + "\n" + sdiqkd::to_csv_row(t) + "\n");
        } else if (cmd_weval->parsed()) {
            const sdiqkd::DataTable t = resolve_table();
            const double value = sdiqkd::eval_witness(witness, t);
            emit(output, json{{"value", value}, {"witness", sdiqkd::to_json(witness)}},
                 key_value_csv({{"value", format_g12(value)}}));
        } else if (cmd_wbound->parsed()) {
            const auto result = sdiqkd::classical_bound(witness, bound_d, budget);
            json jmax{{"d", result.maximizer.d},
                      {"encode", result.maximizer.encode},
                      {"decode", result.maximizer.decode}};
            emit(output,
                 json{{"d", bound_d},
                      {"bound", sdiqkd::to_fraction_string(result.bound)},
                      {"maximizer", jmax}},
                 key_value_csv({{"d", std::to_string(bound_d)},
                                {"bound", sdiqkd::to_fraction_string(result.bound)}}));
        } else if (cmd_wfacets->parsed()) {
            const auto fe = sdiqkd::enumerate_facets();
            json body = sdiqkd::to_json(fe);
            const auto orbits = sdiqkd::facet_symmetry_orbits(fe);
            body["symmetry_orbit_count"] = orbits.size();
            json boxes = json::array();
            std::size_t nontrivial_orbits = orbits.size();
            for (const auto& b : sdiqkd::box_inequality_status(fe)) {
                boxes.push_back({{"inequality", b.name}, {"is_facet", b.is_facet}});
            }
            // orbits consisting solely of box facets are counted separately
            std::size_t box_orbits = 0;
            for (const auto& orbit : orbits) {
                bool all_box = true;
                for (int fi : orbit) {
                    int nonzero = 0;
                    for (int a = 0; a < 4; ++a)
                        for (int y = 0; y < 2; ++y)
                            if (fe.facets[static_cast<std::size_t>(fi)].w(a, y) != 0) ++nonzero;
                    if (nonzero > 1) all_box = false;
                }
                if (all_box) ++box_orbits;
            }
            nontrivial_orbits -= box_orbits;
            body["nontrivial_orbit_count"] = nontrivial_orbits;
            body["box_inequalities"] = boxes;
            body["contains_qkd_witness"] =
                sdiqkd::facet_class_contains(fe, sdiqkd::witness_S(), sdiqkd::Rational(2));
            std::ostringstream csv;
            csv << "w00_0,w00_1,w01_0,w01_1,w10_0,w10_1,w11_0,w11_1,offset\n";
            for (const auto& f : fe.facets) {
                for (int k = 0; k < 8; ++k) csv << f.w(k / 2, k % 2) << ',';
                csv << sdiqkd::to_fraction_string(f.offset) << '\n';
            }
            emit(output, body, csv.str());
        } else if (cmd_rac->parsed()) {
            const sdiqkd::DataTable t = resolve_table();
            const double s = sdiqkd::eval_witness(sdiqkd::witness_S(), t);
            const double p = sdiqkd::rac_success(t);
            emit(output, json{{"S", s}, {"p_bob", p}},
                 key_value_csv({{"S", format_g12(s)}, {"p_bob", format_g12(p)}}));
        } else if (cmd_security->parsed()) {
            const sdiqkd::SecurityReport report =
                cmd_security->count("--pb") ? sdiqkd::security_report_from_pb(pb)
                                            : sdiqkd::security_report(resolve_table());
            emit(output, sdiqkd::to_json(report),
                 key_value_csv({{"p_bob", format_g12(report.p_bob)},
                                {"p_eve_bound", format_g12(report.p_eve_bound)},
                                {"i_ab", format_g12(report.i_ab)},
                                {"i_ae", format_g12(report.i_ae)},
                                {"key_rate", format_g12(report.key_rate)},
                                {"secure", report.secure ? "true" : "false"}}));
        } else if (cmd_sim->parsed()) {
            const sdiqkd::QuantumSetup setup = load_setup(setup_spec);
            sdiqkd::AttackModel attack = sdiqkd::no_attack();
            if (!attack_axis_text.empty()) {
                attack = sdiqkd::intercept_resend_attack(setup, parse_axis(attack_axis_text));
            } else if (setup_spec != "bb84" && setup_spec != "optimal" && setup_spec != "mixed") {
                const json j = load_json_file(setup_spec);
                if (j.contains("attack")) attack = sdiqkd::attack_from_json(setup, j.at("attack"));
            }
            const auto result = sdiqkd::run_protocol(setup, rounds, seed, attack, sacrifice);
            json body = sdiqkd::to_json(result);
            body["seed"] = seed;
            body["attack"] = sdiqkd::to_json(attack);
            emit(output, body, sdiqkd::simulation_csv(result));
        } else if (cmd_scan->parsed()) {
            const sdiqkd::QuantumSetup setup = load_setup(setup_spec);
            const auto mode = eve_mode == "map" ? sdiqkd::EveGuessMode::map_per_y
                                                : sdiqkd::EveGuessMode::fixed_bit;
            const auto scan = sdiqkd::scan_eve_attacks(setup, grid, mode);
            json points = json::array();
            for (const auto& p : scan.points) {
                points.push_back({{"axis", sdiqkd::to_json(p.axis)}, {"p_bob", p.p_bob}, {"p_eve", p.p_eve}});
            }
            emit(output,
                 json{{"grid", grid},
                      {"eve_mode", eve_mode},
                      {"max_sum", scan.max_sum},
                      {"argmax", scan.argmax},
                      {"tradeoff_bound", sdiqkd::bob_eve_tradeoff_bound()},
                      {"points", points}},
                 [&] {
                     std::ostringstream csv;
                     csv << "axis_x,axis_y,axis_z,p_bob,p_eve\n";
                     csv.precision(12);
                     for (const auto& p : scan.points) {
                         csv << p.axis.x << ',' << p.axis.y << ',' << p.axis.z << ','
                             << p.p_bob << ',' << p.p_eve << '\n';
                     }
                     return csv.str();
                 }());
        } else if (cmd_opt->parsed()) {
            sdiqkd::SeesawOptions opt;
            opt.restarts = restarts;
            opt.seed = seed;
            const auto result = sdiqkd::quantum_value_seesaw(witness, opt);
            emit(output,
                 json{{"value", result.value},
                      {"setup", sdiqkd::to_json(result.setup)},
                      {"best_restart", result.best_restart},
                      {"iterations", result.iterations}},
                 key_value_csv({{"value", format_g12(result.value)}}));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
