#include "nlocal/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nlocal/bounds.hpp"
#include "nlocal/config.hpp"
#include "nlocal/detect.hpp"
#include "nlocal/lhv.hpp"
#include "nlocal/states.hpp"

namespace nlocal {

namespace {

using nlohmann::json;

std::uint64_t seed_of(const json& cfg) { return field_or<std::uint64_t>(cfg, "seed", "", 1); }
int threads_of(const json& cfg) { return field_or<int>(cfg, "threads", "", 1); }

const json& section(const json& cfg, const std::string& key) {
    static const json empty = json::object();
    if (!cfg.contains(key)) return empty;
    if (!cfg.at(key).is_object()) throw ConfigError(key, "expected an object");
    return cfg.at(key);
}

OptimizeConfig optimizer_of(const json& cfg) {
    return parse_optimizer(cfg.contains("optimizer") ? cfg.at("optimizer") : json(), "optimizer", seed_of(cfg),
                           threads_of(cfg));
}

std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

Family default_family(const AnyNetwork& net) {
    if (std::holds_alternative<LinearNetwork>(net)) return Family::Linear;
    return std::get<NonlinearNetwork>(net).n() == 3 ? Family::Trilocal : Family::Nlocal;
}

Family family_of(const json& cfg, const AnyNetwork& net) {
    if (!cfg.contains("family")) return default_family(net);
    try {
        return parse_family(required<std::string>(cfg, "family", ""));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("family", e.what());
    }
}

std::string settings_table(const ExtremeSettings& s) {
    std::ostringstream os;
    for (std::size_t p = 0; p < s.size(); ++p)
        for (int k = 0; k < 2; ++k)
            os << "  party " << p + 1 << " input " << k << ": theta " << fixed(s[p][k].theta) << "  phi "
               << fixed(s[p][k].phi) << "\n";
    return os.str();
}

ExtremeSettings parse_settings(const json& j, int extremes, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != extremes)
        throw ConfigError(path, "expected " + std::to_string(extremes) + " parties of two directions");
    ExtremeSettings s(extremes);
    for (int p = 0; p < extremes; ++p) {
        if (!j[p].is_array() || j[p].size() != 2) throw ConfigError(path, "each party needs two directions");
        for (int k = 0; k < 2; ++k) {
            const std::string here = path + "[" + std::to_string(p) + "][" + std::to_string(k) + "]";
            s[p][k] = {required<double>(j[p][k], "theta", here), required<double>(j[p][k], "phi", here)};
        }
    }
    return s;
}

std::vector<std::vector<double>> axes_of(const json& scan) {
    if (!scan.contains("axes") || !scan.at("axes").is_array() || scan.at("axes").empty())
        throw ConfigError("scan.axes", "expected a non-empty array");
    std::vector<std::vector<double>> axes;
    for (std::size_t i = 0; i < scan.at("axes").size(); ++i) {
        const auto& a = scan.at("axes")[i];
        const std::string path = "scan.axes[" + std::to_string(i) + "]";
        if (a.is_array()) {
            axes.push_back(a.get<std::vector<double>>());
        } else {
            try {
                axes.push_back(arange(required<double>(a, "start", path), required<double>(a, "stop", path),
                                      required<double>(a, "step", path)));
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                throw ConfigError(path, e.what());
            }
        }
        if (axes.back().empty()) throw ConfigError(path, "empty axis");
    }
    return axes;
}

}  // namespace

CommandOutput cmd_bound(const json& cfg) {
    const auto& b = section(cfg, "bound");
    const auto family = required<std::string>(b, "family", "bound");
    BoundResult r;
    try {
        if (family == "linear-pure") {
            r = bound_linear_pure_result(required<std::vector<double>>(b, "gammas", "bound"));
        } else if (family == "linear-mixed") {
            std::vector<std::array<double, 3>> lambdas;
            if (b.contains("lambdas")) {
                lambdas = required<std::vector<std::array<double, 3>>>(b, "lambdas", "bound");
            } else {
                const auto states = required<json>(b, "states", "bound");
                if (!states.is_array()) throw ConfigError("bound.states", "expected an array");
                for (std::size_t i = 0; i < states.size(); ++i) {
                    const auto path = "bound.states[" + std::to_string(i) + "]";
                    lambdas.push_back(correlation_tensor(parse_state(states[i], path).as_density()).lambdas);
                }
            }
            r = bound_linear_mixed_result(lambdas);
        } else if (family == "horodecki") {
            r = chsh_horodecki_result(parse_state(required<json>(b, "state", "bound"), "bound.state").as_density());
        } else if (family == "bisep231") {
            r = bound_bisep_231_result(required<double>(b, "c0", "bound"));
        } else {
            throw ConfigError("bound.family", "expected linear-pure, linear-mixed, horodecki or bisep231");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ConfigError("bound", e.what());
    }
    CommandOutput out;
    out.record = {{"config", cfg}, {"value", r.value}, {"formula", r.formula}, {"inputs", r.inputs}};
    out.table = family + "  " + r.formula + "\nvalue  " + fixed(r.value) + "\n";
    return out;
}

CommandOutput cmd_optimize(const json& cfg) {
    const auto net = parse_network(section(cfg, "network"), "network");
    const auto family = family_of(cfg, net);
    const auto opt = optimizer_of(cfg);
    const auto result = std::visit([&](const auto& n) { return maximize(n, family, opt); }, net);

    CommandOutput out;
    out.record = {{"config", cfg}, {"optimum", to_json(result)}};
    std::ostringstream t;
    t << "family     " << to_string(family) << "\n"
      << "max LHS    " << fixed(result.best_value) << "\n"
      << "violated   " << (result.report.violated ? "yes" : "no") << "\n"
      << "argmax     " << result.report.lhs_label(result.report.argmax) << "\n"
      << "restarts   " << result.trace.size() << "\n"
      << "settings\n"
      << settings_table(result.best_settings);
    out.table = t.str();
    return out;
}

CommandOutput cmd_distribution(const json& cfg) {
    const auto net = parse_network(section(cfg, "network"), "network");
    const auto family = family_of(cfg, net);
    const int extremes = std::visit([](const auto& n) { return layout_of(n).shape.extremes; }, net);
    const auto& d = section(cfg, "distribution");
    const auto settings = d.contains("settings") ? parse_settings(d.at("settings"), extremes, "distribution.settings")
                                                 : zx_settings(extremes);
    const auto dist = std::visit([&](const auto& n) { return joint_distribution(n, settings); }, net);
    const auto report = evaluate(dist, family);
    const auto ns = check_no_signaling(dist);
    const double norm = dist.normalization_defect();

    CommandOutput out;
    std::ostringstream csv;
    write_csv(csv, dist, field_or<bool>(d, "skip_zero", "distribution", false));
    out.files.emplace_back("distribution.csv", csv.str());
    out.record = {{"config", cfg},
                  {"report", to_json(report)},
                  {"normalization_defect", norm},
                  {"no_signaling_deviation", ns.max_deviation}};
    std::ostringstream t;
    t << "cells            " << dist.data().size() << "\n"
      << "normalization    " << norm << "\n"
      << "no-signaling     " << ns.max_deviation << (ns.ok ? "" : "  FAILED") << "\n"
      << "max LHS          " << fixed(report.max_lhs) << "\n"
      << "settings\n"
      << settings_table(settings);
    out.table = t.str();
    if (!ns.ok || norm > kTolerance) out.status = kExitConsistency;
    return out;
}

CommandOutput cmd_detect(const json& cfg) {
    const auto& d = section(cfg, "detect");
    const auto protocol = field_or<std::string>(d, "protocol", "detect", "tripartite");
    const auto states = required<json>(d, "states", "detect");
    if (!states.is_array()) throw ConfigError("detect.states", "expected an array");
    const auto opt = optimizer_of(cfg);
    CommandOutput out;
    std::ostringstream t;

    if (protocol == "tripartite") {
        if (states.size() != 3) throw ConfigError("detect.states", "tripartite detection takes three states");
        std::array<ComplexVector, 3> kets;
        for (int i = 0; i < 3; ++i) kets[i] = parse_pure_state(states[i], "detect.states[" + std::to_string(i) + "]");
        TripartiteOptions topts;
        topts.routing_search = field_or<bool>(d, "routing_search", "detect", true);
        const auto v = run_tripartite(kets, opt, topts);
        out.record = {{"config", cfg}, {"verdict", to_json(v)}};
        t << "phase  max LHS   violated\n";
        for (const auto& r : v.phases)
            t << r.phase.id() << "   " << fixed(r.max_lhs, 4) << "    " << (r.violated ? "yes" : "no") << "\n";
        t << "count       " << v.count << "  (row " << v.table_row << ")\n"
          << "conclusion  " << v.conclusion << "\n";
        for (int i = 0; i < 3; ++i) t << "state " << i + 1 << "     " << v.states[i].describe() << "\n";
        if (!v.diagnostic.empty()) t << "diagnostic  " << v.diagnostic << "\n";
        std::ostringstream csv;
        csv << "phase,max_lhs,violated\n";
        for (const auto& r : v.phases) csv << r.phase.id() << ',' << r.max_lhs << ',' << (r.violated ? 1 : 0) << "\n";
        out.files.emplace_back("phases.csv", csv.str());
    } else if (protocol == "bipartite") {
        std::vector<SourceState> sources;
        for (std::size_t i = 0; i < states.size(); ++i)
            sources.push_back(parse_state(states[i], "detect.states[" + std::to_string(i) + "]"));
        const auto v = run_bipartite(sources, opt, field_or<bool>(d, "identical", "detect", false));
        out.record = {{"config", cfg}, {"verdict", to_json(v)}};
        t << "max LHS     " << fixed(v.value) << "\n"
          << "conclusion  " << v.conclusion << "\n";
        if (!v.caveat.empty()) t << "caveat      " << v.caveat << "\n";
    } else {
        throw ConfigError("detect.protocol", "expected 'tripartite' or 'bipartite'");
    }
    out.table = t.str();
    return out;
}

CommandOutput cmd_certify(const json& cfg) {
    const auto& c = section(cfg, "certify");
    const auto topology = field_or<std::string>(c, "topology", "certify", "nonlinear");
    if (topology != "linear" && topology != "nonlinear")
        throw ConfigError("certify.topology", "expected 'linear' or 'nonlinear'");
    const int n = field_or<int>(c, "n", "certify", topology == "linear" ? 2 : 3);
    const int trials = field_or<int>(c, "trials", "certify", 1000);
    const int alphabet = field_or<int>(c, "alphabet", "certify", 4);
    CertifyReport r;
    try {
        r = certify(topology == "linear" ? Topology::Linear : Topology::Nonlinear, n, trials, seed_of(cfg), alphabet);
    } catch (const InvalidArgument& e) {
        throw ConfigError("certify", e.what());
    }
    CommandOutput out;
    out.record = {{"config", cfg}, {"report", to_json(r)}};
    std::ostringstream t;
    t << "trials        " << r.trials << " (" << r.mixtures << " mixtures)\n"
      << "max LHS       " << fixed(r.max_lhs, 9) << "\n"
      << "failures      " << r.failures.size() << "\n"
      << "no-signaling  " << r.max_no_signaling_deviation << "\n";
    out.table = t.str();
    if (!r.failures.empty()) out.status = kExitConsistency;
    return out;
}

CommandOutput cmd_scan(const json& cfg) {
    const auto& s = section(cfg, "scan");
    const auto state = required<std::string>(s, "state", "scan");
    const auto axes = axes_of(s);
    const auto grid = lattice(axes);
    const auto arrangement = field_or<std::vector<int>>(s, "arrangement", "scan", {1, 1, 1});
    const int n = field_or<int>(s, "n", "scan", 2);

    NetworkBuilder builder;
    Family family = Family::Trilocal;
    std::vector<std::string> names;
    auto param = [](std::span<const double> p, std::size_t i) { return p[std::min(i, p.size() - 1)]; };
    if (state == "gghz") {
        names = {"beta"};
        builder = [=](std::span<const double> p) -> AnyNetwork {
            return build_nonlinear({gghz(param(p, 0)), gghz(param(p, 1)), gghz(param(p, 2))}, arrangement);
        };
    } else if (state == "bisep") {
        names = {"c0"};
        const Cut cut = parse_cut(field_or<std::string>(s, "cut", "scan", "12|3"));
        const double v0 = field_or<double>(s, "v0", "scan", 1.0);
        builder = [=](std::span<const double> p) -> AnyNetwork {
            const auto k = biseparable({cut, p[0], v0});
            return build_nonlinear({k, k, k}, arrangement);
        };
    } else if (state == "schmidt" || state == "werner") {
        family = Family::Linear;
        names = {state == "schmidt" ? "gamma0" : "v"};
        const bool pure = state == "schmidt";
        builder = [=](std::span<const double> p) -> AnyNetwork {
            std::vector<SourceState> sources;
            for (int i = 0; i < n; ++i) {
                const double v = param(p, static_cast<std::size_t>(i));
                sources.push_back(pure ? SourceState(pure_schmidt(v)) : SourceState(werner(v)));
            }
            return build_linear(std::move(sources));
        };
    } else {
        throw ConfigError("scan.state", "expected gghz, bisep, schmidt or werner");
    }
    while (names.size() < axes.size()) names.push_back("p" + std::to_string(names.size() + 1));

    std::vector<GridPoint> points;
    try {
        points = grid_scan(builder, grid, family, optimizer_of(cfg));
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ConfigError("scan", e.what());
    }

    CommandOutput out;
    std::ostringstream csv, t;
    for (std::size_t i = 0; i < axes.size(); ++i) csv << names[i] << ',';
    csv << "max_lhs,violated\n";
    json rows = json::array();
    for (const auto& pt : points) {
        for (double v : pt.params) {
            csv << v << ',';
            t << fixed(v, 4) << "  ";
        }
        csv << std::setprecision(10) << pt.result.best_value << ',' << (pt.result.report.violated ? 1 : 0) << "\n";
        t << fixed(pt.result.best_value) << (pt.result.report.violated ? "  violated" : "") << "\n";
        rows.push_back({{"params", pt.params}, {"max_lhs", pt.result.best_value}, {"violated", pt.result.report.violated}});
    }
    out.files.emplace_back("scan.csv", csv.str());
    out.record = {{"config", cfg}, {"points", rows}};
    out.table = t.str();
    return out;
}

CommandOutput run_command(const json& cfg) {
    const auto command = required<std::string>(cfg, "command", "");
    if (command == "bound") return cmd_bound(cfg);
    if (command == "optimize") return cmd_optimize(cfg);
    if (command == "detect") return cmd_detect(cfg);
    if (command == "certify") return cmd_certify(cfg);
    if (command == "distribution") return cmd_distribution(cfg);
    if (command == "scan") return cmd_scan(cfg);
    throw ConfigError("command", "unknown command '" + command + "'");
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"n-local network nonlocality laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool as_json = false;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out", out_dir, "directory for the record and CSV files");
    app.add_option("--threads", threads, "worker threads");
    app.add_flag("--json", as_json, "print the JSON record instead of the table");

    json overrides = json::object();

    auto* bound = app.add_subcommand("bound", "closed-form bounds");
    std::string bound_family, bound_state;
    std::vector<double> gammas;
    std::optional<double> c0;
    std::vector<std::string> bound_states;
    bound->add_option("--family", bound_family, "linear-pure | linear-mixed | horodecki | bisep231");
    bound->add_option("--gammas", gammas, "Schmidt coefficients")->delimiter(',');
    bound->add_option("--state", bound_state, "state descriptor (horodecki)");
    bound->add_option("--states", bound_states, "state descriptors (linear-mixed)");
    bound->add_option("--c0", c0, "pair Schmidt coefficient (bisep231)");

    auto* optimize = app.add_subcommand("optimize", "maximize an inequality family");
    auto* distribution = app.add_subcommand("distribution", "outcome table as CSV");
    std::string topology, family;
    std::vector<std::string> sources;
    std::vector<int> arrangement;
    std::optional<int> restarts, max_iters;
    for (auto* sub : {optimize, distribution}) {
        sub->add_option("--topology", topology, "linear | nonlinear");
        sub->add_option("--source", sources, "state descriptor, once per source");
        sub->add_option("--arrangement", arrangement, "extreme qubit per source (1-based)")->delimiter(',');
        sub->add_option("--family", family, "linear | trilocal | nlocal");
        sub->add_option("--restarts", restarts, "optimizer restarts");
        sub->add_option("--max-iters", max_iters, "iterations per restart");
    }

    auto* detect = app.add_subcommand("detect", "entanglement detection protocols");
    std::string protocol;
    std::vector<std::string> detect_states;
    bool identical = false, fixed_routing = false;
    detect->add_option("--protocol", protocol, "tripartite | bipartite");
    detect->add_option("--state", detect_states, "state descriptor, once per source");
    detect->add_flag("--identical", identical, "declare all bipartite sources identical");
    detect->add_flag("--fixed-routing", fixed_routing, "ascending intermediate routing only");
    detect->add_option("--restarts", restarts, "optimizer restarts");
    detect->add_option("--max-iters", max_iters, "iterations per restart");

    auto* certify_cmd = app.add_subcommand("certify", "sample classical models and check the inequalities");
    std::string certify_topology;
    std::optional<int> certify_n, trials, alphabet;
    certify_cmd->add_option("--topology", certify_topology, "linear | nonlinear");
    certify_cmd->add_option("--n", certify_n, "number of sources");
    certify_cmd->add_option("--trials", trials, "models to sample");
    certify_cmd->add_option("--alphabet", alphabet, "hidden alphabet per source");

    auto* scan = app.add_subcommand("scan", "maximize over a parameter lattice (config file driven)");
    scan->add_option("--restarts", restarts, "optimizer restarts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kExitConfig;
    }

    try {
        json cfg = config_path.empty() ? json::object() : load_document(config_path);
        if (!cfg.is_object()) throw ConfigError(config_path, "top level must be an object");
        const auto* sub = app.get_subcommands().front();
        cfg["command"] = sub->get_name();
        if (seed) cfg["seed"] = *seed;
        if (threads) cfg["threads"] = *threads;
        if (!out_dir.empty()) cfg["out"] = out_dir;
        if (restarts) cfg["optimizer"]["restarts"] = *restarts;
        if (max_iters) cfg["optimizer"]["max_iters"] = *max_iters;

        if (sub == bound) {
            if (!bound_family.empty()) cfg["bound"]["family"] = bound_family;
            if (!gammas.empty()) cfg["bound"]["gammas"] = gammas;
            if (!bound_state.empty()) cfg["bound"]["state"] = bound_state;
            if (!bound_states.empty()) cfg["bound"]["states"] = bound_states;
            if (c0) cfg["bound"]["c0"] = *c0;
        } else if (sub == optimize || sub == distribution) {
            if (!topology.empty()) cfg["network"]["topology"] = topology;
            if (!sources.empty()) cfg["network"]["sources"] = sources;
            if (!arrangement.empty()) cfg["network"]["arrangement"] = arrangement;
            if (!family.empty()) cfg["family"] = family;
        } else if (sub == detect) {
            if (!protocol.empty()) cfg["detect"]["protocol"] = protocol;
            if (!detect_states.empty()) cfg["detect"]["states"] = detect_states;
            if (identical) cfg["detect"]["identical"] = true;
            if (fixed_routing) cfg["detect"]["routing_search"] = false;
        } else if (sub == certify_cmd) {
            if (!certify_topology.empty()) cfg["certify"]["topology"] = certify_topology;
            if (certify_n) cfg["certify"]["n"] = *certify_n;
            if (trials) cfg["certify"]["trials"] = *trials;
            if (alphabet) cfg["certify"]["alphabet"] = *alphabet;
        }

        const auto result = run_command(cfg);
        if (as_json) out << result.record.dump(2) << "\n";
        else out << result.table;

        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            std::ofstream(std::filesystem::path(out_dir) / (cfg["command"].get<std::string>() + ".json"))
                << result.record.dump(2) << "\n";
            for (const auto& [name, contents] : result.files)
                std::ofstream(std::filesystem::path(out_dir) / name) << contents;
        }
        return result.status;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CapacityError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConsistencyError& e) {
        err << "consistency failure: " << e.what() << "\n";
        return kExitConsistency;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace nlocal
