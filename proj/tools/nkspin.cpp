// nkspin: batch verification runner.
//
//   nkspin run [--config FILE] [--metric M] [--suites a,b] [--mode-window "0,0;1/2,1/2"]
//              [--tolerance key=value ...] [--seed N] [--instances N]
//              [--output PATH] [--format json|text] [--parallel]
//   nkspin explain <id>
//
// Exit status: 0 when every assertion passes, 1 when some assertion fails,
// 2 on usage or configuration errors.

#include "nkspin/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using nkspin::RunConfig;

struct Options {
    std::string config_path, metric, output = "-", format = "json";
    std::vector<std::string> suites, window, tolerances;
    std::optional<std::uint64_t> seed;
    std::optional<int> instances;
    bool parallel = false;
};

std::vector<nkspin::Mode> parse_window(const std::vector<std::string>& tokens) {
    std::vector<nkspin::Mode> w;
    for (const auto& t : tokens) {
        std::stringstream ss(t);
        std::string part;
        while (std::getline(ss, part, ';'))
            if (!part.empty()) w.push_back(nkspin::parse_mode(part));
    }
    return w;
}

void apply_tolerance(RunConfig& cfg, const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("tolerance '" + kv + "' must look like key=value");
    double x;
    try {
        x = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("tolerance '" + kv + "' has no numeric value");
    }
    cfg.tol.set(kv.substr(0, eq), x);
}

std::uint64_t parse_seed(const std::string& s, const std::string& where) {
    try {
        size_t used = 0;
        unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": seed '" + s + "' is not a non-negative integer");
    }
}

// Config file values, then flags on top. NKSPIN_SEED applies when neither gives a seed.
RunConfig build_config(Options& o) {
    RunConfig cfg;
    bool seed_set = false;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw std::invalid_argument("cannot read config file " + o.config_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("config file " + o.config_path + ": " + e.what());
        }
        if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            const auto& v = it.value();
            try {
                if (k == "metric") cfg.metric = v.get<std::string>();
                else if (k == "suites") cfg.suites = v.get<std::vector<std::string>>();
                else if (k == "mode_window") {
                    std::vector<nkspin::Mode> w;
                    for (const auto& m : v) {
                        if (m.is_string()) w.push_back(nkspin::parse_mode(m.get<std::string>()));
                        else if (m.is_array() && m.size() == 2)
                            w.push_back({nkspin::parse_half_integer(m[0].dump()), nkspin::parse_half_integer(m[1].dump())});
                        else throw std::invalid_argument("mode_window entries are \"j1,j2\" or [j1, j2]");
                    }
                    cfg.mode_window = w;
                } else if (k == "tolerances") {
                    for (auto t = v.begin(); t != v.end(); ++t) cfg.tol.set(t.key(), t.value().get<double>());
                } else if (k == "seed") {
                    cfg.seed = v.get<std::uint64_t>();
                    seed_set = true;
                } else if (k == "instances") cfg.instances = v.get<int>();
                else if (k == "parallel") cfg.parallel = v.get<bool>();
                else if (k == "output") {
                    if (o.output == "-") o.output = v.get<std::string>();
                } else if (k == "format") {
                    if (o.format == "json") o.format = v.get<std::string>();
                } else throw std::invalid_argument("unknown key");
            } catch (const nlohmann::json::exception& e) {
                throw std::invalid_argument("config key '" + k + "': " + e.what());
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument("config key '" + k + "': " + e.what());
            }
        }
    }
    if (!o.metric.empty()) cfg.metric = o.metric;
    if (!o.suites.empty()) cfg.suites = o.suites;
    if (!o.window.empty()) cfg.mode_window = parse_window(o.window);
    for (const auto& t : o.tolerances) apply_tolerance(cfg, t);
    if (o.seed) {
        cfg.seed = *o.seed;
        seed_set = true;
    }
    if (!seed_set)
        if (const char* env = std::getenv("NKSPIN_SEED"); env && *env) cfg.seed = parse_seed(env, "NKSPIN_SEED");
    if (o.instances) cfg.instances = *o.instances;
    if (o.parallel) cfg.parallel = true;
    if (o.format != "json" && o.format != "text")
        throw std::invalid_argument("format must be json or text, got '" + o.format + "'");
    cfg.validate();
    return cfg;
}

int do_run(Options& o) {
    RunConfig cfg;
    try {
        cfg = build_config(o);
    } catch (const std::exception& e) {
        std::cerr << "nkspin: " << e.what() << "\n";
        return 2;
    }
    nkspin::RunReport rep = nkspin::run(cfg);
    std::string body = o.format == "json" ? rep.json.dump(2) + "\n" : nkspin::text_report(rep);
    if (o.output == "-") {
        std::cout << body;
    } else {
        std::ofstream out(o.output, std::ios::binary);
        if (!out) {
            std::cerr << "nkspin: cannot write " << o.output << "\n";
            return 2;
        }
        out << body;
        std::cout << nkspin::text_report(rep);
        for (const auto& s : rep.suites) std::cout << "  " << s.name << ": " << s.seconds << " s\n";
    }
    return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification runner for nearly Kahler S3xS3: identities, Rarita-Schwinger fields, "
                 "Killing-spinor deformations"};
    app.require_subcommand(1);

    Options o;
    auto* run = app.add_subcommand("run", "run the selected suites and write a report");
    run->add_option("--config", o.config_path, "JSON config file; flags override its values")->check(CLI::ExistingFile);
    run->add_option("--metric", o.metric, "nearly_kahler, round_product or both (default both)")
        ->check(CLI::IsMember({"nearly_kahler", "round_product", "both"}));
    run->add_option("--suites", o.suites, "comma separated subset of algebra,curvature,prop_suite,weitzenboeck,rarita,deform")
        ->delimiter(',')
        ->check(CLI::IsMember(nkspin::suite_names()));
    run->add_option("--mode-window", o.window, "modes j1,j2 separated by ';', e.g. \"0,0;1/2,1/2\"");
    run->add_option("--tolerance", o.tolerances, "override, key=value (repeatable)");
    run->add_option("--seed", o.seed, "seed for random instances (fallback: NKSPIN_SEED, then 1)");
    run->add_option("--instances", o.instances, "random instances per algebraic identity (default 100)");
    run->add_option("--output", o.output, "report path, '-' for stdout");
    run->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    run->add_flag("--parallel", o.parallel, "run suites concurrently");

    std::string id;
    auto* ex = app.add_subcommand("explain", "print the statement and test construction of an identity id");
    ex->add_option("id", id, "identity id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (ex->parsed()) {
        try {
            std::cout << nkspin::explain(id);
            return 0;
        } catch (const std::out_of_range& e) {
            std::cerr << "nkspin: " << e.what();
            return 2;
        }
    }
    try {
        return do_run(o);
    } catch (const std::exception& e) {
        std::cerr << "nkspin: " << e.what() << "\n";
        return 2;
    }
}
