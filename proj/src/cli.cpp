// SPDX-License-Identifier: Apache-2.0

#include "sagin/cli.hpp"

#include "sagin/ao.hpp"
#include "sagin/errors.hpp"
#include "sagin/rng.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace sagin {

namespace {

namespace fs = std::filesystem;

Json allocationReport(const Allocation& alloc, const ChannelMatrix& h, const SystemConfig& config,
                      const QosSpec& qos, const std::vector<int>& user_ids)
{
    const ConstraintReport report = checkConstraints(alloc, h, config, qos);
    Json links = Json::array();
    for (std::size_t n = 0; n < alloc.assignment.cols(); ++n) {
        for (std::size_t k = 0; k < alloc.assignment.rows(); ++k) {
            if (alloc.assignment(k, n) != 0) {
                links.push_back({{"user", user_ids[k]},
                                 {"subcarrier", n},
                                 {"power_w", alloc.power(k, n)},
                                 {"rate_mbps", report.rates.rate(k, n) / 1e6}});
            }
        }
    }
    Json per_user = Json::array();
    for (double r : report.rates.per_user) {
        per_user.push_back(r / 1e6);
    }
    return {{"sum_rate_mbps", report.rates.sum_rate / 1e6},
            {"per_user_mbps", std::move(per_user)},
            {"links", std::move(links)},
            {"constraints", constraintsToJson(report)}};
}

Json traceMbps(const ConvergenceTrace& trace)
{
    Json out = Json::array();
    for (double r : trace.sum_rate_bps) {
        out.push_back(r / 1e6);
    }
    return out;
}

std::vector<int> iota(std::size_t n)
{
    std::vector<int> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids[i] = static_cast<int>(i);
    }
    return ids;
}

void writeFile(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
}

void makeDirectory(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
    }
}

std::string mbps(double bps)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << bps / 1e6;
    return s.str();
}

Json paramsToJson(const RunConfig& cfg)
{
    const SystemConfig& sys = cfg.system;
    Json p = {{"n_subcarriers", sys.n_subcarriers},
              {"n_users", sys.n_users},
              {"bandwidth_hz", sys.bandwidth_hz},
              {"noise_power_w", sys.noise_power_w},
              {"power_budget_w", sys.power_budget_w},
              {"max_iterations", sys.max_iterations},
              {"channel", channelModelName(cfg.channel.kind)}};
    switch (cfg.algo) {
    case Algorithm::Ao:
        p["r_min_mbps"] = cfg.ao_r_min_mbps;
        break;
    case Algorithm::Diwf:
        p["r_min_mbps"] = cfg.diwf_r_min_mbps;
        p["damping"] = cfg.diwf_damping;
        p["tolerance"] = cfg.diwf_tolerance;
        break;
    case Algorithm::Ga:
        p["population_size"] = cfg.ga.population_size;
        p["n_generations"] = cfg.ga.n_generations;
        p["mutation_rate"] = cfg.ga.mutation_rate;
        p["penalty_power"] = cfg.ga.penalty_power;
        p["penalty_qos"] = cfg.ga.penalty_qos;
        p["swap_mutation"] = cfg.ga.swap_mutation;
        p["r_min_mbps"] = cfg.ga_r_min_mbps;
        break;
    }
    return p;
}

struct CommonFlags
{
    std::string config_path;
    std::optional<std::string> algo;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<unsigned> workers;
    std::optional<std::string> out_dir;
    std::optional<int> uavs;
    std::string trace_path;
    std::string preset;
    std::string summary_path;
};

RunConfig resolveConfig(const CommonFlags& f)
{
    RunConfig cfg = f.config_path.empty() ? RunConfig{} : loadRunConfig(f.config_path);
    if (f.algo) {
        cfg.algo = parseAlgorithm(*f.algo);
    }
    if (f.seed) {
        cfg.seed = *f.seed;
    }
    if (f.workers) {
        cfg.workers = *f.workers;
    }
    if (f.out_dir) {
        cfg.out_dir = *f.out_dir;
    }
    if (f.uavs) {
        cfg.scenario.uavs = *f.uavs;
    }
    cfg.validate();
    return cfg;
}

int cmdSolve(const CommonFlags& f, std::ostream& out)
{
    const RunConfig cfg = resolveConfig(f);
    const Json report = solveReport(cfg);
    out << report.dump(2) << '\n';
    if (!f.trace_path.empty()) {
        std::ostringstream csv;
        csv << "iteration,sum_rate_bps\n";
        const auto& trace = report.contains("trace_bps") ? report["trace_bps"] : Json::array();
        for (std::size_t i = 0; i < trace.size(); ++i) {
            csv << i + 1 << ',' << formatDouble(trace[i].get<double>()) << '\n';
        }
        writeFile(f.trace_path, csv.str());
    }
    return kExitOk;
}

int cmdMontecarlo(const CommonFlags& f, std::ostream& out)
{
    const RunConfig cfg = resolveConfig(f);
    const std::size_t trials = f.trials.value_or(static_cast<std::size_t>(cfg.system.mc_runs));
    const fs::path dir = cfg.out_dir;
    makeDirectory(dir);

    const Campaign campaign = runCampaign(cfg.campaignSpec(), trials, cfg.seed, cfg.workers);
    Json doc;
    doc["algo"] = algorithmName(cfg.algo);
    doc["master_seed"] = cfg.seed;
    doc["params"] = paramsToJson(cfg);
    doc.update(summaryToJson(campaign.summary));
    writeFile(dir / "summary.json", doc.dump(2) + "\n");

    std::ostringstream csv;
    writeTraceCsv(csv, campaign.trials);
    writeFile(dir / "traces.csv", csv.str());

    const McSummary& s = campaign.summary;
    out << algorithmName(cfg.algo) << ": " << s.n_trials << " trials, " << s.n_infeasible << " infeasible, "
        << s.n_not_converged << " not converged\n";
    out << "final sum rate: mean " << mbps(s.final_mean_bps) << " Mbps, max " << mbps(s.final_max_bps)
        << " Mbps, min " << mbps(s.final_min_bps) << " Mbps\n";
    out << "wrote " << (dir / "summary.json").string() << " and " << (dir / "traces.csv").string() << '\n';
    return kExitOk;
}

int cmdScenario(const CommonFlags& f, std::ostream& out)
{
    const RunConfig cfg = resolveConfig(f);
    const ScenarioOutcome outcome = runScenario(f.preset, cfg.scenario, cfg.seed);
    Json report;
    report["preset"] = outcome.preset;
    report["policy"] = associationPolicyName(outcome.world.policy);
    report["seed"] = cfg.seed;
    report["coverage"] = coverageToJson(outcome.report);
    if (outcome.schedule) {
        report["schedule"] = scheduleToJson(*outcome.schedule);
    }
    out << report.dump(2) << '\n';
    if (f.out_dir) {
        const fs::path dir = *f.out_dir;
        makeDirectory(dir);
        report["world"] = worldToJson(outcome.world);
        writeFile(dir / (outcome.preset + ".json"), report.dump(2) + "\n");
    }
    return kExitOk;
}

int cmdPlotData(const CommonFlags& f, std::ostream& out)
{
    std::ifstream in(f.summary_path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read summary file '" + f.summary_path + "'");
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(f.summary_path + ": malformed summary: " + e.what());
    }
    out << plotData(doc);
    return kExitOk;
}

} // namespace

Json solveReport(const RunConfig& cfg)
{
    const SystemConfig& sys = cfg.system;
    const std::uint64_t seed = trialSeed(cfg.seed, 0);
    const ChannelMatrix h = sampleChannel(deriveSeed(seed, 0), sys, cfg.channel);
    const std::uint64_t solver_seed = deriveSeed(seed, 1);
    const auto k_users = static_cast<std::size_t>(sys.n_users);

    Json doc;
    doc["algo"] = algorithmName(cfg.algo);
    doc["seed"] = cfg.seed;
    doc["users"] = sys.n_users;
    doc["subcarriers"] = sys.n_subcarriers;

    ConvergenceTrace trace;
    switch (cfg.algo) {
    case Algorithm::Ao: {
        const QosSpec qos =
            cfg.ao_r_min_mbps > 0.0 ? QosSpec::uniform(k_users, cfg.ao_r_min_mbps * 1e6) : QosSpec::none();
        if (sys.n_users <= sys.n_subcarriers) {
            const AoResult r = aoSolve(h, sys, solver_seed, qos);
            doc["converged"] = r.converged;
            doc["iterations"] = r.iterations_used;
            doc["qos_adjusted"] = r.qos_adjusted;
            doc.update(allocationReport(r.allocation, h, sys, qos, iota(k_users)));
            trace = r.trace;
            break;
        }
        std::vector<UserClass> classes(k_users, UserClass::Civilian);
        for (int k = 0; k < cfg.ao_responders; ++k) {
            classes[static_cast<std::size_t>(k)] = UserClass::Responder;
        }
        const PrioritySchedule schedule = aoPrioritySchedule(h, classes, sys, solver_seed, 0, qos);
        bool converged = true;
        double total = 0.0;
        Json slots = Json::array();
        for (const auto& slot : schedule.slots) {
            SystemConfig slot_sys = sys;
            slot_sys.n_users = static_cast<int>(slot.users.size());
            const QosSpec slot_qos = qos.active() ? QosSpec::uniform(slot.users.size(), qos.minRate(0)) : qos;
            Json j = {{"slot", slot.slot},
                      {"converged", slot.result.converged},
                      {"iterations", slot.result.iterations_used}};
            j.update(allocationReport(slot.result.allocation, h.selectUsers(slot.users), slot_sys, slot_qos,
                                      slot.users));
            j["trace_mbps"] = traceMbps(slot.result.trace);
            converged = converged && slot.result.converged;
            total += slot.result.rates.sum_rate;
            slots.push_back(std::move(j));
        }
        doc["converged"] = converged;
        doc["mean_slot_sum_rate_mbps"] = schedule.slots.empty() ? 0.0 : total / 1e6 / schedule.slots.size();
        doc["slots"] = std::move(slots);
        return doc;
    }
    case Algorithm::Diwf: {
        const std::vector<int> mapping = diwfPreassign(h);
        const DiwfResult r = diwfSolve(assignedGains(h, mapping), sys, cfg.diwfParams());
        Allocation alloc = Allocation::empty(k_users, h.subcarriers());
        for (std::size_t k = 0; k < k_users; ++k) {
            const auto n = static_cast<std::size_t>(mapping[k]);
            alloc.assignment(k, n) = 1;
            alloc.power(k, n) = r.power[k];
        }
        doc["converged"] = r.converged;
        doc["iterations"] = r.trace.length();
        doc.update(allocationReport(alloc, h, sys, QosSpec::uniform(k_users, cfg.diwf_r_min_mbps * 1e6),
                                    iota(k_users)));
        trace = r.trace;
        break;
    }
    case Algorithm::Ga: {
        const QosSpec qos =
            cfg.ga_r_min_mbps > 0.0 ? QosSpec::uniform(k_users, cfg.ga_r_min_mbps * 1e6) : QosSpec::none();
        const GaResult r = gaSolve(h, sys, qos, cfg.ga, solver_seed);
        doc["converged"] = true;
        doc["generations"] = r.trace.length();
        doc["best_fitness"] = r.best_fitness;
        doc.update(allocationReport(toAllocation(r.best, h.subcarriers()), h, sys, qos, iota(k_users)));
        trace = r.trace;
        break;
    }
    }
    doc["trace_mbps"] = traceMbps(trace);
    doc["trace_bps"] = trace.sum_rate_bps;
    return doc;
}

std::string plotData(const Json& doc)
{
    const McSummary s = summaryFromJson(doc);
    if (s.per_iteration.empty()) {
        throw ConfigError("summary holds no iterations to plot");
    }
    const std::string algo = doc.value("algo", std::string());
    std::ostringstream out;
    out << "# " << (algo == "ga" ? "generation" : "iteration") << " mean_mbps active\n";
    out << std::setprecision(10);
    for (const auto& it : s.per_iteration) {
        out << it.iteration << ' ' << it.mean_bps / 1e6 << ' ' << it.active << '\n';
    }
    return out.str();
}

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"OFDMA allocation solvers, Monte Carlo campaigns and coverage scenarios", "sagin"};
    app.require_subcommand(1);
    CommonFlags f;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config_path, "TOML run configuration");
        sub->add_option("--seed", f.seed, "Master seed");
    };
    auto add_algo = [&](CLI::App* sub) {
        sub->add_option("--algo", f.algo, "Solver")->check(CLI::IsMember({"ao", "diwf", "ga"}));
    };

    CLI::App* solve = app.add_subcommand("solve", "Solve one channel draw and print a JSON report");
    add_common(solve);
    add_algo(solve);
    solve->add_option("--trace", f.trace_path, "Write the convergence trace as CSV");

    CLI::App* mc = app.add_subcommand("montecarlo", "Run a Monte Carlo campaign");
    add_common(mc);
    add_algo(mc);
    mc->add_option("--trials", f.trials, "Number of trials")->check(CLI::PositiveNumber);
    mc->add_option("--workers", f.workers, "Worker threads (0 = one per core)");
    mc->add_option("--out", f.out_dir, "Output directory");

    CLI::App* scenario = app.add_subcommand("scenario", "Run a coverage scenario preset");
    add_common(scenario);
    scenario->add_option("preset", f.preset, "Preset name")->required();
    scenario->add_option("--uavs", f.uavs, "Number of UAVs in the rotation");
    scenario->add_option("--out", f.out_dir, "Also write the full world to this directory");

    CLI::App* plot = app.add_subcommand("plot-data", "Print plotting columns from a campaign summary");
    plot->add_option("summary", f.summary_path, "summary.json written by montecarlo")->required();

    std::vector<const char*> argv{"sagin"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (solve->parsed()) {
            return cmdSolve(f, out);
        }
        if (mc->parsed()) {
            return cmdMontecarlo(f, out);
        }
        if (scenario->parsed()) {
            return cmdScenario(f, out);
        }
        return cmdPlotData(f, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what();
        if (!e.users().empty()) {
            err << " (users";
            for (int u : e.users()) {
                err << ' ' << u;
            }
            err << ')';
        }
        err << '\n';
        return kExitInfeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace sagin
