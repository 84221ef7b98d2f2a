// SPDX-License-Identifier: Apache-2.0

#include "sagin/config.hpp"

#include "sagin/errors.hpp"

#include <toml.hpp>

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace sagin {

namespace {

class TableReader
{
  public:
    TableReader(const toml::table& root, std::string name) : name_(std::move(name))
    {
        const toml::node* node = root.get(name_);
        if (node == nullptr) {
            return;
        }
        table_ = node->as_table();
        if (table_ == nullptr) {
            throw ConfigError("[" + name_ + "] must be a table");
        }
    }

    // Rejects keys that were never read.
    void finish() const
    {
        if (table_ == nullptr) {
            return;
        }
        for (const auto& [key, value] : *table_) {
            if (!seen_.contains(std::string(key.str()))) {
                throw ConfigError("unknown key '" + std::string(key.str()) + "' in [" + name_ + "]");
            }
        }
    }

    void read(std::string_view key, double& out) { number(key, out); }

    void read(std::string_view key, int& out)
    {
        std::int64_t v = out;
        integer(key, v);
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
            throw ConfigError(where(key) + " is out of range");
        }
        out = static_cast<int>(v);
    }

    void read(std::string_view key, unsigned& out)
    {
        std::int64_t v = out;
        integer(key, v);
        if (v < 0 || v > std::numeric_limits<unsigned>::max()) {
            throw ConfigError(where(key) + " is out of range");
        }
        out = static_cast<unsigned>(v);
    }

    // TOML integers are signed 64-bit; seeds above that are not representable.
    void read(std::string_view key, std::uint64_t& out)
    {
        std::int64_t v = static_cast<std::int64_t>(out);
        integer(key, v);
        if (v < 0) {
            throw ConfigError(where(key) + " must be nonnegative");
        }
        out = static_cast<std::uint64_t>(v);
    }

    void read(std::string_view key, bool& out)
    {
        if (const toml::node* n = find(key)) {
            const auto v = n->value_exact<bool>();
            if (!v) {
                throw ConfigError(where(key) + " must be a boolean");
            }
            out = *v;
        }
    }

    void read(std::string_view key, std::string& out)
    {
        if (const toml::node* n = find(key)) {
            const auto v = n->value_exact<std::string>();
            if (!v) {
                throw ConfigError(where(key) + " must be a string");
            }
            out = *v;
        }
    }

  private:
    const toml::node* find(std::string_view key)
    {
        seen_.insert(std::string(key));
        return table_ == nullptr ? nullptr : table_->get(key);
    }

    std::string where(std::string_view key) const { return "[" + name_ + "] " + std::string(key); }

    void number(std::string_view key, double& out)
    {
        if (const toml::node* n = find(key)) {
            if (const auto f = n->value_exact<double>()) {
                out = *f;
            } else if (const auto i = n->value_exact<std::int64_t>()) {
                out = static_cast<double>(*i);
            } else {
                throw ConfigError(where(key) + " must be a number");
            }
        }
    }

    void integer(std::string_view key, std::int64_t& out)
    {
        if (const toml::node* n = find(key)) {
            const auto v = n->value_exact<std::int64_t>();
            if (!v) {
                throw ConfigError(where(key) + " must be an integer");
            }
            out = *v;
        }
    }

    std::string name_;
    const toml::table* table_ = nullptr;
    std::set<std::string> seen_;
};

} // namespace

void RunConfig::validate() const
{
    system.validate();
    if (channel.kind == ChannelModel::Kind::Constant && !(channel.constant_gain >= 0.0)) {
        throw ConfigError("[channel] constant_gain must be nonnegative");
    }
    if (channel.kind == ChannelModel::Kind::PathLoss &&
        (!(channel.altitude_m > 0.0) || !(channel.radius_m >= 0.0) || !(channel.exponent > 0.0) ||
         !(channel.reference_gain > 0.0))) {
        throw ConfigError("[channel] path-loss parameters must be positive");
    }
    if (!(ao_r_min_mbps >= 0.0) || !(ga_r_min_mbps >= 0.0)) {
        throw ConfigError("minimum rates must be nonnegative");
    }
    if (ao_responders < 0 || ao_responders > system.n_users) {
        throw ConfigError("[ao] responders must lie in [0, n_users]");
    }
    diwfParams().validate(static_cast<std::size_t>(system.n_users));
    ga.validate();
    scenario.validate();
}

DiwfParams RunConfig::diwfParams() const { return {{diwf_r_min_mbps * 1e6}, diwf_damping, diwf_tolerance}; }

CampaignSpec RunConfig::campaignSpec() const
{
    CampaignSpec spec;
    spec.algo = algo;
    spec.config = system;
    spec.channel = channel;
    spec.ao_min_rate_bps = ao_r_min_mbps * 1e6;
    spec.diwf = diwfParams();
    spec.ga = ga;
    spec.ga_min_rate_bps = ga_r_min_mbps * 1e6;
    return spec;
}

RunConfig parseRunConfig(std::string_view text)
{
    toml::table root;
    try {
        root = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "config syntax error: " << e.description() << " (line " << e.source().begin.line << ")";
        throw ConfigError(msg.str());
    }
    static const std::set<std::string> tables = {"system", "channel", "ao", "diwf", "ga", "run", "scenario"};
    for (const auto& [key, value] : root) {
        if (!tables.contains(std::string(key.str()))) {
            throw ConfigError("unknown table [" + std::string(key.str()) + "]");
        }
    }

    RunConfig c;
    {
        TableReader t(root, "system");
        t.read("n_subcarriers", c.system.n_subcarriers);
        t.read("n_users", c.system.n_users);
        t.read("bandwidth_hz", c.system.bandwidth_hz);
        t.read("noise_power_w", c.system.noise_power_w);
        t.read("power_budget_w", c.system.power_budget_w);
        t.read("max_iterations", c.system.max_iterations);
        t.read("mc_runs", c.system.mc_runs);
        t.finish();
    }
    {
        TableReader t(root, "channel");
        std::string model = channelModelName(c.channel.kind);
        t.read("model", model);
        c.channel.kind = parseChannelModelKind(model);
        t.read("constant_gain", c.channel.constant_gain);
        t.read("altitude_m", c.channel.altitude_m);
        t.read("radius_m", c.channel.radius_m);
        t.read("exponent", c.channel.exponent);
        t.read("reference_gain", c.channel.reference_gain);
        t.finish();
    }
    {
        TableReader t(root, "ao");
        t.read("r_min_mbps", c.ao_r_min_mbps);
        t.read("responders", c.ao_responders);
        t.finish();
    }
    {
        TableReader t(root, "diwf");
        t.read("r_min_mbps", c.diwf_r_min_mbps);
        t.read("damping", c.diwf_damping);
        t.read("tolerance", c.diwf_tolerance);
        t.finish();
    }
    {
        TableReader t(root, "ga");
        t.read("population_size", c.ga.population_size);
        t.read("n_generations", c.ga.n_generations);
        t.read("mutation_rate", c.ga.mutation_rate);
        t.read("penalty_power", c.ga.penalty_power);
        t.read("penalty_qos", c.ga.penalty_qos);
        t.read("swap_mutation", c.ga.swap_mutation);
        t.read("r_min_mbps", c.ga_r_min_mbps);
        t.finish();
    }
    {
        TableReader t(root, "run");
        std::string algo = algorithmName(c.algo);
        t.read("algo", algo);
        c.algo = parseAlgorithm(algo);
        t.read("seed", c.seed);
        t.read("workers", c.workers);
        t.read("out_dir", c.out_dir);
        t.finish();
    }
    {
        TableReader t(root, "scenario");
        ScenarioParams& s = c.scenario;
        t.read("n_clusters", s.n_clusters);
        t.read("cells_per_cluster", s.cells_per_cluster);
        t.read("cell_radius_m", s.cell_radius_m);
        t.read("users_per_cell", s.users_per_cell);
        t.read("responder_fraction", s.responder_fraction);
        t.read("tight_latency_fraction", s.tight_latency_fraction);
        t.read("tbs_power_w", s.tbs_power_w);
        t.read("tbs_capacity", s.tbs_capacity);
        t.read("abs_power_w", s.abs_power_w);
        t.read("abs_capacity", s.abs_capacity);
        t.read("abs_altitude_m", s.abs_altitude_m);
        t.read("uavs", s.uavs);
        t.read("dwell_s", s.dwell_s);
        t.read("event_users", s.event_users);
        t.read("outage_cluster", s.outage_cluster);
        t.read("noise_power_w", s.link.noise_power_w);
        t.read("tbs_exponent", s.link.tbs_exponent);
        t.read("abs_exponent", s.link.abs_exponent);
        t.read("reference_gain", s.link.reference_gain);
        t.read("load_threshold", s.link.load_threshold);
        t.finish();
    }
    c.validate();
    return c;
}

RunConfig loadRunConfig(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parseRunConfig(text.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string serializeRunConfig(const RunConfig& c)
{
    const ScenarioParams& s = c.scenario;
    toml::table root{
        {"system",
         toml::table{{"n_subcarriers", c.system.n_subcarriers},
                     {"n_users", c.system.n_users},
                     {"bandwidth_hz", c.system.bandwidth_hz},
                     {"noise_power_w", c.system.noise_power_w},
                     {"power_budget_w", c.system.power_budget_w},
                     {"max_iterations", c.system.max_iterations},
                     {"mc_runs", c.system.mc_runs}}},
        {"channel",
         toml::table{{"model", channelModelName(c.channel.kind)},
                     {"constant_gain", c.channel.constant_gain},
                     {"altitude_m", c.channel.altitude_m},
                     {"radius_m", c.channel.radius_m},
                     {"exponent", c.channel.exponent},
                     {"reference_gain", c.channel.reference_gain}}},
        {"ao", toml::table{{"r_min_mbps", c.ao_r_min_mbps}, {"responders", c.ao_responders}}},
        {"diwf",
         toml::table{
             {"r_min_mbps", c.diwf_r_min_mbps}, {"damping", c.diwf_damping}, {"tolerance", c.diwf_tolerance}}},
        {"ga",
         toml::table{{"population_size", c.ga.population_size},
                     {"n_generations", c.ga.n_generations},
                     {"mutation_rate", c.ga.mutation_rate},
                     {"penalty_power", c.ga.penalty_power},
                     {"penalty_qos", c.ga.penalty_qos},
                     {"swap_mutation", c.ga.swap_mutation},
                     {"r_min_mbps", c.ga_r_min_mbps}}},
        {"run",
         toml::table{{"algo", algorithmName(c.algo)},
                     {"seed", static_cast<std::int64_t>(c.seed)},
                     {"workers", static_cast<std::int64_t>(c.workers)},
                     {"out_dir", c.out_dir}}},
        {"scenario",
         toml::table{{"n_clusters", s.n_clusters},
                     {"cells_per_cluster", s.cells_per_cluster},
                     {"cell_radius_m", s.cell_radius_m},
                     {"users_per_cell", s.users_per_cell},
                     {"responder_fraction", s.responder_fraction},
                     {"tight_latency_fraction", s.tight_latency_fraction},
                     {"tbs_power_w", s.tbs_power_w},
                     {"tbs_capacity", s.tbs_capacity},
                     {"abs_power_w", s.abs_power_w},
                     {"abs_capacity", s.abs_capacity},
                     {"abs_altitude_m", s.abs_altitude_m},
                     {"uavs", s.uavs},
                     {"dwell_s", s.dwell_s},
                     {"event_users", s.event_users},
                     {"outage_cluster", s.outage_cluster},
                     {"noise_power_w", s.link.noise_power_w},
                     {"tbs_exponent", s.link.tbs_exponent},
                     {"abs_exponent", s.link.abs_exponent},
                     {"reference_gain", s.link.reference_gain},
                     {"load_threshold", s.link.load_threshold}}},
    };
    std::ostringstream out;
    out << root << '\n';
    return out.str();
}

} // namespace sagin
