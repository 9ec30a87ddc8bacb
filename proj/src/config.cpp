/*
 * Copyright 2026 The brcva Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "brcva/config.hpp"

#include "brcva/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>

namespace brcva {

ConfigError::ConfigError(const std::string& message, std::string file, int line, int column)
    : InvalidInput(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      message_(message), file_(std::move(file)), line_(line), column_(column) {}

namespace {

class Reader {
  public:
    Reader(std::string source, std::filesystem::path base) : source_(std::move(source)), base_(std::move(base)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
        const YAML::Mark m = node.Mark();
        if (m.is_null())
            throw ConfigError(message, source_, 0, 0);
        throw ConfigError(message, source_, m.line + 1, m.column + 1);
    }

    void require_map(const YAML::Node& node, const std::string& what, std::initializer_list<const char*> keys) const {
        if (!node.IsMap())
            fail(node, what + " must be a mapping");
        for (const auto& kv : node) {
            const std::string key = kv.first.as<std::string>();
            bool known = false;
            for (const char* k : keys)
                known = known || key == k;
            if (!known)
                fail(kv.first, "unknown key '" + key + "' in " + what);
        }
    }

    double number(const YAML::Node& node, const std::string& what) const {
        if (!node.IsScalar())
            fail(node, what + " must be a number");
        double v = 0.0;
        if (!YAML::convert<double>::decode(node, v) || !std::isfinite(v))
            fail(node, what + " must be a finite number, got '" + node.Scalar() + "'");
        return v;
    }

    double number_in(const YAML::Node& node, const std::string& what, double lo, double hi) const {
        const double v = number(node, what);
        if (v < lo || v > hi) {
            std::ostringstream os;
            os << what << " = " << v << " outside [" << lo << ", " << hi << "]";
            fail(node, os.str());
        }
        return v;
    }

    std::uint64_t count(const YAML::Node& node, const std::string& what) const {
        std::uint64_t v = 0;
        if (!node.IsScalar() || !YAML::convert<std::uint64_t>::decode(node, v) || node.Scalar().front() == '-')
            fail(node, what + " must be a non-negative integer");
        return v;
    }

    bool flag(const YAML::Node& node, const std::string& what) const {
        bool v = false;
        if (!node.IsScalar() || !YAML::convert<bool>::decode(node, v))
            fail(node, what + " must be true or false");
        return v;
    }

    std::string text(const YAML::Node& node, const std::string& what) const {
        if (!node.IsScalar())
            fail(node, what + " must be a string");
        return node.Scalar();
    }

    RiskLevel level(const YAML::Node& node, const std::string& what) const {
        try {
            return parse_risk_level(text(node, what));
        } catch (const ConfigError&) {
            throw;
        } catch (const InvalidInput& e) {
            fail(node, e.what());
        }
    }

    std::vector<double> numbers(const YAML::Node& node, const std::string& what) const {
        if (!node.IsSequence())
            fail(node, what + " must be a list");
        std::vector<double> out;
        for (const auto& item : node)
            out.push_back(number(item, what + " entry"));
        return out;
    }

    NameSpec name(const YAML::Node& node, const std::string& label) const {
        require_map(node, "name '" + label + "'", {"preset", "cir", "lgd", "nu", "quotes"});
        NameSpec spec;
        spec.label = label;
        if (node["preset"] && node["cir"])
            fail(node, "name '" + label + "' sets both preset and cir");
        if (node["preset"]) {
            spec.preset = level(node["preset"], label + ".preset");
            spec.params = preset_params(*spec.preset);
            spec.lgd = preset_lgd(*spec.preset);
        } else if (node["cir"]) {
            const YAML::Node cir = node["cir"];
            require_map(cir, label + ".cir", {"y0", "kappa", "mu", "nu"});
            for (const char* k : {"y0", "kappa", "mu", "nu"})
                if (!cir[k])
                    fail(cir, label + ".cir requires " + k);
            spec.params.y0 = number_in(cir["y0"], label + ".cir.y0", 0.0, 10.0);
            spec.params.kappa = number_in(cir["kappa"], label + ".cir.kappa", 0.0, 100.0);
            spec.params.mu = number_in(cir["mu"], label + ".cir.mu", 0.0, 10.0);
            spec.params.nu = number_in(cir["nu"], label + ".cir.nu", 0.0, 10.0);
            if (!node["lgd"])
                fail(node, "name '" + label + "' with explicit cir requires lgd");
        } else {
            fail(node, "name '" + label + "' requires preset or cir");
        }
        if (node["lgd"])
            spec.lgd = number_in(node["lgd"], label + ".lgd", 0.0, 1.0);
        if (node["nu"])
            spec.nu = number_in(node["nu"], label + ".nu", 0.0, 10.0);
        if (node["quotes"]) {
            const std::filesystem::path p = base_ / text(node["quotes"], label + ".quotes");
            std::ifstream probe(p);
            if (!probe)
                fail(node["quotes"], "quote file '" + p.string() + "' not found");
            spec.quote_file = p.filename().string();
            spec.quotes = read_quote_csv(p.string(), spec.lgd);
            spec.quotes->name = label;
        }
        return spec;
    }

    MarketSpec market(const YAML::Node& parent, const std::string& what) const {
        MarketSpec m;
        if (parent["names"] && parent["scenario"])
            fail(parent, what + " sets both names and scenario");
        if (parent["scenario"]) {
            const YAML::Node s = parent["scenario"];
            require_map(s, what + ".scenario", {"preset", "nu"});
            if (!s["preset"])
                fail(s, what + ".scenario requires preset");
            ScenarioLevels lv;
            try {
                lv = scenario_levels(text(s["preset"], what + ".scenario.preset"));
            } catch (const ConfigError&) {
                throw;
            } catch (const InvalidInput& e) {
                fail(s["preset"], e.what());
            }
            const std::array<RiskLevel, 3> levels{lv.investor, lv.reference, lv.counterparty};
            const std::array<const char*, 3> labels{"investor", "reference", "counterparty"};
            for (int i = 0; i < 3; ++i) {
                NameSpec& n = m.names[i];
                n.label = labels[i];
                n.preset = levels[i];
                n.params = preset_params(levels[i]);
                n.lgd = preset_lgd(levels[i]);
                if (s["nu"])
                    n.nu = number_in(s["nu"], what + ".scenario.nu", 0.0, 10.0);
            }
            return m;
        }
        if (!parent["names"])
            fail(parent, what + " requires names or scenario");
        const YAML::Node names = parent["names"];
        require_map(names, what + ".names", {"investor", "reference", "counterparty"});
        const std::array<const char*, 3> labels{"investor", "reference", "counterparty"};
        for (int i = 0; i < 3; ++i) {
            if (!names[labels[i]])
                fail(names, what + ".names requires " + labels[i]);
            m.names[i] = name(names[labels[i]], labels[i]);
        }
        return m;
    }

    std::string source_;
    std::filesystem::path base_;
};

nlohmann::json to_json(const NameSpec& n) {
    nlohmann::json j;
    j["label"] = n.label;
    j["preset"] = n.preset ? to_string(*n.preset) : "";
    j["cir"] = {n.params.y0, n.params.kappa, n.params.mu, n.params.nu};
    j["lgd"] = n.lgd;
    j["nu"] = n.nu ? nlohmann::json(*n.nu) : nlohmann::json();
    if (n.quotes) {
        nlohmann::json q = nlohmann::json::array();
        for (const auto& c : n.quotes->quotes)
            q.push_back({c.tenor, c.spread_bp});
        j["quotes"] = q;
    }
    return j;
}

} // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir, const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(e.msg, source, e.mark.line + 1, e.mark.column + 1);
    }
    Reader r(source, base_dir);
    RunConfig c;
    c.source = source;
    if (root.IsNull())
        return c;
    r.require_map(root, "config",
                  {"discount_rate", "contract", "names", "scenario", "mtm", "monte_carlo", "numerics", "sweep",
                   "breakeven"});

    if (root["discount_rate"])
        c.rate = r.number_in(root["discount_rate"], "discount_rate", -0.2, 1.0);

    if (const YAML::Node k = root["contract"]) {
        r.require_map(k, "contract", {"start", "maturity", "spread_bp", "coupon_interval"});
        if (k["start"])
            c.contract.start = r.number_in(k["start"], "contract.start", 0.0, 100.0);
        if (k["maturity"])
            c.contract.maturity = r.number_in(k["maturity"], "contract.maturity", 0.0, 100.0);
        if (k["spread_bp"])
            c.contract.spread_bp = r.number_in(k["spread_bp"], "contract.spread_bp", 0.0, 1e5);
        if (k["coupon_interval"])
            c.contract.coupon_interval = r.number_in(k["coupon_interval"], "contract.coupon_interval", 1e-3, 10.0);
        if (c.contract.maturity <= c.contract.start)
            r.fail(k, "contract.maturity must exceed contract.start");
    }

    if (root["mtm"]) {
        if (root["names"] || root["scenario"])
            r.fail(root["mtm"], "mtm configs define names under mtm.inception and mtm.valuation");
        const YAML::Node mtm = root["mtm"];
        r.require_map(mtm, "mtm", {"inception", "valuation", "elapsed_days", "elapsed_years"});
        for (const char* k : {"inception", "valuation"}) {
            if (!mtm[k])
                r.fail(mtm, std::string("mtm requires ") + k);
            r.require_map(mtm[k], std::string("mtm.") + k, {"names", "scenario"});
            c.markets.push_back(r.market(mtm[k], std::string("mtm.") + k));
        }
        if (mtm["elapsed_days"] && mtm["elapsed_years"])
            r.fail(mtm, "mtm sets both elapsed_days and elapsed_years");
        if (mtm["elapsed_days"])
            c.elapsed = r.number_in(mtm["elapsed_days"], "mtm.elapsed_days", 0.0, 36500.0) / 365.0;
        else if (mtm["elapsed_years"])
            c.elapsed = r.number_in(mtm["elapsed_years"], "mtm.elapsed_years", 0.0, 100.0);
        else
            r.fail(mtm, "mtm requires elapsed_days or elapsed_years");
    } else if (root["names"] || root["scenario"]) {
        c.markets.push_back(r.market(root, "config"));
    }

    if (const YAML::Node mc = root["monte_carlo"]) {
        r.require_map(mc, "monte_carlo", {"paths", "seed"});
        if (mc["paths"]) {
            c.paths = r.count(mc["paths"], "monte_carlo.paths");
            if (c.paths == 0)
                r.fail(mc["paths"], "monte_carlo.paths must be at least 1");
        }
        if (mc["seed"])
            c.seed = r.count(mc["seed"], "monte_carlo.seed");
    }

    if (const YAML::Node g = root["numerics"]) {
        r.require_map(g, "numerics",
                      {"simulation_step", "premium_step", "copula_spacing", "knot_step", "tail_width",
                       "value_at_default"});
        if (g["simulation_step"])
            c.engine.simulation_step = r.number_in(g["simulation_step"], "numerics.simulation_step", 1e-4, 1.0);
        if (g["premium_step"])
            c.engine.premium_step = r.number_in(g["premium_step"], "numerics.premium_step", 1e-4, 1.0);
        if (g["copula_spacing"])
            c.engine.copula_spacing = r.number_in(g["copula_spacing"], "numerics.copula_spacing", 1e-5, 0.1);
        if (g["knot_step"])
            c.knot_step = r.number_in(g["knot_step"], "numerics.knot_step", 1e-4, 1.0);
        if (g["tail_width"])
            c.engine.inversion.tail_width = r.number_in(g["tail_width"], "numerics.tail_width", 4.0, 15.0);
        if (g["value_at_default"])
            c.engine.value_at_default = r.flag(g["value_at_default"], "numerics.value_at_default");
    }

    if (const YAML::Node s = root["sweep"]) {
        r.require_map(s, "sweep", {"correlations", "nu1"});
        if (s["correlations"]) {
            if (!s["correlations"].IsSequence())
                r.fail(s["correlations"], "sweep.correlations must be a list of [r01, r02, r12]");
            for (const auto& t : s["correlations"]) {
                const std::vector<double> v = r.numbers(t, "correlation triple");
                if (v.size() != 3)
                    r.fail(t, "correlation triple must have 3 entries");
                for (double x : v)
                    if (x < -1.0 || x > 1.0)
                        r.fail(t, "correlation entries must lie in [-1, 1]");
                const CopulaCorrelations cc{v[0], v[1], v[2]};
                try {
                    GaussianCopula probe(cc);
                } catch (const InvalidInput& e) {
                    r.fail(t, e.what());
                }
                c.sweep.correlations.push_back(cc);
            }
        }
        if (s["nu1"]) {
            c.sweep.nu1 = r.numbers(s["nu1"], "sweep.nu1");
            for (double v : c.sweep.nu1)
                if (v < 0.0 || v > 10.0)
                    r.fail(s["nu1"], "sweep.nu1 entries must lie in [0, 10]");
        }
    }

    if (const YAML::Node b = root["breakeven"]) {
        r.require_map(b, "breakeven", {"levels", "tenors", "lgd"});
        if (b["levels"]) {
            if (!b["levels"].IsSequence())
                r.fail(b["levels"], "breakeven.levels must be a list");
            c.breakeven.levels.clear();
            for (const auto& l : b["levels"])
                c.breakeven.levels.push_back(r.level(l, "breakeven.levels entry"));
        }
        if (b["tenors"]) {
            c.breakeven.tenors = r.numbers(b["tenors"], "breakeven.tenors");
            for (double t : c.breakeven.tenors)
                if (t <= 0.0 || t > 100.0)
                    r.fail(b["tenors"], "breakeven.tenors entries must lie in (0, 100]");
        }
        if (b["lgd"])
            c.breakeven.lgd = r.number_in(b["lgd"], "breakeven.lgd", 0.0, 1.0);
        if (c.breakeven.levels.empty() || c.breakeven.tenors.empty())
            r.fail(b, "breakeven.levels and breakeven.tenors must be non-empty");
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file", path.string(), 0, 0);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str(), path.parent_path(), path.string());
}

void validate_sweep(const RunConfig& config) {
    if (config.sweep.correlations.empty())
        throw ConfigError("sweep.correlations is empty", config.source, 0, 0);
    if (config.sweep.nu1.empty())
        throw ConfigError("sweep.nu1 is empty", config.source, 0, 0);
}

std::string RunConfig::canonical() const {
    nlohmann::json j;
    j["rate"] = rate;
    j["contract"] = {{"start", contract.start},
                     {"maturity", contract.maturity},
                     {"spread_bp", contract.spread_bp ? nlohmann::json(*contract.spread_bp) : nlohmann::json()},
                     {"coupon_interval", contract.coupon_interval}};
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& m : markets) {
        nlohmann::json names = nlohmann::json::array();
        for (const auto& n : m.names)
            names.push_back(to_json(n));
        ms.push_back(names);
    }
    j["markets"] = ms;
    j["elapsed"] = elapsed;
    nlohmann::json corr = nlohmann::json::array();
    for (const auto& cc : sweep.correlations)
        corr.push_back({cc.r01, cc.r02, cc.r12});
    j["sweep"] = {{"correlations", corr}, {"nu1", sweep.nu1}};
    nlohmann::json levels = nlohmann::json::array();
    for (RiskLevel l : breakeven.levels)
        levels.push_back(to_string(l));
    j["breakeven"] = {{"levels", levels}, {"tenors", breakeven.tenors}, {"lgd", breakeven.lgd}};
    j["paths"] = paths;
    j["seed"] = seed;
    const InversionConfig& inv = engine.inversion;
    j["numerics"] = {{"simulation_step", engine.simulation_step},
                     {"premium_step", engine.premium_step},
                     {"copula_spacing", engine.copula_spacing},
                     {"knot_step", knot_step},
                     {"value_at_default", engine.value_at_default},
                     {"inversion",
                      {inv.period_half_width, inv.tail_width, inv.max_terms, inv.cf_tolerance, inv.cf_failure,
                       inv.grid_spacing}}};
    return j.dump();
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t RunConfig::hash() const { return fnv1a(canonical()); }

SurvivalFunction market_survival(const NameSpec& name, const DiscountCurve& discount) {
    if (name.quotes) {
        const SurvivalCurve curve = bootstrap_hazard(*name.quotes, discount);
        return curve.as_function();
    }
    const CirParams p = name.params;
    return [p](double t) { return cir_survival(p, t); };
}

ScenarioModel build_scenario(const RunConfig& config, const MarketSpec& market, const CopulaCorrelations& corr,
                             std::optional<double> nu1) {
    ScenarioModel m;
    m.discount = DiscountCurve::flat(config.rate);
    SurvivalFunction reference_market;
    for (int i = 0; i < 3; ++i) {
        const NameSpec& n = market.names[i];
        CirParams p = n.params;
        if (n.nu)
            p.nu = *n.nu;
        if (i == reference && nu1)
            p.nu = *nu1;
        SurvivalFunction s = market_survival(n, m.discount);
        m.names[i] = calibrate_shift(p, s, config.contract.maturity, config.knot_step);
        m.lgd[i] = n.lgd;
        if (i == reference)
            reference_market = std::move(s);
    }
    m.correlations = corr;
    m.contract.t_start = config.contract.start;
    m.contract.t_end = config.contract.maturity;
    m.contract.coupon_interval = config.contract.coupon_interval;
    m.contract.lgd = m.lgd[reference];
    if (config.contract.spread_bp)
        m.contract.spread = *config.contract.spread_bp * 1e-4;
    else
        m.contract.spread = breakeven_spread(m.contract, reference_market, m.discount, config.engine.premium_step);
    m.validate();
    return m;
}

} // namespace brcva
