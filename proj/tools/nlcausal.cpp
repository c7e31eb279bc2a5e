// Copyright 2026 The nlcausal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// nlcausal: command-line front end. Every command writes CSV files (and,
// with --json, JSON mirrors) plus manifest.json into its output directory.
//
// Exit codes: 0 success, 1 scientific assertion failed, 2 usage error,
// 3 numerical or estimation failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "nlcausal/nlcausal.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace nlcausal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

/// Raised for invalid flag values detected after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string sha256_hex(const std::string &data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", md[i]);
        hex += byte;
    }
    return hex;
}

// ---------------------------------------------------------------------------
// Argument parsing helpers

/// "0.3", "pi/4", "3pi/16", "3*pi/16", "-pi/6".
double parse_angle(std::string text) {
    text.erase(std::remove(text.begin(), text.end(), ' '), text.end());
    const auto p = text.find("pi");
    try {
        if (p == std::string::npos) {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size()) {
                throw UsageError("");
            }
            return v;
        }
        std::string coeff = text.substr(0, p);
        if (!coeff.empty() && coeff.back() == '*') {
            coeff.pop_back();
        }
        double k = 1.0;
        if (coeff == "-") {
            k = -1.0;
        } else if (!coeff.empty()) {
            std::size_t used = 0;
            k = std::stod(coeff, &used);
            if (used != coeff.size()) {
                throw UsageError("");
            }
        }
        double d = 1.0;
        const std::string rest = text.substr(p + 2);
        if (!rest.empty()) {
            if (rest[0] != '/') {
                throw UsageError("");
            }
            std::size_t used = 0;
            d = std::stod(rest.substr(1), &used);
            if (used != rest.size() - 1) {
                throw UsageError("");
            }
        }
        return k * std::numbers::pi / d;
    } catch (const std::exception &) {
        throw UsageError("cannot parse angle \"" + text + "\"");
    }
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

std::vector<double> parse_angle_list(const std::string &text) {
    std::vector<double> out;
    for (const auto &item : split(text, ',')) {
        out.push_back(parse_angle(item));
    }
    if (out.empty()) {
        throw UsageError("empty angle list");
    }
    return out;
}

/// "lo:hi:n"
std::vector<double> parse_grid(const std::string &text) {
    const auto parts = split(text, ':');
    try {
        if (parts.size() == 3) {
            const int n = std::stoi(parts[2]);
            if (n >= 1) {
                return linspace(std::stod(parts[0]), std::stod(parts[1]),
                                static_cast<std::size_t>(n));
            }
        }
    } catch (const std::exception &) {
    }
    throw UsageError("grid must be lo:hi:n, got \"" + text + "\"");
}

Scenario parse_scenario(const std::string &text) {
    const auto parts = split(text, ',');
    try {
        if (parts.size() == 4) {
            const Scenario s{std::stoi(parts[0]), std::stoi(parts[1]),
                             std::stoi(parts[2]), std::stoi(parts[3])};
            if (s.valid()) {
                return s;
            }
        }
    } catch (const std::exception &) {
    }
    throw UsageError("scenario must be m_x,m_y,o_a,o_b with positive entries");
}

// ---------------------------------------------------------------------------
// Output handling

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    void add(std::vector<json> row) { rows.push_back(std::move(row)); }

    static std::string cell(const json &v) {
        if (v.is_number_float()) {
            return format_number(v.get<double>());
        }
        if (v.is_string()) {
            return v.get<std::string>();
        }
        return v.dump();
    }

    [[nodiscard]] std::string csv() const {
        std::string out;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out += (i ? "," : "") + columns[i];
        }
        out += '\n';
        for (const auto &row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out += (i ? "," : "") + cell(row[i]);
            }
            out += '\n';
        }
        return out;
    }

    /// Array of objects keyed by the CSV column names.
    [[nodiscard]] json to_json() const {
        json arr = json::array();
        for (const auto &row : rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < columns.size(); ++i) {
                obj[columns[i]] = row[i];
            }
            arr.push_back(std::move(obj));
        }
        return arr;
    }
};

struct Common {
    std::uint64_t seed = 0;
    std::string out;
    bool json_mirror = false;
    unsigned threads = 0;
};

class RunContext {
  public:
    RunContext(std::string command, const Common &common, const CLI::App &app)
        : command_(std::move(command)), common_(common) {
        dir_ = common.out.empty()
                   ? fs::path("out") / (command_ + "-" + std::to_string(common.seed))
                   : fs::path(common.out);
        fs::create_directories(dir_);
        for (const CLI::Option *opt : app.get_options()) {
            const std::string name = opt->get_single_name();
            if (name.empty() || name == "help") {
                continue;
            }
            if (opt->count() > 0) {
                const auto &res = opt->results();
                std::string joined;
                for (std::size_t i = 0; i < res.size(); ++i) {
                    joined += (i ? "," : "") + res[i];
                }
                parameters_[name] = opt->get_expected_max() == 0 ? "true" : joined;
            } else if (opt->get_expected_max() == 0) {
                parameters_[name] = "false";
            } else {
                parameters_[name] = opt->get_default_str();
            }
        }
    }

    [[nodiscard]] const Common &common() const noexcept { return common_; }
    [[nodiscard]] const fs::path &dir() const noexcept { return dir_; }

    void write_file(const std::string &name, const std::string &content) {
        std::ofstream f(dir_ / name, std::ios::binary);
        f << content;
        if (!f) {
            throw std::runtime_error("cannot write " + (dir_ / name).string());
        }
        digests_[name] = sha256_hex(content);
    }

    void write_table(const std::string &stem, const Table &table) {
        write_file(stem + ".csv", table.csv());
        if (common_.json_mirror) {
            write_file(stem + ".json", table.to_json().dump(2) + "\n");
        }
    }

    void finish() {
        const json manifest{{"command", command_},
                            {"parameters", parameters_},
                            {"seed", common_.seed},
                            {"version", kVersion},
                            {"outputs", digests_}};
        std::ofstream f(dir_ / "manifest.json", std::ios::binary);
        f << manifest.dump(2) << '\n';
    }

  private:
    std::string command_;
    Common common_;
    fs::path dir_;
    json parameters_ = json::object();
    json digests_ = json::object();
};

SettingsPair settings_preset(const std::string &name, double gamma) {
    if (name == "chsh-fixed") {
        return chsh_fixed_settings();
    }
    if (name == "chsh-optimal") {
        return chsh_optimal_settings(gamma);
    }
    if (name == "s3-fixed") {
        return s3_fixed_settings();
    }
    if (name == "s3-optimized") {
        const auto o = s3_optimized_curve(gamma);
        return s3_template_settings(o.alpha, o.beta);
    }
    throw UsageError("unknown settings preset \"" + name + "\"");
}

struct SettingsArgs {
    std::string preset = "chsh-optimal";
    std::string alice;
    std::string bob;

    void attach(CLI::App *cmd) {
        cmd->add_option("--settings", preset,
                        "chsh-fixed | chsh-optimal | s3-fixed | s3-optimized | custom")
            ->capture_default_str();
        cmd->add_option("--alice", alice, "custom Alice angles, comma separated");
        cmd->add_option("--bob", bob, "custom Bob angles, comma separated");
    }

    [[nodiscard]] SettingsPair resolve(double gamma) const {
        if (preset != "custom") {
            return settings_preset(preset, gamma);
        }
        if (alice.empty() || bob.empty()) {
            throw UsageError("--settings custom needs --alice and --bob");
        }
        SettingsPair p;
        for (double t : parse_angle_list(alice)) {
            p.alice.push_back({t, Party::alice});
        }
        for (double t : parse_angle_list(bob)) {
            p.bob.push_back({t, Party::bob});
        }
        return p;
    }
};

std::string interval_cell(double lo, double hi) {
    return format_number(lo) + ";" + format_number(hi);
}

// ---------------------------------------------------------------------------
// Commands. Each returns the process exit code.

struct VerifyPolytopeArgs {
    std::string scenario = "3,3,2,2";
    std::string functional;
    std::string vertices;
    std::string direction = "AtoB";
    std::optional<int> bound;
    bool export_vertices = false;
};

int cmd_verify_polytope(RunContext &ctx, const VerifyPolytopeArgs &args) {
    const Scenario s = parse_scenario(args.scenario);
    std::string name = args.functional;
    if (name.empty()) {
        name = s == kChshScenario ? "chsh" : "s3";
    }
    IntegerFunctional f;
    if (name == "s3") {
        f = s3_functional();
    } else if (name == "chsh") {
        f = chsh_functional();
    } else {
        throw UsageError("--functional must be s3 or chsh");
    }
    if (f.scenario != s) {
        throw UsageError("functional " + name + " is defined on scenario " +
                         f.scenario.to_string() + ", not " + s.to_string());
    }
    if (args.bound) {
        f.bound = *args.bound;
    }

    std::vector<DeterministicStrategy> a_to_b, b_to_a;
    bool corrupted = false;
    if (!args.vertices.empty()) {
        Direction d;
        if (args.direction == "AtoB") {
            d = Direction::a_to_b;
        } else if (args.direction == "BtoA") {
            d = Direction::b_to_a;
        } else {
            throw UsageError("--direction must be AtoB or BtoA");
        }
        std::ifstream in(args.vertices);
        if (!in) {
            throw UsageError("cannot open vertex file " + args.vertices);
        }
        auto parsed = read_vertices_csv(in, s, d);
        for (const auto &[line, reason] : parsed.rejected) {
            std::cerr << "corrupted vertex at " << args.vertices << ":" << line << ": "
                      << reason << '\n';
        }
        corrupted = !parsed.rejected.empty();
        (d == Direction::a_to_b ? a_to_b : b_to_a) = std::move(parsed.strategies);
    } else {
        a_to_b = enumerate_strategies(s, Direction::a_to_b);
        b_to_a = enumerate_strategies(s, Direction::b_to_a);
    }
    const VertexReport report = verify_bound(f, a_to_b, b_to_a);

    Table vertices{{"direction", "index", "f_a", "f_b", "value"}, {}};
    auto add_rows = [&](const std::vector<DeterministicStrategy> &set,
                        const std::vector<int> &values) {
        for (std::size_t i = 0; i < set.size(); ++i) {
            std::string fa, fb;
            for (int v : set[i].f_a) {
                fa += std::to_string(v);
            }
            for (int v : set[i].f_b) {
                fb += std::to_string(v);
            }
            vertices.add({to_string(set[i].direction), i, fa, fb, values[i]});
        }
    };
    add_rows(a_to_b, report.a_to_b_values);
    add_rows(b_to_a, report.b_to_a_values);
    ctx.write_table("vertices", vertices);

    const int max_value = a_to_b.empty() && b_to_a.empty() ? 0 : report.max_value;
    Table summary{{"functional", "bound", "vertices_a_to_b", "vertices_b_to_a", "max_value",
                   "offenders", "corrupted"},
                  {}};
    summary.add({name, f.bound, a_to_b.size(), b_to_a.size(), max_value,
                 report.offenders.size(), corrupted ? 1 : 0});
    ctx.write_table("summary", summary);

    if (args.export_vertices) {
        for (auto d : {Direction::a_to_b, Direction::b_to_a}) {
            std::ostringstream os;
            write_vertices_csv(os, s, d, d == Direction::a_to_b ? a_to_b : b_to_a);
            ctx.write_file(std::string("vertices_") + to_string(d) + ".csv", os.str());
        }
    }

    std::cout << "max " << name << " over " << a_to_b.size() + b_to_a.size()
              << " vertices = " << max_value << " (bound " << f.bound << ")\n";
    for (const auto &st : report.offenders) {
        std::cerr << "bound violated by " << format_strategy(st) << ": "
                  << vertex_value(st, f) << " > " << f.bound << '\n';
    }
    return report.within_bound() && !corrupted ? kExitOk : kExitAssertion;
}

struct ScanArgs {
    std::string gammas = "0,pi/16,pi/8,3pi/16,pi/4";
    std::int64_t counts = 48'000;
    std::size_t runs = 2000;
    std::string settings = "optimized";
    double tilt = 0.0;
    double visibility = 1.0;
    std::string mode = "fixed";
};

int cmd_ace_scan(RunContext &ctx, const ScanArgs &args) {
    if (args.settings != "optimized" && args.settings != "fixed") {
        throw UsageError("--settings must be optimized or fixed");
    }
    if (args.counts <= 0) {
        throw UsageError("--counts must be positive");
    }
    const auto gammas = parse_angle_list(args.gammas);
    const std::uint64_t seed = ctx.common().seed;
    Table t{{"gamma", "S2", "ace_lp", "ace_formula", "ace_simulated", "interval"}, {}};
    bool disagreement = false;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const double g = gammas[i];
        const TwoQubitState state(g, args.visibility);
        const SettingsPair st = args.settings == "fixed" ? chsh_fixed_settings()
                                                         : chsh_optimal_settings(g);
        const Behavior p = born_behavior(state, st.alice, st.bob);
        const ChshReport report = chsh_value(p);
        const double formula = ace_closed_form(report);
        const AceResult lp = min_ace(p);
        json lp_cell = "infeasible";
        if (lp.status == AceStatus::optimal) {
            lp_cell = lp.value;
            if (std::abs(lp.value - formula) > 1e-7) {
                disagreement = true;
                std::cerr << "gamma " << format_number(g) << ": LP " << lp.value
                          << " disagrees with closed form " << formula << '\n';
            }
        } else {
            std::cerr << "gamma " << format_number(g) << ": ACE LP infeasible\n";
        }
        const CountsTable counts = simulate_run(state, st.alice, st.bob, {true, args.tilt},
                                                args.counts, derive_seed(seed, i));
        const AceEstimate est =
            estimate_ace(counts, {args.runs, derive_seed(seed, 1'000'000 + i)});
        t.add({g, report.s2, lp_cell, formula, est.value,
               interval_cell(est.interval_low, est.interval_high)});
    }
    ctx.write_table("ace_scan", t);
    return disagreement ? kExitAssertion : kExitOk;
}

int cmd_s3_scan(RunContext &ctx, const ScanArgs &args) {
    if (args.mode != "fixed" && args.mode != "optimized") {
        throw UsageError("--mode must be fixed or optimized");
    }
    if (args.counts < 0) {
        throw UsageError("--counts must be >= 0 (0 disables sampling)");
    }
    const auto gammas = parse_angle_list(args.gammas);
    const std::uint64_t seed = ctx.common().seed;
    Table t{{"gamma", "s3_theory", "s3_sampled", "interval"}, {}};
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const double g = gammas[i];
        const TwoQubitState state(g, args.visibility);
        SettingsPair st;
        double theory;
        if (args.mode == "fixed") {
            st = s3_fixed_settings();
            theory = args.visibility * s3_fixed_curve(g);
        } else {
            const auto o = s3_optimized_curve(g);
            st = s3_template_settings(o.alpha, o.beta);
            theory = args.visibility * o.predicted_s3;
        }
        if (args.counts == 0) {
            t.add({g, theory, "", ""});
            continue;
        }
        const CountsTable counts =
            simulate_run(state, st.alice, st.bob, {}, args.counts, derive_seed(seed, i));
        auto statistic = [](const CountsTable &c) {
            return s3_value(empirical_behavior(c)).s3;
        };
        const double sampled = statistic(counts);
        const Interval iv = bootstrap_interval(counts, statistic, sampled,
                                               {args.runs, derive_seed(seed, 1'000'000 + i)});
        t.add({g, theory, sampled, interval_cell(iv.low, iv.high)});
    }
    ctx.write_table("s3_scan", t);
    return kExitOk;
}

struct ThresholdArgs {
    std::string gammas = "pi/8,pi/4";
    std::string functional = "s3";
    std::string eta_grid = "0.6:1:41";
    std::string v_grid = "0.6:1:41";
    double tolerance = 1e-3;
};

int cmd_threshold_scan(RunContext &ctx, const ThresholdArgs &args) {
    Functional f;
    if (args.functional == "s3") {
        f = Functional::s3;
    } else if (args.functional == "chsh") {
        f = Functional::chsh;
    } else {
        throw UsageError("--functional must be s3 or chsh");
    }
    const auto gammas = parse_angle_list(args.gammas);
    const auto etas = parse_grid(args.eta_grid);
    const auto vs = parse_grid(args.v_grid);
    SearchOptions search;
    search.seed = ctx.common().seed;
    ThresholdOptions topt;
    topt.tolerance = args.tolerance;
    topt.search = search;

    Table grid{{"gamma", "eta", "v", "max_functional", "violated"}, {}};
    Table thresholds{{"gamma", "functional", "critical_eta", "critical_v", "violation_possible"},
                     {}};
    for (double g : gammas) {
        for (const auto &r : threshold_grid(g, f, etas, vs, ctx.common().threads, search)) {
            grid.add({r.gamma, r.eta, r.v, r.max_functional, r.violated ? 1 : 0});
        }
        const auto r = critical_thresholds(g, f, topt);
        auto maybe = [](double v) { return std::isnan(v) ? json("nan") : json(v); };
        thresholds.add({g, to_string(f), maybe(r.critical_eta), maybe(r.critical_v),
                        r.violation_possible ? 1 : 0});
    }
    ctx.write_table("threshold_grid", grid);
    ctx.write_table("thresholds", thresholds);
    return kExitOk;
}

struct DistributionArgs {
    std::string gamma = "pi/4";
    std::int64_t counts = 48'000;
    std::size_t runs = 100'000;
    std::string settings = "optimized";
    double tilt = 0.0;
    double visibility = 1.0;
    std::string mode = "poisson";
};

int cmd_ace_distribution(RunContext &ctx, const DistributionArgs &args) {
    const double g = parse_angle(args.gamma);
    if (args.settings != "optimized" && args.settings != "fixed") {
        throw UsageError("--settings must be optimized or fixed");
    }
    if (args.mode != "poisson" && args.mode != "exact") {
        throw UsageError("--mode must be poisson or exact");
    }
    const SettingsPair st =
        args.settings == "fixed" ? chsh_fixed_settings() : chsh_optimal_settings(g);
    McOptions o;
    o.runs = args.runs;
    o.seed = ctx.common().seed;
    o.threads = ctx.common().threads;
    o.mode = args.mode == "exact" ? SamplingMode::exact : SamplingMode::poisson;
    const auto d = mc_ace_distribution(TwoQubitState(g, args.visibility), st.alice, st.bob,
                                       {true, args.tilt}, args.counts, o);
    Table values{{"run", "value"}, {}};
    for (std::size_t r = 0; r < d.values.size(); ++r) {
        values.add({r, d.values[r]});
    }
    ctx.write_table("ace_distribution", values);
    const auto &s = d.summary;
    Table summary{{"gamma", "median", "p0013", "p1587", "p8413", "p9987", "runs"}, {}};
    summary.add({g, s.median, s.p0013, s.p1587, s.p8413, s.p9987, s.runs});
    ctx.write_table("ace_summary", summary);
    std::cout << "median " << format_number(s.median) << ", 3 sigma ["
              << format_number(s.p0013) << ", " << format_number(s.p9987) << "]\n";
    return kExitOk;
}

struct StateArgs {
    std::string gamma = "pi/4";
    double visibility = 1.0;
    double eta_up = 1.0;
    double eta_down = 1.0;
    SettingsArgs settings;
};

int cmd_behavior(RunContext &ctx, const StateArgs &args) {
    const double g = parse_angle(args.gamma);
    const SettingsPair st = args.settings.resolve(g);
    const Behavior p = born_behavior(TwoQubitState(g, args.visibility), st.alice, st.bob,
                                     DetectorModel(args.eta_up, args.eta_down));
    ctx.write_file("behavior.json", to_json(p).dump(2) + "\n");
    return kExitOk;
}

struct EvaluateArgs {
    std::string input;
    bool project = false;
};

int cmd_evaluate(RunContext &ctx, const EvaluateArgs &args) {
    std::ifstream in(args.input);
    if (!in) {
        throw UsageError("cannot open " + args.input);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception &e) {
        throw UsageError(std::string("invalid JSON: ") + e.what());
    }
    Behavior p = behavior_from_json(doc);
    const Scenario &s = p.scenario();
    Table t{{"quantity", "value"}, {}};
    t.add({"m_x", s.m_x});
    t.add({"m_y", s.m_y});
    t.add({"o_a", s.o_a});
    t.add({"o_b", s.o_b});
    t.add({"signalling_to_alice", p.signalling_to_alice()});
    t.add({"signalling_to_bob", p.signalling_to_bob()});
    if (args.project) {
        auto [q, distance] = project_no_signalling_to_alice(p);
        t.add({"projection_distance", distance});
        p = std::move(q);
    }
    if (s == kChshScenario) {
        const auto r = chsh_value(p);
        t.add({"S2", r.s2});
        t.add({"best_symmetry_index", r.best_symmetry_index});
        t.add({"ace_formula", ace_closed_form(r)});
    }
    if (s == kThreeSettingScenario) {
        t.add({"S3", s3_value(p).s3});
        const auto m = mixture_membership(p);
        t.add({"mixture_member", m.member ? 1 : 0});
        if (m.certificate) {
            t.add({"certificate_bound", m.certificate->bound});
            t.add({"certificate_value", m.certificate->value});
        }
    }
    const auto count = strategy_count(s, Direction::a_to_b);
    if (count && *count <= kDefaultStrategyCap) {
        const auto r = min_ace(p);
        t.add({"ace_lp_status", to_string(r.status)});
        if (r.status == AceStatus::optimal) {
            t.add({"ace_lp", r.value});
        }
    }
    ctx.write_table("evaluate", t);
    return kExitOk;
}

struct SimulateArgs {
    StateArgs state;
    bool intervene = false;
    double tilt = 0.0;
    std::int64_t counts = 48'000;
};

int cmd_simulate(RunContext &ctx, const SimulateArgs &args) {
    const double g = parse_angle(args.state.gamma);
    const SettingsPair st = args.state.settings.resolve(g);
    const CountsTable t = simulate_run(TwoQubitState(g, args.state.visibility), st.alice,
                                       st.bob, {args.intervene, args.tilt}, args.counts,
                                       ctx.common().seed);
    std::ostringstream os;
    write_counts_csv(os, t);
    ctx.write_file("counts.csv", os.str());
    return kExitOk;
}

struct EstimateArgs {
    std::string input;
    std::size_t runs = 2000;
};

int cmd_estimate_ace(RunContext &ctx, const EstimateArgs &args) {
    std::ifstream in(args.input);
    if (!in) {
        throw UsageError("cannot open " + args.input);
    }
    const CountsTable counts = read_counts_csv(in);
    const AceEstimate est = estimate_ace(counts, {args.runs, ctx.common().seed});
    Table t{{"value", "interval_low", "interval_high"}, {}};
    t.add({est.value, est.interval_low, est.interval_high});
    ctx.write_table("estimate", t);
    std::cout << "ACE " << format_number(est.value) << " in ["
              << format_number(est.interval_low) << ", " << format_number(est.interval_high)
              << "]\n";
    return kExitOk;
}

void add_common(CLI::App *cmd, Common &common) {
    cmd->add_option("--seed", common.seed, "PRNG seed")->capture_default_str();
    cmd->add_option("--out", common.out, "output directory (default ./out/<command>-<seed>)");
    cmd->add_flag("--json", common.json_mirror, "mirror every CSV as JSON");
    cmd->add_option("--threads", common.threads, "worker cap, 0 = hardware concurrency")
        ->capture_default_str();
}

void add_state(CLI::App *cmd, StateArgs &s) {
    cmd->add_option("--gamma", s.gamma, "state angle, e.g. 0.3 or pi/8")->capture_default_str();
    cmd->add_option("--visibility", s.visibility, "white-noise visibility v")
        ->capture_default_str();
    cmd->add_option("--eta-up", s.eta_up, "efficiency of the up detector")->capture_default_str();
    cmd->add_option("--eta-down", s.eta_down, "efficiency of the down detector")
        ->capture_default_str();
    s.settings.attach(cmd);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Nonlocal causal models: Bell functionals, ACE linear programs and "
                 "simulated interventional experiments"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Common common;
    std::function<int(RunContext &)> action;
    auto bind = [&](CLI::App *cmd, auto run) {
        add_common(cmd, common);
        cmd->callback([&, cmd, run] {
            action = [cmd, run](RunContext &ctx) { return run(ctx); };
            (void)cmd;
        });
    };

    VerifyPolytopeArgs vp;
    auto *verify = app.add_subcommand("verify-polytope", "check a functional on every vertex");
    verify->add_option("--scenario", vp.scenario, "m_x,m_y,o_a,o_b")->capture_default_str();
    verify->add_option("--functional", vp.functional, "s3 | chsh (default from scenario)");
    verify->add_option("--vertices", vp.vertices, "read vertices from CSV instead");
    verify->add_option("--direction", vp.direction, "AtoB | BtoA for --vertices")
        ->capture_default_str();
    verify->add_option("--bound", vp.bound, "override the bound being checked");
    verify->add_flag("--export-vertices", vp.export_vertices, "write both vertex sets as CSV");
    bind(verify, [&](RunContext &ctx) { return cmd_verify_polytope(ctx, vp); });

    ScanArgs ace;
    auto *ace_scan = app.add_subcommand("ace-scan", "S2, LP and closed-form ACE, simulated ACE");
    ace_scan->add_option("--gammas", ace.gammas, "comma separated state angles")
        ->capture_default_str();
    ace_scan->add_option("--counts", ace.counts, "coincidences per simulated run")
        ->capture_default_str();
    ace_scan->add_option("--runs", ace.runs, "bootstrap replicates")->capture_default_str();
    ace_scan->add_option("--settings", ace.settings, "optimized | fixed")->capture_default_str();
    ace_scan->add_option("--tilt", ace.tilt, "intervention axis tilt (rad)")->capture_default_str();
    ace_scan->add_option("--visibility", ace.visibility, "state visibility")->capture_default_str();
    bind(ace_scan, [&](RunContext &ctx) { return cmd_ace_scan(ctx, ace); });

    ScanArgs s3;
    auto *s3_scan = app.add_subcommand("s3-scan", "theoretical and sampled S3");
    s3_scan->add_option("--gammas", s3.gammas, "comma separated state angles")
        ->capture_default_str();
    s3_scan->add_option("--mode", s3.mode, "fixed | optimized")->capture_default_str();
    s3_scan->add_option("--counts", s3.counts, "coincidences per run, 0 = theory only")
        ->capture_default_str();
    s3_scan->add_option("--runs", s3.runs, "bootstrap replicates")->capture_default_str();
    s3_scan->add_option("--visibility", s3.visibility, "state visibility")->capture_default_str();
    bind(s3_scan, [&](RunContext &ctx) { return cmd_s3_scan(ctx, s3); });

    ThresholdArgs th;
    auto *threshold = app.add_subcommand("threshold-scan", "efficiency/visibility thresholds");
    threshold->add_option("--gammas", th.gammas, "comma separated state angles")
        ->capture_default_str();
    threshold->add_option("--functional", th.functional, "s3 | chsh")->capture_default_str();
    threshold->add_option("--eta-grid", th.eta_grid, "lo:hi:n")->capture_default_str();
    threshold->add_option("--v-grid", th.v_grid, "lo:hi:n")->capture_default_str();
    threshold->add_option("--tolerance", th.tolerance, "bisection tolerance")
        ->capture_default_str();
    bind(threshold, [&](RunContext &ctx) { return cmd_threshold_scan(ctx, th); });

    DistributionArgs dist;
    auto *distribution =
        app.add_subcommand("ace-distribution", "Monte-Carlo ACE noise floor");
    distribution->add_option("--gamma", dist.gamma, "state angle")->capture_default_str();
    distribution->add_option("--counts", dist.counts, "coincidences per run")
        ->capture_default_str();
    distribution->add_option("--runs", dist.runs, "Monte-Carlo runs (>= 1000)")
        ->capture_default_str();
    distribution->add_option("--settings", dist.settings, "optimized | fixed")
        ->capture_default_str();
    distribution->add_option("--tilt", dist.tilt, "intervention axis tilt (rad)")
        ->capture_default_str();
    distribution->add_option("--visibility", dist.visibility, "state visibility")
        ->capture_default_str();
    distribution->add_option("--mode", dist.mode, "poisson | exact")->capture_default_str();
    bind(distribution, [&](RunContext &ctx) { return cmd_ace_distribution(ctx, dist); });

    StateArgs beh;
    auto *behavior = app.add_subcommand("behavior", "Born-rule behavior as JSON");
    add_state(behavior, beh);
    bind(behavior, [&](RunContext &ctx) { return cmd_behavior(ctx, beh); });

    EvaluateArgs ev;
    auto *evaluate = app.add_subcommand("evaluate", "functionals and ACE of a behavior JSON");
    evaluate->add_option("--input", ev.input, "behavior JSON file")->required();
    evaluate->add_flag("--project", ev.project,
                       "average Alice's marginals over y before the LP");
    bind(evaluate, [&](RunContext &ctx) { return cmd_evaluate(ctx, ev); });

    SimulateArgs sim;
    auto *simulate = app.add_subcommand("simulate", "Poissonian counts of one run");
    add_state(simulate, sim.state);
    simulate->add_flag("--intervene", sim.intervene, "force Alice's outcome");
    simulate->add_option("--tilt", sim.tilt, "intervention axis tilt (rad)")
        ->capture_default_str();
    simulate->add_option("--counts", sim.counts, "expected coincidences")->capture_default_str();
    bind(simulate, [&](RunContext &ctx) { return cmd_simulate(ctx, sim); });

    EstimateArgs est;
    auto *estimate = app.add_subcommand("estimate-ace", "plug-in ACE of a counts CSV");
    estimate->add_option("--input", est.input, "counts CSV file")->required();
    estimate->add_option("--runs", est.runs, "bootstrap replicates")->capture_default_str();
    bind(estimate, [&](RunContext &ctx) { return cmd_estimate_ace(ctx, est); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    CLI::App *chosen = app.get_subcommands().front();
    try {
        RunContext ctx(chosen->get_name(), common, *chosen);
        const int code = action(ctx);
        ctx.finish();
        return code;
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError &e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SizeError &e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const EstimationError &e) {
        std::cerr << "estimation failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
