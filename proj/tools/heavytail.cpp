#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <boost/version.hpp>

#include "htrm/acceptance.hpp"
#include "htrm/entropy.hpp"
#include "htrm/json_io.hpp"
#include "htrm/limits.hpp"
#include "htrm/local_law.hpp"
#include "htrm/models.hpp"
#include "htrm/spectral.hpp"
#include "htrm/traffics.hpp"

namespace fs = std::filesystem;
using namespace htrm;

namespace {

constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerifyFailure {};

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

// Flag values arrive as text; anything that parses as JSON is taken as JSON.
Json flag_value(const std::string& s) {
    Json j = Json::parse(s, nullptr, false);
    return j.is_discarded() ? Json(s) : j;
}

struct Command {
    std::string name;
    CLI::App* app = nullptr;
    std::vector<std::string> keys;              // option names with '_' separators
    std::map<std::string, std::string> values;  // raw flag text
    std::map<std::string, Json> defaults;
};

std::string flag_name(const std::string& key) {
    std::string s = key;
    for (char& c : s)
        if (c == '_') c = '-';
    return "--" + s;
}

void add(Command& c, const std::string& key, Json def, const std::string& help) {
    c.keys.push_back(key);
    c.defaults[key] = std::move(def);
    c.app->add_option(flag_name(key), c.values[key], help);
}

// Effective options: defaults, then the --config file, then flags given on the command line.
Json effective_options(Command& c) {
    Json opts = Json::object();
    for (const auto& k : c.keys) opts[k] = c.defaults[k];
    const std::string& cfg_path = c.values["config"];
    if (!cfg_path.empty()) {
        Json file = parse_json(read_file(cfg_path), "config " + cfg_path);
        if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
        for (const auto& [k, v] : file.items()) {
            if (!opts.contains(k) || k == "config") throw ConfigError("config: unknown key '" + k + "'");
            opts[k] = v;
        }
    }
    for (const auto& k : c.keys)
        if (c.app->count(flag_name(k)) > 0) opts[k] = flag_value(c.values[k]);
    opts.erase("config");
    return opts;
}

template <class T>
T get(const Json& opts, const std::string& key) {
    try {
        return opts.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("option '" + key + "' has an invalid value: " + opts.at(key).dump());
    }
}

Json versions() {
    std::ostringstream eigen;
    eigen << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION;
    return {{"heavytail", kVersion}, {"eigen", eigen.str()}, {"boost", BOOST_LIB_VERSION}, {"compiler", __VERSION__}};
}

class Run {
public:
    Run(std::string sub, Json opts) : sub_(std::move(sub)), opts_(std::move(opts)), t0_(std::chrono::steady_clock::now()) {
        out_dir_ = get<std::string>(opts_, "out_dir");
        fs::create_directories(out_dir_);
    }

    const Json& opts() const { return opts_; }
    std::string path(const std::string& file) const { return (fs::path(out_dir_) / file).string(); }

    void plan(std::vector<std::string> files) {
        files_ = std::move(files);
        Json data = opts_;
        data.erase("out_dir");  // neither changes any output byte
        data.erase("jobs");
        Json core{{"subcommand", sub_}, {"config", data}, {"versions", versions()}, {"outputs", files_}};
        hash_ = fnv1a_hex(core.dump());
    }
    const std::string& hash() const { return hash_; }

    void write_json(const std::string& file, Json body) const {
        Json j{{"manifest", hash_}};
        for (auto& [k, v] : body.items()) j[k] = v;
        write_text(file, j.dump(1) + "\n");
    }
    void write_csv(const std::string& file, const std::string& csv) const {
        write_text(file, "# manifest=" + hash_ + "\n" + csv);
    }

    void finish() const {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
        Json m{{"hash", hash_},   {"subcommand", sub_}, {"config", opts_},
               {"seed", opts_.value("seed", Json())}, {"versions", versions()}, {"outputs", files_},
               {"wall_clock_seconds", secs}};
        write_text(sub_ + ".manifest.json", m.dump(1) + "\n");
        for (const auto& f : files_) std::cout << path(f) << "\n";
    }

private:
    void write_text(const std::string& file, const std::string& text) const {
        std::ofstream out(path(file), std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path(file));
        out << text;
    }

    std::string sub_;
    Json opts_;
    std::string out_dir_;
    std::vector<std::string> files_;
    std::string hash_;
    std::chrono::steady_clock::time_point t0_;
};

// ---- ensemble handling ------------------------------------------------------

const std::vector<std::string> kEnsembleKeys = {"ensemble", "n", "d", "alpha", "c", "p", "q", "gamma",
                                                "regular_degree", "degrees", "edge_counts", "color_gamma",
                                                "rejection_budget"};

void add_common(Command& c) {
    add(c, "config", "", "JSON file with option values");
    add(c, "seed", 1, "master seed");
    add(c, "jobs", 1, "worker threads");
    add(c, "out_dir", ".", "output directory");
    add(c, "bins", 100, "histogram bins");
}

void add_ensemble(Command& c) {
    add(c, "ensemble", "sparse_wigner", "sparse_wigner|config_model|levy|general_gamma_n|er_marked|given_edge_counts");
    add(c, "n", 1000, "matrix size");
    add(c, "d", 1.0, "mean degree");
    add(c, "alpha", 1.5, "Levy index");
    add(c, "c", 1.0, "Levy tail constant");
    add(c, "p", 0.5, "Levy positive tail weight");
    add(c, "q", nullptr, "Levy negative tail weight (default 1-p)");
    add(c, "gamma", Json{{"point_masses", {{1.0, 1.0}}}}, "mark law as JSON");
    add(c, "regular_degree", nullptr, "configuration model with constant degree");
    add(c, "degrees", nullptr, "configuration model degree sequence (JSON list)");
    add(c, "edge_counts", nullptr, "oriented edge counts per color (JSON list)");
    add(c, "color_gamma", nullptr, "mark law per color (JSON list)");
    add(c, "rejection_budget", 100000, "configuration model pairing attempts");
    add(c, "graph", "", "JSON graph file used instead of sampling");
}

EnsembleConfig ensemble_of(const Json& opts) {
    Json e = Json::object();
    for (const auto& k : kEnsembleKeys)
        if (opts.contains(k) && !opts.at(k).is_null()) e[k] = opts.at(k);
    e["seed"] = opts.at("seed");
    try {
        return ensemble_from_json(e);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what());
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("ensemble config: ") + ex.what());
    }
}

MarkedGraph graph_of(const Json& opts) {
    const auto file = get<std::string>(opts, "graph");
    if (!file.empty()) {
        try {
            return graph_from_json(parse_json(read_file(file), file));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    EnsembleConfig cfg = ensemble_of(opts);
    if (cfg.kind == EnsembleKind::er_marked) return sample_er_marked(cfg);
    if (cfg.kind == EnsembleKind::given_edge_counts) return sample_given_edge_counts(cfg);
    return from_sparse(sample_matrix(cfg));
}

// Eigenvalues, memoized under HEAVYTAIL_CACHE keyed by the sampled configuration.
std::vector<double> cached_eigenvalues(const Json& opts) {
    const char* dir = std::getenv("HEAVYTAIL_CACHE");
    std::string key;
    if (dir && *dir && get<std::string>(opts, "graph").empty()) {
        key = (fs::path(dir) / ("eig-" + fnv1a_hex(to_json(ensemble_of(opts)).dump()) + ".txt")).string();
        std::ifstream in(key);
        if (in) {
            std::vector<double> ev;
            std::string line;
            while (std::getline(in, line))
                if (!line.empty()) ev.push_back(std::strtod(line.c_str(), nullptr));
            return ev;
        }
    }
    MarkedGraph g = graph_of(opts);
    std::vector<double> ev;
    if (g.space().inv == Involution::conjugation(1)) ev = eigenvalues(to_operator_complex(g));
    else ev = eigenvalues(to_sparse_operator(g));
    if (!key.empty()) {
        fs::create_directories(fs::path(key).parent_path());
        std::ofstream out(key);
        for (double x : ev) out << format_double(x) << "\n";
    }
    return ev;
}

std::string eigen_csv(const std::vector<double>& ev) {
    std::string s = "value,weight\n";
    const std::string w = format_double(1.0 / static_cast<double>(ev.size()));
    for (double x : ev) s += format_double(x) + "," + w + "\n";
    return s;
}

Json histogram_of(const SpectralMeasure& m, const Json& opts) {
    double a, b;
    if (opts.contains("range") && !opts.at("range").is_null()) {
        a = opts.at("range").at(0).get<double>();
        b = opts.at("range").at(1).get<double>();
    } else {
        a = m.atoms().front().first;
        b = m.atoms().back().first;
        if (a == b) a -= 1, b += 1;
    }
    const int bins = get<int>(opts, "bins");
    if (bins < 1 || !(a < b)) throw ConfigError("histogram needs bins >= 1 and a nonempty range");
    return to_json(m.clipped(a, b).histogram(a, b, bins));
}

// ---- subcommands ------------------------------------------------------------

int cmd_sample(const Json& opts) {
    Run run("sample", opts);
    MarkedGraph g = graph_of(opts);
    run.plan({"sample.json"});
    run.write_json("sample.json", {{"graph", to_json(g)}});
    run.finish();
    return 0;
}

int cmd_esd(const Json& opts) {
    Run run("esd", opts);
    auto ev = cached_eigenvalues(opts);
    run.plan({"esd.csv", "esd_hist.json"});
    run.write_csv("esd.csv", eigen_csv(ev));
    run.write_json("esd_hist.json", {{"histogram", histogram_of(SpectralMeasure::uniform(ev), opts)}});
    run.finish();
    return 0;
}

int cmd_localaw(const Json& opts) {
    Run run("localaw", opts);
    const int h = get<int>(opts, "h");
    if (h < 0) throw ConfigError("h must be >= 0");
    MarkedGraph g = graph_of(opts);
    NeighborhoodLaw mu = to_float(neighborhood_distribution(g, h, Quantizer()));
    run.plan({"localaw.json"});
    run.write_json("localaw.json", {{"law", to_json(mu)}, {"invariance_defect", number(unimodularity_defect(mu))}});
    run.finish();
    return 0;
}

DegreeLaw degree_law_of(const Json& j) {
    if (!j.is_object() || j.size() != 1) throw ConfigError("degree_law: expected {poisson: l}, {dirac: k} or {pmf: [...]}");
    const auto& [k, v] = *j.items().begin();
    if (k == "poisson") return degree_poisson(v.get<double>());
    if (k == "dirac") return degree_dirac(v.get<int>());
    if (k == "pmf") return degree_from_pmf(v.get<std::vector<double>>());
    throw ConfigError("degree_law: unknown kind '" + k + "'");
}

int cmd_limits(const Json& opts) {
    Run run("limits", opts);
    const std::string tree = get<std::string>(opts, "tree");
    const int h = get<int>(opts, "h"), samples = get<int>(opts, "samples"), jobs = get<int>(opts, "jobs");
    const auto seed = get<std::uint64_t>(opts, "seed");
    SpectralMeasure L;
    Json info = Json::object();
    if (tree == "ugw") {
        const DegreeLaw pi = degree_law_of(opts.at("degree_law"));
        const MarkLaw gamma = mark_law_from_json(opts.at("gamma"));
        LimitEstimateOptions lo;
        lo.n_samples = samples;
        lo.jobs = jobs;
        lo.seed = seed;
        lo.theta = opts.at("theta").is_null() ? 0.0 : get<double>(opts, "theta");
        L = limit_esd_estimate([&](Rng& rng) { return sample_ugw({gamma}, pi, h, rng); }, lo);
        info["degree_law"] = to_json(pi);
    } else if (tree == "pwit") {
        PwitSpectrumOptions po;
        po.h = h;
        po.eps = get<double>(opts, "eps");
        po.theta = opts.at("theta").is_null() ? 0.5 : get<double>(opts, "theta");
        po.n_samples = samples;
        po.jobs = jobs;
        po.seed = seed;
        PwitSpectrumStats st;
        L = pwit_stable_spectrum(IntensityMeasure::stable(get<double>(opts, "alpha"), 0.5, 1.0), po, &st);
        info["mean_vertices"] = st.mean_vertices;
        info["mean_energy_removed"] = st.mean_energy_removed;
    } else {
        throw ConfigError("tree must be ugw or pwit");
    }
    run.plan({"limit_esd.csv", "limit_hist.json"});
    run.write_csv("limit_esd.csv", to_csv(L));
    run.write_json("limit_hist.json", {{"histogram", histogram_of(L, opts)}, {"info", info}});
    run.finish();
    return 0;
}

int cmd_traffic(const Json& opts) {
    Run run("traffic", opts);
    MarkedGraph g = graph_of(opts);
    Matrices Y = traffic_matrices(g);
    std::vector<TestGraph> tests;
    const auto dir = get<std::string>(opts, "test_graphs");
    if (!dir.empty()) {
        try {
            tests = load_test_graphs(dir);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("test graphs: ") + e.what());
        }
    } else {
        for (int k = 1; k <= get<int>(opts, "cycles"); ++k) {
            TestGraph H;
            H.vertices = k;
            for (int i = 0; i < k; ++i) H.edges.push_back({i, (i + 1) % k, 0, false});
            tests.push_back(H);
        }
    }
    Json rows = Json::array();
    for (const auto& H : tests) {
        for (const auto& e : H.edges)
            if (e.label >= static_cast<int>(Y.size())) throw ConfigError("test graph label outside the graph's labels");
        const Complex t = traffic_eval(Y, H), t0 = traffic_eval_injective(Y, H);
        rows.push_back({{"test_graph", to_json(H)}, {"tau", {number(t.real()), number(t.imag())}},
                        {"tau0", {number(t0.real()), number(t0.imag())}}});
    }
    run.plan({"traffic.json"});
    run.write_json("traffic.json", {{"labels", Y.size()}, {"n", g.n()}, {"values", rows}});
    run.finish();
    return 0;
}

std::vector<double> number_list(const Json& j) {
    if (j.is_number()) return {j.get<double>()};
    return j.get<std::vector<double>>();
}

int cmd_entropy(const Json& opts) {
    Run run("entropy", opts);
    const std::string fn = get<std::string>(opts, "functional");
    if (fn == "sweep") {
        const MarkLaw p = mark_law_from_json(opts.at("p_law")), q = mark_law_from_json(opts.at("q_law"));
        auto sweep = discretized_kl_sweep(p, q, get<double>(opts, "kappa"), number_list(opts.at("deltas")));
        run.plan({"kl_sweep.csv"});
        run.write_csv("kl_sweep.csv", to_csv(sweep));
        run.finish();
        return 0;
    }
    if (fn == "edge_tail") {
        const long long n = get<long long>(opts, "n");
        const double d = opts.at("d").is_null() ? 1.0 : number_list(opts.at("d")).at(0), delta = get<double>(opts, "delta");
        const long long N = n * (n - 1) / 2;
        const auto k = static_cast<long long>(std::ceil(delta * static_cast<double>(n) / 2));
        const double lt = binomial_log_tail(N, d / static_cast<double>(n), k);
        run.plan({"entropy.json"});
        run.write_json("entropy.json", {{"functional", fn},
                                        {"log_tail", number(lt)},
                                        {"rate", number(-lt / static_cast<double>(n))},
                                        {"edge_count_rate", number(edge_count_rate(d, delta))},
                                        {"j_d", number(j_d(d, delta))}});
        run.finish();
        return 0;
    }
    const int h = get<int>(opts, "h");
    NeighborhoodLaw mu;
    const auto law_file = get<std::string>(opts, "law");
    if (!law_file.empty()) {
        try {
            mu = law_from_json(parse_json(read_file(law_file), law_file).at("law"));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("law file: ") + e.what());
        }
    } else {
        const double lambda = get<double>(opts, "ugw_poisson");
        const DegreeLaw pi = degree_poisson(lambda, get<double>(opts, "degree_tail"));
        mu = ugw_truncated_law(MarkLaw::dirac(1.0), pi, h, 1 + pi.cap * pi.cap).law;
    }
    std::vector<double> d = opts.at("d").is_null() ? std::vector<double>{mu.mean_degree()} : number_list(opts.at("d"));
    EntropyReport r;
    if (fn == "sigma0") r = sigma0(mu, d, h);
    else if (fn == "vec_sigma0") r = vec_sigma0(edge_root(mu), d, h);
    else if (fn == "sigma_er") r = sigma_er(mu, mark_law_from_json(opts.at("gamma")), d.at(0), h);
    else throw ConfigError("functional must be sigma0, vec_sigma0, sigma_er, sweep or edge_tail");
    run.plan({"entropy.json"});
    run.write_json("entropy.json", {{"functional", fn}, {"h", h}, {"report", to_json(r)}});
    run.finish();
    return 0;
}

int cmd_verify(const Json& opts) {
    std::vector<int> ids;
    try {
        const Json& s = opts.at("suite");
        ids = suite_ids(s.is_string() ? s.get<std::string>() : s.dump());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    Run run("verify", opts);
    AcceptanceOptions ao;
    ao.jobs = get<int>(opts, "jobs");
    ao.seed = get<std::uint64_t>(opts, "seed");
    Json rows = Json::array();
    int failed = 0;
    for (int id : ids) {
        CriterionResult r = run_criterion(id, ao);
        std::cout << format_result(r) << std::endl;
        rows.push_back({{"id", r.id}, {"suite", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        failed += !r.pass;
    }
    run.plan({"verify.json"});
    run.write_json("verify.json", {{"results", rows}, {"failed", failed}});
    run.finish();
    if (failed) throw VerifyFailure{};
    return 0;
}

int cmd_report(const Json& opts) {
    Run run("report", opts);
    std::vector<fs::path> manifests;
    for (const auto& e : fs::directory_iterator(get<std::string>(opts, "out_dir"))) {
        const auto name = e.path().filename().string();
        if (name.size() > 14 && name.substr(name.size() - 14) == ".manifest.json" && name != "report.manifest.json")
            manifests.push_back(e.path());
    }
    std::sort(manifests.begin(), manifests.end());
    Json runs = Json::array();
    std::string md = "# heavytail report\n\n| subcommand | manifest | outputs |\n|---|---|---|\n";
    for (const auto& p : manifests) {
        Json m = parse_json(read_file(p.string()), p.string());
        std::string outs;
        for (const auto& o : m.at("outputs")) outs += (outs.empty() ? "" : ", ") + o.get<std::string>();
        md += "| " + m.at("subcommand").get<std::string>() + " | " + m.at("hash").get<std::string>() + " | " + outs + " |\n";
        runs.push_back({{"subcommand", m.at("subcommand")}, {"hash", m.at("hash")}, {"config", m.at("config")},
                        {"outputs", m.at("outputs")}});
    }
    run.plan({"report.json", "report.md"});
    run.write_json("report.json", {{"runs", runs}});
    std::ofstream(run.path("report.md"), std::ios::binary) << md;
    run.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heavytail: heavy-tailed random matrices as weighted graphs"};
    app.require_subcommand(1);
    std::vector<Command> cmds;
    cmds.reserve(8);
    auto make = [&](const std::string& name, const std::string& help) -> Command& {
        cmds.push_back({name, app.add_subcommand(name, help), {}, {}, {}});
        cmds.back().app->set_help_flag("--help", "print this help and exit");  // frees --h for the depth
        add_common(cmds.back());
        return cmds.back();
    };
    {
        Command& c = make("sample", "sample an ensemble and write it as a graph");
        add_ensemble(c);
    }
    {
        Command& c = make("esd", "eigenvalues of a sampled matrix");
        add_ensemble(c);
        add(c, "range", nullptr, "histogram range [a, b]");
    }
    {
        Command& c = make("localaw", "neighborhood distribution U(G)_h");
        add_ensemble(c);
        add(c, "h", 2, "depth");
    }
    {
        Command& c = make("limits", "root spectral measure of a limit tree");
        add(c, "tree", "ugw", "ugw or pwit");
        add(c, "degree_law", Json{{"poisson", 2.0}}, "UGW degree law");
        add(c, "gamma", Json{{"point_masses", {{1.0, 1.0}}}}, "UGW mark law");
        add(c, "h", 6, "depth");
        add(c, "samples", 100, "number of trees");
        add(c, "eps", 0.05, "PWIT mark threshold");
        add(c, "theta", nullptr, "energy truncation (UGW default off, PWIT default 0.5)");
        add(c, "alpha", 1.5, "stable index for PWIT");
        add(c, "range", nullptr, "histogram range [a, b]");
    }
    {
        Command& c = make("traffic", "traffic distribution of a graph");
        add_ensemble(c);
        add(c, "test_graphs", "", "directory of test graph JSON files");
        add(c, "cycles", 6, "cycle lengths 1..k when no directory is given");
    }
    {
        Command& c = make("entropy", "entropy functionals");
        add(c, "functional", "sigma_er", "sigma0|vec_sigma0|sigma_er|sweep|edge_tail");
        add(c, "law", "", "neighborhood law JSON (localaw output)");
        add(c, "ugw_poisson", 1.0, "use the exact UGW(Poisson) law with this mean");
        add(c, "degree_tail", 1e-4, "Poisson tail mass cut from the UGW degree law");
        add(c, "d", nullptr, "mean degree per color");
        add(c, "h", 2, "depth");
        add(c, "gamma", Json{{"point_masses", {{1.0, 1.0}}}}, "mark law");
        add(c, "p_law", Json{{"gaussian", {0.0, 1.0}}}, "sweep: law of X");
        add(c, "q_law", Json{{"gaussian", {1.0, 1.0}}}, "sweep: law of Y");
        add(c, "kappa", 8.0, "sweep: quantization range");
        add(c, "deltas", Json{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625}, "sweep: mesh sizes");
        add(c, "n", 2000, "edge_tail: vertices");
        add(c, "delta", 3.0, "edge_tail: target mean degree");
    }
    {
        Command& c = make("verify", "run acceptance criteria");
        add(c, "suite", "all", "criterion suite name, number or all");
    }
    make("report", "summarize manifests in the output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 2;
    }
    for (auto& c : cmds) {
        if (!c.app->parsed()) continue;
        try {
            Json opts = effective_options(c);
            if (c.name == "sample") return cmd_sample(opts);
            if (c.name == "esd") return cmd_esd(opts);
            if (c.name == "localaw") return cmd_localaw(opts);
            if (c.name == "limits") return cmd_limits(opts);
            if (c.name == "traffic") return cmd_traffic(opts);
            if (c.name == "entropy") return cmd_entropy(opts);
            if (c.name == "verify") return cmd_verify(opts);
            if (c.name == "report") return cmd_report(opts);
        } catch (const VerifyFailure&) {
            return 1;
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        } catch (const std::invalid_argument& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 0;
}
