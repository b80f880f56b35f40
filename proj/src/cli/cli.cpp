#include "pglab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "pglab/boundscalc.hpp"
#include "pglab/experiments.hpp"
#include "pglab/grouplab.hpp"

#ifndef PGLAB_VERSION
#define PGLAB_VERSION "unknown"
#endif

namespace pglab::cli {

using json = nlohmann::json;

namespace {

/// Raised for a run that finished but found nothing (exit code 2).
struct NotFound {};

std::string fmt(double x, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    return buf;
}

std::string rational_string(const BigRational& x) { return x.get_str(); }

json interval_json(const stats::Interval& iv) { return {{"hi", iv.hi}, {"lo", iv.lo}}; }

json matrix_json(const FpMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Residue x : m.row(r)) row.push_back(unsigned(x));
        rows.push_back(std::move(row));
    }
    return rows;
}

FpMatrix matrix_from_json(const json& rows, std::uint32_t p, std::size_t expect_rows, std::size_t expect_cols) {
    if (!rows.is_array() || rows.size() != expect_rows)
        throw std::invalid_argument("certificate: coefficient matrix has wrong row count");
    FpMatrix m(p, expect_rows, expect_cols);
    for (std::size_t r = 0; r < expect_rows; ++r) {
        const json& row = rows[r];
        if (!row.is_array() || row.size() != expect_cols)
            throw std::invalid_argument("certificate: coefficient row has wrong length");
        for (std::size_t c = 0; c < expect_cols; ++c) {
            auto v = row[c].get<std::uint64_t>();
            if (v >= p) throw std::invalid_argument("certificate: coefficient out of range");
            m.set(r, c, Residue(v));
        }
    }
    return m;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

void require_prime(std::uint32_t p) {
    if (!is_prime(p) || p > kMaxMatrixPrime)
        throw std::invalid_argument("--p must be a prime <= " + std::to_string(kMaxMatrixPrime));
}

/// Derives m from the mode and checks an explicit --m against it.
std::size_t mode_m(Mode mode, std::size_t n, const std::optional<std::size_t>& m_flag) {
    const std::size_t gap = mode_gap(mode);
    const std::size_t min_n = mode == Mode::AbMax ? 5 : 3;
    if (n < min_n)
        throw std::invalid_argument(std::string(to_string(mode)) + " needs n >= " + std::to_string(min_n) +
                                    " (m = n-" + std::to_string(gap) + " >= " + std::to_string(min_n - gap) + ")");
    if (m_flag && *m_flag != n - gap)
        throw std::invalid_argument(std::string(to_string(mode)) + " requires m = n-" + std::to_string(gap) + " = " +
                                    std::to_string(n - gap) + ", got m = " + std::to_string(*m_flag));
    return n - gap;
}

struct Globals {
    std::optional<std::uint64_t> guard;
    bool force = false;
    unsigned threads = 1;
    bool timing = false;
};

EnumerationGuard make_guard(const Globals& g) {
    EnumerationGuard guard;
    if (g.guard) {
        guard.limit = *g.guard;
    } else if (const char* env = std::getenv(kGuardEnv)) {
        std::string text(env);
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (text.empty() || used != text.size())
            throw std::invalid_argument(std::string(kGuardEnv) + " must be a non-negative integer");
        guard.limit = v;
    }
    guard.force = g.force;
    return guard;
}

json guard_json(const EnumerationGuard& guard) { return {{"force", guard.force}, {"limit", guard.limit}}; }

json envelope(const std::string& command, json config) {
    config["command"] = command;
    return {{"config", std::move(config)}, {"schema_version", kSchemaVersion}, {"tool_version", tool_version()}};
}

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void add_timing(json& doc, const Globals& g, const Stopwatch& sw) {
    if (g.timing) doc["timing"] = {{"wall_seconds", sw.seconds()}};
}

void emit(const std::optional<std::string>& path, const std::string& content, std::ostream& out) {
    if (path)
        write_file(*path, content);
    else
        out << content;
}

json trial_json(const TrialOutput& t) {
    return {{"bad_dim", t.bad_dim}, {"bad_found", t.bad_found}, {"n3", t.n3}, {"record", "trial"}, {"trial", t.trial}};
}

json moments_json(const MomentSummary& s) {
    json fm = json::array(), targets = json::array(), approx = json::array();
    for (double x : s.factorial_moments) fm.push_back(x);
    for (const auto& t : s.factorial_targets) {
        targets.push_back(rational_string(t));
        approx.push_back(to_double(t));
    }
    return {{"factorial_moments", fm},    {"factorial_targets", targets},
            {"factorial_targets_approx", approx}, {"mean", s.mean},
            {"mean_interval", interval_json(s.mean_interval)}, {"mean_ok", s.mean_ok},
            {"target_mean", rational_string(s.target_mean)}, {"target_mean_approx", to_double(s.target_mean)},
            {"variance", s.variance}};
}

json frequency_json(const FrequencySummary& s) {
    json j = {{"bad_interval", interval_json(s.bad_interval)},
              {"comparator", s.comparator},
              {"comparator_kind", s.comparator_kind},
              {"no_bad", s.no_bad},
              {"no_bad_interval", interval_json(s.no_bad_interval)},
              {"bad_bound", nullptr}};
    if (s.bad_bound) j["bad_bound"] = {{"approx", to_double(*s.bad_bound)}, {"exact", rational_string(*s.bad_bound)}};
    return j;
}

/// key,value rows, config first.
std::string summary_csv(const json& config_envelope, const json& summary) {
    std::string out = "key,value\n";
    auto scalar = [](const json& v) {
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    };
    std::function<void(const std::string&, const json&)> walk = [&](const std::string& prefix, const json& v) {
        if (v.is_object()) {
            for (auto it = v.begin(); it != v.end(); ++it) walk(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value());
        } else if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) walk(prefix + "." + std::to_string(i + 1), v[i]);
        } else {
            out += prefix + "," + scalar(v) + "\n";
        }
    };
    walk("", config_envelope);
    walk("summary", summary);
    return out;
}

void write_experiment(const ExperimentRecord& rec, const json& env, const json& summary,
                      const std::optional<std::string>& jsonl_path, const std::optional<std::string>& csv_path,
                      const Globals& g, const Stopwatch& sw) {
    if (jsonl_path) {
        std::string body;
        json head = env;
        head["record"] = "config";
        body += head.dump() + "\n";
        for (const auto& t : rec.outputs) body += trial_json(t).dump() + "\n";
        json tail = {{"record", "summary"}, {"summary", summary}};
        add_timing(tail, g, sw);
        body += tail.dump() + "\n";
        write_file(*jsonl_path, body);
    }
    if (csv_path) write_file(*csv_path, summary_csv(env, summary));
}

PowerMap power_map_from_json(const json& pc, std::uint32_t p, std::size_t n, std::size_t m) {
    if (pc.is_null()) return std::monostate{};
    if (p == 2) return QuadraticMap(n, matrix_from_json(pc, 2, m, n * (n + 1) / 2));
    return LinearPowerMap(matrix_from_json(pc, p, m, n));
}

json power_map_json(const PowerMap& f) {
    if (const auto* lin = std::get_if<LinearPowerMap>(&f)) return matrix_json(lin->matrix());
    if (const auto* quad = std::get_if<QuadraticMap>(&f)) return matrix_json(quad->coeff());
    return nullptr;
}

std::string provenance(const Certificate& c) {
    return "pglab " + tool_version() + " schema_version=" + std::to_string(kSchemaVersion) + " certificate mode=" +
           std::string(to_string(c.mode)) + " p=" + std::to_string(c.p) + " n=" + std::to_string(c.n) +
           " seed=" + std::to_string(c.seed) + " attempts=" + std::to_string(c.attempts) +
           " verdict=" + (c.certified ? "certified" : "exhausted");
}

}  // namespace

std::string tool_version() { return PGLAB_VERSION; }

std::string certificate_json(const Certificate& cert, const EnumerationGuard& guard) {
    json doc = {{"alt_coeffs", matrix_json(cert.b.coeff())},
                {"attempts", cert.attempts},
                {"config", {{"command", "certify"}, {"guard", guard_json(guard)}, {"max_attempts", cert.max_attempts}}},
                {"m", cert.m},
                {"mode", std::string(to_string(cert.mode))},
                {"n", cert.n},
                {"p", cert.p},
                {"power_coeffs", power_map_json(cert.f)},
                {"schema_version", kSchemaVersion},
                {"seed", cert.seed},
                {"tool_version", tool_version()},
                {"verdict", cert.certified ? "certified" : "exhausted"},
                {"witness", nullptr}};
    if (cert.witness) doc["witness"] = matrix_json(cert.witness->basis());
    return doc.dump();
}

Certificate parse_certificate(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("certificate: ") + e.what());
    }
    try {
        if (doc.at("schema_version").get<int>() != kSchemaVersion)
            throw std::invalid_argument("certificate: unsupported schema_version");
        Certificate c;
        c.p = doc.at("p").get<std::uint32_t>();
        require_prime(c.p);
        c.n = doc.at("n").get<std::size_t>();
        c.m = doc.at("m").get<std::size_t>();
        c.mode = parse_mode(doc.at("mode").get<std::string>());
        c.seed = doc.at("seed").get<std::uint64_t>();
        c.attempts = doc.at("attempts").get<std::uint64_t>();
        if (doc.contains("config") && doc["config"].contains("max_attempts"))
            c.max_attempts = doc["config"]["max_attempts"].get<std::uint64_t>();
        c.b = AlternatingMap(c.n, matrix_from_json(doc.at("alt_coeffs"), c.p, c.m, c.n * (c.n - 1) / 2));
        c.f = power_map_from_json(doc.at("power_coeffs"), c.p, c.n, c.m);
        const std::string verdict = doc.at("verdict").get<std::string>();
        if (verdict != "certified" && verdict != "exhausted")
            throw std::invalid_argument("certificate: unknown verdict '" + verdict + "'");
        c.certified = verdict == "certified";
        const json& w = doc.at("witness");
        if (!w.is_null()) {
            if (!w.is_array() || w.empty()) throw std::invalid_argument("certificate: bad witness");
            c.witness = Subspace::span(c.p, c.n, matrix_from_json(w, c.p, w.size(), c.n).row_vectors());
        }
        return c;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("certificate: ") + e.what());
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite p-group extremality toolkit", "pglab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    Globals g;
    app.add_option("--guard", g.guard, "Enumeration guard (overrides PGLAB_GUARD)");
    app.add_flag("--force", g.force, "Ignore the enumeration guard");
    app.add_option("--threads", g.threads, "Worker threads for sampled experiments")->check(CLI::Range(1u, 256u));
    app.add_flag("--timing", g.timing, "Add a timing block to output files");

    std::function<int()> action;
    auto on = [&](CLI::App* sub, std::function<int()> fn) { sub->callback([&action, fn] { action = fn; }); };

    // certify
    std::string mode_text;
    std::uint32_t p = 2;
    std::size_t n = 0;
    std::optional<std::size_t> m_flag;
    std::uint64_t seed = 0, max_attempts = 50, trials = 1000;
    std::optional<std::string> out_path, summary_path, in_path;

    auto* certify = app.add_subcommand("certify", "Sample (B, F) until no bad subspace is left");
    certify->add_option("--mode", mode_text, "abmax or dmax")->required()->check(CLI::IsMember({"abmax", "dmax"}));
    certify->add_option("--p", p, "Prime")->required();
    certify->add_option("--n", n, "dim V")->required();
    certify->add_option("--m", m_flag, "dim W (checked against the mode)");
    certify->add_option("--seed", seed, "Master seed");
    certify->add_option("--max-attempts", max_attempts, "Attempts before giving up")->check(CLI::PositiveNumber);
    certify->add_option("--out", out_path, "Certificate JSON (stdout if absent)");
    on(certify, [&] {
        require_prime(p);
        Mode mode = parse_mode(mode_text);
        mode_m(mode, n, m_flag);
        SearchOptions opts;
        opts.guard = make_guard(g);
        Certificate cert = certify_loop(p, n, mode, seed, max_attempts, opts);
        emit(out_path, certificate_json(cert, opts.guard) + "\n", out);
        if (out_path)
            out << "certify " << to_string(mode) << " p=" << p << " n=" << n << " seed=" << seed << ": "
                << (cert.certified ? "certified" : "exhausted") << " after " << cert.attempts << " attempt(s)\n";
        return cert.certified ? kExitOk : kExitNotFound;
    });

    // bounds
    std::optional<std::string> only_text;
    auto* bounds = app.add_subcommand("bounds", "Exact verification of the appendix inequalities");
    bounds->add_option("--only", only_text, "A1, A2, A3 or A4")->check(CLI::IsMember({"A1", "A2", "A3", "A4"}));
    bounds->add_option("--out", out_path, "CSV report (stdout if absent)");
    on(bounds, [&] {
        Stopwatch sw;
        std::optional<bounds::BoundId> only;
        if (only_text) only = bounds::parse_bound_id(*only_text);
        auto report = bounds::verify_appendix_A1(only);
        std::string head = "# pglab bounds schema_version=" + std::to_string(kSchemaVersion) +
                           " tool_version=" + tool_version() + " only=" + (only_text ? *only_text : "all") + "\n";
        emit(out_path, head + bounds::report_csv(report), out);
        std::size_t passed = 0;
        const bounds::BoundItem* worst = nullptr;
        for (const auto& item : report.items) {
            passed += item.pass;
            if (!worst || item.value > worst->value) worst = &item;
        }
        if (out_path) {
            out << "bounds: " << passed << "/" << report.items.size() << " items below 1";
            if (worst)
                out << ", max " << to_scientific(worst->value) << " at " << bounds::to_string(worst->id)
                    << " p=" << worst->p << " n=" << worst->n;
            if (g.timing) out << " (" << fmt(sw.seconds(), 3) << " s)";
            out << "\n";
        }
        return report.all_pass ? kExitOk : kExitNotFound;
    });

    // moments
    unsigned k_max = 3;
    auto* moments = app.add_subcommand("moments", "Sampled factorial moments of N_3 at m = n-3");
    moments->add_option("--p", p, "Prime")->required();
    moments->add_option("--n", n, "dim V")->required();
    moments->add_option("--m", m_flag, "dim W (must be n-3)");
    moments->add_option("--trials", trials, "Number of sampled maps")->check(CLI::PositiveNumber);
    moments->add_option("--kmax", k_max, "Highest factorial moment")->check(CLI::Range(1u, 8u));
    moments->add_option("--seed", seed, "Master seed");
    moments->add_option("--out", out_path, "JSONL with config, trials and summary");
    moments->add_option("--summary", summary_path, "Summary CSV");
    on(moments, [&] {
        Stopwatch sw;
        require_prime(p);
        if (n < 3) throw std::invalid_argument("moments needs n >= 3");
        if (m_flag && *m_flag != n - 3) throw std::invalid_argument("moments requires m = n-3");
        RunOptions opts;
        opts.search.guard = make_guard(g);
        opts.threads = g.threads;
        auto rec = run_moments(p, n, trials, k_max, seed, opts);
        json env = envelope("moments", {{"guard", guard_json(opts.search.guard)}, {"kmax", k_max}, {"m", n - 3},
                                        {"n", n}, {"p", p}, {"seed", seed}, {"trials", trials}});
        json summary = moments_json(*rec.moments);
        write_experiment(rec, env, summary, out_path, summary_path, g, sw);
        const auto& s = *rec.moments;
        out << "moments p=" << p << " n=" << n << " m=" << n - 3 << " trials=" << trials << " seed=" << seed << "\n"
            << "mean N3 = " << fmt(s.mean) << ", target " << rational_string(s.target_mean) << " = "
            << fmt(to_double(s.target_mean)) << ", 99% interval [" << fmt(s.mean_interval.lo) << ", "
            << fmt(s.mean_interval.hi) << "] " << (s.mean_ok ? "contains" : "misses") << " the mean\n";
        for (std::size_t k = 0; k < s.factorial_moments.size(); ++k)
            out << "E[(N3)_" << k + 1 << "] = " << fmt(s.factorial_moments[k]) << " (target "
                << fmt(to_double(s.factorial_targets[k])) << ")\n";
        return kExitOk;
    });

    // frequency
    auto* frequency = app.add_subcommand("frequency", "Sampled frequency of maps without bad subspaces");
    frequency->add_option("--mode", mode_text, "abmax or dmax")->required()->check(CLI::IsMember({"abmax", "dmax"}));
    frequency->add_option("--p", p, "Prime")->required();
    frequency->add_option("--n", n, "dim V")->required();
    frequency->add_option("--m", m_flag, "dim W (checked against the mode)");
    frequency->add_option("--trials", trials, "Number of sampled maps")->check(CLI::PositiveNumber);
    frequency->add_option("--seed", seed, "Master seed");
    frequency->add_option("--out", out_path, "JSONL with config, trials and summary");
    frequency->add_option("--summary", summary_path, "Summary CSV");
    on(frequency, [&] {
        Stopwatch sw;
        require_prime(p);
        Mode mode = parse_mode(mode_text);
        std::size_t m = mode_m(mode, n, m_flag);
        RunOptions opts;
        opts.search.guard = make_guard(g);
        opts.threads = g.threads;
        auto rec = run_no_bad_frequency(p, n, mode, trials, seed, opts);
        json env = envelope("frequency", {{"guard", guard_json(opts.search.guard)}, {"m", m}, {"mode", mode_text},
                                          {"n", n}, {"p", p}, {"seed", seed}, {"trials", trials}});
        json summary = frequency_json(*rec.frequency);
        write_experiment(rec, env, summary, out_path, summary_path, g, sw);
        const auto& s = *rec.frequency;
        out << "frequency " << mode_text << " p=" << p << " n=" << n << " m=" << m << " trials=" << trials
            << " seed=" << seed << "\n"
            << "no bad subspace: " << s.no_bad << "/" << trials << ", 99% interval [" << fmt(s.no_bad_interval.lo)
            << ", " << fmt(s.no_bad_interval.hi) << "], " << s.comparator_kind << " = " << fmt(s.comparator) << "\n";
        return kExitOk;
    });

    // exhaustive
    std::size_t m_req = 0;
    std::uint64_t limit = kDefaultExhaustiveLimit;
    auto* exhaustive = app.add_subcommand("exhaustive", "N_3 over every alternating map of a tiny shape");
    exhaustive->add_option("--p", p, "Prime")->required();
    exhaustive->add_option("--n", n, "dim V")->required();
    exhaustive->add_option("--m", m_req, "dim W")->required();
    exhaustive->add_option("--limit", limit, "Largest number of maps to walk");
    exhaustive->add_option("--out", out_path, "JSON result");
    on(exhaustive, [&] {
        Stopwatch sw;
        require_prime(p);
        if (n < 3) throw std::invalid_argument("exhaustive needs n >= 3");
        SearchOptions opts;
        opts.guard = make_guard(g);
        auto r = exhaustive_tiny(p, n, m_req, limit, opts);
        out << "exhaustive p=" << p << " n=" << n << " m=" << m_req << " maps=" << r.maps << "\n";
        out << "N3 maps\n";
        json dist = json::object();
        for (auto [k, c] : r.n3_distribution) {
            out << k << " " << c << "\n";
            dist[std::to_string(k)] = c;
        }
        out << "E[N3] = " << rational_string(r.mean_n3) << " (closed form " << rational_string(r.closed_form_mean)
            << ", " << (r.mean_n3 == r.closed_form_mean ? "equal" : "DIFFERENT") << ")\n";
        out << "surjective = " << r.surjective << ", surjective with N3 = 0: " << r.surjective_without_n3
            << ", no bad subspace: " << r.no_bad << "\n";
        if (out_path) {
            json doc = envelope("exhaustive", {{"guard", guard_json(opts.guard)}, {"limit", limit}, {"m", m_req},
                                               {"n", n}, {"p", p}});
            doc["result"] = {{"closed_form_mean", rational_string(r.closed_form_mean)},
                             {"maps", r.maps},
                             {"mean_n3", rational_string(r.mean_n3)},
                             {"min_n3_surjective", r.min_n3_surjective ? json(*r.min_n3_surjective) : json(nullptr)},
                             {"n3_distribution", dist},
                             {"no_bad", r.no_bad},
                             {"surjective", r.surjective},
                             {"surjective_without_n3", r.surjective_without_n3}};
            add_timing(doc, g, sw);
            write_file(*out_path, doc.dump() + "\n");
        }
        return kExitOk;
    });

    // lemma-p7
    std::uint64_t lemma_trials = 0;
    std::uint32_t lemma_p = 2;
    auto* lemma = app.add_subcommand("lemma-p7", "Surjective maps F_p^5 ^ F_p^5 -> F_p^2 have isotropic 3-spaces");
    lemma->add_option("--p", lemma_p, "Prime (2 is exhaustive, odd p is sampled)");
    lemma->add_option("--trials", lemma_trials, "Samples for odd p");
    lemma->add_option("--seed", seed, "Master seed for odd p");
    lemma->add_option("--out", out_path, "JSON result");
    on(lemma, [&] {
        require_prime(lemma_p);
        if (lemma_p != 2 && lemma_trials == 0) throw std::invalid_argument("lemma-p7 with odd p needs --trials");
        auto r = verify_lemma_p7(lemma_p, lemma_trials, seed);
        out << "lemma-p7 p=" << lemma_p << (r.exhaustive ? " exhaustive" : " sampled") << ": scanned " << r.scanned
            << ", surjective " << r.surjective << ", " << r.counterexamples << " counterexamples\n";
        if (out_path) {
            json doc = envelope("lemma-p7", {{"p", lemma_p}, {"seed", seed}, {"trials", lemma_trials}});
            doc["result"] = {{"counterexamples", r.counterexamples},
                             {"exhaustive", r.exhaustive},
                             {"min_n3_surjective", r.min_n3_surjective ? json(*r.min_n3_surjective) : json(nullptr)},
                             {"scanned", r.scanned},
                             {"surjective", r.surjective}};
            write_file(*out_path, doc.dump() + "\n");
        }
        return r.holds() ? kExitOk : kExitNotFound;
    });

    // wedge-lemma
    std::size_t k = 2;
    auto* wedge = app.add_subcommand("wedge-lemma", "Randomised check of dim sum H_i^H_i against dim sum H_i");
    wedge->add_option("--p", p, "Prime")->required();
    wedge->add_option("--n", n, "dim V")->required();
    wedge->add_option("--k", k, "Number of 3-spaces")->required()->check(CLI::PositiveNumber);
    wedge->add_option("--trials", trials, "Random tuples");
    wedge->add_option("--seed", seed, "Master seed");
    wedge->add_option("--out", out_path, "JSON result");
    on(wedge, [&] {
        require_prime(p);
        auto r = wedge_lemma_property(p, n, k, trials, seed);
        out << "wedge-lemma p=" << p << " n=" << n << " k=" << k << " trials=" << trials << ": " << r.violations
            << " violations (" << r.equality_cases << " equality, " << r.strict_cases << " strict)\n";
        if (out_path) {
            json doc = envelope("wedge-lemma", {{"k", k}, {"n", n}, {"p", p}, {"seed", seed}, {"trials", trials}});
            doc["result"] = {{"equality_cases", r.equality_cases},
                             {"strict_cases", r.strict_cases},
                             {"violations", r.violations}};
            write_file(*out_path, doc.dump() + "\n");
        }
        return r.violations == 0 ? kExitOk : kExitNotFound;
    });

    // quad-search
    std::vector<std::size_t> ns{3, 4, 5, 6};
    std::uint64_t quad_attempts = 10000;
    auto* quad = app.add_subcommand("quad-search", "Search for quadratic F: F_2^n -> F_2^(n-2) without bad subspaces");
    quad->add_option("--n", ns, "One or more n values")->expected(1, -1);
    quad->add_option("--max-attempts", quad_attempts, "Attempts per n")->check(CLI::PositiveNumber);
    quad->add_option("--seed", seed, "Master seed");
    quad->add_option("--out", out_path, "JSON result");
    on(quad, [&] {
        json results = json::array();
        bool all = true;
        for (std::size_t qn : ns) {
            auto r = quadratic_search(qn, quad_attempts, seed);
            bool ok = r.found && r.reverified;
            all = all && ok;
            out << "quad-search n=" << qn << ": " << (r.found ? "found" : "not found") << " after " << r.attempts
                << " attempt(s)" << (r.found ? (r.reverified ? ", certifier agrees" : ", certifier DISAGREES") : "")
                << "\n";
            results.push_back({{"attempts", r.attempts},
                               {"found", r.found.has_value()},
                               {"n", qn},
                               {"q_coeffs", r.found ? matrix_json(r.found->coeff()) : json(nullptr)},
                               {"reverified", r.reverified}});
        }
        if (out_path) {
            json doc = envelope("quad-search", {{"max_attempts", quad_attempts}, {"n", ns}, {"seed", seed}});
            doc["results"] = results;
            write_file(*out_path, doc.dump() + "\n");
        }
        return all ? kExitOk : kExitNotFound;
    });

    // present
    std::string format = "text";
    auto* present = app.add_subcommand("present", "Presentation of the group attached to a certificate");
    present->add_option("--in", in_path, "Certificate JSON")->required();
    present->add_option("--format", format, "text or cas")->check(CLI::IsMember({"text", "cas"}));
    present->add_option("--out", out_path, "Output file (stdout if absent)");
    on(present, [&] {
        Certificate c = parse_certificate(read_file(*in_path));
        auto check = c.mode == Mode::AbMax ? SurjectivityCheck::ImageOfB : SurjectivityCheck::ImageOfBAndF;
        Presentation pres = presentation(c.b, c.f, check);
        pres.provenance = provenance(c);
        emit(out_path, format == "cas" ? export_cas(pres) : export_text(pres), out);
        return kExitOk;
    });

    // audit
    bool symplectic = false;
    std::uint64_t cap = kDefaultAuditOrderCap;
    auto* audit = app.add_subcommand("audit", "Subgroup-by-subgroup ab-maximality check in the Baer model");
    auto* audit_in = audit->add_option("--in", in_path, "Ab-max certificate JSON (odd p)");
    auto* audit_sym = audit->add_flag("--symplectic", symplectic, "Use the standard symplectic form with m = 1");
    audit_in->excludes(audit_sym);
    audit->add_option("--p", p, "Prime (with --symplectic)");
    audit->add_option("--n", n, "dim V, even (with --symplectic)");
    audit->add_option("--cap", cap, "Largest group order to materialise");
    audit->add_option("--out", out_path, "JSON result");
    on(audit, [&] {
        AlternatingMap b(3, 0, 0);
        json source;
        if (in_path) {
            Certificate c = parse_certificate(read_file(*in_path));
            if (c.mode != Mode::AbMax || c.p == 2 || !std::holds_alternative<std::monostate>(c.f))
                throw std::invalid_argument("audit needs an odd-p abmax certificate with F = 0");
            b = c.b;
            source = {{"certificate_seed", c.seed}, {"kind", "certificate"}};
        } else if (symplectic) {
            require_prime(p);
            if (p == 2) throw std::invalid_argument("audit needs odd p");
            b = AlternatingMap::standard_symplectic(p, n);
            source = {{"kind", "symplectic"}, {"n", n}, {"p", p}};
        } else {
            throw std::invalid_argument("audit needs --in or --symplectic");
        }
        AuditResult r = audit_abmax(b, cap);
        SearchOptions opts;
        opts.guard = make_guard(g);
        auto rep = find_bad_subspace(b, std::monostate{}, Mode::AbMax, opts);
        bool linear_ok = rep.exhaustive && !rep.witness;
        bool agree = (r.ab_maximal && is_surjective(b)) == linear_ok;
        out << "audit p=" << b.p() << " n=" << b.n() << " m=" << b.m() << ": order " << r.order << ", "
            << r.subgroups << " subgroups, |G:G'| = " << r.abelianization_index << ", max proper |H:H'| = "
            << r.max_proper_index << ", " << (r.ab_maximal ? "ab-maximal" : "not ab-maximal")
            << (agree ? " (certifier agrees)" : " (certifier DISAGREES)") << "\n";
        if (out_path) {
            json doc = envelope("audit", {{"cap", cap}, {"source", source}});
            doc["result"] = {{"ab_maximal", r.ab_maximal},
                             {"abelianization_index", r.abelianization_index},
                             {"agrees_with_certifier", agree},
                             {"derived_order", r.derived_order},
                             {"max_proper_index", r.max_proper_index},
                             {"order", r.order},
                             {"subgroups", r.subgroups},
                             {"violations", r.violations}};
            write_file(*out_path, doc.dump() + "\n");
        }
        if (!agree) return kExitUsage;
        return r.ab_maximal ? kExitOk : kExitNotFound;
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        return action ? action() : kExitUsage;
    } catch (const GuardExceeded& e) {
        err << "pglab: guard exceeded: " << e.what() << " (raise --guard or " << kGuardEnv << ")\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "pglab: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace pglab::cli
