#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <new>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "emit.hpp"
#include "grimm/grimm.hpp"
#include "json.hpp"

namespace grimm::cli {
namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integers accept digit separators and exact scientific notation: 10_000_000, 1e7.
std::uint64_t parse_u64(const std::string& name, std::string s) {
    std::erase(s, '_');
    if (s.empty() || s[0] == '-') throw UsageError("--" + name + ": expected a non-negative integer, got '" + s + "'");
    try {
        std::size_t pos = 0;
        if (s.find_first_of(".eE") == std::string::npos) {
            auto v = std::stoull(s, &pos);
            if (pos == s.size()) return v;
        } else {
            long double v = std::stold(s, &pos);
            if (pos == s.size() && v >= 0 && v < 1.8e19L && std::floor(v) == v) return static_cast<std::uint64_t>(v);
        }
    } catch (const std::logic_error&) {
    }
    throw UsageError("--" + name + ": expected a non-negative integer, got '" + s + "'");
}

double parse_double(const std::string& name, std::string s) {
    std::erase(s, '_');
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos == s.size() && std::isfinite(v)) return v;
    } catch (const std::logic_error&) {
    }
    throw UsageError("--" + name + ": expected a number, got '" + s + "'");
}

std::string join(const std::vector<std::uint64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(v[i]);
    }
    return s;
}

struct ParamSpec {
    std::string name;
    std::string def;  // empty: optional with no default
    std::string help;
    bool required = false;
    bool flag = false;
};

// Effective flag values for one invocation, as text.
class Params {
public:
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;

    bool has(const std::string& k) const {
        auto it = values.find(k);
        return it != values.end() && !it->second.empty();
    }
    std::uint64_t u64(const std::string& k) const { return parse_u64(k, get(k)); }
    double dbl(const std::string& k) const { return parse_double(k, get(k)); }
    // Empty when unset.
    std::string str(const std::string& k) const { return values.at(k); }
    bool flag(const std::string& k) const { return flags.at(k); }

private:
    const std::string& get(const std::string& k) const {
        auto it = values.find(k);
        if (it == values.end() || it->second.empty()) throw UsageError("missing --" + k);
        return it->second;
    }
};

struct Context {
    const Params& p;
    Emitter& emit;
    std::ostream& err;
    unsigned workers = 1;
    std::optional<std::uint64_t> table_override;
    std::uint64_t table_limit = 0;  // recorded in the manifest

    // Sieves up to `required`, or to the override if one was given.
    PrimeTable table(std::uint64_t required) {
        required = std::max(required, PrimeTable::min_limit);
        std::uint64_t limit = required;
        if (table_override) {
            if (*table_override < required)
                throw UsageError("table limit " + std::to_string(*table_override) + " is below the " +
                                 std::to_string(required) + " this command needs");
            limit = *table_override;
        }
        if (limit > PrimeTable::max_limit)
            throw UsageError("required table limit " + std::to_string(limit) + " exceeds " +
                             std::to_string(PrimeTable::max_limit));
        table_limit = limit;
        return PrimeTable::build(limit, PrimeTable::default_segment_size, workers);
    }
};

using Handler = std::function<int(Context&)>;

struct Command {
    std::string name;
    std::string help;
    std::vector<ParamSpec> params;
    Handler fn;
};

// Table size needed to run the g / g1 searches for every n' <= n.
std::uint64_t search_table_limit(std::uint64_t n) { return isqrt(n + search_cap(n) + 512) + 1; }

int cmd_g(Context& c, bool prefix_union) {
    const auto n0 = c.p.u64("n");
    const auto n1 = c.p.has("to") ? c.p.u64("to") : n0;
    if (n0 < 2 || n1 < n0) throw UsageError("need 2 <= n <= to");
    auto table = c.table(search_table_limit(n1));
    const char* col = prefix_union ? "g1" : "g";
    c.emit.header({"n", col});
    auto vals = parallel_map(static_cast<std::size_t>(n1 - n0 + 1), c.workers, [&](std::size_t i) {
        return prefix_union ? g1(n0 + i, table) : g(n0 + i, table);
    });
    for (std::size_t i = 0; i < vals.size(); ++i) c.emit.row({n0 + i, vals[i]});
    return exit_ok;
}

int cmd_represent(Context& c) {
    const auto n = c.p.u64("n"), k = c.p.u64("k");
    auto table = c.table(isqrt(n + k) + 1);
    auto r = has_representation(n, k, table);
    c.emit.header({"n", "k", "status", "assignment", "witness"});
    c.emit.row({n, k, std::string(to_string(r.status)), join(r.assignment), join(r.hall_witness)});
    return exit_ok;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

void write_json_atomic(const std::string& path, const json& doc) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw UsageError("cannot write " + path);
        out << doc.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

int cmd_verify_grimm(Context& c) {
    const auto limit = c.p.u64("limit");
    VerifyOptions opt;
    opt.start = c.p.u64("start");
    opt.workers = c.workers;
    const std::string ckpt = c.p.str("checkpoint");

    GrimmVerifySummary prior;
    if (c.p.flag("resume")) {
        if (ckpt.empty()) throw UsageError("--resume needs --checkpoint");
        if (std::filesystem::exists(ckpt)) {
            auto doc = read_json(ckpt);
            if (doc.at("limit").get<std::uint64_t>() != limit)
                throw UsageError("checkpoint was written for a different --limit");
            opt.start = doc.at("resume_from").get<std::uint64_t>();
            prior.runs = doc.at("runs");
            prior.failures = doc.at("failures");
            prior.longest_run = doc.at("longest_run");
            prior.longest_run_prime = doc.at("longest_run_prime");
        }
    }
    if (!ckpt.empty()) {
        opt.on_progress = [&](std::uint64_t resume_from, const GrimmVerifySummary& s) {
            json doc;
            doc["limit"] = limit;
            doc["resume_from"] = resume_from;
            doc["runs"] = prior.runs + s.runs;
            doc["failures"] = prior.failures + s.failures;
            const bool longer = s.longest_run > prior.longest_run;
            doc["longest_run"] = longer ? s.longest_run : prior.longest_run;
            doc["longest_run_prime"] = longer ? s.longest_run_prime : prior.longest_run_prime;
            write_json_atomic(ckpt, doc);
        };
    }

    auto table = c.table(limit);
    const bool all = c.p.flag("emit-runs");
    c.emit.header({"p", "k", "status", "witness"});
    auto s = verify_grimm(table, limit, [&](const GrimmRunReport& r) {
        if (all || !r.result.representable())
            c.emit.row({r.p, r.k, std::string(to_string(r.result.status)), join(r.result.hall_witness)});
    }, opt);

    const bool longer = s.longest_run > prior.longest_run;
    const std::uint64_t failures = prior.failures + s.failures;
    c.emit.summary({{"runs", prior.runs + s.runs},
                    {"failures", failures},
                    {"longest_run", longer ? s.longest_run : prior.longest_run},
                    {"longest_run_prime", longer ? s.longest_run_prime : prior.longest_run_prime}});
    return failures ? exit_found : exit_ok;
}

int cmd_gap_scan(Context& c) {
    const auto limit = c.p.u64("limit");
    auto table = c.table(limit);
    const bool all = c.p.flag("emit-records");
    c.emit.header({"p", "next_p", "gap", "cramer_bound", "violation"});
    std::uint64_t records = 0, violations = 0;
    GapRecord largest{};
    gap_scan(table, limit, [&](const GapRecord& r) {
        ++records;
        if (r.gap > largest.gap) largest = r;
        if (r.violates()) ++violations;
        if (all || r.violates()) c.emit.row({r.p, r.next_p, r.gap, r.cramer_bound, r.violates()});
    });
    c.emit.summary({{"records", records},
                    {"violations", violations},
                    {"max_gap", largest.gap},
                    {"max_gap_prime", largest.p}});
    return violations ? exit_found : exit_ok;
}

int cmd_dusart_check(Context& c) {
    const auto limit = c.p.u64("limit");
    const auto kmax = c.p.u64("stirling-kmax");
    auto table = c.table(limit);
    auto d = check_dusart(table, limit);
    auto s = check_stirling(kmax);
    auto first = [](const std::vector<std::uint64_t>& v) { return v.empty() ? Cell{} : Cell{v.front()}; };
    c.emit.header({"check", "range_max", "violations", "first_violation", "extreme", "extreme_at"});
    c.emit.row({std::string("pi_upper"), limit, std::uint64_t{d.pi_violations.size()}, first(d.pi_violations),
                d.max_pi_ratio, Cell{}});
    c.emit.row({std::string("theta_upper"), limit, std::uint64_t{d.theta_violations.size()},
                first(d.theta_violations), d.max_theta_ratio, d.argmax_theta_ratio});
    c.emit.row({std::string("stirling_lower"), kmax, std::uint64_t{s.violations.size()}, first(s.violations),
                s.min_margin, Cell{}});
    return d.ok() && s.violations.empty() ? exit_ok : exit_found;
}

int cmd_psi(Context& c) {
    const auto x = c.p.u64("x");
    const double y = c.p.dbl("y");
    if (x > psi_global_max) throw UsageError("psi: x above " + std::to_string(psi_global_max));
    auto table = c.table(isqrt(x) + 1);
    c.emit.header({"x", "y", "psi"});
    c.emit.row({x, y, psi(x, y, table)});
    return exit_ok;
}

// Window parameters: explicit --z/--y, or --alpha meaning y = x^alpha and z = floor(x^alpha).
std::pair<std::uint64_t, double> window_params(const Params& p, std::uint64_t x) {
    if (p.has("alpha")) {
        const double a = p.dbl("alpha");
        if (!(a > 0.0 && a < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
        const double y = std::pow(static_cast<double>(x), a);
        return {p.has("z") ? p.u64("z") : floor_power(x, a), p.has("y") ? p.dbl("y") : y};
    }
    return {p.u64("z"), p.dbl("y")};
}

int cmd_psi_window(Context& c) {
    const auto x = c.p.u64("x");
    auto [z, y] = window_params(c.p, x);
    auto table = c.table(std::max(isqrt(x + z) + 1, floor_to_u64(y)));
    auto w = psi_window(x, z, y, table);
    c.emit.header({"x", "z", "y", "count", "pi_y", "bound_established", "first_smooth", "last_smooth"});
    auto opt = [](const std::optional<std::uint64_t>& v) { return v ? Cell{*v} : Cell{}; };
    c.emit.row({w.x, w.z, w.y, w.count, w.pi_y, w.bound_established, opt(w.first_smooth), opt(w.last_smooth)});
    return exit_ok;
}

int cmd_grimm_bound(Context& c) {
    const auto x = c.p.u64("x");
    auto [z, y] = window_params(c.p, x);
    auto table = c.table(std::max(isqrt(x + z) + 1, floor_to_u64(y)));
    auto w = psi_window(x, z, y, table);
    c.emit.header({"x", "z", "y", "smooth_count", "pi_y", "established", "g_below", "n_first", "n_last"});
    if (w.bound_established)
        c.emit.row({x, z, y, w.count, w.pi_y, true, z, *w.first_smooth, *w.last_smooth});
    else
        c.emit.row({x, z, y, w.count, w.pi_y, false, Cell{}, Cell{}, Cell{}});
    return exit_ok;
}

int cmd_rho(Context& c) {
    const double step = c.p.dbl("step");
    double t_max = c.p.dbl("t-max");
    if (c.p.has("t")) t_max = std::max(t_max, std::ceil(c.p.dbl("t")));
    auto tab = build_rho_table(t_max, step);
    c.emit.header({"t", "rho"});
    if (c.p.flag("export")) {
        const auto every = std::max<std::uint64_t>(1, c.p.u64("every"));
        for (std::size_t i = 0; i < tab.values.size(); i += every)
            c.emit.row({static_cast<double>(i) * tab.step, tab.values[i]});
    }
    if (c.p.has("t")) {
        const double t = c.p.dbl("t");
        c.emit.row({t, rho(t, tab)});
    }
    c.emit.summary({{"step", tab.step}, {"t_max", tab.t_max}, {"self_consistency", tab.max_self_consistency_error}});
    return exit_ok;
}

int cmd_exceptional_scan(Context& c) {
    const auto X = c.p.u64("X");
    const double eps = c.p.dbl("eps");
    if (!(eps > 0.0 && eps < 0.5)) throw UsageError("--eps must lie in (0, 1/2)");
    double c0;
    if (c.p.has("c0")) {
        c0 = c.p.dbl("c0");
    } else {
        auto tab = build_rho_table(std::max(20.0, std::ceil(1.0 / eps) + 1.0));
        c0 = default_c0(eps, tab);
    }
    const double top = std::pow(static_cast<double>(X), eps);
    auto table = c.table(isqrt(X + floor_to_u64(top) + 1) + 1);
    auto r = exceptional_scan(X, eps, c0, table, c.p.u64("stride"), c.workers);
    c.emit.header({"X", "eps", "c0", "stride", "sampled", "degenerate", "failures", "failure_fraction",
                   "min_ratio", "argmin_ratio"});
    c.emit.row({r.X, r.eps, r.c0, r.stride, r.sampled, r.degenerate, r.failures, r.failure_fraction,
                r.sampled ? Cell{r.min_ratio} : Cell{}, r.sampled ? Cell{r.argmin_ratio} : Cell{}});
    return exit_ok;
}

int cmd_ram_sum(Context& c) {
    const auto x = c.p.u64("x");
    double alpha;
    std::optional<double> delta_target;
    if (c.p.has("lambda")) {
        const double lambda = c.p.dbl("lambda");
        alpha = alpha_of_lambda(lambda);
        delta_target = delta_of_lambda(lambda, c.p.dbl("eps-prime"));
    } else {
        alpha = c.p.dbl("alpha");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
    const long double w = std::pow(static_cast<long double>(x), static_cast<long double>(alpha));
    auto table = c.table(static_cast<std::uint64_t>(std::floor(static_cast<long double>(x) + w)) + 1);
    auto r = ram_sum(x, alpha, table, c.workers);
    c.emit.header({"x", "alpha", "sum", "normalized", "heuristic", "delta_target", "meets_target"});
    c.emit.row({r.x, r.alpha, r.sum, r.normalized, r.heuristic, delta_target ? Cell{*delta_target} : Cell{},
                delta_target ? Cell{r.normalized >= *delta_target} : Cell{}});
    return exit_ok;
}

int cmd_rd(Context& c) {
    const auto x = c.p.u64("x"), R = c.p.u64("R"), S = c.p.u64("S"), d = c.p.u64("d");
    const double alpha = c.p.dbl("alpha");
    c.emit.header({"x", "alpha", "R", "S", "d", "r_d"});
    c.emit.row({x, alpha, R, S, d, r_d(x, alpha, R, S, d)});
    return exit_ok;
}

int cmd_phi_sum(Context& c) {
    const auto V = c.p.u64("V"), V1 = c.p.u64("V1");
    const double eta = c.p.dbl("eta");
    c.emit.header({"V", "V1", "eta", "phi_sum"});
    c.emit.row({V, V1, eta, phi_sum(V, V1, eta)});
    return exit_ok;
}

int cmd_exponents(Context& c) {
    const double eps_prime = c.p.dbl("eps-prime");
    std::vector<double> lambdas;
    if (c.p.has("lambda")) lambdas.push_back(c.p.dbl("lambda"));
    const auto grid = c.p.u64("grid");
    for (std::uint64_t i = 0; i < grid; ++i)
        lambdas.push_back(lambda_min + (static_cast<double>(i) + 0.5) * (lambda_max - lambda_min) /
                                           static_cast<double>(grid));
    if (lambdas.empty()) lambdas.push_back(1.0 / 30.0);

    c.emit.header({"lambda", "eps_prime", "alpha", "delta", "gamma", "alpha1", "alpha1_quartic"});
    for (double l : lambdas) {
        auto r = exponent_report(l, eps_prime);
        c.emit.row({r.lambda, r.eps_prime, r.alpha, r.delta, r.gamma, r.alpha1 ? Cell{*r.alpha1} : Cell{},
                    alpha1_quartic(r.alpha)});
    }

    const Rational lam(1, 30);
    const Rational gam = gamma_theorem4(alpha_of_lambda(lam), delta_of_lambda(lam));
    std::ostringstream exact;
    exact << gam.numerator() << '/' << gam.denominator();
    std::vector<std::pair<std::string, Cell>> kv{
        {"gamma_exact_at_1_30", exact.str()},
        {"gamma_exact_matches_1_2_minus_1_390", gam == Rational(1, 2) - Rational(1, 390)},
        {"alpha1_at_1_3", alpha1_heuristic(1.0 / 3.0)},
        {"alpha1_quartic_at_1_3", alpha1_quartic(1.0 / 3.0)},
        {"alpha1_quoted", 0.4567}};
    if (c.p.flag("alpha1-scan")) {
        auto s = scan_alpha1();
        kv.insert(kv.end(), {{"scan_argmin_alpha1", s.argmin_alpha1},
                             {"scan_min_alpha1", s.min_alpha1},
                             {"scan_argmin_branch", s.argmin_branch},
                             {"scan_min_branch", s.min_branch},
                             {"scan_argmin_quartic", s.argmin_quartic},
                             {"scan_min_quartic", s.min_quartic}});
    }
    c.emit.summary(kv);
    return exit_ok;
}

const std::vector<Command>& commands() {
    static const std::vector<Command> cmds = {
        {"g", "g(n): largest k with a prime representation of n+1..n+k",
         {{"n", "", "n >= 2", true}, {"to", "", "emit every n' in [n, to]"}},
         [](Context& c) { return cmd_g(c, false); }},
        {"g1", "g1(n): largest k with |union of prime sets of n+1..n+l| >= l for all l <= k",
         {{"n", "", "n >= 2", true}, {"to", "", "emit every n' in [n, to]"}},
         [](Context& c) { return cmd_g(c, true); }},
        {"represent", "decide whether n+1..n+k has distinct prime divisors",
         {{"n", "", "", true}, {"k", "", "", true}},
         cmd_represent},
        {"verify-grimm", "check every composite run between consecutive primes up to a limit",
         {{"limit", "", "", true},
          {"start", "2", "first base prime"},
          {"emit-runs", "", "emit every run, not just failures", false, true},
          {"checkpoint", "", "checkpoint file, rewritten after every batch"},
          {"resume", "", "continue from --checkpoint if it exists", false, true}},
         cmd_verify_grimm},
        {"gap-scan", "check p' - p < 1 + (log p)^2 for consecutive primes up to a limit",
         {{"limit", "", "", true}, {"emit-records", "", "emit every gap, not just violations", false, true}},
         cmd_gap_scan},
        {"dusart-check", "check the explicit pi, theta and Stirling bounds",
         {{"limit", "", "", true}, {"stirling-kmax", "1000", ""}},
         cmd_dusart_check},
        {"psi", "count y-smooth integers in [1, x]",
         {{"x", "", "", true}, {"y", "", "", true}},
         cmd_psi},
        {"psi-window", "count y-smooth integers in (x, x+z]",
         {{"x", "", "", true}, {"z", "", ""}, {"y", "", ""}, {"alpha", "", "y = z = x^alpha"}},
         cmd_psi_window},
        {"grimm-bound", "upper bound g(x) < z from a smooth-number surplus in (x, x+z]",
         {{"x", "", "", true}, {"z", "", ""}, {"y", "", ""}, {"alpha", "", "y = z = x^alpha"}},
         cmd_grimm_bound},
        {"rho", "Dickman rho",
         {{"t", "", "evaluate at t"},
          {"t-max", "20", ""},
          {"step", "0.001", ""},
          {"export", "", "emit the node grid", false, true},
          {"every", "1", "export every n-th node"}},
         cmd_rho},
        {"exceptional-scan", "count n <= X whose window (n, n+n^eps] holds fewer than c0 n^eps smooth numbers",
         {{"X", "", "", true}, {"eps", "", "", true}, {"c0", "", "default rho(1/eps)/2"}, {"stride", "1", ""}},
         cmd_exceptional_scan},
        {"ram-sum", "sum over j <= x^alpha of primes in (x/j, (x+x^alpha)/j]",
         {{"x", "", "", true},
          {"alpha", "", ""},
          {"lambda", "", "alpha = (1 - lambda)/2, with target delta(lambda)"},
          {"eps-prime", "0.05", "slack in the target"}},
         cmd_ram_sum},
        {"rd", "sum over R <= n <= S of floor((x+x^alpha)/(nd)) - floor(x/(nd))",
         {{"x", "", "", true}, {"alpha", "", "", true}, {"R", "", "", true}, {"S", "", "", true},
          {"d", "", "", true}},
         cmd_rd},
        {"phi-sum", "sum over V <= n <= V1 of phi(eta/n)",
         {{"V", "", "", true}, {"V1", "", "", true}, {"eta", "", "", true}},
         cmd_phi_sum},
        {"exponents", "lambda -> alpha, delta, gamma, alpha1",
         {{"lambda", "", ""},
          {"eps-prime", "0", ""},
          {"grid", "0", "also emit n evenly spaced lambdas"},
          {"alpha1-scan", "", "grid-scan alpha1", false, true}},
         cmd_exponents},
    };
    return cmds;
}

std::optional<std::uint64_t> env_u64(const char* var) {
    const char* v = std::getenv(var);
    if (!v || !*v) return std::nullopt;
    return parse_u64(var, v);
}

struct Common {
    std::string format = "csv";
    std::string workers;
    std::string table_limit;
    std::string manifest;
    bool no_manifest = false;
};

void add_common(CLI::App* sub, Common& co) {
    sub->add_option("--format", co.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", co.workers, "worker threads (env GRIMM_WORKERS)");
    sub->add_option("--table-limit", co.table_limit, "prime table limit (env GRIMM_TABLE_LIMIT)");
    sub->add_option("--manifest", co.manifest, "manifest path (default $GRIMM_MANIFEST_DIR/grimm-<cmd>.manifest.json)");
    sub->add_flag("--no-manifest", co.no_manifest, "skip writing the manifest");
}

// Runs one subcommand with fully parsed params; returns the exit code.
int execute(const Command& cmd, const Params& params, const Common& co, std::ostream& out, std::ostream& err) {
    unsigned workers = default_workers();
    if (!co.workers.empty())
        workers = static_cast<unsigned>(parse_u64("workers", co.workers));
    else if (auto w = env_u64("GRIMM_WORKERS"))
        workers = static_cast<unsigned>(*w);
    workers = std::max(1u, workers);
    std::optional<std::uint64_t> table_override =
        co.table_limit.empty() ? env_u64("GRIMM_TABLE_LIMIT") : parse_u64("table-limit", co.table_limit);

    DigestBuf digest(out.rdbuf());
    std::ostream hashed(&digest);
    Emitter emit(hashed, co.format == "json" ? Format::json : Format::csv);
    Context ctx{params, emit, err, workers, table_override};

    const auto t0 = std::chrono::steady_clock::now();
    const int code = cmd.fn(ctx);
    emit.finish();
    hashed.flush();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!co.no_manifest) {
        std::string path = co.manifest;
        if (path.empty()) {
            const char* dir = std::getenv("GRIMM_MANIFEST_DIR");
            path = (std::filesystem::path(dir && *dir ? dir : ".") / ("grimm-" + cmd.name + ".manifest.json")).string();
        }
        json m;
        m["subcommand"] = cmd.name;
        json p = json::object();
        p["format"] = co.format;
        for (const auto& [k, v] : params.values) p[k] = v;
        for (const auto& [k, v] : params.flags) p[k] = v;
        m["parameters"] = p;
        m["table_limit"] = ctx.table_limit;
        m["worker_count"] = workers;
        m["wall_time_seconds"] = wall;
        m["result_digest"] = digest.digest().hex();
        m["exit_code"] = code;
        std::ofstream f(path);
        if (!f) throw UsageError("cannot write manifest " + path);
        f << m.dump(2) << '\n';
    }
    return code;
}

int replay(const std::string& path, unsigned workers_hint, std::ostream& out, std::ostream& err);

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Prime representations of consecutive integers, smooth numbers and related sums", "grimm"};
    app.require_subcommand(1);
    Common co;
    std::map<std::string, Params> params;
    std::map<std::string, std::map<std::string, std::optional<std::string>>> raw;
    std::vector<std::pair<CLI::App*, const Command*>> subs;

    for (const auto& cmd : commands()) {
        auto* sub = app.add_subcommand(cmd.name, cmd.help);
        auto& pv = params[cmd.name];
        for (const auto& ps : cmd.params) {
            if (ps.flag) {
                pv.flags[ps.name] = false;
                sub->add_flag("--" + ps.name, pv.flags[ps.name], ps.help);
            } else {
                pv.values[ps.name] = ps.def;
                auto* o = sub->add_option("--" + ps.name, pv.values[ps.name], ps.help);
                if (ps.required) o->required();
                if (!ps.def.empty()) o->default_str(ps.def);
            }
        }
        add_common(sub, co);
        subs.emplace_back(sub, &cmd);
    }

    std::string replay_path;
    auto* rp = app.add_subcommand("replay", "re-run a manifest and compare result digests");
    rp->add_option("manifest_file", replay_path, "manifest to replay")->required();
    rp->add_option("--workers", co.workers, "worker threads");
    rp->add_flag("--no-manifest", co.no_manifest, "accepted for symmetry; replay never writes a manifest");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    if (rp->parsed()) {
        const unsigned w = co.workers.empty() ? 0 : static_cast<unsigned>(parse_u64("workers", co.workers));
        return replay(replay_path, w, out, err);
    }
    for (auto [sub, cmd] : subs)
        if (sub->parsed()) return execute(*cmd, params[cmd->name], co, out, err);
    return exit_usage;
}

int replay(const std::string& path, unsigned workers_hint, std::ostream& out, std::ostream& err) {
    auto m = read_json(path);
    std::vector<std::string> args;
    std::string expected;
    try {
        args.push_back(m.at("subcommand").get<std::string>());
        for (const auto& [k, v] : m.at("parameters").items()) {
            if (v.is_boolean()) {
                if (v.get<bool>()) args.push_back("--" + k);
            } else if (!v.get<std::string>().empty()) {
                args.push_back("--" + k);
                args.push_back(v.get<std::string>());
            }
        }
        if (auto tl = m.at("table_limit").get<std::uint64_t>(); tl > 0) {
            args.push_back("--table-limit");
            args.push_back(std::to_string(tl));
        }
        expected = m.at("result_digest").get<std::string>();
    } catch (const json::exception& e) {
        throw UsageError(path + ": malformed manifest: " + e.what());
    }
    args.push_back("--workers");
    args.push_back(std::to_string(workers_hint ? workers_hint : default_workers()));
    args.push_back("--no-manifest");

    DigestBuf digest(nullptr);
    std::ostream sink(&digest);
    std::ostringstream inner_err;
    const int code = dispatch(args, sink, inner_err);
    sink.flush();
    if (code == exit_usage) {
        err << inner_err.str();
        return exit_usage;
    }
    const std::string actual = digest.digest().hex();
    const bool match = actual == expected;
    out << "subcommand,expected_digest,actual_digest,match\n"
        << args.front() << ',' << expected << ',' << actual << ',' << (match ? "true" : "false") << '\n';
    return match ? exit_ok : exit_found;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const table_too_small& e) {
        err << "error: " << e.what() << '\n';
    } catch (const cap_exceeded& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
    } catch (const std::logic_error& e) {  // invalid_argument, out_of_range, domain_error
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return exit_usage;
}

} // namespace grimm::cli
