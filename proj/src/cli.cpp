#include "regulus/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "regulus/congruence.hpp"
#include "regulus/error.hpp"
#include "regulus/identities.hpp"
#include "regulus/oracles.hpp"

namespace regulus::cli {

namespace {

using json = nlohmann::json;

class Cursor {
public:
    explicit Cursor(std::string_view text) : s_(text) {}

    void skip_ws()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
            ++i_;
        }
    }
    bool done()
    {
        skip_ws();
        return i_ >= s_.size();
    }
    char peek()
    {
        skip_ws();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    bool accept(char c)
    {
        if (peek() == c) {
            ++i_;
            return true;
        }
        return false;
    }
    bool accept(std::string_view word)
    {
        skip_ws();
        if (s_.substr(i_, word.size()) == word) {
            i_ += word.size();
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        if (!accept(c)) {
            error(std::string("expected '") + c + "'");
        }
    }
    std::string digits(bool allow_sign)
    {
        skip_ws();
        const std::size_t start = i_;
        if (allow_sign && i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) {
            ++i_;
        }
        const std::size_t first = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            ++i_;
        }
        if (i_ == first) {
            i_ = start;
            error("expected an integer");
        }
        return std::string(s_.substr(start, i_ - start));
    }
    long small_int(bool allow_sign)
    {
        const std::size_t at = (skip_ws(), i_);
        const std::string d = digits(allow_sign);
        if (d.size() > 9) {
            i_ = at;
            error("integer too large");
        }
        return std::stol(d);
    }
    [[noreturn]] void error(const std::string& what) const
    {
        fail(ErrorKind::ParseError, "at column " + std::to_string(i_) + ": " + what + " in \"" + std::string(s_) + "\"");
    }
    std::size_t pos() const { return i_; }

private:
    std::string_view s_;
    std::size_t i_ = 0;
};

void parse_factor(Cursor& c, FQuotient& q, int sign)
{
    if (!c.accept('f')) {
        c.error("expected a factor f<delta>");
    }
    const long delta = c.small_int(false);
    if (delta < 1) {
        c.error("delta must be >= 1");
    }
    long e = 1;
    if (c.accept('^')) {
        const bool paren = c.accept('(');
        e = c.small_int(true);
        if (paren) {
            c.expect(')');
        }
    }
    q.times(static_cast<int>(delta), static_cast<int>(sign * e));
}

void parse_product(Cursor& c, FQuotient& q, int sign, bool parenthesized)
{
    bool any = false;
    while (c.peek() == 'f') {
        parse_factor(c, q, sign);
        any = true;
        c.accept('*');
    }
    if (!any) {
        c.error("expected a factor f<delta>");
    }
    if (parenthesized) {
        c.expect(')');
    }
}

// --- option helpers --------------------------------------------------------

/// "0..2", "1,3,5", "7" -> values.
std::vector<std::int64_t> parse_range(const std::string& text)
{
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string part;
    auto num = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(s, &used);
            if (used != s.size()) {
                throw std::invalid_argument(s);
            }
            return static_cast<std::int64_t>(v);
        } catch (const std::logic_error&) {
            fail(ErrorKind::ParseError, "bad integer '" + s + "' in range '" + text + "'");
        }
    };
    while (std::getline(ss, part, ',')) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(num(part));
            continue;
        }
        const auto lo = num(part.substr(0, dots));
        const auto hi = num(part.substr(dots + 2));
        if (hi < lo || hi - lo > 10000) {
            fail(ErrorKind::ParseError, "bad range '" + part + "'");
        }
        for (auto v = lo; v <= hi; ++v) {
            out.push_back(v);
        }
    }
    if (out.empty()) {
        fail(ErrorKind::ParseError, "empty range");
    }
    return out;
}

std::vector<std::uint64_t> parse_checkpoints(const std::string& text)
{
    std::vector<std::uint64_t> out;
    for (const auto v : parse_range(text)) {
        if (v < 0) {
            fail(ErrorKind::DomainError, "checkpoint X must be >= 1");
        }
        out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
}

int exit_code_for(ErrorKind k)
{
    switch (k) {
    case ErrorKind::TruncationBudgetExceeded:
    case ErrorKind::TruncationTooSmall:
    case ErrorKind::CostLimit:
        return kBudget;
    default:
        return kUsage;
    }
}

/// Either the --out file or the command's stdout.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                fail(ErrorKind::DomainError, "cannot open output file " + path);
            }
        }
        os_ = path.empty() ? &fallback : &file_;
    }
    std::ostream& operator*() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

void require_within(std::size_t trunc, std::size_t budget)
{
    if (trunc > budget) {
        fail(ErrorKind::TruncationBudgetExceeded,
             "trunc " + std::to_string(trunc) + " exceeds the budget " + std::to_string(budget));
    }
}

std::vector<VerificationReport> run_tasks(std::vector<std::function<VerificationReport()>>& tasks, unsigned jobs)
{
    std::vector<VerificationReport> out(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                out[i] = tasks[i]();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
    for (unsigned t = 1; t < n; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

std::string report_csv_header() { return "id,tag,status,checked_upto,checked_count,trunc,counter_n,counter_index"; }

std::string report_csv(const VerificationReport& r)
{
    std::ostringstream os;
    os << r.id << ',' << to_string(r.tag) << ',' << to_string(r.status) << ',' << r.checked_upto << ','
       << r.checked_count << ',' << r.trunc << ',';
    if (r.counterexample) {
        os << r.counterexample->n << ',' << r.counterexample->index;
    } else {
        os << ',';
    }
    return os.str();
}

int emit_reports(const std::vector<VerificationReport>& reports, const std::string& format, std::ostream& out,
                 std::ostream& err)
{
    if (format == "csv") {
        out << report_csv_header() << '\n';
    }
    std::size_t failures = 0;
    std::size_t nongating = 0;
    for (const auto& r : reports) {
        out << (format == "csv" ? report_csv(r) : to_json_line(r)) << '\n';
        if (!r.passed()) {
            (r.gating() ? failures : nongating) += 1;
        }
    }
    err << reports.size() << " checks, " << failures << " gating failures, " << nongating
        << " non-gating failures\n";
    return failures == 0 ? kPass : kFail;
}

struct Common {
    long long budget = -1;
    std::string out;
    std::string format = "json";
    unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_format = true)
{
    cmd->add_option("--budget", c.budget, "hard cap on expansion length (default: REGULUS_BUDGET or 2000000)");
    cmd->add_option("--out", c.out, "write output to this file");
    if (with_format) {
        cmd->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    }
    cmd->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

// --- modcheck rendering ------------------------------------------------------

std::string rat(const Rational& r) { return r.get_str(); }

json verdict_json(const EtaQuotientSpec& spec)
{
    json j;
    j["spec"] = spec.to_string();
    j["weight"] = rat(weight(spec));
    const auto ono = check_ono_conditions(spec);
    j["conditions"] = {{"pass", ono.pass},
                       {"integral_weight", ono.integral_weight},
                       {"sum_delta_r", ono.sum_delta_r.get_str()},
                       {"sum_codelta_r", ono.sum_codelta_r.get_str()},
                       {"reasons", ono.reasons}};
    json cusps = json::array();
    bool all_nonneg = true;
    bool all_pos = true;
    for (const auto d : divisors(spec.level)) {
        const auto o = cusp_order(spec, d);
        cusps.push_back({{"d", d}, {"order", rat(o)}});
        all_nonneg = all_nonneg && sgn(o) >= 0;
        all_pos = all_pos && sgn(o) > 0;
    }
    j["cusps"] = cusps;
    if (ono.pass) {
        const auto chi = character_of(spec);
        j["character"] = chi.to_string();
        j["verdict"] = all_pos ? "cusp form" : (all_nonneg ? "holomorphic modular form" : "not holomorphic");
    } else {
        j["character"] = nullptr;
        j["verdict"] = "conditions not met";
    }
    return j;
}

void print_verdict_text(const json& j, std::ostream& out)
{
    out << "spec: " << j["spec"].get<std::string>() << '\n';
    out << "weight: " << j["weight"].get<std::string>() << '\n';
    const auto& c = j["conditions"];
    out << "conditions: " << (c["pass"].get<bool>() ? "pass" : "fail") << " (sum delta r = "
        << c["sum_delta_r"].get<std::string>() << ", sum N/delta r = " << c["sum_codelta_r"].get<std::string>() << ")\n";
    for (const auto& r : c["reasons"]) {
        out << "  " << r.get<std::string>() << '\n';
    }
    if (!j["character"].is_null()) {
        out << "character: " << j["character"].get<std::string>() << '\n';
    }
    out << "d,order\n";
    for (const auto& cu : j["cusps"]) {
        out << cu["d"].get<std::uint64_t>() << ',' << cu["order"].get<std::string>() << '\n';
    }
    out << "verdict: " << j["verdict"].get<std::string>() << '\n';
}

BSeriesParams parse_bseries(const std::string& text)
{
    BSeriesParams b;
    std::stringstream ss(text);
    std::string kv;
    std::map<std::string, long> seen;
    while (ss >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            fail(ErrorKind::ParseError, "expected key=value, got '" + kv + "'");
        }
        const auto key = kv.substr(0, eq);
        const auto vals = parse_range(kv.substr(eq + 1));
        if (vals.size() != 1) {
            fail(ErrorKind::ParseError, "single value expected for " + key);
        }
        seen[key] = static_cast<long>(vals[0]);
    }
    for (const auto& [key, v] : seen) {
        if (key == "l" || key == "ell") {
            b.ell = static_cast<int>(v);
        } else if (key == "p") {
            if (v < 2) {
                fail(ErrorKind::DomainError, "p must be >= 2");
            }
            b.p = static_cast<std::uint64_t>(v);
        } else if (key == "a") {
            b.a = static_cast<int>(v);
        } else if (key == "m") {
            b.m = static_cast<int>(v);
        } else if (key == "k") {
            b.k = static_cast<int>(v);
        } else {
            fail(ErrorKind::ParseError, "unknown B-series key '" + key + "'");
        }
    }
    return b;
}

} // namespace

// ---------------------------------------------------------------------------

FQuotient parse_fquotient(std::string_view text)
{
    Cursor c(text);
    FQuotient q;
    if (c.done()) {
        c.error("empty f-quotient");
    }
    const char first = c.peek();
    if (first == '-' || first == '+' || std::isdigit(static_cast<unsigned char>(first))) {
        q = FQuotient(Integer(c.digits(true)));
        if (c.done()) {
            return q;
        }
        // "1 / f1": a bare scalar numerator.
        if (c.accept('*') || c.peek() != '/') {
            parse_product(c, q, +1, false);
        }
    } else {
        parse_product(c, q, +1, false);
    }
    if (c.accept('/')) {
        if (c.accept('(')) {
            parse_product(c, q, -1, true);
        } else {
            parse_factor(c, q, -1);
        }
    }
    if (!c.done()) {
        c.error("unexpected trailing input");
    }
    return q;
}

EtaQuotientSpec parse_eta_spec(std::string_view text)
{
    Cursor c(text);
    if (!c.accept('N')) {
        c.error("expected 'N=<level>'");
    }
    c.expect('=');
    const long level = c.small_int(false);
    if (level < 1) {
        c.error("level must be >= 1");
    }
    c.expect(';');
    std::map<std::uint64_t, std::int64_t> exps;
    bool any = false;
    while (!c.done()) {
        if (!c.accept(std::string_view("eta"))) {
            c.error("expected eta(<delta>)");
        }
        c.expect('(');
        const long delta = c.small_int(false);
        c.expect(')');
        long e = 1;
        if (c.accept('^')) {
            const bool paren = c.accept('(');
            e = c.small_int(true);
            if (paren) {
                c.expect(')');
            }
        }
        if (delta < 1) {
            c.error("delta must be >= 1");
        }
        exps[static_cast<std::uint64_t>(delta)] += e;
        any = true;
        c.accept('*');
    }
    if (!any) {
        c.error("expected at least one eta factor");
    }
    for (const auto& [d, r] : exps) {
        if (static_cast<std::uint64_t>(level) % d != 0) {
            fail(ErrorKind::NotADivisor, std::to_string(d) + " does not divide N = " + std::to_string(level));
        }
    }
    return EtaQuotientSpec::make(static_cast<std::uint64_t>(level), exps);
}

std::size_t resolve_budget(long long flag_value)
{
    if (flag_value >= 0) {
        return static_cast<std::size_t>(flag_value);
    }
    if (const char* env = std::getenv("REGULUS_BUDGET"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string_view(env).size()) {
                return static_cast<std::size_t>(v);
            }
        } catch (const std::logic_error&) {
        }
        fail(ErrorKind::ParseError, std::string("REGULUS_BUDGET is not a number: ") + env);
    }
    return kDefaultBudget;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Tuple regular partition series: expansion, identity and congruence verification", "regulus"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every subcommand");

    // expand
    Common ex_c;
    std::string ex_lit;
    std::size_t ex_trunc = 20;
    std::uint64_t ex_mod = 0;
    auto* ex = app.add_subcommand("expand", "dump the coefficients of an f-quotient");
    ex->add_option("series", ex_lit, "f-quotient literal, e.g. \"f2^3 / f1^3\"")->required();
    ex->add_option("--trunc", ex_trunc, "last index");
    ex->add_option("--mod", ex_mod, "reduce mod M (0: exact)");
    add_common(ex, ex_c);
    ex_c.format = "csv";

    // verify
    Common ve_c;
    std::vector<std::string> ve_claims, ve_theorems, ve_idents;
    std::string ve_file;
    std::map<std::string, std::string> ve_ranges;
    bool ve_all = false;
    std::size_t ve_trunc = 200'000;
    std::size_t ve_itrunc = 300;
    long long ve_nmax = -1;
    auto* ve = app.add_subcommand("verify", "verify claims, theorem families and identities");
    ve->add_option("--claim", ve_claims, "named claim or relation id (repeatable)");
    ve->add_option("--theorem", ve_theorems, "theorem family id (repeatable)");
    ve->add_option("--identity", ve_idents, "identity catalog id (repeatable)");
    ve->add_option("--claims-file", ve_file, "JSON claim file");
    ve->add_flag("--all", ve_all, "every named claim, relation, default family instance and identity");
    for (const char* key : {"alpha", "k", "j", "p", "r", "s", "t", "ell"}) {
        ve->add_option(std::string("--") + key, ve_ranges[key], std::string("family parameter ") + key + " (e.g. 0..1)");
    }
    ve->add_option("--trunc", ve_trunc, "expansion length for congruence claims");
    ve->add_option("--identity-trunc", ve_itrunc, "truncation for identities");
    ve->add_option("--nmax", ve_nmax, "cap on n per claim");
    add_common(ve, ve_c);

    // identities
    Common id_c;
    bool id_verify = false;
    std::size_t id_trunc = 300;
    auto* idc = app.add_subcommand("identities", "list (or verify) the identity catalog");
    idc->add_flag("--verify", id_verify, "verify every entry");
    idc->add_option("--trunc", id_trunc, "truncation for verification");
    add_common(idc, id_c);

    // density
    Common de_c;
    std::string de_lit;
    std::uint64_t de_a = 1, de_b = 0, de_mod = 2, de_res = 0;
    std::string de_x = "1000,10000,100000";
    auto* de = app.add_subcommand("density", "proportion of coefficients in a residue class");
    de->add_option("series", de_lit, "f-quotient literal")->required();
    de->add_option("--a", de_a, "progression step")->check(CLI::PositiveNumber);
    de->add_option("--b", de_b, "progression offset");
    de->add_option("--mod", de_mod, "modulus M")->required();
    de->add_option("--residue", de_res, "residue class r");
    de->add_option("--checkpoints", de_x, "X values, e.g. 1000,10000");
    add_common(de, de_c);
    de_c.format = "csv";

    // discover
    Common di_c;
    std::string di_lit;
    std::uint64_t di_mod = 2, di_amax = 9, di_nmax = 200, di_support = 10;
    auto* di = app.add_subcommand("discover", "scan for progressions that vanish mod M");
    di->add_option("series", di_lit, "f-quotient literal")->required();
    di->add_option("--mod", di_mod, "modulus M")->required();
    di->add_option("--amax", di_amax, "largest step a");
    di->add_option("--nmax", di_nmax, "scan reach is amax * nmax");
    di->add_option("--min-support", di_support, "minimum indices checked per candidate");
    add_common(di, di_c);
    di_c.format = "csv";

    // modcheck
    Common mo_c;
    std::string mo_spec, mo_b;
    std::size_t mo_trunc = 2400;
    auto* mo = app.add_subcommand("modcheck", "weight, character and cusp orders of an eta quotient");
    mo->add_option("spec", mo_spec, "e.g. \"N=16; eta(4)^6\"");
    mo->add_option("--bseries", mo_b, "B-series parameters, e.g. \"l=2 p=2 a=1 m=2 k=3\"");
    mo->add_option("--trunc", mo_trunc, "B-series congruence check length");
    add_common(mo, mo_c, false);
    mo_c.format = "text";
    mo->add_option("--format", mo_c.format, "text or json")->check(CLI::IsMember({"json", "text"}));

    // oracle
    Common or_c;
    std::string or_kind;
    int or_ell = 2, or_k = 3;
    std::size_t or_nmax = 50;
    auto* orc = app.add_subcommand("oracle", "independent counting tables");
    orc->add_option("kind", or_kind, "lregular | tuple | ped | partition | distinct")
        ->required()
        ->check(CLI::IsMember({"lregular", "tuple", "ped", "partition", "distinct"}));
    orc->add_option("--ell", or_ell, "ell");
    orc->add_option("--k", or_k, "k");
    orc->add_option("--nmax", or_nmax, "last index");
    add_common(orc, or_c, false);

    std::vector<std::string> argv_store{"regulus"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) {
        argv.push_back(s.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (ex->parsed()) {
            const std::size_t budget = resolve_budget(ex_c.budget);
            require_within(ex_trunc, budget);
            const FQuotient q = parse_fquotient(ex_lit);
            const RingSpec ring = ex_mod == 0 ? RingSpec::exact() : RingSpec::modulo(ex_mod);
            const Series s = expand_fquotient(q, ex_trunc, ring);
            Sink sink(ex_c.out, out);
            if (ex_c.format == "json") {
                json j;
                j["series"] = q.to_string();
                j["ring"] = ring.to_string();
                std::vector<std::string> cs;
                for (const auto& v : s.to_integers()) {
                    cs.push_back(v.get_str());
                }
                j["coefficients"] = cs;
                *sink << j.dump() << '\n';
            } else {
                *sink << "n,coefficient\n";
                const auto vals = s.to_integers();
                for (std::size_t n = 0; n < vals.size(); ++n) {
                    *sink << n << ',' << vals[n].get_str() << '\n';
                }
            }
            return kPass;
        }

        if (ve->parsed()) {
            const std::size_t budget = resolve_budget(ve_c.budget);
            require_within(ve_trunc, budget);
            require_within(ve_itrunc, budget);
            std::vector<CongruenceClaim> claims;
            std::vector<RelationClaim> relations;
            std::vector<std::string> idents = ve_idents;
            for (const auto& id : ve_claims) {
                const bool is_claim = std::any_of(named_claims().begin(), named_claims().end(),
                                                  [&](const auto& c) { return c.id == id; });
                if (is_claim) {
                    claims.push_back(find_claim(id));
                } else {
                    relations.push_back(find_relation(id));
                }
            }
            std::map<std::string, std::vector<std::int64_t>> ranges;
            for (const auto& [key, text] : ve_ranges) {
                if (!text.empty()) {
                    ranges[key] = parse_range(text);
                }
            }
            for (const auto& th : ve_theorems) {
                if (th == "t3.3.1") {
                    for (const auto k : ranges.contains("k") ? ranges["k"] : std::vector<std::int64_t>{0}) {
                        relations.push_back(t3_3_1_relation(k));
                    }
                    continue;
                }
                if (ranges.empty()) {
                    const auto v = default_family_instances(th);
                    claims.insert(claims.end(), v.begin(), v.end());
                    continue;
                }
                // Cartesian product of the given parameter ranges.
                std::vector<FamilyParams> combos{FamilyParams{}};
                for (const auto& [key, vals] : ranges) {
                    std::vector<FamilyParams> next;
                    for (const auto& base : combos) {
                        for (const auto v : vals) {
                            FamilyParams fp = base;
                            std::optional<std::int64_t>* slot = key == "alpha" ? &fp.alpha
                                                               : key == "k"     ? &fp.k
                                                               : key == "j"     ? &fp.j
                                                               : key == "p"     ? &fp.p
                                                               : key == "r"     ? &fp.r
                                                               : key == "s"     ? &fp.s
                                                               : key == "t"     ? &fp.t
                                                                                : &fp.ell;
                            *slot = v;
                            next.push_back(fp);
                        }
                    }
                    combos = std::move(next);
                }
                for (const auto& fp : combos) {
                    const auto v = generate_family(th, fp);
                    claims.insert(claims.end(), v.begin(), v.end());
                }
            }
            if (!ve_file.empty()) {
                std::ifstream in(ve_file);
                if (!in) {
                    fail(ErrorKind::DomainError, "cannot read claim file " + ve_file);
                }
                std::stringstream buf;
                buf << in.rdbuf();
                const auto v = claims_from_json(buf.str());
                claims.insert(claims.end(), v.begin(), v.end());
            }
            if (ve_all) {
                claims.insert(claims.end(), named_claims().begin(), named_claims().end());
                relations.insert(relations.end(), named_relations().begin(), named_relations().end());
                for (const auto& id : family_ids()) {
                    const auto v = default_family_instances(id);
                    claims.insert(claims.end(), v.begin(), v.end());
                }
                for (const auto& e : identity_catalog()) {
                    idents.push_back(e.id);
                }
            }
            if (claims.empty() && relations.empty() && idents.empty()) {
                fail(ErrorKind::UnknownSelection, "nothing selected (use --claim, --theorem, --identity or --all)");
            }
            for (const auto& id : idents) {
                (void)find_identity(id);
            }

            SeriesCache cache(budget);
            auto cap = [&](std::uint64_t n) { return ve_nmax >= 0 ? std::min<std::uint64_t>(n, ve_nmax) : n; };
            auto reach_error = [&](const std::string& id, std::uint64_t b) {
                fail(ErrorKind::TruncationBudgetExceeded,
                     id + " starts at index " + std::to_string(b) + ", beyond --trunc " + std::to_string(ve_trunc));
            };
            // Expand each quotient once, at the lcm of the moduli it is read at.
            std::vector<std::pair<FQuotient, std::uint64_t>> needs;
            auto need = [&](const FQuotient& q, std::uint64_t m) {
                auto it = std::find_if(needs.begin(), needs.end(), [&](const auto& e) { return e.first == q; });
                if (it == needs.end()) {
                    needs.emplace_back(q, m);
                } else {
                    it->second = std::lcm(it->second, m);
                }
            };
            std::vector<std::function<VerificationReport()>> tasks;
            for (const auto& c : claims) {
                const auto nm = c.nmax_within(ve_trunc);
                if (!nm) {
                    reach_error(c.id, c.progression.b);
                }
                need(c.progression.series, c.modulus);
                tasks.emplace_back([&cache, c, n = cap(*nm)] { return verify_instance(c, n, cache); });
            }
            for (const auto& r : relations) {
                const auto nm = r.nmax_within(ve_trunc);
                if (!nm) {
                    reach_error(r.id, std::max(r.lhs.b, r.rhs.b));
                }
                need(r.lhs.series, r.modulus);
                need(r.rhs.series, r.modulus);
                tasks.emplace_back([&cache, r, n = cap(*nm)] { return verify_relation(r, n, cache); });
            }
            for (const auto& id : idents) {
                tasks.emplace_back([id, t = ve_itrunc] { return verify_identity(id, t); });
            }
            std::vector<std::function<VerificationReport()>> primes;
            for (const auto& [q, m] : needs) {
                primes.emplace_back([&cache, q, m, t = ve_trunc] {
                    cache.get(q, RingSpec::modulo(m), t);
                    return VerificationReport{};
                });
            }
            run_tasks(primes, ve_c.jobs);
            const auto reports = run_tasks(tasks, ve_c.jobs);
            Sink sink(ve_c.out, out);
            return emit_reports(reports, ve_c.format, *sink, err);
        }

        if (idc->parsed()) {
            Sink sink(id_c.out, out);
            if (!id_verify) {
                if (id_c.format == "json") {
                    *sink << catalog_json() << '\n';
                } else {
                    *sink << "id,modulus,anchor\n";
                    for (const auto& e : identity_catalog()) {
                        *sink << e.id << ',' << (e.modulus ? std::to_string(*e.modulus) : "exact") << ",\""
                              << e.anchor << "\"\n";
                    }
                }
                return kPass;
            }
            require_within(id_trunc, resolve_budget(id_c.budget));
            std::vector<std::function<VerificationReport()>> tasks;
            for (const auto& e : identity_catalog()) {
                tasks.emplace_back([&e, t = id_trunc] { return verify_identity(e, t); });
            }
            return emit_reports(run_tasks(tasks, id_c.jobs), id_c.format, *sink, err);
        }

        if (de->parsed()) {
            SeriesCache cache(resolve_budget(de_c.budget));
            const Progression prog{parse_fquotient(de_lit), de_a, de_b, 1};
            const auto rep = density_scan(prog, de_mod, de_res, parse_checkpoints(de_x), cache);
            Sink sink(de_c.out, out);
            if (de_c.format == "json") {
                json pts = json::array();
                for (const auto& p : rep.points) {
                    pts.push_back({{"X", p.x}, {"count", p.count}, {"proportion", p.proportion}});
                }
                *sink << json{{"series", prog.to_string()}, {"modulus", de_mod}, {"residue", de_res}, {"points", pts}}
                             .dump()
                      << '\n';
            } else {
                *sink << rep.to_csv();
            }
            return kPass;
        }

        if (di->parsed()) {
            SeriesCache cache(resolve_budget(di_c.budget));
            const auto cands = discover(parse_fquotient(di_lit), di_mod, di_amax, di_nmax, di_support, cache);
            Sink sink(di_c.out, out);
            if (di_c.format == "csv") {
                *sink << "a,b,checked,primitive,tag\n";
            }
            for (const auto& c : cands) {
                if (di_c.format == "csv") {
                    *sink << c.a << ',' << c.b << ',' << c.checked << ',' << (c.primitive ? "yes" : "no") << ','
                          << to_string(ClaimTag::Empirical) << '\n';
                } else {
                    *sink << json{{"a", c.a},
                                  {"b", c.b},
                                  {"checked", c.checked},
                                  {"primitive", c.primitive},
                                  {"tag", to_string(ClaimTag::Empirical)}}
                                 .dump()
                          << '\n';
                }
            }
            return kPass;
        }

        if (mo->parsed()) {
            Sink sink(mo_c.out, out);
            if (!mo_b.empty()) {
                require_within(mo_trunc, resolve_budget(mo_c.budget));
                const auto b = parse_bseries(mo_b);
                const auto rep = b_series_check(b, mo_trunc);
                json j = verdict_json(rep.spec);
                j["minimal_level"] = rep.minimal_level;
                j["adopted_level"] = rep.adopted_level;
                j["minimal_divides_adopted"] = rep.minimal_divides_adopted;
                j["k_bound_holds"] = rep.k_bound_holds;
                j["congruence_checked"] = rep.congruence_checked;
                j["report"] = json::parse(to_json_line(rep.report));
                if (mo_c.format == "json") {
                    *sink << j.dump() << '\n';
                } else {
                    print_verdict_text(j, *sink);
                    *sink << "minimal level: " << rep.minimal_level << '\n';
                    *sink << "adopted level: " << rep.adopted_level << '\n';
                    *sink << "k bound: " << (rep.k_bound_holds ? "holds" : "fails") << '\n';
                    *sink << "congruence: " << to_string(rep.report.status) << " (" << rep.congruence_checked
                          << " coefficients)\n";
                }
                return rep.report.passed() ? kPass : kFail;
            }
            if (mo_spec.empty()) {
                fail(ErrorKind::ParseError, "modcheck needs a spec literal or --bseries");
            }
            const json j = verdict_json(parse_eta_spec(mo_spec));
            if (mo_c.format == "json") {
                *sink << j.dump() << '\n';
            } else {
                print_verdict_text(j, *sink);
            }
            const auto v = j["verdict"].get<std::string>();
            return v == "cusp form" || v == "holomorphic modular form" ? kPass : kFail;
        }

        if (orc->parsed()) {
            require_within(or_nmax, resolve_budget(or_c.budget));
            OracleTable t = or_kind == "lregular"    ? count_lregular(or_ell, or_nmax)
                            : or_kind == "tuple"     ? count_tuple(or_ell, or_k, or_nmax)
                            : or_kind == "ped"       ? ped_count(or_nmax)
                            : or_kind == "partition" ? partition_count(or_nmax)
                                                     : distinct_parts_count(or_nmax);
            Sink sink(or_c.out, out);
            *sink << t.to_csv();
            return kPass;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
    return kUsage;
}

} // namespace regulus::cli
