#include "aflcalc/cli.hpp"

#include "aflcalc/json_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

namespace aflc::cli {

namespace {

long long parse_int(const std::string& text) {
    long long value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        throw ConfigError("not an integer: \"" + text + "\"");
    }
    return value;
}

}  // namespace

std::vector<long long> parse_int_list(const std::string& text) {
    if (text.empty()) {
        throw ConfigError("empty range");
    }
    std::vector<long long> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) {
            throw ConfigError("empty item in range \"" + text + "\"");
        }
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int(item));
            continue;
        }
        const long long lo = parse_int(item.substr(0, dots));
        const long long hi = parse_int(item.substr(dots + 2));
        if (hi < lo) {
            throw ConfigError("empty range \"" + item + "\"");
        }
        if (hi - lo > 1000000) {
            throw ConfigError("range \"" + item + "\" is too large");
        }
        for (long long v = lo; v <= hi; ++v) {
            out.push_back(v);
        }
    }
    if (text.back() == ',') {
        throw ConfigError("trailing comma in range \"" + text + "\"");
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<bool> parse_bool_list(const std::string& text) {
    if (text == "both") {
        return {false, true};
    }
    std::vector<bool> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item == "0" || item == "false" || item == "no") {
            out.push_back(false);
        } else if (item == "1" || item == "true" || item == "yes") {
            out.push_back(true);
        } else {
            throw ConfigError("not a boolean: \"" + item + "\"");
        }
    }
    if (out.empty()) {
        throw ConfigError("empty boolean list");
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("AFL_CALC_THREADS")) {
        try {
            const long long c = parse_int(cap);
            if (c >= 1) {
                n = std::min<unsigned>(n, static_cast<unsigned>(std::min<long long>(c, 1024)));
            }
        } catch (const ConfigError&) {
        }
    }
    return n;
}

namespace {

using Task = std::function<Json()>;

/// Evaluates every task; row k of the result belongs to task k.
std::vector<Json> run_tasks(const std::vector<Task>& tasks) {
    std::vector<Json> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++) {
            try {
                rows[k] = tasks[k]();
            } catch (const std::exception& e) {
                rows[k] = Json{{"error", e.what()}, {"pass", false}};
            }
        }
    };
    const unsigned n = std::min<std::size_t>(worker_count(), std::max<std::size_t>(tasks.size(), 1));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    return rows;
}

struct Options {
    std::string q;
    std::string ram;
    std::string i;
    std::string j;
    std::string ij;
    std::string e;
    std::string t;
    std::string vb;
    std::string l;
    std::string out;
    std::string f;
    long long t_odd_max = 0;
    bool oracle = false;
    bool end_to_end = false;
};

std::vector<long long> list_or(const std::string& text, const std::string& fallback) {
    return parse_int_list(text.empty() ? fallback : text);
}

std::vector<FieldSetup> setups(const Options& o, const std::string& q_default, const std::string& ram_default) {
    std::vector<FieldSetup> out;
    for (bool ram : parse_bool_list(o.ram.empty() ? ram_default : o.ram)) {
        for (long long q : list_or(o.q, q_default)) {
            if (q < 2) {
                throw ConfigError("q must be >= 2");
            }
            out.push_back(ram ? FieldSetup::ramified_with(q) : FieldSetup::unramified(q));
        }
    }
    return out;
}

void check_nonnegative(const std::vector<long long>& v, const char* name) {
    if (!v.empty() && v.front() < 0) {
        throw ConfigError(std::string(name) + " must be >= 0");
    }
}

InvariantFunction load_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read " + path);
    }
    try {
        return Json::parse(in).get<InvariantFunction>();
    } catch (const std::exception& e) {
        throw ConfigError("invalid function file " + path + ": " + e.what());
    }
}

std::int64_t max_endpoint(const InvariantFunction& f) {
    std::int64_t m = 0;
    auto take = [&m](const Interval& iv) {
        for (const auto& e : {iv.lo, iv.hi}) {
            if (e) {
                m = std::max({m, std::abs(e->floor()), std::abs(e->ceil())});
            }
        }
    };
    for (const auto& term : f.terms()) {
        take(term.box.b);
        take(term.box.c);
    }
    return m;
}

Json summary_of(const std::vector<Json>& rows) {
    std::size_t passed = 0;
    for (const auto& row : rows) {
        passed += row.value("pass", false) ? 1 : 0;
    }
    return Json{{"rows", rows.size()}, {"passed", passed}, {"failed", rows.size() - passed}};
}

Json ints(const std::vector<long long>& v) { return Json(v); }

// afl

Json afl_command(const Options& o, std::vector<Task>& tasks) {
    const auto qs = list_or(o.q, "3,5,7");
    std::vector<long long> ts;
    if (!o.t.empty()) {
        ts = parse_int_list(o.t);
    } else {
        for (long long t = 1; t <= (o.t_odd_max > 0 ? o.t_odd_max : 21); t += 2) {
            ts.push_back(t);
        }
    }
    const auto vbs = list_or(o.vb, "-8..8");
    for (long long q : qs) {
        if (q < 2) {
            throw ConfigError("q must be >= 2");
        }
    }
    check_nonnegative(ts, "t");
    for (long long q : qs) {
        for (long long t : ts) {
            for (long long vb : vbs) {
                tasks.push_back([q, t, vb] {
                    const AflRow r = afl_verify(q, t, vb);
                    Json row{{"q", q}, {"t", t}, {"v_b", vb}, {"pass", r.pass}};
                    row["transfer"] = Json{{"value", to_json_value(r.transfer_value)},
                                           {"expected", to_json_value(r.transfer_expected)}};
                    if (t % 2 != 0) {
                        row["lhs"] = r.lhs.to_string();
                        row["rhs"] = r.rhs.to_string();
                        row["closed_form"] = r.closed_form.to_string();
                    }
                    return row;
                });
            }
        }
    }
    return Json{{"q", ints(qs)}, {"t", ints(ts)}, {"v_b", ints(vbs)}};
}

// deform

Json deform_command(const Options& o, std::vector<Task>& tasks, std::size_t& skipped) {
    const auto all = setups(o, "2..5", "0,1");
    const auto is = list_or(o.ij.empty() ? o.i : o.ij, "0..5");
    const auto js = list_or(o.ij.empty() ? o.j : o.ij, "0..5");
    const auto es = list_or(o.e, "1..3");
    const auto ls = list_or(o.l, "0..25");
    check_nonnegative(is, "i");
    check_nonnegative(js, "j");
    check_nonnegative(ls, "l");
    if (es.front() < 1) {
        throw ConfigError("e must be >= 1");
    }
    const bool oracle = o.oracle;
    for (const FieldSetup& setup : all) {
        for (long long i : is) {
            for (long long j : js) {
                for (long long e : es) {
                    for (long long l : ls) {
                        if (!class_height_attainable(setup, i, j, l)) {
                            ++skipped;
                            continue;
                        }
                        tasks.push_back([setup, i, j, e, l, oracle] {
                            const DeformQuery dq{setup, i, j, e, l};
                            const std::int64_t closed = lift_bound_closed(dq);
                            const std::int64_t swapped = lift_bound_closed({setup, j, i, e, l});
                            Json row{{"ramified", setup.ramified}, {"q", setup.q}, {"i", i}, {"j", j},
                                     {"e_rel", e},  {"l", l}, {"closed", closed},
                                     {"symmetric", closed == swapped},
                                     {"hom_height_attainable", hom_height_attainable(setup, i, j, l)}};
                            bool pass = closed == swapped && closed >= e;
                            if (oracle) {
                                const std::int64_t o = lift_bound_oracle(dq);
                                row["oracle"] = o;
                                pass = pass && o == closed;
                            }
                            row["pass"] = pass;
                            return row;
                        });
                    }
                }
            }
        }
    }
    return Json{{"setups", all}, {"i", ints(is)}, {"j", ints(js)},
                {"e_rel", ints(es)}, {"l", ints(ls)}, {"oracle_cross_check", oracle}};
}

// orb

std::vector<OrbitData> orbit_grid(const FieldSetup& setup, const std::vector<long long>& ts,
                                  const std::vector<long long>& vbs, bool half_shifts) {
    std::vector<OrbitData> out;
    for (long long t : ts) {
        for (long long vb : vbs) {
            if (!setup.ramified) {
                out.push_back(OrbitData::unramified(setup.q, t, vb));
                continue;
            }
            for (int frac = 0; frac <= (half_shifts ? 1 : 0); ++frac) {
                for (Sign s1 : {Sign::minus, Sign::plus}) {
                    for (Sign sb : {Sign::minus, Sign::plus}) {
                        out.push_back(OrbitData::ramified(setup, t, s1, HalfInt::from_doubled(2 * vb + frac), sb));
                    }
                }
            }
        }
    }
    return out;
}

Json orb_command(const Options& o, std::vector<Task>& tasks) {
    const auto all = setups(o, "3", "0");
    const auto ts = list_or(o.t, "0..6");
    const auto vbs = list_or(o.vb, "-3..3");
    check_nonnegative(ts, "t");
    const InvariantFunction f = o.f.empty() ? InvariantFunction::of(Box::integral_matrices()) : load_function(o.f);
    const std::int64_t m = max_endpoint(f);
    const bool oracle = o.oracle;
    for (const FieldSetup& setup : all) {
        for (const OrbitData& gamma : orbit_grid(setup, ts, vbs, true)) {
            tasks.push_back([gamma, f, m, oracle] {
                const LaurentPoly p = orb_s(gamma, f);
                Json row{{"gamma", gamma},
                         {"orb_s", p.to_string()},
                         {"orb", to_json_value(eval_at_s0(p))},
                         {"d_orb", d_ds_at_s0(p).to_string()},
                         {"omega", to_int(transfer_factor(gamma))}};
                bool pass = true;
                if (oracle) {
                    const std::int64_t window = std::abs(gamma.v_b.floor()) + gamma.t + m + 3;
                    const LaurentPoly q = orb_s_pointwise(gamma, f, window);
                    row["oracle"] = q.to_string();
                    pass = q == p;
                }
                row["pass"] = pass;
                return row;
            });
        }
    }
    return Json{{"setups", all}, {"t", ints(ts)}, {"v_b", ints(vbs)}, {"f", f}, {"oracle_cross_check", oracle}};
}

// germ

Json germ_command(const Options& o, std::vector<Task>& tasks, Json& germs) {
    const auto all = setups(o, "3", "0");
    const auto vbs = list_or(o.vb, "-5..5");
    const InvariantFunction f =
        o.f.empty() ? InvariantFunction::of(Box::unit_diagonal()) : load_function(o.f);
    germs = Json::array();
    for (const FieldSetup& setup : all) {
        const InvariantFunction regular = prop34_regularize(f, setup);
        const GermData g = germ_extract(regular, setup);
        germs.push_back(Json{{"setup", setup}, {"germ", g}});
        std::vector<long long> ts;
        if (o.t.empty()) {
            for (long long t = g.validity_threshold; t <= g.validity_threshold + 10; ++t) {
                ts.push_back(t);
            }
        } else {
            for (long long t : parse_int_list(o.t)) {
                if (t >= g.validity_threshold) {
                    ts.push_back(t);
                }
            }
        }
        for (const OrbitData& gamma : orbit_grid(setup, ts, vbs, true)) {
            tasks.push_back([gamma, f, regular, g] {
                const LaurentPoly p = orb_s(gamma, regular);
                const LaurentPoly expansion = g.expansion_at(gamma);
                const bool same_values = orb(gamma, f) == eval_at_s0(p) && d_orb(gamma, f) == d_ds_at_s0(p);
                return Json{{"gamma", gamma},
                            {"orb_s", p.to_string()},
                            {"expansion", expansion.to_string()},
                            {"matches_f_at_s0", same_values},
                            {"pass", p == expansion && same_values}};
            });
        }
    }
    return Json{{"setups", all}, {"v_b", ints(vbs)}, {"f", f}};
}

// ati

Json growth_json(const AtiGrowthReport& r) {
    Json constants = Json::object();
    for (const auto& [parity, c] : r.constants) {
        constants[std::to_string(parity)] = c;
    }
    Json values = Json::array();
    for (const auto& [t, v] : r.values) {
        values.push_back(Json::array({t, to_json_value(v)}));
    }
    Json j{{"lvl_a", to_json_value(r.lvl_a)},
           {"lvl_d", to_json_value(r.lvl_d)},
           {"regime", r.infinite_regime ? "infinite" : "finite"},
           {"t0", r.t0},
           {"constants", constants},
           {"int_g", values},
           {"pass", r.pass}};
    if (!r.message.empty()) {
        j["message"] = r.message;
    }
    return j;
}

Json end_to_end_json(const AtiEndToEndReport& r) {
    Json j{{"germ", r.germ},
           {"f_corr_germ", r.f_corr_germ},
           {"t_start", r.t_start},
           {"t_end", r.t_end},
           {"points", r.points.size()},
           {"round_trip", r.round_trip},
           {"transfer", r.transfer},
           {"o_constant", r.o_constant},
           {"identity", r.identity},
           {"negative_control_rejected", r.negative_control_rejected},
           {"pass", r.pass}};
    if (!r.message.empty()) {
        j["message"] = r.message;
    }
    return j;
}

Json ati_command(const Options& o, std::vector<Task>& tasks) {
    const auto all = setups(o, "2,3", "0,1");
    const auto is = list_or(o.ij.empty() ? o.i : o.ij, "0..4");
    const auto js = list_or(o.ij.empty() ? o.j : o.ij, "0..4");
    const auto es = list_or(o.e, "1,2");
    check_nonnegative(is, "i");
    check_nonnegative(js, "j");
    if (es.front() < 1) {
        throw ConfigError("e must be >= 1");
    }
    std::optional<long long> t_max;
    if (!o.t.empty()) {
        t_max = parse_int_list(o.t).back();
    }
    const bool e2e = o.end_to_end;
    for (const FieldSetup& setup : all) {
        for (long long i : is) {
            for (long long j : js) {
                for (long long e : es) {
                    tasks.push_back([setup, i, j, e, t_max, e2e] {
                        const MatchContext ctx = MatchContext::with_e_rel(setup, i, j, e);
                        const long long top = t_max.value_or(i + j + 12);
                        Json growth = Json::array();
                        bool pass = true;
                        std::vector<ExtInt> la{ExtInt::infinity()};
                        std::vector<ExtInt> ld{ExtInt::infinity()};
                        for (long long k = 0; k < i; ++k) {
                            la.push_back(k);
                        }
                        for (long long k = 0; k < j; ++k) {
                            ld.push_back(k);
                        }
                        for (const ExtInt& a : la) {
                            for (const ExtInt& d : ld) {
                                const AtiGrowthReport r = ati_growth_check(ctx, top, a, d);
                                pass = pass && r.pass;
                                growth.push_back(growth_json(r));
                            }
                        }
                        Json row{{"setup", setup}, {"i", i}, {"j", j}, {"e_rel", e}, {"e_F", ctx.e_F},
                                 {"first_case", ctx.first_case()}, {"growth", growth}};
                        if (e2e) {
                            const AtiEndToEndReport r = ati_end_to_end(ctx);
                            pass = pass && r.pass;
                            row["end_to_end"] = end_to_end_json(r);
                        }
                        row["pass"] = pass;
                        return row;
                    });
                }
            }
        }
    }
    return Json{{"setups", all}, {"i", ints(is)}, {"j", ints(js)}, {"e_rel", ints(es)},
                {"t_max", t_max ? Json(*t_max) : Json("i+j+12")}, {"end_to_end", e2e}};
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--q", o.q, "residue field sizes, e.g. 3,5,7 or 2..5");
    cmd->add_option("--ram", o.ram, "ramification: 0, 1, 0,1 or both");
    cmd->add_option("--i", o.i, "levels i");
    cmd->add_option("--j", o.j, "levels j");
    cmd->add_option("--ij", o.ij, "levels used for both i and j");
    cmd->add_option("--e", o.e, "relative ramification indices");
    cmd->add_option("--t", o.t, "values of v(1 - N(a))");
    cmd->add_option("--t-odd-max", o.t_odd_max, "all odd t from 1 to this bound");
    cmd->add_option("--vb", o.vb, "values of v(b)");
    cmd->add_option("--l", o.l, "class heights");
    cmd->add_option("--f", o.f, "path to a JSON test function");
    cmd->add_option("--out", o.out, "report path (default stdout)");
    cmd->add_flag("--oracle-cross-check", o.oracle, "compare with the independent oracle");
    cmd->add_flag("--end-to-end", o.end_to_end, "ati: also run the germ-level end-to-end check");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact orbital integrals, deformation lengths and intersection identities"};
    app.name("aflcalc");
    app.require_subcommand(1);
    Options o;
    const std::pair<const char*, const char*> commands[] = {
        {"afl", "level-zero derivative identity and transfer statement"},
        {"deform", "lift bounds for homomorphisms of quasi-canonical lifts"},
        {"orb", "orbital integrals of a test function"},
        {"germ", "germ data near B0 with round trip and expansion checks"},
        {"ati", "intersection growth and the germ-level transfer witness"},
    };
    for (const auto& [name, description] : commands) {
        add_common(app.add_subcommand(name, description), o);
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    Json report{{"schema", 1}, {"command", command}};
    std::vector<Task> tasks;
    try {
        std::size_t skipped = 0;
        if (command == "afl") {
            report["config"] = afl_command(o, tasks);
        } else if (command == "deform") {
            report["config"] = deform_command(o, tasks, skipped);
            report["config"]["skipped_inadmissible"] = skipped;
        } else if (command == "orb") {
            report["config"] = orb_command(o, tasks);
        } else if (command == "germ") {
            Json germs;
            report["config"] = germ_command(o, tasks, germs);
            report["germs"] = germs;
        } else {
            report["config"] = ati_command(o, tasks);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const Error& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    }
    if (tasks.empty()) {
        err << "config error: the sweep is empty\n";
        return config_error;
    }

    const std::vector<Json> rows = run_tasks(tasks);
    report["rows"] = rows;
    report["summary"] = summary_of(rows);
    const std::string text = report.dump(2) + "\n";
    if (o.out.empty()) {
        out << text;
    } else {
        std::ofstream file(o.out);
        if (!file) {
            err << "config error: cannot write " << o.out << "\n";
            return config_error;
        }
        file << text;
    }
    return report["summary"]["failed"].get<std::size_t>() == 0 ? ok : verification_failure;
}

}  // namespace aflc::cli
