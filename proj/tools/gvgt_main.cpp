// Command-line front-end for the group-testing construction pipeline.
//
// Exit codes: 0 success, 1 verification failure or undecodable outcomes,
// 2 usage error or malformed input file.
//
// All subcommands are deterministic for fixed flags; wall-clock timings go
// to stderr (text mode) or into the JSON report, never into output files.

#include <CLI11.hpp>
#include <json.hpp>

#include <gvgt/gvgt.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

gvgt::BuildMode mode_from(const std::string& s) {
    return s == "exact" ? gvgt::BuildMode::exact : gvgt::BuildMode::fast;
}

gvgt::DefectiveSet parse_item_list(const std::string& text) {
    gvgt::DefectiveSet out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        unsigned long long v = 0;
        std::size_t pos = 0;
        try {
            v = std::stoull(tok, &pos);
        } catch (const std::logic_error&) {
            throw std::invalid_argument("bad item '" + tok + "' in --defectives");
        }
        if (pos != tok.size() || v == 0 || v > UINT32_MAX)
            throw std::invalid_argument("bad item '" + tok + "' in --defectives");
        out.push_back(static_cast<std::uint32_t>(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string join_items(const std::vector<std::uint32_t>& items) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(items[i]);
    }
    return s;
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

ordered_json report_head(const char* command) {
    ordered_json j;
    j["schema"] = "gvgt/1";
    j["command"] = command;
    return j;
}

void put_code_params(ordered_json& j, const gvgt::CodeParams& p) {
    j["q"] = p.q;
    j["k"] = p.k;
    j["m"] = p.m;
    j["delta"] = p.delta.str();
}

struct Options {
    std::uint64_t n = 0;
    std::uint32_t r = 0;
    std::int64_t r_override = -1;
    std::string mode = "fast";
    std::uint64_t seed = 0;
    std::string in_path;
    std::string out_path;
    std::string outcomes_path;
    std::string defectives;
    std::uint64_t code_budget = gvgt::kDefaultVerifyBudget;
    std::uint64_t ssf_budget = gvgt::kDefaultSsfBudget;
    std::uint64_t trials = 1000;
    unsigned threads = 1;
    unsigned reps = 3;
    bool json = false;
};

int run_params(const Options& o) {
    auto t0 = Clock::now();
    gvgt::SchemeParams sp = gvgt::derive_params(o.n, o.r);
    std::uint64_t t_bound = static_cast<std::uint64_t>(sp.code.m) * sp.code.q;
    if (o.json) {
        ordered_json j = report_head("params");
        j["n"] = sp.n;
        j["r"] = sp.r;
        put_code_params(j, sp.code);
        j["t_bound"] = t_bound;
        j["trivial"] = sp.trivial;
        j["wall_clock_ms"] = elapsed_ms(t0);
        emit(j);
    } else {
        std::cout << "delta=" << sp.code.delta.str() << " q=" << sp.code.q << " k=" << sp.code.k
                  << " m=" << sp.code.m << " t_bound=" << t_bound
                  << " trivial=" << bool_str(sp.trivial) << "\n";
    }
    return 0;
}

int run_build_code(const Options& o) {
    auto t0 = Clock::now();
    gvgt::SchemeParams sp = gvgt::derive_params(o.n, o.r);
    gvgt::BuildReport rep =
        gvgt::derandomized_construct(sp.code, mode_from(o.mode), o.code_budget);
    if (!o.out_path.empty()) gvgt::write_code_file(o.out_path, rep.code);
    const std::uint32_t required = sp.code.distance_requirement();
    const char* status = rep.distance_checked ? "verified" : "unverified";
    double ms = elapsed_ms(t0);
    if (o.json) {
        ordered_json j = report_head("build-code");
        j["n"] = sp.n;
        j["r"] = sp.r;
        put_code_params(j, sp.code);
        j["required_weight"] = required;
        if (rep.distance_checked)
            j["min_weight"] = rep.min_weight;
        else
            j["min_weight"] = nullptr;
        j["status"] = status;
        j["exact_rerun"] = rep.exact_rerun;
        j["output"] = o.out_path;
        j["wall_clock_ms"] = ms;
        emit(j);
    } else {
        std::cout << "q=" << sp.code.q << " k=" << sp.code.k << " m=" << sp.code.m
                  << " delta=" << sp.code.delta.str() << " required=" << required;
        if (rep.distance_checked) std::cout << " min_weight=" << rep.min_weight;
        std::cout << " status=" << status << " exact_rerun=" << bool_str(rep.exact_rerun)
                  << "\n";
        std::cerr << "wall_clock_ms=" << ms << "\n";
    }
    return 0;
}

int run_build_scheme(const Options& o) {
    auto t0 = Clock::now();
    gvgt::SchemeBuild b =
        gvgt::build_scheme(o.n, o.r, mode_from(o.mode), o.code_budget);
    if (!o.out_path.empty()) gvgt::write_scheme_file(o.out_path, b.scheme);
    const std::uint32_t required = b.params.code.distance_requirement();
    const char* status =
        !b.used_code ? "skipped" : (b.distance_checked ? "verified" : "unverified");
    double ms = elapsed_ms(t0);
    if (o.json) {
        ordered_json j = report_head("build-scheme");
        j["n"] = b.scheme.n;
        j["r"] = b.scheme.r;
        j["t"] = b.scheme.tests.size();
        j["trivial"] = !b.used_code;
        put_code_params(j, b.params.code);
        j["required_weight"] = required;
        if (b.used_code && b.distance_checked)
            j["min_weight"] = b.min_weight;
        else
            j["min_weight"] = nullptr;
        j["code_audit"] = status;
        j["exact_rerun"] = b.exact_rerun;
        j["total_items"] = b.total_items;
        j["output"] = o.out_path;
        j["wall_clock_ms"] = ms;
        emit(j);
    } else {
        std::cout << "n=" << b.scheme.n << " r=" << b.scheme.r << " t=" << b.scheme.tests.size()
                  << " trivial=" << bool_str(!b.used_code);
        if (b.used_code) {
            std::cout << " q=" << b.params.code.q << " k=" << b.params.code.k
                      << " m=" << b.params.code.m << " delta=" << b.params.code.delta.str()
                      << " required=" << required;
            if (b.distance_checked) std::cout << " min_weight=" << b.min_weight;
            std::cout << " code_audit=" << status
                      << " exact_rerun=" << bool_str(b.exact_rerun);
        }
        std::cout << " total_items=" << b.total_items << "\n";
        std::cerr << "wall_clock_ms=" << ms << "\n";
    }
    return 0;
}

int run_verify_code(const Options& o) {
    auto t0 = Clock::now();
    gvgt::GeneratorMatrix g = gvgt::read_code_file(o.in_path);
    std::optional<std::uint32_t> w = gvgt::verify_distance(g, o.code_budget);
    const std::uint32_t required = g.params.distance_requirement();
    const char* status = !w ? "unverified" : (*w >= required ? "verified" : "failed");
    double ms = elapsed_ms(t0);
    if (o.json) {
        ordered_json j = report_head("verify-code");
        put_code_params(j, g.params);
        j["required_weight"] = required;
        if (w)
            j["min_weight"] = *w;
        else
            j["min_weight"] = nullptr;
        j["status"] = status;
        j["wall_clock_ms"] = ms;
        emit(j);
    } else {
        std::cout << "q=" << g.params.q << " k=" << g.params.k << " m=" << g.params.m
                  << " delta=" << g.params.delta.str() << " required=" << required;
        if (w) std::cout << " min_weight=" << *w;
        std::cout << " status=" << status << "\n";
        std::cerr << "wall_clock_ms=" << ms << "\n";
    }
    return (w && *w >= required) ? 0 : 1;
}

int run_verify_ssf(const Options& o) {
    auto t0 = Clock::now();
    gvgt::Scheme s = gvgt::read_scheme_file(o.in_path);
    const std::uint32_t r =
        o.r_override >= 0 ? static_cast<std::uint32_t>(o.r_override) : s.r;
    gvgt::SsfCheck c = gvgt::verify_ssf(s, r, o.ssf_budget);
    const char* status = c.status == gvgt::SsfStatus::selective       ? "selective"
                         : c.status == gvgt::SsfStatus::not_selective ? "not_selective"
                                                                      : "unverified";
    double ms = elapsed_ms(t0);
    if (o.json) {
        ordered_json j = report_head("verify-ssf");
        j["n"] = s.n;
        j["r"] = r;
        j["t"] = s.tests.size();
        j["status"] = status;
        if (c.status == gvgt::SsfStatus::not_selective) {
            j["witness_set"] = c.witness_set;
            j["witness_item"] = c.witness_item;
        }
        j["wall_clock_ms"] = ms;
        emit(j);
    } else {
        std::cout << "n=" << s.n << " r=" << r << " t=" << s.tests.size()
                  << " status=" << status;
        if (c.status == gvgt::SsfStatus::not_selective)
            std::cout << " witness_item=" << c.witness_item
                      << " witness_set=" << join_items(c.witness_set);
        std::cout << "\n";
        std::cerr << "wall_clock_ms=" << ms << "\n";
    }
    return c.status == gvgt::SsfStatus::selective ? 0 : 1;
}

int run_outcomes(const Options& o) {
    auto t0 = Clock::now();
    gvgt::Scheme s = gvgt::read_scheme_file(o.in_path);
    gvgt::DefectiveSet d = parse_item_list(o.defectives);
    gvgt::OutcomeVector out = gvgt::outcomes(s, d);
    if (!o.out_path.empty()) gvgt::write_outcomes_file(o.out_path, out);
    std::string bits(out.size(), '0');
    std::size_t positives = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i]) {
            bits[i] = '1';
            ++positives;
        }
    }
    double ms = elapsed_ms(t0);
    if (o.json) {
        ordered_json j = report_head("outcomes");
        j["n"] = s.n;
        j["t"] = out.size();
        j["defectives"] = d;
        j["positives"] = positives;
        j["outcomes"] = bits;
        j["output"] = o.out_path;
        j["wall_clock_ms"] = ms;
        emit(j);
    } else {
        std::cout << "t=" << out.size() << " positives=" << positives << " outcomes=" << bits
                  << "\n";
        std::cerr << "wall_clock_ms=" << ms << "\n";
    }
    return 0;
}

int run_decode(const Options& o) {
    auto t0 = Clock::now();
    gvgt::Scheme s = gvgt::read_scheme_file(o.in_path);
    gvgt::OutcomeVector out = gvgt::read_outcomes_file(o.outcomes_path);
    const std::uint32_t r = o.r_override >= 0 ? static_cast<std::uint32_t>(o.r_override)
                                              : std::max<std::uint32_t>(1, s.r - 1);
    gvgt::DefectiveSet d = gvgt::decode(s, out, r);
    double ms = elapsed_ms(t0);
    if (o.json) {
        ordered_json j = report_head("decode");
        j["n"] = s.n;
        j["r"] = r;
        j["t"] = out.size();
        j["count"] = d.size();
        j["defectives"] = d;
        j["wall_clock_ms"] = ms;
        emit(j);
    } else {
        std::cout << "count=" << d.size() << " defectives=" << join_items(d) << "\n";
        std::cerr << "wall_clock_ms=" << ms << "\n";
    }
    return 0;
}

int run_simulate(const Options& o) {
    auto t0 = Clock::now();
    gvgt::SimulationReport rep = gvgt::simulate(o.n, o.r, o.trials, o.seed, mode_from(o.mode),
                                                o.threads, o.code_budget);
    double ms = elapsed_ms(t0);
    const gvgt::SchemeBuild& b = rep.build;
    if (o.json) {
        ordered_json j = report_head("simulate");
        j["n"] = b.scheme.n;
        j["r"] = o.r;
        j["strength"] = b.scheme.r;
        j["t"] = b.scheme.tests.size();
        j["trivial"] = !b.used_code;
        put_code_params(j, b.params.code);
        j["trials"] = rep.trials;
        j["failures"] = rep.failures;
        if (rep.failures) {
            j["first_failure_trial"] = rep.first_failure_trial;
            j["first_failure"] = rep.first_failure;
        }
        j["seed"] = o.seed;
        j["threads"] = o.threads;
        j["build_ms"] = rep.build_ms;
        j["trials_ms"] = rep.trials_ms;
        j["wall_clock_ms"] = ms;
        emit(j);
    } else {
        std::cout << "n=" << b.scheme.n << " r=" << o.r << " strength=" << b.scheme.r
                  << " t=" << b.scheme.tests.size() << " trivial=" << bool_str(!b.used_code)
                  << " trials=" << rep.trials << " failures=" << rep.failures;
        if (rep.failures)
            std::cout << " first_failure_trial=" << rep.first_failure_trial
                      << " first_failure=" << join_items(rep.first_failure);
        std::cout << "\n";
        std::cerr << "build_ms=" << rep.build_ms << " trials_ms=" << rep.trials_ms
                  << " wall_clock_ms=" << ms << "\n";
    }
    return rep.failures == 0 ? 0 : 1;
}

// Timed construction ladder at fixed m: message count doubles per step, so
// the reported ratios track the Theta(m q^k) build cost.
int run_bench(const Options& o) {
    const std::uint32_t q = 2;
    const std::uint32_t m = 36;
    ordered_json rows = ordered_json::array();
    double prev = 0.0;
    for (std::uint32_t k = 13; k <= 16; ++k) {
        gvgt::CodeParams p(q, m, k, gvgt::Ratio(1, 8));
        double best = 0.0;
        for (unsigned rep = 0; rep < std::max(1u, o.reps); ++rep) {
            auto t0 = Clock::now();
            gvgt::CodeBuilder b(p, mode_from(o.mode));
            while (!b.finished()) b.step();
            double ms = elapsed_ms(t0);
            if (rep == 0 || ms < best) best = ms;
        }
        double ratio = prev > 0.0 ? best / prev : 0.0;
        if (o.json) {
            ordered_json row;
            row["k"] = k;
            row["messages"] = std::uint64_t{1} << k;
            row["ms"] = best;
            if (prev > 0.0) row["ratio"] = ratio;
            rows.push_back(row);
        } else {
            std::cout << "k=" << k << " messages=" << (std::uint64_t{1} << k) << " ms=" << best;
            if (prev > 0.0) std::cout << " ratio=" << ratio;
            std::cout << "\n";
        }
        prev = best;
    }
    if (o.json) {
        ordered_json j = report_head("bench");
        put_code_params(j, gvgt::CodeParams(q, m, 13, gvgt::Ratio(1, 8)));
        j["mode"] = o.mode;
        j["reps"] = o.reps;
        j["rows"] = rows;
        emit(j);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic group-testing schemes from derandomized linear codes"};
    app.require_subcommand(1);
    Options o;
    int rc = 0;

    auto add_json = [&](CLI::App* cmd) { cmd->add_flag("--json", o.json, "emit a JSON report"); };
    auto add_mode = [&](CLI::App* cmd) {
        cmd->add_option("--mode", o.mode, "score arithmetic: fast or exact")
            ->check(CLI::IsMember({"fast", "exact"}));
    };
    auto add_nr = [&](CLI::App* cmd) {
        cmd->add_option("-n", o.n, "number of items")->required();
        cmd->add_option("-r", o.r, "selectivity strength")->required();
    };

    CLI::App* params = app.add_subcommand("params", "derive construction parameters");
    add_nr(params);
    add_json(params);
    params->callback([&] { rc = run_params(o); });

    CLI::App* build_code = app.add_subcommand("build-code", "construct a generator matrix");
    add_nr(build_code);
    add_mode(build_code);
    build_code->add_option("-o", o.out_path, "output code file");
    build_code->add_option("--budget", o.code_budget, "distance audit enumeration cap");
    add_json(build_code);
    build_code->callback([&] { rc = run_build_code(o); });

    CLI::App* build_scheme = app.add_subcommand("build-scheme", "construct a test scheme");
    add_nr(build_scheme);
    add_mode(build_scheme);
    build_scheme->add_option("-o", o.out_path, "output scheme file");
    build_scheme->add_option("--budget", o.code_budget, "distance audit enumeration cap");
    add_json(build_scheme);
    build_scheme->callback([&] { rc = run_build_scheme(o); });

    CLI::App* verify_code = app.add_subcommand("verify-code", "audit a code file's distance");
    verify_code->add_option("-i", o.in_path, "input code file")->required();
    verify_code->add_option("--budget", o.code_budget, "enumeration cap");
    add_json(verify_code);
    verify_code->callback([&] { rc = run_verify_code(o); });

    CLI::App* verify_ssf = app.add_subcommand("verify-ssf", "audit a scheme file's selectivity");
    verify_ssf->add_option("-i", o.in_path, "input scheme file")->required();
    verify_ssf->add_option("-r", o.r_override, "strength to check (default: the file's r)");
    verify_ssf->add_option("--budget", o.ssf_budget, "enumeration cap");
    add_json(verify_ssf);
    verify_ssf->callback([&] { rc = run_verify_ssf(o); });

    CLI::App* outc = app.add_subcommand("outcomes", "evaluate tests against a defective set");
    outc->add_option("-i", o.in_path, "input scheme file")->required();
    outc->add_option("--defectives", o.defectives, "comma-separated items, e.g. 1,5")
        ->required();
    outc->add_option("-o", o.out_path, "output outcome file");
    add_json(outc);
    outc->callback([&] { rc = run_outcomes(o); });

    CLI::App* dec = app.add_subcommand("decode", "recover the defective set from outcomes");
    dec->add_option("-i", o.in_path, "input scheme file")->required();
    dec->add_option("--outcomes", o.outcomes_path, "input outcome file")->required();
    dec->add_option("-r", o.r_override, "defective bound (default: scheme strength - 1)");
    add_json(dec);
    dec->callback([&] { rc = run_decode(o); });

    CLI::App* sim = app.add_subcommand("simulate", "random decode round-trips");
    add_nr(sim);
    sim->add_option("--trials", o.trials, "number of random trials");
    sim->add_option("--seed", o.seed, "trial seed (default 0)");
    add_mode(sim);
    sim->add_option("--threads", o.threads, "worker threads");
    sim->add_option("--budget", o.code_budget, "distance audit enumeration cap");
    add_json(sim);
    sim->callback([&] { rc = run_simulate(o); });

    CLI::App* bench = app.add_subcommand("bench", "construction-time scaling ladder");
    bench->add_option("--reps", o.reps, "timing repetitions per point");
    add_mode(bench);
    add_json(bench);
    bench->callback([&] { rc = run_bench(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const gvgt::inconsistent_outcomes& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const gvgt::parse_error& e) {
        std::cerr << "error: line " << e.line() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
