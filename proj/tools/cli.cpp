#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "parkfn/cayley.hpp"
#include "parkfn/errors.hpp"
#include "parkfn/parallel.hpp"
#include "parkfn/parking.hpp"
#include "parkfn/stats.hpp"
#include "parkfn/walks.hpp"

namespace parkfn::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

// Floats are emitted at 12 significant digits in both formats.
std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// A double rounded so the JSON number prints the same 12 digits as CSV.
ordered_json jreal(double v) { return ordered_json::parse(format_real(v)); }

struct RecordSet {
    std::vector<std::string> columns;
    std::vector<ordered_json> rows;
};

std::string csv_cell(const ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return format_real(v.get<double>());
    if (v.is_array()) {
        std::string s;
        for (const auto& item : v) {
            if (!s.empty()) s += ' ';
            s += item.dump();
        }
        return s;
    }
    return v.dump();
}

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["command"] = cfg.command;
    j["n"] = cfg.n_values;
    j["k"] = cfg.k;
    j["a"] = cfg.a;
    j["c"] = jreal(cfg.c);
    j["seed"] = cfg.seed;
    j["samples"] = cfg.samples;
    j["method"] = cfg.method;
    j["format"] = cfg.format;
    j["out"] = cfg.out;
    j["threads"] = cfg.threads;
    j["count_only"] = cfg.count_only;
    return j;
}

void emit(const RunConfig& cfg, const RecordSet& records, std::ostream& os) {
    if (cfg.format == "json") {
        ordered_json doc;
        doc["config"] = config_json(cfg);
        doc["results"] = records.rows;
        os << doc.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < records.columns.size(); ++i) {
        if (i) os << ',';
        os << records.columns[i];
    }
    os << '\n';
    for (const auto& row : records.rows) {
        bool first = true;
        for (const auto& col : records.columns) {
            if (!first) os << ',';
            first = false;
            os << csv_cell(row.at(col));
        }
        os << '\n';
    }
}

int single_n(const RunConfig& cfg) {
    if (cfg.n_values.size() != 1)
        throw InvalidInputError("--n takes a single value for this command");
    return cfg.n_values.front();
}

RecordSet handle_sample(const RunConfig& cfg) {
    const int n = single_n(cfg);
    const long long m = std::max<long long>(cfg.samples, 1);
    std::vector<parking::ParkingFunction> draws(m);
    parallel_chunks(m, cfg.threads, [&](long long begin, long long end) {
        for (long long r = begin; r < end; ++r) {
            auto rng = RandomStream::derived(cfg.seed, static_cast<std::uint64_t>(r));
            draws[r] = cayley::sample_uniform_parking(n, rng);
        }
    });
    RecordSet records;
    records.columns = {"sample", "places"};
    for (long long r = 0; r < m; ++r) {
        records.rows.push_back({{"sample", r}, {"places", draws[r].places}});
    }
    return records;
}

RecordSet handle_enumerate(const RunConfig& cfg) {
    const int n = single_n(cfg);
    const auto all = parking::enumerate_parking(n);
    RecordSet records;
    if (cfg.count_only) {
        records.columns = {"count"};
        records.rows.push_back({{"count", all.size()}});
        return records;
    }
    records.columns = {"index", "places"};
    for (std::size_t i = 0; i < all.size(); ++i) {
        records.rows.push_back({{"index", i}, {"places", all[i].places}});
    }
    return records;
}

RecordSet handle_pmf(const RunConfig& cfg) {
    const int n = single_n(cfg);
    const int k = cfg.k;
    if (k < 1 || k > n) throw InvalidInputError("pmf: need 1 <= k <= n");
    auto method = stats::parse_method(cfg.method);
    if (method == stats::Method::monte_carlo)
        throw InvalidInputError("pmf: only exact methods are supported");
    if (method == stats::Method::auto_select) {
        if (k <= 2 && n <= 200) method = stats::Method::exact_dp;
        else if (n <= 7) method = stats::Method::exact_enumeration;
        else throw SizeLimitError("pmf: no exact method feasible at this size");
    }

    RecordSet records;
    records.columns.reserve(k + 1);
    for (int d = 1; d <= k; ++d) records.columns.push_back("i" + std::to_string(d));
    records.columns.push_back("probability");

    if (method == stats::Method::exact_dp) {
        if (k > 2 || n > 200) throw SizeLimitError("pmf: exact-dp limited to k <= 2, n <= 200");
        if (k == 1) {
            const auto means = walks::increment_mean_profile(n);
            for (int i = 1; i <= n; ++i) {
                records.rows.push_back({{"i1", i}, {"probability", jreal(means[i - 1] / n)}});
            }
        } else {
            const auto moments = walks::pair_increment_moments(n);
            const double pairs = static_cast<double>(n) * (n - 1);
            for (int i = 1; i <= n; ++i) {
                for (int j = 1; j <= n; ++j) {
                    const double e = i == j ? moments.second_factorial[i] : moments.cross[i][j];
                    records.rows.push_back(
                        {{"i1", i}, {"i2", j}, {"probability", jreal(e / pairs)}});
                }
            }
        }
        return records;
    }

    const auto oracle = parking::oracle_joint_pmf(n, k);
    std::vector<int> tuple(k, 1);
    while (true) {
        ordered_json row;
        for (int d = 0; d < k; ++d) row["i" + std::to_string(d + 1)] = tuple[d];
        row["probability"] = jreal(oracle.prob(tuple));
        records.rows.push_back(std::move(row));
        int d = k - 1;
        while (d >= 0 && tuple[d] == n) tuple[d--] = 1;
        if (d < 0) break;
        ++tuple[d];
    }
    return records;
}

RecordSet handle_cdf(const RunConfig& cfg) {
    const int n = single_n(cfg);
    const int k = cfg.k;
    if (n > 200) throw SizeLimitError("cdf: exact DP limited to n <= 200");
    RecordSet records;
    records.columns = {"n", "k", "a", "value"};
    const int a_lo = cfg.a >= 0 ? cfg.a : 0;
    const int a_hi = cfg.a >= 0 ? cfg.a : n - 1;
    for (int a = a_lo; a <= a_hi; ++a) {
        records.rows.push_back(
            {{"n", n}, {"k", k}, {"a", a}, {"value", jreal(walks::cdf_symmetric(n, k, a))}});
    }
    return records;
}

RecordSet handle_tv(const RunConfig& cfg) {
    const auto method = stats::parse_method(cfg.method);
    const stats::MonteCarloOptions mc{cfg.samples, cfg.seed, cfg.threads};
    RecordSet records;
    records.columns = {"n", "k", "method", "samples", "stderr", "value", "sqrt_n_times_value"};
    for (int n : cfg.n_values) {
        const auto r = stats::tv_distance(n, cfg.k, method, mc);
        records.rows.push_back({{"n", r.n},
                                {"k", r.k},
                                {"method", stats::method_name(r.method)},
                                {"samples", r.samples},
                                {"stderr", jreal(r.std_error)},
                                {"value", jreal(r.value)},
                                {"sqrt_n_times_value", jreal(std::sqrt(double(r.n)) * r.value)}});
    }
    return records;
}

RecordSet handle_kolmogorov(const RunConfig& cfg) {
    const auto method = stats::parse_method(cfg.method);
    const stats::MonteCarloOptions mc{cfg.samples, cfg.seed, cfg.threads};
    RecordSet records;
    records.columns = {"n", "k", "method", "samples", "grid_points", "stderr", "value"};
    for (int n : cfg.n_values) {
        const auto r = stats::kolmogorov_distance(n, cfg.k, method, mc);
        records.rows.push_back({{"n", r.n},
                                {"k", r.k},
                                {"method", stats::method_name(r.method)},
                                {"samples", r.samples},
                                {"grid_points", r.grid_points},
                                {"stderr", jreal(r.std_error)},
                                {"value", jreal(r.value)}});
    }
    return records;
}

RecordSet limit_records(const stats::LimitTestReport& r) {
    RecordSet records;
    records.columns = {"statistic", "n", "k", "samples", "ks_distance", "threshold", "pass"};
    records.rows.push_back({{"statistic", r.statistic},
                            {"n", r.n},
                            {"k", r.k},
                            {"samples", r.samples},
                            {"ks_distance", jreal(r.ks_distance)},
                            {"threshold", jreal(r.threshold)},
                            {"pass", r.pass}});
    return records;
}

RecordSet handle_tail(const RunConfig& cfg) {
    const int n = single_n(cfg);
    const auto r = stats::tail_comparison(n, cfg.c, cfg.a, cfg.samples, cfg.seed, cfg.threads);
    RecordSet records;
    records.columns = {"n",   "c",   "a",          "k",   "samples",    "lhs",
                       "lhs_stderr", "rhs", "rhs_stderr", "approx_n"};
    records.rows.push_back({{"n", r.n},
                            {"c", jreal(r.c)},
                            {"a", r.a},
                            {"k", r.k},
                            {"samples", r.samples},
                            {"lhs", jreal(r.lhs)},
                            {"lhs_stderr", jreal(r.lhs_stderr)},
                            {"rhs", jreal(r.rhs)},
                            {"rhs_stderr", jreal(r.rhs_stderr)},
                            {"approx_n", r.approx_n}});
    return records;
}

// Exact-oracle suites: tree bijection, DP vs enumeration, cycle lemma.
RecordSet handle_selftest(bool& all_pass) {
    RecordSet records;
    records.columns = {"check", "pass"};
    const auto run_check = [&](const std::string& name, const std::function<bool()>& fn) {
        bool ok = false;
        try {
            ok = fn();
        } catch (const std::exception&) {
            ok = false;
        }
        all_pass = all_pass && ok;
        records.rows.push_back({{"check", name}, {"pass", ok}});
    };

    run_check("enumeration-counts", [] {
        long long expect = 1;  // (n+1)^(n-1)
        for (int n = 1; n <= 5; ++n) {
            expect = 1;
            for (int i = 0; i < n - 1; ++i) expect *= n + 1;
            if (static_cast<long long>(parking::enumerate_parking(n).size()) != expect)
                return false;
        }
        return true;
    });

    const cayley::CayleyTree figure_tree{{-1, 3, 3, 0, 0, 3, 0, 8, 6, 8}};
    run_check("figure-tree-code", [&] {
        return cayley::prufer_encode(figure_tree).code == std::vector<int>{8, 8, 6, 0, 3, 0, 3, 3};
    });
    run_check("figure-tree-parking", [&] {
        const auto ranks = cayley::bfs_ranks(figure_tree);
        return cayley::tree_to_parking(figure_tree).places ==
                   std::vector<int>{2, 2, 1, 1, 2, 1, 8, 4, 8} &&
               ranks.parent_rank[5] == 2;
    });

    run_check("prufer-roundtrip", [] {
        for (int m = 2; m <= 6; ++m) {
            std::vector<int> code(m - 2, 0);
            while (true) {
                cayley::PruferCode pc{code};
                if (cayley::prufer_encode(cayley::prufer_decode(pc)).code != code) return false;
                int d = m - 3;
                while (d >= 0 && code[d] == m - 1) code[d--] = 0;
                if (d < 0) break;
                ++code[d];
            }
        }
        return true;
    });

    run_check("bijection-image", [] {
        for (int n = 1; n <= 4; ++n) {
            std::vector<parking::ParkingFunction> image;
            std::vector<int> code(n - 1, 0);
            while (true) {
                image.push_back(cayley::tree_to_parking(cayley::prufer_decode({code})));
                int d = n - 2;
                while (d >= 0 && code[d] == n) code[d--] = 0;
                if (d < 0) break;
                ++code[d];
            }
            std::sort(image.begin(), image.end());
            if (std::adjacent_find(image.begin(), image.end()) != image.end()) return false;
            if (image != parking::enumerate_parking(n)) return false;
        }
        return true;
    });

    run_check("dp-matches-enumeration", [] {
        for (int n = 1; n <= 5; ++n) {
            for (int k = 1; k <= std::min(n, 2); ++k) {
                const auto oracle = parking::oracle_joint_pmf(n, k);
                std::vector<int> tuple(k, 1);
                while (true) {
                    if (std::abs(walks::joint_pmf(n, tuple) - oracle.prob(tuple)) > 1e-10)
                        return false;
                    int d = k - 1;
                    while (d >= 0 && tuple[d] == n) tuple[d--] = 1;
                    if (d < 0) break;
                    ++tuple[d];
                }
            }
        }
        return true;
    });

    run_check("dp-identities", [] {
        const auto ok = [](double got, double expect) { return std::abs(got - expect) <= 1e-12; };
        return ok(walks::conditioned_expectation(2, walks::WeightQuery{{{1, 1}}}), 4.0 / 3.0) &&
               ok(walks::conditioned_expectation(2, walks::WeightQuery{{{2, 1}}}), 2.0 / 3.0) &&
               ok(walks::conditioned_expectation(2, walks::WeightQuery{{{1, 2}}}), 2.0 / 3.0);
    });

    run_check("cycle-lemma", [] {
        for (int n = 1; n <= 4; ++n) {
            std::vector<int> xs(n + 1, 0);
            // Odometer over all compositions of n into n+1 cells.
            const std::function<bool(int, int)> rec = [&](int pos, int left) {
                if (pos == n) {
                    xs[pos] = left;
                    int valid = 0;
                    for (int rho = 0; rho <= n; ++rho) {
                        std::vector<int> rot(xs.begin() + rho, xs.end());
                        rot.insert(rot.end(), xs.begin(), xs.begin() + rho);
                        valid += walks::is_excursion(rot);
                    }
                    if (valid != 1) return false;
                    const int rho = walks::cycle_rotation(xs);
                    std::vector<int> rot(xs.begin() + rho, xs.end());
                    rot.insert(rot.end(), xs.begin(), xs.begin() + rho);
                    return walks::is_excursion(rot);
                }
                for (int v = 0; v <= left; ++v) {
                    xs[pos] = v;
                    if (!rec(pos + 1, left - v)) return false;
                }
                return true;
            };
            if (!rec(0, n)) return false;
        }
        return true;
    });

    return records;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;

    CLI::App app{"Uniform parking functions: sampling, exact laws, distances, limit probes"};
    app.require_subcommand(1);

    const auto add_output_flags = [&](CLI::App* cmd) {
        cmd->add_option("--format", cfg.format, "Output format: csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", cfg.out, "Output path (default stdout)");
    };
    std::map<const CLI::App*, long long> default_samples_of;
    const auto add_mc_flags = [&](CLI::App* cmd, long long default_samples) {
        default_samples_of[cmd] = default_samples;
        cmd->add_option("--seed", cfg.seed, "Base seed for derived replicate streams");
        cmd->add_option("--samples", cfg.samples,
                        "Monte Carlo replicates (default " + std::to_string(default_samples) + ")");
        cmd->add_option("--threads", cfg.threads, "Worker count (does not change results)");
    };

    auto* sample = app.add_subcommand("sample", "Draw exactly uniform parking functions");
    sample->add_option("--n", cfg.n_values, "Size")->required()->expected(1);
    add_mc_flags(sample, 1);
    add_output_flags(sample);

    auto* enumerate = app.add_subcommand("enumerate", "List all parking functions of size n");
    enumerate->add_option("--n", cfg.n_values, "Size (<= 8)")->required()->expected(1);
    enumerate->add_flag("--count-only", cfg.count_only, "Print the count only");
    add_output_flags(enumerate);

    auto* pmf = app.add_subcommand("pmf", "Exact joint law of the first k places");
    pmf->add_option("--n", cfg.n_values, "Size")->required()->expected(1);
    pmf->add_option("--k", cfg.k, "Number of leading places");
    pmf->add_option("--method", cfg.method, "auto | exact-dp | exact-enumeration");
    add_output_flags(pmf);

    auto* cdf = app.add_subcommand("cdf", "P(first k places all <= n-a), exact DP");
    cdf->add_option("--n", cfg.n_values, "Size (<= 200)")->required()->expected(1);
    cdf->add_option("--k", cfg.k, "Number of leading places");
    cdf->add_option("--a", cfg.a, "Offset from n (default: all a in [0, n-1])");
    add_output_flags(cdf);

    auto* tv = app.add_subcommand("tv", "Total-variation sum vs i.i.d. uniforms");
    tv->add_option("--n", cfg.n_values, "Size, comma-separated sweep allowed")
        ->required()
        ->delimiter(',');
    tv->add_option("--k", cfg.k, "Number of leading places");
    tv->add_option("--method", cfg.method, "auto | exact-dp | exact-enumeration | monte-carlo");
    add_mc_flags(tv, 10000);
    add_output_flags(tv);

    auto* kol = app.add_subcommand("kolmogorov", "Max CDF deviation vs i.i.d. uniforms");
    kol->add_option("--n", cfg.n_values, "Size, comma-separated sweep allowed")
        ->required()
        ->delimiter(',');
    kol->add_option("--k", cfg.k, "Number of leading places");
    kol->add_option("--method", cfg.method, "auto | exact-dp | exact-enumeration | monte-carlo");
    add_mc_flags(kol, 10000);
    add_output_flags(kol);

    auto* lsum = app.add_subcommand("limit-sum", "KS test of the normalized sum vs N(0,1)");
    lsum->add_option("--n", cfg.n_values, "Size")->required()->expected(1);
    lsum->add_option("--k", cfg.k, "Number of leading places")->required();
    add_mc_flags(lsum, 2000);
    add_output_flags(lsum);

    auto* lmax = app.add_subcommand("limit-max", "KS test of the normalized max vs Exp(1)");
    lmax->add_option("--n", cfg.n_values, "Size")->required()->expected(1);
    lmax->add_option("--k", cfg.k, "Number of leading places")->required();
    add_mc_flags(lmax, 2000);
    add_output_flags(lmax);

    auto* tail = app.add_subcommand("tail", "Symmetric tail: parking side vs walk side");
    tail->add_option("--n", cfg.n_values, "Size")->required()->expected(1);
    tail->add_option("--c", cfg.c, "Fraction in (0, 1], k = round(c*n)")->required();
    tail->add_option("--a", cfg.a, "Tail offset (<= 20)")->required();
    add_mc_flags(tail, 50000);
    add_output_flags(tail);

    auto* selftest = app.add_subcommand("selftest", "Run the exact-oracle suites");
    add_output_flags(selftest);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    if (const auto it = default_samples_of.find(chosen); it != default_samples_of.end()) {
        if (chosen->count("--samples") == 0) cfg.samples = it->second;
    }

    try {
        RecordSet records;
        bool selftest_pass = true;
        if (cfg.command == "sample") records = handle_sample(cfg);
        else if (cfg.command == "enumerate") records = handle_enumerate(cfg);
        else if (cfg.command == "pmf") records = handle_pmf(cfg);
        else if (cfg.command == "cdf") records = handle_cdf(cfg);
        else if (cfg.command == "tv") records = handle_tv(cfg);
        else if (cfg.command == "kolmogorov") records = handle_kolmogorov(cfg);
        else if (cfg.command == "limit-sum")
            records = limit_records(stats::sum_clt_test(single_n(cfg), cfg.k, cfg.samples,
                                                        cfg.seed, cfg.threads));
        else if (cfg.command == "limit-max")
            records = limit_records(stats::max_exponential_test(single_n(cfg), cfg.k, cfg.samples,
                                                                cfg.seed, cfg.threads));
        else if (cfg.command == "tail") records = handle_tail(cfg);
        else if (cfg.command == "selftest") records = handle_selftest(selftest_pass);

        if (cfg.out.empty()) {
            emit(cfg, records, out);
        } else {
            std::ofstream file(cfg.out, std::ios::binary);
            if (!file) throw Error("cannot open output file: " + cfg.out);
            emit(cfg, records, file);
        }
        return (cfg.command == "selftest" && !selftest_pass) ? 1 : 0;
    } catch (const SizeLimitError& e) {
        err << "size guard: " << e.what() << '\n';
        return 1;
    } catch (const InvalidInputError& e) {
        err << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace parkfn::cli
