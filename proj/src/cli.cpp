#include "qbounds/cli.hpp"

#include <atomic>
#include <optional>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbounds/codes.hpp"
#include "qbounds/delsarte_lp.hpp"

namespace qbounds {

namespace {

int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QBOUNDS_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

// Order-preserving parallel map: output is independent of the worker count.
template <typename T, typename F>
auto parallel_map(const std::vector<T>& items, F&& fn, int workers)
    -> std::vector<decltype(fn(items.front()))> {
    using R = decltype(fn(items.front()));
    std::vector<R> results(items.size());
    if (workers <= 1 || items.size() <= 1) {
        for (size_t i = 0; i < items.size(); ++i) results[i] = fn(items[i]);
        return results;
    }
    std::atomic<size_t> next{0};
    auto run = [&] {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= items.size()) return;
            results[i] = fn(items[i]);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    return results;
}

std::string method_name(Method m) {
    switch (m) {
        case Method::levenshtein: return "levenshtein";
        case Method::refined: return "refined";
        case Method::closed3: return "closed3";
        case Method::closed4: return "closed4";
        case Method::lp: return "lp";
    }
    return "?";
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::lp_optimal: return "lp_optimal";
        case Verdict::not_optimal: return "not_optimal";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

nlohmann::json report_json(const BoundReport& report) {
    nlohmann::json j;
    j["q"] = report.space.q;
    j["n"] = report.space.n;
    j["d"] = report.d;
    j["s"] = to_pq(report.s);
    j["m"] = report.frame.m;
    j["method"] = method_name(report.method);
    j["value"] = to_pq(report.value);
    j["code_bound"] = report.code_bound.get_str();
    j["levenshtein"] = to_pq(report.levenshtein_value);
    j["fallback"] = report.fell_back_to_levenshtein;
    if (report.polynomial) {
        const auto& ip = *report.polynomial;
        nlohmann::json coeffs = nlohmann::json::array();
        for (const auto& c : ip.poly.coeffs()) coeffs.push_back(to_pq(c));
        j["polynomial"] = coeffs;
        nlohmann::json f = nlohmann::json::array();
        for (const auto& c : ip.expansion.coeffs) f.push_back(to_pq(c));
        j["expansion"] = f;
        j["feasible"] = ip.verdict == Feasibility::feasible;
        j["a1"] = ip.a1_ok;
    }
    if (!report.diagnostic.empty()) j["diagnostic"] = report.diagnostic;
    return j;
}

void print_report_text(const BoundReport& report, std::ostream& out) {
    out << "q=" << report.space.q << " n=" << report.space.n << " d=" << report.d
        << " s=" << to_pq(report.s) << " (frame m=" << report.frame.m << ")\n";
    out << "  " << method_name(report.method) << " bound: " << to_pq(report.value)
        << "  => A_q(n,s) <= " << report.code_bound.get_str() << "\n";
    out << "  levenshtein: " << to_pq(report.levenshtein_value) << "\n";
    if (report.polynomial) {
        const auto& ip = *report.polynomial;
        out << "  polynomial coefficients (t^0..):";
        for (const auto& c : ip.poly.coeffs()) out << " " << to_pq(c);
        out << "\n  expansion f_0..f_m:";
        for (const auto& c : ip.expansion.coeffs) out << " " << to_pq(c);
        out << "\n  feasible: " << (ip.verdict == Feasibility::feasible ? "yes" : "no")
            << "  (A1): " << (ip.a1_ok ? "ok" : "violated") << "\n";
    }
    if (!report.diagnostic.empty()) out << "  note: " << report.diagnostic << "\n";
}

struct NumericMode {
    bool exact = true;
    int bits = BigFloat::default_precision;
};

NumericMode parse_mode(const std::string& text) {
    NumericMode mode;
    if (text == "exact") return mode;
    if (text.rfind("bigfloat", 0) == 0) {
        mode.exact = false;
        const auto colon = text.find(':');
        if (colon != std::string::npos) {
            mode.bits = std::stoi(text.substr(colon + 1));
            if (mode.bits < 24) throw CLI::ValidationError("bigfloat precision too small");
        }
        return mode;
    }
    throw CLI::ValidationError("unknown numeric mode: " + text);
}

double rate_of(const Rational& bound, int n, int bits = BigFloat::default_precision) {
    return BigFloat(bound, bits).log2().to_double() / n;
}

struct ScanRow {
    std::optional<BoundReport> report;
    std::string error;
};

int run_bound(int q, int n, long d, const std::string& s_text, bool allow_offgrid,
              const std::string& method, const std::string& format, std::ostream& out) {
    Space space(n, q);
    Grid grid(space);
    bool offgrid = false;
    if (!s_text.empty()) {
        const Rational s = rat_parse(s_text);
        if (s < -1 || s >= 1) throw std::invalid_argument("s must lie in [-1, 1)");
        const auto idx = grid.index_of(s);
        if (!idx && !allow_offgrid)
            throw std::invalid_argument("s is not an inner-product grid value (t_i = -1 + 2i/n); "
                                        "pass --allow-offgrid for research use");
        offgrid = !idx;
        if (idx) d = n - *idx;
        if (offgrid) {
            BoundReport report = refined_bound_at(space, s);
            if (format == "json") {
                nlohmann::json doc;
                doc["schema_version"] = 1;
                doc["offgrid"] = true;
                doc["reports"].push_back(report_json(report));
                out << doc.dump(2) << "\n";
            } else {
                out << "note: s is off the inner-product grid; the value bounds the framework "
                       "objective, not a code size\n";
                print_report_text(report, out);
            }
            return 0;
        }
    }
    if (d < 1 || d > n) throw std::invalid_argument("distance out of range");
    std::vector<BoundReport> reports;
    if (method == "refined" || method == "all") reports.push_back(refined_bound(space, d));
    if (method == "levenshtein" || method == "all") reports.push_back(levenshtein_report(space, d));
    if (method == "closed3") reports.push_back(closed3(space, d).first);
    if (method == "closed4") reports.push_back(closed4(space, d).first);
    if (method == "lp" || method == "all") {
        BoundReport lp{space};
        lp.d = d;
        lp.s = Grid(space).t_of_d(rat(d));
        lp.method = Method::lp;
        lp.frame = classify(space, lp.s);
        lp.value = lp_solve(lp_build(space, d)).bound;
        lp.levenshtein_value = lev_bound(lp.frame, space, lp.s);
        lp.code_bound = floor_int(lp.value);
        reports.push_back(std::move(lp));
    }
    if (reports.empty()) throw CLI::ValidationError("unknown method: " + method);
    if (format == "json") {
        nlohmann::json doc;
        doc["schema_version"] = 1;
        for (const auto& r : reports) doc["reports"].push_back(report_json(r));
        out << doc.dump(2) << "\n";
    } else {
        for (const auto& r : reports) print_report_text(r, out);
    }
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Levenshtein-type and Delsarte LP bounds for q-ary codes"};
    app.require_subcommand(1);

    int q = 2, n = 0, workers = 0, lp_cap = 64;
    long d = 0;
    std::string method = "all", format = "text", mode = "exact", s_text;
    bool all_d = false, with_counts = false, show_all = false, allow_offgrid = false;

    auto* cmd_bound = app.add_subcommand("bound", "bound for one (q, n, d) or (q, n, s)");
    cmd_bound->add_option("--q", q, "alphabet size")->required();
    cmd_bound->add_option("--n", n, "codelength")->required();
    cmd_bound->add_option("--d", d, "minimum distance");
    cmd_bound->add_option("--s", s_text, "maximal inner product, as p/q");
    cmd_bound->add_flag("--allow-offgrid", allow_offgrid, "accept s outside T_n");
    cmd_bound->add_option("--format", format, "text|json|csv");
    cmd_bound->add_option("--mode", mode, "exact|bigfloat (numeric mode)");
    cmd_bound->add_option("--method", method, "refined|levenshtein|closed3|closed4|lp|all");

    auto* cmd_scan = app.add_subcommand("scan", "bounds over ranges of n and d");
    int n_min = 0, n_max = 0, m_filter = 0;
    long d_min = 1, d_max = 0;
    cmd_scan->add_option("--q", q)->required();
    cmd_scan->add_option("--n-min", n_min)->required();
    cmd_scan->add_option("--n-max", n_max)->required();
    cmd_scan->add_option("--d-min", d_min);
    cmd_scan->add_option("--d-max", d_max);
    cmd_scan->add_option("--m", m_filter, "restrict to frames of this degree");
    cmd_scan->add_option("--format", format);
    cmd_scan->add_option("--mode", mode);
    cmd_scan->add_option("--workers", workers);

    auto* cmd_rate = app.add_subcommand("rate", "rate table (1/n) log2(bound)");
    std::vector<double> ratios;
    cmd_rate->add_option("--q", q);
    cmd_rate->add_option("--n", n)->required();
    cmd_rate->add_option("--ratios", ratios, "d/n values")->delimiter(',');
    cmd_rate->add_option("--format", format);
    cmd_rate->add_option("--mode", mode);
    cmd_rate->add_option("--workers", workers);

    auto* cmd_certify = app.add_subcommand("certify", "KKT optimality certificate");
    cmd_certify->add_option("--q", q)->required();
    cmd_certify->add_option("--n", n)->required();
    cmd_certify->add_option("--d", d);
    cmd_certify->add_flag("--all-d", all_d, "all d in the L_3 range");
    cmd_certify->add_option("--format", format);
    cmd_certify->add_option("--mode", mode);

    auto* cmd_table2 = app.add_subcommand("table2", "attainment candidates table");
    std::string q_range = "2..5";
    int table_n_max = 100;
    cmd_table2->add_option("--q", q_range, "single value or a..b");
    cmd_table2->add_option("--n-max", table_n_max);
    cmd_table2->add_flag("--counts", with_counts, "print candidate/pass tallies");
    cmd_table2->add_flag("--all", show_all, "include non-passing candidates");
    cmd_table2->add_option("--format", format);

    auto* cmd_compare = app.add_subcommand("compare", "refined bound vs exact LP");
    cmd_compare->add_option("--q", q)->required();
    cmd_compare->add_option("--n", n)->required();
    cmd_compare->add_option("--d", d)->required();
    cmd_compare->add_option("--lp-cap", lp_cap);
    cmd_compare->add_option("--format", format);

    auto* cmd_sq = app.add_subcommand("sq", "largest s with refined == LP, per n");
    std::string n_range;
    cmd_sq->add_option("--q", q)->required();
    cmd_sq->add_option("--n", n_range, "single value or a..b")->required();
    cmd_sq->add_option("--lp-cap", lp_cap);
    cmd_sq->add_option("--format", format);

    auto* cmd_dump = app.add_subcommand("dump-lp", "write the LP instance in text form");
    cmd_dump->add_option("--q", q)->required();
    cmd_dump->add_option("--n", n)->required();
    cmd_dump->add_option("--d", d)->required();

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    auto parse_range = [](const std::string& text) -> std::pair<int, int> {
        const auto pos = text.find("..");
        if (pos == std::string::npos) {
            const int v = std::stoi(text);
            return {v, v};
        }
        return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 2))};
    };

    try {
        // bound-critical arithmetic is exact in every mode; the mode sets the
        // float precision used for logarithms and printing
        const NumericMode numeric_mode = parse_mode(mode);
        if (cmd_bound->parsed()) {
            if (d == 0 && s_text.empty())
                throw CLI::ValidationError("bound needs --d or --s");
            return run_bound(q, n, d, s_text, allow_offgrid, method, format, out);
        }

        if (cmd_scan->parsed()) {
            std::vector<std::pair<int, long>> jobs;
            for (int nn = n_min; nn <= n_max; ++nn) {
                const long hi = d_max > 0 ? std::min<long>(d_max, nn) : nn;
                for (long dd = std::max<long>(1, d_min); dd <= hi; ++dd) jobs.emplace_back(nn, dd);
            }
            auto rows = parallel_map(jobs, [&](const std::pair<int, long>& job) {
                ScanRow row{};
                try {
                    row.report.emplace(refined_bound(Space(job.first, q), job.second));
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                return row;
            }, worker_count(workers));
            if (format == "json") {
                nlohmann::json doc;
                doc["schema_version"] = 1;
                doc["rows"] = nlohmann::json::array();
                for (const auto& row : rows) {
                    if (!row.report || (m_filter && row.report->frame.m != m_filter)) continue;
                    doc["rows"].push_back(report_json(*row.report));
                }
                out << doc.dump(2) << "\n";
            } else {
                out << "q,n,d,s,m,levenshtein,refined,code_bound,feasible\n";
                for (const auto& row : rows) {
                    if (!row.report || (m_filter && row.report->frame.m != m_filter)) continue;
                    const auto& r = *row.report;
                    out << q << ',' << r.space.n << ',' << r.d << ',' << to_pq(r.s) << ','
                        << r.frame.m << ',' << to_pq(r.levenshtein_value) << ',' << to_pq(r.value)
                        << ',' << r.code_bound.get_str() << ','
                        << (r.fell_back_to_levenshtein ? 0 : 1) << '\n';
                }
            }
            return 0;
        }

        if (cmd_rate->parsed()) {
            if (ratios.empty()) ratios = {0.25, 0.30, 0.35, 0.40, 0.45};
            Space space(n, q);
            std::vector<long> ds;
            for (double r : ratios) ds.push_back(std::lround(r * n));
            auto rows = parallel_map(ds, [&](long dd) {
                BoundReport rep = refined_bound(space, dd);
                return std::make_tuple(dd, rep.levenshtein_value, rep.value);
            }, worker_count(workers));
            if (format == "json") {
                nlohmann::json doc;
                doc["schema_version"] = 1;
                doc["n"] = n;
                doc["q"] = q;
                for (size_t i = 0; i < rows.size(); ++i) {
                    nlohmann::json r;
                    r["ratio"] = ratios[i];
                    r["d"] = std::get<0>(rows[i]);
                    r["levenshtein"] = to_pq(std::get<1>(rows[i]));
                    r["refined"] = to_pq(std::get<2>(rows[i]));
                    r["levenshtein_rate"] = rate_of(std::get<1>(rows[i]), n, numeric_mode.bits);
                    r["refined_rate"] = rate_of(std::get<2>(rows[i]), n, numeric_mode.bits);
                    doc["rows"].push_back(std::move(r));
                }
                out << doc.dump(2) << "\n";
            } else {
                out << "d/n,d,levenshtein_rate,refined_rate\n";
                out << std::fixed << std::setprecision(3);
                for (size_t i = 0; i < rows.size(); ++i) {
                    out << ratios[i] << ',' << std::get<0>(rows[i]) << ','
                        << rate_of(std::get<1>(rows[i]), n, numeric_mode.bits) << ','
                        << rate_of(std::get<2>(rows[i]), n, numeric_mode.bits) << '\n';
                }
            }
            return 0;
        }

        if (cmd_certify->parsed()) {
            Space space(n, q);
            std::vector<long> ds;
            if (all_d) {
                RangeParams ranges(space);
                for (long dd = 1; dd <= n; ++dd)
                    if (ranges.in_j3(j_of_d(space, dd))) ds.push_back(dd);
            } else {
                if (d <= 0) throw CLI::ValidationError("certify needs --d or --all-d");
                ds.push_back(d);
            }
            out << "q,n,d,verdict,witness\n";
            bool any_not_optimal = false;
            for (long dd : ds) {
                Certificate cert = certify(space, dd);
                if (cert.verdict == Verdict::not_optimal) any_not_optimal = true;
                out << q << ',' << n << ',' << dd << ',' << verdict_name(cert.verdict) << ','
                    << (cert.witness ? std::to_string(*cert.witness) : "") << '\n';
            }
            (void)any_not_optimal;
            return 0;
        }

        if (cmd_table2->parsed()) {
            auto [q_lo, q_hi] = parse_range(q_range);
            std::vector<int> qs;
            for (int qq = q_lo; qq <= q_hi; ++qq) qs.push_back(qq);
            std::map<int, CandidateCounts> counts;
            auto rows = enumerate_candidates(qs, table_n_max, &counts);
            if (format == "json")
                out << table2_json(rows);
            else
                out << table2_csv(rows);
            if (with_counts) {
                for (const auto& [qq, tally] : counts)
                    out << "# q=" << qq << " passing " << tally.passing << " of " << tally.candidates
                        << " integral candidates\n";
            }
            return 0;
        }

        if (cmd_compare->parsed()) {
            Space space(n, q);
            if (n > lp_cap) {
                err << "n exceeds --lp-cap " << lp_cap << "; certificate-only mode\n";
                Certificate cert = certify(space, d);
                out << "certificate: " << verdict_name(cert.verdict) << "\n";
                return 0;
            }
            CompareRecord record = lp_compare(space, d);
            if (format == "json") {
                nlohmann::json doc;
                doc["schema_version"] = 1;
                doc["refined"] = to_pq(record.refined);
                doc["lp"] = to_pq(record.lp);
                doc["equal"] = record.equal;
                doc["certificate"] = verdict_name(record.certificate);
                out << doc.dump(2) << "\n";
            } else {
                out << "refined=" << to_pq(record.refined) << " lp=" << to_pq(record.lp)
                    << " equal=" << (record.equal ? "yes" : "no")
                    << " certificate=" << verdict_name(record.certificate) << "\n";
            }
            return 0;
        }

        if (cmd_sq->parsed()) {
            auto [n_lo, n_hi] = parse_range(n_range);
            out << "q,n,s_q,failure_found,scanned\n";
            for (int nn = n_lo; nn <= n_hi; ++nn) {
                if (nn > lp_cap) {
                    err << "n=" << nn << " exceeds --lp-cap " << lp_cap << "; skipped\n";
                    continue;
                }
                SqScanResult result = sq_scan(Space(nn, q));
                out << q << ',' << nn << ',' << to_pq(result.s_q) << ','
                    << (result.failure_found ? 1 : 0) << ',' << result.scanned << '\n';
            }
            return 0;
        }

        if (cmd_dump->parsed()) {
            out << lp_dump(lp_build(Space(n, q), d));
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        err << "internal inconsistency: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
    err << "no subcommand\n";
    return 2;
}

}  // namespace qbounds
