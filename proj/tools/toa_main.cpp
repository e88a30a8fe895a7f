#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "toa/errors.hpp"
#include "toa/kernel_engine.hpp"
#include "toa/operator_assembly.hpp"
#include "toa/potential.hpp"
#include "toa/series_oracle.hpp"
#include "toa/verify.hpp"
#include "toa/wigner.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonConfig {
    std::string potential_path;
    std::optional<double> mass;
    std::optional<double> hbar;
    int n_max = 3;
    int grid = 33;
    double tol = 1e-13;
    std::string format = "csv";
    std::string out;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::vector<double> parse_range(const std::string& text, const char* flag) {
    auto bad = [&] { return toa::InvalidArgument(std::string(flag) + ": expected start:stop:step or a number, got \"" + text + "\""); };
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw bad();
        } catch (const std::logic_error&) {
            throw bad();
        }
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) throw bad();
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0.0) || stop < start) throw bad();
    const double slack = 1e-12 * std::max(1.0, std::abs(stop));
    std::vector<double> out;
    for (long k = 0;; ++k) {
        double x = start + static_cast<double>(k) * step;
        if (x > stop + slack) break;
        if (std::abs(x - stop) <= slack) x = stop;
        out.push_back(x);
        if (k > 10'000'000) throw bad();
    }
    return out;
}

toa::PotentialSeries load_potential(const CommonConfig& cfg) {
    std::ifstream in(cfg.potential_path);
    if (!in) throw toa::InvalidArgument("cannot open potential file \"" + cfg.potential_path + "\"");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw toa::InvalidArgument("potential file is not valid JSON: " + std::string(e.what()));
    }
    auto V = toa::potential_from_json(doc);
    if (cfg.mass || cfg.hbar) V = V.with_constants(cfg.mass.value_or(V.mass()), cfg.hbar.value_or(V.hbar()));
    return V;
}

void validate(const CommonConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw toa::InvalidArgument("--tol must be positive");
    if (cfg.grid < 3) throw toa::InvalidArgument("--grid must be at least 3");
    if (cfg.n_max < 0) throw toa::InvalidArgument("--nmax must be non-negative");
}

toa::EngineOptions engine_options(const CommonConfig& cfg) {
    toa::EngineOptions opt;
    opt.nodes = cfg.grid;
    opt.tol = cfg.tol;
    return opt;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit(std::ostream& os, const Table& t, const std::string& format) {
    if (format == "json") {
        json doc;
        doc["columns"] = t.columns;
        doc["rows"] = json::array();
        for (const auto& row : t.rows) {
            json r = json::array();
            for (double x : row) r.push_back(std::isfinite(x) ? json(x) : json(nullptr));
            doc["rows"].push_back(r);
        }
        os << doc.dump(1) << '\n';
        return;
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
}

template <class Writer>
void with_output(const std::string& path, Writer write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream f(path);
    if (!f) throw toa::InvalidArgument("cannot write \"" + path + "\"");
    write(f);
}

int cmd_kernel(const CommonConfig& cfg, const std::string& u_range, const std::string& v_range) {
    validate(cfg);
    const auto V = load_potential(cfg);
    const auto us = parse_range(u_range, "--u");
    const auto vs = parse_range(v_range, "--v");
    toa::KernelDomain d;
    d.u_min = std::min(0.0, *std::min_element(us.begin(), us.end()));
    d.u_max = std::max(0.0, *std::max_element(us.begin(), us.end()));
    if (d.u_max == d.u_min) d.u_max = 1.0;
    d.v_max = 0.0;
    for (double v : vs) d.v_max = std::max(d.v_max, std::abs(v));
    if (d.v_max == 0.0) d.v_max = 1.0;
    toa::KernelEngine engine(V, d, engine_options(cfg));

    Table t;
    t.columns = {"u", "v"};
    for (int n = 0; n <= cfg.n_max; ++n) t.columns.push_back("T" + std::to_string(n));
    t.columns.push_back("sum");
    for (double u : us) {
        for (double v : vs) {
            const auto k = engine.full_kernel(cfg.n_max, u, v);
            std::vector<double> row = {u, v};
            row.insert(row.end(), k.terms.begin(), k.terms.end());
            row.push_back(k.value);
            t.rows.push_back(std::move(row));
        }
    }
    with_output(cfg.out, [&](std::ostream& os) { emit(os, t, cfg.format); });
    return 0;
}

int cmd_wigner(const CommonConfig& cfg, const std::string& q_range, const std::string& p_range, int k_max, int J) {
    validate(cfg);
    if (k_max < 0) throw toa::InvalidArgument("--kmax must be non-negative");
    if (J < cfg.n_max + 1) throw toa::InvalidArgument("--table must exceed --nmax");
    const auto V = load_potential(cfg);
    const auto qs = parse_range(q_range, "--q");
    const auto ps = parse_range(p_range, "--p");
    const int M = 1 + std::max(1, V.degree()) * J;
    const auto series = toa::wigner_of_series(toa::build_alpha_orders(V, M, J), V.mass(), V.hbar());

    Table t;
    t.columns = {"q", "p", "tau_classical", "tau_ltoa"};
    for (int n = 0; n <= cfg.n_max; ++n) t.columns.push_back("W" + std::to_string(n));
    for (int n = 1; n <= cfg.n_max; ++n) t.columns.push_back("exponent" + std::to_string(n));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double q : qs) {
        for (double p : ps) {
            if (p == 0.0) throw toa::InvalidArgument("--p must not contain 0");
            std::vector<double> row = {q, p};
            try {
                row.push_back(toa::classical_toa(V, q, p, std::max(cfg.tol, 1e-12)));
            } catch (const toa::ClassicallyForbidden&) {
                row.push_back(nan);
            }
            row.push_back(toa::ltoa_series(V, q, p, k_max));
            for (int n = 0; n <= cfg.n_max; ++n) row.push_back(series.evaluate_order(2 * n, q, p));
            for (int n = 1; n <= cfg.n_max; ++n) {
                double e = nan;
                if (!V.is_linear()) {
                    const double a = series.evaluate_order(2 * n, q, p, V.hbar());
                    const double b = series.evaluate_order(2 * n, q, p, 0.5 * V.hbar());
                    if (std::abs(a) > 1e-300 && std::abs(b) > 1e-300) e = std::log(a / b) / std::log(2.0);
                }
                row.push_back(e);
            }
            t.rows.push_back(std::move(row));
        }
    }
    with_output(cfg.out, [&](std::ostream& os) { emit(os, t, cfg.format); });
    return 0;
}

int cmd_operator(const CommonConfig& cfg, double L, int N, const std::string& psi_path, const std::string& record) {
    validate(cfg);
    if (N < 2) throw toa::InvalidArgument("--N must be at least 2");
    if (!(L > 0.0)) throw toa::InvalidArgument("--L must be positive");
    const auto V = load_potential(cfg);
    std::optional<toa::Wavefunction> psi;
    const toa::CoordinateGrid grid(L, N);
    if (!psi_path.empty()) {
        std::ifstream in(psi_path);
        if (!in) throw toa::InvalidArgument("cannot open wavefunction file \"" + psi_path + "\"");
        psi = toa::Wavefunction::from_csv(in, grid);
    }
    const bool to_stdout = cfg.out.empty() || cfg.out == "-";
    if (psi && cfg.format == "csv" && to_stdout && record.empty()) {
        throw toa::InvalidArgument("with --psi and CSV on stdout, give --record for the expectation value");
    }
    const auto K = toa::assemble(V, cfg.n_max, L, N, engine_options(cfg));
    json rec;
    if (psi) {
        const auto e = toa::expectation_detail(K, *psi);
        rec["value"] = e.value;
        rec["imag_residue"] = e.imag_residue;
        rec["hermiticity_defect"] = toa::hermiticity_defect(K);
        toa::expectation(K, *psi);
    }
    if (cfg.format == "json") {
        json doc;
        doc["L"] = L;
        doc["N"] = N;
        doc["n_max"] = cfg.n_max;
        doc["entries"] = json::array();
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) doc["entries"].push_back({i, j, K.at(i, j).real(), K.at(i, j).imag()});
        }
        if (psi) doc["expectation"] = rec;
        with_output(cfg.out, [&](std::ostream& os) { os << doc.dump() << '\n'; });
        return 0;
    }
    with_output(cfg.out, [&](std::ostream& os) { toa::write_matrix_csv(os, K); });
    if (psi) {
        if (record.empty()) {
            std::cout << rec.dump() << '\n';
        } else {
            with_output(record, [&](std::ostream& os) { os << rec.dump(1) << '\n'; });
        }
    }
    return 0;
}

int cmd_verify(const std::string& only, const std::string& out) {
    if (!only.empty()) {
        const auto names = toa::check_names();
        if (std::find(names.begin(), names.end(), only) == names.end()) {
            throw toa::InvalidArgument("unknown check \"" + only + "\"");
        }
    }
    const auto results = toa::run_verification(only);
    const auto doc = toa::report_to_json(results);
    for (const auto& r : results) {
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << "  measured=" << r.measured << " tol=" << r.tol
                  << "  (" << r.detail << ")\n";
    }
    with_output(out, [&](std::ostream& os) { os << doc.dump(1) << '\n'; });
    return doc["passed"].get<bool>() ? 0 : 1;
}

void error_json(const std::string& kind, const std::string& message) {
    json e;
    e["error"] = kind;
    e["message"] = message;
    std::cerr << e.dump() << '\n';
}

void add_common(CLI::App* cmd, CommonConfig& cfg, bool needs_potential) {
    auto* opt = cmd->add_option("--potential", cfg.potential_path, "Potential JSON {\"coeffs\":[a1,...],\"mass\":m,\"hbar\":h}");
    if (needs_potential) opt->required();
    cmd->add_option("--mass", cfg.mass, "Override the particle mass");
    cmd->add_option("--hbar", cfg.hbar, "Override the reduced Planck constant");
    cmd->add_option("--nmax", cfg.n_max, "Highest correction order")->capture_default_str();
    cmd->add_option("--grid", cfg.grid, "Interpolation nodes per axis")->capture_default_str();
    cmd->add_option("--tol", cfg.tol, "Relative quadrature tolerance")->capture_default_str();
    cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    cmd->add_option("--out", cfg.out, "Output path (stdout when omitted)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-of-arrival kernels, corrections and operators"};
    app.require_subcommand(1);

    CommonConfig kcfg, wcfg, ocfg;
    std::string u_range = "0:1:0.1", v_range = "0:1:0.1";
    auto* kernel = app.add_subcommand("kernel", "Tabulate T0..Tn over a (u,v) lattice");
    add_common(kernel, kcfg, true);
    kernel->add_option("--u", u_range, "u range start:stop:step")->capture_default_str();
    kernel->add_option("--v", v_range, "v range start:stop:step")->capture_default_str();

    std::string q_range = "-1", p_range = "1";
    int k_max = 10, table = 14;
    auto* wigner = app.add_subcommand("wigner", "Classical, local and phase-space arrival times");
    add_common(wigner, wcfg, true);
    wigner->add_option("--q", q_range, "q range start:stop:step")->capture_default_str();
    wigner->add_option("--p", p_range, "p range start:stop:step")->capture_default_str();
    wigner->add_option("--kmax", k_max, "Terms of the local arrival-time series")->capture_default_str();
    wigner->add_option("--table", table, "Half v-power truncation of the coefficient table")->capture_default_str();

    double L = 1.0;
    int N = 40;
    std::string psi_path, record;
    ocfg.n_max = 1;
    auto* op = app.add_subcommand("operator", "Assemble the operator matrix on [-L, L]");
    add_common(op, ocfg, true);
    op->add_option("--L", L, "Half width of the coordinate grid")->capture_default_str();
    op->add_option("--N", N, "Number of grid points")->capture_default_str();
    op->add_option("--psi", psi_path, "Wavefunction CSV (q,re,im) for an expectation value");
    op->add_option("--record", record, "Where to write the expectation record");

    std::string only, verify_out;
    auto* verify = app.add_subcommand("verify", "Run the acceptance suite and write a JSON report");
    verify->add_option("--only", only, "Run a single named check");
    verify->add_option("--out", verify_out, "Report path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_json("InvalidArgument", e.what());
        return kExitConfig;
    }

    try {
        if (*kernel) return cmd_kernel(kcfg, u_range, v_range);
        if (*wigner) return cmd_wigner(wcfg, q_range, p_range, k_max, table);
        if (*op) return cmd_operator(ocfg, L, N, psi_path, record);
        if (*verify) return cmd_verify(only, verify_out);
    } catch (const toa::InvalidArgument& e) {
        error_json(e.kind(), e.what());
        return kExitConfig;
    } catch (const toa::Error& e) {
        error_json(e.kind(), e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        error_json("InternalError", e.what());
        return kExitNumeric;
    }
    return kExitConfig;
}
