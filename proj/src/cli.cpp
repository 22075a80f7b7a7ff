#include "optomech/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "optomech/errors.hpp"
#include "optomech/fock_oracle.hpp"
#include "optomech/pipeline.hpp"

namespace optomech {

namespace {

void write_row(std::ostream& os, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) os << ',';
        os << c;
        first = false;
    }
    os << '\n';
}

std::string num(double x) { return format_number(x); }

std::vector<double> uniform_grid(double tau_max, std::size_t samples) {
    if (samples == 1) return {tau_max};
    std::vector<double> grid(samples);
    for (std::size_t k = 0; k < samples; ++k)
        grid[k] = tau_max * static_cast<double>(k) / static_cast<double>(samples - 1);
    grid.back() = tau_max;
    return grid;
}

struct SweepPoint {
    SystemParams params;
    InitialState init;
    double tau = 0.0;
};

void apply_axis(SweepPoint& p, const std::string& name, double v) {
    if (name == "tau") {
        if (v < 0.0) throw ConfigError("axis tau: negative value");
        p.tau = v;
    } else if (name == "g0") {
        p.params.coupling.g = ScalarProfile{v};
    } else if (name == "d1") {
        p.params.coupling.d1 = ScalarProfile{v};
    } else if (name == "omega_c") {
        p.params.omega_c = v;
    } else if (name == "mu_c") {
        p.init.mu_c = v;
    } else if (name == "mu_m") {
        p.init.mu_m = v;
    } else if (name == "d2") {
        if (auto* c = std::get_if<Constant>(&p.params.squeezing))
            c->d2 = v;
        else if (auto* m = std::get_if<Modulated>(&p.params.squeezing))
            m->d2 = v;
        else
            throw ConfigError("axis d2: tabulated squeezing cannot be swept");
    } else if (name == "omega0") {
        auto* m = std::get_if<Modulated>(&p.params.squeezing);
        if (!m) throw ConfigError("axis omega0: requires squeezing = modulated");
        m->omega0 = v;
    } else {
        throw ConfigError("axis " + name + ": parameter cannot be swept");
    }
}

// The decoupled solution needs a positive horizon even when only tau = 0 is asked for.
double horizon(double tau) { return std::max(tau, 1e-9); }

NonGaussianityReport sweep_value(const SweepPoint& p, const SolverOptions& solver) {
    const Evolution ev(p.params, horizon(p.tau), solver);
    return ev.at(p.tau, p.init).ng;
}

std::string reason_name(FlaggedRunError::Reason r) {
    switch (r) {
        case FlaggedRunError::Reason::norm_drift: return "norm-drift";
        case FlaggedRunError::Reason::cutoff_insufficient: return "cutoff-insufficient";
        case FlaggedRunError::Reason::step_convergence: return "step-convergence";
    }
    return "flagged";
}

double profile_max_abs(const ScalarProfile& p) {
    if (const auto* c = std::get_if<double>(&p.source)) return std::abs(*c);
    return std::get<TabulatedSeries>(p.source).max_abs();
}

// Small-parameter slice in which the truncated Fock evolution is certified.
void check_oracle_envelope(const RunConfig& cfg) {
    auto refuse = [](const std::string& why) {
        throw UnsupportedRegimeError("oracle-check refused: " + why +
                                     " lies outside the certified small-parameter envelope");
    };
    if (profile_max_abs(cfg.system.coupling.g) > 2.0) refuse("|g0| > 2");
    if (max_abs_d2(cfg.system.squeezing, cfg.tau_max) > 2.0) refuse("|d2| > 2");
    if (std::abs(cfg.init.mu_c) > 3.0) refuse("|mu_c| > 3");
    if (std::abs(cfg.init.mu_m) > 3.0) refuse("|mu_m| > 3");
    if (cfg.tau_max > 4.0 * std::numbers::pi + 1e-12) refuse("tau_max > 4 pi");
    const Cutoffs cut = cfg.cutoffs ? *cfg.cutoffs : default_cutoffs(cfg.system, cfg.init, cfg.tau_max);
    if (static_cast<long>(cut.n_c) * cut.n_m > 20000)
        refuse("n_c * n_m = " + std::to_string(cut.n_c) + " * " + std::to_string(cut.n_m) + " > 20000");
}

}  // namespace

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void run_evolve(const RunConfig& cfg, std::ostream& csv) {
    const Evolution ev(cfg.system, cfg.tau_max, cfg.solver);
    write_row(csv, {"tau", "re_a", "im_a", "x1", "p1", "nu_op", "nu_me", "delta", "delta_min", "delta_max"});
    for (double t : uniform_grid(cfg.tau_max, cfg.samples)) {
        const auto r = ev.at(t, cfg.init);
        const cplx a = cfg.lab_frame ? to_lab_frame(r.moments, cfg.system.omega_c).a : r.moments.a;
        const auto [x1, p1] = quadratures(a);
        write_row(csv, {num(t), num(a.real()), num(a.imag()), num(x1), num(p1), num(r.ng.nu_op),
                        num(r.ng.nu_me), num(r.ng.delta), num(r.ng.delta_min), num(r.ng.delta_max)});
    }
}

void run_sweep(const RunConfig& cfg, std::ostream& csv) {
    const auto& axes = cfg.axes;
    const std::size_t n0 = axes.at(0).values.size();
    const std::size_t n1 = axes.size() > 1 ? axes[1].values.size() : 1;

    // Row-major: the last axis varies fastest.
    SweepPoint base{cfg.system, cfg.init, cfg.sweep_tau};
    std::vector<SweepPoint> points;
    points.reserve(n0 * n1);
    for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = 0; j < n1; ++j) {
            SweepPoint p = base;
            apply_axis(p, axes[0].name, axes[0].values[i]);
            if (axes.size() > 1) apply_axis(p, axes[1].name, axes[1].values[j]);
            points.push_back(std::move(p));
        }

    std::vector<NonGaussianityReport> results(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < points.size();) {
            try {
                results[k] = sweep_value(points[k], cfg.solver);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, points.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    // Report the first failure in grid order so the message is deterministic.
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    if (axes.size() > 1)
        write_row(csv, {axes[0].name, axes[1].name, "delta", "delta_min", "delta_max"});
    else
        write_row(csv, {axes[0].name, "delta", "delta_min", "delta_max"});
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& r = results[k];
        const std::string v0 = num(axes[0].values[k / n1]);
        if (axes.size() > 1)
            write_row(csv, {v0, num(axes[1].values[k % n1]), num(r.delta), num(r.delta_min), num(r.delta_max)});
        else
            write_row(csv, {v0, num(r.delta), num(r.delta_min), num(r.delta_max)});
    }
}

bool run_oracle_check(const RunConfig& cfg, std::ostream& csv, std::ostream& summary) {
    check_oracle_envelope(cfg);
    const Evolution ev(cfg.system, cfg.tau_max, cfg.solver);
    OracleOptions opts;
    opts.cutoffs = cfg.cutoffs;
    opts.dt = cfg.oracle_dt;
    opts.halving_tol = 0.1 * cfg.oracle_tol;

    write_row(csv, {"tau", "moment", "analytic_re", "analytic_im", "oracle_re", "oracle_im", "rel_error", "status"});
    bool all_pass = true;
    std::optional<FlaggedRunError> first_flag;
    for (std::size_t k = 1; k <= cfg.oracle_points; ++k) {
        const double t = cfg.tau_max * static_cast<double>(k) / static_cast<double>(cfg.oracle_points);
        const auto analytic = ev.at(t, cfg.init);
        OracleReport rep;
        double fid = 0.0;
        try {
            rep = run_oracle(cfg.system, cfg.init, t, opts);
            const auto ket = analytic_ket(analytic.f, analytic.bog, cfg.init, rep.cutoffs);
            fid = fidelity(ket, to_rotating_frame(rep.state, t, cfg.system.omega_c));
        } catch (const FlaggedRunError& e) {
            const std::string status = "flagged:" + reason_name(e.reason);
            write_row(csv, {num(t), "all", "", "", "", "", "", status});
            summary << "tau=" << num(t) << ": " << status << " (" << e.what() << ")\n";
            all_pass = false;
            if (!first_flag) first_flag = e;
            continue;
        }

        const auto& m = analytic.moments;
        const auto& o = rep.moments;
        const std::pair<const char*, std::pair<cplx, cplx>> rows[] = {
            {"a", {m.a, o.a}},          {"b", {m.b, o.b}},
            {"a2", {m.a2, o.a2}},       {"b2", {m.b2, o.b2}},
            {"ab", {m.ab, o.ab}},       {"ab_dag", {m.ab_dag, o.ab_dag}},
            {"na", {m.na, o.na}},       {"nb", {m.nb, o.nb}},
        };
        double worst = 0.0;
        bool point_pass = true;
        for (const auto& [name, pair] : rows) {
            const auto [x, y] = pair;
            const double rel = std::abs(x - y) / std::max(std::abs(y), 1e-6);
            const bool ok = rel <= cfg.oracle_tol;
            point_pass = point_pass && ok;
            worst = std::max(worst, rel);
            write_row(csv, {num(t), name, num(x.real()), num(x.imag()), num(y.real()), num(y.imag()), num(rel),
                            ok ? "pass" : "fail"});
        }
        const bool fid_ok = fid >= 0.999;
        point_pass = point_pass && fid_ok;
        write_row(csv, {num(t), "fidelity", num(1.0), num(0.0), num(fid), num(0.0), num(1.0 - fid),
                        fid_ok ? "pass" : "fail"});
        summary << "tau=" << num(t) << ": " << (point_pass ? "pass" : "FAIL") << " max_rel=" << num(worst)
                << " fidelity=" << num(fid) << " cutoffs=" << rep.cutoffs.n_c << 'x' << rep.cutoffs.n_m
                << " steps=" << rep.diag.steps << '\n';
        all_pass = all_pass && point_pass;
    }
    summary << (all_pass ? "oracle-check: all points within tolerance\n" : "oracle-check: FAILED\n");
    if (first_flag) throw *first_flag;
    return all_pass;
}

void run_mathieu(const RunConfig& cfg, std::ostream& csv, std::ostream& summary) {
    const auto* mod = std::get_if<Modulated>(&cfg.system.squeezing);
    if (!mod) throw ConfigError("key 'squeezing': mathieu mode requires squeezing = modulated");
    const auto mp = mathieu_params(mod->d2, mod->omega0);
    summary << "mathieu a=" << num(mp.a) << " q=" << num(mp.q) << '\n';

    SolverOptions solver = cfg.solver;
    solver.force_integration = true;
    const auto sol = solve_quadratic(cfg.system.squeezing, cfg.tau_max, solver);
    // The slow-time expansion describes the resonant drive only.
    const bool resonant = mod->omega0 == 2.0 && mod->d2 != 1.0;

    write_row(csv, {"tau", "p11", "ip22", "p11_two_scale", "ip22_two_scale", "bogoliubov_residual",
                    "identity_residual", "two_scale_valid"});
    for (double t : uniform_grid(cfg.tau_max, cfg.samples)) {
        const auto st = state_at(sol, t);
        const double bres = bogoliubov_residual(bogoliubov_at(sol, t));
        std::string p_ts, i_ts, valid = "false";
        if (resonant) {
            const auto ts = two_scale_solution(mod->d2, t);
            p_ts = num(ts.p11);
            i_ts = num(ts.ip22);
            valid = ts.validity_warning ? "false" : "true";
        }
        write_row(csv, {num(t), num(st.p11), num(st.ip22), p_ts, i_ts, num(bres), num(identity_residual(st)), valid});
    }
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_command_line(args);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    }

    std::ostringstream csv;
    int code = exit_ok;
    try {
        switch (cfg.mode) {
            case Mode::evolve: run_evolve(cfg, csv); break;
            case Mode::sweep: run_sweep(cfg, csv); break;
            case Mode::oracle_check:
                if (!run_oracle_check(cfg, csv, out)) code = exit_oracle_mismatch;
                break;
            case Mode::mathieu: run_mathieu(cfg, csv, out); break;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const FlaggedRunError& e) {
        err << "flagged run (" << reason_name(e.reason) << "): " << e.what() << '\n';
        code = exit_regime;
    } catch (const Error& e) {
        err << "numerical error: " << e.what() << '\n';
        return exit_regime;
    }

    // Partial oracle tables are still written so flagged points can be inspected.
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) {
        err << "config error: cannot write '" << cfg.out_path << "'\n";
        return exit_config;
    }
    file << csv.str();
    return code;
}

}  // namespace optomech
