#include "lra/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "lra/fixtures.hpp"

namespace lra::cli {

ControlProblem load_problem(const ProblemSource& source) {
    if (source.name == "toy")
        return toy_problem(source.points);
    if (source.name == "threestate")
        return three_state_problem();
    if (source.name == "constant")
        return constant_cost_problem(source.states, source.cost);
    if (source.name == "random")
        return random_problem(source.states, source.actions, source.seed);
    if (!std::filesystem::exists(source.name))
        throw SchemaError("'" + source.name +
                          "' is neither a built-in problem nor an existing file");
    return read_problem(source.name);
}

StateIndex resolve_start(const ControlProblem& problem, std::optional<std::size_t> index,
                         const std::vector<double>& at) {
    if (index && !at.empty())
        throw std::invalid_argument("give either --y0 or --at, not both");
    if (!at.empty()) {
        if (at.size() != problem.dimension())
            throw std::invalid_argument("--at has the wrong number of coordinates");
        for (StateIndex s = 0; s < problem.num_states(); ++s) {
            const auto& p = problem.state(s);
            bool same = true;
            for (std::size_t i = 0; i < at.size(); ++i)
                same = same && std::abs(p[i] - at[i]) <= 1e-9;
            if (same)
                return s;
        }
        throw std::invalid_argument("--at does not match any grid state");
    }
    const auto s = index.value_or(0);
    if (s >= problem.num_states())
        throw std::invalid_argument("--y0 out of range");
    return s;
}

namespace {

// Largest increase of eta over states reachable from y0.
double eta_rise(const Graph& graph, const std::vector<double>& eta, StateIndex y0) {
    double top = eta[y0];
    for (auto z : graph.reachable_from(y0))
        top = std::max(top, eta[z]);
    return top - eta[y0];
}

double theta_for(const Graph& graph, std::size_t T) {
    return 2.0 * graph.cost_bound().M / static_cast<double>(T);
}

} // namespace

Json solve_report(const Graph& graph, StateIndex y0, const SolveRequest& request) {
    const auto& problem = graph.problem();
    const auto primal = solve_primal(graph, y0, 0.0);
    const auto dual = solve_dual(graph, y0, 0.0);
    const auto per = v_per(graph, y0);
    const auto feedback = extract_feedback(graph, dual.certificate.eta);
    const double rise = eta_rise(graph, dual.certificate.eta, y0);

    Json horizons = Json::array(), chain = Json::array();
    for (auto T : request.horizons) {
        if (T == 0)
            throw std::invalid_argument("horizons must be positive");
        const double vt = value_iteration_avg(graph, T)[y0];
        const double theta = theta_for(graph, T);
        const double kt = solve_primal(graph, y0, theta).value;
        const double lower = dual.value - rise / static_cast<double>(T);
        horizons.push_back({{"T", T}, {"value", vt}});
        chain.push_back({{"T", T},
                         {"theta", theta},
                         {"d_star", dual.value},
                         {"lower_bound", lower},
                         {"V_T", vt},
                         {"k_star_theta", kt},
                         {"lower_holds", lower <= vt + 1e-7},
                         {"upper_holds", vt <= kt + 1e-7}});
    }
    Json discounts = Json::array();
    for (double a : request.alphas)
        discounts.push_back({{"alpha", a}, {"value", value_iteration_discounted(graph, a)[y0]}});

    Json labels = Json::array();
    for (auto u : feedback)
        labels.push_back(problem.actions()[u]);

    return Json{
        {"problem", problem.name()},
        {"y0", y0},
        {"y0_point", problem.state(y0)},
        {"M", graph.cost_bound().M},
        {"V_T", horizons},
        {"h_alpha", discounts},
        {"k_star",
         {{"value", primal.value},
          {"gamma", measure_to_json(primal.pair.gamma.weights)},
          {"xi", measure_to_json(primal.pair.xi.weights)},
          {"cap_multiplier", primal.cap_multiplier},
          {"cap_active", primal.cap_active},
          {"solver", stats_to_json(primal.stats)}}},
        {"d_star",
         {{"value", dual.value},
          {"certificate", certificate_to_json(dual.certificate)},
          {"certificate_slack", certificate_slack(graph, dual.certificate, y0)},
          {"solver", stats_to_json(dual.stats)}}},
        {"v_per", {{"value", per.value}, {"process", process_to_json(per.process)}}},
        {"feedback", {{"actions", feedback}, {"labels", labels}}},
        {"chain", chain}};
}

std::vector<SweepRow> sweep(const Graph& graph, StateIndex y0, SweepKind kind,
                            const std::vector<double>& params) {
    const double dstar = solve_dual(graph, y0).value;
    const auto basis = MetricBasis::chebyshev(graph);

    auto point = [&](double param) {
        SweepRow row;
        row.param = param;
        OccupationalMeasure incumbent;
        switch (kind) {
        case SweepKind::horizon: {
            const auto T = static_cast<std::size_t>(param);
            if (T == 0 || static_cast<double>(T) != param)
                throw std::invalid_argument("horizons must be positive integers");
            row.param_name = "T";
            const auto sol = value_iteration_avg_with_policy(graph, T);
            row.value = sol.value[y0];
            const auto traj = rollout(graph, y0, cesaro_policy(sol), T);
            incumbent = occupational_measure(graph, traj, T);
            break;
        }
        case SweepKind::discount: {
            row.param_name = "alpha";
            const auto h = value_iteration_discounted(graph, param);
            row.value = h[y0];
            const auto u = discounted_greedy_policy(graph, h);
            const auto traj = rollout(graph, y0, u, 2 * graph.num_states() + 2);
            incumbent = discounted_occupational_measure(graph, traj, param);
            break;
        }
        case SweepKind::perturbation: {
            row.param_name = "theta";
            const auto res = solve_primal(graph, y0, param);
            row.value = res.value;
            incumbent = res.pair.gamma;
            break;
        }
        }
        row.gap_to_dstar = row.value - dstar;
        row.rho_to_W = project_to_W(graph, incumbent, basis).distance;
        return row;
    };

    std::vector<std::future<SweepRow>> jobs;
    for (double p : params)
        jobs.push_back(std::async(std::launch::async, point, p));
    std::vector<SweepRow> rows;
    for (auto& j : jobs)
        rows.push_back(j.get());
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "param_name,param,value,gap_to_dstar,rho_to_W\n";
    os << std::setprecision(17);
    for (const auto& r : rows)
        os << r.param_name << ',' << r.param << ',' << r.value << ',' << r.gap_to_dstar << ','
           << r.rho_to_W << '\n';
}

std::vector<CheckResult> verify(const Graph& graph, StateIndex y0) {
    constexpr double tol = 1e-7;
    std::vector<CheckResult> out;
    auto check = [&](std::string name, bool ok, std::string detail = {}) {
        out.push_back({std::move(name), ok, std::move(detail)});
    };
    auto num = [](double v) {
        std::ostringstream s;
        s << std::setprecision(10) << v;
        return s.str();
    };

    const auto primal = solve_primal(graph, y0);
    const auto dual = solve_dual(graph, y0);
    const auto qform = solve_q_form(graph, y0);
    const auto per = v_per(graph, y0);

    check("strong duality k* = d*", std::abs(primal.value - dual.value) <= tol,
          "k*=" + num(primal.value) + " d*=" + num(dual.value));
    check("potential form equals d*", std::abs(qform.value - dual.value) <= tol,
          "q=" + num(qform.value));
    check("v_per equals k*", std::abs(per.value - primal.value) <= tol,
          "v_per=" + num(per.value));
    check("flow cap inactive", !primal.cap_active,
          "multiplier=" + num(primal.cap_multiplier));
    const double slack = certificate_slack(graph, dual.certificate, y0);
    check("dual certificate feasible", slack >= -tol, "min slack=" + num(slack));

    double omega = 0.0;
    for (double r : omega_residuals(graph, primal.pair, y0))
        omega = std::max(omega, std::abs(r));
    check("primal optimizer in W and Omega",
          membership_W(graph, primal.pair.gamma, tol) && omega <= tol,
          "max Omega residual=" + num(omega));

    const auto built = primal_pair_from_process(graph, per.process);
    double built_res = 0.0;
    for (double r : omega_residuals(graph, built, y0))
        built_res = std::max(built_res, std::abs(r));
    check("periodic process gives a feasible primal pair",
          membership_W(graph, built.gamma, tol) && built_res <= tol,
          "max Omega residual=" + num(built_res));

    const auto report = check_necessary_periodic(
        graph, per.process, dual.certificate,
        ValueFunction{std::vector<double>(graph.num_states(), dual.value)}, y0, tol);
    check("necessary conditions on the optimal cycle", report.optimal && !report.inconsistency,
          "mean=" + num(report.mean_cycle_cost));

    check("sup over K equals d*", std::abs(sup_over_K(graph, y0) - dual.value) <= tol);
    check("optimal potential lies in K", k_membership(graph, ValueFunction{qform.psi}, tol));

    const double rise = eta_rise(graph, dual.certificate.eta, y0);
    double prev_k = std::numeric_limits<double>::infinity();
    bool chain_ok = true, monotone = true;
    std::string chain_detail;
    for (std::size_t T : {10, 100, 1000}) {
        const double vt = value_iteration_avg(graph, T)[y0];
        const double kt = solve_primal(graph, y0, theta_for(graph, T)).value;
        const double lower = dual.value - rise / static_cast<double>(T);
        if (!(lower <= vt + tol && vt <= kt + tol)) {
            chain_ok = false;
            chain_detail += "T=" + std::to_string(T) + " ";
        }
        if (kt > prev_k + tol)
            monotone = false;
        prev_k = kt;
    }
    check("bounds d* - rise/T <= V_T <= k*(2M/T)", chain_ok, chain_detail);
    check("k*(2M/T) non-increasing in T", monotone);

    const double alpha = 0.9;
    const auto h = value_iteration_discounted(graph, alpha);
    const auto traj =
        rollout(graph, y0, discounted_greedy_policy(graph, h), 2 * graph.num_states() + 2);
    const auto dm = discounted_occupational_measure(graph, traj, alpha);
    check("discounted measure in W(alpha, y0)", membership_W_alpha(graph, dm, alpha, y0),
          "alpha=" + num(alpha));
    return out;
}

namespace {

struct Options {
    ProblemSource source;
    std::optional<std::size_t> y0;
    std::vector<double> at;
    std::vector<std::size_t> T;
    std::vector<double> alpha;
    std::vector<double> theta;
    std::string out;
    std::string format;
    bool all_states = false;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("problem", o.source.name,
                    "Problem file, or one of: toy, threestate, constant, random")
        ->required();
    cmd->add_option("--y0", o.y0, "Start state index");
    cmd->add_option("--at", o.at, "Start state coordinates, comma separated")->delimiter(',');
    cmd->add_option("--points", o.source.points, "Grid size of the toy problem (odd)");
    cmd->add_option("--states", o.source.states, "State count of generated problems");
    cmd->add_option("--actions", o.source.actions, "Action count of random problems");
    cmd->add_option("--seed", o.source.seed, "Seed of random problems");
    cmd->add_option("--cost", o.source.cost, "Running cost of the constant problem");
    cmd->add_option("--out", o.out, "Write the result to this file instead of stdout");
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f)
        throw std::runtime_error("cannot write " + o.out);
    f << text;
}

int do_solve(const Graph& graph, StateIndex y0, const Options& o, std::ostream& out) {
    SolveRequest req;
    if (!o.T.empty())
        req.horizons = o.T;
    if (!o.alpha.empty())
        req.alphas = o.alpha;
    const auto doc = solve_report(graph, y0, req);
    if (o.format == "csv") {
        std::ostringstream s;
        s << std::setprecision(17) << "quantity,param,value\n";
        for (const auto& v : doc["V_T"])
            s << "V_T," << v["T"] << ',' << v["value"].get<double>() << '\n';
        for (const auto& v : doc["h_alpha"])
            s << "h_alpha," << v["alpha"].get<double>() << ',' << v["value"].get<double>()
              << '\n';
        s << "k_star,," << doc["k_star"]["value"].get<double>() << '\n';
        s << "d_star,," << doc["d_star"]["value"].get<double>() << '\n';
        s << "v_per,," << doc["v_per"]["value"].get<double>() << '\n';
        emit(o, out, s.str());
    } else {
        emit(o, out, doc.dump(2) + "\n");
    }
    return 0;
}

int do_sweep(const Graph& graph, StateIndex y0, const Options& o, std::ostream& out) {
    const int given = !o.T.empty() + !o.alpha.empty() + !o.theta.empty();
    if (given != 1)
        throw CLI::ValidationError("sweep", "give exactly one of --T, --alpha, --theta");
    SweepKind kind = SweepKind::perturbation;
    std::vector<double> params = o.theta;
    if (!o.T.empty()) {
        kind = SweepKind::horizon;
        params.assign(o.T.begin(), o.T.end());
    } else if (!o.alpha.empty()) {
        kind = SweepKind::discount;
        params = o.alpha;
    }
    const auto rows = sweep(graph, y0, kind, params);
    std::ostringstream s;
    if (o.format == "json") {
        Json doc = Json::array();
        for (const auto& r : rows)
            doc.push_back({{"param_name", r.param_name},
                           {"param", r.param},
                           {"value", r.value},
                           {"gap_to_dstar", r.gap_to_dstar},
                           {"rho_to_W", r.rho_to_W}});
        s << doc.dump(2) << '\n';
    } else {
        write_sweep_csv(s, rows);
    }
    emit(o, out, s.str());
    return 0;
}

int do_verify(const Graph& graph, StateIndex y0, const Options& o, std::ostream& out,
              std::ostream& err) {
    std::vector<StateIndex> starts{y0};
    if (o.all_states) {
        starts.clear();
        for (StateIndex s = 0; s < graph.num_states(); ++s)
            starts.push_back(s);
    }
    std::ostringstream s;
    Json doc = Json::array();
    std::string first_failure;
    for (auto start : starts) {
        for (const auto& c : verify(graph, start)) {
            if (!c.passed && first_failure.empty())
                first_failure = c.name + " (y0=" + std::to_string(start) + ")";
            if (o.format == "json")
                doc.push_back({{"y0", start},
                               {"check", c.name},
                               {"passed", c.passed},
                               {"detail", c.detail}});
            else
                s << (c.passed ? "PASS" : "FAIL") << "  y0=" << start << "  " << c.name
                  << (c.detail.empty() ? "" : "  [" + c.detail + "]") << '\n';
        }
    }
    if (o.format == "json")
        s << doc.dump(2) << '\n';
    emit(o, out, s.str());
    if (!first_failure.empty()) {
        err << "invariant failed: " << first_failure << '\n';
        return 1;
    }
    return 0;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Long-run average optimal control on finite grids"};
    app.require_subcommand(1);
    Options o;

    auto* solve_cmd = app.add_subcommand("solve", "Compute value functions, LP values and a certificate");
    add_common(solve_cmd, o);
    solve_cmd->add_option("--T", o.T, "Horizons for V_T, comma separated")->delimiter(',');
    solve_cmd->add_option("--alpha", o.alpha, "Discount factors for h_alpha")->delimiter(',');
    solve_cmd->add_option("--format", o.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate values over T, alpha or theta");
    add_common(sweep_cmd, o);
    sweep_cmd->add_option("--T", o.T, "Horizon list")->delimiter(',');
    sweep_cmd->add_option("--alpha", o.alpha, "Discount factor list")->delimiter(',');
    sweep_cmd->add_option("--theta", o.theta, "Perturbation list")->delimiter(',');
    sweep_cmd->add_option("--format", o.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite");
    add_common(verify_cmd, o);
    verify_cmd->add_flag("--all-states", o.all_states, "Verify every start state");
    verify_cmd->add_option("--format", o.format, "Table format: csv (plain table) or json")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    if (o.format.empty())
        o.format = solve_cmd->parsed() ? "json" : "csv";

    try {
        const auto graph = build_graph(load_problem(o.source));
        const auto y0 = resolve_start(graph.problem(), o.y0, o.at);
        if (solve_cmd->parsed())
            return do_solve(graph, y0, o, out);
        if (sweep_cmd->parsed())
            return do_sweep(graph, y0, o, out);
        return do_verify(graph, y0, o, out, err);
    } catch (const ViabilityViolation& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace lra::cli
