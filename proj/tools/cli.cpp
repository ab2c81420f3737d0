#include "cli.hpp"

#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mimocap/acceptance.hpp"
#include "mimocap/channel_io.hpp"
#include "mimocap/dispatch.hpp"
#include "mimocap/errors.hpp"
#include "mimocap/experiments.hpp"

namespace mimocap::cli
{

namespace
{

using nlohmann::json;

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double parse_real(const std::string& text, const std::string& what)
{
    try
    {
        std::size_t used = 0;
        const double v   = std::stod(text, &used);
        if (used != text.size())
            throw InputError("");
        return v;
    }
    catch (const std::exception&)
    {
        throw InputError("cannot read " + what + " from '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep))
        parts.push_back(item);
    if (!text.empty() && text.back() == sep)
        parts.emplace_back();
    return parts;
}

/// Comma list with one entry per antenna, or one value repeated n_t times.
RVector parse_pap(const std::string& text, Index n_t)
{
    const auto parts = split(text, ',');
    if (parts.size() == 1)
        return RVector::Constant(n_t, parse_real(parts[0], "--pap"));
    if (static_cast<Index>(parts.size()) != n_t)
        throw InputError("--pap has " + std::to_string(parts.size()) + " entries but the channel has n_T = " +
                         std::to_string(n_t));
    RVector p(n_t);
    for (Index i = 0; i < n_t; ++i)
        p(i) = parse_real(parts[static_cast<std::size_t>(i)], "--pap");
    return p;
}

SolveMode parse_solver(const std::string& name)
{
    const auto mode = parse_mode(name);
    if (!mode)
        throw InputError("unknown solver '" + name + "'");
    return *mode;
}

struct CapacityArgs
{
    std::string channel;
    double ptot = 0.0;
    std::string pap;
    std::string solver = "auto";
    std::string units  = "bits";
};

struct SweepArgs
{
    std::string channel;
    std::string variable;
    std::string range;
    std::optional<double> ptot;
    std::string pap;
    std::string solver = "auto";
    bool with_waterfill = false;
};

struct BenchmarkArgs
{
    std::string sizes = "2,4,6,8";
    int trials        = 10;
    std::uint64_t seed = 1;
    int threads       = 1;
};

struct ValidateArgs
{
    std::uint64_t seed = 1;
    bool mutate_phase  = false;
};

int cmd_capacity(const CapacityArgs& a, std::ostream& out)
{
    if (a.units != "bits" && a.units != "nats")
        throw InputError("--units must be bits or nats");
    const SolveMode mode   = parse_solver(a.solver);
    const ChannelMatrix h(load_matrix_file(a.channel));
    const PowerConstraints c(a.ptot, parse_pap(a.pap, h.n_t()));
    const SolveReport r = solve(h, c, mode);

    const double cap = a.units == "bits" ? nats_to_bits(r.capacity_nats) : r.capacity_nats;
    json doc;
    doc["capacity"]     = cap;
    doc["units"]        = a.units;
    doc["solver"]       = std::string(to_string(r.solver));
    doc["fell_back"]    = r.fell_back;
    doc["rank_h"]       = h.rank();
    doc["rank_q"]       = r.q_opt.rank();
    doc["tp_active"]    = r.tp_active;
    doc["pap_active"]   = r.pap_active;
    doc["n_var"]        = r.n_var;
    doc["iterations"]   = r.iterations;
    doc["kkt_residual"] = r.kkt_residual;
    doc["q"]            = json::parse(matrix_to_json(r.q_opt.entries()));
    out << doc.dump(2) << '\n';
    return ok;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out)
{
    SweepSpec spec;
    if (a.variable == "ptot")
        spec.variable = SweepVariable::ptot;
    else if (a.variable == "pap")
        spec.variable = SweepVariable::pap;
    else
        throw InputError("--sweep must be ptot or pap");

    const auto parts = split(a.range, ':');
    if (parts.size() != 3)
        throw InputError("--range must look like start:stop:count");
    spec.start = parse_real(parts[0], "range start");
    spec.stop  = parse_real(parts[1], "range stop");
    const double count = parse_real(parts[2], "range count");
    if (count < 1 || count != static_cast<int>(count))
        throw InputError("range count must be a positive integer");
    spec.count          = static_cast<int>(count);
    spec.mode           = parse_solver(a.solver);
    spec.with_waterfill = a.with_waterfill;

    const ChannelMatrix h(load_matrix_file(a.channel));
    if (spec.variable == SweepVariable::ptot)
    {
        if (a.pap.empty())
            throw InputError("sweeping ptot needs --pap");
        spec.fixed_pap = parse_pap(a.pap, h.n_t());
    }
    else
    {
        if (!a.ptot)
            throw InputError("sweeping pap needs --ptot");
        spec.fixed_ptot = *a.ptot;
    }

    const std::vector<SweepRow> rows = run_sweep(h, spec);
    out << "x,capacity,rank_q,tp_active" << (spec.with_waterfill ? ",waterfill_capacity" : "") << '\n';
    for (const auto& r : rows)
    {
        out << num(r.x) << ',' << num(r.capacity_bits) << ',' << r.rank_q << ',' << (r.tp_active ? 1 : 0);
        if (r.waterfill_bits)
            out << ',' << num(*r.waterfill_bits);
        out << '\n';
    }
    return ok;
}

int cmd_benchmark(const BenchmarkArgs& a, std::ostream& out)
{
    BenchmarkSpec spec;
    spec.sizes.clear();
    for (const auto& p : split(a.sizes, ','))
    {
        const double v = parse_real(p, "--sizes");
        if (v < 1 || v != static_cast<int>(v))
            throw InputError("--sizes entries must be positive integers");
        spec.sizes.push_back(static_cast<int>(v));
    }
    spec.trials  = a.trials;
    spec.seed    = a.seed;
    spec.threads = a.threads;

    const std::vector<BenchmarkRow> rows = run_benchmark(spec);
    out << "n,solver,mean_time,median_time,n_var,mean_capacity_gap_vs_basic\n";
    for (const auto& r : rows)
    {
        out << r.n << ',' << r.solver << ',' << num(r.mean_time) << ',' << num(r.median_time) << ','
            << r.n_var << ',' << num(r.mean_capacity_gap) << '\n';
    }
    return ok;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out)
{
    AcceptanceOptions opts;
    opts.seed  = a.seed;
    opts.phase = a.mutate_phase ? PhaseConvention::conjugate : PhaseConvention::aligned;

    const auto results = run_acceptance(opts);
    std::vector<int> failed;
    for (const auto& r : results)
    {
        out << format_result(r) << '\n';
        if (!r.passed)
            failed.push_back(r.id);
    }
    if (failed.empty())
    {
        out << "all " << results.size() << " criteria passed\n";
        return ok;
    }
    out << "failed criteria:";
    for (int id : failed)
        out << ' ' << id;
    out << '\n';
    return solver_failed;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Capacity of MIMO channels under joint total and per-antenna power constraints"};
    app.name("mimocap");
    app.require_subcommand(1);

    CapacityArgs cap;
    auto* c_cap = app.add_subcommand("capacity", "Solve one instance and print a JSON report");
    c_cap->add_option("--channel", cap.channel, "Channel matrix file (JSON)")->required();
    c_cap->add_option("--ptot", cap.ptot, "Total power budget")->required();
    c_cap->add_option("--pap", cap.pap, "Per-antenna bounds: comma list or one repeated value")->required();
    c_cap->add_option("--solver", cap.solver, "auto, basic, fullrank, singular, unitrank, closedform or waterfill")
        ->capture_default_str();
    c_cap->add_option("--units", cap.units, "bits or nats")->capture_default_str();

    SweepArgs sw;
    auto* c_sw = app.add_subcommand("sweep", "Capacity along a grid of one constraint, as CSV (bits)");
    c_sw->add_option("--channel", sw.channel, "Channel matrix file (JSON)")->required();
    c_sw->add_option("--sweep", sw.variable, "ptot or pap")->required();
    c_sw->add_option("--range", sw.range, "start:stop:count")->required();
    c_sw->add_option("--ptot", sw.ptot, "Total power budget (when sweeping pap)");
    c_sw->add_option("--pap", sw.pap, "Per-antenna bounds (when sweeping ptot)");
    c_sw->add_option("--solver", sw.solver, "Solver mode")->capture_default_str();
    c_sw->add_flag("--with-waterfill", sw.with_waterfill, "Append the total-power-only capacity");

    BenchmarkArgs bm;
    auto* c_bm = app.add_subcommand("benchmark", "Timing of the basic and reduced solvers, as CSV");
    c_bm->add_option("--sizes", bm.sizes, "Comma list of n")->capture_default_str();
    c_bm->add_option("--trials", bm.trials, "Channels per size")->capture_default_str();
    c_bm->add_option("--seed", bm.seed, "Generator seed")->capture_default_str();
    c_bm->add_option("--threads", bm.threads, "Worker threads")->capture_default_str();

    ValidateArgs va;
    auto* c_va = app.add_subcommand("validate", "Run the acceptance suite");
    c_va->add_option("--seed", va.seed, "Generator seed")->capture_default_str();
    c_va->add_flag("--mutate-phase", va.mutate_phase)->group("");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        app.exit(e, out, err);
        return ok;
    }
    catch (const CLI::CallForAllHelp& e)
    {
        app.exit(e, out, err);
        return ok;
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e, out, err);
        return bad_input;
    }

    try
    {
        if (*c_cap)
            return cmd_capacity(cap, out);
        if (*c_sw)
            return cmd_sweep(sw, out);
        if (*c_bm)
            return cmd_benchmark(bm, out);
        return cmd_validate(va, out);
    }
    catch (const InputError& e)
    {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }
    catch (const DomainError& e)
    {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }
    catch (const RoutingError& e)
    {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }
    catch (const PreconditionError& e)
    {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }
    catch (const std::exception& e)
    {
        err << "solver failure: " << e.what() << '\n';
        return solver_failed;
    }
}

} // namespace mimocap::cli
