// asyncdyn: command-line front end for the asynchronous Boolean network
// library. See README.md for the subcommands and exit codes.

#include "asyncdyn.hpp"
#include "asyncdyn/oracle.hpp"
#include "asyncdyn/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace asyncdyn;

namespace {

enum Exit { kOk = 0, kParse = 1, kCapacity = 2, kSchedule = 3, kSetArg = 4 };

// Read failures count as parse errors: there is no network to work with.
std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Options {
    std::string network;
    std::string table;
    std::string init;
    std::string schedule;
    std::string set;
    std::string attracted;
    std::string format = "text";
    std::string out;
    std::string horizon;
    bool omega = false;
    bool parallel = false;
    int oracle_prefix = 2;
    int oracle_cycle = 0;
};

GeneratorFunction load_network(const Options& o)
{
    if (!o.network.empty()) {
        const bool inline_text = o.network.find("vars") != std::string::npos &&
                                 o.network.find(':') != std::string::npos;
        const auto text = inline_text ? o.network : slurp(o.network);
        return compile(parse_network(text, inline_text ? "<inline>" : o.network));
    }
    const bool inline_text = o.table.find("->") != std::string::npos;
    return parse_truth_table(inline_text ? o.table : slurp(o.table));
}

// State and set arguments are user input; any problem with them is exit 4.
StateVector state_arg(const std::string& text, int n)
{
    try {
        const auto s = StateVector::parse(text);
        require_same_dimension(n, s.size(), "--init");
        return s;
    } catch (const Error& e) {
        throw SetError(std::string("invalid state '") + text + "': " + e.what());
    }
}

StateSet set_arg(const std::string& text, int n, const char* flag)
{
    StateSet s;
    try {
        s = parse_state_set(text, n);
    } catch (const Error& e) {
        throw SetError(std::string("invalid ") + flag + " '" + text + "': " + e.what());
    }
    if (s.empty())
        throw SetError(std::string(flag) + " must be a nonempty set");
    return s;
}

std::string states_line(const StateSet& s) { return format_state_set(s); }

std::string cmd_portrait(const Options& o)
{
    const auto g = build_graph(load_network(o), o.parallel);
    if (o.format == "dot")
        return to_dot(g);
    if (o.format == "json")
        return graph_json(g).dump(2) + "\n";
    std::ostringstream os;
    const int n = g.dimension();
    for (std::uint32_t c = 0; c < g.state_count(); ++c) {
        os << StateVector(n, c).str() << " (unstable " << CoordinateSet(n, g.unstable(c)).str() << "):";
        const auto es = g.edges(c);
        if (es.empty())
            os << " fixed point";
        for (const auto& e : es)
            os << ' ' << StateVector(n, e.target).str() << '[' << UpdateMask(n, e.effective).str() << ']';
        os << '\n';
    }
    return os.str();
}

std::string segment_line(const Segment& s)
{
    std::string out = s.start ? "[" + format_time(*s.start) : "(-inf";
    out += ", ";
    out += s.end ? format_time(*s.end) + ")" : "inf)";
    return out + " -> " + s.value.str();
}

std::string cmd_simulate(const Options& o, bool omega_only)
{
    const auto phi = load_network(o);
    const auto mu = state_arg(o.init, phi.dimension());
    const auto rho = parse_schedule(o.schedule);
    if (rho.dimension() != phi.dimension())
        throw ScheduleError("schedule masks have " + std::to_string(rho.dimension()) + " bits, network has " +
                            std::to_string(phi.dimension()));
    const auto traj = flow(phi, mu, rho);
    const auto om = omega_set(traj);
    if (omega_only) {
        if (o.format == "json") {
            Json j = {{"states", states_json(om.states)}, {"settle_time", format_time(om.settle_time)}};
            return j.dump(2) + "\n";
        }
        return states_line(om.states) + "\n";
    }
    Time horizon = traj.default_horizon();
    if (!o.horizon.empty())
        horizon = parse_time(o.horizon);
    if (o.format == "json")
        return trajectory_json(traj, horizon, o.omega).dump(2) + "\n";
    std::ostringstream os;
    const auto segs = traj.segments(horizon);
    for (const auto& s : segs)
        os << segment_line(s) << '\n';
    if (segs.back().end)
        os << "...\n";
    os << "tail: from firing " << traj.tail_start() << ", length " << traj.tail_length() << '\n';
    if (o.omega) {
        os << "omega: " << states_line(om.states) << " (from t=" << format_time(om.settle_time) << ")\n";
        if (const auto fv = final_value(traj))
            os << "final value: " << fv->str() << '\n';
    }
    return os.str();
}

std::string cmd_invariance(const Options& o)
{
    const auto g = build_graph(load_network(o), o.parallel);
    const auto a = set_arg(o.set, g.dimension(), "--set");
    const auto r = invariance_report(g, a);
    if (o.format == "json")
        return invariance_json(r).dump(2) + "\n";
    std::ostringstream os;
    const int n = g.dimension();
    os << "set: " << states_line(a) << '\n';
    os << "p-invariant: " << (r.p_invariant ? "yes" : "no") << '\n';
    for (const auto& [mu, s] : r.witnesses)
        os << "  " << StateVector(n, mu).str() << " stays under " << schedule_literal(s) << '\n';
    for (auto mu : r.p_failures)
        os << "  " << StateVector(n, mu).str() << " cannot stay\n";
    os << "n-invariant: " << (r.n_invariant ? "yes" : "no") << '\n';
    if (r.counterexample)
        os << "  " << r.counterexample->state.str() << " under mask " << r.counterexample->mask.str()
           << " goes to " << r.counterexample->image.str() << '\n';
    return os.str();
}

std::string cmd_basin(const Options& o, bool classify_only)
{
    const auto g = build_graph(load_network(o), o.parallel);
    const int n = g.dimension();
    const auto a = set_arg(o.set, n, "--set");
    std::optional<StateSet> query;
    if (!o.attracted.empty())
        query = set_arg(o.attracted, n, "--attracted");
    const auto r = basin_report(g, a, query);
    if (o.format == "json")
        return basin_json(r, !classify_only).dump(2) + "\n";
    std::ostringstream os;
    os << "set: " << states_line(a) << '\n';
    os << "p-basin: " << states_line(r.p_basin) << '\n';
    os << "n-basin: " << states_line(r.n_basin) << '\n';
    os << "p-attractive: " << to_string(r.p_class) << '\n';
    os << "n-attractive: " << to_string(r.n_class) << '\n';
    if (r.query) {
        os << "query " << states_line(*r.query) << ": p-attracted " << (r.query_p_attracted ? "yes" : "no")
           << ", n-attracted " << (r.query_n_attracted ? "yes" : "no") << '\n';
    }
    if (!classify_only) {
        for (const auto& [mu, s] : r.p_witnesses)
            os << "  " << StateVector(n, mu).str() << " settles in the set under " << schedule_literal(s) << '\n';
        for (const auto& [mu, s] : r.n_escapes)
            os << "  " << StateVector(n, mu).str() << " escapes under " << schedule_literal(s) << '\n';
    }
    return os.str();
}

std::string cmd_oracle(const Options& o)
{
    OracleBudget b;
    b.max_prefix = o.oracle_prefix;
    b.max_cycle = o.oracle_cycle;
    b.max_n = 4;
    const OracleModel model(load_network(o), b);
    const int n = model.phi().dimension();
    std::ostringstream os;
    os << "realizable omega-sets:\n";
    for (const auto& s : model.sustainable_sets())
        os << "  " << states_line(s.states) << " from " << StateVector(n, s.start).str() << " under "
           << schedule_literal(s.schedule) << '\n';
    if (!o.init.empty()) {
        os << "omega-sets from " << o.init << ":\n";
        for (const auto& s : oracle_omega_sets(model, state_arg(o.init, n)))
            os << "  " << states_line(s) << '\n';
    }
    if (!o.set.empty()) {
        const auto a = set_arg(o.set, n, "--set");
        const auto bs = oracle_basins(model, a);
        os << "p-basin: " << states_line(bs.p_basin) << '\n';
        os << "n-basin: " << states_line(bs.n_basin) << '\n';
        os << "p-invariant: " << (oracle_p_invariant(model, a) ? "yes" : "no") << '\n';
    }
    return os.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Asynchronous Boolean network analysis"};
    app.require_subcommand(1);
    Options o;

    auto source = [&](CLI::App* sub) {
        auto* net = sub->add_option("--network", o.network, "network file (.abn) or inline text");
        auto* tab = sub->add_option("--table", o.table, "truth table file (.tt) or inline text");
        net->excludes(tab);
        tab->excludes(net);
        sub->add_flag("--parallel", o.parallel, "build the transition graph on all cores");
    };
    auto output = [&](CLI::App* sub, std::vector<std::string> formats) {
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats));
        sub->add_option("--out", o.out, "write to this file instead of stdout");
    };

    auto* portrait = app.add_subcommand("portrait", "state portrait as DOT, JSON or text");
    source(portrait);
    output(portrait, {"dot", "json", "text"});
    portrait->callback([&] {
        if (o.format == "text" && portrait->count("--format") == 0)
            o.format = "dot";
    });

    auto* simulate = app.add_subcommand("simulate", "flow of one state under a schedule");
    source(simulate);
    output(simulate, {"text", "json"});
    simulate->add_option("--init", o.init, "initial state bitstring")->required();
    simulate->add_option("--schedule", o.schedule, "schedule literal 'prefix;cycle[@t0,...,/period]'")->required();
    simulate->add_option("--horizon", o.horizon, "list segments starting before this time");
    simulate->add_flag("--omega", o.omega, "append the omega-limit set");

    auto* omega = app.add_subcommand("omega", "omega-limit set of one state under a schedule");
    source(omega);
    output(omega, {"text", "json"});
    omega->add_option("--init", o.init, "initial state bitstring")->required();
    omega->add_option("--schedule", o.schedule, "schedule literal")->required();

    auto* invariance = app.add_subcommand("invariance", "p-/n-invariance of a set");
    source(invariance);
    output(invariance, {"text", "json"});
    invariance->add_option("--set", o.set, "state set, e.g. \"{01, 10}\"")->required();

    auto* basin = app.add_subcommand("basin", "basins of p-/n-attraction of a set, with witnesses");
    source(basin);
    output(basin, {"text", "json"});
    basin->add_option("--set", o.set, "state set")->required();
    basin->add_option("--attracted", o.attracted, "also test whether this set is attracted");

    auto* classify_cmd = app.add_subcommand("classify", "attractiveness of a set");
    source(classify_cmd);
    output(classify_cmd, {"text", "json"});
    classify_cmd->add_option("--set", o.set, "state set")->required();
    classify_cmd->add_option("--attracted", o.attracted, "also test whether this set is attracted");

    auto* oracle = app.add_subcommand("oracle", "");
    oracle->group(""); // hidden; brute-force reference for debugging
    source(oracle);
    output(oracle, {"text"});
    oracle->add_option("--init", o.init);
    oracle->add_option("--set", o.set);
    oracle->add_option("--prefix", o.oracle_prefix);
    oracle->add_option("--cycle", o.oracle_cycle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (o.network.empty() && o.table.empty())
            throw ParseError("one of --network or --table is required");
        std::string text;
        if (*portrait)
            text = cmd_portrait(o);
        else if (*simulate)
            text = cmd_simulate(o, false);
        else if (*omega)
            text = cmd_simulate(o, true);
        else if (*invariance)
            text = cmd_invariance(o);
        else if (*basin)
            text = cmd_basin(o, false);
        else if (*classify_cmd)
            text = cmd_basin(o, true);
        else if (*oracle)
            text = cmd_oracle(o);
        if (o.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(o.out, std::ios::binary);
            if (!f) {
                std::cerr << "error: cannot write '" << o.out << "'\n";
                return kParse;
            }
            f << text;
        }
        return kOk;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kCapacity;
    } catch (const ScheduleError& e) {
        std::cerr << "schedule error: " << e.what() << '\n';
        return kSchedule;
    } catch (const SetError& e) {
        std::cerr << "set error: " << e.what() << '\n';
        return kSetArg;
    } catch (const DimensionError& e) {
        std::cerr << "dimension error: " << e.what() << '\n';
        return kSetArg;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParse;
    }
}
