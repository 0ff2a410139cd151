#include "cfs/cfsearch.hpp"
#include "cfs/generate.hpp"
#include "cfs/io.hpp"
#include "cfs/ltlf.hpp"
#include "cfs/oracle.hpp"
#include "cfs/parser.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

using namespace cfs;
using io::Json;

namespace
{

enum Exit
{
    Yes = 0,
    No = 1,
    Failure = 2,
    Undecided = 3,
};

struct Options
{
    std::string problem;
    std::string formula = "true";
    std::string formula_file;
    std::string plan;
    std::string trace;
    std::string change = "init";
    std::string quantifier = "exists";
    std::optional<std::size_t> budget;
    bool minimize = false;
    std::string plausibility;
    std::string backend = "sat";
    std::string format = "human";
    std::string emit;
    std::optional<std::size_t> bound;
    std::size_t minimize_cap = 8;
    std::size_t max_edits = 4;
    std::uint64_t max_candidates = 20'000;
    std::size_t max_bound = 64;
    std::size_t guard_fluents = 20;
    std::size_t oracle_fluents = 6;
    std::size_t oracle_states = 256;
    std::uint64_t oracle_nodes = 1'000'000;
    // gen
    std::size_t fluents = 3;
    std::size_t actions = 2;
    std::uint64_t seed = 1;
    std::size_t depth = 3;
    std::string problem_out;
    std::string formula_out;
};

struct Loaded
{
    PlanningProblem problem;
    Formula spec;
    Plausibility plausibility;
};

Loaded load( const Options& o )
{
    auto p = io::load_problem( o.problem );
    auto text = o.formula_file.empty() ? o.formula : io::read_file( o.formula_file );
    Formula spec = [ & ] {
        try
        {
            return parse_ltlf( text, p.fluents() );
        }
        catch ( const ParseError& e )
        {
            throw ParseError( std::string( "formula: " ) + e.reason, e.position );
        }
    }();
    Plausibility pl;
    if ( !o.plausibility.empty() )
        pl = io::plausibility_from_json( io::parse_json( io::read_file( o.plausibility ), o.plausibility ), p );
    return { std::move( p ), spec, std::move( pl ) };
}

SearchConfig search_config( const Options& o )
{
    SearchConfig c;
    c.minimize_cap = o.minimize_cap;
    c.max_edits = o.max_edits;
    c.max_candidates = o.max_candidates;
    c.bound_override = o.bound;
    c.max_bound = o.max_bound;
    c.limits.max_exhaustive_fluents = o.guard_fluents;
    return c;
}

oracle::OracleGuard guard( const Options& o )
{
    oracle::OracleGuard g;
    g.max_fluents = o.oracle_fluents;
    g.max_states = o.oracle_states;
    g.max_bfs_nodes = o.oracle_nodes;
    return g;
}

ChangeKind change_kind( const std::string& s )
{
    if ( s == "init" )
        return ChangeKind::Init;
    if ( s == "goal" )
        return ChangeKind::Goal;
    return ChangeKind::Act;
}

Quantifier quantifier( const std::string& s ) { return s == "forall" ? Quantifier::ForAll : Quantifier::Exists; }

Json plan_json( const Plan& p ) { return p.actions; }

Json counters( const SearchStats& s )
{
    return { { "solver_calls", s.sat.solver_calls }, { "variables", s.sat.vars },   { "clauses", s.sat.clauses },
             { "conflicts", s.sat.conflicts },       { "candidates", s.candidates }, { "bound", s.bound },
             { "bound_capped", s.bound_capped } };
}

/// Prints the report and returns the exit code.
int emit_report( const Options& o, const Json& report, const std::string& human, int code )
{
    if ( o.format == "structured" )
        std::cout << report.dump( 2 ) << "\n";
    else
        std::cout << human;
    return code;
}

std::string plan_lines( const Plan& p, const std::string& indent )
{
    std::string out;
    for ( std::size_t i = 0; i < p.size(); ++i )
        out += indent + std::to_string( i + 1 ) + ". " + p.actions[ i ] + "\n";
    if ( p.size() == 0 )
        out += indent + "(empty plan)\n";
    return out;
}

int cmd_validate( const Options& o )
{
    auto p = io::load_problem( o.problem );
    Json r{ { "command", "validate" } };
    std::string h = "problem: " + std::to_string( p.num_fluents() ) + " fluents, " +
                    std::to_string( p.actions().size() ) + " actions, well-formed\n";
    if ( o.plan.empty() )
    {
        r[ "verdict" ] = "well-formed";
        r[ "timings" ] = Json::object();
        return emit_report( o, r, h, Yes );
    }
    auto plan = io::plan_from_text( io::read_file( o.plan ) );
    io::check_plan_names( p, plan );
    auto v = validate_plan( p, plan );
    r[ "verdict" ] = v.valid() ? "valid" : "invalid";
    r[ "witness" ] = plan_json( plan );
    r[ "trace" ] = io::trace_to_json( v.trace, p.fluents() );
    if ( v.valid() )
        h += "plan: valid, " + std::to_string( plan.size() ) + " steps, " + std::to_string( v.trace.size() ) + " states\n";
    else if ( v.failure == ValidationResult::Failure::NotApplicable )
    {
        r[ "failure" ] = { { "kind", "not-applicable" }, { "step", v.step }, { "action", plan.actions[ v.step ] } };
        h += "plan: invalid, step " + std::to_string( v.step + 1 ) + " (" + plan.actions[ v.step ] +
             ") is not applicable\n";
    }
    else
    {
        r[ "failure" ] = { { "kind", "goal-not-reached" } };
        h += "plan: invalid, the goal does not hold in the final state\n";
    }
    r[ "timings" ] = Json::object();
    return emit_report( o, r, h, v.valid() ? Yes : No );
}

int oracle_check( const Options& o, const Loaded& in )
{
    auto q = quantifier( o.quantifier );
    auto g = guard( o );
    Json r{ { "command", "check" }, { "backend", "explicit-oracle" }, { "quantifier", o.quantifier } };
    std::string h;
    bool yes;
    if ( q == Quantifier::Exists )
    {
        auto plan = oracle::brute_exists( in.problem, in.spec, in.plausibility, g );
        yes = plan.has_value();
        if ( plan )
        {
            r[ "witness" ] = plan_json( *plan );
            h = "yes: a loop-free valid plan satisfies the formula\n" + plan_lines( *plan, "  " );
        }
        else
            h = "no: no loop-free valid plan satisfies the formula\n";
    }
    else
    {
        yes = oracle::brute_forall( in.problem, in.spec, in.plausibility, g );
        auto bad = yes ? std::nullopt : oracle::brute_counterexample( in.problem, in.spec, in.plausibility, g );
        if ( yes )
            h = "yes: every loop-free valid plan satisfies the formula\n";
        else if ( bad )
        {
            r[ "counterexample" ] = plan_json( *bad );
            h = "no: this valid plan violates the formula\n" + plan_lines( *bad, "  " );
        }
        else
            h = "no: the problem has no valid plan\n";
    }
    r[ "verdict" ] = yes ? "yes" : "no";
    r[ "timings" ] = Json::object();
    return emit_report( o, r, h, yes ? Yes : No );
}

int cmd_check( const Options& o, bool use_oracle )
{
    auto in = load( o );
    if ( use_oracle || o.backend == "explicit-oracle" )
        return oracle_check( o, in );
    auto q = quantifier( o.quantifier );
    auto res = check_spec( in.problem, in.spec, q, in.plausibility, search_config( o ) );
    Json r{ { "command", "check" }, { "backend", "sat" }, { "quantifier", o.quantifier } };
    r[ "verdict" ] = res.holds ? "yes" : "no";
    std::string h;
    if ( res.holds )
    {
        r[ "witness" ] = plan_json( res.plan );
        r[ "trace" ] = io::trace_to_json( res.trace, in.problem.fluents() );
        h = q == Quantifier::Exists ? "yes: a loop-free valid plan satisfies the formula\n"
                                    : "yes: every loop-free valid plan satisfies the formula, for example\n";
        h += plan_lines( res.plan, "  " );
    }
    else if ( res.counterexample )
    {
        r[ "counterexample" ] = plan_json( res.plan );
        r[ "trace" ] = io::trace_to_json( res.trace, in.problem.fluents() );
        h = "no: this valid plan violates the formula\n" + plan_lines( res.plan, "  " );
    }
    else
        h = q == Quantifier::Exists ? "no: no loop-free valid plan satisfies the formula\n"
                                    : "no: the problem has no valid plan\n";
    r[ "timings" ] = counters( res.stats );
    if ( res.stats.bound_capped )
        h += "note: the plan-length bound was capped at " + std::to_string( res.stats.bound ) + " states\n";
    return emit_report( o, r, h, res.holds ? Yes : No );
}

std::string changed_parts( const PlanningProblem& before, const PlanningProblem& after )
{
    std::string out;
    if ( !( before.init() == after.init() ) )
        out += "  init: " + state_string( after.init(), after.fluents() ) + "\n";
    if ( !structurally_equal( before.goal(), after.goal() ) )
        out += "  goal: " + to_string( after.goal() ) + "\n";
    for ( std::size_t a = 0; a < before.actions().size(); ++a )
        if ( !structurally_equal( before.action( a ).pre, after.action( a ).pre ) )
            out += "  pre(" + after.action( a ).name + "): " + to_string( after.action( a ).pre ) + "\n";
    return out;
}

int oracle_explain( const Options& o, const Loaded& in )
{
    auto kind = change_kind( o.change );
    auto q = quantifier( o.quantifier );
    std::optional<std::size_t> cap = o.minimize ? std::optional<std::size_t>{ o.minimize_cap } : o.budget;
    auto res = oracle::brute_csep( in.problem, in.spec, kind, q, in.plausibility, cap, guard( o ) );
    Json r{ { "command", "explain" },
            { "backend", "explicit-oracle" },
            { "change", o.change },
            { "quantifier", o.quantifier } };
    r[ "verdict" ] = oracle::to_string( res.status );
    std::string h;
    int code = No;
    if ( res.status == oracle::Status::Found )
    {
        r[ "cost" ] = res.cost;
        r[ "witness" ] = plan_json( res.witness );
        r[ "problem" ] = io::problem_to_json( *res.problem );
        h = "found: counterfactual at cost " + std::to_string( res.cost ) + "\n" +
            changed_parts( in.problem, *res.problem ) + "witness:\n" + plan_lines( res.witness, "  " );
        if ( !o.emit.empty() )
            io::write_file( o.emit, io::problem_to_json( *res.problem ).dump( 2 ) + "\n" );
        code = Yes;
    }
    else if ( res.status == oracle::Status::None )
        h = res.exhausted ? "none: no counterfactual exists\n"
                          : "none: no counterfactual within " + std::to_string( res.explored_depth ) + " edits\n";
    else
    {
        h = "unknown: node budget exhausted; no counterfactual within " + std::to_string( res.explored_depth ) +
            " edits\n";
        code = Undecided;
    }
    r[ "timings" ] = { { "nodes", res.nodes }, { "explored_depth", res.explored_depth } };
    return emit_report( o, r, h, code );
}

int cmd_explain( const Options& o, bool use_oracle )
{
    if ( o.minimize && o.budget )
        throw CLI::ValidationError( "--budget and --minimize are exclusive" );
    if ( !o.minimize && !o.budget )
        throw CLI::ValidationError( "one of --budget or --minimize is required" );
    auto in = load( o );
    if ( use_oracle || o.backend == "explicit-oracle" )
        return oracle_explain( o, in );
    CounterfactualQuery q{ in.problem, in.spec, change_kind( o.change ), quantifier( o.quantifier ),
                           o.minimize ? std::nullopt : o.budget, in.plausibility };
    auto res = csep( q, search_config( o ) );
    Json r{ { "command", "explain" }, { "backend", "sat" }, { "change", o.change }, { "quantifier", o.quantifier } };
    r[ "verdict" ] = res.found ? "found" : "none";
    std::string h;
    if ( res.found )
    {
        r[ "cost" ] = res.cost;
        Json diff = Json::array();
        for ( const auto& e : res.diff )
            diff.push_back( io::edit_to_json( e, in.problem.fluents() ) );
        r[ "diff" ] = diff;
        r[ "witness" ] = plan_json( res.witness );
        r[ "trace" ] = io::trace_to_json( res.witness_trace, in.problem.fluents() );
        r[ "universal" ] = res.universal;
        r[ "problem" ] = io::problem_to_json( *res.problem );
        h = "found: counterfactual at cost " + std::to_string( res.cost ) + "\nedits:\n";
        for ( const auto& e : res.diff )
            h += "  " + describe( e, in.problem.fluents() ) + "\n";
        if ( res.diff.empty() )
            h += "  (none)\n";
        h += "modified problem:\n" + changed_parts( in.problem, *res.problem );
        h += res.universal ? "every loop-free valid plan satisfies the formula, for example:\n" : "witness:\n";
        h += plan_lines( res.witness, "  " );
        if ( !o.emit.empty() )
            io::write_file( o.emit, io::problem_to_json( *res.problem ).dump( 2 ) + "\n" );
    }
    else
        h = o.minimize ? "none: no counterfactual within " + std::to_string( o.minimize_cap ) + " edits\n"
                       : "none: no counterfactual within budget " + std::to_string( *o.budget ) + "\n";
    if ( res.stats.bound_capped )
        h += "note: the plan-length bound was capped at " + std::to_string( res.stats.bound ) + " states\n";
    r[ "timings" ] = counters( res.stats );
    return emit_report( o, r, h, res.found ? Yes : No );
}

int cmd_eval_trace( const Options& o )
{
    auto in = load( o );
    Trace t;
    Json r{ { "command", "eval-trace" } };
    if ( !o.trace.empty() )
        t = io::trace_from_json( io::parse_json( io::read_file( o.trace ), o.trace ), in.problem.fluents() );
    else if ( !o.plan.empty() )
    {
        auto plan = io::plan_from_text( io::read_file( o.plan ) );
        io::check_plan_names( in.problem, plan );
        auto v = validate_plan( in.problem, plan );
        if ( v.failure == ValidationResult::Failure::NotApplicable )
            throw StructuralError( "plan step " + std::to_string( v.step + 1 ) + " is not applicable" );
        t = v.trace;
        r[ "witness" ] = plan_json( plan );
    }
    else
        throw CLI::ValidationError( "one of --trace or --plan is required" );
    bool v = evaluate( t, in.spec );
    r[ "verdict" ] = v ? "true" : "false";
    r[ "timings" ] = Json::object();
    return emit_report( o, r, std::string( v ? "true" : "false" ) + "\n", v ? Yes : No );
}

int cmd_gen( const Options& o )
{
    GenOptions g{ o.fluents, o.actions, o.seed, o.depth };
    auto inst = generate_instance( g );
    auto problem = io::problem_to_json( inst.problem ).dump( 2 ) + "\n";
    auto formula = to_string( inst.spec ) + "\n";
    if ( !o.problem_out.empty() )
        io::write_file( o.problem_out, problem );
    if ( !o.formula_out.empty() )
        io::write_file( o.formula_out, formula );
    if ( o.problem_out.empty() && o.formula_out.empty() )
    {
        Json r{ { "problem", io::problem_to_json( inst.problem ) }, { "formula", to_string( inst.spec ) } };
        std::cout << r.dump( 2 ) << "\n";
    }
    return Yes;
}

void problem_arg( CLI::App* c, Options& o ) { c->add_option( "problem", o.problem, "problem file" )->required(); }

void formula_args( CLI::App* c, Options& o )
{
    c->add_option( "--formula", o.formula, "LTLf formula over the fluents (default: true)" );
    c->add_option( "--formula-file", o.formula_file, "read the formula from a file" );
    c->add_option( "--plausibility", o.plausibility, "plausibility constraints (JSON)" );
}

void search_args( CLI::App* c, Options& o )
{
    c->add_option( "--quantifier", o.quantifier )->check( CLI::IsMember( { "exists", "forall" } ) );
    c->add_option( "--bound", o.bound, "plan-length bound in states" );
    c->add_option( "--max-bound", o.max_bound, "clamp for computed bounds" );
    c->add_option( "--guard", o.guard_fluents, "fluent limit for exhaustive operations" );
    c->add_option( "--oracle-fluents", o.oracle_fluents, "oracle fluent guard" );
    c->add_option( "--oracle-states", o.oracle_states, "oracle plan-length guard" );
    c->add_option( "--oracle-nodes", o.oracle_nodes, "oracle search node budget" );
}

void explain_args( CLI::App* c, Options& o )
{
    c->add_option( "--change", o.change )->check( CLI::IsMember( { "init", "goal", "act" } ) );
    c->add_option( "--budget", o.budget, "inclusive edit budget" );
    c->add_flag( "--minimize", o.minimize, "find the cheapest counterfactual up to the cap" );
    c->add_option( "--minimize-cap", o.minimize_cap );
    c->add_option( "--max-edits", o.max_edits, "edit-set size limit for act/forall" );
    c->add_option( "--max-candidates", o.max_candidates, "candidates per edit distance" );
    c->add_option( "--emit", o.emit, "write the modified problem to this file" );
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "Counterfactual scenarios for grounded planning problems" };
    app.require_subcommand( 1 );
    Options o;
    app.add_option( "--format", o.format )->check( CLI::IsMember( { "human", "structured" } ) );
    app.add_option( "--backend", o.backend )->check( CLI::IsMember( { "sat", "explicit-oracle" } ) );

    auto* validate = app.add_subcommand( "validate", "check a problem file and optionally a plan" );
    problem_arg( validate, o );
    validate->add_option( "--plan", o.plan, "plan file" );

    auto* check = app.add_subcommand( "check", "does some/every plan satisfy a formula" );
    problem_arg( check, o );
    formula_args( check, o );
    search_args( check, o );

    auto* explain = app.add_subcommand( "explain", "compute a counterfactual scenario" );
    problem_arg( explain, o );
    formula_args( explain, o );
    search_args( explain, o );
    explain_args( explain, o );

    auto* orc = app.add_subcommand( "oracle", "answer check/explain by brute force" );
    orc->require_subcommand( 1 );
    auto* ocheck = orc->add_subcommand( "check" );
    problem_arg( ocheck, o );
    formula_args( ocheck, o );
    search_args( ocheck, o );
    auto* oexplain = orc->add_subcommand( "explain" );
    problem_arg( oexplain, o );
    formula_args( oexplain, o );
    search_args( oexplain, o );
    explain_args( oexplain, o );

    auto* gen = app.add_subcommand( "gen", "generate a random instance" );
    gen->add_option( "--fluents", o.fluents )->check( CLI::Range( 1, 20 ) );
    gen->add_option( "--actions", o.actions );
    gen->add_option( "--seed", o.seed );
    gen->add_option( "--depth", o.depth, "formula depth" );
    gen->add_option( "--problem-out", o.problem_out );
    gen->add_option( "--formula-out", o.formula_out );

    auto* eval = app.add_subcommand( "eval-trace", "evaluate a formula on a trace or plan" );
    problem_arg( eval, o );
    formula_args( eval, o );
    eval->add_option( "--trace", o.trace, "trace file (JSON array of states)" );
    eval->add_option( "--plan", o.plan, "plan file; its trace is evaluated" );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::ParseError& e )
    {
        return app.exit( e ) == 0 ? 0 : Failure;
    }

    try
    {
        if ( *validate )
            return cmd_validate( o );
        if ( *check )
            return cmd_check( o, false );
        if ( *explain )
            return cmd_explain( o, false );
        if ( *ocheck )
            return cmd_check( o, true );
        if ( *oexplain )
            return cmd_explain( o, true );
        if ( *gen )
            return cmd_gen( o );
        if ( *eval )
            return cmd_eval_trace( o );
    }
    catch ( const CLI::ValidationError& e )
    {
        std::cerr << "error: " << e.what() << "\n";
    }
    catch ( const std::exception& e )
    {
        std::cerr << "error: " << e.what() << "\n";
    }
    return Failure;
}
