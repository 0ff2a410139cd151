#pragma once

// Checks shared by the unit suites and the acceptance binary. Each returns the
// number of violations and records the first few in `log`.

#include "support.hpp"

#include <map>
#include <set>
#include <sstream>

namespace cfs::test
{

struct Log
{
    std::vector<std::string> lines;
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;

    void fail( const std::string& msg )
    {
        ++failures;
        if ( lines.size() < 10 )
            lines.push_back( msg );
    }

    void merge( const Log& o )
    {
        checked += o.checked;
        failures += o.failures;
        for ( const auto& l : o.lines )
            if ( lines.size() < 10 )
                lines.push_back( l );
    }

    [[nodiscard]] bool ok() const { return failures == 0; }
};

inline std::string trace_text( const Trace& t )
{
    std::string s;
    for ( const auto& st : t )
        s += std::to_string( st.code() ) + " ";
    return s;
}

// ---------------------------------------------------------------------------
// LTLf engine
// ---------------------------------------------------------------------------

/// Expansion laws, checked at every position through suffixes.
inline Log expansion_laws( std::size_t pairs, std::uint64_t seed )
{
    Log log;
    auto a = atoms( 2 );
    detail::Rng rng( seed );
    auto last = Formula::weak_next( Formula::bottom() );
    for ( std::size_t i = 0; i < pairs; ++i )
    {
        const std::size_t len = 1 + rng.below( 5 );
        Trace t;
        for ( std::size_t k = 0; k < len; ++k )
            t.push_back( Assignment::from_code( rng.below( 4 ), 2 ) );
        auto f = random_ltlf( rng, a, 3 );
        auto g = random_ltlf( rng, a, 3 );
        const std::vector<std::pair<Formula, Formula>> laws{
            { Formula::until( f, g ), Formula::disjunction( { g, Formula::conjunction( { f, Formula::next( Formula::until( f, g ) ) } ) } ) },
            { Formula::eventually( f ), Formula::disjunction( { f, Formula::next( Formula::eventually( f ) ) } ) },
            { Formula::globally( f ), Formula::conjunction( { f, Formula::weak_next( Formula::globally( f ) ) } ) },
            { Formula::weak_next( f ), Formula::negation( Formula::next( Formula::negation( f ) ) ) },
            { Formula::eventually( f ), Formula::until( Formula::top(), f ) },
            { Formula::globally( f ), Formula::negation( Formula::eventually( Formula::negation( f ) ) ) },
            { Formula::next( Formula::top() ), Formula::negation( last ) },
        };
        for ( std::size_t start = 0; start < len; ++start )
        {
            Trace suffix( t.begin() + static_cast<std::ptrdiff_t>( start ), t.end() );
            for ( const auto& [ lhs, rhs ] : laws )
            {
                ++log.checked;
                if ( evaluate( suffix, lhs ) != evaluate( suffix, rhs ) )
                    log.fail( "expansion law " + to_string( lhs ) + " == " + to_string( rhs ) + " on " +
                              trace_text( suffix ) );
            }
        }
        ++log.checked;
        if ( evaluate( t, last ) != ( len == 1 ) )
            log.fail( "WX false must hold exactly at the last state" );
        ++log.checked;
        if ( evaluate( t, f ) != oracle::holds( f, t ) )
            log.fail( "evaluate disagrees with the reference evaluator on " + to_string( f ) );
    }
    return log;
}

/// evaluate(t, negate_nnf(f)) == !evaluate(t, f) over all traces of <= 3 states.
inline Log nnf_complement( std::size_t formulas, std::uint64_t seed )
{
    Log log;
    auto a = atoms( 2 );
    auto traces = all_traces( 2, 3 );
    detail::Rng rng( seed );
    for ( std::size_t i = 0; i < formulas; ++i )
    {
        auto f = random_ltlf( rng, a, 4 );
        auto n = negate_nnf( f );
        auto p = nnf( f );
        for ( const auto& t : traces )
        {
            log.checked += 2;
            bool v = evaluate( t, f );
            if ( evaluate( t, n ) == v )
                log.fail( "negate_nnf does not complement " + to_string( f ) + " on " + trace_text( t ) );
            if ( evaluate( t, p ) != v )
                log.fail( "nnf changes the meaning of " + to_string( f ) + " on " + trace_text( t ) );
        }
    }
    return log;
}

/// sat_bounded against trace enumeration for each bound 1..max_bound.
inline void sat_agreement( const Formula& f, std::size_t n, std::size_t max_bound, Log& log )
{
    for ( std::size_t b = 1; b <= max_bound; ++b )
    {
        ++log.checked;
        SatQuery q{ f, n, b };
        auto r = sat_bounded( q );
        auto brute = oracle::brute_sat( f, n, b );
        if ( r.sat != brute.has_value() )
            log.fail( "sat_bounded(" + to_string( f ) + ", B=" + std::to_string( b ) + ") = " +
                      ( r.sat ? "sat" : "unsat" ) );
        else if ( r.sat && ( r.model.size() > b || !oracle::holds( f, r.model ) ) )
            log.fail( "sat_bounded model does not satisfy " + to_string( f ) );
    }
}

inline void weight_agreement( const Formula& f, std::size_t n, const std::vector<std::uint32_t>& w, std::size_t b,
                              Log& log )
{
    ++log.checked;
    SatQuery q{ f, n, b, w };
    auto r = min_weight_model( q );
    auto brute = oracle::brute_min_weight( f, n, w, b );
    if ( r.sat != brute.has_value() )
        log.fail( "min_weight_model existence differs on " + to_string( f ) );
    else if ( r.sat && ( r.weight != brute->second || trace_weight( r.model, w ) != brute->second ) )
        log.fail( "min_weight_model(" + to_string( f ) + ") weight " + std::to_string( *r.weight ) + " != " +
                  std::to_string( brute->second ) );
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

/// do(a_0) & X(do(a_1) & X(... & X(WX false))): the models of exactly this plan.
inline Formula plan_formula( const EncodedProblem& e, const Plan& plan )
{
    Formula f = Formula::weak_next( Formula::bottom() );
    for ( std::size_t i = plan.size(); i-- > 0; )
    {
        auto a = e.action_prop( e.source.action_index( plan.actions[ i ] ) );
        f = Formula::conjunction( { Formula::atom( e.alphabet, a ), Formula::next( f ) } );
    }
    return f;
}

inline std::vector<int> fluent_props( std::size_t n )
{
    std::vector<int> v;
    for ( std::size_t f = 0; f < n; ++f )
        v.push_back( static_cast<int>( f ) );
    return v;
}

/// All plans projected from loop-free models of [P]_G within `bound`, by blocking.
inline std::set<Plan> model_plans( const PlanningProblem& p, std::size_t bound )
{
    auto e = encode_with_goal( p );
    std::set<Plan> out;
    std::vector<Formula> blocked;
    for ( ;; )
    {
        std::vector<Formula> parts{ e.formula };
        for ( const auto& b : blocked )
            parts.push_back( Formula::negation( b ) );
        SatQuery q{ Formula::conjunction( parts ), e.num_props(), bound };
        q.distinct_over = fluent_props( p.num_fluents() );
        auto r = sat_bounded( q );
        if ( !r.sat )
            return out;
        auto plan = extract_plan( e, r.model ).first;
        if ( !out.insert( plan ).second )
            throw std::logic_error( "blocked plan returned again" );
        blocked.push_back( plan_formula( e, plan ) );
    }
}

inline Log encoding_equivalence( std::size_t problems, std::uint64_t seed )
{
    Log log;
    detail::Rng rng( seed );
    for ( std::size_t i = 0; i < problems; ++i )
    {
        GenOptions g{ 1 + rng.below( 3 ), 1 + rng.below( 3 ), seed * 1000 + i, 0 };
        auto p = generate_instance( g ).problem;
        auto bound = default_bound( p );
        auto from_models = model_plans( p, bound );
        std::set<Plan> explicit_plans;
        for ( const auto& [ plan, trace ] : enumerate_loop_free_plans( p ).plans )
            explicit_plans.insert( plan );
        ++log.checked;
        if ( from_models != explicit_plans )
            log.fail( "instance " + std::to_string( i ) + ": " + std::to_string( from_models.size() ) +
                      " plans from models, " + std::to_string( explicit_plans.size() ) + " by enumeration" );
        for ( const auto& plan : from_models )
        {
            ++log.checked;
            auto v = validate_plan( p, plan );
            if ( !v.valid() || !is_loop_free( v.trace, p.num_fluents() ) )
                log.fail( "instance " + std::to_string( i ) + ": extracted plan is not a loop-free valid plan" );
        }
    }
    return log;
}

// ---------------------------------------------------------------------------
// Counterfactual search against the oracle
// ---------------------------------------------------------------------------

struct Procedure
{
    ChangeKind kind;
    Quantifier q;
};

inline const std::vector<Procedure>& procedures()
{
    static const std::vector<Procedure> all{
        { ChangeKind::Init, Quantifier::Exists }, { ChangeKind::Init, Quantifier::ForAll },
        { ChangeKind::Goal, Quantifier::Exists }, { ChangeKind::Goal, Quantifier::ForAll },
        { ChangeKind::Act, Quantifier::Exists },  { ChangeKind::Act, Quantifier::ForAll },
    };
    return all;
}

inline std::string procedure_name( const Procedure& p )
{
    return std::string( to_string( p.kind ) ) + "/" + to_string( p.q );
}

struct SweepOptions
{
    std::size_t instances = 200;
    std::uint64_t seed = 1;
    std::size_t max_fluents = 4;
    std::size_t max_actions = 3;
    std::size_t max_depth = 3;
    std::vector<std::size_t> budgets{ 0, 1, 2 };
    std::size_t minimize_cap = 8;
    std::uint64_t oracle_nodes = 200'000;
};

inline Instance sweep_instance( const SweepOptions& o, std::size_t i )
{
    detail::Rng rng( o.seed * 7919 + i );
    GenOptions g{ 1 + rng.below( o.max_fluents ), 1 + rng.below( o.max_actions ), o.seed * 100'000 + i,
                  rng.below( o.max_depth + 1 ) };
    return generate_instance( g );
}

struct SweepTally
{
    std::uint64_t compared = 0;
    std::uint64_t undecided = 0; // oracle gave no definitive answer
    std::uint64_t declined = 0;  // engine refused with a resource error
    std::map<std::string, std::uint64_t> found_by_procedure;
};

/// One comparison: engine result vs oracle answer (empty = none within budget).
inline void compare( const CounterfactualResult& r, const std::optional<std::size_t>& want, const std::string& where,
                     Log& log )
{
    ++log.checked;
    if ( r.found != want.has_value() )
        log.fail( where + ": engine " + ( r.found ? "found cost " + std::to_string( r.cost ) : "none" ) +
                  ", oracle " + ( want ? "cost " + std::to_string( *want ) : "none" ) );
    else if ( r.found && r.cost != *want )
        log.fail( where + ": cost " + std::to_string( r.cost ) + " != oracle " + std::to_string( *want ) );
}

/// Structural checks on one found result (weakening, nonemptiness, Hamming cost).
inline void structural( const PlanningProblem& p, const Formula& psi, const Procedure& pr,
                        const CounterfactualResult& r, const std::string& where, Log& log )
{
    if ( !r.found )
        return;
    const auto& p2 = *r.problem;
    const auto n = p.num_fluents();
    ++log.checked;
    auto v = validate_plan( p2, r.witness );
    if ( !v.valid() || !evaluate( v.trace, psi ) )
        log.fail( where + ": witness is not a valid psi-plan of the result" );
    if ( pr.q == Quantifier::ForAll )
    {
        ++log.checked;
        if ( !oracle::brute_forall( p2, psi ) )
            log.fail( where + ": result is not universal" );
        ++log.checked;
        if ( oracle::brute_plans( p2 ).empty() )
            log.fail( where + ": universal result has no plan" );
    }
    if ( pr.kind == ChangeKind::Init )
    {
        ++log.checked;
        if ( p.init().hamming( p2.init(), n ) != r.cost )
            log.fail( where + ": init cost is not the Hamming distance" );
    }
    if ( pr.kind == ChangeKind::Goal )
    {
        ++log.checked;
        if ( goal_edit_distance( p.goal(), p2.goal(), n ) != r.cost )
            log.fail( where + ": goal cost is not the goal edit distance" );
        if ( pr.q == Quantifier::Exists )
        {
            ++log.checked;
            if ( count_models( land( { p.goal(), lnot( p2.goal() ) } ), n ) != 0 )
                log.fail( where + ": existential goal change removed a model" );
        }
    }
    if ( pr.kind == ChangeKind::Act )
    {
        std::uint64_t dist = 0;
        for ( std::size_t a = 0; a < p.actions().size(); ++a )
        {
            const auto& x = p.action( a ).pre;
            const auto& y = p2.action( a ).pre;
            dist += goal_edit_distance( x, y, n );
            if ( pr.q == Quantifier::Exists )
            {
                ++log.checked;
                if ( count_models( land( { x, lnot( y ) } ), n ) != 0 )
                    log.fail( where + ": existential precondition change removed a model" );
            }
        }
        ++log.checked;
        if ( dist != r.cost )
            log.fail( where + ": precondition cost is not the model-set distance" );
    }
}

struct SweepReport
{
    Log agreement;
    Log reduction;
    Log monotone;
    Log structure;
    SweepTally tally;
};

inline CounterfactualResult run_csep( const Instance& inst, const Procedure& pr, std::optional<std::size_t> budget,
                                      std::size_t cap )
{
    SearchConfig cfg;
    cfg.minimize_cap = cap;
    return csep( { inst.problem, inst.spec, pr.kind, pr.q, budget, {} }, cfg );
}

inline SweepReport sweep( const SweepOptions& o, const std::function<void( std::size_t )>& progress = {} )
{
    SweepReport rep;
    oracle::OracleGuard g;
    g.max_bfs_nodes = o.oracle_nodes;
    for ( std::size_t i = 0; i < o.instances; ++i )
    {
        if ( progress )
            progress( i );
        auto inst = sweep_instance( o, i );
        const bool solvable = !oracle::brute_plans( inst.problem ).empty();
        for ( const auto& pr : procedures() )
        {
            const auto where = "instance " + std::to_string( i ) + " " + procedure_name( pr );
            auto truth = oracle::brute_csep( inst.problem, inst.spec, pr.kind, pr.q, {}, o.minimize_cap, g );

            // psi = true with K = 0 is plan existence
            {
                ++rep.reduction.checked;
                auto r = run_csep( { inst.problem, Formula::top() }, pr, 0, o.minimize_cap );
                if ( r.found != solvable )
                    rep.reduction.fail( where + ": psi=true, K=0 gives " + ( r.found ? "found" : "none" ) +
                                        " but the problem is " + ( solvable ? "solvable" : "unsolvable" ) );
            }

            std::optional<std::size_t> previous;
            bool have_previous = false;
            auto check = [ & ]( std::optional<std::size_t> budget, std::size_t k, const std::string& label ) {
                CounterfactualResult r;
                try
                {
                    r = run_csep( inst, pr, budget, o.minimize_cap );
                }
                catch ( const ResourceError& )
                {
                    ++rep.tally.declined;
                    have_previous = false;
                    return;
                }
                structural( inst.problem, inst.spec, pr, r, where + " " + label, rep.structure );
                if ( r.found )
                    ++rep.tally.found_by_procedure[ procedure_name( pr ) ];
                // budget monotonicity: a result within K stays the answer for K' > K
                if ( have_previous && previous )
                {
                    ++rep.monotone.checked;
                    if ( !r.found || r.cost != *previous )
                        rep.monotone.fail( where + " " + label + ": budget increase changed the answer" );
                }
                previous = r.found ? std::optional<std::size_t>{ r.cost } : std::nullopt;
                have_previous = true;
                auto want = oracle::answer_for_budget( truth, k );
                if ( !want )
                {
                    ++rep.tally.undecided;
                    return;
                }
                ++rep.tally.compared;
                compare( r, *want, where + " " + label, rep.agreement );
            };
            for ( auto k : o.budgets )
                check( k, k, "K=" + std::to_string( k ) );
            check( std::nullopt, o.minimize_cap, "minimize" );
        }
    }
    return rep;
}

} // namespace cfs::test
