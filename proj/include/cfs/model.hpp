#pragma once

#include "cfs/error.hpp"
#include "cfs/formula.hpp"
#include "cfs/parser.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace cfs
{

/// Caps for every operation whose cost is exponential in the fluent count.
struct Limits
{
    std::size_t max_exhaustive_fluents = 20;
};

inline void check_guard( std::size_t fluents, const Limits& limits, const char* what )
{
    if ( fluents > limits.max_exhaustive_fluents )
        throw ResourceError( std::string( what ) + ": " + std::to_string( fluents ) +
                             " fluents exceed the exhaustive-operation guard of " +
                             std::to_string( limits.max_exhaustive_fluents ) );
}

struct Fluent
{
    int index;
    std::string name;
};

struct Effect
{
    int fluent;
    bool value;

    friend bool operator==( const Effect&, const Effect& ) = default;
};

struct ActionDef
{
    std::string name;
    Formula pre;
    std::vector<Effect> eff; // sorted by fluent, at most one per fluent
};

struct Plan
{
    std::vector<std::string> actions;

    [[nodiscard]] std::size_t size() const { return actions.size(); }
    friend bool operator==( const Plan&, const Plan& ) = default;
    friend bool operator<( const Plan& a, const Plan& b ) { return a.actions < b.actions; }
};

/// Grounded classical planning problem <F, A, I, G>. Immutable; the `with_*`
/// members return edited copies.
class PlanningProblem
{
    Alphabet _fluents;
    std::vector<ActionDef> _actions;
    std::unordered_map<std::string, std::size_t> _action_index;
    Assignment _init;
    Formula _goal;

    void check_formula( const Formula& f, const char* what ) const
    {
        if ( !is_propositional( f ) )
            throw StructuralError( std::string( what ) + " must be propositional" );
        check_atoms( f, what );
    }

    void check_atoms( const Formula& f, const char* what ) const
    {
        if ( f.op() == Op::Atom )
        {
            auto idx = _fluents.find( f.atom_name() );
            if ( !idx || *idx != f.atom_index() )
                throw StructuralError( std::string( what ) + " references undeclared fluent '" + f.atom_name() + "'" );
        }
        for ( const auto& g : f.args() )
            check_atoms( g, what );
    }

public:
    PlanningProblem( Alphabet fluents, std::vector<ActionDef> actions, Assignment init, Formula goal )
            : _fluents{ std::move( fluents ) }, _actions{ std::move( actions ) }, _init{ std::move( init ) },
              _goal{ std::move( goal ) }
    {
        if ( _init.size() != _fluents.size() )
            throw StructuralError( "initial assignment is not total over the fluents" );
        check_formula( _goal, "goal" );
        for ( std::size_t i = 0; i < _actions.size(); ++i )
        {
            auto& a = _actions[ i ];
            if ( !_action_index.emplace( a.name, i ).second )
                throw StructuralError( "duplicate action '" + a.name + "'" );
            check_formula( a.pre, "precondition" );
            std::sort( a.eff.begin(), a.eff.end(),
                       []( const Effect& x, const Effect& y ) { return x.fluent < y.fluent; } );
            for ( std::size_t k = 0; k < a.eff.size(); ++k )
            {
                if ( a.eff[ k ].fluent < 0 || static_cast<std::size_t>( a.eff[ k ].fluent ) >= _fluents.size() )
                    throw StructuralError( "action '" + a.name + "' has an effect on an undeclared fluent" );
                if ( k > 0 && a.eff[ k ].fluent == a.eff[ k - 1 ].fluent )
                    throw StructuralError( "action '" + a.name + "' has two effects on fluent '" +
                                           _fluents.name( a.eff[ k ].fluent ) + "'" );
            }
        }
    }

    [[nodiscard]] const Alphabet& fluents() const { return _fluents; }
    [[nodiscard]] std::size_t num_fluents() const { return _fluents.size(); }
    [[nodiscard]] const std::vector<ActionDef>& actions() const { return _actions; }
    [[nodiscard]] const ActionDef& action( std::size_t i ) const { return _actions.at( i ); }
    [[nodiscard]] const Assignment& init() const { return _init; }
    [[nodiscard]] const Formula& goal() const { return _goal; }

    [[nodiscard]] std::optional<std::size_t> find_action( const std::string& name ) const
    {
        auto it = _action_index.find( name );
        if ( it == _action_index.end() )
            return std::nullopt;
        return it->second;
    }

    [[nodiscard]] std::size_t action_index( const std::string& name ) const
    {
        auto idx = find_action( name );
        if ( !idx )
            throw StructuralError( "unknown action '" + name + "'" );
        return *idx;
    }

    [[nodiscard]] Formula fluent_atom( int index ) const { return Formula::atom( _fluents, index ); }

    [[nodiscard]] Formula parse( std::string_view text, bool allow_reserved = false ) const
    {
        return parse_bool( text, _fluents, allow_reserved );
    }

    [[nodiscard]] PlanningProblem with_init( Assignment init ) const
    {
        return { _fluents, _actions, std::move( init ), _goal };
    }

    [[nodiscard]] PlanningProblem with_goal( Formula goal ) const { return { _fluents, _actions, _init, std::move( goal ) }; }

    [[nodiscard]] PlanningProblem with_precondition( std::size_t action, Formula pre ) const
    {
        auto actions = _actions;
        actions.at( action ).pre = std::move( pre );
        return { _fluents, std::move( actions ), _init, _goal };
    }
};

// ---------------------------------------------------------------------------
// Semantics
// ---------------------------------------------------------------------------

inline bool applicable( const ActionDef& a, const Assignment& s ) { return eval_formula( a.pre, s ); }

/// Successor of an applicable action. Fluents outside eff(a) are framed.
inline Assignment successor( const ActionDef& a, const Assignment& s )
{
    if ( !applicable( a, s ) )
        throw ContractError( "action '" + a.name + "' is not applicable" );
    Assignment next = s;
    for ( const auto& e : a.eff )
        next.set( static_cast<std::size_t>( e.fluent ), e.value );
    return next;
}

struct ValidationResult
{
    enum class Failure
    {
        None,
        NotApplicable,
        GoalNotReached,
    };

    Failure failure = Failure::None;
    std::size_t step = 0; // first failing step for NotApplicable
    Trace trace;          // states visited up to the failure

    [[nodiscard]] bool valid() const { return failure == Failure::None; }
};

inline ValidationResult validate_plan( const PlanningProblem& p, const Plan& plan )
{
    ValidationResult r;
    r.trace.push_back( p.init() );
    for ( std::size_t i = 0; i < plan.actions.size(); ++i )
    {
        const auto& a = p.action( p.action_index( plan.actions[ i ] ) );
        if ( !applicable( a, r.trace.back() ) )
        {
            r.failure = ValidationResult::Failure::NotApplicable;
            r.step = i;
            return r;
        }
        r.trace.push_back( successor( a, r.trace.back() ) );
    }
    if ( !eval_formula( p.goal(), r.trace.back() ) )
        r.failure = ValidationResult::Failure::GoalNotReached;
    return r;
}

/// True when no two states of the trace agree on the first `n` fluents.
inline bool is_loop_free( const Trace& trace, std::size_t n )
{
    for ( std::size_t i = 0; i < trace.size(); ++i )
        for ( std::size_t j = i + 1; j < trace.size(); ++j )
            if ( trace[ i ].agrees_on( trace[ j ], n ) )
                return false;
    return true;
}

struct PlanEnumeration
{
    std::vector<std::pair<Plan, Trace>> plans;
    bool truncated = false;
};

/// Valid plans whose traces never repeat a state, depth-first with actions in
/// declaration order; a plan is reported before its extensions.
inline PlanEnumeration enumerate_loop_free_plans( const PlanningProblem& p, std::optional<std::size_t> max_count = {},
                                                  const Limits& limits = {} )
{
    check_guard( p.num_fluents(), limits, "enumerate_loop_free_plans" );
    PlanEnumeration out;
    Plan plan;
    Trace trace{ p.init() };
    std::unordered_set<Assignment, AssignmentHash> on_path{ p.init() };

    auto dfs = [ & ]( auto&& self ) -> bool {
        if ( eval_formula( p.goal(), trace.back() ) )
        {
            if ( max_count && out.plans.size() >= *max_count )
            {
                out.truncated = true;
                return false;
            }
            out.plans.emplace_back( plan, trace );
        }
        for ( const auto& a : p.actions() )
        {
            if ( !applicable( a, trace.back() ) )
                continue;
            auto next = successor( a, trace.back() );
            if ( on_path.count( next ) != 0 )
                continue;
            on_path.insert( next );
            trace.push_back( next );
            plan.actions.push_back( a.name );
            bool go_on = self( self );
            plan.actions.pop_back();
            trace.pop_back();
            on_path.erase( next );
            if ( !go_on )
                return false;
        }
        return true;
    };
    dfs( dfs );
    return out;
}

/// States reachable from I, computed as a fixed point of the successor image.
inline std::set<Assignment> reachable_states( const PlanningProblem& p, const Limits& limits = {} )
{
    check_guard( p.num_fluents(), limits, "reachable_states" );
    std::set<Assignment> reached{ p.init() };
    std::vector<Assignment> frontier{ p.init() };
    while ( !frontier.empty() )
    {
        std::vector<Assignment> fresh;
        for ( const auto& s : frontier )
            for ( const auto& a : p.actions() )
                if ( applicable( a, s ) )
                {
                    auto n = successor( a, s );
                    if ( reached.insert( n ).second )
                        fresh.push_back( std::move( n ) );
                }
        frontier = std::move( fresh );
    }
    return reached;
}

inline std::uint64_t count_models( const Formula& f, std::size_t num_fluents, const Limits& limits = {} )
{
    check_guard( num_fluents, limits, "count_models" );
    std::uint64_t n = 0;
    for ( std::uint64_t code = 0; code < ( std::uint64_t{ 1 } << num_fluents ); ++code )
        n += eval_formula( f, Assignment::from_code( code, num_fluents ) ) ? 1 : 0;
    return n;
}

/// Models in lexicographic order by fluent index.
inline std::vector<Assignment> models_of( const Formula& f, std::size_t num_fluents, const Limits& limits = {} )
{
    check_guard( num_fluents, limits, "models_of" );
    std::vector<Assignment> out;
    for ( std::uint64_t code = 0; code < ( std::uint64_t{ 1 } << num_fluents ); ++code )
    {
        auto s = Assignment::from_code( code, num_fluents );
        if ( eval_formula( f, s ) )
            out.push_back( std::move( s ) );
    }
    return out;
}

// ---------------------------------------------------------------------------
// Construction helpers
// ---------------------------------------------------------------------------

struct ActionSpec
{
    std::string name;
    std::string pre;
    std::vector<std::pair<std::string, bool>> eff;
};

/// Builds a problem from names and formula strings in the shared grammar.
inline PlanningProblem make_problem( const std::vector<std::string>& fluent_names, const std::vector<ActionSpec>& actions,
                                     const std::vector<std::string>& init_true, std::string_view goal,
                                     bool allow_reserved = false )
{
    Alphabet fluents;
    for ( const auto& n : fluent_names )
    {
        auto name = normalize_name( n );
        if ( is_reserved_name( name ) && !allow_reserved )
            throw StructuralError( "reserved fluent name '" + name + "'" );
        fluents.add( name );
    }
    auto fluent_index = [ & ]( const std::string& raw ) {
        auto idx = fluents.find( normalize_name( raw ) );
        if ( !idx )
            throw StructuralError( "undeclared fluent '" + raw + "'" );
        return *idx;
    };
    std::vector<ActionDef> defs;
    for ( const auto& a : actions )
    {
        ActionDef d{ normalize_name( a.name ), parse_bool( a.pre, fluents, allow_reserved ), {} };
        for ( const auto& [ f, v ] : a.eff )
            d.eff.push_back( { fluent_index( f ), v } );
        defs.push_back( std::move( d ) );
    }
    Assignment init( fluents.size() );
    for ( const auto& f : init_true )
        init.set( static_cast<std::size_t>( fluent_index( f ) ), true );
    auto g = parse_bool( goal, fluents, allow_reserved );
    return { std::move( fluents ), std::move( defs ), std::move( init ), std::move( g ) };
}

} // namespace cfs
