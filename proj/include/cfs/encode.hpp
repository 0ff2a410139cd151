#pragma once

#include "cfs/error.hpp"
#include "cfs/formula.hpp"
#include "cfs/ltlf.hpp"
#include "cfs/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cfs
{

/// Prefix of the action propositions in the A u F alphabet.
inline constexpr const char* action_prop_prefix = "__do_";
inline constexpr const char* marker_prefix = "__marker_";
inline constexpr const char* relax_suffix = "__relax";

/// An LTLf formula over A u F whose models are executions of `source`.
/// Fluents keep their indices; action i is proposition num_fluents + i.
struct EncodedProblem
{
    Formula formula;
    Alphabet alphabet;
    std::size_t num_fluents = 0;
    PlanningProblem source;

    [[nodiscard]] std::size_t num_props() const { return alphabet.size(); }
    [[nodiscard]] int action_prop( std::size_t action ) const { return static_cast<int>( num_fluents + action ); }
};

inline Alphabet encoding_alphabet( const PlanningProblem& p )
{
    Alphabet a = p.fluents();
    for ( const auto& act : p.actions() )
        a.add( action_prop_prefix + act.name );
    return a;
}

/// The formula [P]: models of length n+1 are the executable action sequences
/// of length n from I.
inline EncodedProblem encode( const PlanningProblem& p )
{
    auto alpha = encoding_alphabet( p );
    const auto nf = p.num_fluents();
    const auto na = p.actions().size();
    auto act = [ & ]( std::size_t i ) { return Formula::atom( alpha, static_cast<int>( nf + i ) ); };
    auto flu = [ & ]( std::size_t f ) { return Formula::atom( alpha, static_cast<int>( f ) ); };

    std::vector<Formula> init;
    for ( std::size_t f = 0; f < nf; ++f )
        init.push_back( p.init()[ f ] ? flu( f ) : Formula::negation( flu( f ) ) );

    const auto not_last = Formula::next( Formula::top() );
    const auto last = Formula::weak_next( Formula::bottom() );

    std::vector<Formula> step;
    std::vector<Formula> any_action;
    std::vector<Formula> no_action;
    for ( std::size_t a = 0; a < na; ++a )
    {
        any_action.push_back( act( a ) );
        no_action.push_back( Formula::negation( act( a ) ) );
        // at most one: a excludes every later action
        std::vector<Formula> later;
        for ( std::size_t b = a + 1; b < na; ++b )
            later.push_back( Formula::negation( act( b ) ) );
        if ( !later.empty() )
            step.push_back( Formula::implies( act( a ), land( std::move( later ) ) ) );
    }
    step.push_back( Formula::implies( not_last, lor( any_action ) ) );
    if ( na > 0 )
        step.push_back( Formula::implies( last, land( no_action ) ) );

    for ( std::size_t a = 0; a < na; ++a )
    {
        const auto& def = p.action( a );
        std::vector<Formula> post;
        for ( const auto& e : def.eff )
            post.push_back( e.value ? flu( static_cast<std::size_t>( e.fluent ) )
                                    : Formula::negation( flu( static_cast<std::size_t>( e.fluent ) ) ) );
        auto pre = rebind( def.pre, alpha );
        step.push_back( Formula::implies( act( a ), land( { pre, Formula::next( land( std::move( post ) ) ) } ) ) );
    }

    // explanatory frame axioms
    for ( std::size_t f = 0; f < nf; ++f )
    {
        std::vector<Formula> raise, lower;
        for ( std::size_t a = 0; a < na; ++a )
            for ( const auto& e : p.action( a ).eff )
                if ( static_cast<std::size_t>( e.fluent ) == f )
                    ( e.value ? raise : lower ).push_back( act( a ) );
        auto x = flu( f );
        auto nx = Formula::negation( x );
        step.push_back( Formula::implies( Formula::conjunction( { nx, Formula::next( x ) } ), lor( raise ) ) );
        step.push_back( Formula::implies( Formula::conjunction( { x, Formula::next( nx ) } ), lor( lower ) ) );
    }

    auto formula = land( { land( std::move( init ) ), Formula::globally( land( std::move( step ) ) ) } );
    return { formula, std::move( alpha ), nf, p };
}

/// [P]_gamma: [P] with gamma holding at the final position.
inline EncodedProblem encode_with_goal( const PlanningProblem& p, const Formula& gamma )
{
    auto e = encode( p );
    auto g = rebind( gamma, e.alphabet );
    e.formula = land( { e.formula, Formula::eventually( land( { Formula::weak_next( Formula::bottom() ), g } ) ) } );
    return e;
}

inline EncodedProblem encode_with_goal( const PlanningProblem& p ) { return encode_with_goal( p, p.goal() ); }

/// Projects a model over A u F onto the action sequence and the fluent trace.
inline std::pair<Plan, Trace> extract_plan( const EncodedProblem& e, const Trace& model )
{
    if ( model.empty() )
        throw StructuralError( "empty model" );
    Plan plan;
    Trace states;
    const auto na = e.source.actions().size();
    for ( std::size_t i = 0; i < model.size(); ++i )
    {
        if ( model[ i ].size() != e.num_props() )
            throw StructuralError( "model is not over the encoding alphabet" );
        std::optional<std::size_t> chosen;
        for ( std::size_t a = 0; a < na; ++a )
        {
            if ( !model[ i ][ e.num_fluents + a ] )
                continue;
            if ( chosen )
                throw StructuralError( "two actions at position " + std::to_string( i ) );
            chosen = a;
        }
        bool final_pos = i + 1 == model.size();
        if ( final_pos && chosen )
            throw StructuralError( "action at the final position" );
        if ( !final_pos && !chosen )
            throw StructuralError( "no action at position " + std::to_string( i ) );
        if ( chosen )
            plan.actions.push_back( e.source.action( *chosen ).name );
        states.push_back( model[ i ].prefix( e.num_fluents ) );
    }
    return { plan, states };
}

// ---------------------------------------------------------------------------
// Relaxation for precondition counterfactuals
// ---------------------------------------------------------------------------

struct RelaxedProblem
{
    PlanningProblem problem;
    /// Weight per action of `problem`: 0 for originals, 1 for relaxed copies.
    std::vector<std::uint32_t> action_weights;
    /// For each action of `problem`, the original it copies (itself for originals).
    std::vector<std::size_t> original;

    /// Weighting over the alphabet of encode(problem).
    [[nodiscard]] std::vector<std::uint32_t> proposition_weights() const
    {
        std::vector<std::uint32_t> w( problem.num_fluents(), 0 );
        w.insert( w.end(), action_weights.begin(), action_weights.end() );
        return w;
    }

    [[nodiscard]] bool is_relaxed( std::size_t action ) const { return action_weights.at( action ) != 0; }
};

inline std::string relaxed_name( const std::string& action ) { return action + relax_suffix; }

/// P_relax = <F, A u A_relax, I, G>; each relaxed copy has precondition true.
inline RelaxedProblem relax( const PlanningProblem& p )
{
    auto actions = p.actions();
    std::vector<std::uint32_t> weights( actions.size(), 0 );
    std::vector<std::size_t> original;
    for ( std::size_t a = 0; a < p.actions().size(); ++a )
        original.push_back( a );
    for ( std::size_t a = 0; a < p.actions().size(); ++a )
    {
        auto name = relaxed_name( p.action( a ).name );
        if ( p.find_action( name ) )
            throw StructuralError( "relaxed action name '" + name + "' collides with an existing action" );
        actions.push_back( ActionDef{ name, Formula::top(), p.action( a ).eff } );
        weights.push_back( 1 );
        original.push_back( a );
    }
    return { PlanningProblem( p.fluents(), std::move( actions ), p.init(), p.goal() ), std::move( weights ),
             std::move( original ) };
}

// ---------------------------------------------------------------------------
// Plausibility constraints
// ---------------------------------------------------------------------------

struct Plausibility
{
    std::optional<Formula> init;
    std::optional<Formula> goal;
    /// Constraint that must hold in every state where the named action is applied.
    std::vector<std::pair<std::string, Formula>> act;

    [[nodiscard]] bool empty() const { return !init && !goal && act.empty(); }
};

inline std::string marker_name( const std::string& action ) { return marker_prefix + action; }

/// Folds the constraints into the specification. Action constraints need a
/// marker fluent per constrained action: set by that action, cleared by every
/// other one, initially false. Markers are appended after the original fluents.
inline std::pair<Formula, PlanningProblem> inject_plausibility( const Formula& spec, const Plausibility& pl,
                                                                const PlanningProblem& p )
{
    const auto nf = p.num_fluents();
    auto check = [ & ]( const Formula& f, const std::string& what ) {
        if ( !is_propositional( f ) )
            throw StructuralError( what + " plausibility constraint must be propositional" );
        if ( max_atom( f ) >= static_cast<int>( nf ) )
            throw StructuralError( what + " plausibility constraint mentions an undeclared fluent" );
        rebind( f, p.fluents() );
    };
    if ( pl.empty() )
        return { spec, p };

    std::vector<Formula> parts{ spec };
    if ( pl.init )
    {
        check( *pl.init, "initial-state" );
        parts.push_back( *pl.init );
    }
    if ( pl.goal )
    {
        check( *pl.goal, "goal" );
        parts.push_back( Formula::eventually( land( { Formula::weak_next( Formula::bottom() ), *pl.goal } ) ) );
    }
    if ( pl.act.empty() )
        return { land( std::move( parts ) ), p };

    Alphabet fluents = p.fluents();
    std::vector<std::pair<std::size_t, int>> markers; // action index, marker fluent
    for ( const auto& [ name, constraint ] : pl.act )
    {
        check( constraint, "action" );
        auto a = p.action_index( name );
        int m = fluents.add( marker_name( name ) );
        markers.emplace_back( a, m );
        parts.push_back( Formula::globally(
                Formula::implies( Formula::next( Formula::atom( fluents, m ) ), constraint ) ) );
    }
    auto actions = p.actions();
    for ( std::size_t b = 0; b < actions.size(); ++b )
        for ( const auto& [ a, m ] : markers )
            actions[ b ].eff.push_back( { m, a == b } );
    Assignment init( fluents.size() );
    for ( std::size_t f = 0; f < nf; ++f )
        init.set( f, p.init()[ f ] );
    return { land( std::move( parts ) ),
             PlanningProblem( std::move( fluents ), std::move( actions ), std::move( init ), p.goal() ) };
}

/// Drops marker fluents (and their effects) appended by inject_plausibility.
inline PlanningProblem strip_markers( const PlanningProblem& p, std::size_t base_fluents )
{
    if ( p.num_fluents() == base_fluents )
        return p;
    Alphabet fluents;
    for ( std::size_t f = 0; f < base_fluents; ++f )
        fluents.add( p.fluents().name( static_cast<int>( f ) ) );
    auto actions = p.actions();
    for ( auto& a : actions )
        std::erase_if( a.eff, [ & ]( const Effect& e ) { return static_cast<std::size_t>( e.fluent ) >= base_fluents; } );
    return { std::move( fluents ), std::move( actions ), p.init().prefix( base_fluents ), p.goal() };
}

/// Sound length bound (in states) for loop-free plans: one more than the
/// number of reachable states.
inline std::size_t default_bound( const PlanningProblem& p, const Limits& limits = {} )
{
    return reachable_states( p, limits ).size() + 1;
}

} // namespace cfs
