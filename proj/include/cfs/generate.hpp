#pragma once

#include "cfs/error.hpp"
#include "cfs/formula.hpp"
#include "cfs/model.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cfs
{

struct GenOptions
{
    std::size_t fluents = 3;
    std::size_t actions = 2;
    std::uint64_t seed = 1;
    std::size_t spec_depth = 3;
};

struct Instance
{
    PlanningProblem problem;
    Formula spec;
};

namespace detail
{

// Bounded draws written out so streams are identical on every standard library.
class Rng
{
    std::mt19937_64 _gen;

public:
    explicit Rng( std::uint64_t seed ) : _gen{ seed } {}

    std::uint64_t below( std::uint64_t n )
    {
        const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
        std::uint64_t x;
        do
            x = _gen();
        while ( x >= limit );
        return x % n;
    }

    bool chance( std::uint64_t num, std::uint64_t den ) { return below( den ) < num; }
};

inline Formula random_state_formula( Rng& rng, const Alphabet& a, std::size_t depth )
{
    if ( depth == 0 || rng.chance( 1, 3 ) )
    {
        auto f = Formula::atom( a, static_cast<int>( rng.below( a.size() ) ) );
        return rng.chance( 1, 2 ) ? Formula::negation( f ) : f;
    }
    switch ( rng.below( 4 ) )
    {
    case 0: return Formula::negation( random_state_formula( rng, a, depth - 1 ) );
    case 1:
        return Formula::conjunction(
                { random_state_formula( rng, a, depth - 1 ), random_state_formula( rng, a, depth - 1 ) } );
    case 2:
        return Formula::disjunction(
                { random_state_formula( rng, a, depth - 1 ), random_state_formula( rng, a, depth - 1 ) } );
    default:
        return Formula::implies( random_state_formula( rng, a, depth - 1 ), random_state_formula( rng, a, depth - 1 ) );
    }
}

} // namespace detail

/// Random LTLf formula of operator depth at most `depth`.
inline Formula random_ltlf( detail::Rng& rng, const Alphabet& a, std::size_t depth )
{
    if ( depth == 0 || rng.chance( 1, 4 ) )
    {
        switch ( rng.below( 8 ) )
        {
        case 0: return Formula::top();
        case 1: return Formula::bottom();
        default: return Formula::atom( a, static_cast<int>( rng.below( a.size() ) ) );
        }
    }
    auto sub = [ & ] { return random_ltlf( rng, a, depth - 1 ); };
    switch ( rng.below( 10 ) )
    {
    case 0: return Formula::negation( sub() );
    case 1: return Formula::conjunction( { sub(), sub() } );
    case 2: return Formula::disjunction( { sub(), sub() } );
    case 3: return Formula::implies( sub(), sub() );
    case 4: return Formula::next( sub() );
    case 5: return Formula::weak_next( sub() );
    case 6: return Formula::until( sub(), sub() );
    case 7: return Formula::eventually( sub() );
    case 8: return Formula::globally( sub() );
    default: return Formula::negation( sub() );
    }
}

inline Instance generate_instance( const GenOptions& opt )
{
    if ( opt.fluents == 0 )
        throw ContractError( "at least one fluent is needed" );
    detail::Rng rng( opt.seed );
    Alphabet fluents;
    for ( std::size_t f = 0; f < opt.fluents; ++f )
        fluents.add( "f" + std::to_string( f ) );

    std::vector<ActionDef> actions;
    for ( std::size_t a = 0; a < opt.actions; ++a )
    {
        ActionDef d;
        d.name = "a" + std::to_string( a );
        d.pre = rng.chance( 1, 4 ) ? Formula::top() : detail::random_state_formula( rng, fluents, 2 );
        for ( std::size_t f = 0; f < opt.fluents; ++f )
            if ( rng.chance( 1, 3 ) )
                d.eff.push_back( { static_cast<int>( f ), rng.chance( 1, 2 ) } );
        if ( d.eff.empty() )
            d.eff.push_back( { static_cast<int>( rng.below( opt.fluents ) ), rng.chance( 1, 2 ) } );
        actions.push_back( std::move( d ) );
    }
    Assignment init( opt.fluents );
    for ( std::size_t f = 0; f < opt.fluents; ++f )
        init.set( f, rng.chance( 1, 2 ) );
    auto goal = detail::random_state_formula( rng, fluents, 2 );
    auto spec = random_ltlf( rng, fluents, opt.spec_depth );
    return { PlanningProblem( fluents, std::move( actions ), std::move( init ), goal ), spec };
}

} // namespace cfs
