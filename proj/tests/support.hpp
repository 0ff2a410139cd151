#pragma once

#include "cfs/cfsearch.hpp"
#include "cfs/generate.hpp"
#include "cfs/io.hpp"
#include "cfs/ltlf.hpp"
#include "cfs/oracle.hpp"

#include <string>
#include <vector>

namespace cfs::test
{

inline std::string fixture( const std::string& name ) { return std::string( CFS_FIXTURES ) + "/" + name; }

inline PlanningProblem delivery( bool repaired )
{
    return io::load_problem( fixture( repaired ? "delivery_repaired.json" : "delivery_original.json" ) );
}

inline Formula fixture_formula( const std::string& name, const PlanningProblem& p )
{
    return parse_ltlf( io::read_file( fixture( name ) ), p.fluents() );
}

inline Plausibility fixture_plausibility( const std::string& name, const PlanningProblem& p )
{
    return io::plausibility_from_json( io::parse_json( io::read_file( fixture( name ) ), name ), p );
}

inline Plan delivery_plan() { return io::plan_from_text( io::read_file( fixture( "delivery.plan" ) ) ); }

/// One fluent f, one action set_f (pre true, f := true), I = {}, goal f.
inline PlanningProblem set_f()
{
    return make_problem( { "f" }, { { "set_f", "true", { { "f", true } } } }, {}, "f" );
}

/// All traces over n propositions with 1..max_len states.
inline std::vector<Trace> all_traces( std::size_t n, std::size_t max_len )
{
    std::vector<Trace> out;
    const std::uint64_t states = std::uint64_t{ 1 } << n;
    for ( std::size_t len = 1; len <= max_len; ++len )
    {
        std::uint64_t total = 1;
        for ( std::size_t i = 0; i < len; ++i )
            total *= states;
        for ( std::uint64_t c = 0; c < total; ++c )
        {
            Trace t;
            auto x = c;
            for ( std::size_t i = 0; i < len; ++i )
            {
                t.push_back( Assignment::from_code( x % states, n ) );
                x /= states;
            }
            out.push_back( std::move( t ) );
        }
    }
    return out;
}

/// Every formula of operator depth <= `depth` over the alphabet.
inline std::vector<Formula> all_formulas( const Alphabet& a, std::size_t depth )
{
    std::vector<Formula> level{ Formula::top(), Formula::bottom() };
    for ( std::size_t i = 0; i < a.size(); ++i )
        level.push_back( Formula::atom( a, static_cast<int>( i ) ) );
    for ( std::size_t d = 0; d < depth; ++d )
    {
        std::vector<Formula> next = level;
        for ( const auto& f : level )
        {
            next.push_back( Formula::negation( f ) );
            next.push_back( Formula::next( f ) );
            next.push_back( Formula::weak_next( f ) );
            next.push_back( Formula::eventually( f ) );
            next.push_back( Formula::globally( f ) );
        }
        for ( const auto& f : level )
            for ( const auto& g : level )
            {
                next.push_back( Formula::conjunction( { f, g } ) );
                next.push_back( Formula::disjunction( { f, g } ) );
                next.push_back( Formula::implies( f, g ) );
                next.push_back( Formula::until( f, g ) );
            }
        level = std::move( next );
    }
    return level;
}

inline Alphabet atoms( std::size_t n )
{
    Alphabet a;
    for ( std::size_t i = 0; i < n; ++i )
        a.add( std::string( 1, static_cast<char>( 'p' + i ) ) );
    return a;
}

} // namespace cfs::test
