#pragma once

#include "cfs/cfsearch.hpp"
#include "cfs/encode.hpp"
#include "cfs/error.hpp"
#include "cfs/formula.hpp"
#include "cfs/model.hpp"
#include "cfs/parser.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cfs::io
{

using Json = nlohmann::ordered_json;

inline std::string read_file( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw Error( "cannot read '" + path + "'" );
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file( const std::string& path, const std::string& text )
{
    std::ofstream out( path, std::ios::binary );
    if ( !out )
        throw Error( "cannot write '" + path + "'" );
    out << text;
}

inline Json parse_json( const std::string& text, const std::string& what )
{
    try
    {
        return Json::parse( text );
    }
    catch ( const nlohmann::json::parse_error& e )
    {
        throw ParseError( what + ": " + e.what(), e.byte );
    }
}

namespace detail
{

inline const Json& field( const Json& j, const char* key )
{
    if ( !j.is_object() || !j.contains( key ) )
        throw StructuralError( std::string( "missing field '" ) + key + "'" );
    return j.at( key );
}

inline std::string string_of( const Json& j, const std::string& what )
{
    if ( !j.is_string() )
        throw StructuralError( what + " must be a string" );
    return j.get<std::string>();
}

// formula errors name the field they came from
template <typename Fn>
auto in_field( const std::string& where, Fn&& fn )
{
    try
    {
        return fn();
    }
    catch ( const ParseError& e )
    {
        throw ParseError( where + ": " + e.reason, e.position );
    }
}

} // namespace detail

/// Problem document: fluents, actions {name, pre, eff [{fluent, value}]},
/// init (names of true fluents), goal.
inline PlanningProblem problem_from_json( const Json& j )
{
    using namespace detail;
    std::vector<std::string> fluents;
    for ( const auto& f : field( j, "fluents" ) )
        fluents.push_back( string_of( f, "fluent name" ) );
    std::vector<ActionSpec> actions;
    for ( const auto& a : field( j, "actions" ) )
    {
        ActionSpec spec;
        spec.name = string_of( field( a, "name" ), "action name" );
        spec.pre = a.contains( "pre" ) ? string_of( a.at( "pre" ), "precondition" ) : "true";
        if ( a.contains( "eff" ) )
            for ( const auto& e : a.at( "eff" ) )
            {
                auto v = field( e, "value" );
                if ( !v.is_boolean() )
                    throw StructuralError( "effect value must be a boolean" );
                spec.eff.emplace_back( string_of( field( e, "fluent" ), "effect fluent" ), v.get<bool>() );
            }
        actions.push_back( std::move( spec ) );
    }
    std::vector<std::string> init;
    for ( const auto& f : field( j, "init" ) )
        init.push_back( string_of( f, "init fluent" ) );
    auto goal = string_of( field( j, "goal" ), "goal" );
    return in_field( "problem", [ & ] { return make_problem( fluents, actions, init, goal ); } );
}

inline PlanningProblem load_problem( const std::string& path )
{
    return problem_from_json( parse_json( read_file( path ), path ) );
}

inline Json problem_to_json( const PlanningProblem& p )
{
    Json j;
    j[ "fluents" ] = p.fluents().names();
    Json acts = Json::array();
    for ( const auto& a : p.actions() )
    {
        Json eff = Json::array();
        for ( const auto& e : a.eff )
            eff.push_back( { { "fluent", p.fluents().name( e.fluent ) }, { "value", e.value } } );
        acts.push_back( { { "name", a.name }, { "pre", to_string( a.pre ) }, { "eff", eff } } );
    }
    j[ "actions" ] = acts;
    Json init = Json::array();
    for ( std::size_t f = 0; f < p.num_fluents(); ++f )
        if ( p.init()[ f ] )
            init.push_back( p.fluents().name( static_cast<int>( f ) ) );
    j[ "init" ] = init;
    j[ "goal" ] = to_string( p.goal() );
    return j;
}

/// Plans are either a JSON array of action names or one action per line
/// (blank lines and `#` comments ignored). Names are normalized.
inline Plan plan_from_text( const std::string& text )
{
    Plan plan;
    auto first = text.find_first_not_of( " \t\r\n" );
    if ( first != std::string::npos && text[ first ] == '[' )
    {
        for ( const auto& a : parse_json( text, "plan" ) )
            plan.actions.push_back( normalize_name( detail::string_of( a, "plan step" ) ) );
        return plan;
    }
    std::istringstream in( text );
    std::string line;
    while ( std::getline( in, line ) )
    {
        if ( auto hash = line.find( '#' ); hash != std::string::npos )
            line.erase( hash );
        auto b = line.find_first_not_of( " \t\r" );
        if ( b == std::string::npos )
            continue;
        auto e = line.find_last_not_of( " \t\r" );
        plan.actions.push_back( normalize_name( line.substr( b, e - b + 1 ) ) );
    }
    return plan;
}

inline void check_plan_names( const PlanningProblem& p, const Plan& plan )
{
    for ( std::size_t i = 0; i < plan.size(); ++i )
        if ( !p.find_action( plan.actions[ i ] ) )
            throw StructuralError( "plan step " + std::to_string( i ) + ": unknown action '" + plan.actions[ i ] + "'" );
}

/// Traces are a JSON array of states, each the array of its true fluents.
inline Trace trace_from_json( const Json& j, const Alphabet& fluents )
{
    if ( !j.is_array() || j.empty() )
        throw StructuralError( "a trace is a non-empty array of states" );
    Trace t;
    for ( const auto& state : j )
    {
        Assignment s( fluents.size() );
        for ( const auto& f : state )
        {
            auto name = normalize_name( detail::string_of( f, "trace fluent" ) );
            auto idx = fluents.find( name );
            if ( !idx )
                throw StructuralError( "trace mentions unknown fluent '" + name + "'" );
            s.set( static_cast<std::size_t>( *idx ), true );
        }
        t.push_back( std::move( s ) );
    }
    return t;
}

inline Json trace_to_json( const Trace& t, const Alphabet& fluents )
{
    Json out = Json::array();
    for ( const auto& s : t )
    {
        Json state = Json::array();
        for ( std::size_t f = 0; f < s.size(); ++f )
            if ( s[ f ] )
                state.push_back( fluents.name( static_cast<int>( f ) ) );
        out.push_back( state );
    }
    return out;
}

/// {"init": formula, "goal": formula, "act": {action: formula}}; all optional.
inline Plausibility plausibility_from_json( const Json& j, const PlanningProblem& p )
{
    Plausibility pl;
    if ( !j.is_object() )
        throw StructuralError( "plausibility document must be an object" );
    auto formula = [ & ]( const Json& v, const std::string& where ) {
        auto text = detail::string_of( v, where );
        return detail::in_field( where, [ & ] { return p.parse( text ); } );
    };
    if ( j.contains( "init" ) )
        pl.init = formula( j.at( "init" ), "plausibility init" );
    if ( j.contains( "goal" ) )
        pl.goal = formula( j.at( "goal" ), "plausibility goal" );
    if ( j.contains( "act" ) )
        for ( const auto& [ name, v ] : j.at( "act" ).items() )
        {
            auto action = normalize_name( name );
            if ( !p.find_action( action ) )
                throw StructuralError( "plausibility constraint for unknown action '" + action + "'" );
            pl.act.emplace_back( action, formula( v, "plausibility act " + action ) );
        }
    return pl;
}

inline Json edit_to_json( const Edit& e, const Alphabet& fluents )
{
    Json j;
    j[ "kind" ] = to_string( e.kind );
    switch ( e.kind )
    {
    case ChangeKind::Init:
        j[ "fluent" ] = fluents.name( e.fluent );
        j[ "value" ] = e.add;
        break;
    case ChangeKind::Act:
        j[ "action" ] = e.action;
        [[fallthrough]];
    case ChangeKind::Goal:
    {
        j[ "op" ] = e.add ? "add" : "remove";
        Json state = Json::array();
        for ( std::size_t f = 0; f < e.state.size(); ++f )
            if ( e.state[ f ] )
                state.push_back( fluents.name( static_cast<int>( f ) ) );
        j[ "state" ] = state;
        break;
    }
    }
    j[ "text" ] = describe( e, fluents );
    return j;
}

} // namespace cfs::io
