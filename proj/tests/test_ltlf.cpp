#include "properties.hpp"

#include <gtest/gtest.h>

using namespace cfs;

namespace
{

Trace trace_of( std::initializer_list<std::uint64_t> codes, std::size_t n )
{
    Trace t;
    for ( auto c : codes )
        t.push_back( Assignment::from_code( c, n ) );
    return t;
}

} // namespace

TEST( Evaluate, NextAndWeakNextAtTheEnd )
{
    auto a = test::atoms( 1 );
    auto t = trace_of( { 1 }, 1 );
    EXPECT_FALSE( evaluate( t, parse_ltlf( "X true", a ) ) );
    EXPECT_TRUE( evaluate( t, parse_ltlf( "WX false", a ) ) );
    auto t2 = trace_of( { 1, 0 }, 1 );
    EXPECT_TRUE( evaluate( t2, parse_ltlf( "X !p", a ) ) );
    EXPECT_FALSE( evaluate( t2, parse_ltlf( "WX p", a ) ) );
}

TEST( Evaluate, UntilEventuallyGlobally )
{
    auto a = test::atoms( 2 );
    // p=1 q=0 ; p=1 q=0 ; p=0 q=1
    auto t = trace_of( { 2, 2, 1 }, 2 );
    EXPECT_TRUE( evaluate( t, parse_ltlf( "p U q", a ) ) );
    EXPECT_TRUE( evaluate( t, parse_ltlf( "F (q & !p)", a ) ) );
    EXPECT_FALSE( evaluate( t, parse_ltlf( "G p", a ) ) );
    EXPECT_TRUE( evaluate( t, parse_ltlf( "G (p | q)", a ) ) );
    EXPECT_FALSE( evaluate( trace_of( { 2, 2 }, 2 ), parse_ltlf( "p U q", a ) ) );
    EXPECT_THROW( evaluate( Trace{}, Formula::top() ), ContractError );
}

TEST( Evaluate, DeliveryTraceVisitsCoffeeShop )
{
    auto p = test::delivery( true );
    auto v = validate_plan( p, test::delivery_plan() );
    ASSERT_TRUE( v.valid() );
    EXPECT_TRUE( evaluate( v.trace, parse_ltlf( "F at(truck,coffee-shop)", p.fluents() ) ) );
    EXPECT_FALSE( evaluate( v.trace, test::fixture_formula( "back_to_depot.ltlf", p ) ) );
}

TEST( Evaluate, ExpansionLaws )
{
    auto log = test::expansion_laws( 1000, 17 );
    EXPECT_TRUE( log.ok() ) << log.lines.front();
    EXPECT_GT( log.checked, 7000u );
}

TEST( Nnf, ComplementsExhaustively )
{
    auto log = test::nnf_complement( 300, 5 );
    EXPECT_TRUE( log.ok() ) << log.lines.front();
}

TEST( Nnf, NegationOnlyOnAtoms )
{
    auto a = test::atoms( 2 );
    detail::Rng rng( 9 );
    for ( int i = 0; i < 300; ++i )
    {
        auto f = nnf( random_ltlf( rng, a, 4 ) );
        std::function<bool( const Formula& )> ok = [ & ]( const Formula& g ) {
            if ( g.op() == Op::Implies )
                return false;
            if ( g.op() == Op::Not )
                return g.arg( 0 ).op() == Op::Atom;
            for ( const auto& h : g.args() )
                if ( !ok( h ) )
                    return false;
            return true;
        };
        ASSERT_TRUE( ok( f ) ) << to_string( f );
    }
}

TEST( SatBounded, SmallCases )
{
    auto a = test::atoms( 1 );
    EXPECT_FALSE( sat_bounded( { parse_ltlf( "X true", a ), 1, 1 } ).sat );
    auto r = sat_bounded( { parse_ltlf( "X X p", a ), 1, 3 } );
    ASSERT_TRUE( r.sat );
    EXPECT_EQ( r.model.size(), 3u );
    EXPECT_TRUE( r.model[ 2 ][ 0 ] );
    EXPECT_FALSE( sat_bounded( { parse_ltlf( "p & G (p -> X p)", a ), 1, 4 } ).sat );
    EXPECT_THROW( sat_bounded( { Formula::top(), 1, 0 } ), ContractError );
}

TEST( SatBounded, DistinctOverForcesDifferentStates )
{
    auto a = test::atoms( 1 );
    SatQuery q{ parse_ltlf( "X X true", a ), 1, 3 };
    EXPECT_TRUE( sat_bounded( q ).sat );
    q.distinct_over = std::vector<int>{ 0 };
    EXPECT_FALSE( sat_bounded( q ).sat );
    q.formula = parse_ltlf( "X true", a );
    auto r = sat_bounded( q );
    ASSERT_TRUE( r.sat );
    EXPECT_NE( r.model[ 0 ][ 0 ], r.model[ 1 ][ 0 ] );
}

TEST( SatBounded, ExhaustiveAgreementDepthTwo )
{
    auto a = test::atoms( 2 );
    test::Log log;
    for ( const auto& f : test::all_formulas( a, 2 ) )
        test::sat_agreement( f, 2, 3, log );
    EXPECT_TRUE( log.ok() ) << log.lines.front();
    EXPECT_EQ( log.checked, 3u * 31504u );
}

TEST( SatBounded, RandomAgreementDepthThree )
{
    auto a = test::atoms( 2 );
    detail::Rng rng( 21 );
    test::Log log;
    for ( int i = 0; i < 3000; ++i )
        test::sat_agreement( random_ltlf( rng, a, 3 ), 2, 3, log );
    EXPECT_TRUE( log.ok() ) << log.lines.front();
}

TEST( SatBounded, LiteralBudget )
{
    auto a = test::atoms( 2 );
    SatQuery q{ parse_ltlf( "G F (p U q)", a ), 2, 50 };
    q.literal_budget = 100;
    EXPECT_THROW( sat_bounded( q ), ResourceError );
}

TEST( MinWeight, SmallCases )
{
    auto a = test::atoms( 2 );
    SatQuery q{ parse_ltlf( "F p & F q", a ), 2, 3, std::vector<std::uint32_t>{ 1, 1 } };
    auto r = min_weight_model( q );
    ASSERT_TRUE( r.sat );
    EXPECT_EQ( r.weight, 2u );
    q.weights = std::vector<std::uint32_t>{ 0, 5 };
    r = min_weight_model( q );
    EXPECT_EQ( r.weight, 5u );
    r = min_weight_model( q, 3 );
    EXPECT_TRUE( r.above_limit );
    q.weights = std::vector<std::uint32_t>{ 1 };
    EXPECT_THROW( min_weight_model( q ), ContractError );
}

TEST( MinWeight, AgreesWithEnumeration )
{
    auto a = test::atoms( 2 );
    detail::Rng rng( 33 );
    test::Log log;
    for ( int i = 0; i < 1500; ++i )
    {
        auto f = random_ltlf( rng, a, 3 );
        std::vector<std::uint32_t> w{ static_cast<std::uint32_t>( rng.below( 3 ) ),
                                      static_cast<std::uint32_t>( rng.below( 3 ) ) };
        test::weight_agreement( f, 2, w, 1 + rng.below( 3 ), log );
    }
    EXPECT_TRUE( log.ok() ) << log.lines.front();
}

TEST( Export, DimacsMatchesSolverVerdict )
{
    auto a = test::atoms( 2 );
    detail::Rng rng( 41 );
    for ( int i = 0; i < 100; ++i )
    {
        SatQuery q{ random_ltlf( rng, a, 3 ), 2, 3 };
        auto cnf = export_cnf( q );
        EXPECT_EQ( sat::decide_cnf( cnf ).has_value(), sat_bounded( q ).sat );
    }
}
