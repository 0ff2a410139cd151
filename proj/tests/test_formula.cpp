#include "support.hpp"

#include <gtest/gtest.h>

using namespace cfs;

TEST( Names, NormalizeGroundAtoms )
{
    EXPECT_EQ( normalize_name( "at(truck,coffee-shop)" ), "at_truck_coffee_shop" );
    EXPECT_EQ( normalize_name( "at(truck, depot)" ), "at_truck_depot" );
    EXPECT_EQ( normalize_name( "f" ), "f" );
    EXPECT_TRUE( is_reserved_name( "__do_x" ) );
    EXPECT_FALSE( is_reserved_name( "_x" ) );
}

TEST( Alphabet, RejectsDuplicates )
{
    Alphabet a;
    EXPECT_EQ( a.add( "p" ), 0 );
    EXPECT_EQ( a.add( "q" ), 1 );
    EXPECT_THROW( a.add( "p" ), StructuralError );
    EXPECT_EQ( a.find( "q" ), 1 );
    EXPECT_FALSE( a.find( "r" ) );
}

TEST( Assignment, CodeIndexZeroIsMostSignificant )
{
    auto a = Assignment::from_code( 0b100, 3 );
    EXPECT_TRUE( a[ 0 ] );
    EXPECT_FALSE( a[ 1 ] );
    EXPECT_FALSE( a[ 2 ] );
    for ( std::uint64_t c = 0; c < 32; ++c )
        EXPECT_EQ( Assignment::from_code( c, 5 ).code(), c );
}

TEST( Assignment, OrderMatchesCodeOrder )
{
    for ( std::uint64_t x = 0; x < 32; ++x )
        for ( std::uint64_t y = 0; y < 32; ++y )
        {
            auto a = Assignment::from_code( x, 5 );
            auto b = Assignment::from_code( y, 5 );
            ASSERT_EQ( a < b, x < y ) << x << " " << y;
            ASSERT_EQ( a == b, x == y );
        }
}

TEST( Assignment, WideAssignments )
{
    Assignment a( 130 );
    a.set( 129, true );
    a.set( 0, true );
    EXPECT_TRUE( a[ 129 ] );
    EXPECT_EQ( a.hamming( Assignment( 130 ), 130 ), 2u );
    EXPECT_THROW( (void)a.code(), ContractError );
    auto b = a;
    b.flip( 64 );
    EXPECT_FALSE( a == b );
    EXPECT_TRUE( a.agrees_on( b, 64 ) );
}

TEST( Parser, PrecedenceAndGrouping )
{
    auto a = test::atoms( 3 );
    auto f = parse_ltlf( "p | q & r", a );
    ASSERT_EQ( f.op(), Op::Or );
    EXPECT_EQ( f.arg( 1 ).op(), Op::And );
    auto g = parse_ltlf( "!p U q", a );
    ASSERT_EQ( g.op(), Op::Until );
    EXPECT_EQ( g.arg( 0 ).op(), Op::Not );
    auto h = parse_ltlf( "G (p -> X q)", a );
    ASSERT_EQ( h.op(), Op::Globally );
    EXPECT_EQ( h.arg( 0 ).op(), Op::Implies );
    EXPECT_EQ( h.arg( 0 ).arg( 1 ).op(), Op::Next );
}

TEST( Parser, GroundAtomsResolve )
{
    auto p = test::delivery( true );
    auto f = p.parse( "at(truck,coffee-shop) & !link(coffee-shop,butchery)" );
    ASSERT_EQ( f.op(), Op::And );
    EXPECT_EQ( f.arg( 0 ).atom_name(), "at_truck_coffee_shop" );
    EXPECT_EQ( f.arg( 0 ).atom_index(), *p.fluents().find( "at_truck_coffee_shop" ) );
}

TEST( Parser, CoffeeFirstFormulaRoundTrips )
{
    auto p = test::delivery( true );
    auto f = test::fixture_formula( "coffee_then_butchery.ltlf", p );
    ASSERT_EQ( f.op(), Op::And );
    EXPECT_EQ( f.arg( 0 ).op(), Op::Globally );
    EXPECT_EQ( f.arg( 1 ).op(), Op::Until );
    auto again = parse_ltlf( to_string( f ), p.fluents() );
    EXPECT_TRUE( structurally_equal( f, again ) );
    EXPECT_EQ( to_string( again ), to_string( f ) );
}

TEST( Parser, RandomRoundTrip )
{
    auto a = test::atoms( 3 );
    detail::Rng rng( 7 );
    for ( int i = 0; i < 1000; ++i )
    {
        auto f = random_ltlf( rng, a, 4 );
        auto text = to_string( f );
        auto g = parse_ltlf( text, a );
        ASSERT_EQ( to_string( g ), text );
        ASSERT_TRUE( structurally_equal( nnf( f ), nnf( g ) ) ) << text;
    }
}

TEST( Parser, Errors )
{
    auto a = test::atoms( 2 );
    EXPECT_THROW( parse_ltlf( "p & ", a ), ParseError );
    EXPECT_THROW( parse_ltlf( "(p", a ), ParseError );
    EXPECT_THROW( parse_ltlf( "zz", a ), ParseError );
    EXPECT_THROW( parse_ltlf( "p $ q", a ), ParseError );
    EXPECT_THROW( parse_bool( "X p", a ), ParseError );
    EXPECT_THROW( parse_ltlf( "__do_p", a ), ParseError );
    try
    {
        parse_ltlf( "p & ) ", a );
        FAIL();
    }
    catch ( const ParseError& e )
    {
        EXPECT_EQ( e.position, 4u );
    }
}

TEST( Formula, ConstantFoldingBuilders )
{
    auto a = test::atoms( 2 );
    auto p = Formula::atom( a, 0 );
    EXPECT_EQ( land( { p, Formula::bottom() } ).op(), Op::False );
    EXPECT_EQ( lor( { p, Formula::top() } ).op(), Op::True );
    EXPECT_EQ( land( {} ).op(), Op::True );
    EXPECT_EQ( lnot( lnot( p ) ).op(), Op::Atom );
    EXPECT_EQ( depth( parse_ltlf( "G (p -> X q)", a ) ), 3u );
    EXPECT_EQ( temporal_depth( parse_ltlf( "G (p -> X q)", a ) ), 2u );
}

TEST( Formula, MintermHasExactlyOneModel )
{
    auto a = test::atoms( 4 );
    for ( std::uint64_t c = 0; c < 16; ++c )
    {
        auto s = Assignment::from_code( c, 4 );
        auto m = minterm( a, s, 4 );
        EXPECT_EQ( count_models( m, 4 ), 1u );
        EXPECT_TRUE( eval_formula( m, s ) );
    }
}

TEST( Formula, RebindByName )
{
    auto a = test::atoms( 2 );
    Alphabet b;
    b.add( "x" );
    b.add( "q" );
    b.add( "p" );
    auto f = rebind( parse_ltlf( "p & !q", a ), b );
    EXPECT_EQ( f.arg( 0 ).atom_index(), 2 );
    EXPECT_EQ( f.arg( 1 ).arg( 0 ).atom_index(), 1 );
}
