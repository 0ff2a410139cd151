#pragma once

#include "cfs/error.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cfs
{

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

/// Maps the argument form `at(truck,coffee-shop)` onto the flat identifier
/// `at_truck_coffee_shop`. Flat identifiers are returned unchanged apart from
/// the '-' to '_' rewrite.
inline std::string normalize_name( std::string_view raw )
{
    std::string out;
    out.reserve( raw.size() );
    for ( char c : raw )
    {
        switch ( c )
        {
        case ' ':
        case '\t':
        case ')':
            break;
        case '(':
        case ',':
        case '-':
            out.push_back( '_' );
            break;
        default:
            out.push_back( c );
        }
    }
    return out;
}

inline bool is_reserved_name( std::string_view name )
{
    return name.size() >= 2 && name[ 0 ] == '_' && name[ 1 ] == '_';
}

class Alphabet
{
    std::vector<std::string> _names;
    std::unordered_map<std::string, int> _index;

public:
    Alphabet() = default;

    explicit Alphabet( const std::vector<std::string>& names )
    {
        for ( const auto& n : names )
            add( n );
    }

    /// Appends a proposition; duplicates are a structural error.
    int add( const std::string& name )
    {
        auto [ it, inserted ] = _index.emplace( name, static_cast<int>( _names.size() ) );
        if ( !inserted )
            throw StructuralError( "duplicate proposition '" + name + "'" );
        _names.push_back( name );
        return it->second;
    }

    [[nodiscard]] std::optional<int> find( std::string_view name ) const
    {
        auto it = _index.find( std::string( name ) );
        if ( it == _index.end() )
            return std::nullopt;
        return it->second;
    }

    [[nodiscard]] const std::string& name( int index ) const { return _names.at( static_cast<std::size_t>( index ) ); }
    [[nodiscard]] std::size_t size() const { return _names.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const { return _names; }
};

// ---------------------------------------------------------------------------
// Assignments
// ---------------------------------------------------------------------------

/// Total truth assignment over an indexed set of propositions.
///
/// Ordering is lexicographic by proposition index with false < true, so the
/// proposition with index 0 is the most significant one.
class Assignment
{
    std::vector<std::uint64_t> _words;
    std::size_t _size = 0;

public:
    Assignment() = default;
    explicit Assignment( std::size_t size, bool value = false )
            : _words( ( size + 63 ) / 64, value ? ~std::uint64_t{ 0 } : 0 ), _size{ size }
    {
        trim();
    }

    /// Decodes an enumeration code; index 0 is the most significant bit.
    static Assignment from_code( std::uint64_t code, std::size_t size )
    {
        Assignment a( size );
        for ( std::size_t i = 0; i < size; ++i )
            a.set( i, ( ( code >> ( size - 1 - i ) ) & 1U ) != 0 );
        return a;
    }

    [[nodiscard]] std::uint64_t code() const
    {
        if ( _size > 64 )
            throw ContractError( "assignment too large for a 64-bit code" );
        std::uint64_t c = 0;
        for ( std::size_t i = 0; i < _size; ++i )
            c = ( c << 1U ) | ( get( i ) ? 1U : 0U );
        return c;
    }

    [[nodiscard]] bool get( std::size_t i ) const { return ( ( _words[ i / 64 ] >> ( i % 64 ) ) & 1U ) != 0; }
    [[nodiscard]] bool operator[]( std::size_t i ) const { return get( i ); }

    void set( std::size_t i, bool v )
    {
        auto mask = std::uint64_t{ 1 } << ( i % 64 );
        if ( v )
            _words[ i / 64 ] |= mask;
        else
            _words[ i / 64 ] &= ~mask;
    }

    void flip( std::size_t i ) { set( i, !get( i ) ); }

    [[nodiscard]] std::size_t size() const { return _size; }

    /// The first `n` propositions.
    [[nodiscard]] Assignment prefix( std::size_t n ) const
    {
        Assignment a( n );
        for ( std::size_t i = 0; i < n; ++i )
            a.set( i, get( i ) );
        return a;
    }

    /// Number of positions (within the first `n`) where the two differ.
    [[nodiscard]] std::size_t hamming( const Assignment& other, std::size_t n ) const
    {
        std::size_t d = 0;
        for ( std::size_t i = 0; i < n; ++i )
            d += get( i ) != other.get( i ) ? 1 : 0;
        return d;
    }

    [[nodiscard]] bool agrees_on( const Assignment& other, std::size_t n ) const
    {
        for ( std::size_t i = 0; i < n; ++i )
            if ( get( i ) != other.get( i ) )
                return false;
        return true;
    }

    friend bool operator==( const Assignment& a, const Assignment& b ) = default;

    friend bool operator<( const Assignment& a, const Assignment& b )
    {
        if ( a._size != b._size )
            return a._size < b._size;
        for ( std::size_t w = 0; w < a._words.size(); ++w )
        {
            auto diff = a._words[ w ] ^ b._words[ w ];
            if ( diff != 0 )
            {
                auto bit = std::countr_zero( diff );
                return ( ( b._words[ w ] >> bit ) & 1U ) != 0;
            }
        }
        return false;
    }

    [[nodiscard]] std::size_t hash() const
    {
        std::size_t h = _size * 0x9e3779b97f4a7c15ULL;
        for ( auto w : _words )
            h ^= w + 0x9e3779b97f4a7c15ULL + ( h << 6 ) + ( h >> 2 );
        return h;
    }

private:
    void trim()
    {
        if ( _size % 64 != 0 && !_words.empty() )
            _words.back() &= ( std::uint64_t{ 1 } << ( _size % 64 ) ) - 1;
    }
};

struct AssignmentHash
{
    std::size_t operator()( const Assignment& a ) const { return a.hash(); }
};

/// Non-empty finite sequence of assignments.
using Trace = std::vector<Assignment>;

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

enum class Op : std::uint8_t
{
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Next,     // strong tomorrow
    WeakNext, // weak tomorrow
    Until,
    Eventually,
    Globally,
};

/// Immutable formula DAG shared by the propositional and the temporal layer.
/// Atoms carry both their name and their index in the alphabet they were
/// resolved against. And/Or are n-ary.
class Formula
{
public:
    struct Node
    {
        Op op;
        int atom = -1;
        std::string name;
        std::vector<Formula> args;
    };

private:
    std::shared_ptr<const Node> _node;

    explicit Formula( std::shared_ptr<const Node> n ) : _node{ std::move( n ) } {}

    static Formula make( Op op, std::vector<Formula> args )
    {
        return Formula( std::make_shared<const Node>( Node{ op, -1, {}, std::move( args ) } ) );
    }

    static Formula make_nary( Op op, std::vector<Formula> args )
    {
        std::vector<Formula> flat;
        flat.reserve( args.size() );
        for ( auto& a : args )
        {
            if ( a.op() == op )
                flat.insert( flat.end(), a.args().begin(), a.args().end() );
            else
                flat.push_back( std::move( a ) );
        }
        if ( flat.empty() )
            return op == Op::And ? top() : bottom();
        if ( flat.size() == 1 )
            return flat.front();
        return make( op, std::move( flat ) );
    }

public:
    Formula() : Formula( top() ) {}

    static Formula top()
    {
        static const Formula t( std::make_shared<const Node>( Node{ Op::True, -1, {}, {} } ) );
        return t;
    }
    static Formula bottom()
    {
        static const Formula f( std::make_shared<const Node>( Node{ Op::False, -1, {}, {} } ) );
        return f;
    }
    static Formula constant( bool v ) { return v ? top() : bottom(); }

    static Formula atom( std::string name, int index )
    {
        return Formula( std::make_shared<const Node>( Node{ Op::Atom, index, std::move( name ), {} } ) );
    }
    static Formula atom( const Alphabet& alphabet, int index ) { return atom( alphabet.name( index ), index ); }

    static Formula negation( Formula f ) { return make( Op::Not, { std::move( f ) } ); }
    static Formula conjunction( std::vector<Formula> args ) { return make_nary( Op::And, std::move( args ) ); }
    static Formula disjunction( std::vector<Formula> args ) { return make_nary( Op::Or, std::move( args ) ); }
    static Formula implies( Formula a, Formula b ) { return make( Op::Implies, { std::move( a ), std::move( b ) } ); }
    static Formula next( Formula f ) { return make( Op::Next, { std::move( f ) } ); }
    static Formula weak_next( Formula f ) { return make( Op::WeakNext, { std::move( f ) } ); }
    static Formula until( Formula a, Formula b ) { return make( Op::Until, { std::move( a ), std::move( b ) } ); }
    static Formula eventually( Formula f ) { return make( Op::Eventually, { std::move( f ) } ); }
    static Formula globally( Formula f ) { return make( Op::Globally, { std::move( f ) } ); }

    [[nodiscard]] Op op() const { return _node->op; }
    [[nodiscard]] int atom_index() const { return _node->atom; }
    [[nodiscard]] const std::string& atom_name() const { return _node->name; }
    [[nodiscard]] std::span<const Formula> args() const { return _node->args; }
    [[nodiscard]] const Formula& arg( std::size_t i ) const { return _node->args.at( i ); }
    [[nodiscard]] const Node* id() const { return _node.get(); }

    [[nodiscard]] bool is_temporal_op() const
    {
        switch ( op() )
        {
        case Op::Next:
        case Op::WeakNext:
        case Op::Until:
        case Op::Eventually:
        case Op::Globally:
            return true;
        default:
            return false;
        }
    }
};

// Builders that fold constants. Used by the encoders; the parser keeps the
// user's structure.
inline Formula lnot( const Formula& f )
{
    if ( f.op() == Op::True )
        return Formula::bottom();
    if ( f.op() == Op::False )
        return Formula::top();
    if ( f.op() == Op::Not )
        return f.arg( 0 );
    return Formula::negation( f );
}

inline Formula land( std::vector<Formula> args )
{
    std::vector<Formula> kept;
    for ( auto& a : args )
    {
        if ( a.op() == Op::False )
            return Formula::bottom();
        if ( a.op() != Op::True )
            kept.push_back( std::move( a ) );
    }
    return Formula::conjunction( std::move( kept ) );
}

inline Formula lor( std::vector<Formula> args )
{
    std::vector<Formula> kept;
    for ( auto& a : args )
    {
        if ( a.op() == Op::True )
            return Formula::top();
        if ( a.op() != Op::False )
            kept.push_back( std::move( a ) );
    }
    return Formula::disjunction( std::move( kept ) );
}

inline Formula literal( const Alphabet& alphabet, int index, bool positive )
{
    auto a = Formula::atom( alphabet, index );
    return positive ? a : Formula::negation( a );
}

/// Conjunction of literals pinning the first `n` propositions to `s`.
inline Formula minterm( const Alphabet& alphabet, const Assignment& s, std::size_t n )
{
    std::vector<Formula> lits;
    lits.reserve( n );
    for ( std::size_t i = 0; i < n; ++i )
        lits.push_back( literal( alphabet, static_cast<int>( i ), s[ i ] ) );
    return land( std::move( lits ) );
}

inline bool structurally_equal( const Formula& a, const Formula& b )
{
    if ( a.id() == b.id() )
        return true;
    if ( a.op() != b.op() || a.args().size() != b.args().size() )
        return false;
    if ( a.op() == Op::Atom )
        return a.atom_name() == b.atom_name() && a.atom_index() == b.atom_index();
    for ( std::size_t i = 0; i < a.args().size(); ++i )
        if ( !structurally_equal( a.arg( i ), b.arg( i ) ) )
            return false;
    return true;
}

inline bool is_propositional( const Formula& f )
{
    if ( f.is_temporal_op() )
        return false;
    return std::all_of( f.args().begin(), f.args().end(), []( const Formula& g ) { return is_propositional( g ); } );
}

/// Largest atom index, or -1 for atom-free formulas.
inline int max_atom( const Formula& f )
{
    int m = f.op() == Op::Atom ? f.atom_index() : -1;
    for ( const auto& g : f.args() )
        m = std::max( m, max_atom( g ) );
    return m;
}

inline std::size_t temporal_depth( const Formula& f )
{
    std::size_t d = 0;
    for ( const auto& g : f.args() )
        d = std::max( d, temporal_depth( g ) );
    return d + ( f.is_temporal_op() ? 1 : 0 );
}

/// Nesting depth of operators; atoms and constants have depth 0.
inline std::size_t depth( const Formula& f )
{
    std::size_t d = 0;
    for ( const auto& g : f.args() )
        d = std::max( d, depth( g ) + 1 );
    return d;
}

/// Re-resolves atom indices by name against another alphabet.
inline Formula rebind( const Formula& f, const Alphabet& alphabet )
{
    if ( f.op() == Op::Atom )
    {
        auto idx = alphabet.find( f.atom_name() );
        if ( !idx )
            throw StructuralError( "unknown proposition '" + f.atom_name() + "'" );
        return Formula::atom( f.atom_name(), *idx );
    }
    if ( f.args().empty() )
        return f;
    std::vector<Formula> args;
    for ( const auto& g : f.args() )
        args.push_back( rebind( g, alphabet ) );
    switch ( f.op() )
    {
    case Op::Not: return Formula::negation( args[ 0 ] );
    case Op::And: return Formula::conjunction( std::move( args ) );
    case Op::Or: return Formula::disjunction( std::move( args ) );
    case Op::Implies: return Formula::implies( args[ 0 ], args[ 1 ] );
    case Op::Next: return Formula::next( args[ 0 ] );
    case Op::WeakNext: return Formula::weak_next( args[ 0 ] );
    case Op::Until: return Formula::until( args[ 0 ], args[ 1 ] );
    case Op::Eventually: return Formula::eventually( args[ 0 ] );
    case Op::Globally: return Formula::globally( args[ 0 ] );
    default: return f;
    }
}

/// Propositional truth value under a total assignment.
inline bool eval_formula( const Formula& f, const Assignment& s )
{
    switch ( f.op() )
    {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom:
        if ( f.atom_index() < 0 || static_cast<std::size_t>( f.atom_index() ) >= s.size() )
            throw StructuralError( "atom '" + f.atom_name() + "' is not covered by the assignment" );
        return s[ static_cast<std::size_t>( f.atom_index() ) ];
    case Op::Not: return !eval_formula( f.arg( 0 ), s );
    case Op::And:
        return std::all_of( f.args().begin(), f.args().end(), [ & ]( const Formula& g ) { return eval_formula( g, s ); } );
    case Op::Or:
        return std::any_of( f.args().begin(), f.args().end(), [ & ]( const Formula& g ) { return eval_formula( g, s ); } );
    case Op::Implies: return !eval_formula( f.arg( 0 ), s ) || eval_formula( f.arg( 1 ), s );
    default: throw StructuralError( "temporal operator in a propositional formula" );
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace detail
{

// Binding strength, tightest first in the grammar: unary > U > & > | > ->.
inline int precedence( Op op )
{
    switch ( op )
    {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Until: return 4;
    case Op::Not:
    case Op::Next:
    case Op::WeakNext:
    case Op::Eventually:
    case Op::Globally: return 5;
    default: return 6;
    }
}

inline void print( const Formula& f, std::string& out );

inline void print_child( const Formula& child, int min_prec, std::string& out )
{
    bool parens = precedence( child.op() ) < min_prec;
    if ( parens )
        out.push_back( '(' );
    print( child, out );
    if ( parens )
        out.push_back( ')' );
}

inline void print( const Formula& f, std::string& out )
{
    auto p = precedence( f.op() );
    switch ( f.op() )
    {
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Atom: out += f.atom_name(); break;
    case Op::Not:
        out += "!";
        print_child( f.arg( 0 ), p, out );
        break;
    case Op::Next:
    case Op::WeakNext:
    case Op::Eventually:
    case Op::Globally:
        out += f.op() == Op::Next ? "X " : f.op() == Op::WeakNext ? "WX " : f.op() == Op::Eventually ? "F " : "G ";
        print_child( f.arg( 0 ), p, out );
        break;
    case Op::And:
    case Op::Or:
        for ( std::size_t i = 0; i < f.args().size(); ++i )
        {
            if ( i > 0 )
                out += f.op() == Op::And ? " & " : " | ";
            // n-ary chains reparse left-nested; a nested same-op child would
            // be flattened away, so it never occurs here.
            print_child( f.arg( i ), p + 1, out );
        }
        break;
    case Op::Until:
    case Op::Implies:
        // right-associative
        print_child( f.arg( 0 ), p + 1, out );
        out += f.op() == Op::Until ? " U " : " -> ";
        print_child( f.arg( 1 ), p, out );
        break;
    }
}

} // namespace detail

inline std::string to_string( const Formula& f )
{
    std::string out;
    detail::print( f, out );
    return out;
}

} // namespace cfs
