#pragma once

#include "cfs/error.hpp"
#include "cfs/formula.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace cfs
{

struct ParseOptions
{
    bool allow_temporal = true;
    /// Accept `__`-prefixed identifiers (marker fluents, relaxed actions).
    bool allow_reserved = false;
};

namespace detail
{

enum class Tok
{
    Ident,
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    WeakNext,
    Until,
    Eventually,
    Globally,
    LParen,
    RParen,
    End,
};

struct Token
{
    Tok kind;
    std::string text;
    std::size_t pos;
};

inline bool ident_start( char c ) { return ( c >= 'a' && c <= 'z' ) || c == '_'; }
inline bool ident_char( char c ) { return ( c >= 'a' && c <= 'z' ) || ( c >= '0' && c <= '9' ) || c == '_'; }

class Lexer
{
    std::string_view _text;
    std::size_t _pos = 0;

    void skip_space()
    {
        while ( _pos < _text.size() && std::isspace( static_cast<unsigned char>( _text[ _pos ] ) ) )
            ++_pos;
    }

    // identifier chars plus '-' when it joins two identifier characters, so
    // `coffee-shop` is one word while `a->b` is an implication
    std::string word()
    {
        std::string w;
        while ( _pos < _text.size() )
        {
            char c = _text[ _pos ];
            if ( ident_char( c ) )
                w.push_back( c );
            else if ( c == '-' && !w.empty() && _pos + 1 < _text.size() && ident_char( _text[ _pos + 1 ] ) )
                w.push_back( c );
            else
                break;
            ++_pos;
        }
        return w;
    }

public:
    explicit Lexer( std::string_view text ) : _text{ text } {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for ( ;; )
        {
            skip_space();
            auto start = _pos;
            if ( _pos >= _text.size() )
            {
                out.push_back( { Tok::End, "", start } );
                return out;
            }
            char c = _text[ _pos ];
            if ( c == '(' )
            {
                ++_pos;
                out.push_back( { Tok::LParen, "(", start } );
            }
            else if ( c == ')' )
            {
                ++_pos;
                out.push_back( { Tok::RParen, ")", start } );
            }
            else if ( c == '!' )
            {
                ++_pos;
                out.push_back( { Tok::Not, "!", start } );
            }
            else if ( c == '&' )
            {
                ++_pos;
                out.push_back( { Tok::And, "&", start } );
            }
            else if ( c == '|' )
            {
                ++_pos;
                out.push_back( { Tok::Or, "|", start } );
            }
            else if ( c == '-' && _pos + 1 < _text.size() && _text[ _pos + 1 ] == '>' )
            {
                _pos += 2;
                out.push_back( { Tok::Implies, "->", start } );
            }
            else if ( std::isupper( static_cast<unsigned char>( c ) ) )
            {
                std::string w;
                while ( _pos < _text.size() && std::isalnum( static_cast<unsigned char>( _text[ _pos ] ) ) )
                    w.push_back( _text[ _pos++ ] );
                Tok k;
                if ( w == "X" )
                    k = Tok::Next;
                else if ( w == "WX" )
                    k = Tok::WeakNext;
                else if ( w == "U" )
                    k = Tok::Until;
                else if ( w == "F" )
                    k = Tok::Eventually;
                else if ( w == "G" )
                    k = Tok::Globally;
                else
                    throw ParseError( "unknown keyword '" + w + "'", start );
                out.push_back( { k, w, start } );
            }
            else if ( ident_start( c ) )
            {
                auto w = word();
                if ( w == "true" )
                {
                    out.push_back( { Tok::True, w, start } );
                    continue;
                }
                if ( w == "false" )
                {
                    out.push_back( { Tok::False, w, start } );
                    continue;
                }
                // optional argument list: name(arg, arg)
                auto save = _pos;
                skip_space();
                if ( _pos < _text.size() && _text[ _pos ] == '(' )
                {
                    auto probe = _pos + 1;
                    while ( probe < _text.size() && std::isspace( static_cast<unsigned char>( _text[ probe ] ) ) )
                        ++probe;
                    if ( probe < _text.size() && ident_start( _text[ probe ] ) && looks_like_args( probe ) )
                    {
                        ++_pos;
                        for ( ;; )
                        {
                            skip_space();
                            if ( _pos >= _text.size() || !ident_start( _text[ _pos ] ) )
                                throw ParseError( "expected argument", _pos );
                            w += "_" + word();
                            skip_space();
                            if ( _pos < _text.size() && _text[ _pos ] == ',' )
                            {
                                ++_pos;
                                continue;
                            }
                            if ( _pos < _text.size() && _text[ _pos ] == ')' )
                            {
                                ++_pos;
                                break;
                            }
                            throw ParseError( "expected ',' or ')' in argument list", _pos );
                        }
                    }
                    else
                        _pos = save;
                }
                else
                    _pos = save;
                out.push_back( { Tok::Ident, normalize_name( w ), start } );
            }
            else
                throw ParseError( std::string( "unexpected character '" ) + c + "'", start );
        }
    }

private:
    // An argument list is a run of identifiers separated by commas closed by
    // ')'. Anything else after an identifier is a parenthesized subformula
    // juxtaposed to it, which the grammar rejects later.
    [[nodiscard]] bool looks_like_args( std::size_t p ) const
    {
        bool expect_ident = true;
        while ( p < _text.size() )
        {
            char c = _text[ p ];
            if ( std::isspace( static_cast<unsigned char>( c ) ) )
            {
                ++p;
                continue;
            }
            if ( expect_ident )
            {
                if ( !ident_start( c ) )
                    return false;
                while ( p < _text.size() && ( ident_char( _text[ p ] ) || _text[ p ] == '-' ) )
                {
                    if ( _text[ p ] == '-' && p + 1 < _text.size() && _text[ p + 1 ] == '>' )
                        return false;
                    ++p;
                }
                expect_ident = false;
            }
            else if ( c == ',' )
            {
                expect_ident = true;
                ++p;
            }
            else
                return c == ')';
        }
        return false;
    }
};

class Parser
{
    std::vector<Token> _toks;
    std::size_t _i = 0;
    const Alphabet& _alphabet;
    ParseOptions _opts;

    const Token& peek() const { return _toks[ _i ]; }
    Token take() { return _toks[ _i++ ]; }

    void expect( Tok k, const char* what )
    {
        if ( peek().kind != k )
            throw ParseError( std::string( "expected " ) + what, peek().pos );
        ++_i;
    }

    Formula implication()
    {
        auto lhs = disjunction();
        if ( peek().kind == Tok::Implies )
        {
            take();
            return Formula::implies( lhs, implication() );
        }
        return lhs;
    }

    Formula disjunction()
    {
        std::vector<Formula> parts{ conjunction() };
        while ( peek().kind == Tok::Or )
        {
            take();
            parts.push_back( conjunction() );
        }
        return parts.size() == 1 ? parts.front() : Formula::disjunction( std::move( parts ) );
    }

    Formula conjunction()
    {
        std::vector<Formula> parts{ until() };
        while ( peek().kind == Tok::And )
        {
            take();
            parts.push_back( until() );
        }
        return parts.size() == 1 ? parts.front() : Formula::conjunction( std::move( parts ) );
    }

    Formula until()
    {
        auto lhs = unary();
        if ( peek().kind == Tok::Until )
        {
            temporal_allowed( peek() );
            take();
            return Formula::until( lhs, until() );
        }
        return lhs;
    }

    void temporal_allowed( const Token& t ) const
    {
        if ( !_opts.allow_temporal )
            throw ParseError( "temporal operator '" + t.text + "' in a propositional formula", t.pos );
    }

    Formula unary()
    {
        const auto& t = peek();
        switch ( t.kind )
        {
        case Tok::Not: take(); return Formula::negation( unary() );
        case Tok::Next:
            temporal_allowed( t );
            take();
            return Formula::next( unary() );
        case Tok::WeakNext:
            temporal_allowed( t );
            take();
            return Formula::weak_next( unary() );
        case Tok::Eventually:
            temporal_allowed( t );
            take();
            return Formula::eventually( unary() );
        case Tok::Globally:
            temporal_allowed( t );
            take();
            return Formula::globally( unary() );
        default: return primary();
        }
    }

    Formula primary()
    {
        auto t = take();
        switch ( t.kind )
        {
        case Tok::True: return Formula::top();
        case Tok::False: return Formula::bottom();
        case Tok::Ident:
        {
            if ( is_reserved_name( t.text ) && !_opts.allow_reserved )
                throw ParseError( "reserved identifier '" + t.text + "'", t.pos );
            auto idx = _alphabet.find( t.text );
            if ( !idx )
                throw ParseError( "unknown atom '" + t.text + "'", t.pos );
            return Formula::atom( t.text, *idx );
        }
        case Tok::LParen:
        {
            auto f = implication();
            expect( Tok::RParen, "')'" );
            return f;
        }
        case Tok::End: throw ParseError( "unexpected end of input", t.pos );
        default: throw ParseError( "unexpected '" + t.text + "'", t.pos );
        }
    }

public:
    Parser( std::string_view text, const Alphabet& alphabet, ParseOptions opts )
            : _toks{ Lexer( text ).run() }, _alphabet{ alphabet }, _opts{ opts }
    {
    }

    Formula run()
    {
        auto f = implication();
        if ( peek().kind != Tok::End )
            throw ParseError( "trailing input '" + peek().text + "'", peek().pos );
        return f;
    }
};

} // namespace detail

/// Parses the shared formula grammar. Atoms are validated against `alphabet`.
inline Formula parse_ltlf( std::string_view text, const Alphabet& alphabet, ParseOptions opts = {} )
{
    return detail::Parser( text, alphabet, opts ).run();
}

inline Formula parse_bool( std::string_view text, const Alphabet& alphabet, bool allow_reserved = false )
{
    return parse_ltlf( text, alphabet, ParseOptions{ false, allow_reserved } );
}

} // namespace cfs
