#pragma once

#include "cfs/error.hpp"
#include "cfs/formula.hpp"
#include "cfs/sat.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace cfs
{

// ---------------------------------------------------------------------------
// Finite-trace semantics
// ---------------------------------------------------------------------------
//
// For t = <s_0 .. s_n> and position i:
//   p        iff s_i(p)
//   X f      iff i < n and t,i+1 |= f
//   WX f     iff i = n or t,i+1 |= f
//   f U g    iff exists j in [i,n] with t,j |= g and t,k |= f for all k in [i,j)
//   F f      iff true U f
//   G f      iff !F !f

namespace detail
{

class TraceEvaluator
{
    const Trace& _trace;
    std::unordered_map<const void*, std::vector<char>> _memo;

public:
    explicit TraceEvaluator( const Trace& t ) : _trace{ t } {}

    const std::vector<char>& values( const Formula& f )
    {
        if ( auto it = _memo.find( f.id() ); it != _memo.end() )
            return it->second;
        const auto n = _trace.size();
        std::vector<char> v( n, 0 );
        switch ( f.op() )
        {
        case Op::True: std::fill( v.begin(), v.end(), 1 ); break;
        case Op::False: break;
        case Op::Atom:
            for ( std::size_t i = 0; i < n; ++i )
            {
                if ( f.atom_index() < 0 || static_cast<std::size_t>( f.atom_index() ) >= _trace[ i ].size() )
                    throw StructuralError( "atom '" + f.atom_name() + "' is not covered by the trace" );
                v[ i ] = _trace[ i ][ static_cast<std::size_t>( f.atom_index() ) ] ? 1 : 0;
            }
            break;
        case Op::Not:
        {
            const auto& a = values( f.arg( 0 ) );
            for ( std::size_t i = 0; i < n; ++i )
                v[ i ] = a[ i ] ? 0 : 1;
            break;
        }
        case Op::And:
        case Op::Or:
        {
            bool is_and = f.op() == Op::And;
            std::fill( v.begin(), v.end(), is_and ? 1 : 0 );
            for ( const auto& g : f.args() )
            {
                const auto& a = values( g );
                for ( std::size_t i = 0; i < n; ++i )
                    v[ i ] = is_and ? ( v[ i ] && a[ i ] ) : ( v[ i ] || a[ i ] );
            }
            break;
        }
        case Op::Implies:
        {
            const auto& a = values( f.arg( 0 ) );
            const auto& b = values( f.arg( 1 ) );
            for ( std::size_t i = 0; i < n; ++i )
                v[ i ] = !a[ i ] || b[ i ];
            break;
        }
        case Op::Next:
        case Op::WeakNext:
        {
            const auto& a = values( f.arg( 0 ) );
            for ( std::size_t i = 0; i + 1 < n; ++i )
                v[ i ] = a[ i + 1 ];
            v[ n - 1 ] = f.op() == Op::WeakNext ? 1 : 0;
            break;
        }
        case Op::Until:
        {
            const auto& a = values( f.arg( 0 ) );
            const auto& b = values( f.arg( 1 ) );
            for ( std::size_t i = n; i-- > 0; )
                v[ i ] = b[ i ] || ( a[ i ] && i + 1 < n && v[ i + 1 ] );
            break;
        }
        case Op::Eventually:
        {
            const auto& a = values( f.arg( 0 ) );
            for ( std::size_t i = n; i-- > 0; )
                v[ i ] = a[ i ] || ( i + 1 < n && v[ i + 1 ] );
            break;
        }
        case Op::Globally:
        {
            const auto& a = values( f.arg( 0 ) );
            for ( std::size_t i = n; i-- > 0; )
                v[ i ] = a[ i ] && ( i + 1 == n || v[ i + 1 ] );
            break;
        }
        }
        return _memo.emplace( f.id(), std::move( v ) ).first->second;
    }
};

} // namespace detail

/// Truth of `f` at position 0 of a non-empty trace.
inline bool evaluate( const Trace& trace, const Formula& f )
{
    if ( trace.empty() )
        throw ContractError( "evaluate on an empty trace" );
    detail::TraceEvaluator ev( trace );
    return ev.values( f )[ 0 ] != 0;
}

// ---------------------------------------------------------------------------
// Negation normal form
// ---------------------------------------------------------------------------

inline Formula nnf( const Formula& f, bool negate = false )
{
    auto map = [ & ]( bool neg ) {
        std::vector<Formula> out;
        for ( const auto& g : f.args() )
            out.push_back( nnf( g, neg ) );
        return out;
    };
    switch ( f.op() )
    {
    case Op::True: return Formula::constant( !negate );
    case Op::False: return Formula::constant( negate );
    case Op::Atom: return negate ? Formula::negation( f ) : f;
    case Op::Not: return nnf( f.arg( 0 ), !negate );
    case Op::And: return negate ? Formula::disjunction( map( true ) ) : Formula::conjunction( map( false ) );
    case Op::Or: return negate ? Formula::conjunction( map( true ) ) : Formula::disjunction( map( false ) );
    case Op::Implies:
        return negate ? Formula::conjunction( { nnf( f.arg( 0 ) ), nnf( f.arg( 1 ), true ) } )
                      : Formula::disjunction( { nnf( f.arg( 0 ), true ), nnf( f.arg( 1 ) ) } );
    case Op::Next:
        return negate ? Formula::weak_next( nnf( f.arg( 0 ), true ) ) : Formula::next( nnf( f.arg( 0 ) ) );
    case Op::WeakNext:
        return negate ? Formula::next( nnf( f.arg( 0 ), true ) ) : Formula::weak_next( nnf( f.arg( 0 ) ) );
    case Op::Eventually:
        return negate ? Formula::globally( nnf( f.arg( 0 ), true ) ) : Formula::eventually( nnf( f.arg( 0 ) ) );
    case Op::Globally:
        return negate ? Formula::eventually( nnf( f.arg( 0 ), true ) ) : Formula::globally( nnf( f.arg( 0 ) ) );
    case Op::Until:
    {
        if ( !negate )
            return Formula::until( nnf( f.arg( 0 ) ), nnf( f.arg( 1 ) ) );
        // !(a U b) == (!b U (!a & !b)) | G !b
        auto na = nnf( f.arg( 0 ), true );
        auto nb = nnf( f.arg( 1 ), true );
        return Formula::disjunction(
                { Formula::until( nb, Formula::conjunction( { na, nb } ) ), Formula::globally( nb ) } );
    }
    }
    return f;
}

/// Negation-normal form of !f.
inline Formula negate_nnf( const Formula& f ) { return nnf( f, true ); }

// ---------------------------------------------------------------------------
// Bounded satisfiability
// ---------------------------------------------------------------------------

struct SatQuery
{
    Formula formula;
    std::size_t num_props = 0;
    std::size_t bound = 1; // maximum trace length, in states
    /// Per-proposition weights, total over the alphabet when present.
    std::optional<std::vector<std::uint32_t>> weights;
    /// Propositions on which no two positions may agree.
    std::optional<std::vector<int>> distinct_over;
    std::size_t literal_budget = 10'000'000;
};

struct SatStats
{
    std::uint64_t solver_calls = 0;
    std::uint64_t vars = 0;
    std::uint64_t clauses = 0;
    std::uint64_t conflicts = 0;

    SatStats& operator+=( const SatStats& o )
    {
        solver_calls += o.solver_calls;
        vars += o.vars;
        clauses += o.clauses;
        conflicts += o.conflicts;
        return *this;
    }
};

struct SatResult
{
    bool sat = false;
    Trace model;
    std::optional<std::uint64_t> weight;
    /// Set by min_weight_model when a weight limit was given and the minimum
    /// lies above it; `weight` is then the smallest weight seen, not the minimum.
    bool above_limit = false;
    SatStats stats;
};

inline std::uint64_t trace_weight( const Trace& t, const std::vector<std::uint32_t>& weights )
{
    std::uint64_t w = 0;
    for ( const auto& s : t )
        for ( std::size_t p = 0; p < weights.size(); ++p )
            if ( s[ p ] )
                w += weights[ p ];
    return w;
}

/// Tseitin unrolling of an LTLf formula over positions 0..B-1. Position i
/// exists in the trace iff alive_i; alive is downward closed and alive_0 holds.
/// Every subformula literal is defined by a full equivalence, computed backward
/// from the last position, so values are uniquely determined by the trace.
class BoundedEncoding
{
    using Lit = sat::Lit;

    sat::Backend& _solver;
    std::size_t _props;
    std::size_t _bound;
    std::size_t _literal_budget;
    std::size_t _literals = 0;
    std::size_t _clauses = 0;
    std::vector<std::vector<Lit>> _x;
    std::vector<Lit> _alive;
    Lit _true;
    std::unordered_map<const void*, std::vector<Lit>> _memo;

    void add( std::vector<Lit> clause )
    {
        _literals += clause.size();
        ++_clauses;
        if ( _literals > _literal_budget )
            throw ResourceError( "bounded encoding exceeds the literal budget of " + std::to_string( _literal_budget ) );
        _solver.add_clause( std::span<const Lit>( clause ) );
    }

    Lit define_and( const std::vector<Lit>& lits )
    {
        if ( lits.size() == 1 )
            return lits.front();
        Lit v = _solver.new_var();
        std::vector<Lit> big{ v };
        for ( auto l : lits )
        {
            add( { -v, l } );
            big.push_back( -l );
        }
        add( std::move( big ) );
        return v;
    }

    Lit define_or( const std::vector<Lit>& lits )
    {
        std::vector<Lit> neg;
        for ( auto l : lits )
            neg.push_back( -l );
        return -define_and( neg );
    }

    std::vector<Lit>& slots( const Formula& f )
    {
        auto& v = _memo[ f.id() ];
        if ( v.empty() )
            v.assign( _bound, 0 );
        return v;
    }

public:
    BoundedEncoding( sat::Backend& solver, std::size_t props, std::size_t bound, std::size_t literal_budget )
            : _solver{ solver }, _props{ props }, _bound{ bound }, _literal_budget{ literal_budget }
    {
        if ( bound == 0 )
            throw ContractError( "bound must be at least 1" );
        _true = _solver.new_var();
        add( { _true } );
        _x.resize( bound );
        for ( std::size_t i = 0; i < bound; ++i )
        {
            _alive.push_back( _solver.new_var() );
            for ( std::size_t p = 0; p < props; ++p )
                _x[ i ].push_back( _solver.new_var() );
        }
        add( { _alive[ 0 ] } );
        for ( std::size_t i = 0; i + 1 < bound; ++i )
            add( { -_alive[ i + 1 ], _alive[ i ] } );
    }

    [[nodiscard]] std::size_t bound() const { return _bound; }
    [[nodiscard]] std::size_t clause_count() const { return _clauses; }
    [[nodiscard]] Lit alive( std::size_t i ) const { return _alive[ i ]; }
    [[nodiscard]] Lit prop( std::size_t i, std::size_t p ) const { return _x[ i ][ p ]; }

    Lit lit( const Formula& f, std::size_t i )
    {
        switch ( f.op() )
        {
        case Op::True: return _true;
        case Op::False: return -_true;
        case Op::Atom:
            if ( f.atom_index() < 0 || static_cast<std::size_t>( f.atom_index() ) >= _props )
                throw StructuralError( "atom '" + f.atom_name() + "' is outside the query alphabet" );
            return _x[ i ][ static_cast<std::size_t>( f.atom_index() ) ];
        case Op::Not: return -lit( f.arg( 0 ), i );
        default: break;
        }
        if ( auto l = slots( f )[ i ]; l != 0 )
            return l;

        // Temporal chains depend on the next position; fill them in from the
        // end so recursion depth stays bounded by the formula size.
        if ( f.op() == Op::Until || f.op() == Op::Eventually || f.op() == Op::Globally )
            for ( std::size_t j = _bound; j-- > i + 1; )
                if ( slots( f )[ j ] == 0 )
                    lit( f, j );

        Lit out = 0;
        const bool last = i + 1 == _bound;
        switch ( f.op() )
        {
        case Op::And:
        case Op::Or:
        {
            std::vector<Lit> kids;
            for ( const auto& g : f.args() )
                kids.push_back( lit( g, i ) );
            out = f.op() == Op::And ? define_and( kids ) : define_or( kids );
            break;
        }
        case Op::Implies: out = define_or( { -lit( f.arg( 0 ), i ), lit( f.arg( 1 ), i ) } ); break;
        case Op::Next:
            out = last ? -_true : define_and( { _alive[ i + 1 ], lit( f.arg( 0 ), i + 1 ) } );
            break;
        case Op::WeakNext:
            out = last ? _true : define_or( { -_alive[ i + 1 ], lit( f.arg( 0 ), i + 1 ) } );
            break;
        case Op::Until:
        {
            auto b = lit( f.arg( 1 ), i );
            out = last ? b
                       : define_or( { b, define_and( { lit( f.arg( 0 ), i ), _alive[ i + 1 ], slots( f )[ i + 1 ] } ) } );
            break;
        }
        case Op::Eventually:
        {
            auto a = lit( f.arg( 0 ), i );
            out = last ? a : define_or( { a, define_and( { _alive[ i + 1 ], slots( f )[ i + 1 ] } ) } );
            break;
        }
        case Op::Globally:
        {
            auto a = lit( f.arg( 0 ), i );
            out = last ? a : define_and( { a, define_or( { -_alive[ i + 1 ], slots( f )[ i + 1 ] } ) } );
            break;
        }
        default: throw StructuralError( "unsupported operator in bounded encoding" );
        }
        slots( f )[ i ] = out;
        return out;
    }

    void assert_at_start( const Formula& f ) { add( { lit( f, 0 ) } ); }

    /// No two existing positions agree on all of `props`.
    void require_distinct( const std::vector<int>& props )
    {
        for ( std::size_t j = 1; j < _bound; ++j )
            for ( std::size_t i = 0; i < j; ++i )
            {
                std::vector<Lit> some_diff{ -_alive[ j ] };
                for ( int p : props )
                {
                    auto a = _x[ i ][ static_cast<std::size_t>( p ) ];
                    auto b = _x[ j ][ static_cast<std::size_t>( p ) ];
                    Lit d = _solver.new_var();
                    add( { -d, a, b } );
                    add( { -d, -a, -b } );
                    some_diff.push_back( d );
                }
                add( std::move( some_diff ) );
            }
    }

    /// One counter input per unit of weight of a true proposition at an
    /// existing position.
    std::vector<Lit> weight_inputs( const std::vector<std::uint32_t>& weights )
    {
        std::vector<Lit> inputs;
        for ( std::size_t p = 0; p < weights.size() && p < _props; ++p )
        {
            if ( weights[ p ] == 0 )
                continue;
            for ( std::size_t i = 0; i < _bound; ++i )
            {
                Lit y = _solver.new_var();
                add( { -_x[ i ][ p ], -_alive[ i ], y } );
                for ( std::uint32_t k = 0; k < weights[ p ]; ++k )
                    inputs.push_back( y );
            }
        }
        return inputs;
    }

    /// Totalizer over `inputs`, truncated to `cap` outputs: out[k] is forced
    /// whenever more than k inputs hold.
    std::vector<Lit> totalizer( const std::vector<Lit>& inputs, std::size_t cap )
    {
        if ( inputs.empty() || cap == 0 )
            return {};
        auto build = [ & ]( auto&& self, std::size_t lo, std::size_t hi ) -> std::vector<Lit> {
            if ( hi - lo == 1 )
                return { inputs[ lo ] };
            auto mid = lo + ( hi - lo ) / 2;
            auto a = self( self, lo, mid );
            auto b = self( self, mid, hi );
            auto m = std::min( a.size() + b.size(), cap );
            std::vector<Lit> out;
            for ( std::size_t k = 0; k < m; ++k )
                out.push_back( _solver.new_var() );
            for ( std::size_t i = 0; i < a.size() && i < m; ++i )
                add( { -a[ i ], out[ i ] } );
            for ( std::size_t j = 0; j < b.size() && j < m; ++j )
                add( { -b[ j ], out[ j ] } );
            for ( std::size_t i = 0; i < a.size(); ++i )
                for ( std::size_t j = 0; j < b.size() && i + j + 1 < m; ++j )
                    add( { -a[ i ], -b[ j ], out[ i + j + 1 ] } );
            return out;
        };
        return build( build, 0, inputs.size() );
    }

    [[nodiscard]] Trace decode() const
    {
        Trace t;
        for ( std::size_t i = 0; i < _bound && _solver.model_value_lit( _alive[ i ] ); ++i )
        {
            Assignment s( _props );
            for ( std::size_t p = 0; p < _props; ++p )
                s.set( p, _solver.model_value_lit( _x[ i ][ p ] ) );
            t.push_back( std::move( s ) );
        }
        return t;
    }
};

namespace detail
{

struct PreparedQuery
{
    std::unique_ptr<sat::CdclSolver> solver;
    std::unique_ptr<BoundedEncoding> enc;
};

inline PreparedQuery prepare( const SatQuery& q )
{
    if ( q.bound == 0 )
        throw ContractError( "bound must be at least 1" );
    PreparedQuery pq;
    pq.solver = std::make_unique<sat::CdclSolver>();
    pq.enc = std::make_unique<BoundedEncoding>( *pq.solver, q.num_props, q.bound, q.literal_budget );
    pq.enc->assert_at_start( q.formula );
    if ( q.distinct_over )
        pq.enc->require_distinct( *q.distinct_over );
    return pq;
}

inline void check_witness( const SatQuery& q, const Trace& t )
{
    if ( t.empty() || t.size() > q.bound || !evaluate( t, q.formula ) )
        throw std::logic_error( "bounded encoding produced a trace that does not satisfy the query" );
    if ( q.distinct_over )
        for ( std::size_t i = 0; i < t.size(); ++i )
            for ( std::size_t j = i + 1; j < t.size(); ++j )
            {
                bool same = true;
                for ( int p : *q.distinct_over )
                    same = same && t[ i ][ static_cast<std::size_t>( p ) ] == t[ j ][ static_cast<std::size_t>( p ) ];
                if ( same )
                    throw std::logic_error( "bounded encoding produced a repeated state" );
            }
}

inline SatStats stats_of( const PreparedQuery& pq, std::uint64_t calls )
{
    return { calls, static_cast<std::uint64_t>( pq.solver->num_vars() ), pq.enc->clause_count(), pq.solver->conflicts };
}

} // namespace detail

/// Is there a trace of at most `bound` states satisfying the query?
inline SatResult sat_bounded( const SatQuery& q )
{
    auto pq = detail::prepare( q );
    SatResult r;
    r.sat = pq.solver->solve() == sat::Status::Sat;
    r.stats = detail::stats_of( pq, 1 );
    if ( r.sat )
    {
        r.model = pq.enc->decode();
        detail::check_witness( q, r.model );
        if ( q.weights )
            r.weight = trace_weight( r.model, *q.weights );
    }
    return r;
}

/// Minimum-weight model: ascending weight budgets k = 0, 1, ... each decided
/// under a totalizer bound. With `weight_limit`, budgets above it are not
/// searched and `above_limit` reports that the minimum exceeds the limit.
inline SatResult min_weight_model( const SatQuery& q, std::optional<std::uint64_t> weight_limit = {} )
{
    if ( !q.weights )
        throw ContractError( "min_weight_model needs a weighting" );
    if ( q.weights->size() != q.num_props )
        throw ContractError( "weighting must cover the query alphabet" );
    auto pq = detail::prepare( q );
    SatResult r;
    std::uint64_t calls = 1;
    if ( pq.solver->solve() != sat::Status::Sat )
    {
        r.stats = detail::stats_of( pq, calls );
        return r;
    }
    auto first = pq.enc->decode();
    auto first_w = trace_weight( first, *q.weights );
    r.sat = true;
    r.model = first;
    r.weight = first_w;
    if ( first_w > 0 )
    {
        std::uint64_t k_max = first_w - 1;
        bool limited = weight_limit && *weight_limit < first_w;
        if ( limited )
            k_max = *weight_limit;
        auto inputs = pq.enc->weight_inputs( *q.weights );
        auto outs = pq.enc->totalizer( inputs, static_cast<std::size_t>( k_max + 1 ) );
        bool found = false;
        for ( std::uint64_t k = 0; k <= k_max && !found; ++k )
        {
            std::vector<sat::Lit> assume;
            if ( k < outs.size() )
                assume.push_back( -outs[ static_cast<std::size_t>( k ) ] );
            ++calls;
            if ( pq.solver->solve( assume ) == sat::Status::Sat )
            {
                r.model = pq.enc->decode();
                r.weight = trace_weight( r.model, *q.weights );
                found = true;
            }
        }
        if ( !found && limited )
            r.above_limit = true;
    }
    r.stats = detail::stats_of( pq, calls );
    detail::check_witness( q, r.model );
    return r;
}

/// Exports the bounded encoding of a query as DIMACS clauses.
inline sat::Cnf export_cnf( const SatQuery& q )
{
    sat::RecordingBackend rec( std::make_unique<sat::CdclSolver>() );
    BoundedEncoding enc( rec, q.num_props, q.bound, q.literal_budget );
    enc.assert_at_start( q.formula );
    if ( q.distinct_over )
        enc.require_distinct( *q.distinct_over );
    return rec.cnf();
}

} // namespace cfs
