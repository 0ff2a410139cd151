#pragma once

#include "cfs/error.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace cfs::sat
{

/// DIMACS-style literal: +v or -v with v >= 1.
using Lit = int;

/// Plain clause list. Used for export and for the one-shot `decide_cnf`.
struct Cnf
{
    int num_vars = 0;
    std::vector<std::vector<Lit>> clauses;

    int new_var() { return ++num_vars; }

    void add( std::vector<Lit> clause )
    {
        for ( auto l : clause )
            num_vars = std::max( num_vars, std::abs( l ) );
        clauses.push_back( std::move( clause ) );
    }
};

inline void write_dimacs( std::ostream& os, const Cnf& cnf )
{
    os << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
    for ( const auto& c : cnf.clauses )
    {
        for ( auto l : c )
            os << l << ' ';
        os << "0\n";
    }
}

enum class Status
{
    Sat,
    Unsat,
    Unknown, // conflict budget exhausted
};

/// Incremental propositional procedure. Instances are single-threaded; use one
/// per concurrent query.
class Backend
{
public:
    virtual ~Backend() = default;

    virtual int new_var() = 0;
    [[nodiscard]] virtual int num_vars() const = 0;
    virtual void add_clause( std::span<const Lit> clause ) = 0;
    virtual Status solve( std::span<const Lit> assumptions ) = 0;
    /// Valid after `solve` returned Sat.
    [[nodiscard]] virtual bool model_value( int var ) const = 0;

    void add_clause( std::initializer_list<Lit> clause ) { add_clause( std::span<const Lit>( clause.begin(), clause.size() ) ); }
    Status solve() { return solve( std::span<const Lit>{} ); }
    [[nodiscard]] bool model_value_lit( Lit l ) const { return l > 0 ? model_value( l ) : !model_value( -l ); }
};

/// Conflict-driven clause learning with two watched literals, VSIDS, phase
/// saving, Luby restarts and learnt-clause reduction. Fully deterministic.
class CdclSolver final : public Backend
{
    using ILit = std::uint32_t; // 2 * var0 + sign
    static constexpr std::uint8_t l_true = 0, l_false = 1, l_undef = 2;
    static constexpr int no_reason = -1;

    struct Clause
    {
        std::vector<ILit> lits;
        bool learnt = false;
        bool deleted = false;
        double activity = 0;
    };

    struct Watcher
    {
        int cref;
        ILit blocker;
    };

    std::vector<Clause> _clauses;
    std::vector<std::vector<Watcher>> _watches;
    std::vector<std::uint8_t> _assign;
    std::vector<int> _level;
    std::vector<int> _reason;
    std::vector<std::uint8_t> _phase;
    std::vector<double> _activity;
    std::vector<std::uint8_t> _seen;
    std::vector<ILit> _trail;
    std::vector<std::size_t> _trail_lim;
    std::size_t _qhead = 0;
    bool _ok = true;

    // binary max-heap on activity
    std::vector<int> _heap;
    std::vector<int> _heap_pos;

    double _var_inc = 1.0;
    double _cla_inc = 1.0;
    std::size_t _num_learnts = 0;
    double _max_learnts = 0;
    std::vector<bool> _model;

public:
    std::optional<std::uint64_t> conflict_budget;
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;

    int new_var() override
    {
        int v = static_cast<int>( _assign.size() );
        _assign.push_back( l_undef );
        _level.push_back( 0 );
        _reason.push_back( no_reason );
        _phase.push_back( 1 ); // prefer false
        _activity.push_back( 0 );
        _seen.push_back( 0 );
        _watches.emplace_back();
        _watches.emplace_back();
        _heap_pos.push_back( -1 );
        heap_insert( v );
        return v + 1;
    }

    [[nodiscard]] int num_vars() const override { return static_cast<int>( _assign.size() ); }

    void add_clause( std::span<const Lit> clause ) override
    {
        if ( !_ok )
            return;
        std::vector<ILit> lits;
        lits.reserve( clause.size() );
        for ( auto l : clause )
        {
            if ( l == 0 || std::abs( l ) > num_vars() )
                throw ContractError( "literal out of range" );
            lits.push_back( to_ilit( l ) );
        }
        std::sort( lits.begin(), lits.end() );
        lits.erase( std::unique( lits.begin(), lits.end() ), lits.end() );
        std::vector<ILit> kept;
        for ( std::size_t i = 0; i < lits.size(); ++i )
        {
            if ( i + 1 < lits.size() && ( lits[ i ] ^ 1U ) == lits[ i + 1 ] )
                return; // tautology
            auto v = value( lits[ i ] );
            if ( v == l_true )
                return;
            if ( v == l_undef )
                kept.push_back( lits[ i ] );
        }
        if ( kept.empty() )
        {
            _ok = false;
            return;
        }
        if ( kept.size() == 1 )
        {
            enqueue( kept[ 0 ], no_reason );
            if ( propagate() != no_reason )
                _ok = false;
            return;
        }
        attach( std::move( kept ), false );
    }

    using Backend::add_clause;
    using Backend::solve;
    Status solve( std::span<const Lit> assumptions ) override
    {
        _model.clear();
        if ( !_ok )
            return Status::Unsat;
        std::vector<ILit> assume;
        for ( auto l : assumptions )
            assume.push_back( to_ilit( l ) );
        _max_learnts = std::max( 1000.0, static_cast<double>( _clauses.size() ) / 3.0 );
        std::uint64_t start_conflicts = conflicts;
        for ( std::uint64_t restart = 0;; ++restart )
        {
            auto limit = static_cast<std::uint64_t>( luby( 2.0, restart ) * 100 );
            auto st = search( limit, assume, start_conflicts );
            if ( st != l_undef )
            {
                if ( st == l_true )
                {
                    _model.resize( _assign.size() );
                    for ( std::size_t v = 0; v < _assign.size(); ++v )
                        _model[ v ] = _assign[ v ] == l_true;
                }
                cancel_until( 0 );
                return st == l_true ? Status::Sat : Status::Unsat;
            }
            if ( conflict_budget && conflicts - start_conflicts >= *conflict_budget )
            {
                cancel_until( 0 );
                return Status::Unknown;
            }
        }
    }

    [[nodiscard]] bool model_value( int var ) const override { return _model.at( static_cast<std::size_t>( var - 1 ) ); }

private:
    static ILit to_ilit( Lit l ) { return static_cast<ILit>( 2 * ( std::abs( l ) - 1 ) + ( l < 0 ? 1 : 0 ) ); }
    static std::size_t var_of( ILit l ) { return l >> 1U; }
    static bool sign_of( ILit l ) { return ( l & 1U ) != 0; }

    [[nodiscard]] std::uint8_t value( ILit l ) const
    {
        auto a = _assign[ var_of( l ) ];
        if ( a == l_undef )
            return l_undef;
        return static_cast<std::uint8_t>( a ^ static_cast<std::uint8_t>( sign_of( l ) ) );
    }

    [[nodiscard]] int decision_level() const { return static_cast<int>( _trail_lim.size() ); }

    void enqueue( ILit l, int reason )
    {
        auto v = var_of( l );
        _assign[ v ] = sign_of( l ) ? l_false : l_true;
        _level[ v ] = decision_level();
        _reason[ v ] = reason;
        _trail.push_back( l );
    }

    int attach( std::vector<ILit> lits, bool learnt )
    {
        int cref = static_cast<int>( _clauses.size() );
        _watches[ lits[ 0 ] ].push_back( { cref, lits[ 1 ] } );
        _watches[ lits[ 1 ] ].push_back( { cref, lits[ 0 ] } );
        _clauses.push_back( Clause{ std::move( lits ), learnt, false, 0 } );
        if ( learnt )
            ++_num_learnts;
        return cref;
    }

    /// Returns the conflicting clause or no_reason.
    int propagate()
    {
        int confl = no_reason;
        while ( _qhead < _trail.size() )
        {
            ILit p = _trail[ _qhead++ ];
            ILit false_lit = p ^ 1U;
            auto& ws = _watches[ false_lit ];
            ++propagations;
            std::size_t i = 0, j = 0;
            while ( i < ws.size() )
            {
                auto w = ws[ i++ ];
                if ( value( w.blocker ) == l_true )
                {
                    ws[ j++ ] = w;
                    continue;
                }
                auto& c = _clauses[ static_cast<std::size_t>( w.cref ) ];
                if ( c.deleted )
                    continue;
                auto& lits = c.lits;
                if ( lits[ 0 ] == false_lit )
                    std::swap( lits[ 0 ], lits[ 1 ] );
                ILit first = lits[ 0 ];
                if ( first != w.blocker && value( first ) == l_true )
                {
                    ws[ j++ ] = { w.cref, first };
                    continue;
                }
                bool moved = false;
                for ( std::size_t k = 2; k < lits.size(); ++k )
                {
                    if ( value( lits[ k ] ) != l_false )
                    {
                        std::swap( lits[ 1 ], lits[ k ] );
                        _watches[ lits[ 1 ] ].push_back( { w.cref, first } );
                        moved = true;
                        break;
                    }
                }
                if ( moved )
                    continue;
                ws[ j++ ] = { w.cref, first };
                if ( value( first ) == l_false )
                {
                    confl = w.cref;
                    _qhead = _trail.size();
                    while ( i < ws.size() )
                        ws[ j++ ] = ws[ i++ ];
                }
                else
                    enqueue( first, w.cref );
            }
            ws.resize( j );
        }
        return confl;
    }

    void cancel_until( int level )
    {
        if ( decision_level() <= level )
            return;
        for ( auto c = _trail.size(); c-- > _trail_lim[ static_cast<std::size_t>( level ) ]; )
        {
            auto v = var_of( _trail[ c ] );
            _phase[ v ] = sign_of( _trail[ c ] ) ? 1 : 0;
            _assign[ v ] = l_undef;
            _reason[ v ] = no_reason;
            if ( _heap_pos[ v ] < 0 )
                heap_insert( static_cast<int>( v ) );
        }
        _trail.resize( _trail_lim[ static_cast<std::size_t>( level ) ] );
        _trail_lim.resize( static_cast<std::size_t>( level ) );
        _qhead = _trail.size();
    }

    void bump_var( std::size_t v )
    {
        if ( ( _activity[ v ] += _var_inc ) > 1e100 )
        {
            for ( auto& a : _activity )
                a *= 1e-100;
            _var_inc *= 1e-100;
        }
        if ( _heap_pos[ v ] >= 0 )
            heap_up( _heap_pos[ v ] );
    }

    void bump_clause( Clause& c )
    {
        if ( ( c.activity += _cla_inc ) > 1e20 )
        {
            for ( auto& d : _clauses )
                if ( d.learnt )
                    d.activity *= 1e-20;
            _cla_inc *= 1e-20;
        }
    }

    // literal is implied by the others in the learnt clause through its reason
    bool redundant( ILit l ) const
    {
        auto r = _reason[ var_of( l ) ];
        if ( r == no_reason )
            return false;
        const auto& c = _clauses[ static_cast<std::size_t>( r ) ].lits;
        for ( std::size_t k = 1; k < c.size(); ++k )
        {
            auto v = var_of( c[ k ] );
            if ( !_seen[ v ] && _level[ v ] > 0 )
                return false;
        }
        return true;
    }

    void analyze( int confl, std::vector<ILit>& learnt, int& bt_level )
    {
        learnt.assign( 1, 0 );
        int path = 0;
        ILit p = 0;
        bool have_p = false;
        auto index = _trail.size();
        do
        {
            auto& c = _clauses[ static_cast<std::size_t>( confl ) ];
            if ( c.learnt )
                bump_clause( c );
            for ( std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k )
            {
                ILit q = c.lits[ k ];
                auto v = var_of( q );
                if ( !_seen[ v ] && _level[ v ] > 0 )
                {
                    _seen[ v ] = 1;
                    bump_var( v );
                    if ( _level[ v ] >= decision_level() )
                        ++path;
                    else
                        learnt.push_back( q );
                }
            }
            while ( !_seen[ var_of( _trail[ --index ] ) ] )
            {
            }
            p = _trail[ index ];
            have_p = true;
            confl = _reason[ var_of( p ) ];
            _seen[ var_of( p ) ] = 0;
            --path;
        } while ( path > 0 );
        learnt[ 0 ] = p ^ 1U;

        std::vector<ILit> all( learnt.begin(), learnt.end() );
        std::size_t j = 1;
        for ( std::size_t i = 1; i < learnt.size(); ++i )
            if ( !redundant( learnt[ i ] ) )
                learnt[ j++ ] = learnt[ i ];
        learnt.resize( j );
        for ( auto l : all )
            _seen[ var_of( l ) ] = 0;

        bt_level = 0;
        if ( learnt.size() > 1 )
        {
            std::size_t max_i = 1;
            for ( std::size_t i = 2; i < learnt.size(); ++i )
                if ( _level[ var_of( learnt[ i ] ) ] > _level[ var_of( learnt[ max_i ] ) ] )
                    max_i = i;
            std::swap( learnt[ 1 ], learnt[ max_i ] );
            bt_level = _level[ var_of( learnt[ 1 ] ) ];
        }
    }

    [[nodiscard]] bool locked( int cref ) const
    {
        const auto& c = _clauses[ static_cast<std::size_t>( cref ) ];
        auto v = var_of( c.lits[ 0 ] );
        return _reason[ v ] == cref && value( c.lits[ 0 ] ) == l_true;
    }

    void reduce_db()
    {
        std::vector<int> learnts;
        for ( std::size_t i = 0; i < _clauses.size(); ++i )
            if ( _clauses[ i ].learnt && !_clauses[ i ].deleted && _clauses[ i ].lits.size() > 2 )
                learnts.push_back( static_cast<int>( i ) );
        std::sort( learnts.begin(), learnts.end(), [ & ]( int a, int b ) {
            const auto& ca = _clauses[ static_cast<std::size_t>( a ) ];
            const auto& cb = _clauses[ static_cast<std::size_t>( b ) ];
            if ( ca.activity != cb.activity )
                return ca.activity < cb.activity;
            return a < b;
        } );
        for ( std::size_t i = 0; i < learnts.size() / 2; ++i )
        {
            auto cref = learnts[ i ];
            if ( locked( cref ) )
                continue;
            auto& c = _clauses[ static_cast<std::size_t>( cref ) ];
            c.deleted = true;
            c.lits.clear();
            c.lits.shrink_to_fit();
            --_num_learnts;
        }
        for ( auto& ws : _watches )
            ws.erase( std::remove_if( ws.begin(), ws.end(),
                                      [ & ]( const Watcher& w ) {
                                          return _clauses[ static_cast<std::size_t>( w.cref ) ].deleted;
                                      } ),
                      ws.end() );
    }

    std::uint8_t search( std::uint64_t conflict_limit, const std::vector<ILit>& assume, std::uint64_t start_conflicts )
    {
        std::uint64_t local = 0;
        std::vector<ILit> learnt;
        for ( ;; )
        {
            int confl = propagate();
            if ( confl != no_reason )
            {
                ++conflicts;
                ++local;
                if ( decision_level() == 0 )
                {
                    _ok = false;
                    return l_false;
                }
                int bt = 0;
                analyze( confl, learnt, bt );
                cancel_until( bt );
                if ( learnt.size() == 1 )
                    enqueue( learnt[ 0 ], no_reason );
                else
                {
                    int cref = attach( learnt, true );
                    bump_clause( _clauses[ static_cast<std::size_t>( cref ) ] );
                    enqueue( learnt[ 0 ], cref );
                }
                _var_inc *= 1.0 / 0.95;
                _cla_inc *= 1.0 / 0.999;
                continue;
            }
            if ( local >= conflict_limit ||
                 ( conflict_budget && conflicts - start_conflicts >= *conflict_budget ) )
            {
                cancel_until( 0 );
                return l_undef;
            }
            if ( static_cast<double>( _num_learnts ) - static_cast<double>( _trail.size() ) >= _max_learnts )
            {
                reduce_db();
                _max_learnts *= 1.1;
            }
            ILit next = 0;
            bool have_next = false;
            while ( static_cast<std::size_t>( decision_level() ) < assume.size() )
            {
                ILit a = assume[ static_cast<std::size_t>( decision_level() ) ];
                auto v = value( a );
                if ( v == l_true )
                    _trail_lim.push_back( _trail.size() );
                else if ( v == l_false )
                {
                    cancel_until( 0 );
                    return l_false;
                }
                else
                {
                    next = a;
                    have_next = true;
                    break;
                }
            }
            if ( !have_next )
            {
                int v = pick_branch_var();
                if ( v < 0 )
                    return l_true;
                next = static_cast<ILit>( 2 * v ) + _phase[ static_cast<std::size_t>( v ) ];
                ++decisions;
            }
            _trail_lim.push_back( _trail.size() );
            enqueue( next, no_reason );
        }
    }

    int pick_branch_var()
    {
        while ( !_heap.empty() )
        {
            int v = heap_pop();
            if ( _assign[ static_cast<std::size_t>( v ) ] == l_undef )
                return v;
        }
        return -1;
    }

    static double luby( double y, std::uint64_t x )
    {
        std::uint64_t size = 1;
        int seq = 0;
        while ( size < x + 1 )
        {
            ++seq;
            size = 2 * size + 1;
        }
        while ( size - 1 != x )
        {
            size = ( size - 1 ) >> 1U;
            --seq;
            x = x % size;
        }
        double r = 1;
        for ( int i = 0; i < seq; ++i )
            r *= y;
        return r;
    }

    // ---- heap ----
    [[nodiscard]] bool heap_less( int a, int b ) const
    {
        auto aa = _activity[ static_cast<std::size_t>( a ) ];
        auto ab = _activity[ static_cast<std::size_t>( b ) ];
        if ( aa != ab )
            return aa > ab;
        return a < b;
    }

    void heap_up( int i )
    {
        int v = _heap[ static_cast<std::size_t>( i ) ];
        while ( i > 0 )
        {
            int parent = ( i - 1 ) / 2;
            int pv = _heap[ static_cast<std::size_t>( parent ) ];
            if ( !heap_less( v, pv ) )
                break;
            _heap[ static_cast<std::size_t>( i ) ] = pv;
            _heap_pos[ static_cast<std::size_t>( pv ) ] = i;
            i = parent;
        }
        _heap[ static_cast<std::size_t>( i ) ] = v;
        _heap_pos[ static_cast<std::size_t>( v ) ] = i;
    }

    void heap_down( int i )
    {
        int n = static_cast<int>( _heap.size() );
        int v = _heap[ static_cast<std::size_t>( i ) ];
        for ( ;; )
        {
            int child = 2 * i + 1;
            if ( child >= n )
                break;
            if ( child + 1 < n &&
                 heap_less( _heap[ static_cast<std::size_t>( child + 1 ) ], _heap[ static_cast<std::size_t>( child ) ] ) )
                ++child;
            int cv = _heap[ static_cast<std::size_t>( child ) ];
            if ( !heap_less( cv, v ) )
                break;
            _heap[ static_cast<std::size_t>( i ) ] = cv;
            _heap_pos[ static_cast<std::size_t>( cv ) ] = i;
            i = child;
        }
        _heap[ static_cast<std::size_t>( i ) ] = v;
        _heap_pos[ static_cast<std::size_t>( v ) ] = i;
    }

    void heap_insert( int v )
    {
        _heap.push_back( v );
        heap_up( static_cast<int>( _heap.size() ) - 1 );
    }

    int heap_pop()
    {
        int top = _heap.front();
        _heap_pos[ static_cast<std::size_t>( top ) ] = -1;
        int last = _heap.back();
        _heap.pop_back();
        if ( !_heap.empty() )
        {
            _heap[ 0 ] = last;
            _heap_pos[ static_cast<std::size_t>( last ) ] = 0;
            heap_down( 0 );
        }
        return top;
    }
};

inline std::unique_ptr<Backend> make_default_backend() { return std::make_unique<CdclSolver>(); }

/// Satisfying assignment indexed by variable (index 0 unused), or nullopt.
inline std::optional<std::vector<bool>> decide_cnf( const Cnf& cnf, std::optional<std::uint64_t> conflict_budget = {} )
{
    CdclSolver s;
    s.conflict_budget = conflict_budget;
    for ( int v = 0; v < cnf.num_vars; ++v )
        s.new_var();
    for ( const auto& c : cnf.clauses )
        s.add_clause( std::span<const Lit>( c ) );
    auto st = s.solve();
    if ( st == Status::Unknown )
        throw ResourceError( "propositional conflict budget exhausted" );
    if ( st == Status::Unsat )
        return std::nullopt;
    std::vector<bool> model( static_cast<std::size_t>( cnf.num_vars ) + 1, false );
    for ( int v = 1; v <= cnf.num_vars; ++v )
        model[ static_cast<std::size_t>( v ) ] = s.model_value( v );
    return model;
}

/// Literal-recording backend wrapper so encodings can be exported as DIMACS.
class RecordingBackend final : public Backend
{
    std::unique_ptr<Backend> _inner;
    Cnf _cnf;

public:
    explicit RecordingBackend( std::unique_ptr<Backend> inner ) : _inner{ std::move( inner ) } {}

    int new_var() override
    {
        _cnf.new_var();
        return _inner->new_var();
    }
    [[nodiscard]] int num_vars() const override { return _inner->num_vars(); }
    void add_clause( std::span<const Lit> clause ) override
    {
        _cnf.add( std::vector<Lit>( clause.begin(), clause.end() ) );
        _inner->add_clause( clause );
    }
    using Backend::add_clause;
    using Backend::solve;
    Status solve( std::span<const Lit> assumptions ) override { return _inner->solve( assumptions ); }
    [[nodiscard]] bool model_value( int var ) const override { return _inner->model_value( var ); }
    [[nodiscard]] const Cnf& cnf() const { return _cnf; }
};

} // namespace cfs::sat
