#pragma once

// Brute-force reference implementations. Nothing here calls the main-path
// evaluators, encoders or solvers; formulas are evaluated by a direct
// position-wise reading of the semantics and problems are explored as
// explicit tables indexed by state codes.

#include "cfs/cfsearch.hpp"
#include "cfs/encode.hpp"
#include "cfs/error.hpp"
#include "cfs/formula.hpp"
#include "cfs/model.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace cfs::oracle
{

struct OracleGuard
{
    std::size_t max_fluents = 6;
    std::size_t max_states = 256;
    std::size_t max_trace_len = 8;
    std::uint64_t max_bfs_nodes = 1'000'000;
};

using Code = std::uint64_t;
using CodeTrace = std::vector<Code>;

namespace detail
{

inline bool bit( Code s, int atom, std::size_t n ) { return ( ( s >> ( n - 1 - static_cast<std::size_t>( atom ) ) ) & 1U ) != 0; }

inline bool holds_now( const Formula& f, Code s, std::size_t n )
{
    switch ( f.op() )
    {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom:
        if ( f.atom_index() < 0 || static_cast<std::size_t>( f.atom_index() ) >= n )
            throw StructuralError( "atom '" + f.atom_name() + "' outside the state" );
        return bit( s, f.atom_index(), n );
    case Op::Not: return !holds_now( f.arg( 0 ), s, n );
    case Op::And:
        for ( const auto& g : f.args() )
            if ( !holds_now( g, s, n ) )
                return false;
        return true;
    case Op::Or:
        for ( const auto& g : f.args() )
            if ( holds_now( g, s, n ) )
                return true;
        return false;
    case Op::Implies: return !holds_now( f.arg( 0 ), s, n ) || holds_now( f.arg( 1 ), s, n );
    default: throw StructuralError( "temporal operator in a state formula" );
    }
}

/// t, i |= f, read off the definitions with no memoisation.
inline bool holds( const Formula& f, const CodeTrace& t, std::size_t i, std::size_t n )
{
    const std::size_t last = t.size() - 1;
    switch ( f.op() )
    {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return holds_now( f, t[ i ], n );
    case Op::Not: return !holds( f.arg( 0 ), t, i, n );
    case Op::And:
        for ( const auto& g : f.args() )
            if ( !holds( g, t, i, n ) )
                return false;
        return true;
    case Op::Or:
        for ( const auto& g : f.args() )
            if ( holds( g, t, i, n ) )
                return true;
        return false;
    case Op::Implies: return !holds( f.arg( 0 ), t, i, n ) || holds( f.arg( 1 ), t, i, n );
    case Op::Next: return i < last && holds( f.arg( 0 ), t, i + 1, n );
    case Op::WeakNext: return i == last || holds( f.arg( 0 ), t, i + 1, n );
    case Op::Until:
        for ( std::size_t j = i; j <= last; ++j )
        {
            if ( holds( f.arg( 1 ), t, j, n ) )
                return true;
            if ( !holds( f.arg( 0 ), t, j, n ) )
                return false;
        }
        return false;
    case Op::Eventually:
        for ( std::size_t j = i; j <= last; ++j )
            if ( holds( f.arg( 0 ), t, j, n ) )
                return true;
        return false;
    case Op::Globally:
        for ( std::size_t j = i; j <= last; ++j )
            if ( !holds( f.arg( 0 ), t, j, n ) )
                return false;
        return true;
    }
    return false;
}

inline Code code_of( const Assignment& s )
{
    Code c = 0;
    for ( std::size_t i = 0; i < s.size(); ++i )
        c = ( c << 1U ) | ( s[ i ] ? 1U : 0U );
    return c;
}

inline Assignment assignment_of( Code c, std::size_t n )
{
    Assignment s( n );
    for ( std::size_t i = 0; i < n; ++i )
        s.set( i, bit( c, static_cast<int>( i ), n ) );
    return s;
}

/// A problem as explicit tables over state codes.
struct Table
{
    std::size_t n = 0;
    std::vector<std::string> names;
    std::vector<std::vector<bool>> pre;
    std::vector<Code> eff_mask;
    std::vector<Code> eff_value;
    Code init = 0;
    std::vector<bool> goal;

    [[nodiscard]] Code size() const { return Code{ 1 } << n; }
    [[nodiscard]] Code apply( std::size_t a, Code s ) const { return ( s & ~eff_mask[ a ] ) | eff_value[ a ]; }
};

inline std::vector<bool> models_table( const Formula& f, std::size_t n )
{
    std::vector<bool> out( std::size_t{ 1 } << n );
    for ( Code s = 0; s < out.size(); ++s )
        out[ s ] = holds_now( f, s, n );
    return out;
}

inline Table tabulate( const PlanningProblem& p, const OracleGuard& g )
{
    const auto n = p.num_fluents();
    if ( n > g.max_fluents )
        throw ResourceError( std::to_string( n ) + " fluents exceed the oracle guard of " +
                             std::to_string( g.max_fluents ) );
    Table t;
    t.n = n;
    for ( const auto& a : p.actions() )
    {
        t.names.push_back( a.name );
        t.pre.push_back( models_table( a.pre, n ) );
        Code mask = 0, value = 0;
        for ( const auto& e : a.eff )
        {
            Code b = Code{ 1 } << ( n - 1 - static_cast<std::size_t>( e.fluent ) );
            mask |= b;
            if ( e.value )
                value |= b;
        }
        t.eff_mask.push_back( mask );
        t.eff_value.push_back( value );
    }
    t.init = code_of( p.init() );
    t.goal = models_table( p.goal(), n );
    return t;
}

struct Admissibility
{
    const Plausibility* pl = nullptr;
    std::vector<std::optional<Formula>> act; // per action

    Admissibility( const Plausibility& plaus, const PlanningProblem& p ) : pl{ &plaus }, act( p.actions().size() )
    {
        for ( const auto& [ name, f ] : plaus.act )
            act.at( p.action_index( name ) ) = f;
    }

    [[nodiscard]] bool ok( const std::vector<std::size_t>& plan, const CodeTrace& t, std::size_t n ) const
    {
        if ( pl->init && !holds_now( *pl->init, t.front(), n ) )
            return false;
        if ( pl->goal && !holds_now( *pl->goal, t.back(), n ) )
            return false;
        for ( std::size_t i = 0; i < plan.size(); ++i )
            if ( act[ plan[ i ] ] && !holds_now( *act[ plan[ i ] ], t[ i ], n ) )
                return false;
        return true;
    }
};

/// Depth-first walk over executable sequences that never revisit a state.
/// `visit(plan, trace)` is called for every prefix, the empty one first;
/// returning false stops the walk.
inline void walk( const Table& t, const std::function<bool( const std::vector<std::size_t>&, const CodeTrace& )>& visit,
                  const OracleGuard& g )
{
    std::vector<char> on_path( static_cast<std::size_t>( t.size() ), 0 );
    std::vector<std::size_t> plan;
    CodeTrace trace{ t.init };
    on_path[ t.init ] = 1;
    std::function<bool()> rec = [ & ]() -> bool {
        if ( !visit( plan, trace ) )
            return false;
        if ( trace.size() > g.max_states )
            throw ResourceError( "oracle plan length exceeds the state guard" );
        const Code s = trace.back();
        for ( std::size_t a = 0; a < t.pre.size(); ++a )
        {
            if ( !t.pre[ a ][ s ] )
                continue;
            const Code nxt = t.apply( a, s );
            if ( on_path[ nxt ] )
                continue;
            on_path[ nxt ] = 1;
            plan.push_back( a );
            trace.push_back( nxt );
            bool go = rec();
            trace.pop_back();
            plan.pop_back();
            on_path[ nxt ] = 0;
            if ( !go )
                return false;
        }
        return true;
    };
    rec();
}

inline Plan to_plan( const Table& t, const std::vector<std::size_t>& plan )
{
    Plan p;
    for ( auto a : plan )
        p.actions.push_back( t.names[ a ] );
    return p;
}

struct Check
{
    bool ok = false;
    Plan witness;
    bool violated = false;
};

inline Check check_exists( const Table& t, const Formula& psi, const Admissibility& adm, const OracleGuard& g )
{
    Check c;
    if ( adm.pl->init && !holds_now( *adm.pl->init, t.init, t.n ) )
        return c;
    walk(
            t,
            [ & ]( const std::vector<std::size_t>& plan, const CodeTrace& tr ) {
                if ( t.goal[ tr.back() ] && holds( psi, tr, 0, t.n ) && adm.ok( plan, tr, t.n ) )
                {
                    c.ok = true;
                    c.witness = to_plan( t, plan );
                    return false;
                }
                return true;
            },
            g );
    return c;
}

/// ok: the plan set is non-empty and free of violations; witness is the first
/// plan, or the first violating plan when ok is false.
inline Check check_forall( const Table& t, const Formula& psi, const Admissibility& adm, const OracleGuard& g )
{
    Check c;
    bool any = false;
    bool violated = false;
    walk(
            t,
            [ & ]( const std::vector<std::size_t>& plan, const CodeTrace& tr ) {
                if ( !t.goal[ tr.back() ] )
                    return true;
                if ( !( holds( psi, tr, 0, t.n ) && adm.ok( plan, tr, t.n ) ) )
                {
                    violated = true;
                    c.witness = to_plan( t, plan );
                    return false;
                }
                if ( !any )
                    c.witness = to_plan( t, plan );
                any = true;
                return true;
            },
            g );
    c.ok = any && !violated;
    c.violated = violated;
    return c;
}

} // namespace detail

inline bool holds( const Formula& f, const Trace& trace )
{
    if ( trace.empty() )
        throw ContractError( "empty trace" );
    CodeTrace t;
    for ( const auto& s : trace )
        t.push_back( detail::code_of( s ) );
    return detail::holds( f, t, 0, trace.front().size() );
}

/// First loop-free valid plan whose trace satisfies the spec.
inline std::optional<Plan> brute_exists( const PlanningProblem& p, const Formula& psi, const Plausibility& pl = {},
                                         const OracleGuard& g = {} )
{
    auto t = detail::tabulate( p, g );
    auto c = detail::check_exists( t, psi, detail::Admissibility( pl, p ), g );
    if ( !c.ok )
        return std::nullopt;
    return c.witness;
}

inline bool brute_forall( const PlanningProblem& p, const Formula& psi, const Plausibility& pl = {},
                          const OracleGuard& g = {} )
{
    auto t = detail::tabulate( p, g );
    return detail::check_forall( t, psi, detail::Admissibility( pl, p ), g ).ok;
}

/// First loop-free valid plan violating the spec.
inline std::optional<Plan> brute_counterexample( const PlanningProblem& p, const Formula& psi,
                                                 const Plausibility& pl = {}, const OracleGuard& g = {} )
{
    auto t = detail::tabulate( p, g );
    auto c = detail::check_forall( t, psi, detail::Admissibility( pl, p ), g );
    if ( !c.violated )
        return std::nullopt;
    return c.witness;
}

/// Loop-free valid plans in depth-first declaration order.
inline std::vector<Plan> brute_plans( const PlanningProblem& p, const OracleGuard& g = {} )
{
    auto t = detail::tabulate( p, g );
    std::vector<Plan> out;
    detail::walk(
            t,
            [ & ]( const std::vector<std::size_t>& plan, const CodeTrace& tr ) {
                if ( t.goal[ tr.back() ] )
                    out.push_back( detail::to_plan( t, plan ) );
                return true;
            },
            g );
    return out;
}

inline std::set<Assignment> brute_reachable( const PlanningProblem& p, const OracleGuard& g = {} )
{
    auto t = detail::tabulate( p, g );
    std::vector<char> seen( static_cast<std::size_t>( t.size() ), 0 );
    std::deque<Code> queue{ t.init };
    seen[ t.init ] = 1;
    std::set<Assignment> out;
    while ( !queue.empty() )
    {
        auto s = queue.front();
        queue.pop_front();
        out.insert( detail::assignment_of( s, t.n ) );
        for ( std::size_t a = 0; a < t.pre.size(); ++a )
            if ( t.pre[ a ][ s ] )
            {
                auto nxt = t.apply( a, s );
                if ( !seen[ nxt ] )
                {
                    seen[ nxt ] = 1;
                    queue.push_back( nxt );
                }
            }
    }
    return out;
}

namespace detail
{

/// Calls visit on every trace of 1..bound states over n propositions, shorter
/// first and lexicographic within a length; stops when visit returns false.
inline void each_trace( std::size_t n, std::size_t bound, const OracleGuard& g,
                        const std::function<bool( const CodeTrace& )>& visit )
{
    if ( n > 4 || bound > g.max_trace_len )
        throw ResourceError( "trace enumeration exceeds the oracle guard" );
    const Code states = Code{ 1 } << n;
    for ( std::size_t len = 1; len <= bound; ++len )
    {
        CodeTrace t( len, 0 );
        for ( ;; )
        {
            if ( !visit( t ) )
                return;
            std::size_t i = len;
            while ( i > 0 && t[ i - 1 ] == states - 1 )
                t[ --i ] = 0;
            if ( i == 0 )
                break;
            ++t[ i - 1 ];
        }
    }
}

inline Trace to_trace( const CodeTrace& t, std::size_t n )
{
    Trace out;
    for ( auto c : t )
        out.push_back( assignment_of( c, n ) );
    return out;
}

} // namespace detail

inline std::optional<Trace> brute_sat( const Formula& psi, std::size_t num_props, std::size_t bound,
                                       const OracleGuard& g = {} )
{
    std::optional<Trace> out;
    detail::each_trace( num_props, bound, g, [ & ]( const CodeTrace& t ) {
        if ( !detail::holds( psi, t, 0, num_props ) )
            return true;
        out = detail::to_trace( t, num_props );
        return false;
    } );
    return out;
}

inline std::optional<std::pair<Trace, std::uint64_t>> brute_min_weight( const Formula& psi, std::size_t num_props,
                                                                       const std::vector<std::uint32_t>& weights,
                                                                       std::size_t bound, const OracleGuard& g = {} )
{
    std::optional<std::pair<Trace, std::uint64_t>> best;
    detail::each_trace( num_props, bound, g, [ & ]( const CodeTrace& t ) {
        if ( !detail::holds( psi, t, 0, num_props ) )
            return true;
        std::uint64_t w = 0;
        for ( auto s : t )
            for ( std::size_t p = 0; p < num_props; ++p )
                if ( detail::bit( s, static_cast<int>( p ), num_props ) )
                    w += weights.at( p );
        if ( !best || w < best->second )
            best = std::make_pair( detail::to_trace( t, num_props ), w );
        return true;
    } );
    return best;
}

// ---------------------------------------------------------------------------
// Breadth-first search over the counterfactual transition system
// ---------------------------------------------------------------------------

enum class Status
{
    Found,
    None,
    Unknown,
};

inline const char* to_string( Status s )
{
    switch ( s )
    {
    case Status::Found: return "found";
    case Status::None: return "none";
    case Status::Unknown: return "unknown";
    }
    return "?";
}

struct OracleResult
{
    Status status = Status::None;
    std::size_t cost = 0;
    std::optional<PlanningProblem> problem;
    Plan witness;
    /// Every problem within this many edits was checked.
    std::size_t explored_depth = 0;
    /// The whole reachable part of the transition system was checked.
    bool exhausted = false;
    std::uint64_t nodes = 0;
};

/// Answer for budget K derived from a search run with a larger (or no) cap.
/// Empty when the run cannot decide it.
inline std::optional<std::optional<std::size_t>> answer_for_budget( const OracleResult& r, std::size_t k )
{
    using Answer = std::optional<std::size_t>;
    if ( r.status == Status::Found )
        return r.cost <= k ? Answer{ r.cost } : Answer{};
    if ( r.exhausted || k <= r.explored_depth )
        return Answer{};
    return std::nullopt;
}

namespace detail
{

using Key = std::vector<std::uint64_t>;

struct KeyHash
{
    std::size_t operator()( const Key& k ) const
    {
        std::size_t h = 1469598103934665603ULL;
        for ( auto w : k )
            h = ( h ^ w ) * 1099511628211ULL;
        return h;
    }
};

inline Key pack( const std::vector<std::vector<bool>>& tables )
{
    Key k;
    for ( const auto& t : tables )
    {
        std::uint64_t w = 0;
        std::size_t b = 0;
        for ( bool v : t )
        {
            if ( v )
                w |= std::uint64_t{ 1 } << b;
            if ( ++b == 64 )
            {
                k.push_back( w );
                w = 0;
                b = 0;
            }
        }
        if ( b != 0 || t.empty() )
            k.push_back( w );
    }
    return k;
}

inline Formula model_set_formula( const std::vector<bool>& set, const Alphabet& fluents, std::size_t n )
{
    std::vector<Formula> terms;
    for ( Code s = 0; s < set.size(); ++s )
        if ( set[ s ] )
        {
            std::vector<Formula> lits;
            for ( std::size_t i = 0; i < n; ++i )
            {
                auto a = Formula::atom( fluents, static_cast<int>( i ) );
                lits.push_back( bit( s, static_cast<int>( i ), n ) ? a : Formula::negation( a ) );
            }
            terms.push_back( lits.size() == 1 ? lits.front() : Formula::conjunction( std::move( lits ) ) );
        }
    if ( terms.empty() )
        return Formula::bottom();
    return terms.size() == 1 ? terms.front() : Formula::disjunction( std::move( terms ) );
}

} // namespace detail

/// Minimal number of single edits (flip one initial fluent; add or remove one
/// goal model; add or remove one precondition model) to reach a problem
/// meeting the existential or universal condition. `depth_cap` bounds the
/// search; without it the search runs until success, exhaustion or budget.
inline OracleResult brute_csep( const PlanningProblem& p, const Formula& psi, ChangeKind kind, Quantifier q,
                                const Plausibility& pl = {}, std::optional<std::size_t> depth_cap = {},
                                const OracleGuard& g = {} )
{
    using namespace detail;
    const Table base = tabulate( p, g );
    const std::size_t n = base.n;
    const Admissibility adm( pl, p );

    // per final state: reached at all, reached by a good plan, reached by a bad one
    std::vector<bool> reach, good, bad;
    std::vector<Plan> good_plan, any_plan;
    if ( kind == ChangeKind::Goal )
    {
        reach.assign( base.size(), false );
        good.assign( base.size(), false );
        bad.assign( base.size(), false );
        good_plan.resize( base.size() );
        any_plan.resize( base.size() );
        walk(
                base,
                [ & ]( const std::vector<std::size_t>& plan, const CodeTrace& tr ) {
                    const Code s = tr.back();
                    if ( !reach[ s ] )
                        any_plan[ s ] = to_plan( base, plan );
                    reach[ s ] = true;
                    if ( holds( psi, tr, 0, n ) && adm.ok( plan, tr, n ) )
                    {
                        if ( !good[ s ] )
                            good_plan[ s ] = to_plan( base, plan );
                        good[ s ] = true;
                    }
                    else
                        bad[ s ] = true;
                    return true;
                },
                g );
    }

    auto check = [ & ]( const Table& t ) -> Check {
        if ( kind != ChangeKind::Goal )
            return q == Quantifier::Exists ? check_exists( t, psi, adm, g ) : check_forall( t, psi, adm, g );
        Check c;
        if ( q == Quantifier::Exists )
        {
            for ( Code s = 0; s < t.size(); ++s )
                if ( t.goal[ s ] && good[ s ] )
                    return { true, good_plan[ s ], false };
            return c;
        }
        std::optional<Code> first;
        for ( Code s = 0; s < t.size(); ++s )
        {
            if ( !t.goal[ s ] )
                continue;
            if ( bad[ s ] )
                return c;
            if ( reach[ s ] && !first )
                first = s;
        }
        if ( first )
            return { true, any_plan[ *first ], false };
        return c;
    };

    const std::size_t words = std::max<std::size_t>( 1, static_cast<std::size_t>( base.size() / 64 ) );
    auto toggle = [ & ]( Key k, std::size_t table, Code s ) {
        k[ table * words + s / 64 ] ^= std::uint64_t{ 1 } << ( s % 64 );
        return k;
    };
    auto get = [ & ]( const Key& k, std::size_t table, Code s ) {
        return ( ( k[ table * words + s / 64 ] >> ( s % 64 ) ) & 1U ) != 0;
    };

    Key root;
    switch ( kind )
    {
    case ChangeKind::Init: root = { base.init }; break;
    case ChangeKind::Goal: root = pack( { base.goal } ); break;
    case ChangeKind::Act: root = pack( base.pre ); break;
    }

    auto materialize = [ & ]( const Key& k ) {
        Table t = base;
        switch ( kind )
        {
        case ChangeKind::Init: t.init = k[ 0 ]; break;
        case ChangeKind::Goal:
            for ( Code s = 0; s < t.size(); ++s )
                t.goal[ s ] = get( k, 0, s );
            break;
        case ChangeKind::Act:
            for ( std::size_t a = 0; a < t.pre.size(); ++a )
                for ( Code s = 0; s < t.size(); ++s )
                    t.pre[ a ][ s ] = get( k, a, s );
            break;
        }
        return t;
    };

    auto neighbours = [ & ]( const Key& k, const std::function<bool( Key )>& emit ) {
        switch ( kind )
        {
        case ChangeKind::Init:
            for ( std::size_t f = 0; f < n; ++f )
                if ( !emit( { k[ 0 ] ^ ( Code{ 1 } << ( n - 1 - f ) ) } ) )
                    return;
            return;
        case ChangeKind::Goal:
            for ( Code s = 0; s < base.size(); ++s )
                if ( !emit( toggle( k, 0, s ) ) )
                    return;
            return;
        case ChangeKind::Act:
            for ( std::size_t a = 0; a < base.pre.size(); ++a )
                for ( Code s = 0; s < base.size(); ++s )
                    if ( !emit( toggle( k, a, s ) ) )
                        return;
            return;
        }
    };

    auto to_problem = [ & ]( const Table& t ) {
        switch ( kind )
        {
        case ChangeKind::Init: return p.with_init( assignment_of( t.init, n ) );
        case ChangeKind::Goal: return p.with_goal( model_set_formula( t.goal, p.fluents(), n ) );
        case ChangeKind::Act:
        {
            auto out = p;
            for ( std::size_t a = 0; a < t.pre.size(); ++a )
                if ( t.pre[ a ] != base.pre[ a ] )
                    out = out.with_precondition( a, model_set_formula( t.pre[ a ], p.fluents(), n ) );
            return out;
        }
        }
        return p;
    };

    OracleResult r;
    std::unordered_set<Key, KeyHash> seen{ root };
    std::vector<Key> level{ root };
    r.nodes = 1;
    for ( std::size_t depth = 0;; ++depth )
    {
        for ( const auto& k : level )
        {
            auto t = materialize( k );
            auto c = check( t );
            if ( c.ok )
            {
                r.status = Status::Found;
                r.cost = depth;
                r.problem = to_problem( t );
                r.witness = c.witness;
                r.explored_depth = depth;
                return r;
            }
        }
        r.explored_depth = depth;
        if ( depth_cap && depth >= *depth_cap )
        {
            r.status = Status::None;
            return r;
        }
        std::vector<Key> next;
        bool over = false;
        for ( const auto& k : level )
        {
            neighbours( k, [ & ]( Key u ) {
                if ( seen.count( u ) != 0 )
                    return true;
                if ( ++r.nodes > g.max_bfs_nodes )
                {
                    over = true;
                    return false;
                }
                seen.insert( u );
                next.push_back( std::move( u ) );
                return true;
            } );
            if ( over )
                break;
        }
        if ( over )
        {
            r.status = Status::Unknown;
            return r;
        }
        if ( next.empty() )
        {
            r.status = Status::None;
            r.exhausted = true;
            return r;
        }
        level = std::move( next );
    }
}

} // namespace cfs::oracle
