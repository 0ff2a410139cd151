#pragma once

#include "cfs/encode.hpp"
#include "cfs/error.hpp"
#include "cfs/formula.hpp"
#include "cfs/ltlf.hpp"
#include "cfs/model.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cfs
{

enum class ChangeKind
{
    Init,
    Goal,
    Act,
};

enum class Quantifier
{
    Exists,
    ForAll,
};

inline const char* to_string( ChangeKind k )
{
    switch ( k )
    {
    case ChangeKind::Init: return "init";
    case ChangeKind::Goal: return "goal";
    case ChangeKind::Act: return "act";
    }
    return "?";
}

inline const char* to_string( Quantifier q ) { return q == Quantifier::Exists ? "exists" : "forall"; }

struct CounterfactualQuery
{
    PlanningProblem problem;
    Formula spec;
    ChangeKind relation = ChangeKind::Init;
    Quantifier quantifier = Quantifier::Exists;
    /// Inclusive edit budget; empty means minimize up to the configured cap.
    std::optional<std::size_t> budget;
    Plausibility plausibility;
};

/// One step of the change relation.
struct Edit
{
    ChangeKind kind = ChangeKind::Init;
    /// Init: the new value of `fluent`. Goal/Act: whether `state` is added.
    bool add = true;
    int fluent = -1;
    std::string action;
    Assignment state;

    friend bool operator==( const Edit&, const Edit& ) = default;
};

inline std::string state_string( const Assignment& s, const Alphabet& fluents )
{
    std::string out = "{";
    bool first = true;
    for ( std::size_t i = 0; i < s.size(); ++i )
        if ( s[ i ] )
        {
            out += first ? "" : ", ";
            out += fluents.name( static_cast<int>( i ) );
            first = false;
        }
    return out + "}";
}

inline std::string describe( const Edit& e, const Alphabet& fluents )
{
    switch ( e.kind )
    {
    case ChangeKind::Init:
        return "init: set " + fluents.name( e.fluent ) + ( e.add ? " := true" : " := false" );
    case ChangeKind::Goal:
        return std::string( "goal: " ) + ( e.add ? "add state " : "remove state " ) + state_string( e.state, fluents );
    case ChangeKind::Act:
        return "pre(" + e.action + "): " + ( e.add ? "add state " : "remove state " ) + state_string( e.state, fluents );
    }
    return {};
}

struct SearchConfig
{
    std::size_t minimize_cap = 8;
    /// Largest edit-set size the precondition universal search will enumerate.
    std::size_t max_edits = 4;
    /// Largest number of candidates tried at one edit distance.
    std::uint64_t max_candidates = 20'000;
    std::optional<std::size_t> bound_override;
    /// Loop-free bounds above this are clamped; results then carry `bound_capped`.
    std::size_t max_bound = 64;
    std::size_t literal_budget = 10'000'000;
    std::size_t max_cached_counterexamples = 1024;
    Limits limits;
};

struct SearchStats
{
    SatStats sat;
    std::uint64_t candidates = 0;
    std::uint64_t cache_hits = 0;
    std::size_t bound = 0;
    bool bound_capped = false;
};

struct CounterfactualResult
{
    bool found = false;
    std::optional<PlanningProblem> problem;
    std::size_t cost = 0;
    Plan witness;
    Trace witness_trace;
    /// ForAll results: every loop-free valid plan of `problem` satisfies the spec.
    bool universal = false;
    std::vector<Edit> diff;
    SearchStats stats;
};

struct CheckResult
{
    bool holds = false;
    /// Set when a ForAll check failed because of a violating plan (stored in `plan`).
    bool counterexample = false;
    Plan plan;
    Trace trace;
    SearchStats stats;
};

/// Number of assignments on which two goals disagree.
inline std::uint64_t goal_edit_distance( const Formula& g, const Formula& g2, std::size_t num_fluents,
                                         const Limits& limits = {} )
{
    auto diff = lor( { land( { g, lnot( g2 ) } ), land( { g2, lnot( g ) } ) } );
    return count_models( diff, num_fluents, limits );
}

namespace detail
{

inline std::uint64_t binomial( std::uint64_t n, std::uint64_t k )
{
    if ( k > n )
        return 0;
    k = std::min( k, n - k );
    std::uint64_t r = 1;
    for ( std::uint64_t i = 1; i <= k; ++i )
    {
        if ( r > std::numeric_limits<std::uint64_t>::max() / ( n - k + i ) )
            return std::numeric_limits<std::uint64_t>::max();
        r = r * ( n - k + i ) / i;
    }
    return r;
}

/// Calls fn on each k-subset of {0..n-1} in lexicographic order until it returns true.
template <typename Fn>
bool for_each_combination( std::size_t n, std::size_t k, Fn&& fn )
{
    if ( k > n )
        return false;
    std::vector<std::size_t> idx( k );
    for ( std::size_t i = 0; i < k; ++i )
        idx[ i ] = i;
    for ( ;; )
    {
        if ( fn( static_cast<const std::vector<std::size_t>&>( idx ) ) )
            return true;
        std::size_t i = k;
        while ( i > 0 && idx[ i - 1 ] == n - k + ( i - 1 ) )
            --i;
        if ( i == 0 )
            return false;
        ++idx[ i - 1 ];
        for ( std::size_t j = i; j < k; ++j )
            idx[ j ] = idx[ j - 1 ] + 1;
    }
}

struct Witness
{
    Plan plan;
    Trace trace; // over the working fluents, markers included
};

class Search
{
    const SearchConfig& _cfg;
    PlanningProblem _base;
    PlanningProblem _work;
    std::size_t _n;
    Formula _psi;
    Formula _neg;
    std::vector<int> _distinct;
    SearchStats _stats;

public:
    Search( const CounterfactualQuery& q, const SearchConfig& cfg )
            : _cfg{ cfg }, _base{ q.problem }, _work{ q.problem }, _n{ q.problem.num_fluents() }, _psi{ q.spec },
              _neg{ q.spec }
    {
        rebind( q.spec, q.problem.fluents() );
        if ( max_atom( q.spec ) >= static_cast<int>( _n ) )
            throw StructuralError( "specification mentions an undeclared fluent" );
        auto [ psi, work ] = inject_plausibility( q.spec, q.plausibility, q.problem );
        _psi = psi;
        _work = std::move( work );
        _neg = negate_nnf( _psi );
        for ( std::size_t i = 0; i < _n; ++i )
            _distinct.push_back( static_cast<int>( i ) );
    }

    CheckResult check( Quantifier q )
    {
        auto bound = bound_for( _work );
        CheckResult r;
        std::optional<Witness> wit;
        if ( q == Quantifier::Exists )
        {
            wit = exists_witness( _work, _work.goal(), bound );
            r.holds = wit.has_value();
        }
        else if ( ( wit = violation( _work, bound ) ) )
            r.counterexample = true;
        else
        {
            wit = short_plan( _work, _work.goal(), _psi, true, bound );
            r.holds = wit.has_value();
        }
        if ( wit )
        {
            r.plan = std::move( wit->plan );
            for ( const auto& s : wit->trace )
                r.trace.push_back( s.prefix( _n ) );
        }
        r.stats = _stats;
        return r;
    }

    CounterfactualResult run( ChangeKind kind, Quantifier q, std::size_t budget )
    {
        CounterfactualResult r;
        switch ( kind )
        {
        case ChangeKind::Init: r = init( q, budget ); break;
        case ChangeKind::Goal: r = q == Quantifier::Exists ? goal_exists( budget ) : goal_forall( budget ); break;
        case ChangeKind::Act: r = q == Quantifier::Exists ? act_exists( budget ) : act_forall( budget ); break;
        }
        r.stats = _stats;
        return r;
    }

private:
    std::set<Assignment> base_reachable( const PlanningProblem& w ) const
    {
        return reachable_states( strip_markers( w, _n ), _cfg.limits );
    }

    std::size_t bound_for( const PlanningProblem& w )
    {
        if ( _cfg.bound_override )
        {
            _stats.bound = *_cfg.bound_override;
            return *_cfg.bound_override;
        }
        std::size_t b = base_reachable( w ).size() + 1;
        if ( b > _cfg.max_bound )
        {
            _stats.bound_capped = true;
            b = _cfg.max_bound;
        }
        _stats.bound = std::max( _stats.bound, b );
        return b;
    }

    bool loop_free( const Trace& t ) const { return is_loop_free( t, _n ); }

    std::optional<Witness> find_plan( const PlanningProblem& w, const std::optional<Formula>& goal,
                                      const Formula& extra, bool distinct, std::size_t bound )
    {
        auto e = goal ? encode_with_goal( w, *goal ) : encode( w );
        SatQuery q;
        q.formula = land( { e.formula, rebind( extra, e.alphabet ) } );
        q.num_props = e.num_props();
        q.bound = bound;
        q.literal_budget = _cfg.literal_budget;
        auto r = sat_bounded( q );
        _stats.sat += r.stats;
        if ( !r.sat )
            return std::nullopt;
        auto [ plan, trace ] = extract_plan( e, r.model );
        if ( distinct && !loop_free( trace ) )
        {
            // distinctness makes refutations hard; only pay for it when the cheap model loops
            q.distinct_over = _distinct;
            r = sat_bounded( q );
            _stats.sat += r.stats;
            if ( !r.sat )
                return std::nullopt;
            std::tie( plan, trace ) = extract_plan( e, r.model );
        }
        return Witness{ std::move( plan ), std::move( trace ) };
    }

    /// Like find_plan, but returns a shortest witness: doubling bounds, then bisection.
    std::optional<Witness> short_plan( const PlanningProblem& w, const std::optional<Formula>& goal,
                                       const Formula& extra, bool distinct, std::size_t bound )
    {
        std::size_t lo = 1;
        std::optional<Witness> best;
        std::size_t b = 2;
        for ( ; b < bound; lo = b, b *= 2 )
            if ( ( best = find_plan( w, goal, extra, distinct, b ) ) )
                break;
        if ( !best )
        {
            b = bound;
            if ( !( best = find_plan( w, goal, extra, distinct, b ) ) )
                return best;
        }
        // shortest plan: bisect between the last failing and the first succeeding bound
        std::size_t hi = b;
        while ( hi - lo > 1 )
        {
            auto mid = lo + ( hi - lo ) / 2;
            if ( auto wit = find_plan( w, goal, extra, distinct, mid ) )
            {
                best = std::move( wit );
                hi = mid;
            }
            else
                lo = mid;
        }
        return best;
    }

    /// A loop-free plan satisfying the spec, trying the cheaper query first.
    std::optional<Witness> exists_witness( const PlanningProblem& w, const std::optional<Formula>& goal,
                                           std::size_t bound )
    {
        auto wit = short_plan( w, goal, _psi, false, bound );
        if ( wit && !loop_free( wit->trace ) )
            wit = short_plan( w, goal, _psi, true, bound );
        return wit;
    }

    /// A shortest loop-free valid plan violating the spec, asked one reachable goal state at a time.
    std::optional<Witness> violation( const PlanningProblem& w, std::size_t bound )
    {
        for ( const auto& s : base_reachable( w ) )
        {
            if ( !eval_formula( w.goal(), s ) )
                continue;
            if ( find_plan( w, minterm_of( s ), _neg, true, bound ) )
                return short_plan( w, minterm_of( s ), _neg, true, bound );
        }
        return std::nullopt;
    }

    /// A loop-free plan satisfying the spec when no loop-free plan violates it.
    std::optional<Witness> forall_witness( const PlanningProblem& w, std::size_t bound )
    {
        if ( violation( w, bound ) )
            return std::nullopt;
        return short_plan( w, w.goal(), _psi, true, bound );
    }

    CounterfactualResult found( const PlanningProblem& base2, std::size_t cost, Witness wit, std::vector<Edit> diff,
                                bool universal )
    {
        auto v = validate_plan( base2, wit.plan );
        if ( !v.valid() || !evaluate( wit.trace, _psi ) )
            throw std::logic_error( "counterfactual witness failed verification" );
        if ( universal && !loop_free( wit.trace ) )
            throw std::logic_error( "universal witness is not loop-free" );
        CounterfactualResult r;
        r.found = true;
        r.problem = base2;
        r.cost = cost;
        r.witness = std::move( wit.plan );
        for ( const auto& s : wit.trace )
            r.witness_trace.push_back( s.prefix( _n ) );
        r.universal = universal;
        r.diff = std::move( diff );
        return r;
    }

    void check_level( std::uint64_t count, std::size_t d ) const
    {
        if ( count > _cfg.max_candidates )
            throw ResourceError( std::to_string( count ) + " candidates at edit distance " + std::to_string( d ) +
                                 " exceed the limit of " + std::to_string( _cfg.max_candidates ) );
    }

    CounterfactualResult init( Quantifier q, std::size_t budget )
    {
        const std::size_t top = std::min( budget, _n );
        for ( std::size_t d = 0; d <= top; ++d )
        {
            check_level( binomial( _n, d ), d );
            std::optional<CounterfactualResult> out;
            for_each_combination( _n, d, [ & ]( const std::vector<std::size_t>& flips ) {
                ++_stats.candidates;
                auto winit = _work.init();
                auto binit = _base.init();
                for ( auto f : flips )
                {
                    winit.flip( f );
                    binit.flip( f );
                }
                auto w = _work.with_init( winit );
                auto bound = bound_for( w );
                auto wit = q == Quantifier::Exists ? exists_witness( w, w.goal(), bound ) : forall_witness( w, bound );
                if ( !wit )
                    return false;
                std::vector<Edit> diff;
                for ( auto f : flips )
                    diff.push_back( { ChangeKind::Init, binit[ f ], static_cast<int>( f ), {}, {} } );
                out = found( _base.with_init( binit ), d, std::move( *wit ), std::move( diff ),
                             q == Quantifier::ForAll );
                return true;
            } );
            if ( out )
                return *out;
        }
        return {};
    }

    Formula minterm_of( const Assignment& s ) const { return minterm( _base.fluents(), s, _n ); }

    CounterfactualResult goal_exists( std::size_t budget )
    {
        auto bound = bound_for( _work );
        if ( auto wit = exists_witness( _work, _work.goal(), bound ) )
            return found( _base, 0, std::move( *wit ), {}, false );
        if ( budget == 0 )
            return {};
        auto wit = exists_witness( _work, std::nullopt, bound );
        if ( !wit )
            return {};
        auto s = wit->trace.back().prefix( _n );
        auto g2 = lor( { _base.goal(), minterm_of( s ) } );
        return found( _base.with_goal( g2 ), 1, std::move( *wit ), { { ChangeKind::Goal, true, -1, {}, s } }, false );
    }

    CounterfactualResult goal_forall( std::size_t budget )
    {
        auto bound = bound_for( _work );
        // goal states reached by some violating plan; unreachable states never are
        std::vector<Assignment> bad;
        for ( const auto& s : base_reachable( _work ) )
        {
            if ( !eval_formula( _base.goal(), s ) )
                continue;
            ++_stats.candidates;
            if ( find_plan( _work, minterm_of( s ), _neg, true, bound ) )
            {
                bad.push_back( s );
                if ( bad.size() > budget )
                    return {};
            }
        }
        std::vector<Formula> parts{ _base.goal() };
        std::vector<Edit> diff;
        for ( const auto& s : bad )
        {
            parts.push_back( lnot( minterm_of( s ) ) );
            diff.push_back( { ChangeKind::Goal, false, -1, {}, s } );
        }
        auto g2 = land( parts );
        if ( auto wit = short_plan( _work, g2, _psi, true, bound ) )
            return found( _base.with_goal( g2 ), bad.size(), std::move( *wit ), diff, true );
        if ( bad.size() >= budget )
            return {};

        // add one final state that only spec-satisfying plans reach
        std::vector<Formula> rejected;
        const auto last = Formula::weak_next( Formula::bottom() );
        for ( ;; )
        {
            ++_stats.candidates;
            auto extra = land( { _psi, Formula::globally( Formula::implies( last, land( rejected ) ) ) } );
            auto wit = find_plan( _work, std::nullopt, extra, true, bound );
            if ( !wit )
                return {};
            auto s = wit->trace.back().prefix( _n );
            if ( find_plan( _work, minterm_of( s ), _neg, true, bound ) )
            {
                rejected.push_back( lnot( minterm_of( s ) ) );
                continue;
            }
            diff.push_back( { ChangeKind::Goal, true, -1, {}, s } );
            return found( _base.with_goal( lor( { g2, minterm_of( s ) } ) ), bad.size() + 1, std::move( *wit ), diff,
                          true );
        }
    }

    CounterfactualResult act_exists( std::size_t budget )
    {
        auto relaxed = relax( _work );
        auto e = encode_with_goal( relaxed.problem );
        SatQuery q;
        q.formula = land( { e.formula, rebind( _psi, e.alphabet ) } );
        q.num_props = e.num_props();
        q.bound = bound_for( relaxed.problem );
        q.weights = relaxed.proposition_weights();
        q.distinct_over = _distinct;
        q.literal_budget = _cfg.literal_budget;
        auto r = min_weight_model( q, budget );
        _stats.sat += r.stats;
        if ( !r.sat || r.above_limit )
            return {};
        auto [ plan, trace ] = extract_plan( e, r.model );

        const auto na = _base.actions().size();
        std::vector<std::vector<Assignment>> added( na );
        Witness wit;
        wit.trace = trace;
        std::vector<Edit> diff;
        for ( std::size_t i = 0; i < plan.size(); ++i )
        {
            auto idx = relaxed.problem.action_index( plan.actions[ i ] );
            auto a = relaxed.original[ idx ];
            wit.plan.actions.push_back( _base.action( a ).name );
            if ( !relaxed.is_relaxed( idx ) )
                continue;
            auto s = trace[ i ].prefix( _n );
            if ( eval_formula( _base.action( a ).pre, s ) )
                throw std::logic_error( "minimal relaxation used where the precondition already holds" );
            if ( std::find( added[ a ].begin(), added[ a ].end(), s ) != added[ a ].end() )
                throw std::logic_error( "relaxed action applied twice in one state" );
            added[ a ].push_back( s );
        }
        std::size_t cost = 0;
        auto base2 = _base;
        auto work2 = _work;
        for ( std::size_t a = 0; a < na; ++a )
        {
            if ( added[ a ].empty() )
                continue;
            std::sort( added[ a ].begin(), added[ a ].end() );
            std::vector<Formula> extra;
            for ( const auto& s : added[ a ] )
            {
                extra.push_back( minterm_of( s ) );
                diff.push_back( { ChangeKind::Act, true, -1, _base.action( a ).name, s } );
            }
            auto widen = [ & ]( const Formula& pre ) {
                auto all = extra;
                all.insert( all.begin(), pre );
                return lor( std::move( all ) );
            };
            base2 = base2.with_precondition( a, widen( _base.action( a ).pre ) );
            work2 = work2.with_precondition( a, widen( _work.action( a ).pre ) );
            cost += added[ a ].size();
        }
        if ( cost != r.weight.value_or( 0 ) )
            throw std::logic_error( "relaxation count differs from the model weight" );
        // the relaxed model's plan is arbitrary in length; report a shortest one
        if ( auto shorter = exists_witness( work2, work2.goal(), bound_for( work2 ) ) )
            if ( shorter->plan.size() < wit.plan.size() )
                wit = std::move( *shorter );
        return found( base2, cost, std::move( wit ), std::move( diff ), false );
    }

    struct Toggle
    {
        std::size_t action;
        Assignment state;
        bool in_pre;
    };

    struct Counterexample
    {
        std::vector<std::size_t> actions;
        Trace states; // base projection
    };

    CounterfactualResult act_forall( std::size_t budget )
    {
        const auto na = _base.actions().size();
        // every plan of every candidate is a plan of the precondition-free problem
        auto free = _work;
        for ( std::size_t a = 0; a < na; ++a )
            free = free.with_precondition( a, Formula::top() );
        if ( !find_plan( free, free.goal(), _psi, true, bound_for( free ) ) )
            return {};

        // states outside the precondition-free reachable set never occur in any plan
        std::vector<Toggle> toggles;
        auto states = base_reachable( free );
        for ( std::size_t a = 0; a < na; ++a )
            for ( const auto& s : states )
                toggles.push_back( { a, s, eval_formula( _base.action( a ).pre, s ) } );

        std::vector<Counterexample> cache;
        const std::size_t top = std::min( budget, toggles.size() );
        for ( std::size_t d = 0; d <= top; ++d )
        {
            if ( d > _cfg.max_edits )
                throw ResourceError( "edit distance " + std::to_string( d ) + " exceeds the edit limit of " +
                                     std::to_string( _cfg.max_edits ) );
            check_level( binomial( toggles.size(), d ), d );
            std::optional<CounterfactualResult> out;
            for_each_combination( toggles.size(), d, [ & ]( const std::vector<std::size_t>& pick ) {
                ++_stats.candidates;
                auto allowed = [ & ]( std::size_t a, const Assignment& s ) {
                    bool v = eval_formula( _base.action( a ).pre, s );
                    for ( auto t : pick )
                        if ( toggles[ t ].action == a && toggles[ t ].state == s )
                            v = !v;
                    return v;
                };
                for ( const auto& cex : cache )
                {
                    bool still_valid = true;
                    for ( std::size_t i = 0; i < cex.actions.size() && still_valid; ++i )
                        still_valid = allowed( cex.actions[ i ], cex.states[ i ] );
                    if ( still_valid )
                    {
                        ++_stats.cache_hits;
                        return false;
                    }
                }

                auto base2 = _base;
                auto work2 = _work;
                std::vector<Edit> diff;
                for ( std::size_t a = 0; a < na; ++a )
                {
                    std::vector<Formula> keep{ _base.action( a ).pre };
                    std::vector<Formula> extra;
                    for ( auto t : pick )
                    {
                        const auto& tg = toggles[ t ];
                        if ( tg.action != a )
                            continue;
                        diff.push_back( { ChangeKind::Act, !tg.in_pre, -1, _base.action( a ).name, tg.state } );
                        ( tg.in_pre ? keep : extra ).push_back( tg.in_pre ? lnot( minterm_of( tg.state ) )
                                                                          : minterm_of( tg.state ) );
                    }
                    if ( keep.size() == 1 && extra.empty() )
                        continue;
                    extra.insert( extra.begin(), land( std::move( keep ) ) );
                    auto pre = lor( std::move( extra ) );
                    base2 = base2.with_precondition( a, pre );
                    work2 = work2.with_precondition( a, pre );
                }
                auto bound = bound_for( work2 );
                if ( auto bad = violation( work2, bound ) )
                {
                    if ( cache.size() < _cfg.max_cached_counterexamples )
                    {
                        Counterexample cex;
                        for ( const auto& name : bad->plan.actions )
                            cex.actions.push_back( _base.action_index( name ) );
                        for ( const auto& s : bad->trace )
                            cex.states.push_back( s.prefix( _n ) );
                        cache.push_back( std::move( cex ) );
                    }
                    return false;
                }
                auto wit = short_plan( work2, work2.goal(), _psi, true, bound );
                if ( !wit )
                    return false;
                out = found( base2, d, std::move( *wit ), std::move( diff ), true );
                return true;
            } );
            if ( out )
                return *out;
        }
        return {};
    }
};

} // namespace detail

/// Decides the budgeted existence problem, or minimizes the edit cost when no
/// budget is given. Each procedure returns a cheapest counterfactual within
/// its budget, so minimizing runs once with the cap as budget.
inline CounterfactualResult csep( const CounterfactualQuery& q, const SearchConfig& cfg = {} )
{
    detail::Search s( q, cfg );
    return s.run( q.relation, q.quantifier, q.budget.value_or( cfg.minimize_cap ) );
}

/// Does some (every, and at least one) loop-free valid plan satisfy the spec?
inline CheckResult check_spec( const PlanningProblem& p, const Formula& spec, Quantifier q,
                               const Plausibility& pl = {}, const SearchConfig& cfg = {} )
{
    detail::Search s( { p, spec, ChangeKind::Init, q, 0, pl }, cfg );
    return s.check( q );
}

inline CounterfactualResult csep_init( CounterfactualQuery q, const SearchConfig& cfg = {} )
{
    q.relation = ChangeKind::Init;
    return csep( q, cfg );
}

inline CounterfactualResult csep_goal_exists( CounterfactualQuery q, const SearchConfig& cfg = {} )
{
    q.relation = ChangeKind::Goal;
    q.quantifier = Quantifier::Exists;
    return csep( q, cfg );
}

inline CounterfactualResult csep_goal_forall( CounterfactualQuery q, const SearchConfig& cfg = {} )
{
    q.relation = ChangeKind::Goal;
    q.quantifier = Quantifier::ForAll;
    return csep( q, cfg );
}

inline CounterfactualResult csep_act_exists( CounterfactualQuery q, const SearchConfig& cfg = {} )
{
    q.relation = ChangeKind::Act;
    q.quantifier = Quantifier::Exists;
    return csep( q, cfg );
}

inline CounterfactualResult csep_act_forall( CounterfactualQuery q, const SearchConfig& cfg = {} )
{
    q.relation = ChangeKind::Act;
    q.quantifier = Quantifier::ForAll;
    return csep( q, cfg );
}

} // namespace cfs
