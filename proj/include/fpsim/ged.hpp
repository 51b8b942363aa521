#ifndef FPSIM_GED_HPP
#define FPSIM_GED_HPP

#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "fpsim/core.hpp"

namespace fpsim {

inline constexpr int kDefaultGedBudget = 12;
inline constexpr int kCanonicalKeyMaxNodes = 12;

enum class EditOpKind {
    NodeInsert,
    NodeDelete,
    NodeSubstitute,
    EdgeInsert,
    EdgeDelete,
    EdgeSubstitute,
};

/// One edit operation on the working copy of g1. Node ids refer to g1's ids;
/// inserted nodes get fresh ids above g1's range. Identity node
/// substitutions are kept (cost 0) so the node mapping is explicit in the
/// path; identity edge substitutions are omitted.
struct EditOp {
    EditOpKind kind = EditOpKind::NodeSubstitute;
    int a = -1; // node id, or edge endpoint
    int b = -1; // matched g2 node id (node ops) or second edge endpoint (edge ops)
    CategoryCode label = 0; // new room type for node substitute/insert
    Connectivity connectivity = Connectivity::Door; // for edge insert/substitute
    int cost = 0;

    std::string describe() const;
};

struct EditPath {
    std::vector<EditOp> ops;
    int total_cost = 0;
};

struct GedResult {
    int cost = 0;
    EditPath path;
};

/// Exact minimum edit cost between two attributed graphs under uniform cost
/// 1 per operation (identity substitutions are free). Node room types and
/// edge connectivity labels both count. A* over partial node assignments
/// with an admissible label/edge-count heuristic; deterministic tie-break.
/// Throws BudgetExceeded when either graph order exceeds `budget`.
GedResult ged_exact(const AccessGraph& g1, const AccessGraph& g2, int budget = kDefaultGedBudget);

/// Depth-synchronous beam search over the same state space. Returns a valid
/// (not necessarily minimal) edit path; an upper bound on the exact cost.
GedResult ged_beam(const AccessGraph& g1, const AccessGraph& g2, int beam_width);

/// The solver's admissible lower bound evaluated before any assignment
/// (label multiset difference plus edge count difference). Never exceeds the
/// exact distance.
int ged_lower_bound(const AccessGraph& g1, const AccessGraph& g2);

/// GED(g1,g2) / (|N1|·|N2|), clamped to [0,1]. The clamp fires only in the
/// degenerate regime where the product normalization falls short; each clamp
/// bumps a process-wide counter. Throws EmptyGraph on order-0 input.
double nged(int ged_value, int order1, int order2);

/// Convenience composition: exact GED when both orders fit the budget,
/// beam-search fallback above it. `approx_out`, when given, reports whether
/// the fallback was taken.
double nged(const AccessGraph& g1, const AccessGraph& g2, int budget = kDefaultGedBudget,
            int beam_width = 64, bool* approx_out = nullptr);

std::uint64_t nged_clamp_count();
void reset_nged_clamp_count();

/// Structure-preserving bijection test. attribute_aware additionally
/// requires room types and edge connectivity labels to match. Independent
/// backtracking matcher, not derived from canonical_key.
bool is_isomorphic(const AccessGraph& g1, const AccessGraph& g2, bool attribute_aware);

/// Canonical text key: equal keys iff is_isomorphic under the same flag.
/// Branch-and-bound over node orderings with invariant-based pruning.
/// Throws BudgetExceeded above kCanonicalKeyMaxNodes nodes.
std::string canonical_key(const AccessGraph& g, bool attribute_aware);

/// Replays an edit path against g1; used to check path validity.
AccessGraph apply_edit_path(const AccessGraph& g1, const EditPath& path);

/// Process-wide memo for pair GED results, keyed by canonical graph-pair
/// keys. Concurrent read/insert; duplicate inserts of identical values are
/// harmless (last write wins).
class GedMemo {
public:
    struct Entry {
        int ged = 0;
        bool approx = false;
    };

    static std::string pair_key(const std::string& key1, const std::string& key2);
    static std::string pair_key(const AccessGraph& g1, const AccessGraph& g2, bool attribute_aware = true);

    std::optional<Entry> find(const std::string& key) const;
    void insert(const std::string& key, Entry entry);
    std::size_t size() const;

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, Entry> entries_;
};

} // namespace fpsim

#endif
