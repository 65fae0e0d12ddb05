#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace shadowlab {

// Row-advance step on the alignment lattice: di >= 1 rows, dj >= 0 columns.
// A path matches every row (trajectory sample) to exactly one column (orbit
// time); macro steps (di > 1) realize bounded slope ratios dj/di and count
// the straight-segment cell of every intermediate row.
struct AlignStep {
    int di = 1;
    int dj = 1;
};

struct AlignOptions {
    // Step set for the chord-bounded searches. Ignored when free_jump is set.
    std::vector<AlignStep> steps;
    // Free-jump mode: from (i, j) the path may move to (i+1, j') for any
    // j' >= j inside the band — the unconstrained monotone alignment.
    bool free_jump = false;
    // Inclusive j-window per row; empty means the full [0, m) range.
    std::function<std::pair<int, int>(int)> band;
    // Pin the path to (0,0) -> (n-1, m-1); otherwise both endpoints range
    // over their allowed windows.
    bool fixed_endpoints = true;
};

struct AlignResult {
    double cost = 0.0;                      // bottleneck over matched cells
    std::vector<std::pair<int, int>> cells; // one matched cell per row
    std::vector<int> moves;                 // step indices / jump widths
    bool feasible = false;
};

// Minimax (bottleneck) monotone alignment: minimizes the largest matched-cell
// cost. Ties break to the lexicographically smallest move sequence (step
// indices in step order, or jump widths in free-jump mode), with earlier
// start columns preferred under free endpoints.
AlignResult bottleneck_align(int n, int m,
                             const std::function<double(int, int)>& cost,
                             const AlignOptions& opt);

// Exhaustive-path oracle with identical semantics, for small instances.
AlignResult bottleneck_align_bruteforce(int n, int m,
                                        const std::function<double(int, int)>& cost,
                                        const AlignOptions& opt);

} // namespace shadowlab
